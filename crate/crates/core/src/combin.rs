//! Binomial coefficients and combinatorial ranking of sorted subsets.

use num_bigint::BigUint;
use num_traits::One;

/// `C(n, k)` with overflow detection.
pub fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) is exact at every step
        let num = (n - i) as u128;
        let g = num_integer::gcd(acc, (i + 1) as u128);
        let a = acc / g;
        let den = (i + 1) as u128 / g;
        // gcd(a, den) = 1, so den | num
        debug_assert_eq!(num % den, 0);
        acc = a.checked_mul(num / den)?;
    }
    Some(acc)
}

/// `C(n, k)` as a `u64`, `None` on overflow.
pub fn binomial_u64(n: u64, k: u64) -> Option<u64> {
    binomial_u128(n, k).and_then(|x| u64::try_from(x).ok())
}

/// Exact `C(n, k)`.
pub fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Table of `C(n, j)` for `n <= max_n`, `j <= max_j`, used for colex ranking.
#[derive(Debug, Clone)]
pub struct BinomTable {
    max_j: usize,
    rows: Vec<u64>,
}

impl BinomTable {
    /// Panics if some entry overflows `u64`; callers guard `C(max_n, max_j)` first.
    pub fn new(max_n: usize, max_j: usize) -> Self {
        let width = max_j + 1;
        let mut rows = vec![0u64; (max_n + 1) * width];
        for n in 0..=max_n {
            rows[n * width] = 1;
            for j in 1..=max_j.min(n) {
                let v = rows[(n - 1) * width + j - 1]
                    .checked_add(if j < n { rows[(n - 1) * width + j] } else { 0 })
                    .expect("binomial table overflow");
                rows[n * width + j] = v;
            }
        }
        BinomTable { max_j, rows }
    }

    #[inline]
    pub fn get(&self, n: usize, j: usize) -> u64 {
        if j > self.max_j {
            panic!("binomial table queried past its width");
        }
        self.rows[n * (self.max_j + 1) + j]
    }

    /// Colex rank of a strictly increasing tuple.
    #[inline]
    pub fn rank(&self, subset: &[u32]) -> u64 {
        subset
            .iter()
            .enumerate()
            .map(|(i, &x)| self.get(x as usize, i + 1))
            .sum()
    }

    /// Colex rank of the subset encoded by the set bits of `mask`.
    #[inline]
    pub fn rank_mask(&self, mut mask: u64) -> u64 {
        let mut r = 0;
        let mut i = 1;
        while mask != 0 {
            let x = mask.trailing_zeros() as usize;
            r += self.get(x, i);
            i += 1;
            mask &= mask - 1;
        }
        r
    }

    /// Inverse of [`rank`](Self::rank) for subsets of size `k` of `[0, n)`.
    pub fn unrank(&self, mut rank: u64, n: usize, k: usize) -> Vec<u32> {
        let mut out = vec![0u32; k];
        let mut hi = n;
        for i in (1..=k).rev() {
            // largest x < hi with C(x, i) <= rank
            let mut x = hi - 1;
            while self.get(x, i) > rank {
                x -= 1;
            }
            out[i - 1] = x as u32;
            rank -= self.get(x, i);
            hi = x;
        }
        out
    }
}

/// Advances a strictly increasing tuple over `[0, n)` to its lexicographic successor.
/// Returns `false` after the last combination.
pub fn next_combination(c: &mut [u32], n: u32) -> bool {
    let k = c.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - (k - i) as u32 {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Calls `f` on every `s`-subset of `items` (items ascending gives ascending subsets).
pub fn for_each_subset<F: FnMut(&[u32])>(items: &[u32], s: usize, mut f: F) {
    let n = items.len();
    if s > n {
        return;
    }
    let mut idx: Vec<u32> = (0..s as u32).collect();
    let mut buf = vec![0u32; s];
    loop {
        for (b, &i) in buf.iter_mut().zip(&idx) {
            *b = items[i as usize];
        }
        f(&buf);
        if !next_combination(&mut idx, n as u32) {
            break;
        }
    }
}

pub fn mask_of(subset: &[u32]) -> u64 {
    subset.iter().fold(0u64, |m, &x| m | (1u64 << x))
}

pub fn points_of_mask(mut mask: u64) -> Vec<u32> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        out.push(mask.trailing_zeros());
        mask &= mask - 1;
    }
    out
}
