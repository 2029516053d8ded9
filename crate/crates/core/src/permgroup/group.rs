use std::collections::{HashSet, VecDeque};
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::chain::StabChain;
use super::perm::Permutation;
use crate::combin::{binomial_u64, mask_of, points_of_mask, BinomTable};
use crate::error::{usage, Result};
use crate::gfspace::PointIndex;
use crate::guard::Guard;

/// Largest degree at which `is_t_transitive` accepts `t > 3`.
pub const TRANSITIVE_CHECK_DEGREE: u32 = 512;

/// The group generated by a list of permutations of `[0, v)`.
///
/// Order and stabilizer chain are computed on first use and cached; the cache
/// cells are write-once, so concurrent readers see a single result.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    v: u32,
    generators: Vec<Permutation>,
    guard: Guard,
    chain: OnceLock<Arc<StabChain>>,
}

impl FiniteGroup {
    pub fn new(v: u32, generators: Vec<Permutation>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.degree() != v) {
            return Err(usage(format!(
                "generator of degree {} in a group of degree {v}",
                g.degree()
            )));
        }
        Ok(FiniteGroup {
            v,
            generators,
            guard: Guard::default(),
            chain: OnceLock::new(),
        })
    }

    pub fn trivial(v: u32) -> Self {
        FiniteGroup::new(v, Vec::new()).unwrap()
    }

    pub fn with_guard(mut self, guard: Guard) -> Self {
        self.guard = guard;
        self
    }

    pub fn guard(&self) -> &Guard {
        &self.guard
    }

    pub fn degree(&self) -> u32 {
        self.v
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn chain(&self) -> Result<&StabChain> {
        if let Some(c) = self.chain.get() {
            return Ok(c);
        }
        let built = Arc::new(StabChain::build(self.v, &self.generators, &self.guard)?);
        let _ = self.chain.set(built);
        Ok(self.chain.get().unwrap())
    }

    /// Exact order of the generated group.
    pub fn order(&self) -> Result<BigUint> {
        Ok(self.chain()?.order())
    }

    pub fn contains(&self, g: &Permutation) -> Result<bool> {
        Ok(self.chain()?.contains(g))
    }

    /// The orbit of a point, sorted.
    pub fn orbit(&self, x: PointIndex) -> Result<Vec<PointIndex>> {
        if x >= self.v {
            return Err(usage(format!("point {x} out of range [0, {})", self.v)));
        }
        let mut seen = vec![false; self.v as usize];
        seen[x as usize] = true;
        let mut out = vec![x];
        let mut head = 0;
        while head < out.len() {
            let y = out[head];
            head += 1;
            for g in &self.generators {
                let z = g.apply(y);
                if !seen[z as usize] {
                    seen[z as usize] = true;
                    out.push(z);
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// The point orbits, each sorted, ordered by least element.
    pub fn orbits(&self) -> Vec<Vec<PointIndex>> {
        let mut seen = vec![false; self.v as usize];
        let mut out = Vec::new();
        for x in 0..self.v {
            if !seen[x as usize] {
                let o = self.orbit(x).unwrap();
                for &y in &o {
                    seen[y as usize] = true;
                }
                out.push(o);
            }
        }
        out
    }

    fn check_set(&self, set: &[PointIndex]) -> Result<()> {
        if set.windows(2).any(|w| w[0] >= w[1]) {
            return Err(usage("subset must be strictly increasing"));
        }
        if set.last().is_some_and(|&x| x >= self.v) {
            return Err(usage(format!("subset leaves [0, {})", self.v)));
        }
        Ok(())
    }

    /// Orbit of a `u64`-encoded subset (degree at most 64), in discovery order.
    pub(crate) fn set_orbit_masks(&self, seed: u64) -> Result<Vec<u64>> {
        self.set_orbit_masks_with(seed, |_| ())
    }

    /// As [`set_orbit_masks`](Self::set_orbit_masks), calling `on_new` on each
    /// member as it is discovered (the seed included).
    pub(crate) fn set_orbit_masks_with(
        &self,
        seed: u64,
        mut on_new: impl FnMut(u64),
    ) -> Result<Vec<u64>> {
        debug_assert!(self.v <= 64);
        on_new(seed);
        let images: Vec<&[PointIndex]> = self.generators.iter().map(|g| g.images()).collect();
        let mut seen = HashSet::from([seed]);
        let mut out = vec![seed];
        let mut head = 0;
        while head < out.len() {
            let m = out[head];
            head += 1;
            for img in &images {
                let mut r = 0u64;
                let mut bits = m;
                while bits != 0 {
                    r |= 1u64 << img[bits.trailing_zeros() as usize];
                    bits &= bits - 1;
                }
                if seen.insert(r) {
                    on_new(r);
                    out.push(r);
                    if out.len() as u64 > self.guard.max_states {
                        self.guard.check("subset orbit", Some(out.len() as u64))?;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Orbit of a sorted subset as sorted tuples, in discovery order.
    pub(crate) fn set_orbit_tuples(&self, seed: &[PointIndex]) -> Result<Vec<Vec<PointIndex>>> {
        self.set_orbit_tuples_with(seed, |_| ())
    }

    pub(crate) fn set_orbit_tuples_with(
        &self,
        seed: &[PointIndex],
        mut on_new: impl FnMut(&[PointIndex]),
    ) -> Result<Vec<Vec<PointIndex>>> {
        on_new(seed);
        let mut seen: HashSet<Vec<PointIndex>> = HashSet::from([seed.to_vec()]);
        let mut out = vec![seed.to_vec()];
        let mut head = 0;
        while head < out.len() {
            let s = out[head].clone();
            head += 1;
            for g in &self.generators {
                let r = g.apply_set(&s);
                if seen.insert(r.clone()) {
                    on_new(&r);
                    out.push(r);
                    if out.len() as u64 > self.guard.max_states {
                        self.guard.check("subset orbit", Some(out.len() as u64))?;
                    }
                }
            }
        }
        Ok(out)
    }

    /// The orbit of a subset on subsets of the same size, sorted lexicographically.
    pub fn orbit_of_set(&self, set: &[PointIndex]) -> Result<Vec<Vec<PointIndex>>> {
        self.check_set(set)?;
        let mut out = if self.v <= 64 {
            self.set_orbit_masks(mask_of(set))?
                .into_iter()
                .map(points_of_mask)
                .collect()
        } else {
            self.set_orbit_tuples(set)?
        };
        out.sort_unstable();
        Ok(out)
    }

    /// Order of the setwise stabilizer, `|G| / |orbit|`.
    pub fn stabilizer_order_of_set(&self, set: &[PointIndex]) -> Result<BigUint> {
        let orbit_len = self.orbit_of_set(set)?.len();
        Ok(self.order()? / orbit_len)
    }

    /// Whether the group has one orbit on ordered `t`-tuples of distinct points.
    pub fn is_t_transitive(&self, t: u32) -> Result<bool> {
        let v = self.v;
        if t > v {
            return Err(usage(format!("t = {t} exceeds the degree {v}")));
        }
        if t > 3 && v > TRANSITIVE_CHECK_DEGREE {
            return Err(usage(format!(
                "t-transitivity for t > 3 is only checked up to degree {TRANSITIVE_CHECK_DEGREE}"
            )));
        }
        if t == 0 {
            return Ok(true);
        }
        let target = (0..t as u64).try_fold(1u64, |acc, i| acc.checked_mul(v as u64 - i));
        self.guard.check("ordered tuple orbit", target)?;
        let target = target.unwrap();
        let encode = |tuple: &[PointIndex]| {
            tuple.iter().fold(0u64, |acc, &x| acc * v as u64 + x as u64)
        };
        let seed: Vec<PointIndex> = (0..t).collect();
        let mut seen: HashSet<u64> = HashSet::from([encode(&seed)]);
        let mut queue = VecDeque::from([seed]);
        let mut buf = vec![0; t as usize];
        while let Some(tuple) = queue.pop_front() {
            for g in &self.generators {
                for (b, &x) in buf.iter_mut().zip(&tuple) {
                    *b = g.apply(x);
                }
                if seen.insert(encode(&buf)) {
                    queue.push_back(buf.clone());
                }
            }
        }
        Ok(seen.len() as u64 == target)
    }

    /// Whether the group has one orbit on `t`-subsets.
    pub fn is_t_homogeneous(&self, t: u32) -> Result<bool> {
        let v = self.v;
        if t > v {
            return Err(usage(format!("t = {t} exceeds the degree {v}")));
        }
        if t == 0 {
            return Ok(true);
        }
        let target = binomial_u64(v as u64, t as u64);
        self.guard.check("unordered subset orbit", target)?;
        let target = target.unwrap();
        let table = BinomTable::new(v as usize, t as usize);
        let mut seen = vec![0u64; (target as usize).div_ceil(64)];
        let mut mark = |r: u64| {
            let (w, b) = ((r / 64) as usize, r % 64);
            let fresh = seen[w] >> b & 1 == 0;
            seen[w] |= 1 << b;
            fresh
        };
        let seed: Vec<PointIndex> = (0..t).collect();
        mark(table.rank(&seed));
        let mut count = 1u64;
        let mut queue = VecDeque::from([seed]);
        while let Some(s) = queue.pop_front() {
            for g in &self.generators {
                let img = g.apply_set(&s);
                if mark(table.rank(&img)) {
                    count += 1;
                    queue.push_back(img);
                }
            }
        }
        Ok(count == target)
    }

    /// Order as a `u64`, when it fits.
    pub fn order_u64(&self) -> Result<Option<u64>> {
        Ok(self.order()?.to_u64())
    }
}
