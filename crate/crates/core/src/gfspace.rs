//! Finite fields GF(p^a) in a polynomial basis, and the point geometry of V(d, q).
//!
//! Points of `V(d, q)` are coded as integers: the coordinate vector is read as a
//! base-`q` number with coordinate 0 least significant, and each field element is
//! ranked by its coefficient vector read as a base-`p` number (coefficient 0 least
//! significant). With this coding `e_1 = 1`, `e_2 = q`, and over GF(2) vector
//! addition is XOR.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{config, usage, Error, Result};

/// Field sizes above this are refused.
pub const MAX_FIELD_SIZE: u32 = 1 << 16;
/// Point counts above this are refused.
pub const MAX_POINTS: u32 = 1 << 24;

/// An integer in `[0, v)` naming a point of `V(d, q)`.
pub type PointIndex = u32;

/// Conway polynomials shipped as default moduli, coefficients low to high.
const CONWAY: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
];

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Returns `(p, d)` with `n = p^d`, or `None` if `n` is not a prime power.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    if p * p > n {
        return Some((n, 1));
    }
    let (mut m, mut d) = (n, 0);
    while m % p == 0 {
        m /= p;
        d += 1;
    }
    (m == 1).then_some((p, d))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// An element of GF(p^a): `a` coefficients in `[0, p)`, constant term first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub coeffs: Vec<u32>,
}

impl FieldElement {
    pub fn new(coeffs: Vec<u32>) -> Self {
        FieldElement { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

#[derive(Debug)]
struct Tables {
    // exp[i] = g^i for the primitive element g, as ranks
    exp: Vec<u32>,
    log: Vec<u32>,
    // digit-wise addition table, only for q <= 256 and p > 2
    add: Option<Vec<u32>>,
}

/// The field GF(p^a) defined by a monic irreducible modulus.
#[derive(Clone)]
pub struct FieldSpec {
    p: u32,
    a: u32,
    q: u32,
    modulus: Vec<u32>,
    tables: Arc<Tables>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.a == other.a && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("a", &self.a)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl FieldSpec {
    /// GF(p^a) with the default modulus: a Conway polynomial where one is shipped,
    /// otherwise the least monic primitive polynomial of degree `a`.
    pub fn new(p: u32, a: u32) -> Result<Self> {
        Self::check_size(p, a)?;
        let modulus = if a == 1 {
            vec![0, 1]
        } else if let Some((_, _, m)) = CONWAY.iter().find(|(pp, aa, _)| *pp == p && *aa == a) {
            m.to_vec()
        } else {
            least_primitive_modulus(p, a)
        };
        Self::with_modulus(p, a, modulus)
    }

    /// GF(p^a) with an explicit monic modulus of degree `a`, coefficients low to high.
    pub fn with_modulus(p: u32, a: u32, modulus: Vec<u32>) -> Result<Self> {
        Self::check_size(p, a)?;
        if modulus.len() != a as usize + 1 || modulus[a as usize] != 1 {
            return Err(config(format!(
                "modulus must be monic of degree {a}, got coefficients {modulus:?}"
            )));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(config(format!("modulus coefficients must lie in [0, {p})")));
        }
        if !is_irreducible(p, &modulus) {
            return Err(config(format!("modulus {modulus:?} is reducible over GF({p})")));
        }
        let q = p.pow(a);
        let mut f = FieldSpec {
            p,
            a,
            q,
            modulus,
            tables: Arc::new(Tables {
                exp: Vec::new(),
                log: Vec::new(),
                add: None,
            }),
        };
        f.tables = Arc::new(f.build_tables());
        Ok(f)
    }

    fn check_size(p: u32, a: u32) -> Result<()> {
        if !is_prime(p as u64) {
            return Err(config(format!("{p} is not prime")));
        }
        if a == 0 {
            return Err(config("field exponent must be positive"));
        }
        match (p as u64).checked_pow(a) {
            Some(q) if q <= MAX_FIELD_SIZE as u64 => Ok(()),
            _ => Err(config(format!(
                "GF({p}^{a}) exceeds the field size cap {MAX_FIELD_SIZE}"
            ))),
        }
    }

    fn build_tables(&self) -> Tables {
        let q = self.q;
        let g = self.find_primitive();
        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![0u32; q as usize];
        let gen = self.element(g);
        let mut cur = self.one();
        for i in 0..q - 1 {
            let r = self.rank(&cur);
            exp.push(r);
            log[r as usize] = i;
            cur = self.poly_mul(&cur, &gen);
        }
        let add = (self.p > 2 && q <= 256).then(|| {
            let mut t = vec![0u32; (q * q) as usize];
            for x in 0..q {
                for y in 0..q {
                    t[(x * q + y) as usize] = self.add_digits(x, y);
                }
            }
            t
        });
        Tables { exp, log, add }
    }

    fn find_primitive(&self) -> u32 {
        let order = (self.q - 1) as u64;
        let factors = prime_factors(order);
        let one = self.one();
        (1..self.q)
            .find(|&g| {
                let e = self.element(g);
                factors
                    .iter()
                    .all(|&r| self.poly_pow(&e, order / r) != one)
            })
            .expect("multiplicative group of a finite field is cyclic")
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::new(vec![0; self.a as usize])
    }

    pub fn one(&self) -> FieldElement {
        let mut c = vec![0; self.a as usize];
        c[0] = 1;
        FieldElement::new(c)
    }

    /// The element of the given rank (base-`p` reading of its coefficients).
    pub fn element(&self, mut rank: u32) -> FieldElement {
        let mut c = Vec::with_capacity(self.a as usize);
        for _ in 0..self.a {
            c.push(rank % self.p);
            rank /= self.p;
        }
        FieldElement::new(c)
    }

    pub fn rank(&self, x: &FieldElement) -> u32 {
        x.coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn validate(&self, x: &FieldElement) -> Result<()> {
        if x.coeffs.len() != self.a as usize || x.coeffs.iter().any(|&c| c >= self.p) {
            return Err(usage(format!(
                "element {:?} does not belong to GF({}^{})",
                x.coeffs, self.p, self.a
            )));
        }
        Ok(())
    }

    pub fn add(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement> {
        self.validate(x)?;
        self.validate(y)?;
        Ok(FieldElement::new(
            x.coeffs
                .iter()
                .zip(&y.coeffs)
                .map(|(&a, &b)| (a + b) % self.p)
                .collect(),
        ))
    }

    pub fn neg(&self, x: &FieldElement) -> Result<FieldElement> {
        self.validate(x)?;
        Ok(FieldElement::new(
            x.coeffs.iter().map(|&c| (self.p - c) % self.p).collect(),
        ))
    }

    /// Polynomial product reduced by the modulus.
    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement> {
        self.validate(x)?;
        self.validate(y)?;
        Ok(self.poly_mul(x, y))
    }

    /// Multiplicative inverse, by `x^(q-2)`.
    pub fn inv(&self, x: &FieldElement) -> Result<FieldElement> {
        self.validate(x)?;
        if x.is_zero() {
            return Err(Error::Domain("zero has no multiplicative inverse".into()));
        }
        Ok(self.poly_pow(x, (self.q - 2) as u64))
    }

    fn poly_mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let a = self.a as usize;
        let p = self.p as u64;
        let mut prod = vec![0u64; 2 * a - 1];
        for (i, &xi) in x.coeffs.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + xi as u64 * yj as u64) % p;
            }
        }
        // reduce from the top using x^a = -(m_0 + ... + m_{a-1} x^{a-1})
        for top in (a..2 * a - 1).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for (i, &m) in self.modulus[..a].iter().enumerate() {
                let idx = top - a + i;
                prod[idx] = (prod[idx] + (p - c) * m as u64) % p;
            }
        }
        FieldElement::new(prod[..a].iter().map(|&c| c as u32).collect())
    }

    fn poly_pow(&self, x: &FieldElement, mut e: u64) -> FieldElement {
        let mut base = x.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.poly_mul(&acc, &base);
            }
            base = self.poly_mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn add_digits(&self, mut x: u32, mut y: u32) -> u32 {
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.a {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        out
    }

    // Rank-level arithmetic backed by the log tables. These are the hot-path
    // counterparts of the polynomial operations above.

    /// Rank of a fixed primitive element.
    pub fn primitive(&self) -> u32 {
        self.tables.exp[1.min(self.tables.exp.len() - 1)]
    }

    #[inline]
    pub fn add_r(&self, x: u32, y: u32) -> u32 {
        if self.p == 2 {
            x ^ y
        } else if let Some(t) = &self.tables.add {
            t[(x * self.q + y) as usize]
        } else {
            self.add_digits(x, y)
        }
    }

    #[inline]
    pub fn neg_r(&self, x: u32) -> u32 {
        if self.p == 2 {
            return x;
        }
        let (mut x, mut out, mut place) = (x, 0, 1);
        for _ in 0..self.a {
            out += ((self.p - x % self.p) % self.p) * place;
            x /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub fn sub_r(&self, x: u32, y: u32) -> u32 {
        self.add_r(x, self.neg_r(y))
    }

    #[inline]
    pub fn mul_r(&self, x: u32, y: u32) -> u32 {
        if x == 0 || y == 0 {
            return 0;
        }
        let n = self.q - 1;
        let t = &self.tables;
        t.exp[((t.log[x as usize] as u64 + t.log[y as usize] as u64) % n as u64) as usize]
    }

    pub fn inv_r(&self, x: u32) -> Result<u32> {
        if x == 0 {
            return Err(Error::Domain("zero has no multiplicative inverse".into()));
        }
        let n = self.q - 1;
        let t = &self.tables;
        Ok(t.exp[((n - t.log[x as usize]) % n) as usize])
    }

    /// `x^e` on ranks.
    pub fn pow_r(&self, x: u32, e: u64) -> u32 {
        if x == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let n = (self.q - 1) as u64;
        let t = &self.tables;
        t.exp[((t.log[x as usize] as u64 * (e % n)) % n) as usize]
    }

    /// The Frobenius automorphism `x -> x^p`.
    #[inline]
    pub fn frobenius_r(&self, x: u32) -> u32 {
        self.pow_r(x, self.p as u64)
    }
}

fn poly_rem(p: u32, num: &[u32], den: &[u32]) -> Vec<u32> {
    // den monic
    let mut r: Vec<u64> = num.iter().map(|&c| c as u64).collect();
    let dd = den.len() - 1;
    let p = p as u64;
    while r.len() > dd {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - dd;
        if c != 0 {
            for (i, &m) in den.iter().enumerate() {
                r[shift + i] = (r[shift + i] + (p - c) * m as u64) % p;
            }
        }
        r.pop();
    }
    r.into_iter().map(|c| c as u32).collect()
}

/// Exhaustive search for a monic factor of degree `1..=deg/2`.
fn is_irreducible(p: u32, modulus: &[u32]) -> bool {
    let deg = modulus.len() - 1;
    for fd in 1..=deg / 2 {
        let count = (p as u64).pow(fd as u32);
        for code in 0..count {
            let mut f = Vec::with_capacity(fd + 1);
            let mut c = code;
            for _ in 0..fd {
                f.push((c % p as u64) as u32);
                c /= p as u64;
            }
            f.push(1);
            if poly_rem(p, modulus, &f).iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

fn least_primitive_modulus(p: u32, a: u32) -> Vec<u32> {
    let count = (p as u64).pow(a);
    for code in 0..count {
        let mut m = Vec::with_capacity(a as usize + 1);
        let mut c = code;
        for _ in 0..a {
            m.push((c % p as u64) as u32);
            c /= p as u64;
        }
        m.push(1);
        if m[0] == 0 || !is_irreducible(p, &m) {
            continue;
        }
        let f = FieldSpec {
            p,
            a,
            q: p.pow(a),
            modulus: m.clone(),
            tables: Arc::new(Tables {
                exp: Vec::new(),
                log: Vec::new(),
                add: None,
            }),
        };
        let order = (f.q - 1) as u64;
        let x = f.element(p);
        let one = f.one();
        if prime_factors(order)
            .iter()
            .all(|&r| f.poly_pow(&x, order / r) != one)
        {
            return m;
        }
    }
    unreachable!("primitive polynomials exist in every degree")
}

/// The vector space V(d, q) with its point coding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorSpace {
    field: FieldSpec,
    d: u32,
    v: u32,
}

impl VectorSpace {
    pub fn new(field: FieldSpec, d: u32) -> Result<Self> {
        if d == 0 {
            return Err(config("dimension must be at least 1"));
        }
        let v = match (field.q() as u64).checked_pow(d) {
            Some(v) if v <= MAX_POINTS as u64 => v as u32,
            _ => {
                return Err(config(format!(
                    "V({d}, {}) exceeds the point cap {MAX_POINTS}",
                    field.q()
                )))
            }
        };
        Ok(VectorSpace { field, d, v })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn dim(&self) -> u32 {
        self.d
    }

    pub fn size(&self) -> u32 {
        self.v
    }

    /// Index of the `i`-th standard basis vector (0-based), i.e. `q^i`.
    pub fn basis_vector(&self, i: u32) -> PointIndex {
        self.field.q().pow(i)
    }

    pub fn point_to_index(&self, coords: &[FieldElement]) -> Result<PointIndex> {
        if coords.len() != self.d as usize {
            return Err(usage(format!(
                "expected {} coordinates, got {}",
                self.d,
                coords.len()
            )));
        }
        let mut ranks = Vec::with_capacity(coords.len());
        for c in coords {
            self.field.validate(c)?;
            ranks.push(self.field.rank(c));
        }
        Ok(self.from_digits(&ranks))
    }

    pub fn index_to_point(&self, idx: PointIndex) -> Result<Vec<FieldElement>> {
        self.check(idx)?;
        Ok(self
            .digits(idx)
            .into_iter()
            .map(|r| self.field.element(r))
            .collect())
    }

    fn check(&self, idx: PointIndex) -> Result<()> {
        if idx >= self.v {
            return Err(usage(format!("point {idx} out of range [0, {})", self.v)));
        }
        Ok(())
    }

    /// Coordinates of a point as field ranks.
    pub fn digits(&self, mut idx: PointIndex) -> Vec<u32> {
        let q = self.field.q();
        (0..self.d)
            .map(|_| {
                let r = idx % q;
                idx /= q;
                r
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> PointIndex {
        let q = self.field.q();
        digits.iter().rev().fold(0, |acc, &r| acc * q + r)
    }

    pub fn add(&self, x: PointIndex, y: PointIndex) -> PointIndex {
        if self.field.p() == 2 {
            return x ^ y;
        }
        let q = self.field.q();
        let (mut x, mut y, mut out, mut place) = (x, y, 0, 1);
        for _ in 0..self.d {
            out += self.field.add_r(x % q, y % q) * place;
            x /= q;
            y /= q;
            place *= q;
        }
        out
    }

    pub fn neg(&self, x: PointIndex) -> PointIndex {
        let digits: Vec<u32> = self.digits(x).iter().map(|&r| self.field.neg_r(r)).collect();
        self.from_digits(&digits)
    }

    pub fn sub(&self, x: PointIndex, y: PointIndex) -> PointIndex {
        self.add(x, self.neg(y))
    }

    pub fn scale(&self, c: u32, x: PointIndex) -> PointIndex {
        let digits: Vec<u32> = self.digits(x).iter().map(|&r| self.field.mul_r(c, r)).collect();
        self.from_digits(&digits)
    }

    /// All field-linear combinations of `gens`, sorted ascending.
    pub fn span_points(&self, gens: &[PointIndex]) -> Result<Vec<PointIndex>> {
        if gens.is_empty() {
            return Err(usage("span of an empty generator list"));
        }
        for &g in gens {
            self.check(g)?;
        }
        let mut members: Vec<PointIndex> = vec![0];
        let mut seen: HashSet<PointIndex> = HashSet::from([0]);
        for &g in gens {
            if seen.contains(&g) {
                continue;
            }
            let multiples: Vec<PointIndex> =
                (1..self.field.q()).map(|c| self.scale(c, g)).collect();
            let base = members.clone();
            for &m in &base {
                for &cg in &multiples {
                    let x = self.add(m, cg);
                    if seen.insert(x) {
                        members.push(x);
                    }
                }
            }
        }
        members.sort_unstable();
        Ok(members)
    }

    /// All linear subspaces of dimension `m`, each as a sorted point list, in
    /// ascending lexicographic order. Desk-scale only.
    pub fn subspaces(&self, m: u32) -> Result<Vec<Vec<PointIndex>>> {
        if m > self.d {
            return Err(usage(format!("no {m}-dimensional subspaces in V({}, q)", self.d)));
        }
        let mut level: BTreeSet<Vec<PointIndex>> = BTreeSet::from([vec![0]]);
        for _ in 0..m {
            let mut next = BTreeSet::new();
            for w in &level {
                for x in 0..self.v {
                    if w.binary_search(&x).is_ok() {
                        continue;
                    }
                    let mut gens = w.clone();
                    gens.push(x);
                    next.insert(self.span_points(&gens)?);
                }
            }
            level = next;
        }
        Ok(level.into_iter().collect())
    }

    /// All translates of `m`-dimensional subspaces (the `m`-flats of AG(d, q)).
    pub fn affine_subspaces(&self, m: u32) -> Result<Vec<Vec<PointIndex>>> {
        let mut out = BTreeSet::new();
        for w in self.subspaces(m)? {
            for x in 0..self.v {
                let mut flat: Vec<PointIndex> = w.iter().map(|&y| self.add(x, y)).collect();
                flat.sort_unstable();
                out.insert(flat);
            }
        }
        Ok(out.into_iter().collect())
    }

    /// Images of every point under the GF(q)-linear map sending `e_j` to `columns[j]`.
    pub fn linear_images(&self, columns: &[PointIndex]) -> Vec<PointIndex> {
        assert_eq!(columns.len(), self.d as usize);
        let q = self.field.q();
        // scaled[j * q + c] = c * columns[j]
        let scaled: Vec<PointIndex> = columns
            .iter()
            .flat_map(|&col| (0..q).map(move |c| (c, col)))
            .map(|(c, col)| self.scale(c, col))
            .collect();
        let mut images = vec![0 as PointIndex; self.v as usize];
        let mut place = 1u32;
        for j in 0..self.d as usize {
            // points whose highest nonzero coordinate is j
            for c in 1..q {
                let offset = c * place;
                for rest in 0..place {
                    images[(offset + rest) as usize] =
                        self.add(images[rest as usize], scaled[j * q as usize + c as usize]);
                }
            }
            place *= q;
        }
        images
    }
}
