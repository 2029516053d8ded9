//! The affine 2-transitive families: explicit generators where they are cheap
//! to write down, and maximal group orders for every family.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::group::FiniteGroup;
use super::perm::Permutation;
use crate::error::{config, Error, Result};
use crate::gfspace::{is_prime, FieldSpec, PointIndex, VectorSpace};

/// Point counts for which the exceptional `SL(2,3)` / `SL(2,5)` case occurs.
pub const CASE6_DEGREES: [u64; 8] = [25, 49, 121, 361, 529, 841, 3481, 81];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyTag {
    AGL,
    AGammaL1,
    ASL,
    ASp,
    AG2,
    Case5,
    Case6,
    Case7,
    Case8,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 9] = [
        FamilyTag::AGL,
        FamilyTag::AGammaL1,
        FamilyTag::ASL,
        FamilyTag::ASp,
        FamilyTag::AG2,
        FamilyTag::Case5,
        FamilyTag::Case6,
        FamilyTag::Case7,
        FamilyTag::Case8,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyTag::AGL => "AGL",
            FamilyTag::AGammaL1 => "AGammaL1",
            FamilyTag::ASL => "ASL",
            FamilyTag::ASp => "ASp",
            FamilyTag::AG2 => "AG2",
            FamilyTag::Case5 => "Case5",
            FamilyTag::Case6 => "Case6",
            FamilyTag::Case7 => "Case7",
            FamilyTag::Case8 => "Case8",
        }
    }

    /// One-line description of the point stabilizer, for usage messages.
    pub fn summary(self) -> &'static str {
        match self {
            FamilyTag::AGL => "G_0 = GL(d/a, p^a), v = p^d",
            FamilyTag::AGammaL1 => "(1) G <= AGammaL(1, p^d), v = p^d",
            FamilyTag::ASL => "(2) G_0 contains SL(d/a, p^a) as a normal subgroup, d >= 2a, v = p^d",
            FamilyTag::ASp => "(3) G_0 contains Sp(2d/a, p^a) as a normal subgroup, d >= 2a, v = p^(2d)",
            FamilyTag::AG2 => "(4) G_0 contains G_2(2^a)' as a normal subgroup, v = 2^(6a)",
            FamilyTag::Case5 => "(5) G_0 = A_6 or A_7, v = 2^4",
            FamilyTag::Case6 => "(6) G_0 contains SL(2,3) or SL(2,5), v = p^2 (p = 5,7,11,19,23,29,59) or 3^4",
            FamilyTag::Case7 => "(7) G_0 has a normal extraspecial 2^5, G_0/E <= S_5, v = 3^4",
            FamilyTag::Case8 => "(8) G_0 = SL(2,13), v = 3^6",
        }
    }

    pub fn parse(s: &str) -> Option<FamilyTag> {
        FamilyTag::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
    }

    /// Families with explicit generator constructions.
    pub fn is_explicit(self) -> bool {
        matches!(
            self,
            FamilyTag::AGL | FamilyTag::AGammaL1 | FamilyTag::ASL | FamilyTag::ASp
        )
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A member of one of the affine families, with its parameters.
///
/// `d`, `p`, `a` follow the usual convention: the translation group is
/// elementary Abelian of order `p^d`, and `a | d` picks the field `GF(p^a)` over
/// which the point stabilizer is linear. `ASp` is the exception: its module is
/// `2d/a`-dimensional over `GF(p^a)`, so it has `p^(2d)` points.
/// `Case6` carries its point count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupFamily {
    pub tag: FamilyTag,
    pub d: u32,
    pub p: u32,
    pub a: u32,
}

impl GroupFamily {
    pub fn new(tag: FamilyTag, d: u32, p: u32, a: u32) -> Result<Self> {
        let f = GroupFamily { tag, d, p, a };
        f.validate()?;
        Ok(f)
    }

    pub fn agl(d: u32, p: u32) -> Self {
        GroupFamily::new(FamilyTag::AGL, d, p, 1).expect("valid AGL parameters")
    }

    pub fn agammal1(p: u32, d: u32) -> Self {
        GroupFamily::new(FamilyTag::AGammaL1, d, p, 1).expect("valid AGammaL1 parameters")
    }

    pub fn ag2(a: u32) -> Self {
        GroupFamily::new(FamilyTag::AG2, 6 * a, 2, a).expect("valid AG2 parameters")
    }

    /// Fixed-degree exceptional cases; `Case6` takes its point count via `p^d`.
    pub fn case(tag: FamilyTag) -> Self {
        match tag {
            FamilyTag::Case5 => GroupFamily { tag, d: 4, p: 2, a: 1 },
            FamilyTag::Case7 => GroupFamily { tag, d: 4, p: 3, a: 1 },
            FamilyTag::Case8 => GroupFamily { tag, d: 6, p: 3, a: 1 },
            _ => panic!("{tag} is not a fixed-degree case"),
        }
    }

    pub fn case6(v: u64) -> Result<Self> {
        match crate::gfspace::prime_power(v) {
            Some((p, d)) if CASE6_DEGREES.contains(&v) => {
                GroupFamily::new(FamilyTag::Case6, d, p as u32, 1)
            }
            _ => Err(config(format!(
                "Case6 needs v in {CASE6_DEGREES:?}, got {v}"
            ))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let GroupFamily { tag, d, p, a } = *self;
        if !is_prime(p as u64) {
            return Err(config(format!("{tag}: p = {p} is not prime")));
        }
        if a == 0 || d == 0 {
            return Err(config(format!("{tag}: d and a must be positive")));
        }
        let ok = match tag {
            FamilyTag::AGL => d % a == 0,
            FamilyTag::AGammaL1 => a == 1,
            FamilyTag::ASL | FamilyTag::ASp => d % a == 0 && d >= 2 * a,
            FamilyTag::AG2 => p == 2 && d == 6 * a,
            FamilyTag::Case5 => (d, p, a) == (4, 2, 1),
            FamilyTag::Case6 => a == 1 && CASE6_DEGREES.contains(&(p as u64).pow(d)),
            FamilyTag::Case7 => (d, p, a) == (4, 3, 1),
            FamilyTag::Case8 => (d, p, a) == (6, 3, 1),
        };
        if !ok {
            return Err(config(format!(
                "invalid parameters d={d}, p={p}, a={a} for {tag}: {}",
                tag.summary()
            )));
        }
        if self.degree_checked().is_none() {
            return Err(config(format!("{tag}: point count overflows")));
        }
        Ok(())
    }

    fn degree_checked(&self) -> Option<u64> {
        let exp = if self.tag == FamilyTag::ASp { 2 * self.d } else { self.d };
        (self.p as u64).checked_pow(exp)
    }

    /// Number of points.
    pub fn degree(&self) -> u64 {
        self.degree_checked().expect("validated family")
    }

    /// Size of the field the point stabilizer is linear over.
    pub fn field_size(&self) -> u64 {
        (self.p as u64).pow(self.a)
    }

    /// Dimension of the module over `GF(p^a)`.
    pub fn module_dim(&self) -> u32 {
        match self.tag {
            FamilyTag::ASp => 2 * self.d / self.a,
            _ => self.d / self.a,
        }
    }

    /// Order of the largest group the family admits. Every group of the
    /// family has order dividing this value.
    ///
    /// * AGL, ASL: `v |GammaL(n, q)|`
    /// * AGammaL1: `v (v - 1) d`
    /// * ASp: `v (q - 1) |Sp(n, q)| a`, the conformal symplectic group with field automorphisms
    /// * AG2: `v (q - 1) |G_2(q)| a`; for `a = 1` this is `64 * 2 * 6048`
    /// * Case5: `16 * |A_7|`, which both `A_6` and `A_7` divide
    /// * Case6, `v = p^2`: `v * 120 (p - 1)`. The normalizer of `SL(2,3)` in
    ///   `GL(2,p)` has order dividing `24 (p - 1)` and that of `SL(2,5)` divides
    ///   `60 (p - 1)`; this is a bound, not the order of a known group.
    /// * Case6, `v = 3^4`: `v |GL(4,3)|`, again only a bound.
    /// * Case7: `81 * 2^5 * |S_5|`
    /// * Case8: `3^6 * |SL(2,13)|`
    pub fn order_bound(&self) -> BigUint {
        let v = BigUint::from(self.degree());
        let q = self.field_size();
        let n = self.module_dim();
        let a = BigUint::from(self.a);
        match self.tag {
            FamilyTag::AGL | FamilyTag::ASL => v * gl_order(n, q) * a,
            FamilyTag::AGammaL1 => {
                let deg = self.degree();
                v * (deg - 1) * self.d
            }
            FamilyTag::ASp => v * (q - 1) * sp_order(n, q) * a,
            FamilyTag::AG2 => v * (q - 1) * g2_order(q) * a,
            FamilyTag::Case5 => v * 2520u32,
            FamilyTag::Case6 if self.degree() == 81 => v * gl_order(4, 3),
            FamilyTag::Case6 => v * (120 * (self.p as u64 - 1)),
            FamilyTag::Case7 => v * (32u32 * 120),
            FamilyTag::Case8 => v * 2184u32,
        }
    }

    /// Short descriptor such as `AGL(3,2)` or `ASp(4,2)`.
    pub fn descriptor(&self) -> String {
        let q = self.field_size();
        match self.tag {
            FamilyTag::AGL => format!("AGL({},{q})", self.module_dim()),
            FamilyTag::ASL => format!("ASL({},{q})", self.module_dim()),
            FamilyTag::ASp => format!("ASp({},{q})", self.module_dim()),
            FamilyTag::AGammaL1 => format!("AGammaL(1,{})", self.degree()),
            FamilyTag::AG2 => format!("AG2({q})"),
            FamilyTag::Case5 => "Case5(A6/A7,16)".into(),
            FamilyTag::Case6 => format!("Case6({})", self.degree()),
            FamilyTag::Case7 => "Case7(81)".into(),
            FamilyTag::Case8 => "Case8(729)".into(),
        }
    }

    /// Generators of the family's defining group as permutations of `V`.
    pub fn build(&self) -> Result<FiniteGroup> {
        build_family(self)
    }
}

impl fmt::Display for GroupFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}

/// `|GL(n, q)| = prod_{i<n} (q^n - q^i)`.
pub fn gl_order(n: u32, q: u64) -> BigUint {
    let qn = BigUint::from(q).pow(n);
    (0..n).fold(BigUint::one(), |acc, i| acc * (&qn - BigUint::from(q).pow(i)))
}

/// `|Sp(2m, q)| = q^(m^2) prod_{i=1}^{m} (q^(2i) - 1)`.
pub fn sp_order(n: u32, q: u64) -> BigUint {
    assert!(n.is_multiple_of(2), "symplectic dimension must be even");
    let m = n / 2;
    let q = BigUint::from(q);
    (1..=m).fold(q.pow(m * m), |acc, i| acc * (q.pow(2 * i) - 1u32))
}

/// `|G_2(q)| = q^6 (q^6 - 1)(q^2 - 1)`.
pub fn g2_order(q: u64) -> BigUint {
    let q = BigUint::from(q);
    q.pow(6) * (q.pow(6) - 1u32) * (q.pow(2) - 1u32)
}

fn perm(images: Vec<PointIndex>) -> Permutation {
    Permutation::from_images_unchecked(images)
}

fn translation(space: &VectorSpace, u: PointIndex) -> Permutation {
    perm((0..space.size()).map(|x| space.add(x, u)).collect())
}

/// Translations by a GF(p)-basis of `V`: `w^i e_j` for `i < a`, `j < n`.
fn translations(space: &VectorSpace) -> Vec<Permutation> {
    let f = space.field();
    let w = f.primitive();
    let mut out = Vec::new();
    for j in 0..space.dim() {
        for i in 0..f.a() {
            let c = f.pow_r(w, i as u64);
            out.push(translation(space, space.scale(c, space.basis_vector(j))));
        }
    }
    out
}

/// A GF(p)-basis of the scalars: `1, w, ..., w^(a-1)`.
fn scalar_basis(f: &FieldSpec) -> Vec<u32> {
    let w = f.primitive();
    (0..f.a()).map(|i| f.pow_r(w, i as u64)).collect()
}

fn elementary_transvections(space: &VectorSpace) -> Vec<Permutation> {
    let n = space.dim();
    let mut out = Vec::new();
    for c in scalar_basis(space.field()) {
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                // e_i -> e_i + c e_j, other basis vectors fixed
                let mut cols: Vec<PointIndex> = (0..n).map(|k| space.basis_vector(k)).collect();
                cols[i as usize] = space.add(
                    space.basis_vector(i),
                    space.scale(c, space.basis_vector(j)),
                );
                out.push(perm(space.linear_images(&cols)));
            }
        }
    }
    out
}

/// The standard alternating form `sum_{i<m} x_i y_{m+i} - x_{m+i} y_i`.
fn symplectic_form(space: &VectorSpace, x: PointIndex, y: PointIndex) -> u32 {
    let f = space.field();
    let (xs, ys) = (space.digits(x), space.digits(y));
    let m = xs.len() / 2;
    (0..m).fold(0, |acc, i| {
        let t = f.sub_r(f.mul_r(xs[i], ys[m + i]), f.mul_r(xs[m + i], ys[i]));
        f.add_r(acc, t)
    })
}

fn symplectic_transvections(space: &VectorSpace) -> Vec<Permutation> {
    let n = space.dim();
    let f = space.field();
    let basis: Vec<PointIndex> = (0..n).map(|k| space.basis_vector(k)).collect();
    let mut directions = basis.clone();
    for i in 0..n as usize {
        for j in i + 1..n as usize {
            directions.push(space.add(basis[i], basis[j]));
        }
    }
    let mut out = Vec::new();
    for c in scalar_basis(f) {
        for &u in &directions {
            // x -> x + c f(x, u) u
            let cols: Vec<PointIndex> = basis
                .iter()
                .map(|&e| {
                    let coef = f.mul_r(c, symplectic_form(space, e, u));
                    space.add(e, space.scale(coef, u))
                })
                .collect();
            out.push(perm(space.linear_images(&cols)));
        }
    }
    out
}

/// Generators for the explicit families.
///
/// * AGL / ASL: translations, elementary transvections, and for AGL the torus
///   element `diag(w, 1, ..., 1)`.
/// * AGammaL1: `x -> w x`, `x -> x + 1`, `x -> x^p` on `GF(p^d)`.
/// * ASp: translations and symplectic transvections `x -> x + c f(x,u) u` for
///   `u` running over basis vectors and sums of two basis vectors.
pub fn build_family(fam: &GroupFamily) -> Result<FiniteGroup> {
    fam.validate()?;
    if !fam.tag.is_explicit() {
        return Err(Error::ArithmeticOnly(fam.descriptor()));
    }
    let field = FieldSpec::new(fam.p, fam.a)?;
    match fam.tag {
        FamilyTag::AGL | FamilyTag::ASL | FamilyTag::ASp => {
            let space = VectorSpace::new(field, fam.module_dim())?;
            let mut gens = translations(&space);
            match fam.tag {
                FamilyTag::ASp => gens.extend(symplectic_transvections(&space)),
                _ => gens.extend(elementary_transvections(&space)),
            }
            if fam.tag == FamilyTag::AGL && space.field().q() > 2 {
                let w = space.field().primitive();
                let mut cols: Vec<PointIndex> =
                    (0..space.dim()).map(|k| space.basis_vector(k)).collect();
                cols[0] = space.scale(w, cols[0]);
                gens.push(perm(space.linear_images(&cols)));
            }
            FiniteGroup::new(space.size(), gens)
        }
        FamilyTag::AGammaL1 => {
            let f = FieldSpec::new(fam.p, fam.d)?;
            let q = f.q();
            let w = f.primitive();
            let gens = vec![
                perm((0..q).map(|x| f.mul_r(w, x)).collect()),
                perm((0..q).map(|x| f.add_r(x, 1)).collect()),
                perm((0..q).map(|x| f.frobenius_r(x)).collect()),
            ];
            FiniteGroup::new(q, gens)
        }
        _ => unreachable!(),
    }
}

/// Lagrange check: `|G|` divides the family bound.
pub fn divides_bound(order: &BigUint, fam: &GroupFamily) -> bool {
    fam.order_bound().is_multiple_of(order)
}
