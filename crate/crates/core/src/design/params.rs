use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::combin::binomial_big;
use crate::error::{usage, Result};

/// The parameters of a `t-(v, k, lambda)` design.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DesignParams {
    pub t: u64,
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
}

/// The `(t, k, v)` triples where `v - t + 1 = (k - t + 2)(k - t + 1)` is attained.
pub const CAMERON_EQUALITY_CASES: [(u64, u64, u64); 5] =
    [(3, 4, 8), (3, 6, 22), (3, 12, 112), (4, 7, 23), (5, 8, 24)];

/// Both sides of an exact comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison<T> {
    pub lhs: T,
    pub rhs: T,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Identity {
    pub name: String,
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub holds: bool,
}

/// `lambda * C(v-s, t-s) == 0 (mod C(k-s, t-s))` for one `s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Divisibility {
    pub s: u64,
    pub numerator: BigUint,
    pub denominator: BigUint,
    pub passes: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CameronReport {
    /// `v >= (t+1)(k-t+1)`
    pub lower: Comparison<u128>,
    /// `v-t+1 >= (k-t+2)(k-t+1)`, for `t > 2`
    pub upper: Option<Comparison<u128>>,
    /// Equality in `upper`.
    pub equality: bool,
    /// `(t, k, v)` is one of [`CAMERON_EQUALITY_CASES`].
    pub listed_equality_case: bool,
}

impl DesignParams {
    pub fn new(t: u64, v: u64, k: u64, lambda: u64) -> Result<Self> {
        if t == 0 || lambda == 0 {
            return Err(usage("t and lambda must be positive"));
        }
        if !(t <= k && k <= v) {
            return Err(usage(format!("need t <= k <= v, got t={t}, k={k}, v={v}")));
        }
        Ok(DesignParams { t, v, k, lambda })
    }

    pub fn steiner(t: u64, v: u64, k: u64) -> Result<Self> {
        Self::new(t, v, k, 1)
    }

    pub fn is_nontrivial(&self) -> bool {
        self.t < self.k && self.k < self.v
    }

    pub fn is_steiner(&self) -> bool {
        self.lambda == 1
    }

    /// `lambda * C(v-s, t-s)` and `C(k-s, t-s)`.
    pub fn lambda_s_parts(&self, s: u64) -> Result<(BigUint, BigUint)> {
        if s > self.t {
            return Err(usage(format!("s = {s} exceeds t = {}", self.t)));
        }
        let num = binomial_big(self.v - s, self.t - s) * self.lambda;
        let den = binomial_big(self.k - s, self.t - s);
        Ok((num, den))
    }

    /// Number of blocks through a fixed `s`-subset, as an exact rational.
    /// `s = 0` gives `b` and `s = 1` gives `r`.
    pub fn lambda_s(&self, s: u64) -> Result<BigRational> {
        let (num, den) = self.lambda_s_parts(s)?;
        Ok(BigRational::new(num.into(), den.into()))
    }

    pub fn b(&self) -> BigRational {
        self.lambda_s(0).unwrap()
    }

    pub fn r(&self) -> BigRational {
        self.lambda_s(1).unwrap()
    }

    /// `b k = v r`, `C(v,t) lambda = b C(k,t)`, and `r (k-1) = lambda_2 (v-1)` for `t >= 2`.
    pub fn check_identities(&self) -> Vec<Identity> {
        let int = |x: u64| BigRational::from_integer(BigInt::from(x));
        let big = |x: BigUint| BigRational::from_integer(BigInt::from(x));
        let (b, r) = (self.b(), self.r());
        let mut out = Vec::with_capacity(3);
        let mut push = |name: &str, lhs: BigRational, rhs: BigRational| {
            let holds = lhs == rhs;
            out.push(Identity {
                name: name.to_string(),
                lhs,
                rhs,
                holds,
            });
        };
        push("bk = vr", &b * int(self.k), &r * int(self.v));
        push(
            "C(v,t) lambda = b C(k,t)",
            big(binomial_big(self.v, self.t)) * int(self.lambda),
            &b * big(binomial_big(self.k, self.t)),
        );
        if self.t >= 2 {
            let l2 = self.lambda_s(2).unwrap();
            push("r(k-1) = lambda_2 (v-1)", &r * int(self.k - 1), l2 * int(self.v - 1));
        }
        out
    }

    /// Integrality of every `lambda_s`, `s = 0..=t`.
    pub fn divisibility_conditions(&self) -> Vec<Divisibility> {
        (0..=self.t)
            .map(|s| {
                let (numerator, denominator) = self.lambda_s_parts(s).unwrap();
                let passes = numerator.is_multiple_of(&denominator);
                Divisibility {
                    s,
                    numerator,
                    denominator,
                    passes,
                }
            })
            .collect()
    }

    pub fn is_admissible_arithmetically(&self) -> bool {
        self.divisibility_conditions().iter().all(|d| d.passes)
    }

    /// The two Steiner-system inequalities `v >= (t+1)(k-t+1)` and, for `t > 2`,
    /// `v-t+1 >= (k-t+2)(k-t+1)`.
    pub fn cameron_bounds(&self) -> Result<CameronReport> {
        if !self.is_steiner() {
            return Err(usage("the Cameron bounds apply to Steiner systems (lambda = 1) only"));
        }
        let (t, v, k) = (self.t as u128, self.v as u128, self.k as u128);
        let rhs = (t + 1) * (k - t + 1);
        let lower = Comparison {
            lhs: v,
            rhs,
            holds: v >= rhs,
        };
        let upper = (t > 2).then(|| {
            let lhs = v - t + 1;
            let rhs = (k - t + 2) * (k - t + 1);
            Comparison {
                lhs,
                rhs,
                holds: lhs >= rhs,
            }
        });
        let equality = upper.as_ref().is_some_and(|c| c.lhs == c.rhs);
        Ok(CameronReport {
            lower,
            upper,
            equality,
            listed_equality_case: CAMERON_EQUALITY_CASES.contains(&(self.t, self.k, self.v)),
        })
    }
}

/// Largest block size allowed for a non-trivial Steiner `t`-design on `v`
/// points, `t` in `{4, 5}`: `floor(sqrt(v - (11/4 + i)) + 5/2 + i)`, `i = t - 4`.
pub fn k_max(t: u64, v: u64) -> Result<u64> {
    if t != 4 && t != 5 {
        return Err(usage(format!("k_max is defined for t = 4 or 5, got {t}")));
    }
    let i = t - 4;
    // Doubling: 2k - 5 - 2i <= sqrt(4v - 11 - 4i)
    let radicand = (4 * v as i128) - 11 - 4 * i as i128;
    if radicand < 0 {
        return Err(usage(format!(
            "v = {v} too small: v - (11/4 + {i}) is negative"
        )));
    }
    let radicand = radicand as u128;
    let mut root = (radicand as f64).sqrt() as u128;
    while root * root > radicand {
        root -= 1;
    }
    while (root + 1) * (root + 1) <= radicand {
        root += 1;
    }
    // 2k <= root + 5 + 2i is exact here: 2k - 5 - 2i is an integer, so it is
    // at most sqrt(radicand) iff it is at most floor(sqrt(radicand)).
    let k = (root as u64 + 5 + 2 * i) / 2;
    debug_assert!({
        let lhs = 2 * k as i128 - 5 - 2 * i as i128;
        lhs < 0 || (lhs * lhs) as u128 <= radicand
    });
    Ok(k)
}

impl std::fmt::Display for DesignParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}-({},{},{})", self.t, self.v, self.k, self.lambda)
    }
}
