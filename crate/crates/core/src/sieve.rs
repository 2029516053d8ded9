//! Arithmetic elimination of Steiner-design parameters and group families.
//!
//! Every rule is a necessary condition. A report lists each rule that failed
//! together with both sides of the failed comparison, so that the report can
//! be re-checked from the parameters and the family alone.

use std::fmt;
use std::io::Write;
use std::ops::RangeInclusive;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::combin::binomial_u128;
use crate::design::{k_max, DesignParams};
use crate::error::{usage, Error, Result};
use crate::gfspace::prime_power;
use crate::permgroup::{FamilyTag, GroupFamily, CASE6_DEGREES};

/// Largest `t` for which a block-transitive Steiner design can exist.
pub const T_CAP: u64 = 7;

/// Smallest block size considered by the `AGammaL(1, q)` chain at `t = 5`.
const AGAMMAL1_K_MIN: u64 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    /// `t < k < v`.
    NonTriviality,
    /// `C(k-s, t-s)` divides `lambda C(v-s, t-s)`; `s = 0` is `b`, `s = 1` is `r`.
    Integrality(u64),
    /// `v >= (t+1)(k-t+1)`.
    CameronLower,
    /// `v-t+1 >= (k-t+2)(k-t+1)`.
    CameronUpper,
    /// `k <= k_max(t, v)`.
    KMax,
    /// `t <= 7`.
    TCap,
    /// `b` divides the order bound of the family.
    OrderDivisibility,
    /// `(v-2)(v-3) <= k(k-1)(k-2) d` for one `k`.
    AGammaL1Inequality,
    /// No block size `k >= 6` is allowed at all.
    AGammaL1EmptyRange,
    /// `(v-2)(v-3)(v-4)|G_B|` divides `k(k-1)(k-2)(k-3)(k-4) d`.
    AGammaL1Divisibility,
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleId::NonTriviality => f.write_str("non-triviality"),
            RuleId::Integrality(0) => f.write_str("b-integrality"),
            RuleId::Integrality(1) => f.write_str("r-integrality"),
            RuleId::Integrality(s) => write!(f, "lambda_{s}-integrality"),
            RuleId::CameronLower => f.write_str("cameron-lower"),
            RuleId::CameronUpper => f.write_str("cameron-upper"),
            RuleId::KMax => f.write_str("k-max"),
            RuleId::TCap => f.write_str("t-cap"),
            RuleId::OrderDivisibility => f.write_str("order-divisibility"),
            RuleId::AGammaL1Inequality => f.write_str("agammal1-inequality"),
            RuleId::AGammaL1EmptyRange => f.write_str("agammal1-empty-range"),
            RuleId::AGammaL1Divisibility => f.write_str("agammal1-divisibility"),
        }
    }
}

impl FromStr for RuleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "non-triviality" => RuleId::NonTriviality,
            "b-integrality" => RuleId::Integrality(0),
            "r-integrality" => RuleId::Integrality(1),
            "cameron-lower" => RuleId::CameronLower,
            "cameron-upper" => RuleId::CameronUpper,
            "k-max" => RuleId::KMax,
            "t-cap" => RuleId::TCap,
            "order-divisibility" => RuleId::OrderDivisibility,
            "agammal1-inequality" => RuleId::AGammaL1Inequality,
            "agammal1-empty-range" => RuleId::AGammaL1EmptyRange,
            "agammal1-divisibility" => RuleId::AGammaL1Divisibility,
            other => {
                let s = other
                    .strip_prefix("lambda_")
                    .and_then(|r| r.strip_suffix("-integrality"))
                    .and_then(|n| n.parse().ok())
                    .filter(|&n| n >= 2)
                    .ok_or_else(|| usage(format!("unknown rule id {other:?}")))?;
                RuleId::Integrality(s)
            }
        })
    }
}

impl Serialize for RuleId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RuleId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The comparison a rule requires of its witness pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `lhs < rhs`
    Lt,
    /// `lhs <= rhs`
    Le,
    /// `lhs >= rhs`
    Ge,
    /// `rhs` divides `lhs`
    DivisibleBy,
}

impl Relation {
    pub fn holds(self, lhs: &BigUint, rhs: &BigUint) -> bool {
        match self {
            Relation::Lt => lhs < rhs,
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
            Relation::DivisibleBy => !rhs.is_zero() && lhs.is_multiple_of(rhs),
        }
    }
}

mod decimal {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(x)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A failed rule with both sides of the failed comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiredRule {
    pub rule: RuleId,
    /// Block size the witness refers to, when it differs per entry.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<u64>,
    pub relation: Relation,
    #[serde(with = "decimal")]
    pub lhs: BigUint,
    #[serde(with = "decimal")]
    pub rhs: BigUint,
}

impl FiredRule {
    fn new(rule: RuleId, relation: Relation, lhs: impl Into<BigUint>, rhs: impl Into<BigUint>) -> Self {
        FiredRule {
            rule,
            k: None,
            relation,
            lhs: lhs.into(),
            rhs: rhs.into(),
        }
    }

    /// Whether the witness satisfies the relation. Always false for a fired rule.
    pub fn holds(&self) -> bool {
        self.relation.holds(&self.lhs, &self.rhs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Eliminated,
    Survives,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Eliminated => "eliminated",
            Verdict::Survives => "survives",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

mod family_field {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::permgroup::GroupFamily;

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Name(String),
        Family(GroupFamily),
    }

    pub fn serialize<S: Serializer>(f: &Option<GroupFamily>, s: S) -> Result<S::Ok, S::Error> {
        match f {
            Some(f) => f.serialize(s),
            None => s.serialize_str("generic"),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<GroupFamily>, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Name(n) if n == "generic" => Ok(None),
            Repr::Name(n) => Err(serde::de::Error::custom(format!("unknown family {n:?}"))),
            Repr::Family(f) => f.validate().map(|_| Some(f)).map_err(serde::de::Error::custom),
        }
    }
}

/// Outcome of the rules applied to one parameter set, or to one degree when
/// `k` is `None`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationReport {
    #[serde(with = "family_field")]
    pub family: Option<GroupFamily>,
    pub t: u64,
    pub v: u64,
    pub k: Option<u64>,
    pub lambda: u64,
    /// Exact group order, for the rule that needs one.
    #[serde(skip_serializing_if = "Option::is_none", default, with = "opt_decimal")]
    pub group_order: Option<BigUint>,
    pub rules_fired: Vec<FiredRule>,
    pub verdict: Verdict,
}

mod opt_decimal {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(x) => s.collect_str(x),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigUint>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .transpose()
    }
}

impl EliminationReport {
    fn from_rules(family: Option<GroupFamily>, p: &DesignParams, rules_fired: Vec<FiredRule>) -> Self {
        let verdict = if rules_fired.is_empty() {
            Verdict::Survives
        } else {
            Verdict::Eliminated
        };
        EliminationReport {
            family,
            t: p.t,
            v: p.v,
            k: Some(p.k),
            lambda: p.lambda,
            group_order: None,
            rules_fired,
            verdict,
        }
    }

    pub fn params(&self) -> Option<DesignParams> {
        DesignParams::new(self.t, self.v, self.k?, self.lambda).ok()
    }

    pub fn is_eliminated(&self) -> bool {
        self.verdict == Verdict::Eliminated
    }

    pub fn family_name(&self) -> String {
        self.family
            .map(|f| f.descriptor())
            .unwrap_or_else(|| "generic".to_string())
    }

    pub fn fired(&self, rule: RuleId) -> Option<&FiredRule> {
        self.rules_fired.iter().find(|r| r.rule == rule)
    }

    /// Recomputes every witness from the parameters and family and checks that
    /// it matches the stored one and fails its relation. Also checks that the
    /// verdict agrees with the rule list. A whole-degree report may survive
    /// while listing the witnesses of the block sizes it does eliminate.
    pub fn recheck(&self) -> bool {
        let verdict_ok = match self.k {
            Some(_) => (self.verdict == Verdict::Eliminated) == !self.rules_fired.is_empty(),
            None => self.verdict == Verdict::Survives || !self.rules_fired.is_empty(),
        };
        verdict_ok
            && self.rules_fired.iter().all(|r| {
                !r.holds()
                    && recompute(self, r.rule, r.k.or(self.k)).as_ref().is_some_and(|w| {
                        w.rule == r.rule && w.relation == r.relation && w.lhs == r.lhs && w.rhs == r.rhs
                    })
            })
    }
}

fn recompute(rep: &EliminationReport, rule: RuleId, k: Option<u64>) -> Option<FiredRule> {
    let params = || DesignParams::new(rep.t, rep.v, k?, rep.lambda).ok();
    let d = || rep.family.map(|f| f.d as u64);
    match rule {
        RuleId::NonTriviality
        | RuleId::Integrality(_)
        | RuleId::CameronLower
        | RuleId::CameronUpper
        | RuleId::KMax
        | RuleId::TCap => {
            let mut out = Vec::new();
            generic_rules(&params()?, &mut out);
            out.into_iter().find(|r| r.rule == rule)
        }
        RuleId::OrderDivisibility => {
            let p = params()?;
            let bound = rep.family?.order_bound();
            order_rule(&p, &bound, None)
        }
        RuleId::AGammaL1Inequality => {
            let k = k?;
            agammal1_inequality(rep.v, k, d()?).map(|r| FiredRule { k: rep.k.is_none().then_some(k), ..r })
        }
        RuleId::AGammaL1EmptyRange => agammal1_empty_range(rep.v),
        RuleId::AGammaL1Divisibility => {
            agammal1_divisibility_rule(rep.v, k?, d()?, rep.group_order.as_ref()?)
        }
    }
}

/// Both sides of `lambda_s` integrality, using `u128` where possible.
fn integrality_rule(p: &DesignParams, s: u64) -> Option<FiredRule> {
    let small = binomial_u128(p.v - s, p.t - s)
        .and_then(|n| n.checked_mul(p.lambda as u128))
        .zip(binomial_u128(p.k - s, p.t - s));
    match small {
        Some((num, den)) => (num % den != 0)
            .then(|| FiredRule::new(RuleId::Integrality(s), Relation::DivisibleBy, num, den)),
        None => {
            let (num, den) = p.lambda_s_parts(s).expect("s <= t");
            (!num.is_multiple_of(&den))
                .then(|| FiredRule::new(RuleId::Integrality(s), Relation::DivisibleBy, num, den))
        }
    }
}

/// `b` as an exact integer when it is one.
fn block_count(p: &DesignParams) -> Option<BigUint> {
    let small = binomial_u128(p.v, p.t)
        .and_then(|n| n.checked_mul(p.lambda as u128))
        .zip(binomial_u128(p.k, p.t));
    match small {
        Some((num, den)) => (num % den == 0).then(|| BigUint::from(num / den)),
        None => {
            let (num, den) = p.lambda_s_parts(0).expect("s = 0");
            let (q, r) = num.div_rem(&den);
            r.is_zero().then_some(q)
        }
    }
}

/// Pushes every failed generic rule, in order.
fn generic_rules(p: &DesignParams, out: &mut Vec<FiredRule>) {
    if p.t >= p.k {
        out.push(FiredRule::new(RuleId::NonTriviality, Relation::Lt, p.t, p.k));
    } else if p.k >= p.v {
        out.push(FiredRule::new(RuleId::NonTriviality, Relation::Lt, p.k, p.v));
    }
    out.extend((0..=p.t).filter_map(|s| integrality_rule(p, s)));
    if p.is_steiner() {
        let cam = p.cameron_bounds().expect("lambda = 1");
        if !cam.lower.holds {
            out.push(FiredRule::new(RuleId::CameronLower, Relation::Ge, cam.lower.lhs, cam.lower.rhs));
        }
        if let Some(up) = cam.upper.filter(|c| !c.holds) {
            out.push(FiredRule::new(RuleId::CameronUpper, Relation::Ge, up.lhs, up.rhs));
        }
        if p.t == 4 || p.t == 5 {
            if let Ok(km) = k_max(p.t, p.v) {
                if p.k > km {
                    out.push(FiredRule::new(RuleId::KMax, Relation::Le, p.k, km));
                }
            }
        }
    }
    if p.t > T_CAP {
        out.push(FiredRule::new(RuleId::TCap, Relation::Le, p.t, T_CAP));
    }
}

/// `b | bound`, skipped when `b` is not an integer.
fn order_rule(p: &DesignParams, bound: &BigUint, bound_small: Option<u128>) -> Option<FiredRule> {
    if let (Some(bound), Some((num, den))) = (
        bound_small,
        binomial_u128(p.v, p.t)
            .and_then(|n| n.checked_mul(p.lambda as u128))
            .zip(binomial_u128(p.k, p.t)),
    ) {
        if num % den != 0 {
            return None;
        }
        let b = num / den;
        return (bound % b != 0)
            .then(|| FiredRule::new(RuleId::OrderDivisibility, Relation::DivisibleBy, bound, b));
    }
    let b = block_count(p)?;
    (!bound.is_multiple_of(&b))
        .then(|| FiredRule::new(RuleId::OrderDivisibility, Relation::DivisibleBy, bound.clone(), b))
}

fn agammal1_inequality(v: u64, k: u64, d: u64) -> Option<FiredRule> {
    let (v, k) = (v as u128, k as u128);
    let lhs = v.checked_sub(2)? * v.checked_sub(3)?;
    let rhs = k * k.checked_sub(1)? * k.checked_sub(2)? * d as u128;
    (lhs > rhs).then(|| FiredRule::new(RuleId::AGammaL1Inequality, Relation::Le, lhs, rhs))
}

/// Upper end of the `k` range for the `AGammaL(1, q)` chain: `min(k_max(5, v), v - 1)`.
fn agammal1_k_hi(v: u64) -> u64 {
    k_max(5, v).unwrap_or(0).min(v.saturating_sub(1))
}

fn agammal1_empty_range(v: u64) -> Option<FiredRule> {
    let hi = agammal1_k_hi(v);
    (hi < AGAMMAL1_K_MIN)
        .then(|| FiredRule::new(RuleId::AGammaL1EmptyRange, Relation::Ge, hi, AGAMMAL1_K_MIN))
}

fn agammal1_divisibility_rule(v: u64, k: u64, d: u64, order: &BigUint) -> Option<FiredRule> {
    let p = DesignParams::steiner(5, v, k).ok()?;
    let b = block_count(&p)?;
    let (stab, r) = order.div_rem(&b);
    if !r.is_zero() || stab.is_zero() {
        return None;
    }
    let lhs = (0..5).fold(BigUint::from(d), |acc, i| acc * (k - i));
    let rhs = (2..5).fold(stab, |acc, i| acc * (v - i));
    (!lhs.is_multiple_of(&rhs))
        .then(|| FiredRule::new(RuleId::AGammaL1Divisibility, Relation::DivisibleBy, lhs, rhs))
}

/// Generic necessary conditions for a block-transitive Steiner-type design:
/// non-triviality, integrality of every `lambda_s`, the two Cameron bounds and
/// the `k_max` bound when `lambda = 1`, and `t <= 7`. All rules are evaluated.
pub fn admissible(params: &DesignParams) -> EliminationReport {
    let mut out = Vec::new();
    generic_rules(params, &mut out);
    EliminationReport::from_rules(None, params, out)
}

/// [`admissible`] followed by the requirement that `b` divide the order bound
/// of `family`, which holds for every subgroup by Lagrange's theorem.
pub fn order_divisibility(params: &DesignParams, family: &GroupFamily) -> Result<EliminationReport> {
    if family.degree() != params.v {
        return Err(usage(format!(
            "{family} has {} points, parameters have v = {}",
            family.degree(),
            params.v
        )));
    }
    let bound = family.order_bound();
    let mut out = Vec::new();
    generic_rules(params, &mut out);
    out.extend(order_rule(params, &bound, bound.to_u128()));
    Ok(EliminationReport::from_rules(Some(*family), params, out))
}

/// The `t = 5` chain for `G <= AGammaL(1, v)`, `v = p^d`: for each `k` from 6
/// to `min(k_max(5, v), v - 1)`, the inequality `(v-2)(v-3) <= k(k-1)(k-2) d`
/// must hold. A block size passing the inequality is then put through the
/// generic rules and order divisibility against `|AGammaL(1, v)|`; a handful
/// of small degrees need this. Eliminated when every `k` fails; the report
/// carries the witnesses of each `k`.
pub fn agammal1_elimination(v: u64) -> Result<EliminationReport> {
    let (p, d) = prime_power(v).ok_or_else(|| usage(format!("v = {v} is not a prime power")))?;
    let family = GroupFamily::new(FamilyTag::AGammaL1, d, p as u32, 1)?;
    let mut out = Vec::new();
    let mut survivor = false;
    match agammal1_empty_range(v) {
        Some(r) => out.push(r),
        None => {
            let bound = family.order_bound();
            let bound_small = bound.to_u128();
            for k in AGAMMAL1_K_MIN..=agammal1_k_hi(v) {
                if let Some(r) = agammal1_inequality(v, k, d as u64) {
                    out.push(FiredRule { k: Some(k), ..r });
                    continue;
                }
                let params = DesignParams::steiner(5, v, k)?;
                let mut rest = Vec::new();
                generic_rules(&params, &mut rest);
                rest.extend(order_rule(&params, &bound, bound_small));
                survivor |= rest.is_empty();
                out.extend(rest.into_iter().map(|r| FiredRule { k: Some(k), ..r }));
            }
        }
    }
    Ok(EliminationReport {
        family: Some(family),
        t: 5,
        v,
        k: None,
        lambda: 1,
        group_order: None,
        verdict: if survivor { Verdict::Survives } else { Verdict::Eliminated },
        rules_fired: out,
    })
}

/// The exact divisibility form of the `t = 5` chain, for a subgroup of
/// `AGammaL(1, v)` of known order: `b | |G|` and
/// `(v-2)(v-3)(v-4)|G_B|` divides `k(k-1)(k-2)(k-3)(k-4) d` with `|G_B| = |G| / b`.
/// Runs after [`order_divisibility`].
pub fn agammal1_divisibility(v: u64, k: u64, group_order: &BigUint) -> Result<EliminationReport> {
    let (p, d) = prime_power(v).ok_or_else(|| usage(format!("v = {v} is not a prime power")))?;
    let family = GroupFamily::new(FamilyTag::AGammaL1, d, p as u32, 1)?;
    if !family.order_bound().is_multiple_of(group_order) || group_order.is_zero() {
        return Err(usage(format!("{group_order} does not divide |AGammaL(1,{v})|")));
    }
    let params = DesignParams::steiner(5, v, k)?;
    let mut out = Vec::new();
    generic_rules(&params, &mut out);
    let b = block_count(&params);
    match &b {
        Some(b) if !group_order.is_multiple_of(b) => out.push(FiredRule::new(
            RuleId::OrderDivisibility,
            Relation::DivisibleBy,
            group_order.clone(),
            b.clone(),
        )),
        _ => out.extend(agammal1_divisibility_rule(v, k, d as u64, group_order)),
    }
    let mut rep = EliminationReport::from_rules(Some(family), &params, out);
    rep.group_order = Some(group_order.clone());
    Ok(rep)
}

/// Which instances of a family to scan; unset fields range freely.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilySelector {
    pub tag: FamilyTag,
    pub d: Option<u32>,
    pub p: Option<u32>,
    pub a: Option<u32>,
}

impl FamilySelector {
    pub fn new(tag: FamilyTag) -> Self {
        FamilySelector {
            tag,
            d: None,
            p: None,
            a: None,
        }
    }

    fn accepts(&self, f: &GroupFamily) -> bool {
        self.d.is_none_or(|d| d == f.d)
            && self.p.is_none_or(|p| p == f.p)
            && self.a.is_none_or(|a| a == f.a)
    }
}

fn primes_up_to(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            for j in (i * i..=n).step_by(i) {
                composite[j] = true;
            }
        }
    }
    out
}

/// Upper limit on `v` for family enumeration.
pub const MAX_SCAN_DEGREE: u64 = 1 << 24;

/// Every family instance of the selector with degree in `v_range`, ordered by
/// degree and then by parameters. Empty ranges give an empty list.
pub fn family_instances(sel: &FamilySelector, v_range: RangeInclusive<u64>) -> Result<Vec<GroupFamily>> {
    let (lo, hi) = (*v_range.start(), *v_range.end());
    if lo > hi {
        return Ok(Vec::new());
    }
    if hi > MAX_SCAN_DEGREE {
        return Err(usage(format!("v range ends at {hi}, above the limit {MAX_SCAN_DEGREE}")));
    }
    let mut cands: Vec<GroupFamily> = Vec::new();
    let mut push = |f: Result<GroupFamily>| {
        if let Ok(f) = f {
            cands.push(f);
        }
    };
    let tag = sel.tag;
    match tag {
        FamilyTag::Case5 | FamilyTag::Case7 | FamilyTag::Case8 => push(Ok(GroupFamily::case(tag))),
        FamilyTag::Case6 => CASE6_DEGREES.iter().for_each(|&v| push(GroupFamily::case6(v))),
        FamilyTag::AG2 => {
            for a in 1.. {
                if 6 * a >= 64 || 1u64 << (6 * a) > hi {
                    break;
                }
                push(GroupFamily::new(tag, 6 * a, 2, a));
            }
        }
        _ => {
            for p in primes_up_to(hi) {
                let exp_scale = if tag == FamilyTag::ASp { 2 } else { 1 };
                let mut d = 1u32;
                while let Some(v) = p.checked_pow(exp_scale * d).filter(|&v| v <= hi) {
                    if v >= lo {
                        match tag {
                            FamilyTag::AGammaL1 => push(GroupFamily::new(tag, d, p as u32, 1)),
                            _ => {
                                for a in (1..=d).filter(|a| d.is_multiple_of(*a)) {
                                    // one-dimensional modules belong to AGammaL1
                                    if tag == FamilyTag::AGL && d / a < 2 {
                                        continue;
                                    }
                                    push(GroupFamily::new(tag, d, p as u32, a));
                                }
                            }
                        }
                    }
                    d += 1;
                }
            }
        }
    }
    let mut out: Vec<GroupFamily> = cands
        .into_iter()
        .filter(|f| v_range.contains(&f.degree()) && sel.accepts(f))
        .collect();
    out.sort_by_key(|f| (f.degree(), *f));
    Ok(out)
}

/// Block sizes scanned for a family of degree `v` at strength `t`:
/// `t+1 ..= min(k_max(t, v), v - 1)`.
pub fn scan_k_range(t: u64, v: u64) -> RangeInclusive<u64> {
    let hi = k_max(t, v).unwrap_or(0).min(v.saturating_sub(1));
    (t + 1)..=hi
}

/// Evaluates one `(family, v, k)` cell at strength `t`, `lambda = 1`.
pub struct CellEvaluator {
    family: GroupFamily,
    bound: BigUint,
    bound_small: Option<u128>,
    t: u64,
    k_max: Option<u64>,
}

impl CellEvaluator {
    pub fn new(family: GroupFamily, t: u64) -> Self {
        let bound = family.order_bound();
        CellEvaluator {
            family,
            bound_small: bound.to_u128(),
            bound,
            t,
            k_max: k_max(t, family.degree()).ok(),
        }
    }

    pub fn family(&self) -> &GroupFamily {
        &self.family
    }

    pub fn k_range(&self) -> RangeInclusive<u64> {
        scan_k_range(self.t, self.family.degree())
    }

    /// Generic rules, order divisibility, and for `AGammaL1` at `t = 5` the
    /// per-`k` inequality.
    pub fn evaluate(&self, k: u64) -> Result<EliminationReport> {
        let v = self.family.degree();
        let params = DesignParams::steiner(self.t, v, k)?;
        let mut out = Vec::new();
        generic_rules(&params, &mut out);
        out.extend(order_rule(&params, &self.bound, self.bound_small));
        if self.family.tag == FamilyTag::AGammaL1 && self.t == 5 {
            out.extend(agammal1_inequality(v, k, self.family.d as u64));
        }
        Ok(EliminationReport::from_rules(Some(self.family), &params, out))
    }
}

impl CellEvaluator {
    /// Verdict of [`CellEvaluator::evaluate`] without building witnesses.
    /// Stops at the first failed rule.
    pub fn is_eliminated(&self, k: u64) -> Result<bool> {
        let (t, v) = (self.t, self.family.degree());
        if !(t <= k && k <= v) {
            return Err(usage(format!("need t <= k <= v, got t={t}, k={k}, v={v}")));
        }
        if t >= k || k >= v || t > T_CAP || self.k_max.is_some_and(|km| k > km) {
            return Ok(true);
        }
        let (tt, vv, kk) = (t as u128, v as u128, k as u128);
        if vv < (tt + 1) * (kk - tt + 1) || (t > 2 && vv - tt + 1 < (kk - tt + 2) * (kk - tt + 1)) {
            return Ok(true);
        }
        if self.family.tag == FamilyTag::AGammaL1 && t == 5 {
            let d = self.family.d as u128;
            if (vv - 2) * (vv - 3) > kk * (kk - 1) * (kk - 2) * d {
                return Ok(true);
            }
        }
        let Some(bound) = self.bound_small else {
            return Ok(self.evaluate(k)?.is_eliminated());
        };
        let mut b = None;
        for s in 0..=t {
            match (binomial_u128(v - s, t - s), binomial_u128(k - s, t - s)) {
                (Some(num), Some(den)) => {
                    if num % den != 0 {
                        return Ok(true);
                    }
                    if s == 0 {
                        b = Some(num / den);
                    }
                }
                _ => return Ok(self.evaluate(k)?.is_eliminated()),
            }
        }
        Ok(b.is_some_and(|b| bound % b != 0))
    }
}

fn check_scan_t(t: u64) -> Result<()> {
    if t == 4 || t == 5 {
        Ok(())
    } else {
        Err(usage(format!("family scans run at t = 4 or 5, got {t}")))
    }
}

/// Streams the report of every cell, ordered by `v`, then family, then `k`.
pub fn family_scan_with(
    sel: &FamilySelector,
    t: u64,
    v_range: RangeInclusive<u64>,
    mut sink: impl FnMut(EliminationReport),
) -> Result<()> {
    check_scan_t(t)?;
    for f in family_instances(sel, v_range)? {
        let ev = CellEvaluator::new(f, t);
        for k in ev.k_range() {
            sink(ev.evaluate(k)?);
        }
    }
    Ok(())
}

/// Collects [`family_scan_with`].
pub fn family_scan(sel: &FamilySelector, t: u64, v_range: RangeInclusive<u64>) -> Result<Vec<EliminationReport>> {
    let mut out = Vec::new();
    family_scan_with(sel, t, v_range, |r| out.push(r))?;
    Ok(out)
}

/// Per-degree aggregate of a scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeSummary {
    pub family: String,
    pub v: u64,
    pub cells: u64,
    pub eliminated: u64,
    /// Block sizes that no rule eliminates.
    pub survivors: Vec<u64>,
}

impl DegreeSummary {
    pub fn new(family: &GroupFamily) -> Self {
        DegreeSummary {
            family: family.descriptor(),
            v: family.degree(),
            cells: 0,
            eliminated: 0,
            survivors: Vec::new(),
        }
    }

    pub fn add(&mut self, r: &EliminationReport) {
        self.add_verdict(r.k.unwrap_or(0), r.is_eliminated());
    }

    pub fn add_verdict(&mut self, k: u64, eliminated: bool) {
        self.cells += 1;
        if eliminated {
            self.eliminated += 1;
        } else {
            self.survivors.push(k);
        }
    }

    pub fn verdict(&self) -> Verdict {
        if self.survivors.is_empty() {
            Verdict::Eliminated
        } else {
            Verdict::Survives
        }
    }

    /// One line of human-readable text.
    pub fn text_line(&self) -> String {
        let range = if self.cells == 0 {
            "no admissible k".to_string()
        } else {
            format!("{} of {} block sizes eliminated", self.eliminated, self.cells)
        };
        match self.verdict() {
            Verdict::Eliminated => format!("{} v={}: eliminated ({range})", self.family, self.v),
            Verdict::Survives => format!(
                "{} v={}: arithmetic survivor at k={:?}, not decided by these rules ({range})",
                self.family, self.v, self.survivors
            ),
        }
    }
}

/// CSV header of elimination reports.
pub const CSV_HEADER: [&str; 7] = ["family", "v", "k", "rule", "witness_lhs", "witness_rhs", "verdict"];

/// Streaming CSV writer: one row per fired rule, one row with empty rule and
/// witness fields for a surviving report.
pub struct CsvReportWriter<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> CsvReportWriter<W> {
    pub fn new(w: W) -> Result<Self> {
        let mut inner = csv::Writer::from_writer(w);
        inner.write_record(CSV_HEADER).map_err(io_err)?;
        Ok(CsvReportWriter { inner })
    }

    /// Rows only, for appending to output that already has the header.
    pub fn without_header(w: W) -> Self {
        CsvReportWriter {
            inner: csv::Writer::from_writer(w),
        }
    }

    pub fn write(&mut self, r: &EliminationReport) -> Result<()> {
        let fam = r.family_name();
        let v = r.v.to_string();
        let verdict = r.verdict.label();
        if r.rules_fired.is_empty() {
            let k = r.k.map(|k| k.to_string()).unwrap_or_default();
            return self
                .inner
                .write_record([fam.as_str(), &v, &k, "", "", "", verdict])
                .map_err(io_err);
        }
        for f in &r.rules_fired {
            let k = f.k.or(r.k).map(|k| k.to_string()).unwrap_or_default();
            let rule = f.rule.to_string();
            self.inner
                .write_record([
                    fam.as_str(),
                    &v,
                    &k,
                    &rule,
                    &f.lhs.to_string(),
                    &f.rhs.to_string(),
                    verdict,
                ])
                .map_err(io_err)?;
        }
        Ok(())
    }

    pub fn finish(mut self) -> Result<W> {
        self.inner.flush().map_err(|e| io_err(e.into()))?;
        self.inner.into_inner().map_err(|e| io_err(e.into_error().into()))
    }
}

fn io_err(e: csv::Error) -> Error {
    Error::Usage(format!("write failed: {e}"))
}

/// One parsed CSV row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsvRow {
    pub family: String,
    pub v: u64,
    pub k: Option<u64>,
    pub rule: Option<String>,
    pub witness_lhs: Option<String>,
    pub witness_rhs: Option<String>,
    pub verdict: Verdict,
}

/// Parses CSV written by [`CsvReportWriter`], checking the header.
pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let header = rd.headers().map_err(|e| parse_err(1, e))?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Parse {
            line: 1,
            msg: format!("expected header {}", CSV_HEADER.join(",")),
        });
    }
    rd.deserialize()
        .enumerate()
        .map(|(i, row)| row.map_err(|e| parse_err(i + 2, e)))
        .collect()
}

fn parse_err(line: usize, e: csv::Error) -> Error {
    Error::Parse {
        line,
        msg: e.to_string(),
    }
}

/// Reports as a JSON array, one report per line.
pub fn reports_to_json(reports: &[EliminationReport]) -> String {
    let mut s = String::from("[");
    for (i, r) in reports.iter().enumerate() {
        s.push_str(if i == 0 { "\n" } else { ",\n" });
        s.push_str(&serde_json::to_string(r).expect("report serializes"));
    }
    s.push_str(if reports.is_empty() { "]\n" } else { "\n]\n" });
    s
}

pub fn reports_from_json(text: &str) -> Result<Vec<EliminationReport>> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        msg: e.to_string(),
    })
}
