use affdes_core::design::{k_max, DesignParams};
use affdes_core::gfspace::prime_power;
use affdes_core::orbits::enumerate_orbits_with_strength;
use affdes_core::permgroup::{FamilyTag, GroupFamily};
use affdes_core::sieve::{
    admissible, agammal1_elimination, family_instances, family_scan, CellEvaluator, order_divisibility, reports_to_json, FamilySelector, RuleId,
    Verdict,
};
use affdes_core::Guard;
use proptest::prelude::*;

/// No rule may eliminate a design that actually occurs as a block orbit.
#[test]
fn orbit_designs_are_never_eliminated() {
    let fams = [
        GroupFamily::agl(2, 3),
        GroupFamily::agl(3, 2),
        GroupFamily::agl(2, 2),
        GroupFamily::agammal1(2, 3),
        GroupFamily::agammal1(3, 2),
        GroupFamily::agammal1(2, 4),
        GroupFamily::new(FamilyTag::ASp, 2, 2, 1).unwrap(),
    ];
    let mut checked = 0;
    for fam in fams {
        let g = fam.build().unwrap();
        let v = g.degree();
        for k in 2..v.min(8) {
            for o in enumerate_orbits_with_strength(&g, k, k.min(4), &Guard::default()).unwrap() {
                for e in o.coverage.iter().filter(|e| e.is_design()) {
                    if e.s >= k {
                        continue;
                    }
                    let p = DesignParams::new(e.s as u64, v as u64, k as u64, e.lambda.unwrap()).unwrap();
                    let rep = order_divisibility(&p, &fam).unwrap();
                    assert_eq!(rep.verdict, Verdict::Survives, "{p} under {fam}: {:?}", rep.rules_fired);
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 50);
}

#[test]
fn agammal1_agrees_with_direct_search() {
    for v in 2..20_000u64 {
        let Some((_, d)) = prime_power(v) else {
            assert!(agammal1_elimination(v).is_err());
            continue;
        };
        // largest k allowed by the quadratic bound, found by walking up
        let mut kmax = 0u64;
        while {
            let x = 2 * (kmax + 1) as i128 - 7;
            x < 0 || x * x <= 4 * v as i128 - 15
        } {
            kmax += 1;
        }
        let hi = kmax.min(v - 1);
        let passing: Vec<u64> = (6..=hi).filter(|&k| (v - 2) * (v - 3) <= k * (k - 1) * (k - 2) * d as u64).collect();
        let rep = agammal1_elimination(v).unwrap();
        assert!(rep.is_eliminated(), "v = {v}");
        assert!(rep.recheck());
        for k in (6..=hi).filter(|k| !passing.contains(k)) {
            assert!(rep.rules_fired.iter().any(|f| f.k == Some(k) && f.rule == RuleId::AGammaL1Inequality));
        }
        // block sizes the inequality lets through are caught by the other rules
        for &k in &passing {
            assert!(v <= 64, "v = {v}, k = {k}");
            let fired: Vec<_> = rep.rules_fired.iter().filter(|f| f.k == Some(k)).collect();
            assert!(!fired.is_empty() && fired.iter().all(|f| f.rule != RuleId::AGammaL1Inequality));
        }
    }
}

#[test]
fn scans_are_deterministic_and_sorted() {
    for tag in [FamilyTag::AGL, FamilyTag::ASp, FamilyTag::AGammaL1, FamilyTag::Case6] {
        let sel = FamilySelector::new(tag);
        let a = family_scan(&sel, 4, 1..=3000).unwrap();
        let b = family_scan(&sel, 4, 1..=3000).unwrap();
        assert_eq!(reports_to_json(&a), reports_to_json(&b));
        assert!(a.windows(2).all(|w| (w[0].v, w[0].k) <= (w[1].v, w[1].k) || w[0].family != w[1].family));
        assert!(a.iter().all(|r| r.recheck()));
    }
}

#[test]
fn case8_reports_every_k() {
    let reps = family_scan(&FamilySelector::new(FamilyTag::Case8), 4, 1..=1000).unwrap();
    assert_eq!(reps.iter().map(|r| r.k.unwrap()).collect::<Vec<_>>(), (5..=29).collect::<Vec<_>>());
    assert_eq!(k_max(4, 729).unwrap(), 29);
    assert!(reps.iter().all(|r| r.recheck()));
}

#[test]
fn fast_verdicts_match_full_reports() {
    for tag in [FamilyTag::AGL, FamilyTag::AGammaL1, FamilyTag::ASp, FamilyTag::ASL, FamilyTag::Case6] {
        for t in [4, 5] {
            for fam in family_instances(&FamilySelector::new(tag), 1..=5000).unwrap() {
                let ev = CellEvaluator::new(fam, t);
                for k in ev.k_range() {
                    assert_eq!(ev.is_eliminated(k).unwrap(), ev.evaluate(k).unwrap().is_eliminated(), "{fam} k={k}");
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn witnesses_recheck(t in 1u64..=9, v in 2u64..400, k in 1u64..60, lambda in 1u64..=3) {
        prop_assume!(t <= k && k <= v);
        let p = DesignParams::new(t, v, k, lambda).unwrap();
        let rep = admissible(&p);
        prop_assert!(rep.recheck());
        prop_assert_eq!(rep.is_eliminated(), !rep.rules_fired.is_empty());
        for f in &rep.rules_fired {
            prop_assert!(!f.holds());
        }
        if t > 7 {
            prop_assert!(rep.fired(RuleId::TCap).is_some());
        }
        if !p.is_admissible_arithmetically() {
            prop_assert!(rep.is_eliminated());
        }
    }

    #[test]
    fn family_witnesses_recheck(d in 2u32..=6, p in prop::sample::select(vec![2u32, 3, 5, 7]), t in 4u64..=5) {
        let fam = GroupFamily::agl(d, p);
        prop_assume!(fam.degree() <= 20_000);
        let v = fam.degree();
        if let Ok(km) = k_max(t, v) {
            for k in (t + 1)..=km.min(v - 1) {
                let rep = order_divisibility(&DesignParams::steiner(t, v, k).unwrap(), &fam).unwrap();
                prop_assert!(rep.recheck());
            }
        }
    }

    #[test]
    fn k_max_is_monotone(t in 4u64..=5, v in 6u64..1_000_000) {
        prop_assert!(k_max(t, v).unwrap() <= k_max(t, v + 1).unwrap());
    }
}
