use std::collections::{HashSet, VecDeque};

use affdes_core::gfspace::prime_power;
use affdes_core::permgroup::{gl_order, sp_order, FamilyTag, FiniteGroup, GroupFamily, Permutation};
use num_bigint::BigUint;
use proptest::prelude::*;

/// Every element of the group, by breadth-first closure under the generators.
fn elements(v: u32, gens: &[Permutation], cap: usize) -> HashSet<Vec<u32>> {
    let id: Vec<u32> = (0..v).collect();
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y: Vec<u32> = x.iter().map(|&p| g.apply(p)).collect();
            if seen.insert(y.clone()) {
                assert!(seen.len() <= cap, "oracle cap exceeded");
                queue.push_back(y);
            }
        }
    }
    seen
}

fn kantor_group() -> FiniteGroup {
    // x -> x + 1 and x -> 2x on GF(7); 2 generates the squares
    let shift = Permutation::from_images((0..7).map(|x| (x + 1) % 7).collect()).unwrap();
    let square = Permutation::from_images((0..7).map(|x| (2 * x) % 7).collect()).unwrap();
    FiniteGroup::new(7, vec![shift, square]).unwrap()
}

#[test]
fn family_orders_match_element_enumeration() {
    for fam in [
        GroupFamily::agl(2, 2),
        GroupFamily::agl(2, 3),
        GroupFamily::agl(3, 2),
        GroupFamily::agl(2, 5),
        GroupFamily::agammal1(2, 3),
        GroupFamily::agammal1(3, 2),
        GroupFamily::agammal1(2, 4),
        GroupFamily::agammal1(5, 2),
        GroupFamily::new(FamilyTag::ASL, 2, 3, 1).unwrap(),
        GroupFamily::new(FamilyTag::ASL, 2, 2, 1).unwrap(),
    ] {
        let g = fam.build().unwrap();
        let all = elements(g.degree(), g.generators(), 200_000);
        assert_eq!(g.order().unwrap(), BigUint::from(all.len()), "{fam}");
    }
}

#[test]
fn family_orders_against_formulas() {
    let cases: [(GroupFamily, u64); 6] = [
        (GroupFamily::agl(3, 2), 1344),
        (GroupFamily::agl(4, 2), 322560),
        (GroupFamily::agammal1(2, 3), 168),
        (GroupFamily::agammal1(2, 5), 32 * 31 * 5),
        (GroupFamily::new(FamilyTag::ASp, 2, 2, 1).unwrap(), 16 * 720),
        (GroupFamily::new(FamilyTag::ASp, 2, 3, 1).unwrap(), 81 * 51840),
    ];
    for (fam, order) in cases {
        assert_eq!(fam.build().unwrap().order().unwrap(), BigUint::from(order), "{fam}");
    }
    // Sp(6,2) as the point stabilizer of ASp(6,2)
    let asp62 = GroupFamily::new(FamilyTag::ASp, 3, 2, 1).unwrap().build().unwrap();
    assert_eq!(asp62.order().unwrap(), BigUint::from(64u64 * 1451520));
    assert_eq!(sp_order(4, 2), BigUint::from(720u32));
    assert_eq!(sp_order(4, 3), BigUint::from(51840u32));
    assert_eq!(sp_order(6, 2), BigUint::from(1451520u32));
    assert_eq!(gl_order(3, 2), BigUint::from(168u32));
}

#[test]
fn built_groups_divide_their_bounds() {
    for fam in [
        GroupFamily::agl(3, 2),
        GroupFamily::agl(2, 7),
        GroupFamily::agammal1(3, 3),
        GroupFamily::new(FamilyTag::ASp, 2, 2, 1).unwrap(),
        GroupFamily::new(FamilyTag::ASL, 4, 2, 2).unwrap(),
    ] {
        let order = fam.build().unwrap().order().unwrap();
        assert_eq!(fam.order_bound() % &order, BigUint::default(), "{fam}");
    }
}

#[test]
fn agl_transitivity() {
    for (d, p) in [(2, 2), (3, 2), (4, 2), (2, 3), (2, 5), (3, 3)] {
        let g = GroupFamily::agl(d, p).build().unwrap();
        assert!(g.is_t_transitive(2).unwrap(), "AGL({d},{p})");
        assert_eq!(g.is_t_transitive(3).unwrap(), p == 2, "AGL({d},{p})");
    }
}

#[test]
fn kantor_group_is_homogeneous_not_transitive() {
    let g = kantor_group();
    assert_eq!(g.order().unwrap(), BigUint::from(21u32));
    assert!(g.is_t_homogeneous(2).unwrap());
    assert!(!g.is_t_transitive(2).unwrap());

    // direct orbit counts on ordered and unordered pairs
    let all = elements(7, g.generators(), 100);
    let mut ordered: HashSet<Vec<(u32, u32)>> = HashSet::new();
    let mut unordered: HashSet<Vec<(u32, u32)>> = HashSet::new();
    for x in 0..7u32 {
        for y in 0..7u32 {
            if x == y {
                continue;
            }
            let mut o: Vec<(u32, u32)> = all.iter().map(|e| (e[x as usize], e[y as usize])).collect();
            o.sort_unstable();
            o.dedup();
            ordered.insert(o);
            let mut u: Vec<(u32, u32)> = all
                .iter()
                .map(|e| {
                    let (a, b) = (e[x as usize], e[y as usize]);
                    (a.min(b), a.max(b))
                })
                .collect();
            u.sort_unstable();
            u.dedup();
            unordered.insert(u);
        }
    }
    assert_eq!(ordered.len(), 2);
    assert_eq!(unordered.len(), 1);
}

#[test]
fn agammal1_matches_semilinear_maps() {
    // x -> c x^(2^i) + u on GF(8) under the default modulus
    let fam = GroupFamily::agammal1(2, 3);
    let g = fam.build().unwrap();
    let field = affdes_core::FieldSpec::new(2, 3).unwrap();
    let mut count = 0;
    for c in 1..8 {
        for i in 0..3 {
            for u in 0..8 {
                let images: Vec<u32> = (0..8)
                    .map(|x| {
                        let mut y = x;
                        for _ in 0..i {
                            y = field.frobenius_r(y);
                        }
                        field.add_r(field.mul_r(c, y), u)
                    })
                    .collect();
                assert!(g.contains(&Permutation::from_images(images).unwrap()).unwrap());
                count += 1;
            }
        }
    }
    assert_eq!(BigUint::from(count as u32), g.order().unwrap());
}

fn random_perm(v: u32) -> impl Strategy<Value = Permutation> {
    Just((0..v).collect::<Vec<u32>>())
        .prop_shuffle()
        .prop_map(|images| Permutation::from_images(images).unwrap())
}

fn small_group() -> impl Strategy<Value = FiniteGroup> {
    (3u32..=7).prop_flat_map(|v| {
        prop::collection::vec(random_perm(v), 1..=3)
            .prop_map(move |gens| FiniteGroup::new(v, gens).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn order_matches_enumeration(g in small_group()) {
        let all = elements(g.degree(), g.generators(), 10_000);
        prop_assert_eq!(g.order().unwrap(), BigUint::from(all.len()));
        for e in all.iter().take(50) {
            prop_assert!(g.contains(&Permutation::from_images(e.clone()).unwrap()).unwrap());
        }
    }

    #[test]
    fn membership_rejects_outsiders(g in small_group(), h in (3u32..=7).prop_flat_map(random_perm)) {
        prop_assume!(h.degree() == g.degree());
        let all = elements(g.degree(), g.generators(), 10_000);
        prop_assert_eq!(g.contains(&h).unwrap(), all.contains(h.images()));
    }

    #[test]
    fn orbit_stabilizer(g in small_group(), k in 1u32..=3) {
        prop_assume!(k < g.degree());
        let set: Vec<u32> = (0..k).collect();
        let orbit = g.orbit_of_set(&set).unwrap();
        let stab = g.stabilizer_order_of_set(&set).unwrap();
        prop_assert_eq!(BigUint::from(orbit.len()) * stab, g.order().unwrap());
    }

    #[test]
    fn point_orbits_partition(g in small_group()) {
        let orbits = g.orbits();
        let mut all: Vec<u32> = orbits.iter().flatten().copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..g.degree()).collect::<Vec<_>>());
        for o in &orbits {
            prop_assert_eq!(&g.orbit(o[0]).unwrap(), o);
        }
    }

    #[test]
    fn compose_is_left_action(v in 2u32..9, seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut a: Vec<u32> = (0..v).collect();
        let mut b = a.clone();
        a.shuffle(&mut rng);
        b.shuffle(&mut rng);
        let (g, h) = (Permutation::from_images(a).unwrap(), Permutation::from_images(b).unwrap());
        let gh = g.compose(&h).unwrap();
        for x in 0..v {
            prop_assert_eq!(gh.apply(x), g.apply(h.apply(x)));
        }
        prop_assert!(g.compose(&g.inverse()).unwrap().is_identity());
    }
}

#[test]
fn prime_power_factoring_agrees_with_trial_division() {
    for n in 2..5000u64 {
        let mut m = n;
        let mut p = 2;
        while m % p != 0 {
            p += 1;
        }
        let mut d = 0;
        while m % p == 0 {
            m /= p;
            d += 1;
        }
        let expect = (m == 1).then_some((p, d));
        assert_eq!(prime_power(n), expect, "{n}");
    }
}
