use std::collections::{BTreeSet, HashMap};

use affdes_core::combin::{for_each_subset, next_combination};
use affdes_core::orbits::{
    alltop_scan, design_strength, enumerate_orbits, enumerate_orbits_with_strength, steiner_orbit_search,
    AlltopScope, OrbitReport,
};
use affdes_core::permgroup::{FamilyTag, FiniteGroup, GroupFamily, Permutation};
use affdes_core::Guard;
use proptest::prelude::*;

/// Orbits on k-subsets by union-find over generator images.
fn union_find_orbits(g: &FiniteGroup, k: u32) -> BTreeSet<BTreeSet<Vec<u32>>> {
    let mut subsets = Vec::new();
    let mut c: Vec<u32> = (0..k).collect();
    loop {
        subsets.push(c.clone());
        if !next_combination(&mut c, g.degree()) {
            break;
        }
    }
    let index: HashMap<Vec<u32>, usize> = subsets.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let mut parent: Vec<usize> = (0..subsets.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (i, s) in subsets.iter().enumerate() {
        for gen in g.generators() {
            let mut img: Vec<u32> = s.iter().map(|&x| gen.apply(x)).collect();
            img.sort_unstable();
            let (a, b) = (find(&mut parent, i), find(&mut parent, index[&img]));
            parent[a] = b;
        }
    }
    let mut classes: HashMap<usize, BTreeSet<Vec<u32>>> = HashMap::new();
    for (i, s) in subsets.iter().enumerate() {
        let r = find(&mut parent, i);
        classes.entry(r).or_default().insert(s.clone());
    }
    classes.into_values().collect()
}

/// For each s-subset, the number of blocks containing it.
fn direct_coverage(blocks: &[Vec<u32>], v: u32, s: u32) -> Vec<usize> {
    let mut out = Vec::new();
    let mut c: Vec<u32> = (0..s).collect();
    loop {
        out.push(blocks.iter().filter(|b| c.iter().all(|x| b.contains(x))).count());
        if !next_combination(&mut c, v) {
            break;
        }
    }
    out
}

fn random_group() -> impl Strategy<Value = FiniteGroup> {
    (4u32..=9).prop_flat_map(|v| {
        let perm = Just((0..v).collect::<Vec<u32>>())
            .prop_shuffle()
            .prop_map(|im| Permutation::from_images(im).unwrap());
        prop::collection::vec(perm, 1..=2).prop_map(move |gens| FiniteGroup::new(v, gens).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn orbits_match_union_find(g in random_group(), k in 1u32..=4) {
        prop_assume!(k <= g.degree());
        let ours = enumerate_orbits(&g, k, &Guard::default()).unwrap();
        let got: BTreeSet<BTreeSet<Vec<u32>>> =
            ours.iter().map(|o| o.blocks().into_iter().collect()).collect();
        prop_assert_eq!(&got, &union_find_orbits(&g, k));
        for o in &ours {
            // representative is the least member
            prop_assert_eq!(&o.representative, &o.blocks()[0]);
            prop_assert_eq!(o.size as usize, o.blocks().len());
        }
    }

    #[test]
    fn strength_profiles_match_direct_counts(g in random_group(), k in 2u32..=4) {
        prop_assume!(k < g.degree());
        for o in enumerate_orbits_with_strength(&g, k, k, &Guard::default()).unwrap() {
            let blocks = o.blocks();
            for e in &o.coverage {
                let counts = direct_coverage(&blocks, g.degree(), e.s);
                let (min, max) = (*counts.iter().min().unwrap() as u64, *counts.iter().max().unwrap() as u64);
                prop_assert_eq!(e.uniform, min == max);
                if e.uniform {
                    prop_assert_eq!(e.lambda, Some(min));
                } else {
                    prop_assert_eq!((e.min, e.max), (Some(min), Some(max)));
                }
            }
            prop_assert_eq!(&design_strength(&o, k, &Guard::default()).unwrap(), &o.coverage);
        }
    }
}

#[test]
fn agl32_orbit_sizes_sum_to_binomials() {
    let g = GroupFamily::agl(3, 2).build().unwrap();
    for (k, total) in [(1, 8), (2, 28), (3, 56), (4, 70), (5, 56)] {
        let orbits = enumerate_orbits(&g, k, &Guard::default()).unwrap();
        assert_eq!(orbits.iter().map(|o| o.size).sum::<u64>(), total);
    }
}

#[test]
fn steiner_search_finds_known_systems() {
    let agl32 = GroupFamily::agl(3, 2).build().unwrap();
    let found = steiner_orbit_search(&agl32, 3, 4, &Guard::default()).unwrap();
    assert_eq!(found.len(), 1);
    assert_eq!(found[0].size, 14);
    let agl23 = GroupFamily::agl(2, 3).build().unwrap();
    let lines = steiner_orbit_search(&agl23, 2, 3, &Guard::default()).unwrap();
    assert_eq!(lines.len(), 1);
    assert_eq!(lines[0].size, 12);
    assert!(lines[0].to_design().verify(2, Some(1), &Guard::default()).unwrap().holds);
}

#[test]
fn alltop_on_agl32() {
    let g = GroupFamily::agl(3, 2).build().unwrap();
    let rep = alltop_scan(&g, 5..=6, AlltopScope::AffineGf2, &Guard::default()).unwrap();
    assert!(rep.implication_holds());
    // complementary orbits of 5- and 3-subsets: every 5-subset orbit is checked
    assert!(rep.records.iter().any(|r| r.k == 5));
}

#[test]
fn arithmetic_only_families_have_no_groups() {
    for tag in [FamilyTag::AG2, FamilyTag::Case5, FamilyTag::Case7, FamilyTag::Case8] {
        let fam = match tag {
            FamilyTag::AG2 => GroupFamily::ag2(1),
            t => GroupFamily::case(t),
        };
        let err = fam.build().unwrap_err();
        assert!(err.to_string().contains("arithmetic-only"), "{err}");
    }
}

#[test]
fn report_round_trips() {
    let g = GroupFamily::agl(3, 2).build().unwrap();
    let orbits = enumerate_orbits_with_strength(&g, 4, 3, &Guard::default()).unwrap();
    let rep = OrbitReport::new("AGL(3,2)", 8, 4, &orbits);
    let json = rep.to_json();
    let back = OrbitReport::parse_json(&json).unwrap();
    assert_eq!(back, rep);
    assert_eq!(back.to_json(), json);
}

#[test]
fn guard_limits_enumeration() {
    let g = GroupFamily::agl(4, 2).build().unwrap();
    let err = enumerate_orbits(&g, 8, &Guard::new(1000)).unwrap_err();
    assert!(matches!(err, affdes_core::Error::Resource { .. }));
}

#[test]
fn subsets_helper_visits_all() {
    let mut n = 0;
    for_each_subset(&[1, 4, 6, 9, 11], 3, |s| {
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        n += 1;
    });
    assert_eq!(n, 10);
}
