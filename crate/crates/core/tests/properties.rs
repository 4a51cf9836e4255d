//! Randomized invariants with a fixed seed.

use proptest::prelude::*;
use proptest::test_runner::RngSeed;

use phylotope::gorenstein::gorenstein_index;
use phylotope::group::{enumerate_automorphisms, CayleyTable, GroupSpec};
use phylotope::kernel::{compositions, HullBounds};
use phylotope::model::{
    apply_all, undo_all, GPresentation, LatticePoint, ModelPolytope, SymmetryAction, Tree,
};
use phylotope::normality::{decompose_brute, validate_decomposition};
use phylotope::z3::{a_tuples, is_normalized, s_value, ATuple, Family, Z3Claw};

const SEED: u64 = 0x7068_796c_6f74;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        rng_seed: RngSeed::Fixed(SEED),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

const GROUPS: &[&str] = &[
    "Z2", "Z3", "Z4", "Z2xZ2", "Z5", "Z6", "Z2xZ3", "Z8", "Z2xZ4",
];

fn group(s: &str) -> GroupSpec {
    s.parse().unwrap()
}

/// A random action valid on `m` edges over `g`.
fn action(g: &GroupSpec, m: usize, choice: usize, seed: &[usize]) -> SymmetryAction {
    let n = g.order();
    let t = CayleyTable::new(g);
    match choice % 3 {
        0 => {
            let mut h: Vec<usize> = (0..m - 1).map(|j| seed[j] % n).collect();
            h.push(t.neg(t.sum(h.iter().copied())));
            SymmetryAction::Translate { h }
        }
        1 => {
            let mut sigma: Vec<usize> = (0..m).collect();
            for j in (1..m).rev() {
                sigma.swap(j, seed[j] % (j + 1));
            }
            SymmetryAction::PermuteEdges { sigma }
        }
        _ => {
            let auts = enumerate_automorphisms(g).unwrap();
            let a = &auts[seed[0] % auts.len()];
            SymmetryAction::Automorphism {
                images: a.images().to_vec(),
            }
        }
    }
}

/// A point with nonnegative blocks of equal sum `k`.
fn block_point(n: usize, m: usize, k: i64, seed: &[usize]) -> Vec<i64> {
    let comps = compositions(k, n);
    (0..m)
        .flat_map(|j| comps[seed[j] % comps.len()].clone())
        .collect()
}

proptest! {
    #![proptest_config(config(128))]

    #[test]
    fn group_laws(gi in 0..GROUPS.len(), a in 0usize..8, b in 0usize..8, c in 0usize..8) {
        let g = group(GROUPS[gi]);
        let n = g.order();
        let (a, b, c) = (g.element_at(a % n), g.element_at(b % n), g.element_at(c % n));
        prop_assert_eq!(g.op(&g.op(&a, &b)?, &c)?, g.op(&a, &g.op(&b, &c)?)?);
        prop_assert_eq!(g.op(&a, &b)?, g.op(&b, &a)?);
        prop_assert_eq!(g.op(&a, &g.neg(&a)?)?, g.identity());
        prop_assert_eq!(g.element_at(g.index_of(&a)?), a.clone());
        prop_assert_eq!(g.scale(g.element_order(&a) as i64, &a)?, g.identity());
    }

    #[test]
    fn lattice_membership_is_action_invariant(
        gi in 0..GROUPS.len(), m in 3usize..5, k in 1i64..4, choice in 0usize..3,
        seed in prop::collection::vec(0usize..1000, 4),
    ) {
        let g = group(GROUPS[gi]);
        let p = ModelPolytope::claw_polytope(&g, m)?;
        let a = action(&g, m, choice, &seed);
        p.validate_action(&a)?;
        let x = block_point(g.order(), m, k, &seed);
        let y = p.apply_action(&a, &x)?;
        let member = p.lattice_membership(&x)?;
        prop_assert_eq!(member, p.lattice_membership(&y)?);
        prop_assert_eq!(member, p.lattice().contains(&x));
        let back = p.apply_action(&a.inverse(p.table()), &y)?;
        prop_assert_eq!(back, x);
    }

    #[test]
    fn actions_permute_vertices(gi in 0..GROUPS.len(), choice in 0usize..3, seed in prop::collection::vec(0usize..1000, 3)) {
        let g = group(GROUPS[gi]);
        let p = ModelPolytope::claw_polytope(&g, 3)?;
        let a = action(&g, 3, choice, &seed);
        let mut images: Vec<Vec<i64>> = p.vertices().iter().map(|v| p.apply_action(&a, v).unwrap()).collect();
        images.sort_unstable_by(|x, y| y.cmp(x));
        prop_assert_eq!(images.as_slice(), p.vertices());
    }

    #[test]
    fn vertex_sums_lie_in_the_dilation(gi in 0..5usize, k in 1usize..4, picks in prop::collection::vec(0usize..1000, 3)) {
        let mut p = ModelPolytope::claw_polytope(&group(GROUPS[gi]), 3)?;
        p.ensure_facets(HullBounds::default())?;
        let mut x = vec![0; p.ambient_dim()];
        for &i in &picks[..k] {
            let v = &p.vertices()[i % p.vertices().len()];
            x.iter_mut().zip(v).for_each(|(a, b)| *a += b);
        }
        prop_assert!(p.in_dilation(&x, k as i64)?);
    }

    #[test]
    fn presentation_round_trip(gi in 0..GROUPS.len(), k in 1i64..4, seed in prop::collection::vec(0usize..1000, 3)) {
        let g = group(GROUPS[gi]);
        let x = block_point(g.order(), 3, k, &seed);
        let lp = LatticePoint::new(x.clone(), g.order())?;
        let pres = GPresentation::from_point(&lp, &g)?;
        prop_assert!(pres.multisets.iter().all(|s| s.len() == k as usize));
        prop_assert_eq!(pres.to_point(&g)?.into_coords(), x);
    }

    #[test]
    fn serde_round_trips(gi in 0..GROUPS.len(), choice in 0usize..3, seed in prop::collection::vec(0usize..1000, 4)) {
        let g = group(GROUPS[gi]);
        let back: GroupSpec = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(&g.to_string().parse::<GroupSpec>()?, &g);
        let a = action(&g, 4, choice, &seed);
        let back: SymmetryAction = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
        prop_assert_eq!(back, a);
        let p = ModelPolytope::claw_polytope(&g, 3)?;
        let json = serde_json::to_string(&p.to_record()).unwrap();
        let q = ModelPolytope::from_record(&serde_json::from_str(&json).unwrap())?;
        prop_assert_eq!(q.vertices(), p.vertices());
    }

    #[test]
    fn tree_text_round_trip(leaves in 3usize..7) {
        let t = Tree::caterpillar(leaves)?;
        prop_assert_eq!(Tree::parse(&t.to_text())?, t.clone());
        let back: Tree = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
        prop_assert_eq!(back, t);
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn normalize_trace_inverts(m in 3usize..5, k in 1i64..5, pick in 0usize..100_000) {
        let claw = Z3Claw::new(m)?;
        let points = claw.polytope().dilation_points(k, false)?;
        let x = &points[pick % points.len()];
        let tr = claw.normalize(x, k)?;
        let t = claw.polytope().table();
        prop_assert!(is_normalized(&tr.point));
        prop_assert_eq!(&apply_all(&tr.actions, x, t)?, &tr.point);
        prop_assert_eq!(&undo_all(&tr.actions, &tr.point, t)?, x);
    }

    #[test]
    fn decompositions_sum_to_their_input(m in 3usize..5, k in 1i64..5, pick in 0usize..100_000) {
        let claw = Z3Claw::new(m)?;
        let p = claw.polytope();
        let points = p.dilation_points(k, false)?;
        let x = &points[pick % points.len()];
        let d = claw.decompose(x, k)?;
        prop_assert!(validate_decomposition(p, x, k, &d.vertices));
        let b = decompose_brute(x, k, p)?;
        prop_assert!(validate_decomposition(p, x, k, b.vertices().unwrap()));
    }

    #[test]
    fn s_values_are_congruent(m in 3usize..5, k in 1i64..4, pick in 0usize..100_000, ti in 0usize..1000, w in any::<bool>()) {
        let claw = Z3Claw::new(m)?;
        let points = claw.polytope().dilation_points(k, false)?;
        let x = &points[pick % points.len()];
        let tuples = a_tuples(m);
        let family = if w { Family::W } else { Family::U };
        let a = ATuple::new(tuples[ti % tuples.len()].clone(), family)?;
        prop_assert_eq!((s_value(x, &a)? - 2 * k).rem_euclid(3), 0);
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn gorenstein_verdict_is_action_invariant(case in 0usize..5, choice in 0usize..3, seed in prop::collection::vec(0usize..1000, 4)) {
        let (g, m) = [("Z2", 3), ("Z2", 4), ("Z3", 3), ("Z3", 4), ("Z2", 5)][case];
        let g = group(g);
        let mut p = ModelPolytope::claw_polytope(&g, m)?;
        p.ensure_facets(HullBounds::default())?;
        let q = p.transformed(&action(&g, m, choice, &seed))?;
        let (a, b) = (gorenstein_index(&p, None)?, gorenstein_index(&q, None)?);
        prop_assert_eq!(a.index(), b.index());
        prop_assert_eq!(a.minimal_k, b.minimal_k);
        prop_assert_eq!(a.interior_count, b.interior_count);
    }
}
