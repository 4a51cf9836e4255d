//! Acceptance suite: one line per criterion, exact comparisons only.
//!
//! Runs under `cargo test` with its own harness so the lines are always shown.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestRunner};
use rayon::prelude::*;

use phylotope::fiber::{
    fiber_facet_candidates, fiber_product, same_hyperplanes, verify_fibgor, CrossCheck,
    FibGorOptions, SimplexProjection,
};
use phylotope::gorenstein::{gorenstein_index, kimura_facets};
use phylotope::group::{enumerate_automorphisms, CayleyTable, GroupSpec};
use phylotope::kernel::{
    adjacent_vertices, compositions, enumerate_facets, lattice_distance, verify_facet, HullBounds,
};
use phylotope::model::{apply_all, undo_all, ModelPolytope, SymmetryAction};
use phylotope::normality::{
    check_normality, decompose_brute, nonnormal_witness, validate_decomposition, NormalityBounds,
};
use phylotope::z3::{a_tuples, s_value, vertex_zero, z3_facet_list, ATuple, Family, Z3Claw};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn group(s: &str) -> GroupSpec {
    s.parse().unwrap()
}

fn claw(g: &str, m: usize) -> ModelPolytope {
    ModelPolytope::claw_polytope(&group(g), m).unwrap()
}

fn with_facets(g: &str, m: usize) -> ModelPolytope {
    let mut p = claw(g, m);
    p.ensure_facets(HullBounds::default()).unwrap();
    p
}

fn vertex_fidelity() -> Check {
    let p = claw("Z2", 3);
    let got: BTreeSet<Vec<i64>> = p.vertices().iter().cloned().collect();
    let want: BTreeSet<Vec<i64>> = [
        vec![1, 0, 1, 0, 1, 0],
        vec![0, 1, 0, 1, 1, 0],
        vec![0, 1, 1, 0, 0, 1],
        vec![1, 0, 0, 1, 0, 1],
    ]
    .into();
    ensure!(got == want, "Z2 tripod vertices {got:?}");
    let mut checked = 0;
    for g in [
        "Z2", "Z3", "Z4", "Z2xZ2", "Z6", "Z2xZ3", "Z8", "Z2xZ4", "Z2^3",
    ] {
        let n = group(g).order();
        for m in [3u32, 4] {
            let count = claw(g, m as usize).vertices().len();
            ensure!(count == n.pow(m - 1), "{g}, m = {m}: {count} vertices");
            checked += 1;
        }
    }
    Ok(format!(
        "tripod matches; {checked} vertex counts equal |G|^(m-1)"
    ))
}

fn facets_z3() -> Check {
    let mut counts = Vec::new();
    for m in [3, 4] {
        let p = claw("Z3", m);
        let closed = z3_facet_list(m, 1).unwrap().inequalities();
        let brute = enumerate_facets(p.vertices(), p.lattice(), HullBounds::default()).unwrap();
        ensure!(
            same_hyperplanes(p.vertices(), &closed, &brute),
            "m = {m}: closed {} vs enumerated {}",
            closed.len(),
            brute.len()
        );
        counts.push(brute.len());
    }
    let p = claw("Z3", 5);
    let closed = z3_facet_list(5, 1).unwrap().inequalities();
    let bad = closed
        .par_iter()
        .filter(|f| !matches!(verify_facet(p.vertices(), p.lattice(), &f.functional, f.rhs), Ok(c) if c.facet == **f))
        .count();
    ensure!(bad == 0, "m = 5: {bad} closed-form inequalities rejected");
    Ok(format!(
        "m=3: {}, m=4: {} equal as hyperplanes; m=5: {} verified",
        counts[0],
        counts[1],
        closed.len()
    ))
}

fn vert0() -> Check {
    let mut out = Vec::new();
    for (m, want_pairs, want_triples) in [(3, 6, 2), (4, 12, 8)] {
        let p = claw("Z3", m);
        let facets = enumerate_facets(p.vertices(), p.lattice(), HullBounds::default()).unwrap();
        let v0 = p.vertex_index(&vertex_zero(m)).unwrap();
        let nb: BTreeSet<usize> = adjacent_vertices(p.vertices(), &facets, v0)
            .into_iter()
            .map(|c| c.neighbor)
            .collect();
        let support = |i: usize| p.labeling(i).iter().filter(|&&g| g != 0).count();
        let census: BTreeSet<usize> = (0..p.vertices().len())
            .filter(|&i| matches!(support(i), 2 | 3))
            .collect();
        ensure!(nb == census, "m = {m}: neighbours differ from the census");
        let pairs = nb.iter().filter(|&&i| support(i) == 2).count();
        let triples = nb.iter().filter(|&&i| support(i) == 3).count();
        ensure!(
            (pairs, triples) == (want_pairs, want_triples),
            "m = {m}: {pairs} + {triples}"
        );
        out.push(format!("m={m}: {pairs}+{triples}={}", nb.len()));
    }
    Ok(out.join(", "))
}

fn not_normal() -> Check {
    for g in ["Z6", "Z8", "Z2^3", "Z2xZ4"] {
        let gs = group(g);
        let w = nonnormal_witness(&gs).unwrap();
        let p = ModelPolytope::claw_polytope(&gs, 3).unwrap();
        let doubled: Vec<i64> = w.point.iter().map(|c| 2 * c).collect();
        ensure!(
            p.lattice_membership(&w.point).unwrap(),
            "{g}: witness off the lattice"
        );
        ensure!(
            validate_decomposition(&p, &doubled, 8, &w.doubled_decomposition),
            "{g}: 2p is not a sum of 8 vertices"
        );
        ensure!(
            !decompose_brute(&w.point, 4, &p).unwrap().is_decomposable(),
            "{g}: witness decomposes"
        );
        if g == "Z6" {
            ensure!(
                w.doubled_decomposition.len() == 8,
                "Z6: expected the eight displayed terms"
            );
        }
    }
    Ok("Z6, Z8, Z2^3, Z2xZ4 witnesses in 4P ∩ L and indecomposable".into())
}

fn gore() -> Check {
    let cases: [(&str, usize, Option<i64>); 7] = [
        ("Z2", 3, Some(4)),
        ("Z2", 4, Some(2)),
        ("Z3", 3, Some(3)),
        ("Z2xZ2", 3, Some(4)),
        ("Z2", 5, None),
        ("Z3", 4, None),
        ("Z2xZ2", 4, None),
    ];
    for (g, m, want) in cases {
        let r = gorenstein_index(&with_facets(g, m), None).unwrap();
        ensure!(r.index() == want, "({g}, {m}): {:?}", r.verdict);
    }
    for m in [3usize, 4] {
        let p = claw("Z2xZ2", m);
        let omega = vec![1i64; 4 * m];
        for f in &kimura_facets(m, 1).unwrap()[4 * m..] {
            let d = lattice_distance(&omega, &f.dilated(4), p.lattice()).unwrap();
            ensure!(d == (2 * m as i64 - 4) / 2, "m = {m}: distance {d}");
        }
    }
    Ok("indices 4,2,3,4; three NotGorenstein; Kimura distances 1 and 2".into())
}

fn normal_z3() -> Check {
    let mut total = 0;
    for m in [3usize, 4] {
        let claw = Z3Claw::new(m).unwrap();
        let p = claw.polytope();
        let report = check_normality(p, 4, NormalityBounds::default()).unwrap();
        ensure!(
            report.is_normal(),
            "m = {m}: brute force found {:?}",
            report.first_failure()
        );
        for k in 1..=4 {
            let points = p.dilation_points(k, false).unwrap();
            let bad = points
                .par_iter()
                .filter(|x| {
                    let brute = decompose_brute(x, k, p).unwrap().is_decomposable();
                    let constructive = claw
                        .decompose(x, k)
                        .is_ok_and(|d| validate_decomposition(p, x, k, &d.vertices));
                    !(brute && constructive)
                })
                .count();
            ensure!(bad == 0, "m = {m}, k = {k}: {bad} points fail");
            total += points.len();
        }
    }
    Ok(format!("{total} points decomposed by both methods"))
}

fn s_congruence() -> Check {
    let mut checked = 0usize;
    for (m, k_max) in [(3usize, 4i64), (4, 3)] {
        let claw = Z3Claw::new(m).unwrap();
        let tuples: Vec<ATuple> = a_tuples(m)
            .into_iter()
            .flat_map(|e| [Family::U, Family::W].map(|f| ATuple::new(e.clone(), f).unwrap()))
            .collect();
        for k in 1..=k_max {
            for x in claw.polytope().dilation_points(k, false).unwrap() {
                for a in &tuples {
                    let s = s_value(&x, a).unwrap();
                    ensure!(
                        (s - 2 * k).rem_euclid(3) == 0,
                        "m = {m}, k = {k}, {x:?}: S = {s}"
                    );
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} (point, A) pairs"))
}

fn fibgor() -> Check {
    let (last, first) = (SimplexProjection { edge: 2 }, SimplexProjection { edge: 0 });
    let options = FibGorOptions::default();
    let mut notes = Vec::new();
    for (g, want) in [("Z3", 3), ("Z2xZ2", 4), ("Z2", 4)] {
        let t = with_facets(g, 3);
        let r = verify_fibgor(&t, last, &t, first, options).map_err(|e| format!("{g}: {e}"))?;
        ensure!(
            r.product.index() == Some(want),
            "{g}: product {:?}",
            r.product.verdict
        );
        ensure!(
            r.interior_projects_left && r.interior_projects_right,
            "{g}: projections differ"
        );
        ensure!(r.holds(), "{g}: {r:?}");
        if let CrossCheck::Skipped { .. } = r.cross_check {
            notes.push(format!("{g} cross-check skipped"));
        }
    }
    let t = with_facets("Z3", 3);
    let fp = fiber_product(&t, last, &t, first).unwrap();
    let mut four = fp.product.clone();
    four.set_facets(fiber_facet_candidates(&fp).unwrap().facets)
        .unwrap();
    let pi = SimplexProjection {
        edge: four.edges() - 1,
    };
    let r =
        verify_fibgor(&four, pi, &t, first, options).map_err(|e| format!("five leaves: {e}"))?;
    ensure!(
        r.product.index() == Some(3) && r.holds(),
        "five leaves: {:?}",
        r.product.verdict
    );
    for g in ["Z2", "Z3"] {
        let t = with_facets(g, 3);
        let fp = fiber_product(&t, last, &t, first).unwrap();
        let lifted = fiber_facet_candidates(&fp).unwrap();
        let prod = &fp.product;
        let brute =
            enumerate_facets(prod.vertices(), prod.lattice(), HullBounds::default()).unwrap();
        ensure!(
            same_hyperplanes(prod.vertices(), &lifted.facets, &brute),
            "{g}: lifted facets differ"
        );
    }
    notes.insert(
        0,
        "indices 3,4,4; five-leaf Z3 index 3; lifted = enumerated".into(),
    );
    Ok(notes.join("; "))
}

fn random_action(g: &GroupSpec, m: usize, choice: usize, seed: &[usize]) -> SymmetryAction {
    let t = CayleyTable::new(g);
    match choice {
        0 => {
            let mut h: Vec<usize> = seed[..m - 1].iter().map(|s| s % g.order()).collect();
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
            SymmetryAction::Automorphism {
                images: auts[seed[0] % auts.len()].images().to_vec(),
            }
        }
    }
}

fn properties() -> Check {
    let config = |cases| Config {
        cases,
        rng_seed: RngSeed::Fixed(20_160_422),
        failure_persistence: None,
        ..Config::default()
    };
    let seeds = || prop::collection::vec(0usize..10_000, 5);
    let groups = ["Z2", "Z3", "Z2xZ2", "Z6", "Z8", "Z2xZ4"];

    TestRunner::new(config(256))
        .run(
            &(0..groups.len(), 3usize..5, 1i64..4, 0usize..3, seeds()),
            |(gi, m, k, choice, seed)| {
                let g = group(groups[gi]);
                let p = ModelPolytope::claw_polytope(&g, m).unwrap();
                let comps = compositions(k, g.order());
                let x: Vec<i64> = (0..m)
                    .flat_map(|j| comps[seed[j] % comps.len()].clone())
                    .collect();
                let a = random_action(&g, m, choice, &seed);
                let y = p.apply_action(&a, &x).unwrap();
                prop_assert_eq!(
                    p.lattice_membership(&x).unwrap(),
                    p.lattice_membership(&y).unwrap()
                );
                Ok(())
            },
        )
        .map_err(|e| format!("lattice membership: {e}"))?;

    let polys: Vec<ModelPolytope> = [("Z2", 3), ("Z2", 4), ("Z3", 3), ("Z3", 4), ("Z2", 5)]
        .iter()
        .map(|&(g, m)| with_facets(g, m))
        .collect();
    TestRunner::new(config(40))
        .run(
            &(0..polys.len(), 0usize..3, seeds()),
            |(pi, choice, seed)| {
                let p = &polys[pi];
                let q = p
                    .transformed(&random_action(p.group(), p.edges(), choice, &seed))
                    .unwrap();
                let (a, b) = (
                    gorenstein_index(p, None).unwrap(),
                    gorenstein_index(&q, None).unwrap(),
                );
                prop_assert_eq!(a.index(), b.index());
                prop_assert_eq!(a.interior_count, b.interior_count);
                Ok(())
            },
        )
        .map_err(|e| format!("Gorenstein verdict: {e}"))?;

    let claws = [Z3Claw::new(3).unwrap(), Z3Claw::new(4).unwrap()];
    let points: Vec<Vec<Vec<Vec<i64>>>> = claws
        .iter()
        .map(|c| {
            (1..=4)
                .map(|k| c.polytope().dilation_points(k, false).unwrap())
                .collect()
        })
        .collect();
    TestRunner::new(config(500))
        .run(&(0usize..2, 1i64..5, 0usize..100_000), |(ci, k, pick)| {
            let claw = &claws[ci];
            let pts = &points[ci][k as usize - 1];
            let x = &pts[pick % pts.len()];
            let t = claw.polytope().table();
            let tr = claw.normalize(x, k).unwrap();
            prop_assert_eq!(&apply_all(&tr.actions, x, t).unwrap(), &tr.point);
            prop_assert_eq!(&undo_all(&tr.actions, &tr.point, t).unwrap(), x);
            let d = claw.decompose(x, k).unwrap();
            prop_assert!(validate_decomposition(claw.polytope(), x, k, &d.vertices));
            let b = decompose_brute(x, k, claw.polytope()).unwrap();
            prop_assert!(validate_decomposition(
                claw.polytope(),
                x,
                k,
                b.vertices().unwrap()
            ));
            Ok(())
        })
        .map_err(|e| format!("normalize / decompose: {e}"))?;
    Ok("membership 256, Gorenstein 40, trace and re-sum 500 cases".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("vertex fidelity", vertex_fidelity),
        ("Z3 facets closed form", facets_z3),
        ("neighbours of v(0)", vert0),
        ("non-normality witnesses", not_normal),
        ("Gorenstein indices", gore),
        ("Z3 claw normality", normal_z3),
        ("S-value congruence", s_congruence),
        ("fiber products", fibgor),
        ("property suites", properties),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {} {name} ({secs:.2}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {} {name} ({secs:.2}s): {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
