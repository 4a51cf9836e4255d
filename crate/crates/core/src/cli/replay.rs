//! Self-contained replays of the main results, each comparing computed
//! values against the stated ones.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde_json::json;

use super::{text_enum, RunConfig, Session};
use crate::error::{Error, Result};
use crate::fiber::{
    fiber_facet_candidates, fiber_product, same_hyperplanes, verify_fibgor, FibGorOptions,
    SimplexProjection,
};
use crate::gorenstein::{gorenstein_index, kimura_facets};
use crate::group::GroupSpec;
use crate::kernel::{
    adjacent_vertices, enumerate_facets, lattice_distance, verify_facet, HullBounds,
};
use crate::model::ModelPolytope;
use crate::normality::{decompose_brute, nonnormal_witness, validate_decomposition};
use crate::z3::{a_tuples, s_value, vertex_zero, z3_facet_list, ATuple, Family, Z3Claw};

text_enum!(
    /// Named replay suites.
    Suite {
        FacetsZ3 => "facetsZ3",
        Vert0 => "vert0",
        NotNormal => "notnormal",
        Gore => "gore",
        FibGor => "fibgor",
        NormalZ3 => "normalz3",
        SCongruence => "lemma2",
    }
);

pub(crate) fn run_suite(suite: Suite, cfg: &RunConfig, s: &mut Session) -> Result<()> {
    match suite {
        Suite::FacetsZ3 => facets_z3(cfg, s),
        Suite::Vert0 => vert0(cfg, s),
        Suite::NotNormal => not_normal(s),
        Suite::Gore => gore(cfg, s),
        Suite::FibGor => fibgor(cfg, s),
        Suite::NormalZ3 => normal_z3(s),
        Suite::SCongruence => s_congruence(s),
    }
}

fn group(name: &str) -> GroupSpec {
    name.parse().expect("fixed group names parse")
}

fn claw_with_facets(g: &str, m: usize, bounds: HullBounds) -> Result<ModelPolytope> {
    let mut p = ModelPolytope::claw_polytope(&group(g), m)?;
    p.ensure_facets(bounds)?;
    Ok(p)
}

fn facets_z3(cfg: &RunConfig, s: &mut Session) -> Result<()> {
    for m in [3, 4] {
        let p = ModelPolytope::claw_polytope(&group("Z3"), m)?;
        let closed = z3_facet_list(m, 1)?.inequalities();
        let brute = enumerate_facets(p.vertices(), p.lattice(), cfg.bounds)?;
        let equal = same_hyperplanes(p.vertices(), &closed, &brute);
        s.emit(
            "case",
            &json!({ "m": m, "closed_form": closed.len(), "brute": brute.len(), "equal": equal }),
        )?;
        s.check(equal, || {
            format!(
                "m = {m}: closed form {} vs enumerated {}",
                closed.len(),
                brute.len()
            )
        });
    }
    let m = 5;
    let p = ModelPolytope::claw_polytope(&group("Z3"), m)?;
    let list = z3_facet_list(m, 1)?;
    let inequalities = list.inequalities();
    let verified = inequalities
        .par_iter()
        .filter(|f| matches!(verify_facet(p.vertices(), p.lattice(), &f.functional, f.rhs), Ok(c) if c.facet == **f))
        .count();
    let equalities_hold = list.equalities.iter().all(|e| {
        p.vertices().iter().all(|v| {
            crate::kernel::Facet {
                functional: e.functional.clone(),
                rhs: e.rhs,
                normalizer: 1,
            }
            .slack(v)
                == 0
        })
    });
    s.emit(
        "case",
        &json!({
            "m": m,
            "nonnegativity": list.nonnegativity.len(),
            "equalities": list.equalities.len(),
            "a_facets": list.a_facets.len(),
            "verified": verified,
        }),
    )?;
    s.check(verified == inequalities.len(), || {
        format!(
            "m = 5: {verified} of {} inequalities verified",
            inequalities.len()
        )
    });
    s.check(equalities_hold, || {
        "m = 5: block sums are not constant".into()
    });
    Ok(())
}

fn vert0(cfg: &RunConfig, s: &mut Session) -> Result<()> {
    let mut totals = Vec::new();
    for m in [3usize, 4] {
        let p = ModelPolytope::claw_polytope(&group("Z3"), m)?;
        let facets = enumerate_facets(p.vertices(), p.lattice(), cfg.bounds)?;
        let zero = p.vertex_index(&vertex_zero(m)).expect("v(0) is a vertex");
        let found: BTreeSet<usize> = adjacent_vertices(p.vertices(), &facets, zero)
            .into_iter()
            .map(|c| c.neighbor)
            .collect();
        let support = |i: usize| p.labeling(i).iter().filter(|&&g| g != 0).count();
        let census: BTreeSet<usize> = (0..p.vertices().len())
            .filter(|&i| matches!(support(i), 2 | 3))
            .collect();
        let pairs = found.iter().filter(|&&i| support(i) == 2).count();
        let triples = found.iter().filter(|&&i| support(i) == 3).count();
        s.emit(
            "case",
            &json!({ "m": m, "neighbors": found.len(), "pairs": pairs, "triples": triples, "matches_census": found == census }),
        )?;
        s.check(found == census, || {
            format!("m = {m}: neighbours {found:?}, census {census:?}")
        });
        totals.push(found.len());
    }
    s.check(totals == [8, 20], || {
        format!("neighbour counts {totals:?}, expected [8, 20]")
    });
    s.note("neighbors", totals)
}

fn not_normal(s: &mut Session) -> Result<()> {
    for g in ["Z6", "Z8", "Z2xZ2xZ2", "Z2xZ4"] {
        let gs = group(g);
        let r = nonnormal_witness(&gs)?;
        s.emit(
            "case",
            &json!({
                "group": g,
                "point": r.point,
                "in_lattice": r.in_lattice,
                "in_4p": r.in_4p,
                "indecomposable": r.indecomposable,
                "explored": r.explored,
            }),
        )?;
        s.check(r.confirms_non_normality(), || {
            format!("{g}: witness not confirmed")
        });
        if g == "Z6" {
            let p = ModelPolytope::claw_polytope(&gs, 3)?;
            let doubled: Vec<i64> = r.point.iter().map(|c| 2 * c).collect();
            let ok = r.doubled_decomposition.len() == 8
                && validate_decomposition(&p, &doubled, 8, &r.doubled_decomposition);
            s.check(ok, || {
                "Z6: the eight-term decomposition of 2p does not validate".into()
            });
        }
    }
    Ok(())
}

fn gore(cfg: &RunConfig, s: &mut Session) -> Result<()> {
    let cases: [(&str, usize, Option<i64>); 7] = [
        ("Z2", 3, Some(4)),
        ("Z2", 4, Some(2)),
        ("Z3", 3, Some(3)),
        ("Z2xZ2", 3, Some(4)),
        ("Z2", 5, None),
        ("Z3", 4, None),
        ("Z2xZ2", 4, None),
    ];
    let mut indices = Vec::new();
    for (g, m, expected) in cases {
        let p = claw_with_facets(g, m, cfg.bounds)?;
        let r = gorenstein_index(&p, None)?;
        s.emit(
            "case",
            &json!({ "group": g, "m": m, "minimal_k": r.minimal_k, "interior_count": r.interior_count, "verdict": r.verdict }),
        )?;
        s.check(r.index() == expected, || {
            format!("({g}, {m}): got {:?}, expected {expected:?}", r.verdict)
        });
        if let Some(k) = r.index() {
            indices.push(k);
        }
    }
    for m in [3usize, 4] {
        let p = ModelPolytope::claw_polytope(&group("Z2xZ2"), m)?;
        let omega = vec![1i64; 4 * m];
        let distances: BTreeSet<i64> = kimura_facets(m, 1)?[4 * m..]
            .iter()
            .map(|f| lattice_distance(&omega, &f.dilated(4), p.lattice()))
            .collect::<Result<_>>()?;
        let expected = (2 * m as i64 - 4) / 2;
        s.emit(
            "kimura_distance",
            &json!({ "m": m, "distances": distances, "expected": expected }),
        )?;
        s.check(distances == BTreeSet::from([expected]), || {
            format!("m = {m}: distances {distances:?}, expected {expected}")
        });
    }
    s.note("indices", indices)
}

fn fibgor(cfg: &RunConfig, s: &mut Session) -> Result<()> {
    let options = FibGorOptions {
        hull: cfg.bounds,
        ..FibGorOptions::default()
    };
    let (last, first) = (SimplexProjection { edge: 2 }, SimplexProjection { edge: 0 });
    for (g, expected) in [("Z3", 3), ("Z2xZ2", 4), ("Z2", 4)] {
        let t = claw_with_facets(g, 3, cfg.bounds)?;
        let r = verify_fibgor(&t, last, &t, first, options)?;
        s.emit(
            "case",
            &json!({
                "gluing": format!("{g} tripod x tripod"),
                "index": r.product.index(),
                "projects": r.interior_projects_left && r.interior_projects_right,
                "cross_check": r.cross_check,
                "normality_verified": r.product.normality_verified,
            }),
        )?;
        s.check(r.holds() && r.index == expected, || format!("{g}: {r:?}"));
    }

    let t = claw_with_facets("Z3", 3, cfg.bounds)?;
    let fp = fiber_product(&t, last, &t, first)?;
    let mut four = fp.product.clone();
    four.set_facets(fiber_facet_candidates(&fp)?.facets)?;
    let pi = SimplexProjection {
        edge: four.edges() - 1,
    };
    let r = verify_fibgor(&four, pi, &t, first, options)?;
    s.emit(
        "case",
        &json!({ "gluing": "Z3 three tripods", "index": r.product.index(), "product_vertices": r.product_vertices, "cross_check": r.cross_check }),
    )?;
    s.check(r.holds() && r.index == 3, || format!("five leaves: {r:?}"));

    for g in ["Z2", "Z3"] {
        let t = claw_with_facets(g, 3, cfg.bounds)?;
        let fp = fiber_product(&t, last, &t, first)?;
        let lifted = fiber_facet_candidates(&fp)?;
        let prod = &fp.product;
        let brute = enumerate_facets(prod.vertices(), prod.lattice(), cfg.bounds)?;
        let equal = same_hyperplanes(prod.vertices(), &lifted.facets, &brute);
        s.emit(
            "case",
            &json!({ "lift_and_filter": g, "candidates": lifted.candidates, "lifted": lifted.facets.len(), "brute": brute.len(), "equal": equal }),
        )?;
        s.check(equal, || {
            format!(
                "{g} four leaves: lifted {} vs enumerated {}",
                lifted.facets.len(),
                brute.len()
            )
        });
    }
    Ok(())
}

fn normal_z3(s: &mut Session) -> Result<()> {
    for m in [3usize, 4] {
        let claw = Z3Claw::new(m)?;
        let p = claw.polytope();
        s.check(p.dilation_points(1, false)? == p.vertices(), || {
            format!("m = {m}: P has lattice points besides its vertices")
        });
        for k in 1..=4 {
            let points = p.dilation_points(k, false)?;
            let rows: Vec<(bool, bool)> = points
                .par_iter()
                .map(|x| {
                    let brute = decompose_brute(x, k, p)?.is_decomposable();
                    let constructive = match claw.decompose(x, k) {
                        Ok(d) => validate_decomposition(p, x, k, &d.vertices),
                        Err(Error::Z3StepRejected { .. }) => false,
                        Err(e) => return Err(e),
                    };
                    Ok((brute, constructive))
                })
                .collect::<Result<_>>()?;
            let brute_ok = rows.iter().filter(|r| r.0).count();
            let constructive_ok = rows.iter().filter(|r| r.1).count();
            let first_bad = rows.iter().position(|&(b, c)| !(b && c));
            s.emit(
                "case",
                &json!({ "m": m, "k": k, "points": points.len(), "brute": brute_ok, "constructive": constructive_ok }),
            )?;
            s.check(first_bad.is_none(), || {
                format!("m = {m}, k = {k}: {:?}", first_bad.map(|i| &points[i]))
            });
        }
    }
    Ok(())
}

fn s_congruence(s: &mut Session) -> Result<()> {
    for (m, k_max) in [(3usize, 4i64), (4, 3)] {
        let claw = Z3Claw::new(m)?;
        let tuples: Vec<ATuple> = a_tuples(m)
            .into_iter()
            .flat_map(|e| [Family::U, Family::W].map(|f| ATuple::new(e.clone(), f)))
            .collect::<Result<_>>()?;
        for k in 1..=k_max {
            let points = claw.polytope().dilation_points(k, false)?;
            let bad = points
                .par_iter()
                .map(|x| -> Result<usize> {
                    let mut n = 0;
                    for a in &tuples {
                        if (s_value(x, a)? - 2 * k).rem_euclid(3) != 0 {
                            n += 1;
                        }
                    }
                    Ok(n)
                })
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .sum::<usize>();
            s.emit("case", &json!({ "m": m, "k": k, "points": points.len(), "tuples": tuples.len(), "violations": bad }))?;
            s.check(bad == 0, || format!("m = {m}, k = {k}: {bad} violations"));
        }
    }
    Ok(())
}
