use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use super::{DecomposeMode, FacetMode, FiberMode, RunConfig, Session};
use crate::error::{Error, Result};
use crate::fiber::{
    fiber_facet_candidates, fiber_product, same_hyperplanes, verify_fibgor, FibGorOptions,
    SimplexProjection,
};
use crate::gorenstein::{gorenstein_index, kimura_facets};
use crate::group::{GroupElement, GroupSpec};
use crate::kernel::{
    adjacent_vertices, block_points, compositions, enumerate_facets, verify_facet, Facet,
};
use crate::model::{claw_congruence, ModelPolytope};
use crate::normality::{
    check_normality, decompose_brute, nonnormal_witness, validate_decomposition, NormalityBounds,
};
use crate::z3::{z3_facet_list, Z3Claw};

/// Dilations with more lattice points than this are sampled with the seed.
pub(crate) const SAMPLE_CAP: usize = 2000;

/// Largest box enumerated when cross-checking lattice membership.
const LATTICE_SWEEP_CAP: u128 = 200_000;

pub(crate) fn group(cfg: &RunConfig) -> Result<&GroupSpec> {
    cfg.group
        .as_ref()
        .ok_or_else(|| Error::Precondition("--group is required".into()))
}

fn claw_m(cfg: &RunConfig) -> usize {
    cfg.m.unwrap_or(3)
}

/// The claw from `--m` (default 3) or the tree from `--tree`.
pub(crate) fn polytope(cfg: &RunConfig) -> Result<ModelPolytope> {
    let g = group(cfg)?;
    match &cfg.tree {
        Some(t) => ModelPolytope::tree_polytope(g, t),
        None => ModelPolytope::claw_polytope(g, claw_m(cfg)),
    }
}

/// Which closed-form facet description applies, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ClosedForm {
    Z3,
    Kimura,
}

fn closed_form(p: &ModelPolytope) -> Option<ClosedForm> {
    if !p.tree().is_claw() || p.edges() < 3 {
        return None;
    }
    match p.group().factors() {
        [3] => Some(ClosedForm::Z3),
        [2, 2] => Some(ClosedForm::Kimura),
        _ => None,
    }
}

fn closed_form_facets(p: &ModelPolytope) -> Result<Option<Vec<Facet>>> {
    Ok(match closed_form(p) {
        Some(ClosedForm::Z3) => Some(z3_facet_list(p.edges(), 1)?.inequalities()),
        Some(ClosedForm::Kimura) => Some(kimura_facets(p.edges(), 1)?),
        None => None,
    })
}

/// Attaches facets: closed form for Z3 and Kimura claws, otherwise exact
/// enumeration within the configured bounds.
pub(crate) fn attach_facets(p: &mut ModelPolytope, cfg: &RunConfig) -> Result<()> {
    match closed_form_facets(p)? {
        Some(list) => p.set_facets(list),
        None => p.ensure_facets(cfg.bounds).map(|_| ()),
    }
}

fn labeling_elements(p: &ModelPolytope, labels: &[usize]) -> Vec<GroupElement> {
    labels.iter().map(|&i| p.group().element_at(i)).collect()
}

pub(crate) fn vertices(cfg: &RunConfig, s: &mut Session) -> Result<()> {
    let p = polytope(cfg)?;
    for (i, v) in p.vertices().iter().enumerate() {
        let labels = labeling_elements(&p, &p.labeling(i));
        s.emit(
            "vertex",
            &json!({ "index": i, "labeling": labels, "coords": v }),
        )?;
    }
    let leaves = p.tree().leaves().len() as u32;
    let expected = (p.block_len() as u128).pow(leaves - 1);
    let found = p.vertices().len() as u128;
    s.check(found == expected, || {
        format!("{found} vertices, expected {expected}")
    });
    s.note("group", p.group())?;
    s.note("edges", p.edges())?;
    s.note("vertex_count", found)?;
    s.note("expected", expected)
}

pub(crate) fn lattice(cfg: &RunConfig, s: &mut Session) -> Result<()> {
    let p = polytope(cfg)?;
    let l = p.lattice();
    let congruence = p.is_complete() && p.tree().is_claw();
    s.emit(
        "lattice",
        &json!({
            "group": p.group(),
            "edges": p.edges(),
            "ambient": p.ambient_dim(),
            "dim": p.dim(),
            "membership": if congruence { "congruence" } else { "hnf" },
            "difference": l.difference.rows(),
            "span": l.span.rows(),
        }),
    )?;
    let outside = p
        .vertices()
        .iter()
        .position(|v| !p.lattice_membership(v).unwrap_or(false));
    s.check(outside.is_none(), || {
        format!("vertex {outside:?} is outside the lattice")
    });
    if congruence {
        let k = cfg.k.unwrap_or(2);
        let size = (compositions(k, p.block_len()).len() as u128).saturating_pow(p.edges() as u32);
        if size <= LATTICE_SWEEP_CAP {
            let points = block_points(p.layout(), k, &[], false, |_| true);
            let bad = points
                .par_iter()
                .find_first(|x| claw_congruence(p.group(), x) != l.contains(x));
            s.check(bad.is_none(), || {
                format!("congruence and lattice basis disagree at {bad:?}")
            });
            s.note(
                "congruence_sweep",
                json!({ "k": k, "points": points.len() }),
            )?;
        } else {
            s.note(
                "congruence_sweep",
                json!({ "skipped": format!("{size} points exceed {LATTICE_SWEEP_CAP}") }),
            )?;
        }
    }
    s.note("dim", p.dim())
}

fn emit_closed_form(p: &ModelPolytope, k: i64, s: &mut Session) -> Result<Vec<Facet>> {
    let m = p.edges();
    match closed_form(p) {
        Some(ClosedForm::Z3) => {
            let list = z3_facet_list(m, k)?;
            for f in &list.nonnegativity {
                s.emit("facet", &json!({ "kind": "nonnegativity", "facet": f }))?;
            }
            for e in &list.equalities {
                s.emit("equality", e)?;
            }
            for (a, f) in &list.a_facets {
                s.emit("facet", &json!({ "kind": "a_facet", "a": a, "facet": f }))?;
            }
            s.note(
                "counts",
                json!({
                    "nonnegativity": list.nonnegativity.len(),
                    "equalities": list.equalities.len(),
                    "a_facets": list.a_facets.len(),
                }),
            )?;
            Ok(z3_facet_list(m, 1)?.inequalities())
        }
        Some(ClosedForm::Kimura) => {
            let list = kimura_facets(m, k)?;
            for (i, f) in list.iter().enumerate() {
                let kind = if i < 4 * m {
                    "nonnegativity"
                } else {
                    "odd_subset"
                };
                s.emit("facet", &json!({ "kind": kind, "facet": f }))?;
            }
            s.note(
                "counts",
                json!({ "nonnegativity": 4 * m, "odd_subset": list.len() - 4 * m }),
            )?;
            kimura_facets(m, 1)
        }
        None => Err(Error::Precondition(
            "a closed form exists only for Z3 and Z2xZ2 claws with m >= 3".into(),
        )),
    }
}

pub(crate) fn facets(cfg: &RunConfig, mode: FacetMode, s: &mut Session) -> Result<()> {
    let p = polytope(cfg)?;
    let k = cfg.k.unwrap_or(1);
    match mode {
        FacetMode::ClosedForm | FacetMode::CrossCheck => {
            let closed = emit_closed_form(&p, k, s)?;
            let rejected: Vec<usize> = (0..closed.len())
                .into_par_iter()
                .filter(|&i| {
                    let f = &closed[i];
                    verify_facet(p.vertices(), p.lattice(), &f.functional, f.rhs)
                        .map(|c| c.facet != *f)
                        .unwrap_or(true)
                })
                .collect();
            s.check(rejected.is_empty(), || {
                format!("closed-form inequalities {rejected:?} fail verification")
            });
            if mode == FacetMode::CrossCheck {
                match cfg.bounds.check(p.vertices().len(), p.dim()) {
                    Ok(()) => {
                        let brute = enumerate_facets(p.vertices(), p.lattice(), cfg.bounds)?;
                        let same = same_hyperplanes(p.vertices(), &closed, &brute);
                        s.check(same, || {
                            format!(
                                "closed form has {} facets, enumeration {}",
                                closed.len(),
                                brute.len()
                            )
                        });
                        s.note("cross_check", json!({ "closed_form": closed.len(), "brute": brute.len(), "equal": same }))?;
                    }
                    Err(e) => s.note("cross_check", json!({ "skipped": e.to_string() }))?,
                }
            }
            s.note("facet_count", closed.len())
        }
        FacetMode::Brute => {
            let list = enumerate_facets(p.vertices(), p.lattice(), cfg.bounds)?;
            for f in &list {
                s.emit(
                    "facet",
                    &json!({ "kind": "enumerated", "facet": f.dilated(k) }),
                )?;
            }
            s.note("facet_count", list.len())
        }
    }
}

pub(crate) fn normality(cfg: &RunConfig, s: &mut Session) -> Result<()> {
    let mut p = polytope(cfg)?;
    attach_facets(&mut p, cfg)?;
    let bounds = NormalityBounds::default();
    let k_max = cfg.k_max.unwrap_or(bounds.max_k);
    let report = check_normality(&p, k_max, bounds)?;
    for level in &report.levels {
        s.emit("level", level)?;
        s.check(level.indecomposable == 0, || {
            format!(
                "k = {}: {:?} is not a sum of vertices",
                level.k, level.witness
            )
        });
    }
    s.note("group", p.group())?;
    s.note("edges", p.edges())?;
    s.note("normal_up_to", report.is_normal().then_some(k_max))
}

/// Lattice points of `kP`, sampled down to [`SAMPLE_CAP`] with the seed.
fn sampled_points(p: &ModelPolytope, k: i64, seed: u64, s: &mut Session) -> Result<Vec<Vec<i64>>> {
    let mut points = p.dilation_points(k, false)?;
    s.note("population", points.len())?;
    if points.len() > SAMPLE_CAP {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut picked = sample(&mut rng, points.len(), SAMPLE_CAP).into_vec();
        picked.sort_unstable();
        points = picked
            .into_iter()
            .map(|i| std::mem::take(&mut points[i]))
            .collect();
    }
    Ok(points)
}

pub(crate) fn decompose(cfg: &RunConfig, mode: DecomposeMode, s: &mut Session) -> Result<()> {
    let k = cfg.k.unwrap_or(3);
    let z3 = match mode {
        DecomposeMode::Brute => None,
        _ => {
            let g = group(cfg)?;
            if g.factors() != [3] || cfg.tree.is_some() {
                return Err(Error::Precondition(
                    "the constructive decomposition needs a Z3 claw".into(),
                ));
            }
            Some(Z3Claw::new(claw_m(cfg))?)
        }
    };
    let p = match &z3 {
        Some(c) => c.polytope().clone(),
        None => {
            let mut p = polytope(cfg)?;
            attach_facets(&mut p, cfg)?;
            p
        }
    };
    let points = sampled_points(&p, k, cfg.seed, s)?;
    s.note("points", points.len())?;
    match mode {
        DecomposeMode::Brute => {
            let results: Vec<_> = points
                .par_iter()
                .map(|x| decompose_brute(x, k, &p))
                .collect::<Result<_>>()?;
            for r in &results {
                s.emit("decomposition", r)?;
                s.check(r.is_decomposable(), || {
                    format!("{:?} is not a sum of {k} vertices", r.point)
                });
            }
        }
        DecomposeMode::Constructive => {
            let claw = z3.as_ref().expect("built above");
            let results: Vec<_> = points.par_iter().map(|x| claw.decompose(x, k)).collect();
            for (x, r) in points.iter().zip(results) {
                match r {
                    Ok(d) => {
                        s.emit(
                            "decomposition",
                            &json!({ "point": d.point, "k": d.k, "vertices": d.vertices, "trace": d.trace }),
                        )?;
                        let ok = validate_decomposition(&p, x, k, &d.vertices);
                        s.check(ok, || format!("output for {x:?} does not validate"));
                    }
                    Err(e @ Error::Z3StepRejected { .. }) => {
                        s.emit(
                            "rejection",
                            &json!({ "point": x, "k": k, "error": e.to_string() }),
                        )?;
                        s.check(false, || format!("{x:?}: {e}"));
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        DecomposeMode::Compare => {
            let claw = z3.as_ref().expect("built above");
            let rows: Vec<(bool, bool)> = points
                .par_iter()
                .map(|x| {
                    let brute = decompose_brute(x, k, &p)?.is_decomposable();
                    let constructive = claw.decompose(x, k).is_ok();
                    Ok((brute, constructive))
                })
                .collect::<Result<_>>()?;
            for (x, (brute, constructive)) in points.iter().zip(rows) {
                s.emit(
                    "comparison",
                    &json!({ "point": x, "k": k, "brute": brute, "constructive": constructive }),
                )?;
                s.check(brute && constructive, || {
                    format!("{x:?}: brute {brute}, constructive {constructive}")
                });
            }
        }
    }
    Ok(())
}

pub(crate) fn witness(cfg: &RunConfig, s: &mut Session) -> Result<()> {
    let report = nonnormal_witness(group(cfg)?)?;
    s.emit("witness", &report)?;
    s.check(report.confirms_non_normality(), || {
        format!(
            "witness not confirmed: in_lattice {}, in_4p {}, indecomposable {}",
            report.in_lattice, report.in_4p, report.indecomposable
        )
    });
    Ok(())
}

pub(crate) fn gorenstein(cfg: &RunConfig, s: &mut Session) -> Result<()> {
    let mut p = polytope(cfg)?;
    attach_facets(&mut p, cfg)?;
    let report = gorenstein_index(&p, cfg.k_max)?;
    s.emit("gorenstein", &report)?;
    s.check(report.index().is_some(), || format!("{:?}", report.verdict));
    s.note("index", report.index())
}

pub(crate) fn fiber(cfg: &RunConfig, mode: FiberMode, s: &mut Session) -> Result<()> {
    let mut left = polytope(cfg)?;
    let mut right = ModelPolytope::claw_polytope(group(cfg)?, claw_m(cfg))?;
    let pi_left = SimplexProjection {
        edge: left.edges() - 1,
    };
    let pi_right = SimplexProjection { edge: 0 };
    match mode {
        FiberMode::Build => {
            let fp = fiber_product(&left, pi_left, &right, pi_right)?;
            s.emit(
                "fiber",
                &json!({
                    "tree": fp.glued.tree,
                    "shared": fp.glued.shared,
                    "product_vertices": fp.product.vertices().len(),
                    "dim": fp.product.dim(),
                    "matches_tree_polytope": fp.matches_tree_polytope,
                }),
            )?;
            s.check(fp.matches_tree_polytope != Some(false), || {
                "product differs from the glued tree polytope".into()
            });
            let stray = fp.product.vertices().iter().find(|v| {
                left.vertex_index(&fp.phi_left(v)).is_none()
                    || right.vertex_index(&fp.phi_right(v)).is_none()
            });
            s.check(stray.is_none(), || {
                format!("{stray:?} does not restrict to factor vertices")
            });
            let factors =
                attach_facets(&mut left, cfg).and_then(|_| attach_facets(&mut right, cfg));
            if let Err(e) = factors {
                return s.note("lifted_facets", json!({ "skipped": e.to_string() }));
            }
            let fp = fiber_product(&left, pi_left, &right, pi_right)?;
            let lifted = fiber_facet_candidates(&fp)?;
            for f in &lifted.facets {
                s.emit("facet", &json!({ "kind": "lifted", "facet": f }))?;
            }
            s.note(
                "lifted_facets",
                json!({ "candidates": lifted.candidates, "facets": lifted.facets.len() }),
            )?;
            let prod = &fp.product;
            match cfg.bounds.check(prod.vertices().len(), prod.dim()) {
                Ok(()) => {
                    let brute = enumerate_facets(prod.vertices(), prod.lattice(), cfg.bounds)?;
                    let same = same_hyperplanes(prod.vertices(), &lifted.facets, &brute);
                    s.check(same, || {
                        format!(
                            "{} lifted facets, {} enumerated",
                            lifted.facets.len(),
                            brute.len()
                        )
                    });
                    s.note(
                        "cross_check",
                        json!({ "equal": same, "brute": brute.len() }),
                    )
                }
                Err(e) => s.note("cross_check", json!({ "skipped": e.to_string() })),
            }
        }
        FiberMode::VerifyFibgor => {
            attach_facets(&mut left, cfg)?;
            attach_facets(&mut right, cfg)?;
            let options = FibGorOptions {
                hull: cfg.bounds,
                ..FibGorOptions::default()
            };
            let report = verify_fibgor(&left, pi_left, &right, pi_right, options)?;
            s.emit("fibgor", &report)?;
            s.check(report.holds(), || {
                format!("product verdict {:?}", report.product.verdict)
            });
            s.note("index", report.product.index())
        }
    }
}

pub(crate) fn adjacency(cfg: &RunConfig, vertex: usize, s: &mut Session) -> Result<()> {
    let mut p = polytope(cfg)?;
    attach_facets(&mut p, cfg)?;
    if vertex >= p.vertices().len() {
        return Err(Error::Precondition(format!(
            "vertex {vertex} out of range (polytope has {})",
            p.vertices().len()
        )));
    }
    let certs = adjacent_vertices(p.vertices(), p.facets().expect("attached"), vertex);
    for c in &certs {
        let labels = labeling_elements(&p, &p.labeling(c.neighbor));
        s.emit(
            "neighbor",
            &json!({ "vertex": vertex, "neighbor": c.neighbor, "labeling": labels, "functional": c.functional, "value": c.value }),
        )?;
        let f = Facet {
            functional: c.functional.clone(),
            rhs: c.value,
            normalizer: 1,
        };
        let argmin: Vec<usize> = (0..p.vertices().len())
            .filter(|&i| f.slack(&p.vertices()[i]) <= 0)
            .collect();
        let mut expected = vec![vertex, c.neighbor];
        expected.sort_unstable();
        s.check(argmin == expected, || {
            format!("certificate for {} selects {argmin:?}", c.neighbor)
        });
    }
    s.note("vertex", vertex)?;
    s.note("neighbors", certs.len())
}
