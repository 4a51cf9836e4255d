//! Fiber products of model polytopes over a simplex, realized by gluing two
//! trees along leaf edges.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gorenstein::{gorenstein_index, GorensteinReport};
use crate::kernel::{enumerate_facets, touching_set, verify_facet, Facet, HullBounds};
use crate::model::{GluedTree, ModelPolytope};
use crate::normality::{check_normality, NormalityBounds};

/// Projection of a polytope onto the simplex given by one leaf edge block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplexProjection {
    pub edge: usize,
}

impl SimplexProjection {
    pub fn apply(&self, x: &[i64], block_len: usize) -> Vec<i64> {
        x[self.edge * block_len..(self.edge + 1) * block_len].to_vec()
    }

    /// The leaf at the end of the projected edge.
    pub fn leaf(&self, p: &ModelPolytope) -> Result<u32> {
        let tree = p.tree();
        let &(a, b) = tree
            .edges()
            .get(self.edge)
            .ok_or_else(|| Error::Precondition(format!("edge {} out of range", self.edge)))?;
        [b, a]
            .into_iter()
            .find(|&n| tree.degree(n) == 1)
            .ok_or_else(|| Error::Precondition(format!("edge {} is not a leaf edge", self.edge)))
    }

    /// Every vertex maps to a vertex of the simplex.
    pub fn is_valid(&self, p: &ModelPolytope) -> bool {
        p.vertices().iter().all(|v| {
            let img = self.apply(v, p.block_len());
            img.iter().all(|&c| c == 0 || c == 1) && img.iter().sum::<i64>() == 1
        })
    }
}

#[derive(Debug, Clone)]
pub struct FiberProduct {
    pub left: ModelPolytope,
    pub right: ModelPolytope,
    pub projections: (SimplexProjection, SimplexProjection),
    pub glued: GluedTree,
    pub product: ModelPolytope,
    /// Equality with the polytope of the glued tree, checked when both factors
    /// carry every labeling.
    pub matches_tree_polytope: Option<bool>,
}

impl FiberProduct {
    fn block_positions(&self) -> (Vec<usize>, Vec<usize>) {
        let g = &self.glued;
        let shared = g.left_edges.len();
        let mut left = vec![0; self.left.edges()];
        for (pos, &e) in g.left_edges.iter().enumerate() {
            left[e] = pos;
        }
        left[g.shared.0] = shared;
        let mut right = vec![0; self.right.edges()];
        for (pos, &e) in g.right_edges.iter().enumerate() {
            right[e] = shared + 1 + pos;
        }
        right[g.shared.1] = shared;
        (left, right)
    }

    /// Restriction of a product point to the first factor's coordinates.
    pub fn phi_left(&self, x: &[i64]) -> Vec<i64> {
        self.restrict(x, &self.block_positions().0)
    }

    pub fn phi_right(&self, x: &[i64]) -> Vec<i64> {
        self.restrict(x, &self.block_positions().1)
    }

    fn restrict(&self, x: &[i64], positions: &[usize]) -> Vec<i64> {
        let n = self.product.block_len();
        positions
            .iter()
            .flat_map(|&p| x[p * n..(p + 1) * n].iter().copied())
            .collect()
    }

    fn lift(&self, f: &[i64], positions: &[usize]) -> Vec<i64> {
        let n = self.product.block_len();
        let mut out = vec![0; self.product.ambient_dim()];
        for (b, &p) in positions.iter().enumerate() {
            out[p * n..(p + 1) * n].copy_from_slice(&f[b * n..(b + 1) * n]);
        }
        out
    }
}

/// Pairs of vertices agreeing on the projected blocks, with the shared block
/// written once.
pub fn fiber_product(
    left: &ModelPolytope,
    pi_left: SimplexProjection,
    right: &ModelPolytope,
    pi_right: SimplexProjection,
) -> Result<FiberProduct> {
    if left.group() != right.group() {
        return Err(Error::IncompatibleGroups {
            left: left.group().factors().to_vec(),
            right: right.group().factors().to_vec(),
        });
    }
    if !pi_left.is_valid(left) || !pi_right.is_valid(right) {
        return Err(Error::Precondition(
            "projection does not map vertices onto the simplex".into(),
        ));
    }
    let glued = left
        .tree()
        .glue(pi_left.leaf(left)?, right.tree(), pi_right.leaf(right)?)?;
    let mut labelings = Vec::new();
    for i in 0..left.vertices().len() {
        let l1 = left.labeling(i);
        for j in 0..right.vertices().len() {
            let l2 = right.labeling(j);
            if l1[pi_left.edge] != l2[pi_right.edge] {
                continue;
            }
            let mut l: Vec<usize> = glued.left_edges.iter().map(|&e| l1[e]).collect();
            l.push(l1[pi_left.edge]);
            l.extend(glued.right_edges.iter().map(|&e| l2[e]));
            labelings.push(l);
        }
    }
    let product = ModelPolytope::from_labelings(left.group(), &glued.tree, &labelings)?;
    let matches_tree_polytope = (left.is_complete() && right.is_complete()).then(|| {
        ModelPolytope::tree_polytope(left.group(), &glued.tree)
            .map(|t| t.vertices() == product.vertices())
            .unwrap_or(false)
    });
    Ok(FiberProduct {
        left: left.clone(),
        right: right.clone(),
        projections: (pi_left, pi_right),
        glued,
        product,
        matches_tree_polytope,
    })
}

/// Lifted factor facets and the subset that are facets of the product.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftedFacets {
    pub candidates: usize,
    pub facets: Vec<Facet>,
}

/// Lifts every factor facet to the product and keeps the certified facets,
/// one per supporting hyperplane.
pub fn fiber_facet_candidates(fp: &FiberProduct) -> Result<LiftedFacets> {
    let (lf, rf) = match (fp.left.facets(), fp.right.facets()) {
        (Some(l), Some(r)) => (l, r),
        _ => return Err(Error::MissingFacets("both factors need facet lists".into())),
    };
    let (lp, rp) = fp.block_positions();
    let mut lifted: Vec<Facet> = lf
        .iter()
        .map(|f| (f, &lp))
        .chain(rf.iter().map(|f| (f, &rp)))
        .map(|(f, pos)| Facet {
            functional: fp.lift(&f.functional, pos),
            rhs: f.rhs,
            normalizer: f.normalizer,
        })
        .collect();
    lifted.sort();
    lifted.dedup();
    let candidates = lifted.len();
    let p = &fp.product;
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut facets = Vec::new();
    for f in lifted {
        if let Ok(cert) = verify_facet(p.vertices(), p.lattice(), &f.functional, f.rhs) {
            if seen.insert(cert.touching_vertices) {
                facets.push(cert.facet);
            }
        }
    }
    facets.sort();
    Ok(LiftedFacets { candidates, facets })
}

/// Facet lists compared as sets of supporting hyperplanes.
pub fn same_hyperplanes(vertices: &[Vec<i64>], a: &[Facet], b: &[Facet]) -> bool {
    let sets = |fs: &[Facet]| -> BTreeSet<Vec<usize>> {
        fs.iter().map(|f| touching_set(vertices, f)).collect()
    };
    a.len() == b.len() && sets(a) == sets(b)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CrossCheck {
    Agreed { facets: usize },
    Disagreed { lifted: usize, enumerated: usize },
    Skipped { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibGorReport {
    pub left: GorensteinReport,
    pub right: GorensteinReport,
    pub product: GorensteinReport,
    pub index: i64,
    pub product_vertices: usize,
    pub candidates: usize,
    pub facets: usize,
    pub cross_check: CrossCheck,
    pub matches_tree_polytope: Option<bool>,
    pub interior_projects_left: bool,
    pub interior_projects_right: bool,
}

impl FibGorReport {
    /// The product is Gorenstein of the factors' index, its interior point
    /// restricts to theirs, and no cross-check disagreed.
    pub fn holds(&self) -> bool {
        self.product.index() == Some(self.index)
            && self.interior_projects_left
            && self.interior_projects_right
            && !matches!(self.cross_check, CrossCheck::Disagreed { .. })
            && self.matches_tree_polytope != Some(false)
            && self.product.normality_verified != Some(false)
    }
}

/// Limits for [`verify_fibgor`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FibGorOptions {
    /// Bounds for the brute-force facet cross-check.
    pub hull: HullBounds,
    /// Highest level of the normality spot check.
    pub normality_k: i64,
    pub normality: NormalityBounds,
}

impl Default for FibGorOptions {
    fn default() -> Self {
        Self {
            hull: HullBounds::default(),
            normality_k: 3,
            normality: NormalityBounds {
                max_group_order: 8,
                max_edges: 8,
                max_k: 4,
            },
        }
    }
}

/// Checks that the fiber product of two Gorenstein polytopes of equal index is
/// Gorenstein of that index with compatible interior points.
///
/// Both factors must already carry facet lists. Failed hypotheses are reported
/// as [`Error::HypothesisViolation`].
pub fn verify_fibgor(
    left: &ModelPolytope,
    pi_left: SimplexProjection,
    right: &ModelPolytope,
    pi_right: SimplexProjection,
    options: FibGorOptions,
) -> Result<FibGorReport> {
    let gl = gorenstein_index(left, None)?;
    let gr = gorenstein_index(right, None)?;
    let (Some(kl), Some(kr)) = (gl.index(), gr.index()) else {
        return Err(Error::HypothesisViolation(
            "a factor is not Gorenstein".into(),
        ));
    };
    if kl != kr {
        return Err(Error::HypothesisViolation(format!(
            "factor indices differ: {kl} and {kr}"
        )));
    }
    let n = left.block_len();
    let p1 = gl
        .interior_point
        .clone()
        .expect("Gorenstein has a unique point");
    let p2 = gr
        .interior_point
        .clone()
        .expect("Gorenstein has a unique point");
    if pi_left.apply(&p1, n) != pi_right.apply(&p2, n) {
        return Err(Error::HypothesisViolation(
            "interior points project to different points of the simplex".into(),
        ));
    }
    let mut fp = fiber_product(left, pi_left, right, pi_right)?;
    let lifted = fiber_facet_candidates(&fp)?;
    let product = &mut fp.product;
    let cross_check = match options.hull.check(product.vertices().len(), product.dim()) {
        Err(e) => CrossCheck::Skipped {
            reason: e.to_string(),
        },
        Ok(()) => {
            let brute = enumerate_facets(product.vertices(), product.lattice(), options.hull)?;
            if same_hyperplanes(product.vertices(), &brute, &lifted.facets) {
                CrossCheck::Agreed {
                    facets: brute.len(),
                }
            } else {
                CrossCheck::Disagreed {
                    lifted: lifted.facets.len(),
                    enumerated: brute.len(),
                }
            }
        }
    };
    product.set_facets(lifted.facets.clone())?;
    let mut report = gorenstein_index(product, None)?;
    let spot_k = options.normality_k.min(report.minimal_k);
    report.normality_verified = check_normality(product, spot_k, options.normality)
        .ok()
        .map(|r| r.is_normal());
    let (proj_l, proj_r) = match &report.interior_point {
        Some(p) => (fp.phi_left(p) == p1, fp.phi_right(p) == p2),
        None => (false, false),
    };
    Ok(FibGorReport {
        left: gl,
        right: gr,
        product: report,
        index: kl,
        product_vertices: fp.product.vertices().len(),
        candidates: lifted.candidates,
        facets: lifted.facets.len(),
        cross_check,
        matches_tree_polytope: fp.matches_tree_polytope,
        interior_projects_left: proj_l,
        interior_projects_right: proj_r,
    })
}
