//! Gorenstein indices from interior lattice points, and the closed-form
//! facets of the Kimura (Z2 x Z2) claw polytopes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{lattice_distance, Facet};
use crate::model::ModelPolytope;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    Gorenstein { index: i64 },
    NotGorenstein { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GorensteinReport {
    pub polytope: String,
    pub dim: usize,
    pub minimal_k: i64,
    pub interior_count: usize,
    /// The interior point when it is unique.
    pub interior_point: Option<Vec<i64>>,
    /// Lattice distance of the unique interior point from each facet, keyed by
    /// position in the facet list.
    pub distances: BTreeMap<usize, i64>,
    pub verdict: Verdict,
    /// Whether normality was checked up to the decisive level, when known.
    pub normality_verified: Option<bool>,
}

impl GorensteinReport {
    pub fn index(&self) -> Option<i64> {
        match self.verdict {
            Verdict::Gorenstein { index } => Some(index),
            Verdict::NotGorenstein { .. } => None,
        }
    }
}

/// Finds the least `k <= k_max` (default `dim + 1`) where `kP` has an interior
/// lattice point and decides there: Gorenstein of index `k` iff that point is
/// unique and at lattice distance 1 from every facet.
pub fn gorenstein_index(polytope: &ModelPolytope, k_max: Option<i64>) -> Result<GorensteinReport> {
    let facets = polytope
        .facets()
        .ok_or_else(|| Error::MissingFacets("the Gorenstein index needs the facet list".into()))?;
    let dim = polytope.dim();
    let k_max = k_max.unwrap_or(dim as i64 + 1);
    for k in 1..=k_max {
        let interior = polytope.dilation_points(k, true)?;
        if interior.is_empty() {
            continue;
        }
        let mut report = GorensteinReport {
            polytope: polytope_label(polytope),
            dim,
            minimal_k: k,
            interior_count: interior.len(),
            interior_point: None,
            distances: BTreeMap::new(),
            verdict: Verdict::NotGorenstein {
                reason: format!("{} interior lattice points at k = {k}", interior.len()),
            },
            normality_verified: None,
        };
        if let [p] = interior.as_slice() {
            let lattice = polytope.lattice();
            for (i, f) in facets.iter().enumerate() {
                report
                    .distances
                    .insert(i, lattice_distance(p, &f.dilated(k), lattice)?);
            }
            report.interior_point = Some(p.clone());
            report.verdict = match report.distances.iter().find(|(_, &d)| d != 1) {
                None => Verdict::Gorenstein { index: k },
                Some((i, d)) => Verdict::NotGorenstein {
                    reason: format!("interior point has lattice distance {d} from facet {i}"),
                },
            };
        }
        return Ok(report);
    }
    Err(Error::Inconclusive {
        k_max: k_max.max(0) as u32,
    })
}

/// Short description such as `Z3 on 0-1 0-2 0-3`.
pub fn polytope_label(p: &ModelPolytope) -> String {
    let edges: Vec<String> = p
        .tree()
        .edges()
        .iter()
        .map(|(a, b)| format!("{a}-{b}"))
        .collect();
    format!("{} on {}", p.group(), edges.join(" "))
}

/// Facets of `kP` for the Kimura claw with `m` edges over `Z2 x Z2`.
///
/// Elements are indexed `0, a=(0,1), b=(1,0), c=(1,1)`. Besides `x >= 0`
/// there is one inequality per odd subset `A` of edges and per pair
/// `{0, g}`: the coordinates of `{0, g}` summed over `A` plus those of the
/// complementary pair summed over the other edges are at least `k`. These
/// take only odd values on vertices, hence normalizer 2.
pub fn kimura_facets(m: usize, k: i64) -> Result<Vec<Facet>> {
    if m < 3 {
        return Err(Error::Precondition(format!("need m >= 3, got {m}")));
    }
    let dim = 4 * m;
    let mut out: Vec<Facet> = (0..dim)
        .map(|c| {
            let mut f = vec![0; dim];
            f[c] = 1;
            Facet {
                functional: f,
                rhs: 0,
                normalizer: 1,
            }
        })
        .collect();
    let pairings: [([usize; 2], [usize; 2]); 3] =
        [([0, 1], [2, 3]), ([0, 2], [1, 3]), ([0, 3], [1, 2])];
    for mask in 0u32..(1 << m) {
        if mask.count_ones() % 2 == 0 {
            continue;
        }
        for (inside, outside) in pairings {
            let mut f = vec![0; dim];
            for j in 0..m {
                let pair = if mask >> j & 1 == 1 { inside } else { outside };
                for g in pair {
                    f[4 * j + g] = 1;
                }
            }
            out.push(Facet {
                functional: f,
                rhs: k,
                normalizer: 2,
            });
        }
    }
    Ok(out)
}
