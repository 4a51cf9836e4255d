//! Decomposing dilated lattice points into sums of vertices, normality
//! sweeps, and the non-normality witnesses for tripods over groups of even
//! order at least six.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{CayleyTable, GroupElement, GroupSpec};
use crate::kernel::HullBounds;
use crate::model::{labeling_point, GPresentation, LatticePoint, ModelPolytope};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Outcome {
    Decomposable {
        vertices: Vec<Vec<i64>>,
    },
    /// The search finished without a decomposition after visiting `explored`
    /// nodes.
    Indecomposable {
        explored: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionResult {
    pub point: Vec<i64>,
    pub k: i64,
    pub outcome: Outcome,
}

impl DecompositionResult {
    pub fn is_decomposable(&self) -> bool {
        matches!(self.outcome, Outcome::Decomposable { .. })
    }

    pub fn vertices(&self) -> Option<&[Vec<i64>]> {
        match &self.outcome {
            Outcome::Decomposable { vertices } => Some(vertices),
            Outcome::Indecomposable { .. } => None,
        }
    }
}

/// Checks that `vertices` are `k` vertices of `polytope` summing to `x`.
pub fn validate_decomposition(
    polytope: &ModelPolytope,
    x: &[i64],
    k: i64,
    vertices: &[Vec<i64>],
) -> bool {
    if vertices.len() as i64 != k || vertices.iter().any(|v| polytope.vertex_index(v).is_none()) {
        return false;
    }
    let mut sum = vec![0i64; x.len()];
    for v in vertices {
        for (s, c) in sum.iter_mut().zip(v) {
            *s += c;
        }
    }
    sum == x
}

/// Exhaustive search for `k` vertices of `polytope` summing to `x`.
///
/// At each step the first nonzero coordinate of the first edge block fixes the
/// label of that edge; every vertex with that label that fits below the
/// remainder is tried. Remainders known to fail are memoized, so a negative
/// answer means the whole search space was exhausted.
pub fn decompose_brute(x: &[i64], k: i64, polytope: &ModelPolytope) -> Result<DecompositionResult> {
    check_point(polytope, x, k)?;
    let n = polytope.block_len();
    let labelings: Vec<Vec<usize>> = (0..polytope.vertices().len())
        .map(|i| polytope.labeling(i))
        .collect();
    let mut by_first: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, l) in labelings.iter().enumerate() {
        by_first[l[0]].push(i);
    }
    let mut search = BruteSearch {
        n,
        labelings: &labelings,
        by_first: &by_first,
        failed: HashSet::new(),
        explored: 0,
        chosen: Vec::new(),
    };
    let mut rem = x.to_vec();
    let outcome = if search.run(&mut rem, k) {
        Outcome::Decomposable {
            vertices: search
                .chosen
                .iter()
                .map(|&i| polytope.vertices()[i].clone())
                .collect(),
        }
    } else {
        Outcome::Indecomposable {
            explored: search.explored,
        }
    };
    Ok(DecompositionResult {
        point: x.to_vec(),
        k,
        outcome,
    })
}

fn check_point(polytope: &ModelPolytope, x: &[i64], k: i64) -> Result<()> {
    if k < 1 {
        return Err(Error::Precondition(format!("k must be positive, got {k}")));
    }
    let inside = if polytope.facets().is_some() {
        polytope.in_dilation(x, k)?
    } else {
        polytope.lattice_membership(x)?
            && x.iter().all(|&c| c >= 0)
            && x.chunks(polytope.block_len())
                .all(|b| b.iter().sum::<i64>() == k)
    };
    if !inside {
        return Err(Error::Precondition(format!(
            "point is not in {k}P and the lattice"
        )));
    }
    Ok(())
}

struct BruteSearch<'a> {
    n: usize,
    labelings: &'a [Vec<usize>],
    by_first: &'a [Vec<usize>],
    failed: HashSet<Vec<i64>>,
    explored: u64,
    chosen: Vec<usize>,
}

impl BruteSearch<'_> {
    fn run(&mut self, rem: &mut Vec<i64>, k: i64) -> bool {
        self.explored += 1;
        if k == 0 {
            return rem.iter().all(|&c| c == 0);
        }
        if self.failed.contains(rem) {
            return false;
        }
        let n = self.n;
        let g0 = rem[..n]
            .iter()
            .position(|&c| c > 0)
            .expect("block sums equal k > 0");
        let (by_first, labelings) = (self.by_first, self.labelings);
        for &v in &by_first[g0] {
            let labels = &labelings[v];
            if labels.iter().enumerate().any(|(j, &g)| rem[j * n + g] == 0) {
                continue;
            }
            labels
                .iter()
                .enumerate()
                .for_each(|(j, &g)| rem[j * n + g] -= 1);
            self.chosen.push(v);
            if self.run(rem, k - 1) {
                return true;
            }
            self.chosen.pop();
            labels
                .iter()
                .enumerate()
                .for_each(|(j, &g)| rem[j * n + g] += 1);
        }
        self.failed.insert(rem.clone());
        false
    }
}

/// Size limits for exhaustive normality sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalityBounds {
    pub max_group_order: usize,
    pub max_edges: usize,
    pub max_k: i64,
}

impl Default for NormalityBounds {
    fn default() -> Self {
        Self {
            max_group_order: 8,
            max_edges: 4,
            max_k: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelReport {
    pub k: i64,
    pub points: usize,
    pub indecomposable: usize,
    /// First indecomposable point in enumeration order.
    pub witness: Option<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalityReport {
    pub group: GroupSpec,
    pub edges: usize,
    pub levels: Vec<LevelReport>,
}

impl NormalityReport {
    pub fn is_normal(&self) -> bool {
        self.levels.iter().all(|l| l.indecomposable == 0)
    }

    pub fn first_failure(&self) -> Option<&LevelReport> {
        self.levels.iter().find(|l| l.indecomposable > 0)
    }
}

/// Decomposes every lattice point of `kP` for `k = 1..=k_max`.
///
/// Level one must consist of the vertices alone; otherwise "sum of vertices"
/// is the wrong target and the sweep refuses to run.
pub fn check_normality(
    polytope: &ModelPolytope,
    k_max: i64,
    bounds: NormalityBounds,
) -> Result<NormalityReport> {
    if polytope.block_len() > bounds.max_group_order {
        return Err(Error::InfeasibleEnumeration {
            what: "normality sweep (group order)",
            size: polytope.block_len() as u128,
            bound: bounds.max_group_order as u128,
        });
    }
    if polytope.edges() > bounds.max_edges {
        return Err(Error::InfeasibleEnumeration {
            what: "normality sweep (edges)",
            size: polytope.edges() as u128,
            bound: bounds.max_edges as u128,
        });
    }
    if k_max > bounds.max_k {
        return Err(Error::InfeasibleEnumeration {
            what: "normality sweep (k)",
            size: k_max.max(0) as u128,
            bound: bounds.max_k.max(0) as u128,
        });
    }
    if polytope.dilation_points(1, false)? != polytope.vertices() {
        return Err(Error::HypothesisViolation(
            "P has lattice points other than its vertices".into(),
        ));
    }
    let mut levels = Vec::new();
    for k in 1..=k_max {
        let points = polytope.dilation_points(k, false)?;
        let verdicts: Vec<bool> = points
            .par_iter()
            .map(|x| decompose_brute(x, k, polytope).map(|r| r.is_decomposable()))
            .collect::<Result<_>>()?;
        let bad: Vec<usize> = (0..points.len()).filter(|&i| !verdicts[i]).collect();
        levels.push(LevelReport {
            k,
            points: points.len(),
            indecomposable: bad.len(),
            witness: bad.first().map(|&i| points[i].clone()),
        });
    }
    Ok(NormalityReport {
        group: polytope.group().clone(),
        edges: polytope.edges(),
        levels,
    })
}

/// The explicit non-normality witness on the tripod, with every claim checked.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub group: GroupSpec,
    /// The pair `(g, h)` with `2g = 0` and `2h` not in `{0, g}`; absent for
    /// elementary abelian 2-groups, which use a fixed point instead.
    pub g: Option<GroupElement>,
    pub h: Option<GroupElement>,
    pub point: Vec<i64>,
    pub presentation: GPresentation,
    pub in_lattice: bool,
    /// Eight vertices summing to `2p`, which places `p` in `4P`.
    pub doubled_decomposition: Vec<Vec<i64>>,
    pub in_4p: bool,
    pub indecomposable: bool,
    pub explored: u64,
}

impl WitnessReport {
    pub fn confirms_non_normality(&self) -> bool {
        self.in_lattice && self.in_4p && self.indecomposable
    }
}

/// Finds `(g, h)` with `2g = 0`, `g != 0` and `2h` not in `{0, g}`, scanning
/// `g` then `h` in element order.
pub fn witness_pair(group: &GroupSpec) -> Option<(usize, usize)> {
    let t = CayleyTable::new(group);
    let n = t.order();
    (1..n).filter(|&g| t.add(g, g) == 0).find_map(|g| {
        (0..n)
            .find(|&h| {
                let d = t.add(h, h);
                d != 0 && d != g
            })
            .map(|h| (g, h))
    })
}

/// Builds and checks the witness point `p` with `p` in `4P ∩ L` but not a
/// sum of four vertices.
pub fn nonnormal_witness(group: &GroupSpec) -> Result<WitnessReport> {
    let n = group.order();
    if n % 2 == 1 || n < 6 {
        return Err(Error::NoWitness(format!(
            "{group} has order {n}; the construction needs even order at least 6"
        )));
    }
    let polytope = ModelPolytope::claw_polytope(group, 3)?;
    let t = polytope.table();
    let (pair, multisets, doubled) = if group.is_elementary_two_group() {
        let e = |a: u32, b: u32, c: u32| -> usize {
            let mut r = vec![0i64; group.factors().len()];
            r[..3].copy_from_slice(&[a as i64, b as i64, c as i64]);
            group
                .index_of(&group.element(&r).expect("residues in range"))
                .expect("element")
        };
        let sets = vec![
            vec![e(0, 0, 0), e(0, 0, 1), e(1, 0, 0), e(1, 0, 1)],
            vec![e(0, 0, 0), e(0, 0, 1), e(0, 1, 0), e(0, 1, 1)],
            vec![e(0, 0, 0), e(0, 0, 1), e(1, 1, 0), e(1, 1, 1)],
        ];
        (None, sets, None)
    } else {
        let (g, h) = witness_pair(group)
            .ok_or_else(|| Error::NoWitness(format!("no suitable pair in {group}")))?;
        let gh = t.add(g, h);
        let m2h = t.neg(t.add(h, h));
        let gm2h = t.add(g, m2h);
        let sets = vec![vec![0, g, h, gh], vec![0, g, h, gh], vec![0, g, m2h, gm2h]];
        let doubled: Vec<[usize; 3]> = vec![
            [0, 0, 0],
            [g, g, 0],
            [g, 0, g],
            [0, g, g],
            [h, h, m2h],
            [gh, gh, m2h],
            [gh, h, gm2h],
            [h, gh, gm2h],
        ];
        (Some((g, h)), sets, Some(doubled))
    };

    let mut point = vec![0i64; 3 * n];
    for (j, set) in multisets.iter().enumerate() {
        for &g in set {
            point[j * n + g] += 1;
        }
    }
    let in_lattice = polytope.lattice_membership(&point)?;
    let doubled_point: Vec<i64> = point.iter().map(|c| 2 * c).collect();
    let doubled_decomposition: Vec<Vec<i64>> = match doubled {
        Some(terms) => terms.iter().map(|l| labeling_point(l, n)).collect(),
        None => match decompose_brute(&doubled_point, 8, &polytope)?.outcome {
            Outcome::Decomposable { vertices } => vertices,
            Outcome::Indecomposable { .. } => Vec::new(),
        },
    };
    let in_4p = validate_decomposition(&polytope, &doubled_point, 8, &doubled_decomposition);
    let (indecomposable, explored) = if in_lattice && in_4p {
        match decompose_brute(&point, 4, &polytope)?.outcome {
            Outcome::Decomposable { .. } => (false, 0),
            Outcome::Indecomposable { explored } => (true, explored),
        }
    } else {
        (false, 0)
    };
    let presentation = GPresentation::from_point(&LatticePoint::new(point.clone(), n)?, group)?;
    Ok(WitnessReport {
        group: group.clone(),
        g: pair.map(|(g, _)| group.element_at(g)),
        h: pair.map(|(_, h)| group.element_at(h)),
        point,
        presentation,
        in_lattice,
        doubled_decomposition,
        in_4p,
        indecomposable,
        explored,
    })
}

/// Normality sweep over a claw polytope after computing its facets.
pub fn check_claw_normality(
    group: &GroupSpec,
    m: usize,
    k_max: i64,
    hull: HullBounds,
    bounds: NormalityBounds,
) -> Result<NormalityReport> {
    let mut p = ModelPolytope::claw_polytope(group, m)?;
    p.ensure_facets(hull)?;
    check_normality(&p, k_max, bounds)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GroupSpec {
        s.parse().unwrap()
    }

    #[test]
    fn witness_pairs() {
        assert_eq!(witness_pair(&g("Z6")), Some((3, 1)));
        assert_eq!(witness_pair(&g("Z8")), Some((4, 1)));
        let z24 = g("Z2xZ4");
        let (a, b) = witness_pair(&z24).unwrap();
        assert_eq!(z24.element_at(a).residues, vec![1, 0]);
        assert_eq!(z24.element_at(b).residues, vec![0, 1]);
        assert_eq!(witness_pair(&g("Z2xZ2xZ2")), None);
    }

    #[test]
    fn z6_witness() {
        let r = nonnormal_witness(&g("Z6")).unwrap();
        let flat: Vec<Vec<u32>> = r
            .presentation
            .multisets
            .iter()
            .map(|s| s.iter().map(|e| e.residues[0]).collect())
            .collect();
        // multisets {0,3,1,4}, {0,3,1,4}, {0,3,4,1} listed in element order
        assert_eq!(
            flat,
            vec![vec![0, 1, 3, 4], vec![0, 1, 3, 4], vec![0, 1, 3, 4]]
        );
        assert!(r.confirms_non_normality());
    }

    #[test]
    fn odd_or_small_groups_have_no_witness() {
        assert!(matches!(
            nonnormal_witness(&g("Z9")),
            Err(Error::NoWitness(_))
        ));
        assert!(matches!(
            nonnormal_witness(&g("Z4")),
            Err(Error::NoWitness(_))
        ));
    }

    #[test]
    fn sums_of_vertices_decompose() {
        let p = ModelPolytope::claw_polytope(&g("Z3"), 3).unwrap();
        let v = p.vertices();
        let x: Vec<i64> = (0..9).map(|i| v[1][i] + v[4][i] + v[7][i]).collect();
        let r = decompose_brute(&x, 3, &p).unwrap();
        assert!(validate_decomposition(&p, &x, 3, r.vertices().unwrap()));
        assert!(decompose_brute(&x, 2, &p).is_err());
    }

    #[test]
    fn z2_tripod_is_normal() {
        let r = check_claw_normality(
            &g("Z2"),
            3,
            4,
            HullBounds::default(),
            NormalityBounds::default(),
        )
        .unwrap();
        assert!(r.is_normal());
        assert_eq!(r.levels[0].points, 4);
    }
}
