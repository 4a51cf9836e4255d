//! The cyclic group of order three on claw trees: closed-form facets, the
//! `S` functionals, normalization under the symmetry actions, and a
//! constructive decomposition of dilated lattice points into vertices.
//!
//! Coordinates are the full `3m` block coordinates `(x_0^j, x_1^j, x_2^j)`.
//! Edges are 0-based here, so "the last edge" is `m - 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{CayleyTable, GroupSpec};
use crate::kernel::{Facet, HullBounds};
use crate::model::{labeling_point, undo_all, ModelPolytope, SymmetryAction};
use crate::normality::{decompose_brute, validate_decomposition};

/// Weight vectors of the two inequality families, indexed by `a_j`.
pub struct ZVectors;

impl ZVectors {
    pub const U: [[i64; 3]; 3] = [[0, 1, 2], [1, 2, 0], [2, 0, 1]];
    pub const W: [[i64; 3]; 3] = [[0, 2, 1], [1, 0, 2], [2, 1, 0]];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    U,
    W,
}

impl Family {
    fn vectors(self) -> &'static [[i64; 3]; 3] {
        match self {
            Family::U => &ZVectors::U,
            Family::W => &ZVectors::W,
        }
    }
}

/// An index `(a_1, ..., a_m)` with entries in `{0,1,2}` summing to 2 mod 3.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ATuple {
    pub entries: Vec<u8>,
    pub family: Family,
}

impl ATuple {
    pub fn new(entries: Vec<u8>, family: Family) -> Result<Self> {
        if entries.iter().any(|&a| a > 2) {
            return Err(Error::Precondition(format!(
                "entries of {entries:?} must lie in 0..=2"
            )));
        }
        if entries.iter().map(|&a| a as u32).sum::<u32>() % 3 != 2 {
            return Err(Error::Precondition(format!(
                "{entries:?} does not sum to 2 mod 3"
            )));
        }
        Ok(Self { entries, family })
    }

    /// Integer sum of the entries.
    pub fn weight(&self) -> u32 {
        self.entries.iter().map(|&a| a as u32).sum()
    }

    pub fn functional(&self) -> Vec<i64> {
        let vecs = self.family.vectors();
        self.entries
            .iter()
            .flat_map(|&a| vecs[a as usize])
            .collect()
    }
}

/// Every `(a_1..a_m)` in `{0,1,2}^m` with sum 2 mod 3, lexicographically.
pub fn a_tuples(m: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur = vec![0u8; m];
    loop {
        if cur.iter().map(|&a| a as u32).sum::<u32>() % 3 == 2 {
            out.push(cur.clone());
        }
        let Some(i) = (0..m).rev().find(|&i| cur[i] < 2) else {
            break;
        };
        cur[i] += 1;
        cur[i + 1..].fill(0);
    }
    out
}

/// `S(x, A)`: the left side of the inequality for `A`.
pub fn s_value(x: &[i64], a: &ATuple) -> Result<i64> {
    if x.len() != 3 * a.entries.len() {
        return Err(Error::DimensionMismatch {
            expected: 3 * a.entries.len(),
            found: x.len(),
        });
    }
    let vecs = a.family.vectors();
    Ok(a.entries
        .iter()
        .zip(x.chunks(3))
        .map(|(&aj, b)| {
            vecs[aj as usize]
                .iter()
                .zip(b)
                .map(|(w, c)| w * c)
                .sum::<i64>()
        })
        .sum())
}

/// A linear equation `functional . x = rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Equality {
    pub functional: Vec<i64>,
    pub rhs: i64,
}

/// Inequality description of `kP_m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Z3FacetList {
    pub m: usize,
    pub k: i64,
    pub nonnegativity: Vec<Facet>,
    pub equalities: Vec<Equality>,
    pub a_facets: Vec<(ATuple, Facet)>,
}

impl Z3FacetList {
    /// All inequalities, non-negativity first.
    pub fn inequalities(&self) -> Vec<Facet> {
        self.nonnegativity
            .iter()
            .cloned()
            .chain(self.a_facets.iter().map(|(_, f)| f.clone()))
            .collect()
    }

    pub fn facet_count(&self) -> usize {
        self.nonnegativity.len() + self.a_facets.len()
    }
}

/// Facets of `kP_m` in closed form: `x_i^j >= 0`, block sums `k`, and for
/// every `A` both `sum_j <u_{a_j}, x^j> >= 2k` and the `w` analogue.
///
/// Lattice normalizers are 1 for non-negativity and 3 for the `A` facets
/// (vertex values of `S` are all congruent to 2 mod 3).
pub fn z3_facet_list(m: usize, k: i64) -> Result<Z3FacetList> {
    if m < 3 {
        return Err(Error::Precondition(format!(
            "the closed form needs m >= 3, got {m}"
        )));
    }
    let dim = 3 * m;
    let nonnegativity = (0..dim)
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
    let equalities = (0..m)
        .map(|j| {
            let mut f = vec![0; dim];
            f[3 * j..3 * j + 3].fill(1);
            Equality {
                functional: f,
                rhs: k,
            }
        })
        .collect();
    let mut a_facets = Vec::new();
    for entries in a_tuples(m) {
        for family in [Family::U, Family::W] {
            let a = ATuple {
                entries: entries.clone(),
                family,
            };
            let facet = Facet {
                functional: a.functional(),
                rhs: 2 * k,
                normalizer: 3,
            };
            a_facets.push((a, facet));
        }
    }
    Ok(Z3FacetList {
        m,
        k,
        nonnegativity,
        equalities,
        a_facets,
    })
}

/// `v(0)`: label 0 on every edge.
pub fn vertex_zero(m: usize) -> Vec<i64> {
    labeling_point(&vec![0; m], 3)
}

/// `v(a, b)`: label 1 on edge `a`, label 2 on edge `b`, 0 elsewhere.
pub fn vertex_pair(m: usize, a: usize, b: usize) -> Vec<i64> {
    let mut l = vec![0; m];
    l[a] = 1;
    l[b] = 2;
    labeling_point(&l, 3)
}

fn block(x: &[i64], j: usize) -> [i64; 3] {
    [x[3 * j], x[3 * j + 1], x[3 * j + 2]]
}

/// Sort key for the multiset order: larger key means larger multiset.
fn multiset_key(b: [i64; 3]) -> [i64; 3] {
    let mut s = b;
    s.sort_unstable_by(|p, q| q.cmp(p));
    s
}

/// Most frequent element of a block; 0 wins ties, then the smallest.
fn most_frequent(b: [i64; 3]) -> usize {
    let max = *b.iter().max().expect("three entries");
    (0..3).find(|&i| b[i] == max).expect("max is attained")
}

/// Record of the actions used to normalize a point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizationTrace {
    pub actions: Vec<SymmetryAction>,
    pub point: Vec<i64>,
}

/// Whether `x` satisfies the normal form: the last edge carries a minimal
/// multiset, 0 is a most frequent element on every other edge, and
/// `x_1 >= x_2` on the last edge.
pub fn is_normalized(x: &[i64]) -> bool {
    let m = x.len() / 3;
    let last = multiset_key(block(x, m - 1));
    (0..m - 1).all(|j| {
        let b = block(x, j);
        multiset_key(b) >= last && b[0] >= b[1] && b[0] >= b[2]
    }) && x[3 * (m - 1) + 1] >= x[3 * (m - 1) + 2]
}

/// Translations `h` with sum 0, identity first, in lexicographic order of
/// `(h_1, ..., h_{m-1})`.
pub fn translations(m: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = 3usize.pow(m as u32 - 1);
    (0..total).map(move |mut code| {
        let mut h = vec![0usize; m];
        for slot in h[..m - 1].iter_mut().rev() {
            *slot = code % 3;
            code /= 3;
        }
        h[m - 1] = (3 - h[..m - 1].iter().sum::<usize>() % 3) % 3;
        h
    })
}

/// First translation moving a most frequent element of every block to 0.
pub fn zero_maximal_translation(x: &[i64]) -> Option<Vec<usize>> {
    let m = x.len() / 3;
    translations(m).find(|h| {
        (0..m).all(|j| {
            let b = block(x, j);
            b[h[j]] == *b.iter().max().expect("nonempty")
        })
    })
}

/// Which rule of the step picked the vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepCase {
    /// Degree one: the point is a vertex.
    Vertex,
    /// A translation makes 0 most frequent everywhere; subtract its labeling.
    ZeroMaximal,
    /// The last edge still contains 0.
    ZeroOnLastEdge,
    /// The point lies on a facet with weight 2 and `a_m = 1`.
    OnSmallFacet,
    /// Some earlier edge contains the element 2.
    TwoOnEarlierEdge,
    MostSpecific,
}

impl StepCase {
    pub fn name(self) -> &'static str {
        match self {
            StepCase::Vertex => "vertex",
            StepCase::ZeroMaximal => "zero_maximal",
            StepCase::ZeroOnLastEdge => "zero_on_last_edge",
            StepCase::OnSmallFacet => "on_small_facet",
            StepCase::TwoOnEarlierEdge => "two_on_earlier_edge",
            StepCase::MostSpecific => "most_specific",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Z3Step {
    pub vertex: Vec<i64>,
    pub case: StepCase,
}

/// How one level of the decomposition was handled.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum LevelRecord {
    Step {
        k: i64,
        case: StepCase,
    },
    /// Edges whose block is concentrated on 0 were removed.
    DropEdges {
        k: i64,
        edges: Vec<usize>,
    },
    Brute {
        k: i64,
        edges: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Z3Decomposition {
    pub point: Vec<i64>,
    pub k: i64,
    pub vertices: Vec<Vec<i64>>,
    /// Normalization applied at the top level.
    pub trace: Vec<SymmetryAction>,
    pub levels: Vec<LevelRecord>,
}

/// The Z3 claw polytopes `P_2, ..., P_m`, each with its facet list.
#[derive(Debug, Clone)]
pub struct Z3Claw {
    m: usize,
    table: CayleyTable,
    /// `levels[i]` is the claw with `i + 2` edges.
    levels: Vec<ModelPolytope>,
}

impl Z3Claw {
    pub fn new(m: usize) -> Result<Self> {
        if m < 3 {
            return Err(Error::Precondition(format!("need m >= 3, got {m}")));
        }
        let group = GroupSpec::cyclic(3)?;
        let mut levels = Vec::new();
        for edges in 2..=m {
            let mut p = ModelPolytope::claw_polytope(&group, edges)?;
            if edges == 2 {
                p.ensure_facets(HullBounds::default())?;
            } else {
                p.set_facets(z3_facet_list(edges, 1)?.inequalities())?;
            }
            levels.push(p);
        }
        Ok(Self {
            m,
            table: CayleyTable::new(&group),
            levels,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn polytope(&self) -> &ModelPolytope {
        self.level(self.m)
    }

    fn level(&self, edges: usize) -> &ModelPolytope {
        &self.levels[edges - 2]
    }

    fn require(&self, x: &[i64], k: i64) -> Result<()> {
        if !self.polytope().in_dilation(x, k)? {
            return Err(Error::Precondition(format!(
                "point is not in {k}P and the lattice"
            )));
        }
        Ok(())
    }

    /// Moves `x` into normal form with an edge transposition, a translation and
    /// the automorphism `x -> 2x`, each only when needed.
    pub fn normalize(&self, x: &[i64], k: i64) -> Result<NormalizationTrace> {
        self.require(x, k)?;
        Ok(normalize_point(x, &self.table))
    }

    /// One vertex `v` with `x - v` in `(k-1)P`, for a normalized `x`.
    ///
    /// The result is checked against the level `k - 1` facets and the lattice
    /// before it is returned.
    pub fn step(&self, x: &[i64], k: i64) -> Result<Z3Step> {
        self.require(x, k)?;
        self.step_at(self.m, x, k)
    }

    fn step_at(&self, m: usize, x: &[i64], k: i64) -> Result<Z3Step> {
        if !is_normalized(x) {
            return Err(Error::Precondition("point is not normalized".into()));
        }
        if k == 1 {
            return Ok(Z3Step {
                vertex: x.to_vec(),
                case: StepCase::Vertex,
            });
        }
        let last = m - 1;
        let (vertex, case) = if let Some(h) = zero_maximal_translation(x) {
            (labeling_point(&h, 3), StepCase::ZeroMaximal)
        } else if x[3 * last] > 0 {
            (vertex_zero(m), StepCase::ZeroOnLastEdge)
        } else if let Some(j) = small_facet_edge(x, k) {
            (vertex_pair(m, last, j), StepCase::OnSmallFacet)
        } else if let Some(j) = (0..last).find(|&j| x[3 * j + 2] > 0) {
            (vertex_pair(m, last, j), StepCase::TwoOnEarlierEdge)
        } else {
            (vertex_pair(m, 0, last), StepCase::MostSpecific)
        };
        let rest: Vec<i64> = x.iter().zip(&vertex).map(|(a, b)| a - b).collect();
        let p = self.level(m);
        if rest.iter().any(|&c| c < 0) {
            return Err(Error::Z3StepRejected {
                case: case.name(),
                detail: format!("vertex {vertex:?} is not below {x:?}"),
            });
        }
        if !p.lattice_membership(&rest)? {
            return Err(Error::Z3StepRejected {
                case: case.name(),
                detail: "remainder left the lattice".into(),
            });
        }
        let facets = p.facets().expect("set in new");
        if let Some(f) = facets.iter().find(|f| f.evaluate(&rest) < f.rhs * (k - 1)) {
            return Err(Error::Z3StepRejected {
                case: case.name(),
                detail: format!(
                    "remainder violates {:?} >= {}",
                    f.functional,
                    f.rhs * (k - 1)
                ),
            });
        }
        Ok(Z3Step { vertex, case })
    }

    /// `k` vertices summing to `x`.
    pub fn decompose(&self, x: &[i64], k: i64) -> Result<Z3Decomposition> {
        self.require(x, k)?;
        let mut levels = Vec::new();
        let top = normalize_point(x, &self.table);
        let mut vertices = self.decompose_at(self.m, &top.point, k, &mut levels)?;
        for v in vertices.iter_mut() {
            *v = undo_all(&top.actions, v, &self.table)?;
        }
        vertices.sort_unstable_by(|a, b| b.cmp(a));
        if !validate_decomposition(self.polytope(), x, k, &vertices) {
            return Err(Error::Z3StepRejected {
                case: "final",
                detail: "vertices do not sum to the point".into(),
            });
        }
        Ok(Z3Decomposition {
            point: x.to_vec(),
            k,
            vertices,
            trace: top.actions,
            levels,
        })
    }

    /// Decomposes a point of `kP_edges` that is already normalized.
    fn decompose_at(
        &self,
        edges: usize,
        x: &[i64],
        k: i64,
        log: &mut Vec<LevelRecord>,
    ) -> Result<Vec<Vec<i64>>> {
        if k == 0 {
            return Ok(Vec::new());
        }
        let full: Vec<usize> = (0..edges).filter(|&j| x[3 * j] == k).collect();
        if !full.is_empty() {
            log.push(LevelRecord::DropEdges {
                k,
                edges: full.clone(),
            });
            let keep: Vec<usize> = (0..edges).filter(|j| !full.contains(j)).collect();
            let sub_vertices = match keep.len() {
                0 => vec![Vec::new(); k as usize],
                1 => {
                    return Err(Error::Precondition(
                        "a single edge carries a nonzero label, so the point is not in kP".into(),
                    ))
                }
                n => {
                    let sub: Vec<i64> = keep.iter().flat_map(|&j| block(x, j)).collect();
                    let sub_norm = normalize_point(&sub, &self.table);
                    let mut vs = self.decompose_at(n, &sub_norm.point, k, log)?;
                    for v in vs.iter_mut() {
                        *v = undo_all(&sub_norm.actions, v, &self.table)?;
                    }
                    vs
                }
            };
            return Ok(sub_vertices
                .into_iter()
                .map(|sv| {
                    let mut v = vec![0i64; 3 * edges];
                    for &j in &full {
                        v[3 * j] = 1;
                    }
                    for (i, &j) in keep.iter().enumerate() {
                        v[3 * j..3 * j + 3].copy_from_slice(&sv[3 * i..3 * i + 3]);
                    }
                    v
                })
                .collect());
        }
        let p = self.level(edges);
        if edges <= 2 || k <= 2 {
            log.push(LevelRecord::Brute { k, edges });
            let r = decompose_brute(x, k, p)?;
            return r
                .vertices()
                .map(<[_]>::to_vec)
                .ok_or_else(|| Error::Z3StepRejected {
                    case: "brute",
                    detail: format!("no decomposition of {x:?} at level {k}"),
                });
        }
        let step = self.step_at(edges, x, k)?;
        log.push(LevelRecord::Step { k, case: step.case });
        let rest: Vec<i64> = x.iter().zip(&step.vertex).map(|(a, b)| a - b).collect();
        let norm = normalize_point(&rest, &self.table);
        let mut tail = self.decompose_at(edges, &norm.point, k - 1, log)?;
        for v in tail.iter_mut() {
            *v = undo_all(&norm.actions, v, &self.table)?;
        }
        tail.push(step.vertex);
        Ok(tail)
    }
}

/// Edge `j < m-1` such that `x` is on the `u` facet with `a_j = a_last = 1`.
fn small_facet_edge(x: &[i64], k: i64) -> Option<usize> {
    let m = x.len() / 3;
    (0..m - 1).find(|&j| {
        let mut entries = vec![0u8; m];
        entries[j] = 1;
        entries[m - 1] = 1;
        let a = ATuple {
            entries,
            family: Family::U,
        };
        s_value(x, &a).expect("matching length") == 2 * k
    })
}

fn normalize_point(x: &[i64], table: &CayleyTable) -> NormalizationTrace {
    let m = x.len() / 3;
    let mut actions = Vec::new();
    let mut y = x.to_vec();
    let last = m - 1;
    let keys: Vec<[i64; 3]> = (0..m).map(|j| multiset_key(block(&y, j))).collect();
    let min = *keys.iter().min().expect("m >= 1");
    if keys[last] != min {
        let j = keys.iter().position(|&k| k == min).expect("attained");
        let mut sigma: Vec<usize> = (0..m).collect();
        sigma.swap(j, last);
        actions.push(SymmetryAction::PermuteEdges { sigma });
    }
    if let Some(a) = actions.last() {
        y = a.apply(&y, table).expect("shape checked");
    }
    let mut h: Vec<usize> = (0..last).map(|j| most_frequent(block(&y, j))).collect();
    h.push((3 - h.iter().sum::<usize>() % 3) % 3);
    if h.iter().any(|&g| g != 0) {
        let a = SymmetryAction::Translate { h };
        y = a.apply(&y, table).expect("shape checked");
        actions.push(a);
    }
    if y[3 * last + 1] < y[3 * last + 2] {
        let a = SymmetryAction::Automorphism {
            images: vec![0, 2, 1],
        };
        y = a.apply(&y, table).expect("shape checked");
        actions.push(a);
    }
    NormalizationTrace { actions, point: y }
}
