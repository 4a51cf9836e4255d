//! The polytope of a group-based model on a tree.

use serde::{Deserialize, Serialize};

use super::action::SymmetryAction;
use super::point::labeling_point;
use super::tree::Tree;
use crate::error::{Error, Result};
use crate::group::{CayleyTable, GroupSpec};
use crate::kernel::{
    block_points, enumerate_facets, verify_facet, BlockLayout, Facet, HullBounds, LatticeData,
};

/// Largest vertex set built by [`ModelPolytope::tree_polytope`].
pub const MAX_MODEL_VERTICES: u128 = 1 << 20;

/// Conv of the edge labelings of a tree by group elements that sum to the
/// identity around every internal node.
///
/// Coordinates are `x_g^j` for edge `j` (in tree edge order) and element `g`
/// (in enumeration order, identity included), block by block.
#[derive(Debug, Clone)]
pub struct ModelPolytope {
    group: GroupSpec,
    table: CayleyTable,
    tree: Tree,
    vertices: Vec<Vec<i64>>,
    lattice: LatticeData,
    facets: Option<Vec<Facet>>,
    complete: bool,
}

/// JSON form: `{"group":…, "tree":{"edges":…}, "vertices":[[…]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeRecord {
    pub group: GroupSpec,
    pub tree: Tree,
    pub vertices: Vec<Vec<i64>>,
}

impl ModelPolytope {
    /// The claw with `m` edges.
    pub fn claw_polytope(group: &GroupSpec, m: usize) -> Result<Self> {
        if group.order() < 2 {
            return Err(Error::InvalidGroup(
                "the claw polytope needs a nontrivial group".into(),
            ));
        }
        Self::tree_polytope(group, &Tree::claw(m)?)
    }

    pub fn tree_polytope(group: &GroupSpec, tree: &Tree) -> Result<Self> {
        if tree.edge_count() < 2 {
            return Err(Error::InvalidTree(
                "model trees need at least two edges".into(),
            ));
        }
        let n = group.order();
        let leaves = tree.leaves().len() as u32;
        let size = (n as u128).saturating_pow(leaves - 1);
        if size > MAX_MODEL_VERTICES {
            return Err(Error::InfeasibleEnumeration {
                what: "model polytope vertices",
                size,
                bound: MAX_MODEL_VERTICES,
            });
        }
        let table = CayleyTable::new(group);
        let labelings = valid_labelings(tree, &table);
        let vertices = labelings.iter().map(|l| labeling_point(l, n)).collect();
        Ok(Self::assemble(
            group.clone(),
            table,
            tree.clone(),
            vertices,
            true,
        ))
    }

    /// Conv of a chosen set of valid labelings (for faces and small factors).
    pub fn from_labelings(
        group: &GroupSpec,
        tree: &Tree,
        labelings: &[Vec<usize>],
    ) -> Result<Self> {
        let table = CayleyTable::new(group);
        if labelings.is_empty() {
            return Err(Error::Precondition("no labelings given".into()));
        }
        for l in labelings {
            check_labeling(tree, &table, l)?;
        }
        let mut vertices: Vec<Vec<i64>> = labelings
            .iter()
            .map(|l| labeling_point(l, group.order()))
            .collect();
        vertices.sort_unstable_by(|a, b| b.cmp(a));
        vertices.dedup();
        let full =
            (group.order() as u128).pow(tree.leaves().len() as u32 - 1) == vertices.len() as u128;
        Ok(Self::assemble(
            group.clone(),
            table,
            tree.clone(),
            vertices,
            full,
        ))
    }

    pub fn from_record(record: &PolytopeRecord) -> Result<Self> {
        let n = record.group.order();
        let labelings = record
            .vertices
            .iter()
            .map(|v| point_labeling(v, n, record.tree.edge_count()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_labelings(&record.group, &record.tree, &labelings)
    }

    pub fn to_record(&self) -> PolytopeRecord {
        PolytopeRecord {
            group: self.group.clone(),
            tree: self.tree.clone(),
            vertices: self.vertices.clone(),
        }
    }

    fn assemble(
        group: GroupSpec,
        table: CayleyTable,
        tree: Tree,
        vertices: Vec<Vec<i64>>,
        complete: bool,
    ) -> Self {
        let lattice = LatticeData::from_points(&vertices);
        Self {
            group,
            table,
            tree,
            vertices,
            lattice,
            facets: None,
            complete,
        }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn table(&self) -> &CayleyTable {
        &self.table
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    /// Vertices in descending lexicographic order of their coordinates, which
    /// is ascending lexicographic order of the labelings.
    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    pub fn lattice(&self) -> &LatticeData {
        &self.lattice
    }

    pub fn edges(&self) -> usize {
        self.tree.edge_count()
    }

    pub fn block_len(&self) -> usize {
        self.group.order()
    }

    pub fn layout(&self) -> BlockLayout {
        BlockLayout {
            blocks: self.edges(),
            block_len: self.block_len(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.edges() * self.block_len()
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    /// Whether the vertex set is every valid labeling of the tree.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn labeling(&self, vertex: usize) -> Vec<usize> {
        point_labeling(&self.vertices[vertex], self.block_len(), self.edges())
            .expect("vertices are labelings")
    }

    pub fn vertex_index(&self, x: &[i64]) -> Option<usize> {
        self.vertices.binary_search_by(|v| x.cmp(v)).ok()
    }

    /// Membership in the lattice spanned by the vertices.
    ///
    /// For complete claw polytopes this is the congruence test: equal block
    /// sums and `sum_{g,j} x_g^j * g = 0`. Otherwise the HNF basis decides.
    pub fn lattice_membership(&self, x: &[i64]) -> Result<bool> {
        if x.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                found: x.len(),
            });
        }
        if self.complete && self.tree.is_claw() {
            Ok(claw_congruence(&self.group, x))
        } else {
            Ok(self.lattice.contains(x))
        }
    }

    pub fn facets(&self) -> Option<&[Facet]> {
        self.facets.as_deref()
    }

    /// Computes the facet list by exact enumeration if it is not known yet.
    pub fn ensure_facets(&mut self, bounds: HullBounds) -> Result<&[Facet]> {
        if self.facets.is_none() {
            self.facets = Some(enumerate_facets(&self.vertices, &self.lattice, bounds)?);
        }
        Ok(self.facets.as_deref().expect("just set"))
    }

    /// Installs a facet list after certifying every entry. Completeness is the
    /// caller's claim.
    pub fn set_facets(&mut self, facets: Vec<Facet>) -> Result<()> {
        let mut certified = Vec::with_capacity(facets.len());
        for f in &facets {
            let cert = verify_facet(&self.vertices, &self.lattice, &f.functional, f.rhs)
                .map_err(|r| Error::Precondition(format!("not a facet: {f:?} ({r:?})")))?;
            certified.push(cert.facet);
        }
        certified.sort();
        certified.dedup();
        self.facets = Some(certified);
        Ok(())
    }

    /// Lattice points of `kP` (interior points only when `strict`).
    pub fn dilation_points(&self, k: i64, strict: bool) -> Result<Vec<Vec<i64>>> {
        let facets = self
            .facets
            .as_deref()
            .ok_or_else(|| Error::MissingFacets("dilation points need the facet list".into()))?;
        if k < 1 {
            return Err(Error::Precondition(format!(
                "dilation factor must be positive, got {k}"
            )));
        }
        Ok(block_points(self.layout(), k, facets, strict, |x| {
            self.lattice_membership(x).unwrap_or(false)
        }))
    }

    /// Whether `x` lies in `kP` (facet inequalities plus lattice and degree).
    pub fn in_dilation(&self, x: &[i64], k: i64) -> Result<bool> {
        let facets = self
            .facets
            .as_deref()
            .ok_or_else(|| Error::MissingFacets("membership in kP needs the facet list".into()))?;
        if !self.lattice_membership(x)? || x.iter().any(|&c| c < 0) {
            return Ok(false);
        }
        let n = self.block_len();
        if x.chunks(n).any(|b| b.iter().sum::<i64>() != k) {
            return Ok(false);
        }
        Ok(facets.iter().all(|f| f.evaluate(x) >= f.rhs * k))
    }

    /// Validates an action against this polytope: payload shape, and for trees
    /// other than claws, that it maps the vertex set onto itself.
    pub fn validate_action(&self, action: &SymmetryAction) -> Result<()> {
        if let SymmetryAction::Translate { h } = action {
            if !self.tree.is_claw() {
                if h.len() != self.edges() {
                    return Err(Error::InvalidAction(format!("translation {h:?}")));
                }
                for (node, incident) in self.tree.internal_nodes() {
                    if self.table.sum(incident.iter().map(|&e| h[e])) != 0 {
                        return Err(Error::InvalidAction(format!(
                            "translation {h:?} does not sum to the identity at node {node}"
                        )));
                    }
                }
                return Ok(());
            }
        }
        action.validate(&self.group, &self.table, self.edges())?;
        if matches!(action, SymmetryAction::PermuteEdges { .. }) && !self.tree.is_claw() {
            for v in &self.vertices {
                if self.vertex_index(&action.apply(v, &self.table)?).is_none() {
                    return Err(Error::InvalidAction(
                        "edge permutation is not a tree symmetry".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Image of a point under a validated action.
    pub fn apply_action(&self, action: &SymmetryAction, x: &[i64]) -> Result<Vec<i64>> {
        self.validate_action(action)?;
        action.apply(x, &self.table)
    }

    /// The image polytope, with facets carried along when known.
    pub fn transformed(&self, action: &SymmetryAction) -> Result<Self> {
        self.validate_action(action)?;
        let mut vertices = self
            .vertices
            .iter()
            .map(|v| action.apply(v, &self.table))
            .collect::<Result<Vec<_>>>()?;
        vertices.sort_unstable_by(|a, b| b.cmp(a));
        let mut out = Self::assemble(
            self.group.clone(),
            self.table.clone(),
            self.tree.clone(),
            vertices,
            self.complete,
        );
        if let Some(fs) = &self.facets {
            let mut mapped = fs
                .iter()
                .map(|f| {
                    Ok(Facet {
                        functional: action.apply(&f.functional, &self.table)?,
                        rhs: f.rhs,
                        normalizer: f.normalizer,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            mapped.sort();
            out.facets = Some(mapped);
        }
        Ok(out)
    }
}

/// `sum_{g,j} x_g^j * g == 0` and equal block sums, for a claw over `group`.
pub fn claw_congruence(group: &GroupSpec, x: &[i64]) -> bool {
    let n = group.order();
    let k: i64 = x[..n].iter().sum();
    if x.chunks(n).any(|b| b.iter().sum::<i64>() != k) {
        return false;
    }
    let mut weights = vec![0i64; n];
    for block in x.chunks(n) {
        for (w, &c) in weights.iter_mut().zip(block) {
            *w += c;
        }
    }
    let mut total = vec![0i64; group.factors().len()];
    for (g, &w) in weights.iter().enumerate() {
        let e = group.element_at(g);
        for (t, &r) in total.iter_mut().zip(&e.residues) {
            *t += w * r as i64;
        }
    }
    total
        .iter()
        .zip(group.factors())
        .all(|(&t, &f)| t.rem_euclid(f as i64) == 0)
}

/// All labelings satisfying the zero-sum rule, in lexicographic order.
fn valid_labelings(tree: &Tree, table: &CayleyTable) -> Vec<Vec<usize>> {
    let edges = tree.edge_count();
    let nodes = tree.internal_nodes();
    // checks that become decidable once edge `e` is labelled
    let mut due: Vec<Vec<Vec<usize>>> = vec![Vec::new(); edges];
    for (_, incident) in nodes {
        let last = *incident.iter().max().expect("internal nodes have edges");
        due[last].push(incident);
    }
    let n = table.order();
    let mut out = Vec::new();
    let mut labels = vec![0usize; edges];
    fn rec(
        e: usize,
        labels: &mut Vec<usize>,
        due: &[Vec<Vec<usize>>],
        table: &CayleyTable,
        n: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if e == labels.len() {
            out.push(labels.clone());
            return;
        }
        for g in 0..n {
            labels[e] = g;
            if due[e]
                .iter()
                .all(|inc| table.sum(inc.iter().map(|&i| labels[i])) == 0)
            {
                rec(e + 1, labels, due, table, n, out);
            }
        }
    }
    rec(0, &mut labels, &due, table, n, &mut out);
    out
}

fn check_labeling(tree: &Tree, table: &CayleyTable, labels: &[usize]) -> Result<()> {
    if labels.len() != tree.edge_count() || labels.iter().any(|&g| g >= table.order()) {
        return Err(Error::DimensionMismatch {
            expected: tree.edge_count(),
            found: labels.len(),
        });
    }
    for (node, incident) in tree.internal_nodes() {
        if table.sum(incident.iter().map(|&e| labels[e])) != 0 {
            return Err(Error::Precondition(format!(
                "labeling {labels:?} does not sum to the identity at node {node}"
            )));
        }
    }
    Ok(())
}

/// Reads the labeling off a 0/1 point with one 1 per block.
pub fn point_labeling(x: &[i64], block_len: usize, edges: usize) -> Result<Vec<usize>> {
    if x.len() != block_len * edges {
        return Err(Error::DimensionMismatch {
            expected: block_len * edges,
            found: x.len(),
        });
    }
    x.chunks(block_len)
        .map(|b| {
            let ones: Vec<usize> = (0..block_len).filter(|&i| b[i] == 1).collect();
            match (ones.as_slice(), b.iter().all(|&c| c == 0 || c == 1)) {
                ([g], true) => Ok(*g),
                _ => Err(Error::Precondition(format!(
                    "block {b:?} is not a unit vector"
                ))),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32) -> GroupSpec {
        GroupSpec::cyclic(n).unwrap()
    }

    #[test]
    fn z2_tripod_vertices() {
        let p = ModelPolytope::claw_polytope(&z(2), 3).unwrap();
        let mut expected = vec![
            vec![1, 0, 1, 0, 1, 0],
            vec![0, 1, 0, 1, 1, 0],
            vec![0, 1, 1, 0, 0, 1],
            vec![1, 0, 0, 1, 0, 1],
        ];
        expected.sort_unstable_by(|a, b| b.cmp(a));
        assert_eq!(p.vertices(), expected.as_slice());
        assert_eq!(p.dim(), 3);
    }

    #[test]
    fn claw_lattice_matches_hnf() {
        let p = ModelPolytope::claw_polytope(&z(3), 3).unwrap();
        assert_eq!(p.dim(), 6);
        let mut x = vec![0i64; 9];
        for a in 0..3 {
            for b in 0..3 {
                x.fill(0);
                x[a] = 2;
                x[3 + b] = 2;
                x[6] = 1;
                x[7] = 1;
                assert_eq!(
                    claw_congruence(p.group(), &x),
                    p.lattice().contains(&x),
                    "{x:?}"
                );
            }
        }
    }

    #[test]
    fn degenerate_inputs() {
        assert!(ModelPolytope::claw_polytope(&z(2), 1).is_err());
        assert!(ModelPolytope::claw_polytope(&GroupSpec::trivial(), 3).is_err());
        let p = ModelPolytope::claw_polytope(&z(2), 3).unwrap();
        assert!(p.lattice_membership(&[1, 0]).is_err());
        assert!(p.dilation_points(1, false).is_err());
    }

    #[test]
    fn record_round_trip() {
        let p = ModelPolytope::claw_polytope(&z(3), 3).unwrap();
        let json = serde_json::to_string(&p.to_record()).unwrap();
        let q = ModelPolytope::from_record(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(q.vertices(), p.vertices());
        assert!(q.is_complete());
    }

    #[test]
    fn first_level_is_the_vertex_set() {
        let mut p = ModelPolytope::claw_polytope(&z(3), 3).unwrap();
        p.ensure_facets(HullBounds::default()).unwrap();
        let pts = p.dilation_points(1, false).unwrap();
        assert_eq!(pts, p.vertices());
    }
}
