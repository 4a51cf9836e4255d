//! Lattice points in block coordinates and their multiset presentations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{enumerate_elements, GroupElement, GroupSpec};

/// A non-negative point of `Z^{edges * |G|}` whose edge blocks all have the
/// same sum, its degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePoint {
    coords: Vec<i64>,
    block_len: usize,
}

impl LatticePoint {
    pub fn new(coords: Vec<i64>, block_len: usize) -> Result<Self> {
        if block_len == 0 || coords.is_empty() || !coords.len().is_multiple_of(block_len) {
            return Err(Error::DimensionMismatch {
                expected: block_len.max(1),
                found: coords.len(),
            });
        }
        if let Some(c) = coords.iter().find(|&&c| c < 0) {
            return Err(Error::Precondition(format!("negative coordinate {c}")));
        }
        let p = Self { coords, block_len };
        let k = p.block(0).iter().sum::<i64>();
        if let Some(j) = (0..p.edges()).find(|&j| p.block(j).iter().sum::<i64>() != k) {
            return Err(Error::Precondition(format!(
                "edge {j} has degree {} but edge 0 has degree {k}",
                p.block(j).iter().sum::<i64>()
            )));
        }
        Ok(p)
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.coords
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    pub fn edges(&self) -> usize {
        self.coords.len() / self.block_len
    }

    pub fn block(&self, j: usize) -> &[i64] {
        &self.coords[j * self.block_len..(j + 1) * self.block_len]
    }

    pub fn degree(&self) -> i64 {
        self.block(0).iter().sum()
    }

    /// `x_g^j` with `g` given by its element index.
    pub fn get(&self, edge: usize, element: usize) -> i64 {
        self.coords[edge * self.block_len + element]
    }
}

/// The point of a labeling: a 1 at element `labels[j]` in block `j`.
pub fn labeling_point(labels: &[usize], block_len: usize) -> Vec<i64> {
    let mut x = vec![0; labels.len() * block_len];
    for (j, &g) in labels.iter().enumerate() {
        x[j * block_len + g] = 1;
    }
    x
}

/// Drops the identity coordinate of every block (the reduced view with
/// `|G| - 1` coordinates per edge).
pub fn project_nonidentity(x: &[i64], block_len: usize) -> Vec<i64> {
    x.chunks(block_len)
        .flat_map(|b| b[1..].iter().copied())
        .collect()
}

/// One multiset of group elements per edge, all of equal size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GPresentation {
    pub multisets: Vec<Vec<GroupElement>>,
}

impl GPresentation {
    /// Each multiset lists elements in enumeration order, with repetition.
    pub fn from_point(x: &LatticePoint, group: &GroupSpec) -> Result<Self> {
        if x.block_len() != group.order() {
            return Err(Error::DimensionMismatch {
                expected: group.order(),
                found: x.block_len(),
            });
        }
        let elements = enumerate_elements(group);
        let multisets = (0..x.edges())
            .map(|j| {
                x.block(j)
                    .iter()
                    .zip(&elements)
                    .flat_map(|(&c, g)| std::iter::repeat_n(g.clone(), c as usize))
                    .collect()
            })
            .collect();
        Ok(Self { multisets })
    }

    pub fn to_point(&self, group: &GroupSpec) -> Result<LatticePoint> {
        let Some(first) = self.multisets.first() else {
            return Err(Error::MalformedPresentation("no multisets".into()));
        };
        let k = first.len();
        if let Some(j) = self.multisets.iter().position(|s| s.len() != k) {
            return Err(Error::MalformedPresentation(format!(
                "multiset {j} has {} elements, expected {k}",
                self.multisets[j].len()
            )));
        }
        let n = group.order();
        let mut coords = vec![0i64; n * self.multisets.len()];
        for (j, set) in self.multisets.iter().enumerate() {
            for g in set {
                coords[j * n + group.index_of(g)?] += 1;
            }
        }
        LatticePoint::new(coords, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_degrees() {
        assert!(LatticePoint::new(vec![1, 0, 0, 1], 2).is_ok());
        assert!(LatticePoint::new(vec![1, 0, 1, 1], 2).is_err());
        assert!(LatticePoint::new(vec![1, 0, 1], 2).is_err());
        assert!(LatticePoint::new(vec![-1, 2, 1, 0], 2).is_err());
    }

    #[test]
    fn presentation_of_a_vertex() {
        let z2 = GroupSpec::cyclic(2).unwrap();
        let x = LatticePoint::new(labeling_point(&[1, 1, 0], 2), 2).unwrap();
        let p = GPresentation::from_point(&x, &z2).unwrap();
        let flat: Vec<Vec<u32>> = p
            .multisets
            .iter()
            .map(|s| s.iter().map(|g| g.residues[0]).collect())
            .collect();
        assert_eq!(flat, vec![vec![1], vec![1], vec![0]]);
        assert_eq!(p.to_point(&z2).unwrap(), x);
    }

    #[test]
    fn unequal_multisets_are_malformed() {
        let z2 = GroupSpec::cyclic(2).unwrap();
        let p = GPresentation {
            multisets: vec![vec![z2.identity()], vec![]],
        };
        assert!(matches!(
            p.to_point(&z2),
            Err(Error::MalformedPresentation(_))
        ));
    }

    #[test]
    fn projection_drops_identity() {
        assert_eq!(
            project_nonidentity(&[1, 0, 0, 0, 1, 0], 3),
            vec![0, 0, 1, 0]
        );
    }
}
