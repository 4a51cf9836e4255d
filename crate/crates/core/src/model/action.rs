//! Coordinate permutations induced by translations, edge permutations and
//! group automorphisms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{CayleyTable, GroupAutomorphism, GroupSpec};

/// A symmetry acting on block coordinates.
///
/// With blocks `x^j` indexed by group elements:
/// `Translate`: `(hx)^j_i = x^j_{i + h_j}`;
/// `PermuteEdges`: `(sx)^{s(j)} = x^j`;
/// `Automorphism`: `(px)^j_{p(i)} = x^j_i`.
/// Group elements are given by their enumeration index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SymmetryAction {
    Translate { h: Vec<usize> },
    PermuteEdges { sigma: Vec<usize> },
    Automorphism { images: Vec<usize> },
}

impl SymmetryAction {
    pub fn inverse(&self, table: &CayleyTable) -> Self {
        match self {
            Self::Translate { h } => Self::Translate {
                h: h.iter().map(|&g| table.neg(g)).collect(),
            },
            Self::PermuteEdges { sigma } => {
                let mut inv = vec![0; sigma.len()];
                for (j, &s) in sigma.iter().enumerate() {
                    inv[s] = j;
                }
                Self::PermuteEdges { sigma: inv }
            }
            Self::Automorphism { images } => {
                let mut inv = vec![0; images.len()];
                for (i, &p) in images.iter().enumerate() {
                    inv[p] = i;
                }
                Self::Automorphism { images: inv }
            }
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Self::Translate { h } => h.iter().all(|&g| g == 0),
            Self::PermuteEdges { sigma } => sigma.iter().enumerate().all(|(j, &s)| j == s),
            Self::Automorphism { images } => images.iter().enumerate().all(|(i, &p)| i == p),
        }
    }

    /// Checks payload shape; translations must sum to the identity.
    pub fn validate(&self, group: &GroupSpec, table: &CayleyTable, edges: usize) -> Result<()> {
        let n = table.order();
        match self {
            Self::Translate { h } => {
                if h.len() != edges || h.iter().any(|&g| g >= n) {
                    return Err(Error::InvalidAction(format!(
                        "translation {h:?} for {edges} edges"
                    )));
                }
                if table.sum(h.iter().copied()) != 0 {
                    return Err(Error::InvalidAction(format!(
                        "translation {h:?} does not sum to the identity"
                    )));
                }
            }
            Self::PermuteEdges { sigma } => {
                let mut seen = vec![false; edges];
                if sigma.len() != edges
                    || !sigma
                        .iter()
                        .all(|&s| s < edges && !std::mem::replace(&mut seen[s], true))
                {
                    return Err(Error::InvalidAction(format!(
                        "{sigma:?} is not a permutation of {edges} edges"
                    )));
                }
            }
            Self::Automorphism { images } => {
                GroupAutomorphism::new(group, images.clone())?;
            }
        }
        Ok(())
    }

    /// Image of a block-coordinate vector (a point or a functional).
    pub fn apply(&self, x: &[i64], table: &CayleyTable) -> Result<Vec<i64>> {
        let n = table.order();
        if n == 0 || !x.len().is_multiple_of(n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: x.len(),
            });
        }
        let edges = x.len() / n;
        let mut out = vec![0; x.len()];
        match self {
            Self::Translate { h } => {
                if h.len() != edges {
                    return Err(Error::DimensionMismatch {
                        expected: edges,
                        found: h.len(),
                    });
                }
                for (j, &hj) in h.iter().enumerate() {
                    for i in 0..n {
                        out[j * n + i] = x[j * n + table.add(i, hj)];
                    }
                }
            }
            Self::PermuteEdges { sigma } => {
                if sigma.len() != edges {
                    return Err(Error::DimensionMismatch {
                        expected: edges,
                        found: sigma.len(),
                    });
                }
                for (j, &s) in sigma.iter().enumerate() {
                    out[s * n..(s + 1) * n].copy_from_slice(&x[j * n..(j + 1) * n]);
                }
            }
            Self::Automorphism { images } => {
                if images.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: images.len(),
                    });
                }
                for j in 0..edges {
                    for (i, &p) in images.iter().enumerate() {
                        out[j * n + p] = x[j * n + i];
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Applies a sequence of actions in order.
pub fn apply_all(actions: &[SymmetryAction], x: &[i64], table: &CayleyTable) -> Result<Vec<i64>> {
    actions
        .iter()
        .try_fold(x.to_vec(), |acc, a| a.apply(&acc, table))
}

/// Applies the inverses of a sequence of actions in reverse order.
pub fn undo_all(actions: &[SymmetryAction], x: &[i64], table: &CayleyTable) -> Result<Vec<i64>> {
    actions
        .iter()
        .rev()
        .try_fold(x.to_vec(), |acc, a| a.inverse(table).apply(&acc, table))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::point::labeling_point;

    fn z3() -> (GroupSpec, CayleyTable) {
        let g = GroupSpec::cyclic(3).unwrap();
        let t = CayleyTable::new(&g);
        (g, t)
    }

    #[test]
    fn translation_formula() {
        let (_, t) = z3();
        // x(1,2,0) shifted by h = (1,2,0): new label g - h per edge
        let x = labeling_point(&[1, 2, 0], 3);
        let a = SymmetryAction::Translate { h: vec![1, 2, 0] };
        assert_eq!(a.apply(&x, &t).unwrap(), labeling_point(&[0, 0, 0], 3));
        let back = a
            .inverse(&t)
            .apply(&labeling_point(&[0, 0, 0], 3), &t)
            .unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn permutation_and_automorphism() {
        let (_, t) = z3();
        let x = labeling_point(&[1, 2, 0], 3);
        let s = SymmetryAction::PermuteEdges {
            sigma: vec![2, 0, 1],
        };
        assert_eq!(s.apply(&x, &t).unwrap(), labeling_point(&[2, 0, 1], 3));
        let p = SymmetryAction::Automorphism {
            images: vec![0, 2, 1],
        };
        assert_eq!(p.apply(&x, &t).unwrap(), labeling_point(&[2, 1, 0], 3));
        for a in [s, p] {
            let y = a.apply(&x, &t).unwrap();
            assert_eq!(a.inverse(&t).apply(&y, &t).unwrap(), x);
        }
    }

    #[test]
    fn validation() {
        let (g, t) = z3();
        let bad = SymmetryAction::Translate { h: vec![1, 1, 0] };
        assert!(matches!(
            bad.validate(&g, &t, 3),
            Err(Error::InvalidAction(_))
        ));
        assert!(SymmetryAction::PermuteEdges {
            sigma: vec![0, 0, 1]
        }
        .validate(&g, &t, 3)
        .is_err());
        assert!(SymmetryAction::Automorphism {
            images: vec![0, 2, 1]
        }
        .validate(&g, &t, 3)
        .is_ok());
        assert!(SymmetryAction::Automorphism {
            images: vec![1, 2, 0]
        }
        .validate(&g, &t, 3)
        .is_err());
    }

    #[test]
    fn json_tags() {
        let a = SymmetryAction::Translate { h: vec![1, 2, 0] };
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            r#"{"kind":"translate","h":[1,2,0]}"#
        );
    }
}
