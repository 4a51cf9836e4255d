use serde::{Deserialize, Serialize};

use super::hnf::LatticeData;
use super::linalg::{affine_dim, content_i64, dot, gcd_i64};
use crate::error::{Error, Result};

/// A supporting inequality `functional . x >= rhs`.
///
/// The functional is primitive over the ambient integers. `normalizer` is the
/// positive generator of the functional's values on the difference lattice,
/// so `(functional . x - rhs) / normalizer` is the lattice distance of `x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Facet {
    pub functional: Vec<i64>,
    pub rhs: i64,
    pub normalizer: i64,
}

impl Facet {
    /// Builds a facet record, computing the normalizer from `lattice`.
    pub fn with_lattice(functional: Vec<i64>, rhs: i64, lattice: &LatticeData) -> Self {
        let normalizer = normalizer(&functional, lattice);
        Self {
            functional,
            rhs,
            normalizer,
        }
    }

    pub fn evaluate(&self, x: &[i64]) -> i64 {
        dot(&self.functional, x)
    }

    pub fn slack(&self, x: &[i64]) -> i64 {
        self.evaluate(x) - self.rhs
    }

    /// The same inequality for the `k`-th dilation (rhs scaled by `k`).
    pub fn dilated(&self, k: i64) -> Self {
        Self {
            functional: self.functional.clone(),
            rhs: self.rhs * k,
            normalizer: self.normalizer,
        }
    }

    /// Distance in lattice units; fails when the slack is not a multiple of
    /// the normalizer (the point is off the lattice).
    pub fn distance(&self, x: &[i64]) -> Result<i64> {
        let s = self.slack(x);
        if self.normalizer == 0 || s % self.normalizer != 0 {
            return Err(Error::NotInLattice(format!(
                "slack {s} is not a multiple of the normalizer {}",
                self.normalizer
            )));
        }
        Ok(s / self.normalizer)
    }
}

/// gcd of the functional over a basis of the difference lattice.
pub fn normalizer(functional: &[i64], lattice: &LatticeData) -> i64 {
    lattice
        .difference
        .rows()
        .iter()
        .fold(0, |g, b| gcd_i64(g, dot(functional, b)))
}

/// Lattice distance of a dilated lattice point from a facet of matching level.
pub fn lattice_distance(x: &[i64], facet: &Facet, lattice: &LatticeData) -> Result<i64> {
    if x.len() != facet.functional.len() {
        return Err(Error::DimensionMismatch {
            expected: facet.functional.len(),
            found: x.len(),
        });
    }
    if !lattice.contains(x) {
        return Err(Error::NotInLattice(format!("{x:?}")));
    }
    let d = facet.distance(x)?;
    if d < 0 {
        return Err(Error::Precondition(format!(
            "point violates the facet inequality (distance {d})"
        )));
    }
    Ok(d)
}

/// Proof that an inequality defines a facet: the vertices it touches span an
/// affine space of dimension `dim(P) - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetCertificate {
    pub facet: Facet,
    pub touching_vertices: Vec<usize>,
    pub affine_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FacetRejection {
    /// Some vertex violates the inequality.
    Invalid {
        vertex: usize,
        value: i64,
        rhs: i64,
    },
    /// Valid, but the face it cuts out is too small (or the whole polytope);
    /// `face_dim` is -1 for the empty face.
    NotFacet {
        face_dim: i64,
        polytope_dim: usize,
    },
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
}

pub fn verify_facet(
    vertices: &[Vec<i64>],
    lattice: &LatticeData,
    functional: &[i64],
    rhs: i64,
) -> std::result::Result<FacetCertificate, FacetRejection> {
    let ambient = lattice.anchor.len();
    if functional.len() != ambient {
        return Err(FacetRejection::DimensionMismatch {
            expected: ambient,
            found: functional.len(),
        });
    }
    let mut touching = Vec::new();
    for (i, v) in vertices.iter().enumerate() {
        let value = dot(functional, v);
        if value < rhs {
            return Err(FacetRejection::Invalid {
                vertex: i,
                value,
                rhs,
            });
        }
        if value == rhs {
            touching.push(i);
        }
    }
    let polytope_dim = lattice.dim();
    if touching.is_empty() {
        return Err(FacetRejection::NotFacet {
            face_dim: -1,
            polytope_dim,
        });
    }
    let face: Vec<Vec<i64>> = touching.iter().map(|&i| vertices[i].clone()).collect();
    let face_dim = affine_dim(&face);
    if face_dim + 1 != polytope_dim {
        return Err(FacetRejection::NotFacet {
            face_dim: face_dim as i64,
            polytope_dim,
        });
    }
    let g = content_i64(functional);
    let primitive: Vec<i64> = functional.iter().map(|x| x / g).collect();
    // rhs is attained by an integral vertex, so it is divisible by g
    let facet = Facet::with_lattice(primitive, rhs / g, lattice);
    Ok(FacetCertificate {
        facet,
        touching_vertices: touching,
        affine_dim: face_dim,
    })
}

/// Indices of the vertices on which `facet` is tight.
pub fn touching_set(vertices: &[Vec<i64>], facet: &Facet) -> Vec<usize> {
    vertices
        .iter()
        .enumerate()
        .filter(|(_, v)| facet.slack(v) == 0)
        .map(|(i, _)| i)
        .collect()
}
