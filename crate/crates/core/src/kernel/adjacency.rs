//! Edges of a polytope from its vertex-facet incidences.
//!
//! Two vertices span an edge exactly when the facets containing both cut out
//! no other vertex. The sum of those facet functionals then attains its
//! minimum on the polytope precisely at the two vertices, which is checked
//! directly and returned as the certificate.

use serde::{Deserialize, Serialize};

use super::facet::Facet;
use super::linalg::dot;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeCertificate {
    pub neighbor: usize,
    /// Minimized on the polytope exactly at the two endpoints.
    pub functional: Vec<i64>,
    pub value: i64,
}

/// Neighbours of vertex `v` (by index), each with an exact certificate.
///
/// `facets` must be the complete facet list of `conv(vertices)`.
pub fn adjacent_vertices(
    vertices: &[Vec<i64>],
    facets: &[Facet],
    v: usize,
) -> Vec<EdgeCertificate> {
    let tight: Vec<Vec<bool>> = facets
        .iter()
        .map(|f| vertices.iter().map(|x| f.slack(x) == 0).collect())
        .collect();
    let ambient = vertices[v].len();
    (0..vertices.len())
        .filter(|&w| w != v && vertices[w] != vertices[v])
        .filter_map(|w| {
            let common: Vec<usize> = (0..facets.len())
                .filter(|&i| tight[i][v] && tight[i][w])
                .collect();
            let mut functional = vec![0i64; ambient];
            for &i in &common {
                for (a, b) in functional.iter_mut().zip(&facets[i].functional) {
                    *a += b;
                }
            }
            let value = dot(&functional, &vertices[v]);
            let certified = dot(&functional, &vertices[w]) == value
                && vertices.iter().enumerate().all(|(u, x)| {
                    u == v
                        || u == w
                        || x == &vertices[v]
                        || x == &vertices[w]
                        || dot(&functional, x) > value
                });
            certified.then_some(EdgeCertificate {
                neighbor: w,
                functional,
                value,
            })
        })
        .collect()
}
