//! Exact facet enumeration with the double description method.
//!
//! The point set is first mapped injectively onto `Z^d` (`d` = affine
//! dimension) by keeping a greedy set of independent coordinates. Facets of
//! the projected polytope are the extreme rays of the cone
//! `{(c0, f) : c0 + f . y >= 0 for every point y}`, which is pointed because
//! the projected polytope is full dimensional. Rays are computed by adding one
//! constraint at a time, combining adjacent rays (combinatorial adjacency
//! test) across each new hyperplane. All arithmetic is exact.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::facet::{verify_facet, Facet};
use super::hnf::LatticeData;
use super::linalg::{
    dot128, independent_columns_from_end, independent_rows, make_primitive, narrow, nullspace,
};
use crate::error::{Error, Result};

/// Size limits for brute-force facet enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HullBounds {
    pub max_vertices: usize,
    pub max_dim: usize,
}

impl Default for HullBounds {
    fn default() -> Self {
        Self {
            max_vertices: 200,
            max_dim: 12,
        }
    }
}

impl HullBounds {
    pub fn check(&self, vertices: usize, dim: usize) -> Result<()> {
        if vertices > self.max_vertices {
            return Err(Error::InfeasibleEnumeration {
                what: "facet enumeration (vertices)",
                size: vertices as u128,
                bound: self.max_vertices as u128,
            });
        }
        if dim > self.max_dim {
            return Err(Error::InfeasibleEnumeration {
                what: "facet enumeration (dimension)",
                size: dim as u128,
                bound: self.max_dim as u128,
            });
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn new(n: usize) -> Self {
        Self(vec![0; n.div_ceil(64)])
    }
    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn is_subset_of(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

struct Ray {
    z: Vec<i128>,
    zeros: BitSet,
}

/// All facets of `conv(points)`, each certified by [`verify_facet`], sorted by
/// `(functional, rhs)`. Functionals are supported on the greedy independent
/// coordinates chosen from the end of the coordinate list.
pub fn enumerate_facets(
    points: &[Vec<i64>],
    lattice: &LatticeData,
    bounds: HullBounds,
) -> Result<Vec<Facet>> {
    if points.is_empty() {
        return Err(Error::Precondition("empty point set".into()));
    }
    let d = lattice.dim();
    bounds.check(points.len(), d)?;
    if d == 0 {
        return Ok(Vec::new());
    }
    let ambient = points[0].len();
    let anchor = &points[0];
    let diffs: Vec<Vec<i128>> = points
        .iter()
        .map(|p| p.iter().zip(anchor).map(|(a, b)| (a - b) as i128).collect())
        .collect();
    let coords = independent_columns_from_end(&diffs, ambient);
    debug_assert_eq!(coords.len(), d);

    let rows: Vec<Vec<i128>> = points
        .iter()
        .map(|p| {
            std::iter::once(1i128)
                .chain(coords.iter().map(|&c| p[c] as i128))
                .collect()
        })
        .collect();
    let rays = double_description(&rows, d + 1);

    let mut facets: Vec<Facet> = rays
        .par_iter()
        .map(|z| {
            let mut functional = vec![0i64; ambient];
            for (&c, &v) in coords.iter().zip(&z[1..]) {
                functional[c] = i64::try_from(v).expect("facet coefficient exceeds i64");
            }
            let rhs = -i64::try_from(z[0]).expect("facet rhs exceeds i64");
            verify_facet(points, lattice, &functional, rhs)
                .map(|cert| cert.facet)
                .map_err(|rej| {
                    Error::Precondition(format!("double description produced a non-facet: {rej:?}"))
                })
        })
        .collect::<Result<_>>()?;
    facets.sort();
    facets.dedup();
    Ok(facets)
}

/// Extreme rays of `{z : row . z >= 0 for all rows}` for a row set of full
/// column rank `n`.
fn double_description(rows: &[Vec<i128>], n: usize) -> Vec<Vec<i128>> {
    let basis = independent_rows(rows);
    assert_eq!(basis.len(), n, "rows must have full column rank");
    let nrows = rows.len();

    let mut rays: Vec<Ray> = Vec::with_capacity(n);
    for (pos, &r) in basis.iter().enumerate() {
        let others: Vec<Vec<i128>> = basis
            .iter()
            .enumerate()
            .filter(|&(q, _)| q != pos)
            .map(|(_, &i)| rows[i].clone())
            .collect();
        let mut z = nullspace(&others, n)
            .pop()
            .expect("one-dimensional null space");
        if dot128(&rows[r], &z) < 0 {
            z.iter_mut().for_each(|x| *x = -*x);
        }
        let mut zeros = BitSet::new(nrows);
        for (q, &i) in basis.iter().enumerate() {
            if q != pos {
                zeros.insert(i);
            }
        }
        rays.push(Ray { z, zeros });
    }

    let mut in_basis = vec![false; nrows];
    basis.iter().for_each(|&i| in_basis[i] = true);

    for (i, row) in rows.iter().enumerate() {
        if in_basis[i] {
            continue;
        }
        let values: Vec<i128> = rays.iter().map(|r| dot128(row, &r.z)).collect();
        if values.iter().all(|&v| v >= 0) {
            for (ray, &v) in rays.iter_mut().zip(&values) {
                if v == 0 {
                    ray.zeros.insert(i);
                }
            }
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&r| values[r] > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&r| values[r] < 0).collect();

        let pairs: Vec<(usize, usize)> = pos
            .iter()
            .flat_map(|&p| neg.iter().map(move |&q| (p, q)))
            .collect();
        let new_rays: Vec<Ray> = pairs
            .par_iter()
            .filter_map(|&(p, q)| {
                let common = rays[p].zeros.and(&rays[q].zeros);
                if common.count() + 2 < n {
                    return None;
                }
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(r, ray)| r != p && r != q && common.is_subset_of(&ray.zeros));
                if blocked {
                    return None;
                }
                let (vp, vq) = (values[p], values[q]);
                let mut z: Vec<i128> = rays[q]
                    .z
                    .iter()
                    .zip(&rays[p].z)
                    .map(|(&a, &b)| vp * a - vq * b)
                    .collect();
                make_primitive(&mut z);
                let mut zeros = common;
                zeros.insert(i);
                Some(Ray { z, zeros })
            })
            .collect();

        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + new_rays.len());
        for (mut ray, &v) in rays.into_iter().zip(&values) {
            if v > 0 {
                next.push(ray);
            } else if v == 0 {
                ray.zeros.insert(i);
                next.push(ray);
            }
        }
        next.extend(new_rays);
        rays = next;
    }
    let mut out: Vec<Vec<i128>> = rays.into_iter().map(|r| r.z).collect();
    out.sort();
    out.dedup();
    out.iter()
        .map(|z| narrow(z).iter().map(|&x| x as i128).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn facets_of(points: &[Vec<i64>]) -> Vec<Facet> {
        let l = LatticeData::from_points(points);
        enumerate_facets(points, &l, HullBounds::default()).unwrap()
    }

    #[test]
    fn square_has_four_facets() {
        let sq = vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]];
        assert_eq!(facets_of(&sq).len(), 4);
    }

    #[test]
    fn cube_and_octahedron() {
        let mut cube = Vec::new();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    cube.push(vec![a, b, c]);
                }
            }
        }
        assert_eq!(facets_of(&cube).len(), 6);
        let oct = vec![
            vec![1, 0, 0],
            vec![-1, 0, 0],
            vec![0, 1, 0],
            vec![0, -1, 0],
            vec![0, 0, 1],
            vec![0, 0, -1],
        ];
        assert_eq!(facets_of(&oct).len(), 8);
    }

    #[test]
    fn interior_points_and_duplicates_are_ignored() {
        let pts = vec![
            vec![0, 0],
            vec![4, 0],
            vec![0, 4],
            vec![1, 1],
            vec![4, 0],
            vec![2, 1],
        ];
        assert_eq!(facets_of(&pts).len(), 3);
    }

    #[test]
    fn lower_dimensional_in_ambient_space() {
        // triangle in the plane x+y+z = 1
        let tri = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        let f = facets_of(&tri);
        assert_eq!(f.len(), 3);
        for facet in &f {
            assert_eq!(touching(&tri, facet), 2);
        }
    }

    fn touching(pts: &[Vec<i64>], f: &Facet) -> usize {
        pts.iter().filter(|p| f.slack(p) == 0).count()
    }

    #[test]
    fn bounds_are_enforced() {
        let sq = vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]];
        let l = LatticeData::from_points(&sq);
        let tight = HullBounds {
            max_vertices: 3,
            max_dim: 12,
        };
        assert!(enumerate_facets(&sq, &l, tight).is_err());
    }
}
