//! Row-style Hermite normal form and the lattice data derived from it.

use serde::{Deserialize, Serialize};

use super::linalg::{narrow, widen};

/// A lattice basis in Hermite normal form.
///
/// Rows are linearly independent, pivots (first nonzero entries) are positive
/// and strictly increasing in column, and every entry above a pivot lies in
/// `[0, pivot)`. The form is unique for a given lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HnfBasis {
    rows: Vec<Vec<i64>>,
    ncols: usize,
}

impl HnfBasis {
    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    fn pivot(row: &[i64]) -> Option<usize> {
        row.iter().position(|&x| x != 0)
    }

    /// Integer combination of basis rows equal to `v`, if one exists.
    pub fn coefficients(&self, v: &[i64]) -> Option<Vec<i64>> {
        if v.len() != self.ncols {
            return None;
        }
        let mut rem: Vec<i128> = widen(v);
        let mut coeffs = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let p = Self::pivot(row).expect("basis rows are nonzero");
            // everything left of the pivot must already be cleared
            if rem[..p].iter().any(|&x| x != 0) {
                return None;
            }
            let piv = row[p] as i128;
            if rem[p] % piv != 0 {
                return None;
            }
            let q = rem[p] / piv;
            for (x, &b) in rem.iter_mut().zip(row) {
                *x -= q * b as i128;
            }
            coeffs.push(q as i64);
        }
        rem.iter().all(|&x| x == 0).then_some(coeffs)
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.coefficients(v).is_some()
    }
}

/// Canonical HNF basis of the integer span of `vectors`.
pub fn hnf_basis(vectors: &[Vec<i64>]) -> HnfBasis {
    let ncols = vectors.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<i128>> = vectors.iter().map(|v| widen(v)).collect();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        // Euclid on column c among rows r..
        while let Some(p) = (r..m.len())
            .filter(|&i| m[i][c] != 0)
            .min_by_key(|&i| m[i][c].abs())
        {
            m.swap(r, p);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][c] != 0 {
                    let q = m[i][c].div_euclid(m[r][c]);
                    let pivot_row = m[r].clone();
                    for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                        *x -= q * y;
                    }
                    if m[i][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if r == m.len() || m[r][c] == 0 {
            continue;
        }
        if m[r][c] < 0 {
            m[r].iter_mut().for_each(|x| *x = -*x);
        }
        let pivot_row = m[r].clone();
        for row in m.iter_mut().take(r) {
            let q = row[c].div_euclid(pivot_row[c]);
            if q != 0 {
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= q * y;
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    HnfBasis {
        rows: m.iter().map(|row| narrow(row)).collect(),
        ncols,
    }
}

/// The lattice generated by a point configuration.
///
/// `difference` spans the differences of the points (the lattice of the
/// affine hull, used for lattice distances); `span` is the integer span of
/// the points themselves (used for membership of dilated points).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeData {
    pub difference: HnfBasis,
    pub span: HnfBasis,
    pub anchor: Vec<i64>,
}

impl LatticeData {
    pub fn from_points(points: &[Vec<i64>]) -> Self {
        let anchor = points.first().cloned().unwrap_or_default();
        let diffs: Vec<Vec<i64>> = points[1.min(points.len())..]
            .iter()
            .map(|p| p.iter().zip(&anchor).map(|(a, b)| a - b).collect())
            .collect();
        let mut difference = hnf_basis(&diffs);
        difference.ncols = anchor.len();
        let mut span = hnf_basis(points);
        span.ncols = anchor.len();
        Self {
            difference,
            span,
            anchor,
        }
    }

    /// Dimension of the affine hull of the generating points.
    pub fn dim(&self) -> usize {
        self.difference.rank()
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.span.contains(v)
    }

    pub fn contains_difference(&self, v: &[i64]) -> bool {
        self.difference.contains(v)
    }
}
