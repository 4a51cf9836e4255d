//! Fraction-free integer linear algebra over `i128`.
//!
//! Rows are kept primitive (divided by their content) after every
//! elimination step, which keeps entries small for the 0/1 matrices this
//! crate works with.

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    gcd(a as i128, b as i128) as i64
}

/// Greatest common divisor of all entries (0 for the zero vector).
pub fn content(v: &[i128]) -> i128 {
    v.iter().fold(0, |g, &x| gcd(g, x))
}

pub fn content_i64(v: &[i64]) -> i64 {
    v.iter().fold(0, |g, &x| gcd_i64(g, x))
}

pub fn make_primitive(v: &mut [i128]) {
    let g = content(v);
    if g > 1 {
        v.iter_mut().for_each(|x| *x /= g);
    }
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot128(a: &[i128], b: &[i128]) -> i128 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn widen(v: &[i64]) -> Vec<i128> {
    v.iter().map(|&x| x as i128).collect()
}

pub fn narrow(v: &[i128]) -> Vec<i64> {
    v.iter()
        .map(|&x| i64::try_from(x).expect("entry exceeds i64 range"))
        .collect()
}

/// Reduced row echelon form up to row scaling: every pivot column is zero
/// outside its pivot row. Returns the nonzero rows and their pivot columns.
pub fn reduced_echelon(rows: &[Vec<i128>]) -> (Vec<Vec<i128>>, Vec<usize>) {
    let mut m: Vec<Vec<i128>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len())
            .filter(|&i| m[i][c] != 0)
            .min_by_key(|&i| m[i][c].abs())
        else {
            continue;
        };
        m.swap(r, p);
        for i in 0..m.len() {
            if i == r || m[i][c] == 0 {
                continue;
            }
            let (a, b) = (m[r][c], m[i][c]);
            let g = gcd(a, b);
            let (fa, fb) = (a / g, b / g);
            let pivot_row = m[r].clone();
            for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                *x = fa * *x - fb * y;
            }
            make_primitive(&mut m[i]);
        }
        if m[r][c] < 0 {
            m[r].iter_mut().for_each(|x| *x = -*x);
        }
        make_primitive(&mut m[r]);
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<i128>]) -> usize {
    reduced_echelon(rows).1.len()
}

pub fn rank_i64(rows: &[Vec<i64>]) -> usize {
    let wide: Vec<Vec<i128>> = rows.iter().map(|r| widen(r)).collect();
    rank(&wide)
}

/// Integer basis of the right null space `{z : rows * z = 0}`.
pub fn nullspace(rows: &[Vec<i128>], ncols: usize) -> Vec<Vec<i128>> {
    let (ech, pivots) = reduced_echelon(rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            // z_f = L, z_{pivot_i} = -L * ech[i][f] / ech[i][pivot_i]
            let l = ech
                .iter()
                .zip(&pivots)
                .fold(1i128, |acc, (row, &p)| acc / gcd(acc, row[p]) * row[p]);
            let mut z = vec![0i128; ncols];
            z[f] = l;
            for (row, &p) in ech.iter().zip(&pivots) {
                z[p] = -l / row[p] * row[f];
            }
            make_primitive(&mut z);
            z
        })
        .collect()
}

/// Greedy maximal set of linearly independent columns, scanning from the last
/// column towards the first. Returned in increasing order.
pub fn independent_columns_from_end(rows: &[Vec<i128>], ncols: usize) -> Vec<usize> {
    let reversed: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().rev().copied().collect())
        .collect();
    let (_, piv) = reduced_echelon(&reversed);
    let mut cols: Vec<usize> = piv.into_iter().map(|c| ncols - 1 - c).collect();
    cols.sort_unstable();
    cols
}

/// Greedy maximal set of linearly independent rows, in input order.
pub fn independent_rows(rows: &[Vec<i128>]) -> Vec<usize> {
    let mut basis: Vec<Vec<i128>> = Vec::new();
    let mut chosen = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        basis.push(row.clone());
        if rank(&basis) == basis.len() {
            chosen.push(i);
        } else {
            basis.pop();
        }
    }
    chosen
}

/// Dimension of the affine hull of a nonempty point set.
pub fn affine_dim(points: &[Vec<i64>]) -> usize {
    let Some(first) = points.first() else {
        return 0;
    };
    let diffs: Vec<Vec<i128>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(first).map(|(a, b)| (a - b) as i128).collect())
        .collect();
    rank(&diffs)
}
