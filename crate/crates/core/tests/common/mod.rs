//! Independent reference computations used by the integration tests.
//!
//! Nothing here calls into the library's kernel: determinants use Bareiss
//! elimination, facets are found by scanning vertex subsets, and lattice
//! points of `kP` are formed as sums of `k` vertices.

#![allow(dead_code)]

use std::collections::BTreeSet;

/// Zero-sum labelings of an `m`-claw over `Z_{n_1} x ... x Z_{n_r}`, counted
/// with an odometer over all of `G^m`.
pub fn zero_sum_labelings(factors: &[u32], m: usize) -> Vec<Vec<Vec<u32>>> {
    let elements = elements(factors);
    let mut out = Vec::new();
    let mut idx = vec![0usize; m];
    loop {
        let labels: Vec<Vec<u32>> = idx.iter().map(|&i| elements[i].clone()).collect();
        let zero =
            (0..factors.len()).all(|c| labels.iter().map(|l| l[c]).sum::<u32>() % factors[c] == 0);
        if zero {
            out.push(labels);
        }
        let mut pos = m;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < elements.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Elements in lexicographic residue order.
pub fn elements(factors: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &n in factors {
        out = out
            .into_iter()
            .flat_map(|e: Vec<u32>| {
                (0..n).map(move |r| {
                    let mut e = e.clone();
                    e.push(r);
                    e
                })
            })
            .collect();
    }
    out
}

/// Automorphisms of a small abelian group as permutations of its elements
/// that preserve addition, found by trying every permutation.
pub fn automorphism_count(factors: &[u32]) -> usize {
    let els = elements(factors);
    let n = els.len();
    let add = |a: usize, b: usize| -> usize {
        let s: Vec<u32> = (0..factors.len())
            .map(|c| (els[a][c] + els[b][c]) % factors[c])
            .collect();
        els.iter().position(|e| *e == s).unwrap()
    };
    let table: Vec<Vec<usize>> = (0..n)
        .map(|a| (0..n).map(|b| add(a, b)).collect())
        .collect();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut count = 0;
    permute(&mut perm, 0, &mut |p| {
        if (0..n).all(|a| (0..n).all(|b| p[table[a][b]] == table[p[a]][p[b]])) {
            count += 1;
        }
    });
    count
}

fn permute(p: &mut Vec<usize>, i: usize, f: &mut impl FnMut(&[usize])) {
    if i == p.len() {
        f(p);
        return;
    }
    for j in i..p.len() {
        p.swap(i, j);
        permute(p, i + 1, f);
        p.swap(i, j);
    }
}

/// Determinant by Bareiss fraction-free elimination.
pub fn det(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Rank via Bareiss on a copy, pivoting over columns.
pub fn rank(rows: &[Vec<i128>]) -> usize {
    let mut a: Vec<Vec<i128>> = rows.to_vec();
    let (nr, nc) = (a.len(), a.first().map_or(0, Vec::len));
    let mut r = 0;
    let mut prev = 1i128;
    for c in 0..nc {
        let Some(p) = (r..nr).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..nr {
            for j in c + 1..nc {
                a[i][j] = (a[i][j] * a[r][c] - a[i][c] * a[r][j]) / prev;
            }
            a[i][c] = 0;
        }
        prev = a[r][c];
        r += 1;
        if r == nr {
            break;
        }
    }
    r
}

/// Coordinates on which the vertex differences have full rank, chosen
/// greedily from the front.
pub fn chart(vertices: &[Vec<i64>]) -> Vec<usize> {
    let diffs: Vec<Vec<i128>> = vertices
        .iter()
        .map(|v| {
            v.iter()
                .zip(&vertices[0])
                .map(|(a, b)| (a - b) as i128)
                .collect()
        })
        .collect();
    let full = rank(&diffs);
    let mut chosen: Vec<usize> = Vec::new();
    for c in 0..vertices[0].len() {
        let mut trial = chosen.clone();
        trial.push(c);
        let sub: Vec<Vec<i128>> = diffs
            .iter()
            .map(|d| trial.iter().map(|&i| d[i]).collect())
            .collect();
        if rank(&sub) == trial.len() {
            chosen = trial;
        }
        if chosen.len() == full {
            break;
        }
    }
    chosen
}

/// Facets of `conv(vertices)` as sets of touching vertex indices, found by
/// scanning every `d`-subset of vertices for a supporting hyperplane.
pub fn facet_vertex_sets(vertices: &[Vec<i64>]) -> BTreeSet<Vec<usize>> {
    let coords = chart(vertices);
    let d = coords.len();
    let ys: Vec<Vec<i128>> = vertices
        .iter()
        .map(|v| {
            std::iter::once(1)
                .chain(coords.iter().map(|&c| v[c] as i128))
                .collect()
        })
        .collect();
    let mut found = BTreeSet::new();
    let mut subset: Vec<usize> = (0..d).collect();
    let n = vertices.len();
    loop {
        // normal of the hyperplane through the subset, by cofactors
        let rows: Vec<&Vec<i128>> = subset.iter().map(|&i| &ys[i]).collect();
        let normal: Vec<i128> = (0..=d)
            .map(|skip| {
                let minor: Vec<Vec<i128>> = rows
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(j, _)| j != skip)
                            .map(|(_, &x)| x)
                            .collect()
                    })
                    .collect();
                let s = if skip % 2 == 0 { 1 } else { -1 };
                s * det(minor)
            })
            .collect();
        if normal.iter().any(|&x| x != 0) {
            let values: Vec<i128> = ys
                .iter()
                .map(|y| y.iter().zip(&normal).map(|(a, b)| a * b).sum())
                .collect();
            if values.iter().all(|&v| v >= 0) || values.iter().all(|&v| v <= 0) {
                found.insert((0..n).filter(|&i| values[i] == 0).collect());
            }
        }
        // next subset in lexicographic order
        let mut i = d;
        loop {
            if i == 0 {
                return found;
            }
            i -= 1;
            if subset[i] < n - d + i {
                subset[i] += 1;
                for j in i + 1..d {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Distinct sums of `k` vertices.
pub fn vertex_sums(vertices: &[Vec<i64>], k: usize) -> BTreeSet<Vec<i64>> {
    let mut level: BTreeSet<Vec<i64>> = BTreeSet::from([vec![0; vertices[0].len()]]);
    for _ in 0..k {
        level = level
            .iter()
            .flat_map(|s| {
                vertices
                    .iter()
                    .map(move |v| s.iter().zip(v).map(|(a, b)| a + b).collect())
            })
            .collect();
    }
    level
}
