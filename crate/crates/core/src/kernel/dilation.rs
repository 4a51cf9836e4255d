//! Lattice points of dilations, enumerated block by block.
//!
//! Points of `kP` have non-negative coordinates and every edge block sums to
//! `k`, so the search runs over one composition of `k` per block. A partial
//! assignment is cut as soon as some facet can no longer reach its bound, using
//! the best value each remaining block could still contribute.

use rayon::prelude::*;

use super::facet::Facet;

/// All compositions of `k` into `parts` non-negative parts, in lexicographic
/// order with the largest first entry first.
pub fn compositions(k: i64, parts: usize) -> Vec<Vec<i64>> {
    fn rec(k: i64, parts: usize, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if parts == 1 {
            prefix.push(k);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in (0..=k).rev() {
            prefix.push(first);
            rec(k - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts > 0 {
        rec(k, parts, &mut Vec::with_capacity(parts), &mut out);
    }
    out
}

/// Block layout of an ambient space: `blocks` consecutive groups of `block_len`
/// coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockLayout {
    pub blocks: usize,
    pub block_len: usize,
}

impl BlockLayout {
    pub fn ambient(&self) -> usize {
        self.blocks * self.block_len
    }
}

/// Points `x >= 0` with every block summing to `k` and `f(x) >= k * rhs` for
/// each facet (strictly when `strict`), that also pass `accept`. Output is
/// sorted in descending lexicographic order of the coordinate vector.
pub fn block_points<F>(
    layout: BlockLayout,
    k: i64,
    facets: &[Facet],
    strict: bool,
    accept: F,
) -> Vec<Vec<i64>>
where
    F: Fn(&[i64]) -> bool + Sync,
{
    let BlockLayout { blocks, block_len } = layout;
    if blocks == 0 {
        return Vec::new();
    }
    let comps = compositions(k, block_len);
    let thresholds: Vec<i64> = facets
        .iter()
        .map(|f| f.rhs * k + i64::from(strict))
        .collect();
    // per facet, per block: best value a composition of k can add
    let best: Vec<Vec<i64>> = facets
        .iter()
        .map(|f| {
            (0..blocks)
                .map(|b| {
                    let c = &f.functional[b * block_len..(b + 1) * block_len];
                    k * c.iter().copied().max().unwrap_or(0)
                })
                .collect()
        })
        .collect();
    let suffix: Vec<Vec<i64>> = best
        .iter()
        .map(|row| {
            let mut s = vec![0; blocks + 1];
            for b in (0..blocks).rev() {
                s[b] = s[b + 1] + row[b];
            }
            s
        })
        .collect();

    let search = Search {
        layout,
        comps: &comps,
        facets,
        thresholds: &thresholds,
        suffix: &suffix,
        accept: &accept,
    };
    let chunks: Vec<Vec<Vec<i64>>> = comps
        .par_iter()
        .map(|first| {
            let mut x = vec![0; layout.ambient()];
            x[..block_len].copy_from_slice(first);
            let mut partial = vec![0i64; facets.len()];
            search.add_block(&mut partial, 0, first, 1);
            let mut out = Vec::new();
            if search.feasible(&partial, 1) {
                search.descend(&mut x, &mut partial, 1, &mut out);
            }
            out
        })
        .collect();
    chunks.into_iter().flatten().collect()
}

struct Search<'a, F> {
    layout: BlockLayout,
    comps: &'a [Vec<i64>],
    facets: &'a [Facet],
    thresholds: &'a [i64],
    suffix: &'a [Vec<i64>],
    accept: &'a F,
}

impl<F: Fn(&[i64]) -> bool> Search<'_, F> {
    fn add_block(&self, partial: &mut [i64], b: usize, comp: &[i64], sign: i64) {
        let len = self.layout.block_len;
        for (p, f) in partial.iter_mut().zip(self.facets) {
            let c = &f.functional[b * len..(b + 1) * len];
            *p += sign * c.iter().zip(comp).map(|(a, x)| a * x).sum::<i64>();
        }
    }

    /// Whether every facet can still be satisfied once blocks `next..` are set.
    fn feasible(&self, partial: &[i64], next: usize) -> bool {
        partial
            .iter()
            .zip(self.thresholds)
            .zip(self.suffix)
            .all(|((p, t), s)| p + s[next] >= *t)
    }

    fn descend(&self, x: &mut [i64], partial: &mut [i64], b: usize, out: &mut Vec<Vec<i64>>) {
        let len = self.layout.block_len;
        if b == self.layout.blocks {
            if (self.accept)(x) {
                out.push(x.to_vec());
            }
            return;
        }
        for comp in self.comps {
            x[b * len..(b + 1) * len].copy_from_slice(comp);
            self.add_block(partial, b, comp, 1);
            if self.feasible(partial, b + 1) {
                self.descend(x, partial, b + 1, out);
            }
            self.add_block(partial, b, comp, -1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_counts() {
        assert_eq!(compositions(3, 3).len(), 10);
        assert_eq!(compositions(0, 4), vec![vec![0, 0, 0, 0]]);
        assert_eq!(compositions(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn unconstrained_product_of_simplices() {
        let layout = BlockLayout {
            blocks: 2,
            block_len: 3,
        };
        let pts = block_points(layout, 2, &[], false, |_| true);
        assert_eq!(pts.len(), 36);
        assert!(pts.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn facets_prune_and_strictness() {
        // single block of length 2 (a segment) with facets x0 >= 0, x1 >= 0
        let layout = BlockLayout {
            blocks: 1,
            block_len: 2,
        };
        let facets = vec![
            Facet {
                functional: vec![1, 0],
                rhs: 0,
                normalizer: 1,
            },
            Facet {
                functional: vec![0, 1],
                rhs: 0,
                normalizer: 1,
            },
        ];
        assert_eq!(block_points(layout, 3, &facets, false, |_| true).len(), 4);
        assert_eq!(
            block_points(layout, 3, &facets, true, |_| true),
            vec![vec![2, 1], vec![1, 2]]
        );
        assert!(block_points(layout, 1, &facets, true, |_| true).is_empty());
    }
}
