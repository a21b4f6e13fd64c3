use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::cubes::{CubeIndex, IndexBox};
use crate::error::{invalid, Result};

/// Partition of `B_n = {1..n}^d` into `m^d` blocks of side at most `l`,
/// where `n = (m - 1) l + r` with `1 ≤ r ≤ l`.
///
/// Block `i ∈ {1..m}^d` covers `D_i = {t : (i_j - 1) l + 1 ≤ t_j ≤ min(i_j l, n)}`.
/// The `(m - 1)^d` blocks with all `i_j < m` have side `l`; blocks touching the
/// last layer have side `r` along those axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockDecomposition {
    pub n: usize,
    pub l: usize,
    pub m: usize,
    pub r: usize,
    pub d: usize,
}

pub fn block_decompose(n: usize, l: usize, d: usize) -> Result<BlockDecomposition> {
    if d == 0 {
        return invalid("block decomposition needs d ≥ 1");
    }
    if l == 0 || l > n {
        return invalid(format!("block length l = {l} must satisfy 1 ≤ l ≤ n = {n}"));
    }
    let m = n.div_ceil(l);
    let r = n - (m - 1) * l;
    Ok(BlockDecomposition { n, l, m, r, d })
}

impl BlockDecomposition {
    /// Block index (1-based per axis) containing `t ∈ {1..n}^d`.
    pub fn block_of(&self, t: &[i64]) -> Option<Vec<usize>> {
        if t.len() != self.d || t.iter().any(|&v| v < 1 || v as usize > self.n) {
            return None;
        }
        Some(t.iter().map(|&v| ((v as usize - 1) / self.l + 1).min(self.m)).collect())
    }

    /// The index set `D_i` of block `i`.
    pub fn block(&self, i: &[usize]) -> IndexBox {
        let lo = i.iter().map(|&k| ((k - 1) * self.l + 1) as i64).collect();
        let hi = i.iter().map(|&k| (k * self.l).min(self.n) as i64).collect();
        IndexBox::new(lo, hi)
    }

    /// All block indices in lexicographic order.
    pub fn block_indices(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        IndexBox::cube(self.d, 1, self.m as i64).into_indices().map(|v| v.into_iter().map(|k| k as usize).collect())
    }

    /// Number of blocks whose every side is `l`.
    pub fn main_block_count(&self) -> usize {
        let full = if self.r == self.l { self.m } else { self.m - 1 };
        full.pow(self.d as u32)
    }
}

/// Per-block sums `xi_i = Σ_{t ∈ D_i} Y_t`, their total `S_n` and `W_n = S_n / sigma_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockSums {
    pub xi: BTreeMap<Vec<usize>, f64>,
    pub s_n: f64,
    pub w_n: f64,
}

/// Groups cube variables `Y_t`, `t ∈ {1..n}^d`, into block sums.
pub fn block_sums(dec: &BlockDecomposition, y: &BTreeMap<CubeIndex, f64>, sigma_n: f64) -> Result<BlockSums> {
    if !(sigma_n > 0.0) {
        return invalid(format!("sigma_n must be positive, got {sigma_n}"));
    }
    let expected = dec.n.pow(dec.d as u32);
    if y.len() != expected {
        return invalid(format!("expected {expected} cube variables on {{1..{}}}^{}, got {}", dec.n, dec.d, y.len()));
    }
    let mut xi: BTreeMap<Vec<usize>, f64> = dec.block_indices().map(|i| (i, 0.0)).collect();
    for (t, v) in y {
        let Some(i) = dec.block_of(t) else {
            return invalid(format!("cube index {t:?} outside {{1..{}}}^{}", dec.n, dec.d));
        };
        *xi.get_mut(&i).expect("block index in range") += v;
    }
    let s_n: f64 = xi.values().sum();
    Ok(BlockSums { xi, s_n, w_n: s_n / sigma_n })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decomposition_examples() {
        let a = block_decompose(7, 3, 1).unwrap();
        assert_eq!((a.m, a.r), (3, 1));
        let b = block_decompose(6, 3, 1).unwrap();
        assert_eq!((b.m, b.r), (2, 3));
        assert_eq!(b.main_block_count(), 2);
        let c = block_decompose(9, 9, 2).unwrap();
        assert_eq!((c.m, c.r), (1, 9));
        assert_eq!(c.block(&[1, 1]).len(), 81);
        assert!(block_decompose(5, 0, 1).is_err());
        assert!(block_decompose(5, 6, 1).is_err());
    }

    #[test]
    fn blocks_partition_exhaustively() {
        for d in 1..=3usize {
            for n in 1..=12usize {
                for l in 1..=n {
                    let dec = block_decompose(n, l, d).unwrap();
                    assert_eq!(n, (dec.m - 1) * l + dec.r);
                    assert!(1 <= dec.r && dec.r <= l);
                    let mut hits: BTreeMap<CubeIndex, usize> = BTreeMap::new();
                    for i in dec.block_indices() {
                        for t in dec.block(&i).iter() {
                            *hits.entry(t.clone()).or_default() += 1;
                            assert_eq!(dec.block_of(&t).unwrap(), i);
                        }
                    }
                    assert_eq!(hits.len(), n.pow(d as u32));
                    assert!(hits.values().all(|&c| c == 1));
                }
            }
        }
    }

    #[test]
    fn constant_variables() {
        let dec = block_decompose(5, 2, 2).unwrap();
        let y: BTreeMap<CubeIndex, f64> = IndexBox::cube(2, 1, 5).iter().map(|t| (t, 1.5)).collect();
        let s = block_sums(&dec, &y, 2.0).unwrap();
        for (i, v) in &s.xi {
            assert_eq!(*v, 1.5 * dec.block(i).len() as f64);
        }
        assert_eq!(s.s_n, 1.5 * 25.0);
        assert_eq!(s.w_n, 1.5 * 25.0 / 2.0);
        assert!(block_sums(&dec, &y, 0.0).is_err());
    }
}
