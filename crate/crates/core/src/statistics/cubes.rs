use std::collections::{BTreeMap, BTreeSet, HashSet};

use super::local::{for_each_local_subset, LocalStatistic};
use crate::error::{Error, Result};
use crate::sampler::PointPattern;

/// Integer index of a unit cube.
pub type CubeIndex = Vec<i64>;

/// Covering of `R^d` by half-open unit cubes `C_i = Π_j [i_j - 1/2, i_j + 1/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CubeCovering {
    pub d: usize,
}

impl CubeCovering {
    pub fn new(d: usize) -> Self {
        Self { d }
    }

    /// Index of the unique cube containing `x`.
    pub fn cube_of(&self, x: &[f64]) -> CubeIndex {
        x.iter().map(|v| (v + 0.5).floor() as i64).collect()
    }
}

/// Membership test for a family of cubes.
pub trait CubeSet {
    fn contains_cube(&self, idx: &[i64]) -> bool;
}

impl CubeSet for HashSet<CubeIndex> {
    fn contains_cube(&self, idx: &[i64]) -> bool {
        self.contains(idx)
    }
}

impl CubeSet for BTreeSet<CubeIndex> {
    fn contains_cube(&self, idx: &[i64]) -> bool {
        self.contains(idx)
    }
}

/// The integer box `{i : lo ≤ i ≤ hi}` (componentwise, inclusive).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexBox {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl IndexBox {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Self {
        assert_eq!(lo.len(), hi.len());
        Self { lo, hi }
    }

    pub fn cube(d: usize, lo: i64, hi: i64) -> Self {
        Self { lo: vec![lo; d], hi: vec![hi; d] }
    }

    pub fn empty(d: usize) -> Self {
        Self::cube(d, 1, 0)
    }

    pub fn dimension(&self) -> usize {
        self.lo.len()
    }

    pub fn len(&self) -> usize {
        self.lo.iter().zip(&self.hi).map(|(a, b)| (b - a + 1).max(0) as usize).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Indices in lexicographic order, first coordinate slowest.
    pub fn iter(&self) -> impl Iterator<Item = CubeIndex> + '_ {
        self.clone().into_indices()
    }

    pub fn into_indices(self) -> impl Iterator<Item = CubeIndex> {
        let total = self.len();
        let d = self.dimension();
        (0..total).map(move |mut flat| {
            let mut idx = vec![0i64; d];
            for j in (0..d).rev() {
                let span = (self.hi[j] - self.lo[j] + 1) as usize;
                idx[j] = self.lo[j] + (flat % span) as i64;
                flat /= span;
            }
            idx
        })
    }
}

impl CubeSet for IndexBox {
    fn contains_cube(&self, idx: &[i64]) -> bool {
        idx.iter().zip(&self.lo).zip(&self.hi).all(|((v, a), b)| a <= v && v <= b)
    }
}

/// `I_n = {i : C_i ⊕ tau ⊂ [0, n]^d}`, the cubes whose tau-neighbourhood
/// stays inside the window.
pub fn interior_index_set(n: f64, tau: f64, d: usize) -> Result<IndexBox> {
    if !(tau >= 0.0) || d == 0 {
        return Err(Error::InvalidArgument("interior set needs tau ≥ 0 and d ≥ 1".into()));
    }
    let reach = 0.5 + tau;
    if n <= 2.0 * reach {
        return Err(Error::EmptyInterior(format!("window side {n} ≤ 2 (tau + 1/2) = {}", 2.0 * reach)));
    }
    let lo = reach.ceil() as i64;
    let hi = (n - reach).floor() as i64;
    if lo > hi {
        return Err(Error::EmptyInterior(format!("no unit cube fits with tau = {tau} in side {n}")));
    }
    Ok(IndexBox::cube(d, lo, hi))
}

/// Barycenter (coordinate mean) of a point subset.
pub fn barycenter(points: &[&[f64]]) -> Vec<f64> {
    let d = points[0].len();
    let k = points.len() as f64;
    (0..d).map(|j| points.iter().map(|p| p[j]).sum::<f64>() / k).collect()
}

/// `f_{C_i}(X) = Σ_{S ⊂ X, S^0 ∈ C_i} g(S)` for every cube that receives a
/// nonzero number of subsets.
pub fn cube_contributions(stat: &LocalStatistic, pattern: &PointPattern) -> BTreeMap<CubeIndex, f64> {
    let cover = CubeCovering::new(pattern.dimension());
    let pts: Vec<&[f64]> = pattern.iter().collect();
    let mut out: BTreeMap<CubeIndex, f64> = BTreeMap::new();
    let mut buf: Vec<&[f64]> = Vec::new();
    for_each_local_subset(&pts, stat.tau(), stat.max_subset_size(), |idx| {
        buf.clear();
        buf.extend(idx.iter().map(|&i| pts[i]));
        let v = stat.eval_subset(&buf);
        if v != 0.0 {
            *out.entry(cover.cube_of(&barycenter(&buf))).or_insert(0.0) += v;
        }
    });
    out
}

/// `Σ_S g(S) 1{S^0 ∈ ∪_{i ∈ interior} C_i}`.
pub fn restricted_functional<C: CubeSet + ?Sized>(stat: &LocalStatistic, pattern: &PointPattern, interior: &C) -> f64 {
    let cover = CubeCovering::new(pattern.dimension());
    let pts: Vec<&[f64]> = pattern.iter().collect();
    let mut total = 0.0;
    let mut buf: Vec<&[f64]> = Vec::new();
    for_each_local_subset(&pts, stat.tau(), stat.max_subset_size(), |idx| {
        buf.clear();
        buf.extend(idx.iter().map(|&i| pts[i]));
        if interior.contains_cube(&cover.cube_of(&barycenter(&buf))) {
            total += stat.eval_subset(&buf);
        }
    });
    total
}

/// `Y_i = f_{C_i}(X) - mean_per_cube` for each requested index.
pub fn cube_variables<I>(
    stat: &LocalStatistic,
    pattern: &PointPattern,
    indices: I,
    mean_per_cube: f64,
) -> BTreeMap<CubeIndex, f64>
where
    I: IntoIterator<Item = CubeIndex>,
{
    let contrib = cube_contributions(stat, pattern);
    indices
        .into_iter()
        .map(|i| {
            let f = contrib.get(&i).copied().unwrap_or(0.0);
            (i, f - mean_per_cube)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::Window;
    use crate::statistics::{eval_functional, Region};

    #[test]
    fn interior_one_dimensional_examples() {
        let b = interior_index_set(10.0, 1.0, 1).unwrap();
        assert_eq!((b.lo[0], b.hi[0], b.len()), (2, 8, 7));
        let b = interior_index_set(10.0, 1e-9, 1).unwrap();
        assert_eq!((b.lo[0], b.hi[0]), (1, 9));
        let b3 = interior_index_set(10.0, 1.0, 3).unwrap();
        assert_eq!(b3.len(), 7usize.pow(3));
        assert!(matches!(interior_index_set(2.0, 1.0, 1), Err(Error::EmptyInterior(_))));
        assert!(matches!(interior_index_set(3.0, 0.7, 1), Err(Error::EmptyInterior(_))));
    }

    #[test]
    fn interior_membership_is_containment() {
        let (n, tau) = (9.0, 0.8);
        let b = interior_index_set(n, tau, 1).unwrap();
        for i in -3..15i64 {
            let fits = i as f64 - 0.5 - tau >= 0.0 && i as f64 + 0.5 + tau <= n;
            assert_eq!(b.contains_cube(&[i]), fits, "i={i}");
        }
    }

    #[test]
    fn half_open_cube_assignment() {
        let c = CubeCovering::new(2);
        assert_eq!(c.cube_of(&[0.5, 1.49]), vec![1, 1]);
        assert_eq!(c.cube_of(&[0.4999, 0.0]), vec![0, 0]);
    }

    #[test]
    fn full_cover_and_empty_interior() {
        let w = Window::new(1, 6.0).unwrap();
        let p = PointPattern::new(w, vec![vec![0.1], vec![0.3], vec![2.2], vec![5.9], vec![6.0]]).unwrap();
        let stat = LocalStatistic::pair_indicator(1, 0.5, 0.5).unwrap();
        let full = IndexBox::cube(1, 0, 6);
        assert_eq!(restricted_functional(&stat, &p, &full), eval_functional(&stat, &p, &Region::All));
        assert_eq!(restricted_functional(&stat, &p, &IndexBox::empty(1)), 0.0);
    }

    #[test]
    fn empty_pattern_cube_variables() {
        let w = Window::new(2, 4.0).unwrap();
        let p = PointPattern::empty(w);
        let stat = LocalStatistic::count(2, 0.25).unwrap();
        let y = cube_variables(&stat, &p, IndexBox::cube(2, 1, 3).iter(), 0.7);
        assert_eq!(y.len(), 9);
        assert!(y.values().all(|&v| v == -0.7));
    }
}
