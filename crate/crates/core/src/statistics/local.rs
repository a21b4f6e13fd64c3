use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::sampler::PointPattern;

/// A user-supplied set function `g(S)`. Range and size restrictions are
/// applied by [`LocalStatistic`], so implementations only see admissible subsets.
pub trait SetFunction: Send + Sync + fmt::Debug {
    fn eval(&self, points: &[&[f64]]) -> f64;

    /// `Some(p)` when `g` vanishes on every subset whose size is not `p`.
    fn fixed_subset_size(&self) -> Option<usize> {
        None
    }
}

/// Built-in set functions, plus a hook for custom ones.
#[derive(Debug, Clone)]
pub enum StatKind {
    /// `g(S) = 1` iff `|S| = 1`: the functional counts points.
    Count,
    /// `g({x, y}) = 1` iff `|x - y|_2 ≤ r`.
    PairIndicator { r: f64 },
    /// `g({x, y}) = amplitude · exp(-|x - y|_2² / scale²)`.
    PairWeight { scale: f64, amplitude: f64 },
    Custom(Arc<dyn SetFunction>),
}

/// Config-facing tag for the built-in kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StatKindTag {
    Count,
    PairIndicator,
    PairWeight,
}

/// A bounded set function of finite range: `g(S) = 0` whenever
/// `diam_∞(S) > tau` or `|S| > p_max`, and `|g| ≤ g_bound`.
#[derive(Debug, Clone)]
pub struct LocalStatistic {
    d: usize,
    tau: f64,
    p_max: usize,
    g_bound: f64,
    kind: StatKind,
}

impl LocalStatistic {
    pub fn new(d: usize, tau: f64, p_max: usize, g_bound: f64, kind: StatKind) -> Result<Self> {
        if d == 0 {
            return invalid("statistic dimension must be ≥ 1");
        }
        if !(tau > 0.0 && tau.is_finite()) {
            return invalid(format!("interaction range tau must be positive, got {tau}"));
        }
        if p_max == 0 {
            return invalid("p_max must be ≥ 1");
        }
        if !(g_bound > 0.0 && g_bound.is_finite()) {
            return invalid(format!("g_bound must be positive, got {g_bound}"));
        }
        match &kind {
            StatKind::Count => {
                if g_bound < 1.0 {
                    return invalid("count statistic needs g_bound ≥ 1");
                }
            }
            StatKind::PairIndicator { r } => {
                if !(*r > 0.0 && *r <= tau) {
                    return invalid(format!("pair indicator radius must lie in (0, tau], got r = {r}, tau = {tau}"));
                }
                if g_bound < 1.0 {
                    return invalid("pair indicator needs g_bound ≥ 1");
                }
            }
            StatKind::PairWeight { scale, amplitude } => {
                if !(*scale > 0.0) {
                    return invalid(format!("pair weight scale must be positive, got {scale}"));
                }
                if amplitude.abs() > g_bound {
                    return invalid(format!("|amplitude| = {} exceeds g_bound = {g_bound}", amplitude.abs()));
                }
            }
            StatKind::Custom(_) => {}
        }
        if matches!(kind, StatKind::PairIndicator { .. } | StatKind::PairWeight { .. }) && p_max < 2 {
            return invalid("pair statistics need p_max ≥ 2");
        }
        Ok(Self { d, tau, p_max, g_bound, kind })
    }

    /// Point count, `g(S) = 1{|S| = 1}`.
    pub fn count(d: usize, tau: f64) -> Result<Self> {
        Self::new(d, tau, 2, 1.0, StatKind::Count)
    }

    pub fn pair_indicator(d: usize, tau: f64, r: f64) -> Result<Self> {
        Self::new(d, tau, 2, 1.0, StatKind::PairIndicator { r })
    }

    pub fn from_tag(d: usize, tag: StatKindTag, tau: f64, r: f64, p_max: usize, g_bound: f64) -> Result<Self> {
        let kind = match tag {
            StatKindTag::Count => StatKind::Count,
            StatKindTag::PairIndicator => StatKind::PairIndicator { r },
            StatKindTag::PairWeight => StatKind::PairWeight { scale: r, amplitude: 1.0 },
        };
        Self::new(d, tau, p_max, g_bound, kind)
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn p_max(&self) -> usize {
        self.p_max
    }

    pub fn g_bound(&self) -> f64 {
        self.g_bound
    }

    pub fn kind(&self) -> &StatKind {
        &self.kind
    }

    /// Subset size on which `g` is supported, if it is a single size.
    pub fn fixed_subset_size(&self) -> Option<usize> {
        match &self.kind {
            StatKind::Count => Some(1),
            StatKind::PairIndicator { .. } | StatKind::PairWeight { .. } => Some(2),
            StatKind::Custom(f) => f.fixed_subset_size(),
        }
    }

    /// Largest subset size that can contribute.
    pub fn max_subset_size(&self) -> usize {
        self.fixed_subset_size().map_or(self.p_max, |p| p.min(self.p_max))
    }

    /// `g(S)` with the range, size and boundedness contract enforced.
    ///
    /// # Panics
    /// If a custom set function returns a value exceeding `g_bound`.
    pub fn eval_subset(&self, points: &[&[f64]]) -> f64 {
        if points.is_empty() || points.len() > self.p_max || diameter_inf(points) > self.tau {
            return 0.0;
        }
        match &self.kind {
            StatKind::Count => (points.len() == 1) as u8 as f64,
            StatKind::PairIndicator { r } => {
                if points.len() == 2 && dist2_sq(points[0], points[1]) <= r * r {
                    1.0
                } else {
                    0.0
                }
            }
            StatKind::PairWeight { scale, amplitude } => {
                if points.len() == 2 {
                    amplitude * (-dist2_sq(points[0], points[1]) / (scale * scale)).exp()
                } else {
                    0.0
                }
            }
            StatKind::Custom(f) => {
                let v = f.eval(points);
                assert!(v.abs() <= self.g_bound, "custom set function returned {v}, exceeding g_bound {}", self.g_bound);
                v
            }
        }
    }
}

pub(crate) fn dist2_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub(crate) fn dist_inf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// `sup_{x, y ∈ S} |x - y|_∞`.
pub fn diameter_inf(points: &[&[f64]]) -> f64 {
    let mut diam: f64 = 0.0;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            diam = diam.max(dist_inf(a, b));
        }
    }
    diam
}

/// Calls `visit` on every subset (as sorted index lists) of size at most
/// `max_size` whose ∞-diameter is at most `tau`.
///
/// Candidate pairs come from a cell grid of side `tau`: points within
/// ∞-distance `tau` of each other lie in the same or adjacent cells.
pub fn for_each_local_subset<F>(points: &[&[f64]], tau: f64, max_size: usize, mut visit: F)
where
    F: FnMut(&[usize]),
{
    if points.is_empty() || max_size == 0 {
        return;
    }
    let d = points[0].len();
    let cell_of = |p: &[f64]| -> Vec<i64> { p.iter().map(|v| (v / tau).floor() as i64).collect() };
    let mut grid: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    for (i, p) in points.iter().enumerate() {
        grid.entry(cell_of(p)).or_default().push(i);
    }

    let offsets: Vec<Vec<i64>> = (0..3usize.pow(d as u32))
        .map(|mut k| {
            (0..d)
                .map(|_| {
                    let o = (k % 3) as i64 - 1;
                    k /= 3;
                    o
                })
                .collect()
        })
        .collect();

    let mut subset = Vec::with_capacity(max_size);
    let mut key = vec![0i64; d];
    for (i, p) in points.iter().enumerate() {
        subset.clear();
        subset.push(i);
        visit(&subset);
        if max_size < 2 {
            continue;
        }
        let base = cell_of(p);
        let mut nbrs: Vec<usize> = Vec::new();
        for off in &offsets {
            for j in 0..d {
                key[j] = base[j] + off[j];
            }
            if let Some(cell) = grid.get(&key) {
                nbrs.extend(cell.iter().copied().filter(|&j| j > i && dist_inf(p, points[j]) <= tau));
            }
        }
        nbrs.sort_unstable();
        extend_cliques(points, tau, max_size, &mut subset, &nbrs, &mut visit);
    }
}

fn extend_cliques<F: FnMut(&[usize])>(
    points: &[&[f64]],
    tau: f64,
    max_size: usize,
    subset: &mut Vec<usize>,
    candidates: &[usize],
    visit: &mut F,
) {
    for (k, &j) in candidates.iter().enumerate() {
        subset.push(j);
        visit(subset);
        if subset.len() < max_size {
            let next: Vec<usize> = candidates[k + 1..]
                .iter()
                .copied()
                .filter(|&c| dist_inf(points[j], points[c]) <= tau)
                .collect();
            if !next.is_empty() {
                extend_cliques(points, tau, max_size, subset, &next, visit);
            }
        }
        subset.pop();
    }
}

/// Region over which a functional is evaluated.
#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    All,
    /// Half-open box `[lo, hi)`.
    Box { lo: Vec<f64>, hi: Vec<f64> },
}

impl Region {
    fn contains(&self, x: &[f64]) -> bool {
        match self {
            Region::All => true,
            Region::Box { lo, hi } => x.iter().zip(lo).zip(hi).all(|((v, a), b)| *a <= *v && *v < *b),
        }
    }
}

/// `f(pattern ∩ region) = Σ_{S ⊂ pattern ∩ region} g(S)`.
pub fn eval_functional(stat: &LocalStatistic, pattern: &PointPattern, region: &Region) -> f64 {
    let pts: Vec<&[f64]> = pattern.iter().filter(|p| region.contains(p)).collect();
    let mut total = 0.0;
    let mut buf: Vec<&[f64]> = Vec::with_capacity(stat.max_subset_size());
    for_each_local_subset(&pts, stat.tau(), stat.max_subset_size(), |idx| {
        buf.clear();
        buf.extend(idx.iter().map(|&i| pts[i]));
        total += stat.eval_subset(&buf);
    });
    total
}
