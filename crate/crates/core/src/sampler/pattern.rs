use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// The cube `[0, side]^d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub d: usize,
    pub side: f64,
}

impl Window {
    pub fn new(d: usize, side: f64) -> Result<Self> {
        if d == 0 {
            return invalid("window dimension must be ≥ 1");
        }
        if !(side > 0.0 && side.is_finite()) {
            return invalid(format!("window side must be positive, got {side}"));
        }
        Ok(Self { d, side })
    }

    pub fn volume(&self) -> f64 {
        self.side.powi(self.d as i32)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.d && x.iter().all(|&v| (0.0..=self.side).contains(&v))
    }
}

/// A finite, simple point configuration inside a [`Window`].
///
/// Coordinates are stored flat, `d` per point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointPattern {
    window: Window,
    coords: Vec<f64>,
}

impl PointPattern {
    /// Validates containment and pairwise distinctness.
    pub fn new(window: Window, points: Vec<Vec<f64>>) -> Result<Self> {
        let mut coords = Vec::with_capacity(points.len() * window.d);
        for p in &points {
            if !window.contains(p) {
                return invalid(format!("point {p:?} outside window [0, {}]^{}", window.side, window.d));
            }
            coords.extend_from_slice(p);
        }
        Self::from_flat(window, coords)
    }

    pub fn from_flat(window: Window, coords: Vec<f64>) -> Result<Self> {
        if coords.len() % window.d != 0 {
            return invalid("flat coordinate buffer length is not a multiple of d");
        }
        if let Some(bad) = coords.chunks(window.d).find(|p| !window.contains(p)) {
            return invalid(format!("point {bad:?} outside window [0, {}]^{}", window.side, window.d));
        }
        let pattern = Self { window, coords };
        if !pattern.is_simple() {
            return invalid("pattern contains duplicate points");
        }
        Ok(pattern)
    }

    pub fn empty(window: Window) -> Self {
        Self { window, coords: Vec::new() }
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn dimension(&self) -> usize {
        self.window.d
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.window.d
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        let d = self.window.d;
        &self.coords[i * d..(i + 1) * d]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.coords.chunks(self.window.d)
    }

    /// Number of points in the half-open box `[lo, hi)`.
    pub fn count_in(&self, lo: &[f64], hi: &[f64]) -> usize {
        self.iter()
            .filter(|p| p.iter().zip(lo).zip(hi).all(|((v, a), b)| *a <= *v && *v < *b))
            .count()
    }

    /// True when no two points coincide exactly.
    pub fn is_simple(&self) -> bool {
        let mut pts: Vec<&[f64]> = self.iter().collect();
        pts.sort_by(|a, b| {
            a.iter().zip(b.iter()).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
        });
        pts.windows(2).all(|w| w[0] != w[1])
    }
}
