//! Upper convex envelopes (concavification) of rate expressions.
//!
//! Two flavours are provided. [`uce_1d`] is the least concave majorant of a
//! sampled function, via the upper convex hull. [`uce_at_power`] evaluates
//! the time-sharing envelope of a two-power rate function: transmit a
//! fraction λ of the time at operating powers (p1, p2) and stay silent
//! otherwise, subject to λ·p1 ≤ P1 and λ·p2 ≤ P2.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeResult {
    pub grid: Vec<f64>,
    pub raw: Vec<f64>,
    pub env: Vec<f64>,
    /// Indices where the envelope touches the raw values.
    pub hull_vertices: Vec<usize>,
}

impl EnvelopeResult {
    /// Piecewise-linear evaluation of the envelope at `x` inside the grid.
    pub fn eval(&self, x: f64) -> Option<f64> {
        let g = &self.grid;
        if !(x >= g[0] && x <= g[g.len() - 1]) {
            return None;
        }
        let i = g.partition_point(|&v| v <= x).min(g.len() - 1).max(1);
        let t = (x - g[i - 1]) / (g[i] - g[i - 1]);
        Some(self.env[i - 1] + t * (self.env[i] - self.env[i - 1]))
    }
}

/// Least concave majorant of `(grid[i], values[i])`, linear between hull
/// vertices.
pub fn uce_1d(grid: &[f64], values: &[f64]) -> Result<EnvelopeResult> {
    if grid.len() != values.len() {
        return Err(Error::DimensionMismatch { expected: grid.len(), got: values.len() });
    }
    if grid.len() < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: grid.len() });
    }
    if let Some(&v) = grid.iter().chain(values).find(|v| !v.is_finite()) {
        return Err(Error::NonFinite { field: "envelope input", value: v });
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::UnsortedGrid);
    }

    // Andrew's monotone chain, upper half. Points on a chord are kept.
    let mut hull: Vec<usize> = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (grid[b] - grid[a]) * (values[i] - values[a])
                - (values[b] - values[a]) * (grid[i] - grid[a]);
            if cross > 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }

    let mut env = values.to_vec();
    for w in hull.windows(2) {
        let (a, b) = (w[0], w[1]);
        let slope = (values[b] - values[a]) / (grid[b] - grid[a]);
        for k in a + 1..b {
            env[k] = (values[a] + slope * (grid[k] - grid[a])).max(values[k]);
        }
    }
    Ok(EnvelopeResult {
        grid: grid.to_vec(),
        raw: values.to_vec(),
        env,
        hull_vertices: hull,
    })
}

/// Operating-power grid for [`uce_at_power`]. Each axis holds `density + 1`
/// log-spaced points `P·max_boost^(j/h)` for `j = −h..=h`, `h = density/2`,
/// so powers range over `[P/max_boost, P·max_boost]`. Doubling the density
/// refines the grid without dropping any point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerGrid {
    pub density: usize,
    pub max_boost: f64,
}

impl Default for PowerGrid {
    fn default() -> Self {
        PowerGrid {
            density: 256,
            max_boost: 100.0,
        }
    }
}

impl PowerGrid {
    pub fn new(density: usize, max_boost: f64) -> Result<PowerGrid> {
        if !(max_boost.is_finite() && max_boost >= 1.0) {
            return Err(Error::InvalidInput(format!("max boost must be ≥ 1 (got {max_boost})")));
        }
        Ok(PowerGrid { density, max_boost })
    }

    fn half(&self) -> usize {
        self.density / 2
    }

    fn multipliers(&self) -> Vec<f64> {
        let h = self.half() as i64;
        if h == 0 || self.max_boost == 1.0 {
            return vec![1.0];
        }
        (-h..=h)
            .map(|j| {
                if j == 0 {
                    1.0
                } else {
                    self.max_boost.powf(j as f64 / h as f64)
                }
            })
            .collect()
    }
}

/// Time-sharing envelope of `rate_fn` at the power budget `(p1_max, p2_max)`:
/// the maximum over grid operating powers of `λ·rate_fn(p1, p2)` with
/// `λ = min(1, p1_max/p1, p2_max/p2)`. Never below `rate_fn(p1_max, p2_max)`.
/// Non-finite rate values are skipped.
pub fn uce_at_power<F>(rate_fn: F, p1_max: f64, p2_max: f64, grid: &PowerGrid) -> f64
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    let raw = rate_fn(p1_max, p2_max);
    let m = grid.multipliers();
    if m.len() == 1 {
        return raw;
    }
    m.par_iter()
        .map(|&m1| {
            let p1 = p1_max * m1;
            let l1 = if m1 > 1.0 { 1.0 / m1 } else { 1.0 };
            let mut best = f64::NEG_INFINITY;
            for &m2 in &m {
                let lambda = if m2 > 1.0 { l1.min(1.0 / m2) } else { l1 };
                let v = lambda * rate_fn(p1, p2_max * m2);
                if v > best {
                    best = v;
                }
            }
            best
        })
        .reduce(|| f64::NEG_INFINITY, f64::max)
        .max(raw)
}
