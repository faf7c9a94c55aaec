//! Grids, piecewise-cubic interpolation and the weighted grid function.
//!
//! Solutions u of the mixed problem may be unbounded at t = 0; the object
//! actually stored is always w(t) = t^{2−α} u(t), which is continuous on
//! \[0,1\]. The norm of the underlying space is max |w|.

use crate::error::{Error, Result};
use serde::Serialize;

/// Default number of solver grid points.
pub const DEFAULT_GRID: usize = 513;

/// n points on \[0,1\] clustered at both endpoints (Chebyshev-Lobatto map).
pub fn chebyshev_points(n: usize) -> Vec<f64> {
    assert!(n >= 2);
    (0..n)
        .map(|i| 0.5 * (1.0 - (std::f64::consts::PI * i as f64 / (n - 1) as f64).cos()))
        .collect()
}

/// n uniformly spaced points on \[0,1\] including both endpoints.
pub fn uniform_points(n: usize) -> Vec<f64> {
    assert!(n >= 2);
    (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
}

/// Piecewise-cubic interpolant: local 4-point Lagrange polynomial around the
/// panel containing the query point. Exact for cubics, O(h⁴) for smooth data.
#[derive(Debug, Clone)]
pub struct CubicInterp {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl CubicInterp {
    pub fn new(x: &[f64], y: &[f64]) -> Self {
        assert_eq!(x.len(), y.len());
        assert!(x.len() >= 4, "cubic interpolation needs at least 4 points");
        Self {
            x: x.to_vec(),
            y: y.to_vec(),
        }
    }

    /// Index of the panel containing t (clamped to the grid range).
    fn panel(&self, t: f64) -> usize {
        let n = self.x.len();
        match self.x.binary_search_by(|v| v.partial_cmp(&t).unwrap()) {
            Ok(i) => i.min(n - 2),
            Err(i) => i.saturating_sub(1).min(n - 2),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        let i = self.panel(t);
        let lo = i.saturating_sub(1).min(n - 4);
        let xs = &self.x[lo..lo + 4];
        let ys = &self.y[lo..lo + 4];
        let mut acc = 0.0;
        for j in 0..4 {
            let mut basis = 1.0;
            for k in 0..4 {
                if k != j {
                    basis *= (t - xs[k]) / (xs[j] - xs[k]);
                }
            }
            acc += ys[j] * basis;
        }
        acc
    }

    /// Derivative of the local cubic at t.
    pub fn deriv(&self, t: f64) -> f64 {
        let n = self.x.len();
        let i = self.panel(t);
        let lo = i.saturating_sub(1).min(n - 4);
        let xs = &self.x[lo..lo + 4];
        let ys = &self.y[lo..lo + 4];
        let mut acc = 0.0;
        for j in 0..4 {
            let denom: f64 = (0..4)
                .filter(|&k| k != j)
                .map(|k| xs[j] - xs[k])
                .product();
            let mut num = 0.0;
            for m in 0..4 {
                if m == j {
                    continue;
                }
                let p: f64 = xs
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j && k != m)
                    .map(|(_, &xk)| t - xk)
                    .product();
                num += p;
            }
            acc += ys[j] * num / denom;
        }
        acc
    }
}

/// A function u in the weighted space, stored through w(t) = t^{2−α} u(t)
/// sampled on a strictly increasing grid covering \[0,1\].
#[derive(Debug, Clone, Serialize)]
pub struct WGridFunction {
    grid: Vec<f64>,
    w: Vec<f64>,
    alpha: f64,
}

impl WGridFunction {
    pub fn new(grid: Vec<f64>, w: Vec<f64>, alpha: f64) -> Result<Self> {
        if grid.len() != w.len() {
            return Err(Error::GridMismatch(format!(
                "{} grid points vs {} values",
                grid.len(),
                w.len()
            )));
        }
        if grid.len() < 4 || grid.windows(2).any(|p| p[1] <= p[0]) {
            return Err(Error::GridMismatch(
                "grid must be strictly increasing with at least four points".into(),
            ));
        }
        Ok(Self { grid, w, alpha })
    }

    /// Sample w(t) = t^{2−α} u(t) directly from a closure giving w.
    pub fn from_weighted_fn(grid: Vec<f64>, alpha: f64, f: impl Fn(f64) -> f64) -> Self {
        let w = grid.iter().map(|&t| f(t)).collect();
        Self { grid, w, alpha }
    }

    /// Constant-w function on the default Chebyshev grid.
    pub fn constant(value: f64, alpha: f64) -> Self {
        let grid = chebyshev_points(DEFAULT_GRID);
        let w = vec![value; DEFAULT_GRID];
        Self { grid, w, alpha }
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn w_values(&self) -> &[f64] {
        &self.w
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// The norm max |w| of the weighted space.
    pub fn norm(&self) -> f64 {
        self.w.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// u(tᵢ) at grid points; u(0) is ±∞ when w(0) ≠ 0 and α < 2.
    pub fn u_values(&self) -> Vec<f64> {
        self.grid
            .iter()
            .zip(&self.w)
            .map(|(&t, &w)| u_from_w(t, w, self.alpha))
            .collect()
    }

    /// Cubic interpolant of w.
    pub fn interpolant(&self) -> CubicInterp {
        CubicInterp::new(&self.grid, &self.w)
    }

    /// Resample w onto another grid by cubic interpolation.
    pub fn resample(&self, grid: &[f64]) -> Result<Self> {
        let interp = self.interpolant();
        WGridFunction::new(
            grid.to_vec(),
            grid.iter().map(|&t| interp.eval(t)).collect(),
            self.alpha,
        )
    }

    /// Max |w_self − w_other| on this function's grid (other is resampled).
    pub fn distance(&self, other: &WGridFunction) -> Result<f64> {
        let o = other.resample(&self.grid)?;
        Ok(self
            .w
            .iter()
            .zip(o.w.iter())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs())))
    }
}

/// Recover u(t) = t^{α−2} w(t); the endpoint t = 0 maps to ±∞ for α < 2.
pub fn u_from_w(t: f64, w: f64, alpha: f64) -> f64 {
    if t == 0.0 {
        if w == 0.0 || alpha == 2.0 {
            w
        } else {
            f64::INFINITY * w.signum()
        }
    } else {
        t.powf(alpha - 2.0) * w
    }
}
