//! Green's function of the linear mixed problem, its weighted extension and
//! the bound pair (m(t), M).
//!
//! For D^α u − λu + y = 0 on (0,1) with lim t^{2−α}u(t) = u'(1) = 0 and
//! E_{α,α−1}(λ) ≠ 0, the solution is u(t) = ∫₀¹ G(t,s) y(s) ds with
//!
//! ```text
//! G(t,s) = t^{α−1} E_{α,α}(λt^α) E_{α,α−1}(λ(1−s)^α) / ((1−s)^{2−α} E_{α,α−1}(λ))
//!          − (t−s)^{α−1} E_{α,α}(λ(t−s)^α) · 1{s ≤ t}.
//! ```
//!
//! G is positive on (0,1)² exactly when λ exceeds the principal mixed
//! eigenvalue λ₁*. For such λ the weighted ratio
//! H(t,s) = t^{2−α}(1−s)^{2−α} G(t,s)/s extends continuously to s ∈ {0, 1}
//! and is sandwiched between a function m(t) and a constant M; those bounds
//! feed the cone arguments and the contraction certificate in the solver.
//!
//! An arbitrary interval (a,b) reduces to (0,1) by the affine substitution
//! τ = (t−a)/(b−a), which rescales the spectral parameter to λ(b−a)^α and
//! the kernel by (b−a)^{α−1}.

use crate::error::{Error, Result};
use crate::mlf::{gamma, ml};
use crate::spectrum::{check_order, mixed_eigenvalues_down_to, principal_mixed_eigenvalue};
use serde::Serialize;

/// Minimum distance from λ to the located zeros of E_{α,α−1} before the
/// 1/E_{α,α−1}(λ) factor is considered unusable.
const EIGEN_GUARD: f64 = 1e-10;

/// Parameters of the linear problem D^α u − λ u + y = 0 with mixed boundary
/// data: weighted value A at the left endpoint, slope B at the right one.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ProblemParams {
    pub alpha: f64,
    pub lambda: f64,
    pub interval: (f64, f64),
    /// Prescribed limit of (t−a)^{2−α} u(t) at the left endpoint.
    pub boundary_a: f64,
    /// Prescribed derivative u'(b) at the right endpoint.
    pub boundary_b: f64,
}

impl ProblemParams {
    pub fn new(alpha: f64, lambda: f64) -> Self {
        Self {
            alpha,
            lambda,
            interval: (0.0, 1.0),
            boundary_a: 0.0,
            boundary_b: 0.0,
        }
    }

    pub fn with_interval(mut self, a: f64, b: f64) -> Self {
        self.interval = (a, b);
        self
    }

    pub fn with_boundary(mut self, a: f64, b: f64) -> Self {
        self.boundary_a = a;
        self.boundary_b = b;
        self
    }

    /// Interval length b − a.
    pub fn length(&self) -> f64 {
        self.interval.1 - self.interval.0
    }

    /// Spectral parameter of the equivalent problem on (0,1).
    pub fn canonical_lambda(&self) -> f64 {
        self.lambda * self.length().powf(self.alpha)
    }

    /// Map a problem coordinate into \[0,1\].
    pub fn to_canonical(&self, t: f64) -> f64 {
        (t - self.interval.0) / self.length()
    }
}

/// Validated kernel of the canonical problem: caches E_{α,α−1}(λ) and the
/// positivity threshold λ₁*.
#[derive(Debug, Clone)]
pub struct GreenKernel {
    pub alpha: f64,
    /// Canonical spectral parameter λ(b−a)^α.
    pub lambda: f64,
    /// Interval length b − a of the original problem.
    pub scale: f64,
    /// E_{α,α−1}(λ), the denominator of the kernel.
    pub e_lam: f64,
    /// Principal mixed eigenvalue λ₁*(α).
    pub lambda_star: f64,
}

impl GreenKernel {
    pub fn new(params: &ProblemParams) -> Result<Self> {
        check_order(params.alpha)?;
        if params.length() <= 0.0 || params.length().is_nan() {
            return Err(Error::InvalidParams(format!(
                "interval ({}, {}) must have positive length",
                params.interval.0, params.interval.1
            )));
        }
        let alpha = params.alpha;
        let lambda = params.canonical_lambda();
        let lambda_star = principal_mixed_eigenvalue(alpha)?.value;
        if lambda < 0.0 {
            let roots = mixed_eigenvalues_down_to(alpha, lambda - 1.0)?;
            for r in roots {
                if (lambda - r).abs() <= EIGEN_GUARD {
                    return Err(Error::InvalidParams(format!(
                        "lambda {lambda} within {EIGEN_GUARD:e} of the eigenvalue {r}"
                    )));
                }
            }
        }
        let e_lam = ml(alpha, alpha - 1.0, lambda)?;
        if e_lam == 0.0 {
            return Err(Error::InvalidParams(format!(
                "E_(alpha,alpha-1)({lambda}) vanishes; problem is at an eigenvalue"
            )));
        }
        Ok(Self {
            alpha,
            lambda,
            scale: params.length(),
            e_lam,
            lambda_star,
        })
    }

    /// Whether the canonical spectral parameter lies above λ₁*.
    pub fn positive_regime(&self) -> bool {
        self.lambda > self.lambda_star
    }

    fn check_domain(&self, t: f64, s: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::DomainError(format!("t = {t} outside [0, 1]")));
        }
        if !(0.0..1.0).contains(&s) {
            return Err(Error::DomainError(format!(
                "s = {s} outside [0, 1); the kernel is unbounded at s = 1"
            )));
        }
        Ok(())
    }

    /// Branch shared by both sides of the kernel.
    fn upper_branch(&self, t: f64, s: f64) -> Result<f64> {
        let a = self.alpha;
        let num = t.powf(a - 1.0)
            * ml(a, a, self.lambda * t.powf(a))?
            * ml(a, a - 1.0, self.lambda * (1.0 - s).powf(a))?;
        Ok(num / ((1.0 - s).powf(2.0 - a) * self.e_lam))
    }

    /// The (t−s)^{α−1} term active on s ≤ t.
    fn kink(&self, t: f64, s: f64) -> Result<f64> {
        let a = self.alpha;
        let d = t - s;
        Ok(d.powf(a - 1.0) * ml(a, a, self.lambda * d.powf(a))?)
    }

    /// G(t,s) in canonical coordinates.
    pub fn eval(&self, t: f64, s: f64) -> Result<f64> {
        self.check_domain(t, s)?;
        let upper = self.upper_branch(t, s)?;
        if s <= t {
            Ok(upper - self.kink(t, s)?)
        } else {
            Ok(upper)
        }
    }

    /// ∂G/∂t(t,s) from the termwise-differentiated closed form.
    pub fn eval_dt(&self, t: f64, s: f64) -> Result<f64> {
        self.check_domain(t, s)?;
        let a = self.alpha;
        let col = ml(a, a - 1.0, self.lambda * (1.0 - s).powf(a))?
            / ((1.0 - s).powf(2.0 - a) * self.e_lam);
        let first = t.powf(a - 2.0) * ml(a, a - 1.0, self.lambda * t.powf(a))? * col;
        if s < t {
            let d = t - s;
            Ok(first - d.powf(a - 2.0) * ml(a, a - 1.0, self.lambda * d.powf(a))?)
        } else {
            Ok(first)
        }
    }

    /// ∂/∂t [t^{2−α} G(t,s)], defined for t > 0.
    pub fn eval_dt_weighted(&self, t: f64, s: f64) -> Result<f64> {
        self.check_domain(t, s)?;
        if t <= 0.0 {
            return Err(Error::DomainError(
                "weighted derivative requires t > 0".into(),
            ));
        }
        let a = self.alpha;
        let col = ml(a, a - 1.0, self.lambda * (1.0 - s).powf(a))?
            / ((1.0 - s).powf(2.0 - a) * self.e_lam);
        // d/dt [t E_{α,α}(λt^α)] = E_{α,α−1}(λt^α) − (α−2) E_{α,α}(λt^α)
        let ta = self.lambda * t.powf(a);
        let first = (ml(a, a - 1.0, ta)? - (a - 2.0) * ml(a, a, ta)?) * col;
        if s <= t && s < t {
            let d = t - s;
            let da = self.lambda * d.powf(a);
            let kink_dt = (2.0 - a) * t.powf(1.0 - a) * d.powf(a - 1.0) * ml(a, a, da)?
                + t.powf(2.0 - a) * d.powf(a - 2.0) * ml(a, a - 1.0, da)?;
            Ok(first - kink_dt)
        } else {
            Ok(first)
        }
    }

    /// H(t,s) = t^{2−α}(1−s)^{2−α} G(t,s)/s for s ∈ (0,1], written without
    /// the unbounded factors so it stays finite up to s = 1.
    fn h_inner(&self, t: f64, s: f64) -> Result<f64> {
        let a = self.alpha;
        let main = t * ml(a, a, self.lambda * t.powf(a))?
            * ml(a, a - 1.0, self.lambda * (1.0 - s).powf(a))?
            / self.e_lam;
        let kink = if s <= t {
            let d = t - s;
            t.powf(2.0 - a)
                * d.powf(a - 1.0)
                * (1.0 - s).powf(2.0 - a)
                * ml(a, a, self.lambda * d.powf(a))?
        } else {
            0.0
        };
        Ok((main - kink) / s)
    }

    /// Continuity extension L(t) = lim_{s→0+} H(t,s) by Richardson
    /// extrapolation along a geometric ladder of s values.
    pub fn l_limit(&self, t: f64) -> Result<f64> {
        self.l_limit_from(t, 1e-3)
    }

    pub(crate) fn l_limit_from(&self, t: f64, s_top: f64) -> Result<f64> {
        let s0 = if t > 0.0 { s_top.min(t / 2.0) } else { s_top };
        let mut s = Vec::with_capacity(6);
        let mut h = Vec::with_capacity(6);
        let mut sk = s0;
        for _ in 0..6 {
            s.push(sk);
            h.push(self.h_inner(t, sk)?);
            sk *= 0.5;
        }
        // Neville extrapolation to s = 0.
        let mut tableau = h;
        for level in 1..tableau.len() {
            for i in (level..tableau.len()).rev() {
                let num = s[i - level] * tableau[i] - s[i] * tableau[i - 1];
                tableau[i] = num / (s[i - level] - s[i]);
            }
        }
        Ok(*tableau.last().unwrap())
    }

    /// Closed form of the same limit,
    /// L(t) = E_{α,α−1}(λt^α) − t E_{α,α}(λt^α) E_{α,α−2}(λ) / E_{α,α−1}(λ),
    /// obtained by differentiating the kernel in s at s = 0. Retained as an
    /// independent cross-check of the extrapolated value.
    pub fn l_limit_closed(&self, t: f64) -> Result<f64> {
        let a = self.alpha;
        Ok(ml(a, a - 1.0, self.lambda * t.powf(a))?
            - t * ml(a, a, self.lambda * t.powf(a))? * ml(a, a - 2.0, self.lambda)? / self.e_lam)
    }

    /// The extension H̃ on \[0,1\]²: H for s ∈ (0,1], the extrapolated L(t)
    /// at s = 0. Requires λ above the positivity threshold.
    pub fn h_tilde(&self, t: f64, s: f64) -> Result<f64> {
        if !self.positive_regime() {
            return Err(Error::InvalidParams(format!(
                "weighted bounds need lambda > lambda1* = {}, got {}",
                self.lambda_star, self.lambda
            )));
        }
        if !(0.0..=1.0).contains(&t) || !(0.0..=1.0).contains(&s) {
            return Err(Error::DomainError(format!("({t}, {s}) outside [0,1]^2")));
        }
        if t == 0.0 {
            return Ok(0.0);
        }
        if s == 0.0 {
            self.l_limit(t)
        } else {
            self.h_inner(t, s)
        }
    }

    /// Homogeneous solution with weighted value 1 at 0 and zero slope at 1,
    /// in canonical coordinates.
    pub fn v1(&self, t: f64) -> Result<f64> {
        let a = self.alpha;
        let c1 = -gamma(a - 1.0) * ml(a, a - 2.0, self.lambda)? / self.e_lam;
        Ok(c1 * t.powf(a - 1.0) * ml(a, a, self.lambda * t.powf(a))?
            + gamma(a - 1.0) * t.powf(a - 2.0) * ml(a, a - 1.0, self.lambda * t.powf(a))?)
    }

    /// t^{2−α} v₁(t); continuous on \[0,1\] with value 1 at t = 0.
    pub fn v1_weighted(&self, t: f64) -> Result<f64> {
        Ok(gamma(self.alpha - 1.0) * self.l_limit_closed(t)?)
    }

    /// v₁'(t); vanishes at t = 1 by construction.
    pub fn v1_deriv(&self, t: f64) -> Result<f64> {
        let a = self.alpha;
        let c1 = -gamma(a - 1.0) * ml(a, a - 2.0, self.lambda)? / self.e_lam;
        Ok(c1 * t.powf(a - 2.0) * ml(a, a - 1.0, self.lambda * t.powf(a))?
            + gamma(a - 1.0) * t.powf(a - 3.0) * ml(a, a - 2.0, self.lambda * t.powf(a))?)
    }

    /// Homogeneous solution with weighted value 0 at 0 and unit slope at 1,
    /// v₂(t) = t^{α−1} E_{α,α}(λt^α) / E_{α,α−1}(λ).
    pub fn v2(&self, t: f64) -> Result<f64> {
        let a = self.alpha;
        Ok(t.powf(a - 1.0) * ml(a, a, self.lambda * t.powf(a))? / self.e_lam)
    }

    /// t^{2−α} v₂(t).
    pub fn v2_weighted(&self, t: f64) -> Result<f64> {
        let a = self.alpha;
        Ok(t * ml(a, a, self.lambda * t.powf(a))? / self.e_lam)
    }

    /// v₂'(t) = t^{α−2} E_{α,α−1}(λt^α) / E_{α,α−1}(λ).
    pub fn v2_deriv(&self, t: f64) -> Result<f64> {
        let a = self.alpha;
        Ok(t.powf(a - 2.0) * ml(a, a - 1.0, self.lambda * t.powf(a))? / self.e_lam)
    }
}

/// G(t,s) for the problem's own interval; coordinates in [a, b].
pub fn green_eval(params: &ProblemParams, t: f64, s: f64) -> Result<f64> {
    let kernel = GreenKernel::new(params)?;
    let factor = kernel.scale.powf(params.alpha - 1.0);
    Ok(factor * kernel.eval(params.to_canonical(t), params.to_canonical(s))?)
}

/// ∂/∂t [(t−a)^{2−α} G(t,s)] for the problem's interval.
pub fn green_dt_weighted(params: &ProblemParams, t: f64, s: f64) -> Result<f64> {
    let kernel = GreenKernel::new(params)?;
    // (t−a)^{2−α} G = L^{2−α} τ^{2−α} · L^{α−1} G_c = L · τ^{2−α} G_c, and
    // d/dt = (1/L) d/dτ.
    kernel.eval_dt_weighted(params.to_canonical(t), params.to_canonical(s))
}

/// H̃(t,s) of the canonical problem associated with `params`.
pub fn h_tilde(params: &ProblemParams, t: f64, s: f64) -> Result<f64> {
    GreenKernel::new(params)?.h_tilde(t, s)
}

/// v₁ and v₂ in problem coordinates: weighted value 1 / slope 0, and
/// weighted value 0 / slope 1, at the respective endpoints.
pub fn v1_eval(params: &ProblemParams, t: f64) -> Result<f64> {
    let kernel = GreenKernel::new(params)?;
    let l = kernel.scale;
    Ok(l.powf(params.alpha - 2.0) * kernel.v1(params.to_canonical(t))?)
}

pub fn v2_eval(params: &ProblemParams, t: f64) -> Result<f64> {
    let kernel = GreenKernel::new(params)?;
    Ok(kernel.scale * kernel.v2(params.to_canonical(t))?)
}

/// Grid bounds m(t) ≤ H̃(t,s) ≤ M with the cone constant m₀ = min m over
/// \[c₁, 1\].
#[derive(Debug, Clone, Serialize)]
pub struct BoundsEnvelope {
    pub alpha: f64,
    pub lambda: f64,
    pub t_grid: Vec<f64>,
    pub m_grid: Vec<f64>,
    pub big_m: f64,
    pub m0: f64,
    pub c1: f64,
    /// Modulus of continuity of m on the grid; the interpolation allowance
    /// for off-grid checks.
    pub modulus: f64,
}

impl BoundsEnvelope {
    /// Linear interpolation of m between grid points.
    pub fn m_at(&self, t: f64) -> f64 {
        let n = self.t_grid.len();
        if t <= self.t_grid[0] {
            return self.m_grid[0];
        }
        if t >= self.t_grid[n - 1] {
            return self.m_grid[n - 1];
        }
        let i = match self
            .t_grid
            .binary_search_by(|v| v.partial_cmp(&t).unwrap())
        {
            Ok(i) => return self.m_grid[i],
            Err(i) => i - 1,
        };
        let f = (t - self.t_grid[i]) / (self.t_grid[i + 1] - self.t_grid[i]);
        self.m_grid[i] * (1.0 - f) + self.m_grid[i + 1] * f
    }

    /// Tolerance for off-grid sandwich and cone checks.
    pub fn allowance(&self) -> f64 {
        1e-6 + self.modulus
    }
}

/// Compute the envelope on a grid_n × grid_n grid, uniform in t and graded
/// toward s = 1 (the map s = 1 − (1−σ)² of a uniform σ grid).
pub fn bounds_envelope(params: &ProblemParams, grid_n: usize, c1: f64) -> Result<BoundsEnvelope> {
    if grid_n < 64 {
        return Err(Error::InvalidParams(format!(
            "envelope grid must have at least 64 points, got {grid_n}"
        )));
    }
    if !(c1 > 0.0 && c1 < 1.0) {
        return Err(Error::InvalidParams(format!(
            "cutoff c1 must lie in (0,1), got {c1}"
        )));
    }
    let kernel = GreenKernel::new(params)?;
    if !kernel.positive_regime() {
        return Err(Error::InvalidParams(format!(
            "envelope needs lambda > lambda1* = {}, got {}",
            kernel.lambda_star, kernel.lambda
        )));
    }
    let n = grid_n;
    let t_grid: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
    let s_grid: Vec<f64> = (0..n)
        .map(|j| {
            let sigma = j as f64 / (n - 1) as f64;
            1.0 - (1.0 - sigma) * (1.0 - sigma)
        })
        .collect();
    let mut m_grid = Vec::with_capacity(n);
    let mut big_m = f64::NEG_INFINITY;
    for &t in &t_grid {
        let mut row_min = f64::INFINITY;
        for &s in &s_grid {
            let h = kernel.h_tilde(t, s)?;
            row_min = row_min.min(h);
            big_m = big_m.max(h);
        }
        m_grid.push(row_min);
    }
    let m0 = t_grid
        .iter()
        .zip(&m_grid)
        .filter(|(&t, _)| t >= c1)
        .map(|(_, &m)| m)
        .fold(f64::INFINITY, f64::min);
    if m0 <= 0.0 || m0.is_nan() {
        return Err(Error::InvalidParams(format!(
            "cone constant m0 = {m0} is not positive"
        )));
    }
    let modulus = m_grid
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .fold(0.0f64, f64::max);
    Ok(BoundsEnvelope {
        alpha: params.alpha,
        lambda: kernel.lambda,
        t_grid,
        m_grid,
        big_m,
        m0,
        c1,
        modulus,
    })
}

/// Result of a sign scan of G over an interior grid.
#[derive(Debug, Clone, Serialize)]
pub struct SignReport {
    pub all_positive: bool,
    pub min_value: f64,
    pub argmin: (f64, f64),
    /// Grid locations (t, s) where the sign of G flips along an s-row.
    pub sign_change_points: Vec<(f64, f64)>,
    pub lambda_star: f64,
}

/// Scan the sign of the canonical G on an interior uniform grid.
pub fn positivity_report(params: &ProblemParams, grid_n: usize) -> Result<SignReport> {
    if grid_n < 8 {
        return Err(Error::InvalidParams(format!(
            "positivity grid must have at least 8 points, got {grid_n}"
        )));
    }
    let kernel = GreenKernel::new(params)?;
    let n = grid_n;
    let mut min_value = f64::INFINITY;
    let mut argmin = (0.0, 0.0);
    let mut sign_changes = Vec::new();
    for i in 1..n - 1 {
        let t = i as f64 / (n - 1) as f64;
        let mut prev_sign = 0.0f64;
        for j in 1..n - 1 {
            let s = j as f64 / (n - 1) as f64;
            let g = kernel.eval(t, s)?;
            if g < min_value {
                min_value = g;
                argmin = (t, s);
            }
            let sign = g.signum();
            if prev_sign != 0.0 && sign != 0.0 && sign != prev_sign && sign_changes.len() < 16 {
                sign_changes.push((t, s));
            }
            prev_sign = sign;
        }
    }
    Ok(SignReport {
        all_positive: min_value > 0.0,
        min_value,
        argmin,
        sign_change_points: sign_changes,
        lambda_star: kernel.lambda_star,
    })
}
