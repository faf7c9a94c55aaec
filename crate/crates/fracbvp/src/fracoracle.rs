//! Discrete Riemann-Liouville operators for independent verification.
//!
//! The solvers in this crate produce candidates through the Green's-function
//! fixed-point route. This module checks them against the definition of the
//! problem itself: a product-integration rule for I^α and an L1-type (or
//! Grünwald-Letnikov) discretization of D^α.
//!
//! Candidates are split as u = c₁ t^{α−1} + c₂ t^{α−2} + u_reg before
//! differencing. Both singular powers lie in the kernel of D^α, so their
//! contribution is removed analytically and the scheme only ever sees the
//! regular remainder, which vanishes to second order at the origin in the
//! weighted representation.

use crate::error::{Error, Result};
use crate::greens::ProblemParams;
use crate::grid::WGridFunction;
use crate::mlf::recip_gamma;
use serde::Serialize;

/// Default number of panels of the oracle grid.
pub const DEFAULT_PANELS: usize = 2048;

/// Near-zero fit residual above which the singular split is rejected.
const FIT_THRESHOLD: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SchemeKind {
    /// First-derivative layer discretized by the classical L1 rule;
    /// truncation order O(h^{2−(α−1)}) on smooth remainders.
    L1,
    /// Grünwald-Letnikov binomial differences, first order.
    GrunwaldLetnikov,
}

/// A candidate resampled onto a uniform grid together with its singular
/// split, ready for repeated derivative evaluations.
#[derive(Debug, Clone)]
pub struct RLScheme {
    pub alpha: f64,
    pub h: f64,
    pub kind: SchemeKind,
    /// Coefficients (c₁, c₂) of the analytically-removed part
    /// c₁ t^{α−1} + c₂ t^{α−2}.
    pub singular_split: (f64, f64),
    grid: Vec<f64>,
    /// w − c₂ − c₁ t on the grid.
    w_reg: Vec<f64>,
    /// t^{α−2} (w − c₂ − c₁ t): the regular remainder of u.
    u_reg: Vec<f64>,
    /// Central-difference derivative of u_reg (L1 first-derivative layer).
    v_reg: Vec<f64>,
}

impl RLScheme {
    /// Resample `u` onto a uniform grid with `panels` panels and fit the
    /// singular split from the weighted values near 0.
    pub fn for_candidate(u: &WGridFunction, panels: usize, kind: SchemeKind) -> Result<Self> {
        if panels < 16 {
            return Err(Error::GridMismatch(format!(
                "oracle grid needs at least 16 panels, got {panels}"
            )));
        }
        let alpha = u.alpha();
        crate::spectrum::check_order(alpha)?;
        let n = panels;
        let h = 1.0 / n as f64;
        let grid: Vec<f64> = (0..=n).map(|i| i as f64 * h).collect();
        let interp = u.interpolant();
        let w: Vec<f64> = grid.iter().map(|&t| interp.eval(t)).collect();

        let c2 = w[0];
        let c1 = (-3.0 * w[0] + 4.0 * w[1] - w[2]) / (2.0 * h);
        // The subtraction below cancels catastrophically for candidates that
        // are exactly in the singular family; remainders at roundoff level
        // are zeroed so the negative powers of t cannot amplify them.
        let w_reg: Vec<f64> = grid
            .iter()
            .zip(&w)
            .map(|(&t, &wv)| {
                let r = wv - c2 - c1 * t;
                let noise = 32.0 * f64::EPSILON * (wv.abs() + c2.abs() + (c1 * t).abs());
                if r.abs() <= noise {
                    0.0
                } else {
                    r
                }
            })
            .collect();
        let scale = u.norm().max(1.0);
        let fit_residual = (1..=4).map(|k| w_reg[k].abs()).fold(0.0f64, f64::max) / scale;
        if fit_residual > FIT_THRESHOLD {
            return Err(Error::SingularPartUnresolved {
                residual: fit_residual,
                threshold: FIT_THRESHOLD,
            });
        }

        let u_reg: Vec<f64> = grid
            .iter()
            .zip(&w_reg)
            .map(|(&t, &wr)| if t == 0.0 { 0.0 } else { t.powf(alpha - 2.0) * wr })
            .collect();
        // u_reg' through the weighted representation: w_reg is smooth and
        // O(t²), so u_reg' = (α−2) t^{α−3} w_reg + t^{α−2} w_reg' keeps the
        // t^{α−1} behavior of the derivative exact near the origin.
        let mut w_slope = vec![0.0; n + 1];
        for i in 1..n {
            w_slope[i] = (w_reg[i + 1] - w_reg[i - 1]) / (2.0 * h);
        }
        w_slope[0] = (-3.0 * w_reg[0] + 4.0 * w_reg[1] - w_reg[2]) / (2.0 * h);
        w_slope[n] = (3.0 * w_reg[n] - 4.0 * w_reg[n - 1] + w_reg[n - 2]) / (2.0 * h);
        let mut v_reg = vec![0.0; n + 1];
        for i in 1..=n {
            let t = grid[i];
            v_reg[i] =
                (alpha - 2.0) * t.powf(alpha - 3.0) * w_reg[i] + t.powf(alpha - 2.0) * w_slope[i];
        }

        Ok(Self {
            alpha,
            h,
            kind,
            singular_split: (c1, c2),
            grid,
            w_reg,
            u_reg,
            v_reg,
        })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    /// w(tᵢ) reassembled from the split.
    pub fn w_at(&self, i: usize) -> f64 {
        self.w_reg[i] + self.singular_split.1 + self.singular_split.0 * self.grid[i]
    }

    /// u(tᵢ) for tᵢ > 0.
    pub fn u_at(&self, i: usize) -> f64 {
        let t = self.grid[i];
        t.powf(self.alpha - 2.0) * self.w_at(i)
    }

    fn index_of(&self, t: f64) -> Result<usize> {
        let idx = (t / self.h).round() as usize;
        if idx >= self.grid.len() || (self.grid[idx] - t).abs() > 1e-12 {
            return Err(Error::GridMismatch(format!(
                "t = {t} is not a point of the uniform grid with h = {}",
                self.h
            )));
        }
        Ok(idx)
    }

    /// D^α u(t) at an interior grid point t ≥ 3h.
    pub fn rl_derivative(&self, t: f64) -> Result<f64> {
        let i = self.index_of(t)?;
        if i < 3 {
            return Err(Error::GridMismatch(format!(
                "derivative needs t >= 3h, got t = {t}"
            )));
        }
        let alpha = self.alpha;
        if (alpha - 2.0).abs() < 1e-14 {
            // Classical second derivative of the regular remainder.
            if i + 1 >= self.grid.len() {
                let n = self.grid.len() - 1;
                return Ok(
                    (2.0 * self.u_reg[n] - 5.0 * self.u_reg[n - 1] + 4.0 * self.u_reg[n - 2]
                        - self.u_reg[n - 3])
                        / (self.h * self.h),
                );
            }
            return Ok((self.u_reg[i + 1] - 2.0 * self.u_reg[i] + self.u_reg[i - 1])
                / (self.h * self.h));
        }
        match self.kind {
            SchemeKind::L1 => {
                // D^α u_reg = C-D^{α−1} (u_reg'): classical L1 applied to the
                // first-derivative layer.
                let beta = alpha - 1.0;
                let mut acc = 0.0;
                for k in 0..i {
                    let bk = ((k + 1) as f64).powf(1.0 - beta) - (k as f64).powf(1.0 - beta);
                    acc += bk * (self.v_reg[i - k] - self.v_reg[i - k - 1]);
                }
                Ok(acc * self.h.powf(-beta) * recip_gamma(2.0 - beta))
            }
            SchemeKind::GrunwaldLetnikov => {
                let mut g = 1.0f64;
                let mut acc = self.u_reg[i];
                for j in 1..=i {
                    g *= (j as f64 - 1.0 - alpha) / j as f64;
                    acc += g * self.u_reg[i - j];
                }
                Ok(acc * self.h.powf(-alpha))
            }
        }
    }
}

/// I^{α} f at the grid point with index `idx`, by product integration with
/// exact moments of the (t−s)^{α−1} kernel against a piecewise-linear f.
pub fn rl_integral(samples: &[f64], h: f64, alpha_int: f64, idx: usize) -> Result<f64> {
    if alpha_int <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "integral order must be positive, got {alpha_int}"
        )));
    }
    if idx >= samples.len() {
        return Err(Error::GridMismatch(format!(
            "index {idx} outside the sampled grid of {} points",
            samples.len()
        )));
    }
    if idx == 0 {
        return Ok(0.0);
    }
    let a = alpha_int;
    let mut acc = 0.0;
    // Panel [t_j, t_{j+1}] seen from t_idx in the variable τ = t_idx − s,
    // which runs over [kh, (k+1)h] with k = idx − j − 1. The linear
    // interpolant of f turns the panel integral into the two moments
    // ∫ τ^{a−1} dτ and ∫ τ^{a} dτ, both known in closed form.
    for j in 0..idx {
        let k = (idx - j - 1) as f64;
        let lo = k * h;
        let hi = (k + 1.0) * h;
        let mom0 = (hi.powf(a) - lo.powf(a)) / a;
        let mom1 = (hi.powf(a + 1.0) - lo.powf(a + 1.0)) / (a + 1.0);
        let w_left = (mom1 - lo * mom0) / h; // multiplies f(t_j)
        let w_right = (hi * mom0 - mom1) / h; // multiplies f(t_{j+1})
        acc += samples[j] * w_left + samples[j + 1] * w_right;
    }
    // 1/Γ(a) written through the entire reciprocal gamma.
    Ok(acc * a * recip_gamma(a + 1.0))
}

/// Residual report of a candidate against the differential equation.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    /// max |D^α u − λ u + f(t, w)| over grid points in [0.05, 0.95].
    pub max_interior: f64,
    /// Location of the maximum.
    pub argmax: f64,
    /// |w(0) − A|.
    pub boundary_left: f64,
    /// |u'(1) − B|.
    pub boundary_right: f64,
    pub panels: usize,
}

/// Evaluate the equation residual of a candidate on the oracle grid.
pub fn ode_residual(
    u: &WGridFunction,
    params: &ProblemParams,
    f: &dyn Fn(f64, f64) -> f64,
) -> Result<ResidualReport> {
    ode_residual_with(u, params, f, DEFAULT_PANELS, SchemeKind::L1)
}

pub fn ode_residual_with(
    u: &WGridFunction,
    params: &ProblemParams,
    f: &dyn Fn(f64, f64) -> f64,
    panels: usize,
    kind: SchemeKind,
) -> Result<ResidualReport> {
    if params.interval != (0.0, 1.0) {
        return Err(Error::OracleFailure(
            "equation residuals are evaluated on the canonical interval (0,1)".into(),
        ));
    }
    let scheme = RLScheme::for_candidate(u, panels, kind)?;
    let lambda = params.lambda;
    let mut max_interior = 0.0f64;
    let mut argmax = 0.0;
    for (i, &t) in scheme.grid().iter().enumerate() {
        if !(0.05..=0.95).contains(&t) {
            continue;
        }
        let d = scheme.rl_derivative(t)?;
        let r = d - lambda * scheme.u_at(i) + f(t, scheme.w_at(i));
        if r.abs() > max_interior {
            max_interior = r.abs();
            argmax = t;
        }
    }
    let n = scheme.grid().len() - 1;
    let w1 = scheme.w_at(n);
    let w_slope =
        (3.0 * scheme.w_at(n) - 4.0 * scheme.w_at(n - 1) + scheme.w_at(n - 2)) / (2.0 * scheme.h);
    let u_prime_1 = (params.alpha - 2.0) * w1 + w_slope;
    Ok(ResidualReport {
        max_interior,
        argmax,
        boundary_left: (scheme.w_at(0) - params.boundary_a).abs(),
        boundary_right: (u_prime_1 - params.boundary_b).abs(),
        panels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::chebyshev_points;
    use crate::mlf::gamma;
    use approx::assert_abs_diff_eq;

    fn candidate(alpha: f64, w: impl Fn(f64) -> f64) -> WGridFunction {
        WGridFunction::from_weighted_fn(chebyshev_points(513), alpha, w)
    }

    #[test]
    fn integral_of_constant_is_power_rule() {
        let n = 1024;
        let h = 1.0 / n as f64;
        let samples = vec![1.0; n + 1];
        for &a in &[0.5, 0.7, 1.0, 1.3] {
            for &idx in &[256usize, 512, 1024] {
                let t = idx as f64 * h;
                let exact = t.powf(a) * recip_gamma(a + 1.0);
                let got = rl_integral(&samples, h, a, idx).unwrap();
                assert_abs_diff_eq!(got, exact, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn integral_of_identity_at_order_one() {
        let n = 512;
        let h = 1.0 / n as f64;
        let samples: Vec<f64> = (0..=n).map(|i| i as f64 * h).collect();
        for &idx in &[128usize, 300, 512] {
            let t = idx as f64 * h;
            assert_abs_diff_eq!(
                rl_integral(&samples, h, 1.0, idx).unwrap(),
                0.5 * t * t,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn integral_power_rule_with_singular_sample() {
        // I^{0.7} t^{0.3} at t = 1 equals Γ(1.3)/Γ(2) = Γ(1.3). The integrand
        // kink at 0 limits the rule to O(h^{1.3}); a fine grid reaches 1e-8.
        let n = 1 << 20;
        let h = 1.0 / n as f64;
        let samples: Vec<f64> = (0..=n).map(|i| (i as f64 * h).powf(0.3)).collect();
        let got = rl_integral(&samples, h, 0.7, n).unwrap();
        assert_abs_diff_eq!(got, gamma(1.3), epsilon = 1e-8);
    }

    #[test]
    fn semigroup_composition_spot_check() {
        let n = 2048;
        let h = 1.0 / n as f64;
        let f: Vec<f64> = (0..=n).map(|i| i as f64 * h).collect();
        let inner: Vec<f64> = (0..=n)
            .map(|i| rl_integral(&f, h, 0.5, i).unwrap())
            .collect();
        for &idx in &[512usize, 1024, 2048] {
            let lhs = rl_integral(&inner, h, 0.7, idx).unwrap();
            let rhs = rl_integral(&f, h, 1.2, idx).unwrap();
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-4);
        }
    }

    #[test]
    fn derivative_annihilates_kernel_powers() {
        for &alpha in &[1.3, 1.6, 1.9] {
            // u = t^{α−1}: w = t. u = t^{α−2}: w = 1.
            for w in [
                Box::new(|t: f64| t) as Box<dyn Fn(f64) -> f64>,
                Box::new(|_: f64| 1.0),
                Box::new(|t: f64| 2.0 * t - 3.0),
            ] {
                let scheme =
                    RLScheme::for_candidate(&candidate(alpha, w), 1024, SchemeKind::L1).unwrap();
                for &t in &[0.125, 0.5, 0.875] {
                    assert_abs_diff_eq!(scheme.rl_derivative(t).unwrap(), 0.0, epsilon = 1e-10);
                }
            }
        }
    }

    #[test]
    fn derivative_power_rule() {
        // D^α t^α = Γ(α+1), constant in t.
        for &alpha in &[1.25, 1.5, 1.75] {
            let scheme = RLScheme::for_candidate(
                &candidate(alpha, |t| t * t),
                DEFAULT_PANELS,
                SchemeKind::L1,
            )
            .unwrap();
            for &t in &[0.25, 0.5, 0.75] {
                let d = scheme.rl_derivative(t).unwrap();
                assert_abs_diff_eq!(d, gamma(alpha + 1.0), epsilon = 1e-2);
            }
        }
    }

    #[test]
    fn derivative_power_rule_grunwald() {
        let scheme = RLScheme::for_candidate(
            &candidate(1.5, |t| t * t),
            DEFAULT_PANELS,
            SchemeKind::GrunwaldLetnikov,
        )
        .unwrap();
        for &t in &[0.25, 0.5, 0.75] {
            assert_abs_diff_eq!(scheme.rl_derivative(t).unwrap(), gamma(2.5), epsilon = 5e-2);
        }
    }

    #[test]
    fn derivative_classical_second_order() {
        let scheme =
            RLScheme::for_candidate(&candidate(2.0, |t| t * t), 1024, SchemeKind::L1).unwrap();
        for &t in &[0.25, 0.5, 0.75, 1.0] {
            assert_abs_diff_eq!(scheme.rl_derivative(t).unwrap(), 2.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn derivative_inverts_integral_on_smooth_data() {
        // D^α I^α f = f for f(t) = t: I^α t = t^{α+1}/Γ(α+2)·Γ(2)... as a
        // weighted candidate w = t³/Γ(α+2).
        let alpha = 1.5;
        let g = gamma(alpha + 2.0);
        let scheme = RLScheme::for_candidate(
            &candidate(alpha, move |t| t * t * t / g),
            DEFAULT_PANELS,
            SchemeKind::L1,
        )
        .unwrap();
        for &t in &[0.25, 0.5, 0.875] {
            assert_abs_diff_eq!(scheme.rl_derivative(t).unwrap(), t, epsilon = 1e-2);
        }
    }

    #[test]
    fn split_rejects_wrong_singularity() {
        // w = √t corresponds to u ~ t^{α−1.5}, outside the representable
        // singular family.
        let u = candidate(1.5, |t| t.sqrt());
        assert!(matches!(
            RLScheme::for_candidate(&u, DEFAULT_PANELS, SchemeKind::L1),
            Err(Error::SingularPartUnresolved { .. })
        ));
    }

    #[test]
    fn grid_mismatch_off_grid_point() {
        let scheme =
            RLScheme::for_candidate(&candidate(1.5, |t| t), 1024, SchemeKind::L1).unwrap();
        assert!(scheme.rl_derivative(0.1234567).is_err());
        assert!(scheme.rl_derivative(1.0 / 1024.0).is_err());
    }

    #[test]
    fn residual_zero_for_trivial_candidate() {
        let params = ProblemParams::new(1.5, 0.0);
        let u = candidate(1.5, |_| 0.0);
        let report = ode_residual(&u, &params, &|_, _| 0.0).unwrap();
        assert_eq!(report.max_interior, 0.0);
        assert_eq!(report.boundary_left, 0.0);
        assert_eq!(report.boundary_right, 0.0);
    }

    #[test]
    fn residual_of_manufactured_solution() {
        // u = −t^α solves D^α u + Γ(α+1) = 0 with u'(1) = −α.
        let alpha = 1.5;
        let params = ProblemParams::new(alpha, 0.0).with_boundary(0.0, -alpha);
        let u = candidate(alpha, |t| -t * t);
        let report = ode_residual(&u, &params, &|_, _| gamma(alpha + 1.0)).unwrap();
        assert!(report.max_interior <= 1e-2, "interior {}", report.max_interior);
        assert!(report.boundary_left <= 1e-12);
        assert!(report.boundary_right <= 1e-5, "right {}", report.boundary_right);
    }

    #[test]
    fn residual_shrinks_under_grid_refinement() {
        let alpha = 1.5;
        let params = ProblemParams::new(alpha, 0.0).with_boundary(0.0, -alpha);
        let u = candidate(alpha, |t| -t * t);
        let f = |_: f64, _: f64| gamma(alpha + 1.0);
        let coarse = ode_residual_with(&u, &params, &f, 1024, SchemeKind::L1).unwrap();
        let fine = ode_residual_with(&u, &params, &f, 2048, SchemeKind::L1).unwrap();
        assert!(
            coarse.max_interior / fine.max_interior >= 1.5,
            "ratio {}",
            coarse.max_interior / fine.max_interior
        );
    }
}
