//! Eigenvalue localization for the mixed, Dirichlet and subinterval problems.
//!
//! The sign of the Green's function is governed by the largest negative zero
//! λ₁* of E_{α,α−1}. Two companions matter for the comparison arguments: the
//! largest zero λ₁ of E_{α,α} (Dirichlet problem) and, for each interior
//! point t₀, the largest root of
//!
//! ```text
//! E_{α,α−1}(λ) E_{α,α−1}(λ t₀^α) = t₀ E_{α,α}(λ t₀^α) E_{α,α−2}(λ),
//! ```
//!
//! the characteristic equation of the problem restricted to (t₀, 1) with a
//! zero value at t₀ and zero slope at 1.
//!
//! All three characteristic functions are positive at λ = 0, so scanning
//! downward for the first sign change and refining yields the largest root.

use crate::error::{Error, Result};
use crate::mlf::{ml_deriv, ml_eval, MLArgs};
use serde::Serialize;

/// Scan step for the downward search.
const SCAN_STEP: f64 = 0.05;
/// Search window for the mixed and Dirichlet spectra.
const WINDOW_LO: f64 = -200.0;
/// Search window for the subinterval spectrum, in the scaled variable
/// ν = λ (1−t₀)^α.
const WINDOW_LO_SCALED: f64 = -250.0;

/// A located eigenvalue with its refinement bracket and diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct EigenResult {
    pub alpha: f64,
    pub value: f64,
    pub bracket: (f64, f64),
    pub residual: f64,
    pub iterations: usize,
}

pub(crate) fn check_order(alpha: f64) -> Result<()> {
    if !(alpha > 1.0 && alpha <= 2.0) {
        return Err(Error::InvalidParams(format!(
            "order must lie in (1, 2], got {alpha}"
        )));
    }
    Ok(())
}

/// Largest root of `f` below 0: scan downward from 0 in steps of `step`
/// until the first sign change, bisect, then polish with Newton when a
/// derivative is available.
fn largest_negative_root<F, D>(
    f: F,
    deriv: Option<D>,
    step: f64,
    window_lo: f64,
) -> Result<(f64, (f64, f64), f64, usize)>
where
    F: Fn(f64) -> Result<f64>,
    D: Fn(f64) -> Result<f64>,
{
    let mut hi = 0.0;
    let f0 = f(hi)?;
    if f0 == 0.0 {
        return Ok((0.0, (-step, step), 0.0, 0));
    }
    let sign0 = f0.signum();
    let mut lo;
    let mut f_lo;
    loop {
        lo = hi - step;
        if lo < window_lo {
            return Err(Error::RootNotFound {
                alpha: f64::NAN,
                t0: None,
                window_lo,
            });
        }
        f_lo = f(lo)?;
        if f_lo == 0.0 || f_lo.signum() != sign0 {
            break;
        }
        hi = lo;
    }

    let mut iterations = 0usize;
    let mut a = lo;
    let mut b = hi;
    let mut fa = f_lo;
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if (b - a) <= 1e-14 * mid.abs().max(1.0) {
            break;
        }
        let fm = f(mid)?;
        iterations += 1;
        if fm == 0.0 {
            a = mid;
            b = mid;
            break;
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }

    let mut value = 0.5 * (a + b);
    let mut best = f(value)?.abs();
    if let Some(df) = deriv {
        for _ in 0..4 {
            let fx = f(value)?;
            let dx = df(value)?;
            if dx == 0.0 {
                break;
            }
            let next = value - fx / dx;
            if !(a..=b).contains(&next) {
                break;
            }
            let fnext = f(next)?.abs();
            iterations += 1;
            if fnext < best {
                value = next;
                best = fnext;
            } else {
                break;
            }
        }
    }
    // Keep the reported value strictly inside the sign-change bracket.
    let value = value.clamp(a.min(b) + f64::MIN_POSITIVE, b.max(a) - f64::MIN_POSITIVE);
    Ok((value, (lo, hi), f(value)?.abs(), iterations))
}

/// Largest negative zero λ₁* of E_{α,α−1}: the principal eigenvalue of the
/// mixed problem and the sharp positivity threshold of its Green's function.
pub fn principal_mixed_eigenvalue(alpha: f64) -> Result<EigenResult> {
    check_order(alpha)?;
    let f = |lambda: f64| ml_eval(MLArgs::new(alpha, alpha - 1.0, lambda));
    let d = |lambda: f64| ml_deriv(MLArgs::new(alpha, alpha - 1.0, lambda));
    let (value, bracket, residual, iterations) = largest_negative_root(f, Some(d), SCAN_STEP, WINDOW_LO)
        .map_err(|e| tag_alpha(e, alpha, None))?;
    Ok(EigenResult {
        alpha,
        value,
        bracket,
        residual,
        iterations,
    })
}

/// Largest negative zero λ₁ of E_{α,α}: the principal Dirichlet eigenvalue.
pub fn principal_dirichlet_eigenvalue(alpha: f64) -> Result<EigenResult> {
    check_order(alpha)?;
    let f = |lambda: f64| ml_eval(MLArgs::new(alpha, alpha, lambda));
    let d = |lambda: f64| ml_deriv(MLArgs::new(alpha, alpha, lambda));
    let (value, bracket, residual, iterations) = largest_negative_root(f, Some(d), SCAN_STEP, WINDOW_LO)
        .map_err(|e| tag_alpha(e, alpha, None))?;
    Ok(EigenResult {
        alpha,
        value,
        bracket,
        residual,
        iterations,
    })
}

fn subinterval_characteristic(alpha: f64, t0: f64, lambda: f64) -> Result<f64> {
    let ta = t0.powf(alpha);
    let lhs = ml_eval(MLArgs::new(alpha, alpha - 1.0, lambda))?
        * ml_eval(MLArgs::new(alpha, alpha - 1.0, lambda * ta))?;
    let rhs = t0
        * ml_eval(MLArgs::new(alpha, alpha, lambda * ta))?
        * ml_eval(MLArgs::new(alpha, alpha - 2.0, lambda))?;
    Ok(lhs - rhs)
}

fn subinterval_characteristic_deriv(alpha: f64, t0: f64, lambda: f64) -> Result<f64> {
    let ta = t0.powf(alpha);
    let e1 = ml_eval(MLArgs::new(alpha, alpha - 1.0, lambda))?;
    let e1t = ml_eval(MLArgs::new(alpha, alpha - 1.0, lambda * ta))?;
    let e2t = ml_eval(MLArgs::new(alpha, alpha, lambda * ta))?;
    let e3 = ml_eval(MLArgs::new(alpha, alpha - 2.0, lambda))?;
    let d1 = ml_deriv(MLArgs::new(alpha, alpha - 1.0, lambda))?;
    let d1t = ml_deriv(MLArgs::new(alpha, alpha - 1.0, lambda * ta))?;
    let d2t = ml_deriv(MLArgs::new(alpha, alpha, lambda * ta))?;
    let d3 = ml_deriv(MLArgs::new(alpha, alpha - 2.0, lambda))?;
    Ok(d1 * e1t + e1 * d1t * ta - t0 * (d2t * ta * e3 + e2t * d3))
}

/// Largest real root of the subinterval characteristic equation for the
/// problem on (t₀, 1). The search runs in the scaled variable
/// ν = λ (1−t₀)^α, where the first root stays O(1) uniformly in t₀.
pub fn subinterval_eigenvalue(alpha: f64, t0: f64) -> Result<EigenResult> {
    check_order(alpha)?;
    if !(t0 > 0.0 && t0 < 1.0) {
        return Err(Error::InvalidParams(format!(
            "subinterval point must lie in (0, 1), got {t0}"
        )));
    }
    let scale = (1.0 - t0).powf(alpha);
    let f = |nu: f64| subinterval_characteristic(alpha, t0, nu / scale);
    let d = |nu: f64| subinterval_characteristic_deriv(alpha, t0, nu / scale).map(|v| v / scale);
    let (nu, bracket, residual, iterations) =
        largest_negative_root(f, Some(d), SCAN_STEP, WINDOW_LO_SCALED)
            .map_err(|e| tag_alpha(e, alpha, Some(t0)))?;
    Ok(EigenResult {
        alpha,
        value: nu / scale,
        bracket: (bracket.0 / scale, bracket.1 / scale),
        residual,
        iterations,
    })
}

/// All zeros of E_{α,α−1} in (lo, 0), largest first.
pub fn mixed_eigenvalues_down_to(alpha: f64, lo: f64) -> Result<Vec<f64>> {
    check_order(alpha)?;
    let f = |lambda: f64| ml_eval(MLArgs::new(alpha, alpha - 1.0, lambda));
    let mut roots = Vec::new();
    let mut hi = 0.0;
    let mut f_hi = f(hi)?;
    let mut x = hi;
    while x - SCAN_STEP >= lo.min(-SCAN_STEP) {
        x -= SCAN_STEP;
        let fx = f(x)?;
        if fx == 0.0 || fx.signum() != f_hi.signum() {
            let (mut a, mut b, mut fa) = (x, hi, fx);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if (b - a) <= 1e-13 * mid.abs().max(1.0) {
                    break;
                }
                let fm = f(mid)?;
                if fm == 0.0 {
                    a = mid;
                    b = mid;
                    break;
                }
                if fm.signum() == fa.signum() {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            roots.push(0.5 * (a + b));
        }
        hi = x;
        f_hi = fx;
    }
    Ok(roots)
}

fn tag_alpha(e: Error, alpha: f64, t0: Option<f64>) -> Error {
    match e {
        Error::RootNotFound { window_lo, .. } => Error::RootNotFound {
            alpha,
            t0,
            window_lo,
        },
        other => other,
    }
}

/// One row of the eigenvalue scan dataset: the principal eigenvalues at a
/// given order, plus the subinterval eigenvalue when a t₀ is present.
#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    pub alpha: f64,
    pub t0: Option<f64>,
    pub lambda_bar_1: Option<f64>,
    pub lambda_star_1: f64,
    pub lambda_1: f64,
}

/// Tabulate (α, t₀, λ̄₁, λ₁*, λ₁) over the product of the two grids. An
/// empty t₀ grid yields one row per α with the subinterval columns empty.
pub fn eigen_scan(alpha_grid: &[f64], t0_grid: &[f64]) -> Result<Vec<ScanRow>> {
    if alpha_grid.is_empty() {
        return Err(Error::InvalidParams("empty order grid".into()));
    }
    let mut rows = Vec::new();
    for &alpha in alpha_grid {
        let star = principal_mixed_eigenvalue(alpha)?.value;
        let dir = principal_dirichlet_eigenvalue(alpha)?.value;
        if t0_grid.is_empty() {
            rows.push(ScanRow {
                alpha,
                t0: None,
                lambda_bar_1: None,
                lambda_star_1: star,
                lambda_1: dir,
            });
        } else {
            for &t0 in t0_grid {
                let bar = subinterval_eigenvalue(alpha, t0)?.value;
                rows.push(ScanRow {
                    alpha,
                    t0: Some(t0),
                    lambda_bar_1: Some(bar),
                    lambda_star_1: star,
                    lambda_1: dir,
                });
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn mixed_eigenvalue_reference_values() {
        assert_abs_diff_eq!(
            principal_mixed_eigenvalue(1.5).unwrap().value,
            -0.697078,
            epsilon = 1e-5
        );
        assert_abs_diff_eq!(
            principal_mixed_eigenvalue(1.1).unwrap().value,
            -0.104812,
            epsilon = 1e-5
        );
    }

    #[test]
    fn mixed_eigenvalue_closed_form_at_two() {
        // E_{2,1}(λ) = cos√(−λ): first zero at −π²/4.
        let r = principal_mixed_eigenvalue(2.0).unwrap();
        assert_abs_diff_eq!(r.value, -PI * PI / 4.0, epsilon = 1e-10);
        assert!(r.residual <= 1e-12);
        assert!(r.bracket.0 < r.value && r.value < r.bracket.1);
    }

    #[test]
    fn dirichlet_eigenvalue_closed_form_at_two() {
        let r = principal_dirichlet_eigenvalue(2.0).unwrap();
        assert_abs_diff_eq!(r.value, -PI * PI, epsilon = 1e-10);
        assert!(r.residual <= 1e-12);
    }

    #[test]
    fn dirichlet_below_mixed_at_19() {
        let dir = principal_dirichlet_eigenvalue(1.9).unwrap().value;
        assert!(dir < -1.9461);
    }

    /// Brute-force sign scan used as an independent localization oracle.
    fn dense_scan_root<F: Fn(f64) -> f64>(f: F, step: f64, lo: f64) -> f64 {
        let mut hi = 0.0;
        let mut fh = f(hi);
        loop {
            let x = hi - step;
            assert!(x >= lo, "oracle found no sign change");
            let fx = f(x);
            if fx == 0.0 || fx.signum() != fh.signum() {
                return 0.5 * (x + hi);
            }
            hi = x;
            fh = fx;
        }
    }

    #[test]
    fn dirichlet_matches_dense_scan_oracle() {
        let oracle = dense_scan_root(
            |l| ml_eval(MLArgs::new(1.5, 1.5, l)).unwrap(),
            1e-4,
            -20.0,
        );
        let r = principal_dirichlet_eigenvalue(1.5).unwrap();
        assert_abs_diff_eq!(r.value, oracle, epsilon = 1e-4);
    }

    #[test]
    fn subinterval_closed_forms_at_two() {
        // At α = 2 the problem on (t₀,1) is u'' = λu, u(t₀) = u'(1) = 0,
        // with first eigenvalue −π²/(4(1−t₀)²).
        let r = subinterval_eigenvalue(2.0, 0.5).unwrap();
        assert_abs_diff_eq!(r.value, -PI * PI, epsilon = 1e-8);
        let r = subinterval_eigenvalue(2.0, 0.75).unwrap();
        assert_abs_diff_eq!(r.value, -4.0 * PI * PI, epsilon = 1e-7);
    }

    #[test]
    fn subinterval_matches_dense_scan_oracle() {
        let oracle = dense_scan_root(
            |l| subinterval_characteristic(1.6, 0.3, l).unwrap(),
            1e-3,
            -60.0,
        );
        let r = subinterval_eigenvalue(1.6, 0.3).unwrap();
        assert_abs_diff_eq!(r.value, oracle, epsilon = 1e-3);
        assert!(r.residual <= 1e-12);
    }

    #[test]
    fn rejects_orders_outside_range() {
        assert!(principal_mixed_eigenvalue(1.0).is_err());
        assert!(principal_mixed_eigenvalue(2.5).is_err());
        assert!(subinterval_eigenvalue(1.5, 0.0).is_err());
        assert!(subinterval_eigenvalue(1.5, 1.0).is_err());
    }

    #[test]
    fn scan_row_closed_forms() {
        let rows = eigen_scan(&[2.0], &[0.5]).unwrap();
        assert_eq!(rows.len(), 1);
        assert_abs_diff_eq!(rows[0].lambda_bar_1.unwrap(), -PI * PI, epsilon = 1e-8);
        assert_abs_diff_eq!(rows[0].lambda_star_1, -PI * PI / 4.0, epsilon = 1e-10);
        assert_abs_diff_eq!(rows[0].lambda_1, -PI * PI, epsilon = 1e-10);
    }

    #[test]
    fn scan_without_t0_leaves_subinterval_empty() {
        let alphas: Vec<f64> = (1..=10).map(|k| 1.0 + k as f64 / 10.0).collect();
        let rows = eigen_scan(&alphas, &[]).unwrap();
        assert_eq!(rows.len(), 10);
        assert!(rows.iter().all(|r| r.t0.is_none() && r.lambda_bar_1.is_none()));
        let reference = [
            -0.104812, -0.221832, -0.355588, -0.511676, -0.697078, -0.920556, -1.19319,
            -1.52904, -1.9461, -2.4674,
        ];
        for (row, want) in rows.iter().zip(reference) {
            assert!(
                (row.lambda_star_1 - want).abs() <= 1e-4,
                "alpha {}: {} vs {}",
                row.alpha,
                row.lambda_star_1,
                want
            );
        }
    }

    #[test]
    fn ordering_on_alpha_grid() {
        for k in 1..=20 {
            let alpha = 1.0 + 0.05 * k as f64;
            let star = principal_mixed_eigenvalue(alpha).unwrap().value;
            let dir = principal_dirichlet_eigenvalue(alpha).unwrap().value;
            assert!(
                dir < star && star < 0.0,
                "ordering failed at alpha={alpha}: dir={dir}, star={star}"
            );
        }
    }

    #[test]
    fn subinterval_below_mixed_on_moderate_grid() {
        for &alpha in &[1.2, 1.5, 1.8, 2.0] {
            let star = principal_mixed_eigenvalue(alpha).unwrap().value;
            for k in 1..=9 {
                let t0 = 0.1 * k as f64;
                let bar = subinterval_eigenvalue(alpha, t0).unwrap().value;
                assert!(
                    bar < star,
                    "ordering failed at alpha={alpha}, t0={t0}: bar={bar}, star={star}"
                );
            }
        }
    }

    #[test]
    fn refinement_stable_under_halved_scan_step() {
        for &alpha in &[1.3, 1.7, 2.0] {
            let f = |l: f64| ml_eval(MLArgs::new(alpha, alpha - 1.0, l));
            let d = |l: f64| ml_deriv(MLArgs::new(alpha, alpha - 1.0, l));
            let coarse = largest_negative_root(f, Some(d), SCAN_STEP, WINDOW_LO).unwrap();
            let fine = largest_negative_root(f, Some(d), SCAN_STEP / 2.0, WINDOW_LO).unwrap();
            let width = coarse.1 .1 - coarse.1 .0;
            assert!((coarse.0 - fine.0).abs() <= width);
        }
    }

    #[test]
    fn residuals_small_on_table_range() {
        for k in 1..=10 {
            let alpha = 1.0 + k as f64 / 10.0;
            assert!(principal_mixed_eigenvalue(alpha).unwrap().residual <= 1e-12);
            assert!(principal_dirichlet_eigenvalue(alpha).unwrap().residual <= 1e-12);
        }
    }

    #[test]
    fn mixed_roots_down_to_finds_first_two() {
        // At α = 2: cos√(−λ) has zeros at −(π/2 + kπ)².
        let roots = mixed_eigenvalues_down_to(2.0, -30.0).unwrap();
        assert!(roots.len() >= 2);
        assert_abs_diff_eq!(roots[0], -PI * PI / 4.0, epsilon = 1e-9);
        assert_abs_diff_eq!(roots[1], -(1.5 * PI) * (1.5 * PI), epsilon = 1e-9);
    }
}
