//! Two-parameter Mittag-Leffler function E_{α,β}(x) and reciprocal gamma.
//!
//! E_{α,β}(x) = Σ_{k≥0} x^k / Γ(αk + β) is entire in x for α > 0. The series
//! is summed directly with compensated (Kahan-Babuška) accumulation; the
//! second parameter β may be any real number because every term is written
//! against 1/Γ, which is entire.

use crate::error::{Error, Result};

const MAX_TERMS: usize = 10_000;

/// Arguments of a two-parameter Mittag-Leffler evaluation.
///
/// `alpha` must be positive; `beta` and `x` may be any real numbers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MLArgs {
    pub alpha: f64,
    pub beta: f64,
    pub x: f64,
}

impl MLArgs {
    pub fn new(alpha: f64, beta: f64, x: f64) -> Self {
        Self { alpha, beta, x }
    }
}

// Lanczos coefficients, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_C: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function for x >= 0.5 by the Lanczos approximation.
fn gamma_lanczos(x: f64) -> f64 {
    debug_assert!(x >= 0.5);
    let z = x - 1.0;
    let mut acc = LANCZOS_C[0];
    for (i, c) in LANCZOS_C.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * std::f64::consts::PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * acc
}

/// sin(πx) with the argument reduced against the nearest integer first,
/// so the result stays accurate near integer x.
fn sin_pi(x: f64) -> f64 {
    let n = x.round();
    let r = x - n;
    let s = (std::f64::consts::PI * r).sin();
    if (n as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

/// Factorials (n−1)! for integer arguments n = 1..=170 of Γ.
fn factorial_table() -> &'static [f64; 170] {
    use std::sync::OnceLock;
    static TABLE: OnceLock<[f64; 170]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [1.0f64; 170];
        for n in 1..170 {
            t[n] = t[n - 1] * n as f64;
        }
        t
    })
}

/// Reciprocal gamma function 1/Γ(x), total on the real line.
///
/// Returns exactly 0 at the poles of Γ (non-positive integers), uses exact
/// factorials at positive integer arguments, and is smooth everywhere else.
/// Large positive arguments underflow cleanly to 0.
pub fn recip_gamma(x: f64) -> f64 {
    if x == x.floor() {
        if x <= 0.0 {
            return 0.0;
        }
        if x <= 170.0 {
            return 1.0 / factorial_table()[x as usize - 1];
        }
        return 0.0;
    }
    if x >= 0.5 {
        let g = gamma_lanczos(x);
        if g.is_infinite() {
            return 0.0;
        }
        return 1.0 / g;
    }
    // Reflection: 1/Γ(x) = sin(πx) Γ(1−x) / π.
    sin_pi(x) * gamma_lanczos(1.0 - x) / std::f64::consts::PI
}

/// Gamma function on the real line (poles return ±infinity).
pub fn gamma(x: f64) -> f64 {
    let r = recip_gamma(x);
    if r == 0.0 {
        f64::INFINITY
    } else {
        1.0 / r
    }
}

/// Compensated series accumulator (Kahan-Babuška-Neumaier).
#[derive(Default)]
struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

fn check_alpha(args: &MLArgs) -> Result<()> {
    if args.alpha <= 0.0 || !args.alpha.is_finite() || args.alpha.is_nan() {
        return Err(Error::InvalidParams(format!(
            "mittag-leffler order must be positive, got {}",
            args.alpha
        )));
    }
    Ok(())
}

/// Series evaluation returning the sum together with Σ|term|, the scale that
/// bounds the achievable absolute accuracy of the alternating sum.
fn ml_series(args: &MLArgs, derivative: bool) -> Result<(f64, f64)> {
    check_alpha(args)?;
    let MLArgs { alpha, beta, x } = *args;
    let mut acc = Compensated::default();
    let mut magnitude = 0.0f64;
    let mut xp = 1.0f64; // x^k, or x^{k-1} on the derivative path
    let mut arg = if derivative { alpha + beta } else { beta };
    let mut small_streak = 0usize;
    for k in 0..MAX_TERMS {
        let coeff = recip_gamma(arg);
        let term = if derivative {
            (k + 1) as f64 * xp * coeff
        } else {
            xp * coeff
        };
        acc.add(term);
        magnitude += term.abs();
        if term.abs() <= f64::EPSILON * acc.value().abs().max(f64::MIN_POSITIVE) {
            small_streak += 1;
            if small_streak >= 3 {
                let value = acc.value();
                if !value.is_finite() {
                    return Err(Error::NonConvergence { alpha, beta, x });
                }
                return Ok((value, magnitude));
            }
        } else {
            small_streak = 0;
        }
        xp *= x;
        arg += alpha;
        if !xp.is_finite() {
            break;
        }
    }
    Err(Error::NonConvergence { alpha, beta, x })
}

/// Two-parameter Mittag-Leffler function E_{α,β}(x).
pub fn ml_eval(args: MLArgs) -> Result<f64> {
    ml_series(&args, false).map(|(v, _)| v)
}

/// E_{α,β}(x) together with Σ|term|. The ratio of the two is the condition
/// number of the summation; values with Σ|term| ≫ |E| carry correspondingly
/// fewer correct digits.
pub fn ml_eval_with_cond(args: MLArgs) -> Result<(f64, f64)> {
    ml_series(&args, false)
}

/// Derivative d/dx E_{α,β}(x) = Σ_{k≥1} k x^{k−1} / Γ(αk + β).
pub fn ml_deriv(args: MLArgs) -> Result<f64> {
    ml_series(&args, true).map(|(v, _)| v)
}

/// Shorthand used throughout the kernel modules.
pub(crate) fn ml(alpha: f64, beta: f64, x: f64) -> Result<f64> {
    ml_eval(MLArgs::new(alpha, beta, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn recip_gamma_reference_points() {
        assert_abs_diff_eq!(recip_gamma(1.0), 1.0, epsilon = 1e-14);
        assert_eq!(recip_gamma(0.0), 0.0);
        assert_eq!(recip_gamma(-1.0), 0.0);
        assert_eq!(recip_gamma(-7.0), 0.0);
        assert_abs_diff_eq!(
            recip_gamma(0.5),
            1.0 / std::f64::consts::PI.sqrt(),
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(recip_gamma(5.0), 1.0 / 24.0, epsilon = 1e-14);
        // Γ(-0.5) = -2√π
        assert_abs_diff_eq!(
            recip_gamma(-0.5),
            -1.0 / (2.0 * std::f64::consts::PI.sqrt()),
            epsilon = 1e-13
        );
        // Underflow side: Γ(200) overflows f64, its reciprocal is 0.
        assert_eq!(recip_gamma(200.0), 0.0);
    }

    #[test]
    fn recip_gamma_smooth_near_poles() {
        // 1/Γ has a simple zero at -n with slope (-1)^n n!.
        for n in 0..4i32 {
            let h = 1e-7;
            let slope = (recip_gamma(-n as f64 + h) - recip_gamma(-n as f64 - h)) / (2.0 * h);
            let expected = (-1.0f64).powi(n) * gamma(n as f64 + 1.0);
            assert_abs_diff_eq!(slope, expected, epsilon = 1e-5 * expected.abs());
        }
    }

    #[test]
    fn ml_matches_exponential() {
        for &x in &[-20.0, -3.0, -1.0, 0.0, 0.5, 1.0, 4.0, 10.0] {
            let e = ml(1.0, 1.0, x).unwrap();
            assert!(
                (e - x.exp()).abs() <= 1e-10 * x.abs().exp(),
                "E_(1,1)({x}) = {e} vs {}",
                x.exp()
            );
        }
    }

    #[test]
    fn ml_trig_closed_forms() {
        // E_{2,1}(-y) = cos√y, zero at y = (π/2)².
        let y = std::f64::consts::PI.powi(2) / 4.0;
        assert_abs_diff_eq!(ml(2.0, 1.0, -y).unwrap(), 0.0, epsilon = 1e-13);
        for k in 0..=20 {
            let y = 5.0 * k as f64;
            assert_abs_diff_eq!(ml(2.0, 1.0, -y).unwrap(), y.sqrt().cos(), epsilon = 1e-10);
        }
        // E_{2,2}(-y) = sin(√y)/√y, zero at y = π².
        assert_abs_diff_eq!(
            ml(2.0, 2.0, -std::f64::consts::PI.powi(2)).unwrap(),
            0.0,
            epsilon = 1e-13
        );
    }

    #[test]
    fn ml_at_zero_is_first_term() {
        for &(a, b) in &[(1.7, 0.7), (1.05, -0.9), (2.0, 2.0), (1.3, 0.0), (1.9, -0.1)] {
            assert_eq!(ml(a, b, 0.0).unwrap(), recip_gamma(b));
        }
    }

    #[test]
    fn ml_rejects_nonpositive_order() {
        assert!(ml(0.0, 1.0, 1.0).is_err());
        assert!(ml(-1.5, 1.0, 1.0).is_err());
    }

    #[test]
    fn ml_rejects_overflowing_arguments() {
        assert!(matches!(
            ml(1.0, 1.0, 800.0),
            Err(Error::NonConvergence { .. })
        ));
        assert!(matches!(
            ml(1.01, 1.0, 1e300),
            Err(Error::NonConvergence { .. })
        ));
    }

    #[test]
    fn ml_deriv_reference_points() {
        // Derivative of exp at 0.
        assert_abs_diff_eq!(ml_deriv(MLArgs::new(1.0, 1.0, 0.0)).unwrap(), 1.0, epsilon = 1e-14);
        // k=1 series term of E_{2,1}: 1/Γ(3) = 1/2.
        assert_abs_diff_eq!(ml_deriv(MLArgs::new(2.0, 1.0, 0.0)).unwrap(), 0.5, epsilon = 1e-14);
    }

    #[test]
    fn ml_deriv_matches_central_difference() {
        let h = 1e-6;
        let d = ml_deriv(MLArgs::new(1.5, 0.5, -1.0)).unwrap();
        let fd = (ml(1.5, 0.5, -1.0 + h).unwrap() - ml(1.5, 0.5, -1.0 - h).unwrap()) / (2.0 * h);
        assert_abs_diff_eq!(d, fd, epsilon = 1e-6);
    }

    fn fourth_order_diff(a: f64, b: f64, x: f64, h: f64) -> f64 {
        (-ml(a, b, x + 2.0 * h).unwrap() + 8.0 * ml(a, b, x + h).unwrap()
            - 8.0 * ml(a, b, x - h).unwrap()
            + ml(a, b, x - 2.0 * h).unwrap())
            / (12.0 * h)
    }

    #[test]
    fn ml_deriv_matches_fourth_order_difference_on_grid() {
        // The difference quotient amplifies the summation noise of ml_eval
        // by 1.5/h, so the tolerance carries the conditioning scale of the
        // evaluation next to the stated 1e-6.
        let h = 1e-3;
        let mut rng = crate::rng::SplitMix::new(7);
        for _ in 0..200 {
            let a = 1.0 + rng.uniform() * 1.0;
            let b = -1.0 + rng.uniform() * 3.0;
            let x = -30.0 + rng.uniform() * 35.0;
            let d = ml_deriv(MLArgs::new(a, b, x)).unwrap();
            let fd = fourth_order_diff(a, b, x, h);
            let (_, cond) = ml_eval_with_cond(MLArgs::new(a, b, x)).unwrap();
            let tol = 1e-6 * (1.0 + d.abs()) + 3.0 * f64::EPSILON * cond / h;
            assert!(
                (d - fd).abs() <= tol,
                "deriv mismatch at ({a},{b},{x}): {d} vs {fd}, tol {tol:e}"
            );
        }
    }

    #[test]
    fn ml_recurrence_on_random_grid() {
        // E_{α,β}(x) = x E_{α,α+β}(x) + 1/Γ(β). Direct f64 summation limits
        // the achievable residual to roughly eps * Σ|term|, so the tolerance
        // carries that conditioning scale.
        let mut rng = crate::rng::SplitMix::new(11);
        for _ in 0..300 {
            let a = 1.0 + rng.uniform();
            let b = -1.0 + 3.0 * rng.uniform();
            let x = -30.0 + 35.0 * rng.uniform();
            let (lhs, cond) = ml_eval_with_cond(MLArgs::new(a, b, x)).unwrap();
            let rhs = x * ml(a, a + b, x).unwrap() + recip_gamma(b);
            let tol = 1e-10f64.max(40.0 * f64::EPSILON * cond);
            assert!(
                (lhs - rhs).abs() <= tol,
                "recurrence residual {:e} > {:e} at ({a},{b},{x})",
                (lhs - rhs).abs(),
                tol
            );
        }
    }

    #[test]
    fn ml_recurrence_tight_on_moderate_arguments() {
        let mut rng = crate::rng::SplitMix::new(13);
        for _ in 0..300 {
            let a = 1.2 + 0.8 * rng.uniform();
            let b = -1.0 + 3.0 * rng.uniform();
            let x = -15.0 + 20.0 * rng.uniform();
            let lhs = ml(a, b, x).unwrap();
            let rhs = x * ml(a, a + b, x).unwrap() + recip_gamma(b);
            assert!(
                (lhs - rhs).abs() <= 1e-10,
                "residual {:e} at ({a},{b},{x})",
                (lhs - rhs).abs()
            );
        }
    }
}
