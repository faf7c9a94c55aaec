//! Quadrature against the singular weights of the solution formulas.
//!
//! Every integral in the solver has one of three shapes:
//!
//! ```text
//! ∫₀¹ g(s) (1−s)^{α−2} ds          (right-endpoint weight, α−2 ∈ (−1,0])
//! ∫₀ᵗ g(s) (t−s)^{α−1} ds          (vanishing-kernel factor, α−1 ∈ (0,1])
//! ∫₀ᵗ g(s) (t−s)^{α−2} ds          (derivative kernel)
//! ```
//!
//! Each is handled by a Gauss-Jacobi rule with the weight factored out, so
//! the remaining integrand is smooth and the rules converge spectrally.
//! Nodes and weights come from the Golub-Welsch eigenproblem, solved with an
//! implicit-shift QL iteration on the symmetric tridiagonal Jacobi matrix.
//! A graded composite Gauss-Legendre rule is kept as a slower fallback.

use crate::error::{Error, Result};
use crate::greens::GreenKernel;
use crate::mlf::{gamma, ml};
use serde::Serialize;

/// How a rule treats the singular factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RuleKind {
    /// Weight absorbed into Gauss-Jacobi nodes and weights.
    JacobiWeighted,
    /// Composite Gauss-Legendre on a mesh graded toward the singularity.
    GradedComposite,
}

/// Quadrature rule on (0,1) with strictly increasing nodes.
#[derive(Debug, Clone, Serialize)]
pub struct QuadRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub kind: RuleKind,
}

/// Eigenvalues of a symmetric tridiagonal matrix together with the first
/// component of each normalized eigenvector (implicit QL with shifts).
///
/// `diag` holds the diagonal, `off[i]` couples rows i and i+1. On return
/// `diag` holds the eigenvalues and `first` the first components.
fn tridiag_eigen(diag: &mut [f64], off: &mut [f64], first: &mut [f64]) -> Result<()> {
    let n = diag.len();
    first.iter_mut().for_each(|v| *v = 0.0);
    first[0] = 1.0;
    if n == 1 {
        return Ok(());
    }
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(Error::ToleranceNotMet {
                    estimate: off[l].abs(),
                    tol: 0.0,
                });
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.abs().copysign(g));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                f = first[i + 1];
                first[i + 1] = s * first[i] + c * f;
                first[i] = c * first[i] - s * f;
            }
            if underflow {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}

/// Gauss-Jacobi nodes and weights on \[−1,1\] for the weight
/// (1−x)^a (1+x)^b, by the Golub-Welsch algorithm.
fn gauss_jacobi(n: usize, a: f64, b: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if n < 2 {
        return Err(Error::InvalidParams("rule needs at least 2 nodes".into()));
    }
    if a <= -1.0 || b <= -1.0 {
        return Err(Error::InvalidParams(format!(
            "jacobi exponents must exceed -1, got ({a}, {b})"
        )));
    }
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    diag[0] = (b - a) / (a + b + 2.0);
    for k in 1..n {
        let kf = k as f64;
        let denom = 2.0 * kf + a + b;
        diag[k] = (b * b - a * a) / (denom * (denom + 2.0));
        off[k - 1] = 2.0 / denom
            * (kf * (kf + a) * (kf + b) * (kf + a + b) / ((denom + 1.0) * (denom - 1.0))).sqrt();
    }
    let mu0 = 2.0f64.powf(a + b + 1.0) * gamma(a + 1.0) * gamma(b + 1.0) / gamma(a + b + 2.0);
    let mut first = vec![0.0; n];
    tridiag_eigen(&mut diag, &mut off, &mut first)?;
    let mut pairs: Vec<(f64, f64)> = diag
        .iter()
        .zip(&first)
        .map(|(&x, &q)| (x, mu0 * q * q))
        .collect();
    pairs.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
    Ok(pairs.into_iter().unzip())
}

impl QuadRule {
    /// Rule for ∫₀¹ g(s) (1−s)^{exponent} ds: weight singular at s = 1.
    pub fn jacobi_right(n: usize, exponent: f64) -> Result<Self> {
        let (x, w) = gauss_jacobi(n, exponent, 0.0)?;
        let scale = 0.5f64.powf(exponent + 1.0);
        Ok(Self {
            nodes: x.iter().map(|&v| 0.5 * (1.0 + v)).collect(),
            weights: w.iter().map(|&v| v * scale).collect(),
            kind: RuleKind::JacobiWeighted,
        })
    }

    /// Rule for ∫₀¹ g(σ) σ^{exponent} dσ: weight singular at σ = 0.
    pub fn jacobi_left(n: usize, exponent: f64) -> Result<Self> {
        let (x, w) = gauss_jacobi(n, exponent, 0.0)?;
        let scale = 0.5f64.powf(exponent + 1.0);
        let mut nodes: Vec<f64> = x.iter().map(|&v| 0.5 * (1.0 - v)).collect();
        let mut weights: Vec<f64> = w.iter().map(|&v| v * scale).collect();
        nodes.reverse();
        weights.reverse();
        Ok(Self {
            nodes,
            weights,
            kind: RuleKind::JacobiWeighted,
        })
    }

    /// Plain Gauss-Legendre on (0,1).
    pub fn legendre(n: usize) -> Result<Self> {
        let (x, w) = gauss_jacobi(n, 0.0, 0.0)?;
        Ok(Self {
            nodes: x.iter().map(|&v| 0.5 * (1.0 + v)).collect(),
            weights: w.iter().map(|&v| 0.5 * v).collect(),
            kind: RuleKind::JacobiWeighted,
        })
    }

    /// Apply the rule to a smooth integrand (the weight is already folded
    /// into the weights).
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Default node count per rule.
pub const DEFAULT_NODES: usize = 64;

/// ∫₀¹ f(s) (1−s)^{α−2} ds with an n vs 2n error estimate.
///
/// The returned pair is (value, estimate); the estimate is the difference
/// between the two refinements. Fails with `ToleranceNotMet` when the
/// estimate exceeds `tol` scaled by the value.
pub fn integrate_weighted(
    f: impl Fn(f64) -> f64,
    alpha: f64,
    nodes: usize,
    tol: f64,
) -> Result<(f64, f64)> {
    crate::spectrum::check_order(alpha)?;
    let coarse = QuadRule::jacobi_right(nodes, alpha - 2.0)?.apply(&f);
    let fine = QuadRule::jacobi_right(2 * nodes, alpha - 2.0)?.apply(&f);
    let estimate = (coarse - fine).abs();
    if estimate > tol * fine.abs().max(1.0) {
        return Err(Error::ToleranceNotMet { estimate, tol });
    }
    Ok((fine, estimate))
}

/// Composite Gauss-Legendre on a geometrically graded mesh toward s = 1,
/// for the same integral as [`integrate_weighted`]. Kept as an independent
/// route through the singular weight.
pub fn integrate_graded(f: impl Fn(f64) -> f64, alpha: f64, levels: usize) -> Result<f64> {
    crate::spectrum::check_order(alpha)?;
    let rule = QuadRule::legendre(16)?;
    let mut acc = 0.0;
    let mut left = 0.0f64;
    for k in 0..levels {
        let right = 1.0 - 0.5f64.powi(k as i32 + 1);
        let h = right - left;
        acc += rule.apply(|x| {
            let s = left + h * x;
            f(s) * (1.0 - s).powf(alpha - 2.0)
        }) * h;
        left = right;
    }
    // Tail [left, 1): bound the remainder with f frozen at the panel edge.
    acc += f(left) * (1.0 - left).powf(alpha - 1.0) / (alpha - 1.0);
    Ok(acc)
}

/// The set of rules a Green's-operator application needs, built once per
/// order α.
#[derive(Debug, Clone)]
pub struct QuadSet {
    pub alpha: f64,
    /// Weight (1−s)^{α−2} on (0,1), coarse and fine.
    pub right: (QuadRule, QuadRule),
    /// Weight σ^{α−1} on (0,1).
    pub left_kernel: QuadRule,
    /// Weight σ^{α−2} on (0,1).
    pub left_deriv: QuadRule,
}

impl QuadSet {
    pub fn new(alpha: f64, nodes: usize) -> Result<Self> {
        crate::spectrum::check_order(alpha)?;
        Ok(Self {
            alpha,
            right: (
                QuadRule::jacobi_right(nodes, alpha - 2.0)?,
                QuadRule::jacobi_right(2 * nodes, alpha - 2.0)?,
            ),
            left_kernel: QuadRule::jacobi_left(nodes, alpha - 1.0)?,
            left_deriv: QuadRule::jacobi_left(nodes, alpha - 2.0)?,
        })
    }
}

/// The integral operator u(t) = ∫₀¹ G(t,s) y(s) ds, split as
///
/// ```text
/// u(t) = t^{α−1} E_{α,α}(λt^α)/E_{α,α−1}(λ) · I₁[y] − I₂[y](t),
/// I₁[y]    = ∫₀¹ (1−s)^{α−2} E_{α,α−1}(λ(1−s)^α) y(s) ds,
/// I₂[y](t) = t^α ∫₀¹ σ^{α−1} E_{α,α}(λ(tσ)^α) y(t(1−σ)) dσ,
/// ```
///
/// so each factor with a singularity or a kink is absorbed by the matching
/// Jacobi rule.
pub struct GreenOperator<'a> {
    pub kernel: &'a GreenKernel,
    pub quad: &'a QuadSet,
    /// E_{α,α−1}(λ(1−s)^α) at the right-rule nodes (coarse, fine).
    e_right: (Vec<f64>, Vec<f64>),
}

impl<'a> GreenOperator<'a> {
    pub fn new(kernel: &'a GreenKernel, quad: &'a QuadSet) -> Result<Self> {
        let a = kernel.alpha;
        let lam = kernel.lambda;
        let col = |s: f64| ml(a, a - 1.0, lam * (1.0 - s).powf(a));
        let coarse = quad
            .right
            .0
            .nodes
            .iter()
            .map(|&s| col(s))
            .collect::<Result<Vec<_>>>()?;
        let fine = quad
            .right
            .1
            .nodes
            .iter()
            .map(|&s| col(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            kernel,
            quad,
            e_right: (coarse, fine),
        })
    }

    /// I₁\[y\] with an n vs 2n error estimate.
    pub fn outer_integral(&self, y: &dyn Fn(f64) -> f64) -> (f64, f64) {
        let sum = |rule: &QuadRule, es: &[f64]| -> f64 {
            rule.nodes
                .iter()
                .zip(&rule.weights)
                .zip(es)
                .map(|((&s, &w), &e)| w * e * y(s))
                .sum()
        };
        let coarse = sum(&self.quad.right.0, &self.e_right.0);
        let fine = sum(&self.quad.right.1, &self.e_right.1);
        (fine, (fine - coarse).abs())
    }

    /// I₂\[y\](t) = ∫₀ᵗ (t−s)^{α−1} E_{α,α}(λ(t−s)^α) y(s) ds.
    pub fn inner_integral(&self, y: &dyn Fn(f64) -> f64, t: f64) -> Result<f64> {
        if t == 0.0 {
            return Ok(0.0);
        }
        let a = self.kernel.alpha;
        let lam = self.kernel.lambda;
        let rule = &self.quad.left_kernel;
        let mut acc = 0.0;
        for (&sigma, &w) in rule.nodes.iter().zip(&rule.weights) {
            let e = ml(a, a, lam * (t * sigma).powf(a))?;
            acc += w * e * y(t * (1.0 - sigma));
        }
        Ok(t.powf(a) * acc)
    }

    /// u(t) = ∫₀¹ G(t,s) y(s) ds.
    pub fn apply(&self, y: &dyn Fn(f64) -> f64, t: f64) -> Result<f64> {
        let a = self.kernel.alpha;
        let head = t.powf(a - 1.0) * ml(a, a, self.kernel.lambda * t.powf(a))? / self.kernel.e_lam;
        let (i1, _) = self.outer_integral(y);
        Ok(head * i1 - self.inner_integral(y, t)?)
    }

    /// t^{2−α} u(t), finite down to t = 0.
    pub fn apply_weighted(&self, y: &dyn Fn(f64) -> f64, t: f64) -> Result<f64> {
        if t == 0.0 {
            return Ok(0.0);
        }
        let a = self.kernel.alpha;
        let lam = self.kernel.lambda;
        let head = t * ml(a, a, lam * t.powf(a))? / self.kernel.e_lam;
        let (i1, _) = self.outer_integral(y);
        let rule = &self.quad.left_kernel;
        let mut acc = 0.0;
        for (&sigma, &w) in rule.nodes.iter().zip(&rule.weights) {
            let e = ml(a, a, lam * (t * sigma).powf(a))?;
            acc += w * e * y(t * (1.0 - sigma));
        }
        Ok(head * i1 - t * t * acc)
    }

    /// u'(t) = ∫₀¹ ∂G/∂t(t,s) y(s) ds, using the closed-form kernel
    /// derivative with the (t−s)^{α−2} factor absorbed by its own rule.
    pub fn apply_dt(&self, y: &dyn Fn(f64) -> f64, t: f64) -> Result<f64> {
        let a = self.kernel.alpha;
        let lam = self.kernel.lambda;
        let head = t.powf(a - 2.0) * ml(a, a - 1.0, lam * t.powf(a))? / self.kernel.e_lam;
        let rule = &self.quad.right.0;
        let mut i1 = 0.0;
        for ((&s, &w), &e) in rule.nodes.iter().zip(&rule.weights).zip(&self.e_right.0) {
            i1 += w * e * y(s);
        }
        if t == 0.0 {
            return Ok(head * i1);
        }
        let rule = &self.quad.left_deriv;
        let mut acc = 0.0;
        for (&sigma, &w) in rule.nodes.iter().zip(&rule.weights) {
            let e = ml(a, a - 1.0, lam * (t * sigma).powf(a))?;
            acc += w * e * y(t * (1.0 - sigma));
        }
        Ok(head * i1 - t.powf(a - 1.0) * acc)
    }
}

/// One-shot ∫₀¹ G(t,s) y(s) ds for the given problem parameters.
pub fn apply_green(
    params: &crate::greens::ProblemParams,
    y: &dyn Fn(f64) -> f64,
    t: f64,
) -> Result<f64> {
    let kernel = GreenKernel::new(params)?;
    let quad = QuadSet::new(params.alpha, DEFAULT_NODES)?;
    let op = GreenOperator::new(&kernel, &quad)?;
    op.apply(y, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::greens::ProblemParams;
    use approx::assert_abs_diff_eq;

    #[test]
    fn legendre_nodes_match_reference() {
        // Degree-5 Gauss-Legendre abscissas on [-1,1].
        let (x, w) = gauss_jacobi(5, 0.0, 0.0).unwrap();
        let x_ref = [
            -0.906_179_845_938_664,
            -0.538_469_310_105_683_1,
            0.0,
            0.538_469_310_105_683_1,
            0.906_179_845_938_664,
        ];
        let w_ref = [
            0.236_926_885_056_189_08,
            0.478_628_670_499_366_47,
            0.568_888_888_888_888_9,
            0.478_628_670_499_366_47,
            0.236_926_885_056_189_08,
        ];
        for i in 0..5 {
            assert_abs_diff_eq!(x[i], x_ref[i], epsilon = 1e-13);
            assert_abs_diff_eq!(w[i], w_ref[i], epsilon = 1e-13);
        }
    }

    #[test]
    fn jacobi_nodes_match_reference() {
        // Weight (1-x) on [-1,1], 2 nodes.
        let (x, w) = gauss_jacobi(2, 1.0, 0.0).unwrap();
        assert_abs_diff_eq!(x[0], -0.689_897_948_556_635_7, epsilon = 1e-13);
        assert_abs_diff_eq!(x[1], 0.289_897_948_556_635_64, epsilon = 1e-13);
        assert_abs_diff_eq!(w[0], 1.272_165_526_975_908_7, epsilon = 1e-13);
        assert_abs_diff_eq!(w[1], 0.727_834_473_024_091_3, epsilon = 1e-13);
    }

    #[test]
    fn beta_integrals_exact() {
        // ∫₀¹ s^p (1−s)^{α−2} ds = B(p+1, α−1) for p = 0..6.
        for &alpha in &[1.2, 1.5, 1.9, 2.0] {
            for p in 0..=6 {
                let exact = gamma(p as f64 + 1.0) * gamma(alpha - 1.0) / gamma(p as f64 + alpha);
                let (value, _) =
                    integrate_weighted(|s| s.powi(p), alpha, DEFAULT_NODES, 1e-10).unwrap();
                assert_abs_diff_eq!(value, exact, epsilon = 1e-12 * exact.max(1.0));
            }
        }
    }

    #[test]
    fn moment_identity_for_linear_integrand() {
        // ∫₀¹ s (1−s)^{α−2} ds = 1/(α(α−1)).
        for &alpha in &[1.1, 1.5, 1.75, 2.0] {
            let (value, _) = integrate_weighted(|s| s, alpha, DEFAULT_NODES, 1e-10).unwrap();
            assert_abs_diff_eq!(value, 1.0 / (alpha * (alpha - 1.0)), epsilon = 1e-13);
        }
        let (v, _) = integrate_weighted(|s| s, 1.5, DEFAULT_NODES, 1e-10).unwrap();
        assert_abs_diff_eq!(v, 4.0 / 3.0, epsilon = 1e-13);
        let (v, _) = integrate_weighted(|_| 1.0, 1.5, DEFAULT_NODES, 1e-10).unwrap();
        assert_abs_diff_eq!(v, 2.0, epsilon = 1e-13);
    }

    #[test]
    fn refinement_change_within_reported_estimate() {
        let f = |s: f64| (3.0 * s).cos() * (1.0 + s * s);
        let (v64, est) = integrate_weighted(f, 1.4, 64, 1e-8).unwrap();
        let (v128, _) = integrate_weighted(f, 1.4, 128, 1e-8).unwrap();
        let floor = 32.0 * f64::EPSILON * v128.abs().max(1.0);
        assert!((v64 - v128).abs() <= est.max(floor));
    }

    #[test]
    fn graded_fallback_agrees_with_jacobi() {
        let f = |s: f64| (2.0 * s).exp() * (1.0 - 0.3 * s);
        for &alpha in &[1.3, 1.7] {
            let (jacobi, _) = integrate_weighted(f, alpha, DEFAULT_NODES, 1e-10).unwrap();
            let graded = integrate_graded(f, alpha, 40).unwrap();
            assert_abs_diff_eq!(jacobi, graded, epsilon = 1e-8 * jacobi.abs().max(1.0));
        }
    }

    #[test]
    fn linearity_of_green_application() {
        let params = ProblemParams::new(1.5, -0.3);
        let y1 = |s: f64| (1.0 + s).ln();
        let y2 = |s: f64| s * s - 0.2;
        let combo = |s: f64| 2.0 * y1(s) - 3.5 * y2(s);
        for &t in &[0.2, 0.7, 1.0] {
            let lhs = apply_green(&params, &combo, t).unwrap();
            let rhs = 2.0 * apply_green(&params, &y1, t).unwrap()
                - 3.5 * apply_green(&params, &y2, t).unwrap();
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(
            apply_green(&params, &|_| 0.0, 0.4).unwrap(),
            0.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn classical_green_application() {
        // α=2, λ=0, y≡1: u(t) = ∫ min(t,s) ds = t − t²/2.
        let params = ProblemParams::new(2.0, 0.0);
        for i in 0..=10 {
            let t = i as f64 / 10.0;
            assert_abs_diff_eq!(
                apply_green(&params, &|_| 1.0, t).unwrap(),
                t - 0.5 * t * t,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn fractional_green_application_closed_form() {
        // λ=0: ∫₀¹ G(1,s) ds = [1/(α−1) − 1/α]/Γ(α).
        let alpha = 1.5;
        let params = ProblemParams::new(alpha, 0.0);
        let exact = (1.0 / (alpha - 1.0) - 1.0 / alpha) / gamma(alpha);
        assert_abs_diff_eq!(
            apply_green(&params, &|_| 1.0, 1.0).unwrap(),
            exact,
            epsilon = 1e-9
        );
    }

    #[test]
    fn weighted_application_matches_direct_scaling() {
        let params = ProblemParams::new(1.4, -0.2);
        let kernel = GreenKernel::new(&params).unwrap();
        let quad = QuadSet::new(1.4, DEFAULT_NODES).unwrap();
        let op = GreenOperator::new(&kernel, &quad).unwrap();
        let y = |s: f64| 1.0 + s;
        for &t in &[0.1f64, 0.5, 0.9] {
            let direct = t.powf(2.0 - 1.4) * op.apply(&y, t).unwrap();
            assert_abs_diff_eq!(op.apply_weighted(&y, t).unwrap(), direct, epsilon = 1e-12);
        }
        assert_eq!(op.apply_weighted(&y, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn derivative_vanishes_at_right_end() {
        // u'(1) = 0 is the boundary condition built into the kernel.
        for &(alpha, lambda) in &[(1.5, -0.3), (1.8, 0.2), (2.0, 0.0)] {
            let params = ProblemParams::new(alpha, lambda);
            let kernel = GreenKernel::new(&params).unwrap();
            let quad = QuadSet::new(alpha, DEFAULT_NODES).unwrap();
            let op = GreenOperator::new(&kernel, &quad).unwrap();
            let y = |s: f64| (1.0 + 2.0 * s).sqrt();
            let d1 = op.apply_dt(&y, 1.0).unwrap();
            assert_abs_diff_eq!(d1, 0.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let params = ProblemParams::new(1.6, -0.4);
        let kernel = GreenKernel::new(&params).unwrap();
        let quad = QuadSet::new(1.6, DEFAULT_NODES).unwrap();
        let op = GreenOperator::new(&kernel, &quad).unwrap();
        let y = |s: f64| 1.0 + s * s;
        let h = 1e-5;
        for &t in &[0.3, 0.6, 0.85] {
            let fd = (op.apply(&y, t + h).unwrap() - op.apply(&y, t - h).unwrap()) / (2.0 * h);
            assert_abs_diff_eq!(op.apply_dt(&y, t).unwrap(), fd, epsilon = 1e-7);
        }
    }

    #[test]
    fn tolerance_violation_detected() {
        // A discontinuous integrand defeats the spectral rule; the n vs 2n
        // disagreement must be flagged at a tight tolerance.
        let f = |s: f64| if s < 0.33 { 1.0 } else { 0.0 };
        assert!(matches!(
            integrate_weighted(f, 1.5, 16, 1e-12),
            Err(Error::ToleranceNotMet { .. })
        ));
    }
}
