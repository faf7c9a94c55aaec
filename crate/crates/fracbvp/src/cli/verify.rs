//! Reproduction and invariant suites behind `fracbvp verify`.
//!
//! Each suite returns a list of named checks; the CLI prints one line per
//! check and fails the process when any check fails. The same functions
//! back the crate's acceptance tests.

use crate::error::Result;
use crate::expr;
use crate::fracoracle::{self, SchemeKind};
use crate::greens::{bounds_envelope, positivity_report, GreenKernel, ProblemParams};
use crate::grid::{chebyshev_points, WGridFunction};
use crate::mlf::{gamma, ml, ml_deriv, ml_eval_with_cond, recip_gamma, MLArgs};
use crate::quad::integrate_weighted;
use crate::rng::SplitMix;
use crate::solver::{
    check_lower_upper, cone_membership, contraction_certificate, default_ladder,
    growth_diagnostics, monotone_solve, picard_solve, solve_linear, CandidateKind, TWindow, Trend,
};
use crate::spectrum::{
    principal_dirichlet_eigenvalue, principal_mixed_eigenvalue, subinterval_eigenvalue,
};

/// Outcome of one named verification.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

/// Reference first eigenvalues of the mixed problem at α = 1.1, …, 2.0.
pub const TABLE1_ALPHAS: [f64; 10] = [1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9, 2.0];
pub const TABLE1_VALUES: [f64; 10] = [
    -0.104812, -0.221832, -0.355588, -0.511676, -0.697078, -0.920556, -1.19319, -1.52904,
    -1.9461, -2.4674,
];

/// First-eigenvalue table reproduction at the given absolute tolerance.
/// The final two entries are tabulated at lower precision; their tolerance
/// is relaxed to 1e-4 when `tol` is tighter than that.
pub fn table1_checks(tol: f64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (&alpha, &reference) in TABLE1_ALPHAS.iter().zip(&TABLE1_VALUES) {
        let eff_tol = if alpha >= 1.85 { tol.max(1e-4) } else { tol };
        let got = principal_mixed_eigenvalue(alpha)?.value;
        let err = (got - reference).abs();
        checks.push(Check::new(
            format!("table1 alpha={alpha:.1}"),
            err <= eff_tol,
            format!("computed {got:.6}, tabulated {reference}, |diff| = {err:.2e}"),
        ));
    }
    Ok(checks)
}

/// Eigenvalue ordering properties behind the figure-level claims:
/// λ₁(α) < λ₁*(α) < 0 on the α grid, and λ̄₁(α,t₀) < λ₁*(α) on the
/// (α, t₀) product grid.
pub fn figure_checks(fast: bool) -> Result<Vec<Check>> {
    let (na, nt) = if fast { (6, 5) } else { (20, 19) };
    let alphas: Vec<f64> = (1..=na).map(|i| 1.0 + i as f64 / na as f64).collect();
    let t0s: Vec<f64> = (1..=nt).map(|j| j as f64 / (nt + 1) as f64).collect();
    let mut dir_ok = true;
    let mut dir_margin = f64::INFINITY;
    let mut sub_ok = true;
    let mut sub_margin = f64::INFINITY;
    let mut worst = String::new();
    for &alpha in &alphas {
        let star = principal_mixed_eigenvalue(alpha)?.value;
        let dir = principal_dirichlet_eigenvalue(alpha)?.value;
        if !(dir < star && star < 0.0) {
            dir_ok = false;
        }
        dir_margin = dir_margin.min(star - dir);
        for &t0 in &t0s {
            let bar = subinterval_eigenvalue(alpha, t0)?.value;
            if bar >= star || bar.is_nan() || star.is_nan() {
                sub_ok = false;
                worst = format!(" first failure at (alpha={alpha}, t0={t0})");
            }
            sub_margin = sub_margin.min(star - bar);
        }
    }
    Ok(vec![
        Check::new(
            format!("figures dirichlet-below-mixed ({na} orders)"),
            dir_ok && dir_margin > 0.0,
            format!("min margin lambda1* - lambda1 = {dir_margin:.3e}"),
        ),
        Check::new(
            format!("figures subinterval-below-mixed ({na}x{nt} grid)"),
            sub_ok && sub_margin > 0.0,
            format!("min margin = {sub_margin:.3e}{worst}"),
        ),
    ])
}

fn ml_invariant_checks(seed: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();

    let mut ok = true;
    for &(a, b) in &[(1.1, -0.9), (1.5, 0.0), (1.7, 0.7), (2.0, 2.0), (1.3, 1.0)] {
        if ml(a, b, 0.0)? != recip_gamma(b) {
            ok = false;
        }
    }
    checks.push(Check::new(
        "mlf value-at-zero equals first series term",
        ok,
        "E(a,b,0) == 1/Gamma(b) exactly",
    ));

    let mut rng = SplitMix::new(seed.wrapping_add(1));
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for _ in 0..256 {
        let a = 1.0 + rng.uniform();
        let b = -1.0 + 3.0 * rng.uniform();
        let x = -30.0 + 35.0 * rng.uniform();
        let (lhs, cond) = ml_eval_with_cond(MLArgs::new(a, b, x))?;
        let rhs = x * ml(a, a + b, x)? + recip_gamma(b);
        let tol = 1e-10f64.max(40.0 * f64::EPSILON * cond);
        let res = (lhs - rhs).abs();
        worst = worst.max(res / tol.max(1e-300));
        if res > tol {
            ok = false;
        }
    }
    checks.push(Check::new(
        "mlf recurrence on random grid (conditioning-scaled tolerance)",
        ok,
        format!("worst residual/tolerance ratio = {worst:.3}"),
    ));

    let mut ok = true;
    let mut rng = SplitMix::new(seed.wrapping_add(2));
    for _ in 0..200 {
        let a = 1.2 + 0.8 * rng.uniform();
        let b = -1.0 + 3.0 * rng.uniform();
        let x = -15.0 + 20.0 * rng.uniform();
        let lhs = ml(a, b, x)?;
        let rhs = x * ml(a, a + b, x)? + recip_gamma(b);
        if (lhs - rhs).abs() > 1e-10 {
            ok = false;
        }
    }
    checks.push(Check::new(
        "mlf recurrence at 1e-10 on moderate arguments",
        ok,
        "alpha in [1.2,2], x in [-15,5]",
    ));

    let mut ok = true;
    for k in 0..=20 {
        let x = -20.0 + 2.0 * k as f64;
        if (ml(1.0, 1.0, x)? - x.exp()).abs() > 1e-10 * x.abs().exp() {
            ok = false;
        }
    }
    for k in 0..=20 {
        let y = 5.0 * k as f64;
        if (ml(2.0, 1.0, -y)? - y.sqrt().cos()).abs() > 1e-10 {
            ok = false;
        }
    }
    checks.push(Check::new(
        "mlf closed forms at alpha in {1,2}",
        ok,
        "exp and cos identities at 1e-10",
    ));

    let mut ok = true;
    let mut rng = SplitMix::new(seed.wrapping_add(3));
    let h = 1e-3;
    for _ in 0..100 {
        let a = 1.0 + rng.uniform();
        let b = -1.0 + 3.0 * rng.uniform();
        let x = -30.0 + 35.0 * rng.uniform();
        let d = ml_deriv(MLArgs::new(a, b, x))?;
        let fd = (-ml(a, b, x + 2.0 * h)? + 8.0 * ml(a, b, x + h)? - 8.0 * ml(a, b, x - h)?
            + ml(a, b, x - 2.0 * h)?)
            / (12.0 * h);
        let (_, cond) = ml_eval_with_cond(MLArgs::new(a, b, x))?;
        if (d - fd).abs() > 1e-6 * (1.0 + d.abs()) + 3.0 * f64::EPSILON * cond / h {
            ok = false;
        }
    }
    checks.push(Check::new(
        "mlf derivative matches 4th-order difference",
        ok,
        "1e-6 plus the difference quotient's conditioning floor",
    ));
    Ok(checks)
}

fn spectrum_invariant_checks(fast: bool) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let na = if fast { 6 } else { 20 };
    let mut ok = true;
    for i in 1..=na {
        let alpha = 1.0 + i as f64 / na as f64;
        let star = principal_mixed_eigenvalue(alpha)?;
        let dir = principal_dirichlet_eigenvalue(alpha)?;
        if !(dir.value < star.value && star.value < 0.0) {
            ok = false;
        }
        if star.residual > 1e-12 || dir.residual > 1e-12 {
            ok = false;
        }
        if !(star.bracket.0 < star.value && star.value < star.bracket.1) {
            ok = false;
        }
    }
    checks.push(Check::new(
        "spectrum ordering and residuals on alpha grid",
        ok,
        "lambda1 < lambda1* < 0, residuals <= 1e-12, value inside bracket",
    ));

    let mut ok = true;
    for &alpha in &[1.3, 1.7, 2.0] {
        for &t0 in &[0.2, 0.5, 0.8] {
            let bar = subinterval_eigenvalue(alpha, t0)?;
            let star = principal_mixed_eigenvalue(alpha)?.value;
            if bar.value >= star || bar.value.is_nan() || bar.residual > 1e-12 {
                ok = false;
            }
        }
    }
    checks.push(Check::new(
        "spectrum subinterval roots below mixed on moderate grid",
        ok,
        "residuals <= 1e-12 where the series is well conditioned",
    ));
    Ok(checks)
}

fn greens_invariant_checks(seed: u64, fast: bool) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let cases = [(1.5, -0.5), (1.8, 0.0), (1.2, 0.3)];

    let mut ok = true;
    for &(alpha, lambda) in &cases {
        let kernel = GreenKernel::new(&ProblemParams::new(alpha, lambda))?;
        for i in 1..20 {
            let t = i as f64 / 20.0;
            // The kink term (t−s)^{α−1}E_{α,α}(λ(t−s)^α) vanishes at s = t,
            // so the s ≤ t branch must meet the t < s branch formula there.
            let lower = kernel.eval(t, t)?;
            let upper = t.powf(alpha - 1.0)
                * ml(alpha, alpha, lambda * t.powf(alpha))?
                * ml(alpha, alpha - 1.0, lambda * (1.0 - t).powf(alpha))?
                / ((1.0 - t).powf(2.0 - alpha) * kernel.e_lam);
            if (upper - lower).abs() > 1e-10 {
                ok = false;
            }
        }
    }
    checks.push(Check::new(
        "greens branch continuity across s = t",
        ok,
        "two-branch formulas agree on the diagonal at 1e-10",
    ));

    let mut ok = true;
    for &(alpha, lambda) in &cases {
        let kernel = GreenKernel::new(&ProblemParams::new(alpha, lambda))?;
        for j in 1..20 {
            let s = j as f64 / 20.0;
            if kernel.eval(0.0, s)?.abs() > 1e-14 || kernel.eval(s, 0.0)?.abs() > 1e-14 {
                ok = false;
            }
            if kernel.eval_dt(1.0, s)?.abs() > 1e-10 {
                ok = false;
            }
        }
    }
    checks.push(Check::new(
        "greens boundary identities",
        ok,
        "G(0,s) = G(t,0) = 0 and dG/dt(1,s) = 0",
    ));

    let mut ok = true;
    let kernel = GreenKernel::new(&ProblemParams::new(1.5, -0.3))?;
    let mut prev = 0.0;
    for k in 2..=8 {
        let s: f64 = 1.0 - 10f64.powi(-k);
        let g = kernel.eval(0.6, s)?;
        if ((1.0 - s).powf(0.5) * g).abs() > 2.0 || g.abs() <= prev {
            ok = false;
        }
        prev = g.abs();
    }
    checks.push(Check::new(
        "greens blow-up rate toward s = 1",
        ok,
        "(1-s)^{2-a} G bounded while |G| grows",
    ));

    let grid_n = if fast { 65 } else { 257 };
    let samples = if fast { 2000 } else { 10_000 };
    let mut ok = true;
    let mut detail = String::new();
    for &(alpha, lambda) in &[(1.5, -0.5), (1.8, 0.0)] {
        let params = ProblemParams::new(alpha, lambda);
        let env = bounds_envelope(&params, grid_n, 0.25)?;
        let kernel = GreenKernel::new(&params)?;
        let tol = env.allowance();
        let mut rng = SplitMix::new(seed.wrapping_add(4));
        for _ in 0..samples {
            let t = rng.uniform();
            let s = rng.uniform();
            let h = kernel.h_tilde(t, s)?;
            if h < env.m_at(t) - tol || h > env.big_m + tol {
                ok = false;
                detail = format!("violation at alpha={alpha}, lambda={lambda}, (t,s)=({t},{s})");
            }
        }
    }
    checks.push(Check::new(
        format!("greens sandwich m <= H <= M at {samples} random points"),
        ok,
        if detail.is_empty() {
            "within interpolation allowance".to_string()
        } else {
            detail
        },
    ));

    let mut ok = true;
    for &alpha in &[1.4, 1.8] {
        let star = principal_mixed_eigenvalue(alpha)?.value;
        for &off in &[0.1, 0.5] {
            let above = positivity_report(&ProblemParams::new(alpha, star + off), grid_n)?;
            let below = positivity_report(&ProblemParams::new(alpha, star - off), grid_n)?;
            if !above.all_positive || below.all_positive {
                ok = false;
            }
            if below.argmin.0 >= below.argmin.1 {
                ok = false;
            }
        }
    }
    checks.push(Check::new(
        "greens positivity flips exactly at lambda1*",
        ok,
        "sign scans on a lambda ladder crossing the threshold",
    ));

    let mut ok = true;
    for &alpha in &[1.3, 1.6, 1.9] {
        let star = principal_mixed_eigenvalue(alpha)?.value;
        let kernel = GreenKernel::new(&ProblemParams::new(alpha, star + 0.1))?;
        for i in 1..=20 {
            let t = i as f64 / 20.0;
            if kernel.v1(t)? <= 0.0 || kernel.v2(t)? <= 0.0 {
                ok = false;
            }
        }
        // Extrapolated weighted limit agrees with the closed form.
        for &t in &[0.3, 0.7] {
            if (kernel.l_limit(t)? - kernel.l_limit_closed(t)?).abs() > 1e-8 {
                ok = false;
            }
        }
    }
    checks.push(Check::new(
        "greens v1, v2 positive above threshold; weighted limit stable",
        ok,
        "homogeneous solutions positive; Richardson limit matches closed form",
    ));
    Ok(checks)
}

fn quad_invariant_checks() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut ok = true;
    for &alpha in &[1.2, 1.5, 1.9, 2.0] {
        for p in 0..=6 {
            let exact = gamma(p as f64 + 1.0) * gamma(alpha - 1.0) / gamma(p as f64 + alpha);
            let (v, _) = integrate_weighted(|s| s.powi(p), alpha, 64, 1e-9)?;
            if (v - exact).abs() > 1e-12 * exact.max(1.0) {
                ok = false;
            }
        }
    }
    checks.push(Check::new(
        "quad beta-integral exactness p = 0..6",
        ok,
        "Gauss-Jacobi reproduces B(p+1, alpha-1) at 1e-12",
    ));

    let mut ok = true;
    let f = |s: f64| (2.0 + s).ln() * (1.0 - 0.5 * s);
    for &alpha in &[1.3, 1.7] {
        let (v64, est) = integrate_weighted(f, alpha, 64, 1e-9)?;
        let (v128, _) = integrate_weighted(f, alpha, 128, 1e-9)?;
        let floor = 32.0 * f64::EPSILON * v128.abs().max(1.0);
        if (v64 - v128).abs() > est.max(floor) {
            ok = false;
        }
    }
    checks.push(Check::new(
        "quad refinement within reported estimate",
        ok,
        "doubling nodes moves the value by at most the estimate",
    ));
    Ok(checks)
}

fn solver_invariant_checks(seed: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();

    // Banach rate of the registered Lipschitz example.
    let alpha = 5.0 / 3.0;
    let params = ProblemParams::new(alpha, 0.0);
    let env = bounds_envelope(&params, 257, 0.25)?;
    let (q, contraction) = contraction_certificate(&params, 0.25, &env);
    let f = expr::builtin("example2", &[])?;
    let f = f.as_fn();
    let start = WGridFunction::constant(0.0, alpha);
    let report = picard_solve(&params, &f, &start, 1e-10, 100)?;
    let mut ok = contraction && report.converged && report.residual_fp <= 1e-8;
    for k in 2..report.step_norms.len() {
        if report.step_norms[k] / report.step_norms[k - 1] > q + 0.05 {
            ok = false;
        }
    }
    let mut cone_ok = true;
    let membership = cone_membership(&report.solution, &env);
    if !membership.in_pu0 {
        cone_ok = false;
    }
    checks.push(Check::new(
        "solver banach rate bounded by certificate",
        ok,
        format!("q = {q:.4}, residual_fp = {:.2e}", report.residual_fp),
    ));
    checks.push(Check::new(
        "solver fixed point lies in the cone",
        cone_ok,
        "weighted values dominate (m/M)·norm",
    ));
    let mut ok = report.residual_ode <= 1e-2;
    if report.residual_ode.is_nan() {
        ok = false;
    }
    checks.push(Check::new(
        "solver fixed-point and equation residuals consistent",
        ok,
        format!("ode residual = {:.2e}", report.residual_ode),
    ));

    // Positivity propagation from the zero start.
    let ok = report.solution.w_values().iter().all(|&w| w >= -1e-12);
    checks.push(Check::new(
        "solver iterates stay nonnegative for nonnegative f",
        ok,
        "weighted solution nonnegative on the grid",
    ));

    // Monotone bracket adherence on the classical consistent data.
    let params2 = ProblemParams::new(2.0, 0.0);
    let gamma = WGridFunction::constant(0.0, 2.0);
    let delta = WGridFunction::from_weighted_fn(chebyshev_points(129), 2.0, |t| t);
    let rep = monotone_solve(&params2, &|_, _| 1.0, &gamma, &delta, 1e-10, 50)?;
    let ok = rep.converged
        && rep
            .solution
            .grid()
            .iter()
            .zip(rep.solution.w_values())
            .all(|(&t, &w)| w >= -1e-9 && w <= t + 1e-9);
    checks.push(Check::new(
        "solver monotone bracket on consistent data",
        ok,
        "solution of f=1 stays in [0, t]",
    ));

    // Boundary exactness on random configurations.
    let mut rng = SplitMix::new(seed.wrapping_add(5));
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let alpha = 1.05 + 0.95 * rng.uniform();
        let star = principal_mixed_eigenvalue(alpha)?.value;
        let lambda = star + 0.05 + 2.0 * rng.uniform();
        let bc_a = -1.0 + 2.0 * rng.uniform();
        let bc_b = -1.0 + 2.0 * rng.uniform();
        let params = ProblemParams::new(alpha, lambda).with_boundary(bc_a, bc_b);
        let y = |s: f64| (1.0 + s).sin() + 0.5;
        let sol = solve_linear(&params, &y)?;
        let left = (sol.w_values()[0] - bc_a).abs();
        let right = (crate::solver::linear_right_derivative(&params, &y)? - bc_b).abs();
        worst = worst.max(left.max(right));
        if left > 1e-8 || right > 1e-6 {
            ok = false;
        }
    }
    checks.push(Check::new(
        "solver boundary data reproduced on random configurations",
        ok,
        format!("worst boundary residual = {worst:.2e}"),
    ));
    Ok(checks)
}

fn fracoracle_invariant_checks() -> Result<Vec<Check>> {
    let mut checks = Vec::new();

    let n = 2048;
    let h = 1.0 / n as f64;
    let f: Vec<f64> = (0..=n).map(|i| i as f64 * h).collect();
    let inner: Vec<f64> = (0..=n)
        .map(|i| fracoracle::rl_integral(&f, h, 0.5, i))
        .collect::<Result<Vec<_>>>()?;
    let mut ok = true;
    for &idx in &[512usize, 1024, 2048] {
        let lhs = fracoracle::rl_integral(&inner, h, 0.7, idx)?;
        let rhs = fracoracle::rl_integral(&f, h, 1.2, idx)?;
        if (lhs - rhs).abs() > 1e-4 {
            ok = false;
        }
    }
    checks.push(Check::new(
        "oracle semigroup I^0.5 I^0.7 = I^1.2",
        ok,
        "spot check on f(t) = t",
    ));

    let alpha = 1.5;
    let g = gamma(alpha + 2.0);
    let cand = WGridFunction::from_weighted_fn(chebyshev_points(513), alpha, move |t| {
        t * t * t / g
    });
    let scheme = fracoracle::RLScheme::for_candidate(&cand, 2048, SchemeKind::L1)?;
    let mut ok = true;
    for &t in &[0.25, 0.5, 0.875] {
        if (scheme.rl_derivative(t)? - t).abs() > 1e-2 {
            ok = false;
        }
    }
    checks.push(Check::new(
        "oracle derivative inverts integral",
        ok,
        "D^a I^a t = t within scheme tolerance",
    ));

    let mut ok = true;
    for &alpha in &[1.3, 1.6, 1.9] {
        for w in [
            Box::new(|t: f64| t) as Box<dyn Fn(f64) -> f64>,
            Box::new(|_: f64| 1.0),
        ] {
            let cand = WGridFunction::from_weighted_fn(chebyshev_points(513), alpha, w);
            let scheme = fracoracle::RLScheme::for_candidate(&cand, 1024, SchemeKind::L1)?;
            for &t in &[0.125, 0.5, 0.875] {
                if scheme.rl_derivative(t)?.abs() > 1e-10 {
                    ok = false;
                }
            }
        }
    }
    checks.push(Check::new(
        "oracle annihilates the kernel powers",
        ok,
        "D^a of t^{a-1} and t^{a-2} below 1e-10 after the split",
    ));

    let alpha = 1.5;
    let params = ProblemParams::new(alpha, 0.0).with_boundary(0.0, -alpha);
    let cand = WGridFunction::from_weighted_fn(chebyshev_points(513), alpha, |t| -t * t);
    let f = |_: f64, _: f64| gamma(alpha + 1.0);
    let coarse = fracoracle::ode_residual_with(&cand, &params, &f, 1024, SchemeKind::L1)?;
    let fine = fracoracle::ode_residual_with(&cand, &params, &f, 2048, SchemeKind::L1)?;
    let ratio = coarse.max_interior / fine.max_interior;
    checks.push(Check::new(
        "oracle residual shrinks under grid refinement",
        ratio >= 1.5,
        format!("halving h reduced the residual by {ratio:.2}x"),
    ));
    Ok(checks)
}

fn expr_invariant_checks(seed: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let corpus = [
        "(1+t)*log(2+u)",
        "t*(u+1)/(u+2)",
        "phi_p(2; u) - 0.5*t^1.5",
        "min(t, max(u, 0.25))",
        "-t^2 + sqrt(abs(u))",
        "2^-1 * exp(-t)",
        "1-2-3-u",
        "8/t/u",
        "gamma(t+1)",
        "-(t+u)^2",
        "t^u^2",
        "((t))",
    ];
    let mut ok = true;
    for src in corpus {
        let ast = expr::parse(src)?;
        if expr::parse(&expr::print(&ast))? != ast {
            ok = false;
        }
    }
    checks.push(Check::new(
        "expr print/parse round trip",
        ok,
        format!("{} corpus expressions", corpus.len()),
    ));

    let mut ok = true;
    let e2 = expr::builtin("example2", &[])?;
    let mut rng = SplitMix::new(seed.wrapping_add(6));
    for _ in 0..1000 {
        let t = rng.uniform();
        let u = 3.0 * rng.uniform();
        let want = t * (u + 1.0) / (u + 2.0);
        if (e2.eval(t, u)? - want).abs() > 1e-14 * (1.0 + want.abs()) {
            ok = false;
        }
    }
    checks.push(Check::new(
        "expr builtin agrees with hand-coded closure",
        ok,
        "1000 random samples at 1e-14 relative",
    ));

    let ok = expr::phi_p(2.5, 0.0) == 0.0 && expr::phi_p(2.5, 1e-8).abs() < 1e-8;
    checks.push(Check::new(
        "expr phi_p continuous at zero",
        ok,
        "phi_p(p; 0) = 0 for p > 1",
    ));
    Ok(checks)
}

/// Every module's invariants-and-properties suite, aggregated.
pub fn invariant_checks(fast: bool, seed: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    checks.extend(ml_invariant_checks(seed)?);
    checks.extend(spectrum_invariant_checks(fast)?);
    checks.extend(greens_invariant_checks(seed, fast)?);
    checks.extend(quad_invariant_checks()?);
    checks.extend(solver_invariant_checks(seed)?);
    checks.extend(fracoracle_invariant_checks()?);
    checks.extend(expr_invariant_checks(seed)?);
    Ok(checks)
}

/// The three worked-example pipelines.
pub fn example_checks() -> Result<Vec<Check>> {
    let mut checks = Vec::new();

    // Growth-limit classification of the two sublinear/superlinear cases.
    let ladder = default_ladder();
    let f1a = expr::builtin("example1a", &[])?;
    let d = growth_diagnostics(&f1a.as_fn(), TWindow::Full, &ladder);
    checks.push(Check::new(
        "example1a growth limits",
        d.at_zero_min.trend == Trend::Infinite && d.at_inf_max.trend == Trend::Zero,
        format!(
            "min ratio at 0 -> {:?}, max ratio at inf -> {:?}",
            d.at_zero_min.trend, d.at_inf_max.trend
        ),
    ));
    let f1b = expr::builtin("example1b", &[2.0])?;
    let d = growth_diagnostics(&f1b.as_fn(), TWindow::Full, &ladder);
    checks.push(Check::new(
        "example1b growth limits",
        d.at_zero_max.trend == Trend::Zero && d.at_inf_min.trend == Trend::Infinite,
        format!(
            "max ratio at 0 -> {:?}, min ratio at inf -> {:?}",
            d.at_zero_max.trend, d.at_inf_min.trend
        ),
    ));

    // Lipschitz pipeline: certificate, convergence, residuals, step ratios.
    let alpha = 5.0 / 3.0;
    let params = ProblemParams::new(alpha, 0.0);
    let env = bounds_envelope(&params, 257, 0.25)?;
    let (q, contraction) = contraction_certificate(&params, 0.25, &env);
    let f2 = expr::builtin("example2", &[])?;
    let report = picard_solve(&params, &f2.as_fn(), &WGridFunction::constant(0.0, alpha), 1e-9, 200)?;
    let rate_ok = report
        .step_norms
        .windows(2)
        .skip(2)
        .all(|w| w[1] / w[0] <= q + 0.05);
    checks.push(Check::new(
        "example2 unique-solution pipeline",
        contraction && report.converged && report.residual_fp <= 1e-8
            && report.residual_ode <= 1e-2
            && rate_ok,
        format!(
            "q = {q:.4}, residual_fp = {:.2e}, residual_ode = {:.2e}",
            report.residual_fp, report.residual_ode
        ),
    ));

    // Lower/upper-solution pipeline at p = 2, A = 0, B = -alpha/2.
    let alpha = 1.5;
    let star = principal_mixed_eigenvalue(alpha)?.value;
    for lambda in [0.0, star / 2.0] {
        let params = ProblemParams::new(alpha, lambda).with_boundary(0.0, -alpha / 2.0);
        let f3 = expr::builtin("example3", &[2.0, lambda, alpha])?;
        let gamma_fn =
            WGridFunction::from_weighted_fn(chebyshev_points(513), alpha, |t| -t * t);
        let delta_fn = WGridFunction::constant(0.0, alpha);
        let lower = check_lower_upper(&gamma_fn, &params, &f3.as_fn(), CandidateKind::Lower)?;
        let upper = check_lower_upper(&delta_fn, &params, &f3.as_fn(), CandidateKind::Upper)?;
        checks.push(Check::new(
            format!("example3 candidate verification (lambda = {lambda:.4})"),
            lower.passed && upper.passed,
            format!(
                "lower worst = {:.2e}, upper worst = {:.2e}",
                lower.interior_worst, upper.interior_worst
            ),
        ));
        let report = monotone_solve(&params, &f3.as_fn(), &gamma_fn, &delta_fn, 1e-9, 200)?;
        let mut below = 0.0f64;
        let mut above = 0.0f64;
        for (&t, &w) in report.solution.grid().iter().zip(report.solution.w_values()) {
            below = below.max(-t * t - w);
            above = above.max(w);
        }
        checks.push(Check::new(
            format!("example3 monotone bracket (lambda = {lambda:.4})"),
            report.converged && below <= 1e-6 && above <= 1e-6,
            format!(
                "converged = {}, residual_ode = {:.2e}, below-bracket by {below:.3}, above by {above:.3}",
                report.converged, report.residual_ode
            ),
        ));
    }
    Ok(checks)
}
