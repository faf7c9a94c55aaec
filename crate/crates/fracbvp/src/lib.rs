//! fracbvp: fractional-order two-point boundary value problems with mixed
//! boundary conditions.
//!
//! The crate solves, for order α ∈ (1,2] and a real spectral parameter λ,
//!
//! ```text
//! D^α u(t) − λ u(t) + f(t, t^{2−α} u(t)) = 0,   t ∈ (0,1),
//! lim_{t→0+} t^{2−α} u(t) = A,   u'(1) = B,
//! ```
//!
//! where D^α is the Riemann-Liouville derivative. Solutions may blow up at
//! t = 0 like t^{α−2}; they are therefore stored through the continuous
//! companion w(t) = t^{2−α} u(t) and measured in the norm max |w|.
//!
//! The pieces, bottom to top:
//!
//! - [`mlf`] evaluates the two-parameter Mittag-Leffler function E_{α,β},
//!   its derivative, and 1/Γ for any real β.
//! - [`spectrum`] locates the eigenvalue thresholds that govern the sign of
//!   the Green's function: the principal mixed eigenvalue λ₁* (largest zero
//!   of E_{α,α−1}), the principal Dirichlet eigenvalue λ₁, and the
//!   subinterval eigenvalue.
//! - [`greens`] evaluates the Green's function of the linear problem, its
//!   weighted extension, positivity reports and the bound pair (m(t), M).
//! - [`quad`] integrates against the singular weights (1−s)^{α−2} and
//!   (t−s)^{α−1} with Gauss-Jacobi rules and applies the Green's operator.
//! - [`solver`] solves the linear problem and runs Picard and monotone
//!   (lower/upper solution) fixed-point iterations with contraction
//!   certificates, cone membership checks and growth diagnostics.
//! - [`fracoracle`] verifies candidates independently through discrete
//!   Riemann-Liouville operators (L1 and Grünwald-Letnikov schemes).
//! - [`expr`] parses user-supplied nonlinearities f(t,u) and right-hand
//!   sides y(t) from a small expression language.
//! - [`cli`] wires everything into the `fracbvp` command-line binary.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod cli;
pub mod error;
pub mod expr;
pub mod fracoracle;
pub mod greens;
pub mod grid;
pub mod mlf;
pub mod quad;
pub mod rng;
pub mod solver;
pub mod spectrum;

pub use error::{Error, Result};
pub use greens::ProblemParams;
pub use grid::WGridFunction;
pub use mlf::MLArgs;
