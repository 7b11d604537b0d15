//! Every fixed numerical constant used by the toolkit, in one table.

/// Largest supported mode index `N`.
pub const MAX_MODE: usize = 2048;

/// Trailing Legendre coefficients must fall below this for the truncation to be accepted.
pub const TRUNCATION_TAIL: f64 = 1e-15;

/// Conservative admissibility bound on `q = c / sqrt(chi_N)`, `2^{-1/6}`.
pub const Q_ADMISSIBLE: f64 = 0.8909;

/// Condition estimate of the PSWF node-value matrix above which
/// modal differentiation is refused.
pub const INTERPOLATION_CONDITION_LIMIT: f64 = 1e14;

/// Relative size below which `psi_N(x_j)` counts as vanishing in the rational formulas.
pub const NODE_VALUE_FLOOR: f64 = 1e-13;

/// Scan density for prolate-Lobatto roots, in points per mode.
pub const ROOT_SCAN_PER_MODE: usize = 20;

/// Newton residual target for prolate-Lobatto nodes, relative to `max |psi_N'|`.
pub const ROOT_RESIDUAL: f64 = 1e-13;

/// Newton step size at which a node is considered converged.
pub const ROOT_STEP: f64 = 1e-14;

/// Bisection width for the approximate Kong-Rokhlin root.
pub const KR_BISECTION_WIDTH: f64 = 1e-10;

/// Default BiCGStab relative-residual tolerance for the collocation schemes.
pub const BICGSTAB_TOL: f64 = 1e-12;

/// Iteration cap for the ill-conditioned scheme in the collocation sweep.
pub const PCOL_TABLE_MAXIT: usize = 100_000;

/// Relative eigenvalue error that counts as "accurate to 12 digits".
pub const EIG_ACCURATE: f64 = 1e-12;

/// Relative eigenvalue error that counts as "one-digit accurate".
pub const EIG_ONE_DIGIT: f64 = 0.1;

/// Dense sample count for maximum point-wise errors of element solutions.
pub const ERROR_SAMPLES: usize = 1000;

/// Extra Gauss-Legendre points beyond twice the truncation length in element integrals.
pub const ELEMENT_QUAD_EXTRA: usize = 40;
