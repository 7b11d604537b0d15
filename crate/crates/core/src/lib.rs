//! Prolate spheroidal wave function spectral toolkit.

pub mod birkhoff;
pub mod cardinal;
pub mod collocation;
pub mod criteria;
pub mod elements;
pub mod error;
pub mod kr_rule;
pub mod legendre;
pub mod linalg;
pub mod pswf;
pub mod quadrature;
pub mod studies;
pub mod tolerances;

pub use error::{Error, Result};
pub use pswf::{build_basis, ProlateBasis, ProlateParams};
pub use quadrature::{gauss_legendre, lgl_rule, pl_points, pl_weights, ProlateGrid};
pub use cardinal::{modal_diffmats, rational_diffmats, DiffOperators};
pub use kr_rule::{select_n, transition_bandwidth, KrPair};
pub use birkhoff::{birkhoff_interpolate, build_birkhoff, build_phi, BirkhoffBasis};
pub use collocation::{model_problem, solve_npcol, solve_pcol, solve_ppcol, Bvp2, Scheme, SolveOptions, SolveReport, Solver};
