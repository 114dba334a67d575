//! Exact arithmetic in `Q_p` with capped relative precision.

mod analytic;
mod error;
mod literal;
mod number;
mod poly;

pub use analytic::{exp_p, log_p, sqrt, sqrt_exists, sqrt_witness};
pub use error::{PadicError, Result};
pub use literal::{eval_expr, format_rational, parse_expr, parse_rational, Expr, Function};
pub use number::{DomainFlag, PadicNumber, PadicRepr, Prime};
pub use poly::{hensel_lift, PadicPoly};

/// Default relative precision in base-`p` digits.
pub const DEFAULT_PRECISION: u32 = 64;
