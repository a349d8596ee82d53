//! Exact and validated arithmetic: integers, 𝔽_p polynomials, intervals.

pub mod arith;
pub mod dyadic;
pub mod expr;
pub mod fp_poly;
pub mod fp_ratfunc;
pub mod interval;

pub use arith::{padic_ord, rational_pow};
pub use dyadic::{Dyadic, Round};
pub use expr::{escalate, interval_sign, Expr, IntervalSign};
pub use fp_poly::FpPoly;
pub use fp_ratfunc::{fp_ord_at, fp_ord_infinity, parse_rational_function, FpRationalFunction};
pub use interval::{ComplexInterval, RealInterval};
