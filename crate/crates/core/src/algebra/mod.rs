//! Exact arithmetic: Laurent polynomials over Q and their fractions.

mod gcd;
mod modp;
mod poly;
mod ratfunc;
mod text;

pub use gcd::poly_gcd;
pub use poly::{MPoly, Monomial};
pub use ratfunc::{primitive_polynomial, LambdaPoly, QRational, RatFunc, ScalarField};
pub use text::{parse_poly, parse_ratfunc};
