//! Bounded-precision arithmetic in `Z/p^k` and the small pieces of local
//! algebra built on it.

mod cyclotomic;
mod hensel;
mod matrix;
mod poly;
mod ring;

pub use cyclotomic::CyclotomicValue;
pub use hensel::hensel_unit_root;
pub use matrix::{smith_exponents_2x2, Mat2, ModMatrix, SmithForm};
pub use poly::{cyclotomic_sigma, omega_direct, IntPolynomial};
pub use ring::{is_prime, PrecisionInt, Zpk};
