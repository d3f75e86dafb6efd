//! Finite-order characters, specialization of group-ring elements, period
//! sums and the Howard criterion scanner.

mod character;
mod howard;
mod interpolation;

pub use character::{specialize, star_identity_check, FiniteOrderCharacter, StarReport};
pub use howard::{howard_check, HowardFamily, HowardPrime, HowardReport, MemberVerdict};
pub use interpolation::{
    interpolation_shape, period_sum, signed_specialization_check, InterpolationReport, SignedShapeReport,
};
