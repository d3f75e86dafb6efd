//! Iwasawa algebra at finite layers and the Ω family.

mod group_ring;
mod modpoly;
mod omega;

pub use group_ring::GroupRingElement;
pub(crate) use modpoly::rem_monic;
pub use omega::{
    divide_omega_tilde, divide_omega_tilde_linear, omega_family, omega_polynomial, tilde_multiplication_injective,
    tilde_multiplication_matrix, OmegaClass, OmegaElement, OmegaFamily, OmegaKind, Sign,
};
