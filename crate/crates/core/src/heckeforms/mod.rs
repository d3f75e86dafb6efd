//! `Z/p^k`-valued forms on vertices and oriented edges of a ball, Hecke
//! operators, the passage from vertex eigenforms to `U_p`-eigenforms on
//! edges, and the ν-invariant.

mod eigen;
mod forms;

pub use eigen::EigenData;
pub use forms::{local_eigen_extend, local_eigen_extend_congruent, nu_invariant, stabilize, stabilize_parts, EdgeForm, Form, VertexForm};
