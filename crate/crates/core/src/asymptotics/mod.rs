//! Asymptotic term families and the special functions they need.

pub mod qfunc;
pub mod special;
pub mod terms;

pub use qfunc::{q_function, QControls, QValue};
pub use special::{airy_ai, bessel_j0};
pub use terms::{
    airy_argument, airy_term, j_parameters, j_term, k_near_shestopalov, sp_term, JParameters,
    LocalSheet, TermDescriptor, TermKind,
};
