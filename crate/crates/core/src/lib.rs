//! Exact computer algebra for a one-variable twisted algebra `A = R[x]` with
//! endomorphism `sigma(x) = q x + h`.
//!
//! - [`qcoeff`]: scalars in `q` and quantum binomial coefficients.
//! - [`twisted_ring`]: the twist, twisted powers, twisted quotients and
//!   localizations.
//! - [`principal_parts`]: `P_A = A[xt]`, the twisted powers of the diagonal
//!   ideal and Taylor expansion on the `xi` basis.
//! - [`prop_verify`]: base change of truncated principal parts along twisted
//!   quotients and localizations, including an explicit inverse of `xt`.
//! - [`expr`]: the text grammar for elements.

pub mod error;
pub mod expr;
pub mod principal_parts;
pub mod prop_verify;
pub mod qcoeff;
mod render;
pub mod twisted_ring;

pub use error::{Error, ParseError, Result};
pub use principal_parts::{
    reduce_mod_ideal_power, taylor_expand, taylor_reconstruct, verify_product_identity,
    xi_twisted_power, IdealTwistedPower, PPElement, TaylorExpansion,
};
pub use prop_verify::{
    invert_xtilde, verify_localization_base_change, verify_quotient_base_change,
    BaseChangeCase, BaseChangeReport, MonoidSPrime, XtildeInverse,
};
pub use qcoeff::{q_binomial, q_factorial, q_integer, specialize, QBinomTable, QMode, QScalar};
pub use twisted_ring::{AlgebraCarrier, AlgebraElement, CarrierKind, TwistSpec};
