//! Exact arithmetic: finite fields, polynomials, power series and Hasse derivatives.

pub mod field;
pub mod mpoly;
pub mod resultant;
pub mod series;
pub mod upoly;

pub use field::{binomial_mod, make_field, Fe, Field, FieldDesc};
pub use mpoly::{hessian, Exps, MultiPoly};
pub use series::{hasse_poly, Order, PowerSeries};
