//! Local invariants of smooth plane curves over finite fields and a verifier for
//! the point-count formula `N = (d(q + 5 - 2d) - k) / 2` of curves that are
//! Frobenius non-classical with respect to conics.

pub mod algebra;
pub mod config;
pub mod counting;
pub mod curve;
pub mod divisors;
pub mod error;
pub mod exec;
pub mod osculation;
pub mod theorem;
pub mod families;
pub mod io;

pub use config::Config;
pub use error::{Error, Result};
pub use exec::Executor;
