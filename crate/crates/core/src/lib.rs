//! Exact numerics for Fourier-Mukai transforms and stability conditions on
//! principally polarized abelian varieties of Picard rank one.
//!
//! All arithmetic happens in `Q`, `Q(√3)` or `Q(√3) + i·Q(√3)`; nothing is
//! approximated.

pub mod chern;
pub mod error;
pub mod exactnum;
pub mod flow;
pub mod sl2cf;
pub mod stability;
pub mod suites;
pub mod symrep;

pub use error::{Error, ErrorKind, Result};
pub use exactnum::{ExactComplex, ExactScalar, Rational};
pub use sl2cf::{GeneratorWord, SL2};
