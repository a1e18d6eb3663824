//! Evolution speed of quantum states under Hermitian and non-Hermitian
//! Hamiltonians, and synthesis of Hamiltonians that spend all of their
//! spectral-norm budget on motion in projective Hilbert space.

pub mod bounds;
pub mod checks;
pub mod error;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod propagate;
pub mod scenarios;
pub mod synthesis;
pub mod trajectory;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/geometry.md")]
    mod geometry {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
    #[doc = include_str!("../../../book/src/synthesis.md")]
    mod synthesis {}
    #[doc = include_str!("../../../book/src/exceptional-points.md")]
    mod exceptional_points {}
    #[doc = include_str!("../../../book/src/scenarios.md")]
    mod scenarios {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
