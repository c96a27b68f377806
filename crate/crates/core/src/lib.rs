//! Period function of `(φ_p(w'))' + V'(w) = 0` around a center.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod criteria;
pub mod dynamics;
pub mod error;
pub mod grid;
pub mod period;
pub mod potentials;
pub mod quadrature;
pub mod roots;
pub mod verdict;

pub use error::{Error, Result};
pub use potentials::{phi, turning_points, EnergyGeometry, Exponents, PotentialSpec};
pub use verdict::Verdict;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/potentials.md")]
    mod potentials {}
    #[doc = include_str!("../../../book/src/period.md")]
    mod period {}
    #[doc = include_str!("../../../book/src/derivative.md")]
    mod derivative {}
    #[doc = include_str!("../../../book/src/criteria.md")]
    mod criteria {}
    #[doc = include_str!("../../../book/src/dynamics.md")]
    mod dynamics {}
    #[doc = include_str!("../../../book/src/asymptotics.md")]
    mod asymptotics {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
