//! Quadrature rules: tanh-sinh for endpoint-singular integrands in the
//! `w` variable, Gauss–Legendre for the smooth `θ` route.

mod gauss_legendre;
mod tanh_sinh;

pub use gauss_legendre::GaussLegendre;
pub use tanh_sinh::{Quad, TanhSinh};
