//! Hecke operators, Satake parameters and Euler factors, partial
//! L-functions, the doubling normalizer `d_{n,v}`, Rankin-Selberg sums and
//! Petersson products.

mod euler;
mod qexp1;
mod quadrature;
mod rankin;
mod satake;

pub use euler::*;
pub use qexp1::*;
pub use quadrature::gauss_legendre;
pub use rankin::*;
pub use satake::*;
