//! Exact rational and imaginary-quadratic arithmetic, MPFR-backed complex
//! numbers, and the Bernoulli/zeta/divisor-sum primitives.

pub mod arith;
pub mod bernoulli;
pub mod complex;
pub mod field;
pub mod kmatrix;
pub mod rational;

pub use arith::{divisor_sum, is_prime, primes_up_to};
pub use bernoulli::{bernoulli, irregular_prime, kummer_congruent, zeta_even, zeta_neg, ZetaEven};
pub use complex::{BigComplex, DEFAULT_PRECISION};
pub use field::{FieldElem, QuadField};
pub use kmatrix::KMatrix;
pub use rational::Rational;
