//! Computational toolkit for automorphic forms on unitary groups: exact
//! special values, Hermitian spaces and PEL data, symmetric domains and
//! automorphy factors, Hermitian q-expansions, Eisenstein series, the
//! Maass-Shimura operator, Hecke/Satake/Euler-product machinery, and a
//! finite-field verifier of the doubling orbit decomposition.

pub mod error;
pub mod doublingff;
pub mod eisenstein;
pub mod exactarith;
pub mod heckelfun;
pub mod hermspace;
pub mod maass;
pub mod qexp;
pub mod symdomain;

pub use error::{Error, Result};
