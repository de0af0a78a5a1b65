//! Spectral geometry of the quantum projective plane `CP²_q`.
//!
//! Representations of `U_q(su(3))` in the Gelfand–Tsetlin basis, the
//! Peter–Weyl model of `A(SU_q(3))`, the Dolbeault complex and Dirac operator
//! on `CP²_q`, a rewriting engine for the `S⁵_q` coordinate algebra, and
//! numerical checks of the classical (q = 1) picture.

pub mod classical;
pub mod cli;
pub mod dirac;
pub mod dolbeault;
pub mod irreps;
pub mod ncrewrite;
pub mod peterweyl;
pub mod qarith;
pub mod report;
pub mod ualg;
