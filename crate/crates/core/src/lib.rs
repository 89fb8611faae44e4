//! Exact computation of motivic infinite cyclic zeta functions from
//! combinatorial resolution data, with blow-up invariance checks and the
//! usual specializations.

pub mod algebra;
pub mod model;
pub mod zeta;
pub mod blowup;
pub mod campaign;
pub mod cli;
pub mod document;
