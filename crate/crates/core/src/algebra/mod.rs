//! Exact arithmetic: Laurent polynomials in `L` with opaque symbols,
//! rational series in `T`, rational functions over `Q`, and the expression
//! grammar shared by the file format and the command line.

mod expr;
mod qpoly;
mod ratfunc;
mod ring;
mod series;
mod symbol;

use thiserror::Error;

pub use expr::{parse_qpoly, parse_ring, parse_series, ParseError};
pub use qpoly::{QMonomial, QPoly, SubstitutionTable};
pub use ratfunc::{cyclotomic, RationalFunctionQ};
pub use ring::{Monomial, RingElem};
pub use series::{Division, FactorKey, Normalized, RationalSeries, TPoly};
pub use symbol::Symbol;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("non-invertible element")]
    NonInvertible,
    #[error("missing table entry for symbol {0}")]
    MissingSymbol(String),
    #[error("image of L is not invertible")]
    NonInvertibleImage,
    #[error("limit undefined for non-positive multiplicity (factor A({}, {}))", .0.nu, .0.m)]
    NonPositiveMultiplicity(FactorKey),
    #[error("division by zero")]
    DivisionByZero,
}
