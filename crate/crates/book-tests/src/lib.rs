//! The guide's code listings, compiled and run as doctests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/classes.md")]
pub mod classes {}
#[doc = include_str!("../../../book/src/series.md")]
pub mod series {}
#[doc = include_str!("../../../book/src/configurations.md")]
pub mod configurations {}
#[doc = include_str!("../../../book/src/zeta.md")]
pub mod zeta {}
#[doc = include_str!("../../../book/src/specializations.md")]
pub mod specializations {}
#[doc = include_str!("../../../book/src/blowups.md")]
pub mod blowups {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
