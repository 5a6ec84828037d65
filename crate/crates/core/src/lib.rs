//! Identity-type (J-) structures on universe categories and on the
//! C-systems they generate, instantiated over finite sets so that every
//! construction runs and every law is checked by enumeration.

pub mod cc_univ;
pub mod csystem;
pub mod defects;
pub mod error;
pub mod fincat;
pub mod finset;
pub mod functors;
pub mod jcs;
pub mod juniv;
pub mod lcc;
pub mod lifting;
pub mod models;
pub mod report;
pub mod suite;
pub mod transfer;
pub mod universe;

pub use error::{Error, Result};
