//! Exact certification of a WZ pair, the finite identities around it, and
//! the supercongruences it yields, checked prime by prime.

pub mod cli;
pub mod combinat;
pub mod congruences;
pub mod error;
pub mod exactnum;
pub mod identities;
pub mod special;
pub mod wz;

pub use error::{Error, Result};
pub use exactnum::{BigRational, Residue};
