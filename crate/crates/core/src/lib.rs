//! Exact finite-depth laboratory for a flow built under a ceiling function
//! over a binomial quotient of a Bernoulli product, the residue-class
//! binomial defects that drive its approximate-transitivity certificate, and
//! a product odometer with its Kakutani towers.

pub mod certify;
pub mod config;
pub mod crosscheck;
pub mod error;
pub mod flows;
pub mod lp;
pub mod numerics;
pub mod odometer;
pub mod product_spaces;
pub mod residue;
pub mod suite;
pub mod verify;

pub use error::{Error, Result};
pub use numerics::Rational;
