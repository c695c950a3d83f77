//! Boolean network logic (BNL), its bridges to self-feeding circuits and
//! neural networks, and compilers for one-hot integer and floating-point
//! arithmetic.

pub mod bnl;
pub mod circuit;
pub mod error;
pub mod float;
pub mod formula;
pub mod gen;
pub mod harness;
pub mod int;
pub mod logic;
pub mod nn;
pub mod oracle;
pub mod rounds;
pub mod sc;
pub mod sim;
pub mod translate;

pub use error::{Error, Result};
pub use formula::Formula;
