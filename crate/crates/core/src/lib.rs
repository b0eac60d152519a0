//! Factorization of `x^{p+1} - 1` over the Galois rings `Z/p^e` by structural
//! lifting of Dickson seeds, with a classical Hensel baseline and a Gray-image
//! code search built on top.

pub mod arith;
pub mod baseline;
pub mod dickson;
pub mod engine;
pub mod error;
pub mod graycodes;
pub mod ring;
pub mod seedgen;
pub mod vlift;

pub use engine::{factor, lift_trace, FactorOptions, Factorization, Mode};
pub use error::{Error, Result};
pub use ring::{ElemClass, Modulus, RingElem, RingPoly};
