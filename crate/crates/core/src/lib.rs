//! Orders `Z + nO_K` in quadratic fields `Q(√d)`: which are associated,
//! ideal-preserving, locally associated or half-factorial, with brute-force
//! oracles over the finite quotients `O_K/(n)` and a census engine for
//! `(d, n)` grids.

pub mod arith;
pub mod atlas;
pub mod classgroup;
pub mod classify;
pub mod error;
pub mod lfun;
pub mod oracle;
pub mod pell;
pub mod quadfield;
pub mod unitindex;

pub use classify::{classify_order, ClassificationRecord, FieldData, OrderSpec};
pub use error::{Error, Result};
pub use quadfield::{FieldContext, ModQuadInt, QuadInt};
