//! Weighted zero-sum constants over `Z_n`.
//!
//! The crate computes unit and square weight sets, decides whether a sequence
//! has an `A`-weighted zero-sum subsequence (arbitrary or consecutive), and
//! computes the weighted Davenport constant `D_A(n)` and its consecutive
//! counterpart `C_A(n)` by exhaustive search. The [`theory`] module predicts
//! both constants for `A = S(n)*` and checks the predictions against explicit
//! extremal sequences and search.

pub mod arith;
pub mod bitset;
pub mod engine;
pub mod error;
pub mod search;
pub mod sets;
pub mod theory;

pub use arith::{Factorization, Modulus, Residue};
pub use engine::{Mode, Sequence, SumSet, WeightSet, Witness};
pub use error::{Error, Result};
pub use sets::ResidueSet;
