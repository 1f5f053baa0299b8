// `Element` hashes by system id and word; the system's caches do not take part.
#![allow(clippy::mutable_key_type)]

pub mod budget;
pub mod diagram;
pub mod element;
pub mod error;
pub mod field;
pub mod geometry;
pub mod int;
pub mod linalg;
pub mod parabolic;
pub mod presets;
pub mod system;
pub mod theorems;
pub mod verdict;

pub use budget::Budget;
pub use diagram::{CoxeterMatrix, DiagramType, GenSet};
pub use error::{Error, Result};
pub use field::{Field, Num};
pub use int::Int;
pub use verdict::Verdict;
