//! Exact arithmetic for number fields, fractional ideals, elliptic
//! divisibility sequences, division-ample sets and the integrality
//! certificates built on top of them.

pub mod arith;
pub mod config;
pub mod curve;
pub mod divample;
pub mod eds;
pub mod embed;
pub mod error;
pub mod field;
pub mod htp;
pub mod ideals;
pub mod lemmas;
pub mod modp;
pub mod poly;
pub mod residue;
pub mod suite;
pub mod torsion;

pub use error::{Error, Result};
pub use field::{FieldElement, NumberField};
