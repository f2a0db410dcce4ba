//! Exact computation in the model filiform groups: the semidirect products
//! `Z^d ⋊ Z` in which the stable letter acts on the lattice by the unipotent
//! automorphism fixing the last basis vector and sending each earlier `a_i`
//! to `a_i a_{i+1}`.
//!
//! The crate provides, with exact big-integer arithmetic throughout:
//!
//! - [`group`]: normal forms, the collection law, automorphism powers in
//!   closed form, and formal words over the standard generators;
//! - [`metric`]: breadth-first Cayley-ball enumeration with persistent
//!   caches, exact word distances, coordinate-derived length lower bounds,
//!   and explicit short words realizing a given element;
//! - [`structure`]: exact roots, maximal roots modulo the centre,
//!   centralizers, the central-defect homomorphism attached to an element,
//!   and bounded Bézout coefficients;
//! - [`conjugacy`]: a complete conjugacy decision procedure returning
//!   verified witnesses, brute-force shortest conjugators for cross-checks,
//!   and conjugator-length experiments.

pub mod conjugacy;
pub mod error;
pub mod group;
pub mod metric;
pub mod structure;

pub use error::Error;
pub use group::{epsilon, phi_pow, Generator, GroupElement, Letter, PhiMatrix, Word};
