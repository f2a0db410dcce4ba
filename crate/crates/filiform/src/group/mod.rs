//! Exact arithmetic in the rank-`d` model filiform group.
//!
//! The group is the semidirect product of the lattice `Z^d` (generators
//! `a_1, ..., a_d`) with an infinite cyclic group (generator `t`), where
//! conjugation by `t` fixes `a_d` and sends `a_i` to `a_i a_{i+1}`. Every
//! element has the unique normal form `t^r a_1^{p_1} ... a_d^{p_d}`.
//!
//! - [`GroupElement`]: normal forms with exact big-integer exponents, the
//!   collection law, inverses, powers, and the projection that kills the
//!   centre (dropping the last lattice coordinate maps rank `d` onto rank
//!   `d - 1`).
//! - [`PhiMatrix`], [`phi_pow`], [`epsilon`]: the defining automorphism's
//!   integer powers in closed form.
//! - [`Word`]: formal words over the standard generators with exact
//!   evaluation.

mod element;
mod phi;
mod word;

pub use element::GroupElement;
pub use phi::{binomial, epsilon, phi_pow, PhiMatrix};
pub use word::{Generator, Letter, Word};
