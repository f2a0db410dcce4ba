//! Short-word synthesis: explicit generator words of provably small length
//! evaluating to a requested normal form.
//!
//! The key gadget is the commutator identity
//! `a_{d-1}^{-K} t^{-k} a_{d-1}^{K} t^{k} = a_d^{K k}`, which packs `k^d`
//! into the center using `O(k)` letters once `K = k^{d-1}` is itself cheap.
//! Sums of few d-th powers then reach every central exponent, and peeling one
//! coordinate at a time reaches every element.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::group::{Generator, GroupElement, Word};

use super::waring::waring_decompose;

fn int_pow(base: &BigInt, exp: usize) -> BigInt {
    num_traits::pow(base.clone(), exp)
}

/// A word evaluating to `a_dim^power`, of length linear in `|power|^{1/dim}`.
pub fn central_power_word(power: &BigInt, dim: usize) -> Word {
    assert!(dim >= 1, "dimension must be at least 1");
    if power.is_zero() {
        return Word::empty(dim);
    }
    if power.is_negative() {
        return central_power_word(&-power, dim).inverse();
    }
    if dim == 1 {
        let mut w = Word::empty(1);
        w.push_power(Generator::A(1), power);
        return w;
    }
    let mut result = Word::empty(dim);
    for part in waring_decompose(power, dim as u32) {
        let inner = central_power_word(&int_pow(&part, dim - 1), dim - 1).embed(dim);
        let mut gadget = inner.inverse();
        gadget.push_power(Generator::T, &-&part);
        gadget = gadget.concat(&inner);
        gadget.push_power(Generator::T, &part);
        result = result.concat(&gadget);
    }
    result
}

/// A generator word evaluating exactly to `g`, with length bounded by a
/// dimension-dependent constant times the word-metric size of `g`.
///
/// Coordinates are matched top-down: a short word for the projection of `g`
/// is re-read in the full group, and the central discrepancy it leaves is
/// repaired with [`central_power_word`].
pub fn short_word(g: &GroupElement) -> Word {
    let dim = g.dim();
    if dim == 1 {
        let mut w = Word::empty(1);
        w.push_power(Generator::T, g.t_exp());
        w.push_power(Generator::A(1), g.a_exp(1));
        return w;
    }
    let upper = short_word(&g.project()).embed(dim);
    let achieved = upper.eval().a_exp(dim).clone();
    let missing = g.a_exp(dim) - achieved;
    upper.concat(&central_power_word(&missing, dim))
}
