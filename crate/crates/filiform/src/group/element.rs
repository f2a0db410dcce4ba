//! Group elements in normal form and the collection law.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::phi::apply_phi_power;
use crate::error::Error;

/// An element of the rank-`dim` group, stored in normal form
/// `t^r a_1^{p_1} ... a_d^{p_d}` as the coordinate tuple `(r; p_1, ..., p_d)`.
///
/// The normal form is unique, so derived equality and hashing are exact.
/// The derived ordering (by `t_exp`, then the lattice exponents
/// lexicographically) is the canonical tie-break order used everywhere a
/// deterministic enumeration is required.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    t_exp: BigInt,
    a_exps: Vec<BigInt>,
}

impl GroupElement {
    pub fn new(t_exp: BigInt, a_exps: Vec<BigInt>) -> Self {
        assert!(!a_exps.is_empty(), "dimension must be at least 1");
        GroupElement { t_exp, a_exps }
    }

    /// Convenience constructor from machine integers.
    pub fn from_i64(t_exp: i64, a_exps: &[i64]) -> Self {
        Self::new(
            BigInt::from(t_exp),
            a_exps.iter().map(|&v| BigInt::from(v)).collect(),
        )
    }

    pub fn identity(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        GroupElement {
            t_exp: BigInt::zero(),
            a_exps: vec![BigInt::zero(); dim],
        }
    }

    /// The stable letter `t`.
    pub fn t_generator(dim: usize) -> Self {
        let mut g = Self::identity(dim);
        g.t_exp = BigInt::from(1);
        g
    }

    /// The lattice generator `a_i`, 1-based.
    pub fn a_generator(dim: usize, i: usize) -> Self {
        assert!((1..=dim).contains(&i), "generator index {i} out of 1..={dim}");
        let mut g = Self::identity(dim);
        g.a_exps[i - 1] = BigInt::from(1);
        g
    }

    /// `a_dim^k`, a central element.
    pub fn central_power(dim: usize, k: BigInt) -> Self {
        let mut g = Self::identity(dim);
        g.a_exps[dim - 1] = k;
        g
    }

    pub fn dim(&self) -> usize {
        self.a_exps.len()
    }

    pub fn t_exp(&self) -> &BigInt {
        &self.t_exp
    }

    pub fn a_exps(&self) -> &[BigInt] {
        &self.a_exps
    }

    /// Lattice exponent of `a_i`, 1-based.
    pub fn a_exp(&self, i: usize) -> &BigInt {
        &self.a_exps[i - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.t_exp.is_zero() && self.a_exps.iter().all(Zero::is_zero)
    }

    /// Whether the element lies in the abelian normal subgroup `Z^dim`
    /// (zero `t`-exponent).
    pub fn in_lattice(&self) -> bool {
        self.t_exp.is_zero()
    }

    /// Whether the element lies in the centre, the cyclic subgroup
    /// generated by `a_dim`.
    pub fn is_central(&self) -> bool {
        self.in_lattice() && self.a_exps[..self.dim() - 1].iter().all(Zero::is_zero)
    }

    /// Collection law: `t^r a^p * t^s a^q = t^{r+s} a^{phi^s(p) + q}`,
    /// where `phi` is the defining automorphism of the lattice.
    ///
    /// # Panics
    ///
    /// Panics on dimension mismatch.
    pub fn multiply(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        let mut a_exps = apply_phi_power(&other.t_exp, &self.a_exps);
        for (a, b) in a_exps.iter_mut().zip(&other.a_exps) {
            *a += b;
        }
        GroupElement {
            t_exp: &self.t_exp + &other.t_exp,
            a_exps,
        }
    }

    /// Inverse: `(t^r a^p)^{-1} = t^{-r} a^{-phi^{-r}(p)}`.
    pub fn invert(&self) -> Self {
        let mut a_exps = apply_phi_power(&(-&self.t_exp), &self.a_exps);
        for a in a_exps.iter_mut() {
            *a = -std::mem::take(a);
        }
        GroupElement {
            t_exp: -&self.t_exp,
            a_exps,
        }
    }

    /// Integer power by binary exponentiation; negative exponents go through
    /// the inverse.
    pub fn power(&self, n: &BigInt) -> Self {
        if n.is_zero() {
            return Self::identity(self.dim());
        }
        let mut sq = if n.is_negative() {
            self.invert()
        } else {
            self.clone()
        };
        let mut e = n.magnitude().clone();
        let mut acc = Self::identity(self.dim());
        loop {
            if e.is_odd() {
                acc = acc.multiply(&sq);
            }
            e >>= 1;
            if e.is_zero() {
                break;
            }
            sq = sq.multiply(&sq);
        }
        acc
    }

    pub fn pow_i64(&self, n: i64) -> Self {
        self.power(&BigInt::from(n))
    }

    /// Quotient map killing the centre: drops the last lattice coordinate.
    ///
    /// # Panics
    ///
    /// Panics at dimension 1.
    pub fn project(&self) -> Self {
        assert!(self.dim() >= 2, "cannot project below dimension 1");
        GroupElement {
            t_exp: self.t_exp.clone(),
            a_exps: self.a_exps[..self.dim() - 1].to_vec(),
        }
    }

    /// The canonical section of `project`: appends a zero last coordinate.
    pub fn lift(&self) -> Self {
        let mut a_exps = self.a_exps.clone();
        a_exps.push(BigInt::zero());
        GroupElement {
            t_exp: self.t_exp.clone(),
            a_exps,
        }
    }
}

impl fmt::Display for GroupElement {
    /// Canonical text form `d; r; p1,p2,...,pd`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}; {}; ", self.dim(), self.t_exp)?;
        for (k, p) in self.a_exps.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self)
    }
}

fn parse_bigint(text: &str, offset: usize, what: &str) -> Result<BigInt, Error> {
    let trimmed = text.trim();
    let position = offset + (text.len() - text.trim_start().len());
    BigInt::from_str(trimmed).map_err(|_| Error::Parse {
        position,
        message: format!("expected {what}, found {trimmed:?}"),
    })
}

impl FromStr for GroupElement {
    type Err = Error;

    /// Parses the canonical text form `d; r; p1,p2,...,pd`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let mut sections = Vec::with_capacity(3);
        let mut start = 0usize;
        for (idx, ch) in s.char_indices() {
            if ch == ';' {
                sections.push((start, &s[start..idx]));
                start = idx + 1;
            }
        }
        sections.push((start, &s[start..]));
        if sections.len() != 3 {
            return Err(Error::Parse {
                position: 0,
                message: format!(
                    "expected `d; r; p1,...,pd` with two semicolons, found {} section(s)",
                    sections.len()
                ),
            });
        }
        let dim_text = sections[0].1.trim();
        let dim: usize = dim_text.parse().map_err(|_| Error::Parse {
            position: sections[0].0,
            message: format!("expected a dimension, found {dim_text:?}"),
        })?;
        if dim == 0 {
            return Err(Error::Parse {
                position: sections[0].0,
                message: "dimension must be at least 1".to_string(),
            });
        }
        let t_exp = parse_bigint(sections[1].1, sections[1].0, "t-exponent")?;
        let (coords_offset, coords_text) = sections[2];
        let mut a_exps = Vec::with_capacity(dim);
        let mut piece_start = 0usize;
        let pieces_end = coords_text.len();
        let mut pieces = Vec::new();
        for (idx, ch) in coords_text.char_indices() {
            if ch == ',' {
                pieces.push((piece_start, &coords_text[piece_start..idx]));
                piece_start = idx + 1;
            }
        }
        pieces.push((piece_start, &coords_text[piece_start..pieces_end]));
        for (off, piece) in &pieces {
            a_exps.push(parse_bigint(piece, coords_offset + off, "lattice exponent")?);
        }
        if a_exps.len() != dim {
            return Err(Error::Parse {
                position: coords_offset,
                message: format!(
                    "expected {dim} lattice exponents, found {}",
                    a_exps.len()
                ),
            });
        }
        Ok(GroupElement::new(t_exp, a_exps))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::phi::phi_pow;

    fn el(t: i64, a: &[i64]) -> GroupElement {
        GroupElement::from_i64(t, a)
    }

    #[test]
    fn generator_product_collects() {
        let a1 = GroupElement::a_generator(2, 1);
        let t = GroupElement::t_generator(2);
        assert_eq!(a1.multiply(&t), el(1, &[1, 1]));
    }

    #[test]
    fn stable_letter_conjugation_relation() {
        // t^{-1} a_i t = a_i a_{i+1} for i < d, and t fixes a_d.
        for dim in 2..=5 {
            let t = GroupElement::t_generator(dim);
            for i in 1..dim {
                let lhs = t
                    .invert()
                    .multiply(&GroupElement::a_generator(dim, i))
                    .multiply(&t);
                let rhs = GroupElement::a_generator(dim, i)
                    .multiply(&GroupElement::a_generator(dim, i + 1));
                assert_eq!(lhs, rhs, "dim {dim}, generator {i}");
            }
            let lhs = t
                .invert()
                .multiply(&GroupElement::a_generator(dim, dim))
                .multiply(&t);
            assert_eq!(lhs, GroupElement::a_generator(dim, dim));
        }
    }

    #[test]
    fn invert_example() {
        let g = el(1, &[1, 0]); // t a_1
        assert_eq!(g.invert(), el(-1, &[-1, 1]));
        assert!(g.multiply(&g.invert()).is_identity());
        assert!(g.invert().multiply(&g).is_identity());
    }

    #[test]
    fn power_example() {
        let g = el(1, &[1, 1]); // a_1 t in normal form
        assert_eq!(g.power(&BigInt::from(2)), el(2, &[2, 3]));
    }

    #[test]
    fn triangular_exponent_growth() {
        // The a_2-exponent of (a_1 t)^n is 1 + 2 + ... + n.
        let g = el(1, &[1, 1]);
        let mut acc = GroupElement::identity(2);
        for n in 1..=40i64 {
            acc = acc.multiply(&g);
            assert_eq!(acc, g.power(&BigInt::from(n)));
            assert_eq!(*acc.a_exp(2), BigInt::from(n * (n + 1) / 2), "n = {n}");
        }
    }

    #[test]
    fn power_negative_and_zero() {
        let g = el(2, &[3, -1, 4]);
        assert!(g.power(&BigInt::zero()).is_identity());
        let inv3 = g.power(&BigInt::from(-3));
        assert!(g.pow_i64(3).multiply(&inv3).is_identity());
    }

    #[test]
    fn multiply_uses_automorphism_power() {
        let g = el(0, &[1, 0]);
        let h = el(4, &[0, 0]);
        let expected = phi_pow(2, 4).apply(g.a_exps());
        let prod = g.multiply(&h);
        assert_eq!(prod.a_exps(), &expected[..]);
        assert_eq!(*prod.t_exp(), BigInt::from(4));
    }

    #[test]
    fn project_is_homomorphism_and_lift_sections_it() {
        let g = el(2, &[1, -3, 5]);
        let h = el(-1, &[0, 2, 7]);
        assert_eq!(
            g.multiply(&h).project(),
            g.project().multiply(&h.project())
        );
        assert_eq!(g.project().lift().project(), g.project());
    }

    #[test]
    fn central_power_commutes() {
        let g = el(3, &[1, 2, -1]);
        let z = GroupElement::central_power(3, BigInt::from(9));
        assert_eq!(g.multiply(&z), z.multiply(&g));
    }

    #[test]
    fn text_roundtrip() {
        let g = el(-4, &[0, 17, -2]);
        let text = g.to_string();
        assert_eq!(text, "3; -4; 0,17,-2");
        let back: GroupElement = text.parse().unwrap();
        assert_eq!(back, g);
        let spaced: GroupElement = "2; 0; 1,1".parse().unwrap();
        assert_eq!(spaced, el(0, &[1, 1]));
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = "2; x; 1,1".parse::<GroupElement>().unwrap_err();
        match err {
            Error::Parse { position, .. } => assert_eq!(position, 3),
            other => panic!("unexpected error {other:?}"),
        }
        assert!("2; 0; 1".parse::<GroupElement>().is_err());
        assert!("0; 0; ".parse::<GroupElement>().is_err());
        assert!("2; 0".parse::<GroupElement>().is_err());
    }
}
