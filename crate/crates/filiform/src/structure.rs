//! Structure theory used by the conjugacy solver: exact roots, maximal roots
//! modulo the center, centralizer descriptions, and the central-defect
//! homomorphism measuring how far a commuting pair is from commuting one
//! rank higher.
//!
//! These groups are torsion-free and nilpotent, so `p`-th roots are unique
//! when they exist; everything here is exact and verified inline.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::group::GroupElement;

/// The unique `p`-th root of `g`, if one exists.
///
/// Works coordinate by coordinate from the top: a root of `g` projects to a
/// root of the projection of `g`, and the remaining central coordinate is
/// fixed by a divisibility check.
pub fn root_exact(g: &GroupElement, p: u64) -> Option<GroupElement> {
    assert!(p >= 1, "root exponent must be at least 1");
    if p == 1 {
        return Some(g.clone());
    }
    let p_big = BigInt::from(p);
    if g.dim() == 1 {
        let (t_div, t_rem) = g.t_exp().div_rem(&p_big);
        let (a_div, a_rem) = g.a_exp(1).div_rem(&p_big);
        if !t_rem.is_zero() || !a_rem.is_zero() {
            return None;
        }
        return Some(GroupElement::new(t_div, vec![a_div]));
    }
    let upper = root_exact(&g.project(), p)?;
    let lifted = upper.lift();
    let gap = g.a_exp(g.dim()) - lifted.power(&p_big).a_exp(g.dim());
    let (c, rem) = gap.div_rem(&p_big);
    if !rem.is_zero() {
        return None;
    }
    let root = lifted.multiply(&GroupElement::central_power(g.dim(), c));
    debug_assert_eq!(root.power(&p_big), *g);
    Some(root)
}

/// Writes `g = base^exponent (a_d)^central_offset` with the exponent as large
/// as possible and `0 <= central_offset < exponent`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDecomposition {
    pub base: GroupElement,
    pub exponent: u64,
    pub central_offset: u64,
}

fn divisors_desc(n: u64) -> Vec<u64> {
    let mut divs = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            divs.push(i);
            if i != n / i {
                divs.push(n / i);
            }
        }
        i += 1;
    }
    divs.sort_unstable_by(|a, b| b.cmp(a));
    divs
}

/// The maximal-root decomposition of an element with nonzero `t`-exponent.
///
/// Panics on lattice elements (their root structure is plain integer
/// divisibility) and on `t`-exponents whose magnitude exceeds `u64`, since
/// the divisor enumeration walks `sqrt(|t_exp|)` candidates.
pub fn max_root_mod_center(g: &GroupElement) -> RootDecomposition {
    assert!(
        !g.in_lattice(),
        "maximal-root decomposition requires a nonzero t-exponent"
    );
    let n = g
        .t_exp()
        .abs()
        .to_u64()
        .expect("t-exponent magnitude must fit in 64 bits");
    let dim = g.dim();
    if dim == 1 {
        let p_big = BigInt::from(n);
        let offset = g.a_exp(1).mod_floor(&p_big);
        let base = GroupElement::new(
            g.t_exp() / &p_big,
            vec![(g.a_exp(1) - &offset) / &p_big],
        );
        return RootDecomposition {
            base,
            exponent: n,
            central_offset: offset.to_u64().unwrap(),
        };
    }
    for p in divisors_desc(n) {
        let Some(upper) = root_exact(&g.project(), p) else {
            continue;
        };
        let p_big = BigInt::from(p);
        let lifted = upper.lift();
        let gap = g.a_exp(dim) - lifted.power(&p_big).a_exp(dim);
        let offset = gap.mod_floor(&p_big);
        let base = lifted.multiply(&GroupElement::central_power(dim, (&gap - &offset) / &p_big));
        let decomposition = RootDecomposition {
            base,
            exponent: p,
            central_offset: offset.to_u64().unwrap(),
        };
        debug_assert_eq!(
            decomposition
                .base
                .power(&p_big)
                .multiply(&GroupElement::central_power(
                    dim,
                    BigInt::from(decomposition.central_offset)
                )),
            *g
        );
        return decomposition;
    }
    unreachable!("exponent 1 always admits a root");
}

/// Shape of a centralizer: the whole group, the abelian coordinate lattice,
/// or a rank-two subgroup spanned by a maximal root and the center.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CentralizerKind {
    Full,
    Lattice,
    RankTwo,
}

#[derive(Clone, Debug)]
pub struct CentralizerDescription {
    pub kind: CentralizerKind,
    pub generators: Vec<GroupElement>,
}

/// Generators of the centralizer of `g`.
pub fn centralizer(g: &GroupElement) -> CentralizerDescription {
    let dim = g.dim();
    if g.is_central() {
        let mut generators = vec![GroupElement::t_generator(dim)];
        for i in 1..=dim {
            generators.push(GroupElement::a_generator(dim, i));
        }
        return CentralizerDescription {
            kind: CentralizerKind::Full,
            generators,
        };
    }
    if g.in_lattice() {
        let generators = (1..=dim).map(|i| GroupElement::a_generator(dim, i)).collect();
        return CentralizerDescription {
            kind: CentralizerKind::Lattice,
            generators,
        };
    }
    let root = max_root_mod_center(g);
    CentralizerDescription {
        kind: CentralizerKind::RankTwo,
        generators: vec![root.base, GroupElement::a_generator(dim, dim)],
    }
}

/// The central-defect homomorphism: for `x` commuting with `g`, lifts both one
/// rank up, where they may fail to commute by a central amount, and returns
/// that amount.
pub fn zeta(g: &GroupElement, x: &GroupElement) -> Result<BigInt, Error> {
    assert_eq!(g.dim(), x.dim(), "dimension mismatch");
    let commutator = x.invert().multiply(g).multiply(x).multiply(&g.invert());
    if !commutator.is_identity() {
        return Err(Error::NotInCentralizer);
    }
    let g_up = g.lift();
    let x_up = x.lift();
    let defect = x_up
        .invert()
        .multiply(&g_up)
        .multiply(&x_up)
        .multiply(&g_up.invert());
    assert!(
        defect.is_central(),
        "defect of a commuting pair must be central one rank up"
    );
    Ok(defect.a_exp(defect.dim()).clone())
}

/// The image of the central-defect homomorphism on the centralizer of `g`,
/// together with the maximal-root data that computes it.
#[derive(Clone, Debug)]
pub struct ZetaData {
    pub base: GroupElement,
    pub exponent: u64,
    pub central_offset: u64,
    pub base_t_exp: BigInt,
    pub offset_gcd: u64,
    pub image_generator: BigInt,
}

/// Computes the image `(base_t_exp * gcd(exponent, central_offset)) Z` of the
/// central-defect homomorphism for an element with nonzero `t`-exponent, and
/// verifies the two identities pinning it down:
/// the defect of the central generator is the full `t`-exponent, and the
/// defect of the maximal root is `central_offset * base_t_exp`.
pub fn zeta_image(g: &GroupElement) -> ZetaData {
    let root = max_root_mod_center(g);
    let dim = g.dim();
    let base_t_exp = root.base.t_exp().clone();
    let offset_gcd = root.exponent.gcd(&root.central_offset);
    let image_generator = &base_t_exp * BigInt::from(offset_gcd);

    let central_inv = GroupElement::a_generator(dim, dim).invert();
    assert_eq!(
        zeta(g, &central_inv).expect("the center always commutes"),
        g.t_exp().clone(),
        "defect of the inverse central generator must be the t-exponent"
    );
    assert_eq!(
        zeta(g, &root.base).expect("a maximal root always commutes"),
        BigInt::from(root.central_offset) * &base_t_exp,
        "defect of the maximal root must be offset times its t-exponent"
    );

    ZetaData {
        base: root.base,
        exponent: root.exponent,
        central_offset: root.central_offset,
        base_t_exp,
        offset_gcd,
        image_generator,
    }
}

/// Solves `lambda * a - mu * b = gcd(a, b)` with `0 < mu < a` and
/// `0 < lambda <= b`. Requires `a` to not divide `b`.
pub fn bezout_bounded(a: u64, b: u64) -> (u64, u64) {
    assert!(a >= 1 && b >= 1, "arguments must be positive");
    assert!(
        !b.is_multiple_of(a),
        "a dividing b admits the trivial combination"
    );
    let big_a = BigInt::from(a);
    let big_b = BigInt::from(b);
    let ext = big_a.extended_gcd(&big_b);
    let modulus = &big_a / &ext.gcd;
    let mu = (-ext.y).mod_floor(&modulus);
    assert!(!mu.is_zero(), "reduction cannot vanish when a does not divide b");
    let lambda = (&ext.gcd + &mu * &big_b) / &big_a;
    (
        lambda.to_u64().expect("lambda is bounded by b"),
        mu.to_u64().expect("mu is bounded by a"),
    )
}
