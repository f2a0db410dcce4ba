//! The word metric with respect to the standard generators: exact distances
//! by ball enumeration, certified two-sided bounds everywhere else, and the
//! effective constants tying normal-form size to word length.
//!
//! - [`size_lower_bound`] gives the polynomial lower bound
//!   `max(|r|, max_i |p_i|^{1/i})` on the distance of `(r; p_1, ..., p_d)`.
//! - [`short_word`] gives the matching upper bound as an explicit word.
//! - [`exact_distance`] resolves the gap by breadth-first search up to a
//!   caller-chosen radius, returning a certificate either way.
//! - [`Constants`] evaluates the recursions bounding the upper-to-lower
//!   ratio in each rank.

mod ball;
mod waring;
mod words;

pub use ball::{enumerate_ball, enumerate_ball_with, standard_generators, BallCache, BallOptions};
pub use waring::{classical_waring_bound, session_max_parts, waring_decompose, DP_LIMIT};
pub use words::{central_power_word, short_word};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::group::GroupElement;

/// Outcome of a distance query against a finite search radius.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Distance {
    /// The exact word-metric distance.
    Exact(u32),
    /// The element lies outside the searched ball; the distance is at least
    /// this value.
    AtLeast(u32),
}

/// Largest `y >= 0` with `y^k <= x`. Requires `x >= 0` and `k >= 1`.
pub fn nth_root_floor(x: &BigInt, k: u32) -> BigInt {
    assert!(k >= 1, "root index must be at least 1");
    assert!(!x.is_negative(), "radicand must be nonnegative");
    if x.is_zero() || x.is_one() || k == 1 {
        return x.clone();
    }
    let mut lo = BigInt::one();
    let mut hi = BigInt::from(2);
    while num_traits::pow(hi.clone(), k as usize) <= *x {
        lo = hi.clone();
        hi *= 2;
    }
    while &lo + 1 < hi {
        let mid: BigInt = (&lo + &hi) >> 1;
        if num_traits::pow(mid.clone(), k as usize) <= *x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Smallest `y >= 0` with `y^k >= x`. Requires `x >= 0` and `k >= 1`.
pub fn nth_root_ceil(x: &BigInt, k: u32) -> BigInt {
    let floor = nth_root_floor(x, k);
    if num_traits::pow(floor.clone(), k as usize) == *x {
        floor
    } else {
        floor + 1
    }
}

/// The polynomial lower bound on word length: any word evaluating to
/// `(r; p_1, ..., p_d)` has length at least
/// `max(|r|, max_i ceil(|p_i|^{1/i}))`, because `n` letters can move the
/// `i`-th coordinate by at most `n^i`.
pub fn size_lower_bound(g: &GroupElement) -> BigInt {
    let mut bound = g.t_exp().abs();
    for i in 1..=g.dim() {
        let coord_bound = nth_root_ceil(&g.a_exp(i).abs(), i as u32);
        if coord_bound > bound {
            bound = coord_bound;
        }
    }
    bound
}

/// Computes the distance of `g` from the identity exactly if it is at most
/// `max_radius`, and certifies `AtLeast(max_radius + 1)` otherwise.
pub fn exact_distance(g: &GroupElement, max_radius: u32) -> Result<Distance, Error> {
    let mut cache = BallCache::new(g.dim());
    exact_distance_with(g, max_radius, &mut cache, &BallOptions::default())
}

/// As [`exact_distance`], growing the supplied cache level by level and
/// stopping as soon as `g` appears.
pub fn exact_distance_with(
    g: &GroupElement,
    max_radius: u32,
    cache: &mut BallCache,
    opts: &BallOptions,
) -> Result<Distance, Error> {
    assert_eq!(g.dim(), cache.dim(), "dimension mismatch");
    loop {
        if let Some(d) = cache.distance(g) {
            return Ok(Distance::Exact(d));
        }
        if cache.radius() >= max_radius {
            return Ok(Distance::AtLeast(max_radius + 1));
        }
        let next = cache.radius() + 1;
        cache.extend_to(next, opts)?;
    }
}

/// Effective constants for one rank: how many letters the synthesizer may
/// spend per unit of the polynomial size bound.
///
/// With `M` the worst observed (or classical) number of parts in a sum of
/// `dim`-th powers, the central-word length factor obeys
/// `D_1 = 1`, `D_dim = 2 (D_{dim-1} + 1) M`, and the whole-element factor
/// obeys `C_1 = 1`, `C_dim = C_{dim-1} + D_dim (1 + C_{dim-1}^dim)`.
/// `entry_bound` is the observed maximum of
/// `ceil(|binomial(m, dim - i)| / |m|^{dim-i})` over `1 <= i < dim` and
/// `0 < |m| <= 50`.
#[derive(Clone, Debug)]
pub struct Constants {
    pub dim: usize,
    pub waring_bound: u32,
    pub central_word_factor: BigInt,
    pub whole_ball_factor: BigInt,
    pub entry_bound: BigInt,
}

impl Constants {
    /// Evaluates the recursions for the given rank. Waring bounds use the
    /// classical values; [`session_max_parts`] reports whether this session
    /// ever needed more (it never should).
    pub fn compute(dim: usize) -> Constants {
        assert!(dim >= 1, "dimension must be at least 1");
        let mut central = BigInt::one();
        let mut whole = BigInt::one();
        let mut waring = 1u32;
        for k in 2..=dim {
            waring = classical_waring_bound(k as u32);
            central = (&central + 1) * 2 * BigInt::from(waring);
            let distortion = num_traits::pow(whole.clone(), k);
            whole = &whole + &central * (BigInt::one() + distortion);
        }
        let mut entry_bound = BigInt::zero();
        for i in 1..dim {
            for m in -50..=50i64 {
                if m == 0 {
                    continue;
                }
                let num = crate::group::epsilon(dim, i, m).abs();
                let den = num_traits::pow(BigInt::from(m.abs()), dim - i);
                let ratio = (&num + &den - 1) / &den;
                if ratio > entry_bound {
                    entry_bound = ratio;
                }
            }
        }
        if dim == 1 {
            entry_bound = BigInt::one();
        }
        Constants {
            dim,
            waring_bound: waring,
            central_word_factor: central,
            whole_ball_factor: whole,
            entry_bound,
        }
    }
}

impl std::fmt::Display for Constants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "dim={} waring_bound={} central_word_factor={} whole_ball_factor={} entry_bound={}",
            self.dim,
            self.waring_bound,
            self.central_word_factor,
            self.whole_ball_factor,
            self.entry_bound
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn roots_match_library_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x2007);
        for _ in 0..500 {
            let x: u64 = rng.gen_range(0..1_000_000_000_000);
            let k: u32 = rng.gen_range(1..=7);
            let expect = BigInt::from(x).nth_root(k);
            assert_eq!(nth_root_floor(&BigInt::from(x), k), expect);
        }
    }

    #[test]
    fn root_edge_cases() {
        assert_eq!(nth_root_floor(&big(0), 3), big(0));
        assert_eq!(nth_root_floor(&big(1), 5), big(1));
        assert_eq!(nth_root_floor(&big(7), 1), big(7));
        assert_eq!(nth_root_floor(&big(8), 3), big(2));
        assert_eq!(nth_root_floor(&big(7), 3), big(1));
        assert_eq!(nth_root_ceil(&big(8), 3), big(2));
        assert_eq!(nth_root_ceil(&big(9), 3), big(3));
        assert_eq!(nth_root_ceil(&big(0), 2), big(0));
    }

    #[test]
    fn lower_bound_examples() {
        // (0; 1, 9): needs at least ceil(9^{1/2}) = 3 letters.
        let g = GroupElement::from_i64(0, &[1, 9]);
        assert_eq!(size_lower_bound(&g), big(3));
        // Dominated by the t-coordinate.
        let g = GroupElement::from_i64(-7, &[1, 1, 1]);
        assert_eq!(size_lower_bound(&g), big(7));
        // Identity.
        assert_eq!(size_lower_bound(&GroupElement::identity(4)), big(0));
    }

    #[test]
    fn lower_bound_is_sound_on_a_ball() {
        let ball = enumerate_ball(2, 6).unwrap();
        for (g, dist) in ball.iter() {
            let lb = size_lower_bound(g);
            assert!(
                lb <= BigInt::from(dist),
                "lower bound {lb} exceeds distance {dist} for {g}"
            );
        }
    }

    #[test]
    fn short_word_upper_bound_on_a_ball() {
        let ball = enumerate_ball(2, 6).unwrap();
        for (g, dist) in ball.iter() {
            let w = short_word(g);
            assert!(w.len() >= dist as usize);
            assert_eq!(w.eval(), *g);
        }
    }

    #[test]
    fn exact_distance_certificates() {
        let g = GroupElement::from_i64(0, &[2, 1]);
        assert_eq!(exact_distance(&g, 10).unwrap(), Distance::Exact(3));
        assert_eq!(exact_distance(&g, 2).unwrap(), Distance::AtLeast(3));
        let id = GroupElement::identity(2);
        assert_eq!(exact_distance(&id, 0).unwrap(), Distance::Exact(0));
    }

    #[test]
    fn exact_distance_reuses_cache() {
        let mut cache = BallCache::new(2);
        let opts = BallOptions::default();
        let g = GroupElement::from_i64(3, &[0, 0]);
        assert_eq!(
            exact_distance_with(&g, 8, &mut cache, &opts).unwrap(),
            Distance::Exact(3)
        );
        assert_eq!(cache.radius(), 3);
        let far = GroupElement::from_i64(0, &[0, 8]);
        let d = exact_distance_with(&far, 8, &mut cache, &opts).unwrap();
        assert_eq!(d, Distance::Exact(8));
        assert_eq!(cache.radius(), 8);
    }

    #[test]
    fn constants_first_ranks() {
        let c1 = Constants::compute(1);
        assert_eq!(c1.central_word_factor, big(1));
        assert_eq!(c1.whole_ball_factor, big(1));
        let c2 = Constants::compute(2);
        // D_2 = 2 (1 + 1) 4 = 16; C_2 = 1 + 16 (1 + 1) = 33.
        assert_eq!(c2.waring_bound, 4);
        assert_eq!(c2.central_word_factor, big(16));
        assert_eq!(c2.whole_ball_factor, big(33));
        assert_eq!(c2.entry_bound, big(1));
        let c3 = Constants::compute(3);
        // D_3 = 2 (16 + 1) 9 = 306; C_3 = 33 + 306 (1 + 33^3) = 10_997_061.
        assert_eq!(c3.central_word_factor, big(306));
        assert_eq!(c3.whole_ball_factor, big(10_997_061));
        assert_eq!(c3.entry_bound, big(1));
    }

    #[test]
    fn entry_bound_is_one_for_moderate_ranks() {
        for dim in 2..=6 {
            assert_eq!(Constants::compute(dim).entry_bound, big(1));
        }
    }

    #[test]
    fn short_words_stay_within_whole_ball_factor() {
        let c = Constants::compute(2);
        let mut rng = ChaCha8Rng::seed_from_u64(0x2008);
        for _ in 0..100 {
            let g = GroupElement::from_i64(
                rng.gen_range(-20..=20),
                &[rng.gen_range(-20..=20), rng.gen_range(-400..=400)],
            );
            let n = size_lower_bound(&g);
            if n.is_zero() {
                continue;
            }
            let len = BigInt::from(short_word(&g).len());
            assert!(
                len <= &c.whole_ball_factor * &n,
                "word length {len} exceeds {} x {n} for {g}",
                c.whole_ball_factor
            );
        }
    }
}
