//! The conjugacy problem, solved with explicit verified witnesses.
//!
//! The solver peels one coordinate at a time: projections one rank down are
//! solved recursively, a lifted conjugator then matches everything except a
//! central discrepancy, and the discrepancy is repaired inside the
//! centralizer of the target using the central-defect homomorphism. Every
//! witness is checked by direct multiplication before it is returned, and a
//! stage log records the repair data rank by rank.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::group::{GroupElement, Word};
use crate::metric::{enumerate_ball, short_word, BallCache};
use crate::structure::{bezout_bounded, zeta_image};

/// Right conjugation `x^{-1} g x`.
pub fn conjugate(g: &GroupElement, x: &GroupElement) -> GroupElement {
    x.invert().multiply(g).multiply(x)
}

/// Repair data for one rank of the solver: which central discrepancy was
/// canceled and with which centralizer element.
#[derive(Clone, Debug)]
pub struct StageRecord {
    /// The rank whose top coordinate was repaired.
    pub level: usize,
    /// The central discrepancy canceled at this rank.
    pub discrepancy: BigInt,
    /// Exponent of the inverse central generator one rank down.
    pub coarse_steps: BigInt,
    /// Exponent of the combined root-and-center block.
    pub fine_steps: u64,
    /// Root exponent in the combined block, when one was needed.
    pub lambda: Option<u64>,
    /// Center exponent in the combined block, when one was needed.
    pub mu: Option<u64>,
}

/// A verified solution of `x^{-1} u x = v`, with a generator word for the
/// conjugator and the per-rank repair log.
#[derive(Clone, Debug)]
pub struct ConjugacyWitness {
    pub conjugator: GroupElement,
    pub word: Word,
    pub word_length: usize,
    /// Larger of the short-word lengths of the two inputs.
    pub input_size: usize,
    pub stage_log: Vec<StageRecord>,
}

impl ConjugacyWitness {
    fn assemble(
        u: &GroupElement,
        v: &GroupElement,
        conjugator: GroupElement,
        stage_log: Vec<StageRecord>,
    ) -> Self {
        assert_eq!(
            conjugate(u, &conjugator),
            *v,
            "conjugator failed verification"
        );
        let word = short_word(&conjugator);
        let word_length = word.len();
        let input_size = short_word(u).len().max(short_word(v).len());
        ConjugacyWitness {
            conjugator,
            word,
            word_length,
            input_size,
            stage_log,
        }
    }
}

/// Conjugacy of two lattice elements. Conjugation acts on the lattice by
/// powers of the defining automorphism, so this reduces to matching a single
/// quotient and verifying.
pub fn solve_in_lattice(u: &GroupElement, v: &GroupElement) -> Option<GroupElement> {
    assert_eq!(u.dim(), v.dim(), "dimension mismatch");
    assert!(
        u.in_lattice() && v.in_lattice(),
        "both elements must have zero t-exponent"
    );
    let dim = u.dim();
    let identity = GroupElement::identity(dim);
    let first_nonzero = (1..=dim).find(|&i| !u.a_exp(i).is_zero());
    let Some(pivot) = first_nonzero else {
        return (u == v).then_some(identity);
    };
    if pivot == dim {
        return (u == v).then_some(identity);
    }
    for j in 1..pivot {
        if !v.a_exp(j).is_zero() {
            return None;
        }
    }
    if v.a_exp(pivot) != u.a_exp(pivot) {
        return None;
    }
    let (m, rem) = (v.a_exp(pivot + 1) - u.a_exp(pivot + 1)).div_rem(u.a_exp(pivot));
    if !rem.is_zero() {
        return None;
    }
    let conjugator = GroupElement::new(m, vec![BigInt::zero(); dim]);
    (conjugate(u, &conjugator) == *v).then_some(conjugator)
}

/// Finds `z` with `z^{-1} gamma z = gamma (a_d)^{ell}`, or proves there is
/// none. Requires a nonzero `t`-exponent and rank at least two.
///
/// Such `z` project to centralizer elements one rank down, where the
/// central-defect homomorphism computes the reachable discrepancies exactly:
/// they are the multiples of `base_t_exp * offset_gcd`.
pub fn solve_central_discrepancy(gamma: &GroupElement, ell: &BigInt) -> Option<GroupElement> {
    solve_central_discrepancy_detailed(gamma, ell).map(|(z, _)| z)
}

fn solve_central_discrepancy_detailed(
    gamma: &GroupElement,
    ell: &BigInt,
) -> Option<(GroupElement, StageRecord)> {
    let dim = gamma.dim();
    assert!(dim >= 2, "rank must be at least 2");
    assert!(!gamma.in_lattice(), "t-exponent must be nonzero");
    let data = zeta_image(&gamma.project());
    let (steps, rem) = ell.div_rem(&data.image_generator);
    if !rem.is_zero() {
        return None;
    }
    let reduced_exponent = data.exponent / data.offset_gcd;
    let fine = steps.mod_floor(&BigInt::from(reduced_exponent));
    let coarse = (&steps - &fine) / BigInt::from(reduced_exponent);
    let fine = fine.to_u64().expect("residue is below the reduced exponent");

    let center_down = GroupElement::a_generator(dim - 1, dim - 1);
    let mut lower = center_down.power(&-&coarse);
    let mut lambda = None;
    let mut mu = None;
    if fine > 0 {
        let (lam, m) = if data.central_offset == 0 {
            unreachable!("zero offset forces a zero residue");
        } else if data.exponent.is_multiple_of(data.central_offset) {
            (1, 0)
        } else {
            bezout_bounded(data.central_offset, data.exponent)
        };
        lambda = Some(lam);
        mu = Some(m);
        let block = data
            .base
            .pow_i64(lam as i64)
            .multiply(&center_down.pow_i64(m as i64));
        lower = lower.multiply(&block.power(&BigInt::from(fine)));
    }
    let z = lower.lift();
    assert_eq!(
        conjugate(gamma, &z),
        gamma.multiply(&GroupElement::central_power(dim, ell.clone())),
        "discrepancy repair failed verification"
    );
    let record = StageRecord {
        level: dim,
        discrepancy: ell.clone(),
        coarse_steps: coarse,
        fine_steps: fine,
        lambda,
        mu,
    };
    Some((z, record))
}

fn solve_rec(u: &GroupElement, v: &GroupElement) -> Option<(GroupElement, Vec<StageRecord>)> {
    let dim = u.dim();
    if dim == 1 {
        return (u == v).then(|| (GroupElement::identity(1), Vec::new()));
    }
    if u.t_exp() != v.t_exp() {
        return None;
    }
    if u.in_lattice() {
        return solve_in_lattice(u, v).map(|w| (w, Vec::new()));
    }
    let (upper, mut log) = solve_rec(&u.project(), &v.project())?;
    let lifted = upper.lift();
    let ell = conjugate(u, &lifted).a_exp(dim) - v.a_exp(dim);
    let (repair, record) = solve_central_discrepancy_detailed(v, &-ell)?;
    log.push(record);
    Some((lifted.multiply(&repair), log))
}

/// Decides conjugacy and, on success, returns a verified witness.
pub fn solve_conjugacy(u: &GroupElement, v: &GroupElement) -> Option<ConjugacyWitness> {
    assert_eq!(u.dim(), v.dim(), "dimension mismatch");
    let (conjugator, stage_log) = solve_rec(u, v)?;
    Some(ConjugacyWitness::assemble(u, v, conjugator, stage_log))
}

/// Scans an enumerated ball in canonical order for the shortest conjugator.
pub fn shortest_conjugator_in_ball(
    u: &GroupElement,
    v: &GroupElement,
    ball: &BallCache,
) -> Option<GroupElement> {
    assert_eq!(u.dim(), ball.dim(), "dimension mismatch");
    assert_eq!(v.dim(), ball.dim(), "dimension mismatch");
    ball.elements_in_order()
        .into_iter()
        .map(|(x, _)| x)
        .find(|x| conjugate(u, x) == *v)
}

/// Breadth-first reference search: the shortest conjugator of word length at
/// most `radius`, in canonical order, or `None` if no conjugator exists in
/// the ball.
pub fn shortest_conjugator_bfs(
    u: &GroupElement,
    v: &GroupElement,
    radius: u32,
) -> Result<Option<GroupElement>, Error> {
    let ball = enumerate_ball(u.dim(), radius)?;
    Ok(shortest_conjugator_in_ball(u, v, &ball))
}

/// How experiment inputs are produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExperimentMode {
    /// The hard family: `u = a_{d-1}` against `u (a_d)^{n^d}`, whose shortest
    /// conjugator has length exactly `n^d`.
    WitnessFamily,
    /// Uniformly random elements of coordinate size `n` conjugated by a
    /// random element of the same size.
    RandomPairs,
}

impl std::fmt::Display for ExperimentMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExperimentMode::WitnessFamily => write!(f, "witness-family"),
            ExperimentMode::RandomPairs => write!(f, "random-pairs"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentOptions {
    pub seed: u64,
    /// Samples per size in random-pairs mode.
    pub pairs_per_n: usize,
}

impl Default for ExperimentOptions {
    fn default() -> Self {
        ExperimentOptions {
            seed: 0xF111F0,
            pairs_per_n: 5,
        }
    }
}

/// One solved instance: the pair, the verified witness, and the ratio of the
/// witness word length to `n^d`.
#[derive(Clone, Debug)]
pub struct ExperimentRecord {
    pub dim: usize,
    pub n: u64,
    pub mode: ExperimentMode,
    pub u: GroupElement,
    pub v: GroupElement,
    pub witness: GroupElement,
    pub witness_length: BigInt,
    pub input_size: u64,
    pub ratio: f64,
}

fn mix_seed(seed: u64, dim: usize, n: u64, index: u64) -> u64 {
    seed ^ (dim as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ n.wrapping_mul(0xBF58_476D_1CE4_E5B9)
        ^ index.wrapping_mul(0x94D0_49BB_1331_11EB)
}

fn random_element(rng: &mut ChaCha8Rng, dim: usize, n: u64) -> GroupElement {
    let t = rng.gen_range(-(n as i64)..=n as i64);
    let coords: Vec<i64> = (1..=dim)
        .map(|i| {
            let bound = (n as i64)
                .checked_pow(i as u32)
                .expect("coordinate bound must fit in 64 bits");
            rng.gen_range(-bound..=bound)
        })
        .collect();
    GroupElement::from_i64(t, &coords)
}

fn experiment_record(
    dim: usize,
    n: u64,
    mode: ExperimentMode,
    u: GroupElement,
    v: GroupElement,
) -> ExperimentRecord {
    let witness = solve_conjugacy(&u, &v).expect("experiment pairs are conjugate by construction");
    let scale = num_traits::pow(n as f64, dim);
    let ratio = if scale == 0.0 {
        0.0
    } else {
        witness.word_length as f64 / scale
    };
    ExperimentRecord {
        dim,
        n,
        mode,
        u,
        v,
        witness: witness.conjugator,
        witness_length: BigInt::from(witness.word_length),
        input_size: witness.input_size as u64,
        ratio,
    }
}

/// Runs the conjugacy-length experiment for each size in `n_values`.
pub fn cl_experiment(
    dim: usize,
    n_values: &[u64],
    mode: ExperimentMode,
    opts: &ExperimentOptions,
) -> Vec<ExperimentRecord> {
    assert!(dim >= 1, "dimension must be at least 1");
    let mut records = Vec::new();
    for &n in n_values {
        match mode {
            ExperimentMode::WitnessFamily => {
                if dim == 1 {
                    let u = GroupElement::a_generator(1, 1);
                    records.push(experiment_record(dim, n, mode, u.clone(), u));
                    continue;
                }
                let u = GroupElement::a_generator(dim, dim - 1);
                let shift = num_traits::pow(BigInt::from(n), dim);
                let v = u.multiply(&GroupElement::central_power(dim, shift));
                records.push(experiment_record(dim, n, mode, u, v));
            }
            ExperimentMode::RandomPairs => {
                for index in 0..opts.pairs_per_n {
                    let mut rng =
                        ChaCha8Rng::seed_from_u64(mix_seed(opts.seed, dim, n, index as u64));
                    let u = random_element(&mut rng, dim, n);
                    let c = random_element(&mut rng, dim, n);
                    let v = conjugate(&u, &c);
                    records.push(experiment_record(dim, n, mode, u, v));
                }
            }
        }
    }
    records
}
