//! Acceptance suite: nine end-to-end checks covering the solver, the word
//! metric, roots, the defect homomorphism, and the scaling experiments.
//! Each check prints one `ACCEPTANCE <k> PASS` line with the values it
//! monitored; numeric tolerances are pinned as constants below.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use filiform::conjugacy::{
    cl_experiment, conjugate, shortest_conjugator_bfs, shortest_conjugator_in_ball,
    solve_conjugacy, ExperimentMode, ExperimentOptions,
};
use filiform::metric::{
    enumerate_ball, exact_distance, short_word, size_lower_bound, Constants, Distance,
};
use filiform::structure::{bezout_bounded, root_exact, zeta, zeta_image};
use filiform::{epsilon, phi_pow, Error, GroupElement};

/// Maximum relative gap between the mean root/power length ratios of two
/// independent sampling seeds.
const ROOT_RATIO_SEED_TOLERANCE: f64 = 0.10;
/// Maximum relative gap between mean conjugator-length ratios of two seeds.
const EXPERIMENT_MEAN_TOLERANCE: f64 = 0.15;
/// Maximum relative gap between the largest conjugator-length ratios of two
/// seeds.
const EXPERIMENT_MAX_TOLERANCE: f64 = 0.25;
/// Allowed relative deviation of the witness-family log-log slope from the
/// exact scaling exponent 2.
const WITNESS_SLOPE_TOLERANCE: f64 = 0.10;

fn sample(rng: &mut ChaCha8Rng, dim: usize, n: i64) -> GroupElement {
    let t = rng.gen_range(-n..=n);
    let coords: Vec<i64> = (1..=dim as u32)
        .map(|i| {
            let bound = n.pow(i);
            rng.gen_range(-bound..=bound)
        })
        .collect();
    GroupElement::from_i64(t, &coords)
}

fn rel_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.max(b)
}

fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let cov: f64 = points
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .sum();
    let var: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    cov / var
}

#[test]
fn acceptance_1_witness_family_certified() {
    let u = GroupElement::a_generator(2, 1);
    let mut distances = Vec::new();
    for n in 2..=5i64 {
        let nn = n * n;
        let v = u.multiply(&GroupElement::central_power(2, BigInt::from(nn)));
        let witness = solve_conjugacy(&u, &v).expect("family pair must be conjugate");
        assert_eq!(witness.conjugator, GroupElement::from_i64(nn, &[0, 0]));
        assert_eq!(witness.word_length, nn as usize);

        let word = short_word(&v);
        assert_eq!(word.len(), (4 * n + 1) as usize);
        match exact_distance(&v, (4 * n + 1) as u32).unwrap() {
            Distance::Exact(d) => {
                assert!(BigInt::from(d) >= size_lower_bound(&v));
                assert!(d as usize <= word.len());
                distances.push(d);
            }
            Distance::AtLeast(r) => {
                panic!("distance of {v} not certified within radius {r}")
            }
        }

        if n <= 3 {
            let radius = nn as u32;
            assert_eq!(
                shortest_conjugator_bfs(&u, &v, radius).unwrap(),
                Some(witness.conjugator.clone())
            );
            assert_eq!(shortest_conjugator_bfs(&u, &v, radius - 1).unwrap(), None);
        }
    }
    println!(
        "ACCEPTANCE 1 PASS: witness conjugators t^(n^2) with word length n^2 for n=2..5, \
         search-confirmed minimal for n=2,3; certified distances {distances:?}"
    );
}

#[test]
fn acceptance_2_constructed_pairs_all_solve() {
    let mut total = 0usize;
    for dim in 2..=4usize {
        let mut rng = ChaCha8Rng::seed_from_u64(0xACC0 + dim as u64);
        for i in 0..10_000usize {
            let n = 2 + (i % 5) as i64;
            let u = sample(&mut rng, dim, n);
            let c = sample(&mut rng, dim, n);
            let v = conjugate(&u, &c);
            let witness = solve_conjugacy(&u, &v).expect("constructed pair must solve");
            assert_eq!(conjugate(&u, &witness.conjugator), v);
            total += 1;
        }
    }
    println!("ACCEPTANCE 2 PASS: {total} constructed conjugate pairs solved with verified witnesses");
}

#[test]
fn acceptance_3_solver_matches_ball_search() {
    let big = enumerate_ball(2, 10).unwrap();
    let small: Vec<GroupElement> = big
        .iter()
        .filter(|&(_, d)| d <= 3)
        .map(|(g, _)| g.clone())
        .collect();
    assert_eq!(small.len(), 83);
    let order = big.elements_in_order();

    let mut checked = 0usize;
    let mut conjugate_pairs = 0usize;
    let mut beyond_ball = 0usize;
    let mut spot_checks = 0usize;
    for u in &small {
        let mut reach: HashMap<GroupElement, &GroupElement> = HashMap::new();
        for (x, _) in &order {
            reach.entry(conjugate(u, x)).or_insert(x);
        }
        for v in &small {
            match (solve_conjugacy(u, v), reach.get(v)) {
                (Some(_), Some(x)) => {
                    assert_eq!(conjugate(u, x), *v);
                    conjugate_pairs += 1;
                    if conjugate_pairs.is_multiple_of(13) {
                        assert_eq!(shortest_conjugator_in_ball(u, v, &big).as_ref(), Some(*x));
                        spot_checks += 1;
                    }
                }
                (Some(w), None) => {
                    assert!(
                        big.distance(&w.conjugator).is_none(),
                        "search missed conjugator {} of u={u} v={v}",
                        w.conjugator
                    );
                    conjugate_pairs += 1;
                    beyond_ball += 1;
                }
                (None, Some(x)) => panic!("solver missed conjugate pair u={u} v={v} (x={x})"),
                (None, None) => {}
            }
            checked += 1;
        }
    }
    println!(
        "ACCEPTANCE 3 PASS: {checked} ordered radius-3 pairs agree with radius-10 search \
         ({conjugate_pairs} conjugate, {beyond_ball} witnesses beyond the ball, \
         {spot_checks} shortest-conjugator spot checks)"
    );
}

/// Root/power word-length ratios over 1000 samples in each rank, summarized
/// as (95th percentile, maximum). The percentile is the reported constant;
/// the raw maximum of a 1000-draw run is too noisy to compare across seeds.
fn root_length_constants(seed: u64) -> Vec<(f64, f64)> {
    let mut constants = Vec::new();
    for dim in 2..=4usize {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ dim as u64);
        let mut ratios = Vec::with_capacity(1000);
        while ratios.len() < 1000 {
            let p = 2 + (ratios.len() % 3) as u64;
            let h = sample(&mut rng, dim, 4);
            if h.is_identity() {
                continue;
            }
            let g = h.power(&BigInt::from(p));
            ratios.push(short_word(&h).len() as f64 / short_word(&g).len() as f64);
        }
        ratios.sort_by(|a, b| a.partial_cmp(b).unwrap());
        constants.push((ratios[949], ratios[999]));
    }
    constants
}

#[test]
fn acceptance_4_roots_unique_and_stable() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x4007);
    for i in 0..1000usize {
        let dim = 1 + i % 4;
        let p = 2 + (i % 6) as u64;
        let h = sample(&mut rng, dim, 5);
        let g = h.power(&BigInt::from(p));
        assert_eq!(root_exact(&g, p), Some(h));
    }

    let ball = enumerate_ball(2, 6).unwrap();
    assert_eq!(ball.len(), 697);
    for p in [2u64, 3] {
        let exponent = BigInt::from(p);
        let mut seen: HashMap<GroupElement, GroupElement> = HashMap::new();
        for (g, _) in ball.iter() {
            if let Some(other) = seen.insert(g.power(&exponent), g.clone()) {
                panic!("distinct elements {other} and {g} share a {p}-th power");
            }
            assert_eq!(root_exact(&g.power(&exponent), p).as_ref(), Some(g));
        }
    }

    let first = root_length_constants(0xA11CE);
    let second = root_length_constants(0xB0B);
    for (dim, (a, b)) in (2..=4usize).zip(first.iter().zip(second.iter())) {
        assert!(a.1.is_finite() && b.1.is_finite());
        assert!(
            rel_gap(a.0, b.0) <= ROOT_RATIO_SEED_TOLERANCE,
            "rank-{dim} root/power length constants drifted: {:.4} vs {:.4}",
            a.0,
            b.0
        );
    }
    let report: Vec<String> = (2..=4usize)
        .zip(first.iter().zip(second.iter()))
        .map(|(dim, (a, b))| {
            format!("K_{dim}={:.2}/{:.2} (max {:.2}/{:.2})", a.0, b.0, a.1, b.1)
        })
        .collect();
    println!(
        "ACCEPTANCE 4 PASS: 1000 random root round trips, unique roots across the 697-element \
         radius-6 ball, length constants stable across seeds [{}]",
        report.join(", ")
    );
}

#[test]
fn acceptance_5_defect_homomorphism_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5E7A);
    let mut pairs = 0usize;
    while pairs < 1000 {
        let dim = 2 + pairs % 2;
        let g = sample(&mut rng, dim, 6);
        if g.t_exp().is_zero() {
            continue;
        }
        let data = zeta_image(&g);
        let central = GroupElement::a_generator(dim, dim);
        if pairs < 100 {
            let p = BigInt::from(data.exponent);
            let r = BigInt::from(data.central_offset);
            let q = data.base_t_exp.clone();
            assert_eq!(zeta(&g, &central.invert()).unwrap(), &p * &q);
            assert_eq!(zeta(&g, &data.base).unwrap(), &r * &q);
        }
        let x = data
            .base
            .pow_i64(rng.gen_range(-6..=6))
            .multiply(&central.pow_i64(rng.gen_range(-6..=6)));
        let y = data
            .base
            .pow_i64(rng.gen_range(-6..=6))
            .multiply(&central.pow_i64(rng.gen_range(-6..=6)));
        let vx = zeta(&g, &x).unwrap();
        let vy = zeta(&g, &y).unwrap();
        assert_eq!(zeta(&g, &x.multiply(&y)).unwrap(), &vx + &vy);
        if data.image_generator.is_zero() {
            assert!(vx.is_zero() && vy.is_zero());
        } else {
            assert!(vx.is_multiple_of(&data.image_generator));
            assert!(vy.is_multiple_of(&data.image_generator));
        }
        pairs += 1;
    }

    let g = GroupElement::from_i64(1, &[1, 0]);
    assert!(matches!(
        zeta(&g, &GroupElement::a_generator(2, 1)),
        Err(Error::NotInCentralizer)
    ));
    println!(
        "ACCEPTANCE 5 PASS: additivity and image divisibility on {pairs} centralizer pairs, \
         generator identities re-verified on every image computation"
    );
}

#[test]
fn acceptance_6_bezout_exhaustive() {
    let mut count = 0usize;
    for a in 1u64..=200 {
        for b in 1u64..=200 {
            if b % a == 0 {
                continue;
            }
            let e = a.gcd(&b);
            let (lambda, mu) = bezout_bounded(a, b);
            assert!(0 < mu && mu < a, "mu={mu} out of range for a={a} b={b}");
            assert!(0 < lambda && lambda <= b, "lambda={lambda} out of range for a={a} b={b}");
            assert_eq!(lambda as i128 * a as i128 - mu as i128 * b as i128, e as i128);
            let minimal = (1..a)
                .find(|m| (e + m * b) % a == 0)
                .expect("a solution exists below a");
            assert_eq!(mu, minimal, "mu not minimal for a={a} b={b}");
            count += 1;
        }
    }
    println!(
        "ACCEPTANCE 6 PASS: {count} coefficient pairs up to 200 solved with minimal bounded \
         solutions"
    );
}

#[test]
fn acceptance_7_automorphism_closed_form_and_entry_bound() {
    for dim in 1..=6usize {
        let step = phi_pow(dim, 1);
        let step_inv = phi_pow(dim, -1);
        for m in -50..=50i64 {
            let closed = phi_pow(dim, m);
            let mut iterated = phi_pow(dim, 0);
            let factor = if m >= 0 { &step } else { &step_inv };
            for _ in 0..m.unsigned_abs() {
                iterated = iterated.matmul(factor);
            }
            assert_eq!(closed.rows(), iterated.rows(), "dim {dim}, exponent {m}");
        }
    }

    for dim in 2..=6usize {
        let constants = Constants::compute(dim);
        assert_eq!(constants.entry_bound, BigInt::one());
        for i in 1..dim {
            for m in (-50..=50i64).filter(|&m| m != 0) {
                let cap = &constants.entry_bound
                    * num_traits::pow(BigInt::from(m.unsigned_abs()), dim - i);
                assert!(
                    epsilon(dim, i, m).abs() <= cap,
                    "entry bound violated at dim {dim}, row {i}, exponent {m}"
                );
            }
        }
    }
    println!(
        "ACCEPTANCE 7 PASS: closed-form automorphism powers match iterated products for \
         |m| <= 50 up to rank 6, off-diagonal entries within |m|^(d-i)"
    );
}

#[test]
fn acceptance_8_rank_two_ball_sandwich() {
    let ball = enumerate_ball(2, 8).unwrap();
    let mut max_ratio = 0.0f64;
    for (g, dist) in ball.iter() {
        let word = short_word(g);
        assert_eq!(word.eval(), *g, "short word fails to evaluate to {g}");
        assert!(size_lower_bound(g) <= BigInt::from(dist));
        assert!(word.len() >= dist as usize);
        if dist > 0 {
            max_ratio = max_ratio.max(word.len() as f64 / dist as f64);
        }
    }
    println!(
        "ACCEPTANCE 8 PASS: lower bound <= distance <= synthesized length on all {} elements \
         of the radius-8 rank-2 ball (max length/distance ratio {max_ratio:.2})",
        ball.len()
    );
}

#[test]
fn acceptance_9_growth_experiments() {
    let sizes = [4u64, 6, 8, 12, 16];
    let records = cl_experiment(
        2,
        &sizes,
        ExperimentMode::WitnessFamily,
        &ExperimentOptions::default(),
    );
    let mut points = Vec::new();
    for record in &records {
        assert_eq!(record.witness_length, BigInt::from(record.n * record.n));
        assert!((record.ratio - 1.0).abs() < 1e-9);
        points.push((
            (record.n as f64).ln(),
            record.witness_length.to_f64().unwrap().ln(),
        ));
    }
    let slope = log_log_slope(&points);
    assert!(
        (slope - 2.0).abs() <= 2.0 * WITNESS_SLOPE_TOLERANCE,
        "witness-family slope {slope:.4} outside tolerance"
    );

    let sizes: Vec<u64> = (4..=10).collect();
    let mut stats = Vec::new();
    for dim in [2usize, 3] {
        let mut per_seed = Vec::new();
        for seed in [0x51DA, 0x51DB] {
            let opts = ExperimentOptions {
                seed,
                pairs_per_n: 20,
            };
            let records = cl_experiment(dim, &sizes, ExperimentMode::RandomPairs, &opts);
            let ratios: Vec<f64> = records.iter().map(|r| r.ratio).collect();
            let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
            let max = ratios.iter().cloned().fold(0.0f64, f64::max);
            per_seed.push((mean, max));
        }
        let (mean_a, max_a) = per_seed[0];
        let (mean_b, max_b) = per_seed[1];
        assert!(
            rel_gap(mean_a, mean_b) <= EXPERIMENT_MEAN_TOLERANCE,
            "rank-{dim} mean ratios drifted: {mean_a:.4} vs {mean_b:.4}"
        );
        assert!(
            rel_gap(max_a, max_b) <= EXPERIMENT_MAX_TOLERANCE,
            "rank-{dim} max ratios drifted: {max_a:.4} vs {max_b:.4}"
        );
        stats.push(format!(
            "d={dim}: means {mean_a:.3}/{mean_b:.3}, maxima {max_a:.2}/{max_b:.2}"
        ));
    }
    println!(
        "ACCEPTANCE 9 PASS: witness-family log-log slope {slope:.3}, random-pair ratio \
         stability [{}]",
        stats.join("; ")
    );
}
