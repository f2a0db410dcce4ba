//! Decomposition of a positive integer into few `k`-th powers.
//!
//! Below [`DP_LIMIT`] a dynamic program finds a decomposition with the
//! minimal number of parts. Above it, the largest `k`-th power is peeled off
//! greedily until the remainder re-enters the exact range; minimality is not
//! needed there, only a deterministic decomposition with few parts. Tables
//! are cached per exponent and grown lazily, and the largest part count the
//! exact program has produced is recorded per exponent so that derived
//! word-length constants can be reported for the session.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::nth_root_floor;

/// Largest value decomposed by the exact minimal-count program.
pub const DP_LIMIT: u64 = 10_000_000;

fn tables() -> &'static Mutex<HashMap<u32, Vec<u32>>> {
    static TABLES: OnceLock<Mutex<HashMap<u32, Vec<u32>>>> = OnceLock::new();
    TABLES.get_or_init(|| Mutex::new(HashMap::new()))
}

fn session_stats() -> &'static Mutex<HashMap<u32, u32>> {
    static STATS: OnceLock<Mutex<HashMap<u32, u32>>> = OnceLock::new();
    STATS.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The largest part count produced so far in this process for exponent `k`,
/// if any decomposition has been requested.
pub fn session_max_parts(k: u32) -> Option<u32> {
    session_stats().lock().unwrap().get(&k).copied()
}

fn note_parts(k: u32, count: usize) {
    let count = count as u32;
    let mut stats = session_stats().lock().unwrap();
    let entry = stats.entry(k).or_insert(0);
    *entry = (*entry).max(count);
}

fn pow_u64(base: u64, k: u32) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..k {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// Minimal part counts for all values up to `need`, for exponent `k`.
fn with_table<R>(k: u32, need: u64, f: impl FnOnce(&[u32]) -> R) -> R {
    assert!(need <= DP_LIMIT);
    let mut map = tables().lock().unwrap();
    let table = map.entry(k).or_insert_with(|| vec![0u32]);
    if table.len() <= need as usize {
        let target = (need as usize + 1).max(table.len() * 2).min(DP_LIMIT as usize + 1);
        let old_len = table.len();
        table.reserve(target - old_len);
        for n in old_len..target {
            let mut best = u32::MAX;
            let mut j = 1u64;
            loop {
                let jk = match pow_u64(j, k) {
                    Some(v) if v <= n as u64 => v,
                    _ => break,
                };
                best = best.min(table[n - jk as usize] + 1);
                if best == 1 {
                    break;
                }
                j += 1;
            }
            table.push(best);
        }
    }
    f(&table[..])
}

/// Exact minimal decomposition for `p <= DP_LIMIT`, parts largest-first among
/// minimal decompositions.
fn decompose_small(p: u64, k: u32) -> Vec<u64> {
    with_table(k, p, |counts| {
        let mut parts = Vec::with_capacity(counts[p as usize] as usize);
        let mut n = p;
        while n > 0 {
            let want = counts[n as usize] - 1;
            let mut j = nth_root_floor(&BigInt::from(n), k).to_u64().unwrap();
            loop {
                let jk = pow_u64(j, k).unwrap();
                if jk <= n && counts[(n - jk) as usize] == want {
                    parts.push(j);
                    n -= jk;
                    break;
                }
                j -= 1;
            }
        }
        parts
    })
}

/// Writes `p >= 1` as a sum of `parts.len()` many `k`-th powers,
/// `p = sum parts[i]^k`, deterministically and with the minimal number of
/// parts whenever `p <= DP_LIMIT`.
///
/// # Panics
///
/// Panics unless `p >= 1` and `k >= 1`.
pub fn waring_decompose(p: &BigInt, k: u32) -> Vec<BigInt> {
    assert!(k >= 1, "exponent must be at least 1");
    assert!(p.is_positive(), "can only decompose positive integers");
    if k == 1 {
        return vec![p.clone()];
    }
    let mut parts: Vec<BigInt> = Vec::new();
    let mut cur = p.clone();
    let limit = BigInt::from(DP_LIMIT);
    while cur > limit {
        let root = nth_root_floor(&cur, k);
        let mut power = BigInt::one();
        for _ in 0..k {
            power *= &root;
        }
        cur -= power;
        parts.push(root);
    }
    if !cur.is_zero() {
        let small = cur.to_u64().unwrap();
        parts.extend(decompose_small(small, k).into_iter().map(BigInt::from));
    }
    note_parts(k, parts.len());
    parts
}

/// Classical worst-case part counts `g(k)` for sums of `k`-th powers, used by
/// tests as the ceiling the exact program must never exceed.
pub fn classical_waring_bound(k: u32) -> u32 {
    match k {
        1 => 1,
        2 => 4,
        3 => 9,
        4 => 19,
        5 => 37,
        6 => 73,
        // 2^k + floor((3/2)^k) - 2, valid for every k in the desk range.
        _ => {
            let pow2 = 2u64.pow(k);
            let mut num = 1u64;
            for _ in 0..k {
                num *= 3;
            }
            (pow2 + num / 2u64.pow(k) - 2) as u32
        }
    }
}
