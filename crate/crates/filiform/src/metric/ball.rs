//! Breadth-first enumeration of Cayley balls, with a persistent cache format.
//!
//! The generating set is fixed: `t^{±1}, a_1^{±1}, ..., a_d^{±1}`. The
//! enumeration is level-synchronized, so the table contents are independent
//! of worker count; the on-disk and CSV encodings sort records canonically
//! (distance, then normal form), making every output byte-deterministic.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::Error;
use crate::group::GroupElement;

const MAGIC: &[u8; 8] = b"FILIBALL";
const FORMAT_VERSION: u32 = 1;
/// Frontiers smaller than this are expanded sequentially.
const PAR_THRESHOLD: usize = 2048;
const PAR_CHUNK: usize = 4096;

/// Tuning for ball enumeration.
#[derive(Clone, Debug)]
pub struct BallOptions {
    /// Enumeration fails loudly (no partial output) once its estimated
    /// footprint exceeds this many bytes.
    pub memory_cap_bytes: u64,
}

impl Default for BallOptions {
    fn default() -> Self {
        BallOptions {
            memory_cap_bytes: 2 * 1024 * 1024 * 1024,
        }
    }
}

/// The closed ball of a given radius in the word metric: a table from normal
/// forms to exact distances.
#[derive(Clone, Debug)]
pub struct BallCache {
    dim: usize,
    radius: u32,
    table: HashMap<GroupElement, u32>,
}

/// The standard generating set, in the fixed order
/// `t, t^{-1}, a_1, a_1^{-1}, ..., a_d, a_d^{-1}`.
pub fn standard_generators(dim: usize) -> Vec<GroupElement> {
    let mut gens = Vec::with_capacity(2 * (dim + 1));
    let t = GroupElement::t_generator(dim);
    gens.push(t.clone());
    gens.push(t.invert());
    for i in 1..=dim {
        let a = GroupElement::a_generator(dim, i);
        gens.push(a.clone());
        gens.push(a.invert());
    }
    gens
}

/// Enumerates the radius-`radius` ball with default options.
pub fn enumerate_ball(dim: usize, radius: u32) -> Result<BallCache, Error> {
    enumerate_ball_with(dim, radius, &BallOptions::default())
}

pub fn enumerate_ball_with(
    dim: usize,
    radius: u32,
    opts: &BallOptions,
) -> Result<BallCache, Error> {
    let mut cache = BallCache::new(dim);
    cache.extend_to(radius, opts)?;
    Ok(cache)
}

impl BallCache {
    /// The radius-0 ball.
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        let mut table = HashMap::new();
        table.insert(GroupElement::identity(dim), 0);
        BallCache {
            dim,
            radius: 0,
            table,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    /// Number of elements in the ball.
    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Exact distance of `g` from the identity, if `g` lies in the ball.
    /// `None` certifies `distance > radius`.
    pub fn distance(&self, g: &GroupElement) -> Option<u32> {
        self.table.get(g).copied()
    }

    /// Number of elements at distance at most `r`.
    pub fn count_at_most(&self, r: u32) -> usize {
        self.table.values().filter(|&&d| d <= r).count()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroupElement, u32)> {
        self.table.iter().map(|(g, &d)| (g, d))
    }

    /// All elements sorted by distance, ties broken by the canonical order on
    /// normal forms. This is the scan order for shortest-witness searches and
    /// the record order of every serialization.
    pub fn elements_in_order(&self) -> Vec<(GroupElement, u32)> {
        let mut all: Vec<(GroupElement, u32)> =
            self.table.iter().map(|(g, &d)| (g.clone(), d)).collect();
        all.sort_unstable_by(|(ga, da), (gb, db)| da.cmp(db).then_with(|| ga.cmp(gb)));
        all
    }

    fn approx_bytes(&self) -> u64 {
        let per_entry = 96 + 48 * (self.dim as u64 + 1);
        self.table.len() as u64 * per_entry
    }

    /// Grows the ball to the requested radius, level by level. On error the
    /// cache must be discarded; no partially extended level is ever exposed
    /// as complete.
    pub fn extend_to(&mut self, radius: u32, opts: &BallOptions) -> Result<(), Error> {
        if radius <= self.radius {
            return Ok(());
        }
        let gens = standard_generators(self.dim);
        let mut frontier: Vec<GroupElement> = self
            .table
            .iter()
            .filter(|(_, &d)| d == self.radius)
            .map(|(g, _)| g.clone())
            .collect();
        frontier.sort_unstable();
        for level in self.radius + 1..=radius {
            let mut next = Vec::new();
            for chunk in frontier.chunks(PAR_CHUNK) {
                let candidates: Vec<GroupElement> = if chunk.len() >= PAR_THRESHOLD {
                    chunk
                        .par_iter()
                        .flat_map_iter(|g| gens.iter().map(move |s| g.multiply(s)))
                        .collect()
                } else {
                    chunk
                        .iter()
                        .flat_map(|g| gens.iter().map(move |s| g.multiply(s)))
                        .collect()
                };
                for c in candidates {
                    if let Entry::Vacant(e) = self.table.entry(c) {
                        next.push(e.key().clone());
                        e.insert(level);
                    }
                }
            }
            let estimated = self.approx_bytes();
            if estimated > opts.memory_cap_bytes {
                return Err(Error::MemoryCapExceeded {
                    estimated,
                    cap: opts.memory_cap_bytes,
                });
            }
            frontier = next;
            self.radius = level;
            if frontier.is_empty() {
                // Cannot happen in an infinite group, but keeps the loop honest.
                break;
            }
        }
        self.radius = radius;
        Ok(())
    }

    /// Writes the versioned binary cache format: an eight-byte magic, the
    /// format version, dimension, radius, and entry count, followed by
    /// canonically ordered records. Each record stores the coordinates
    /// `r, p_1, ..., p_d` as length-prefixed little-endian two's-complement
    /// integers and the distance as a 32-bit little-endian integer.
    pub fn save(&self, path: &Path) -> Result<(), Error> {
        let mut w = BufWriter::new(File::create(path)?);
        w.write_all(MAGIC)?;
        w.write_all(&FORMAT_VERSION.to_le_bytes())?;
        w.write_all(&(self.dim as u32).to_le_bytes())?;
        w.write_all(&self.radius.to_le_bytes())?;
        w.write_all(&(self.table.len() as u64).to_le_bytes())?;
        for (g, dist) in self.elements_in_order() {
            write_coord(&mut w, g.t_exp())?;
            for i in 1..=self.dim {
                write_coord(&mut w, g.a_exp(i))?;
            }
            w.write_all(&dist.to_le_bytes())?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a file produced by [`BallCache::save`], rejecting anything with
    /// the wrong magic, version, or layout.
    pub fn load(path: &Path) -> Result<Self, Error> {
        let mut r = BufReader::new(File::open(path)?);
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)
            .map_err(|_| Error::CacheFormat("file too short for header".into()))?;
        if &magic != MAGIC {
            return Err(Error::CacheFormat(format!(
                "bad magic {:02x?}, expected {:02x?}",
                magic, MAGIC
            )));
        }
        let version = read_u32(&mut r)?;
        if version != FORMAT_VERSION {
            return Err(Error::CacheFormat(format!(
                "unsupported format version {version}, expected {FORMAT_VERSION}"
            )));
        }
        let dim = read_u32(&mut r)? as usize;
        if dim == 0 {
            return Err(Error::CacheFormat("dimension 0".into()));
        }
        let radius = read_u32(&mut r)?;
        let mut count_bytes = [0u8; 8];
        r.read_exact(&mut count_bytes)
            .map_err(|_| Error::CacheFormat("truncated header".into()))?;
        let count = u64::from_le_bytes(count_bytes);
        let mut table = HashMap::with_capacity(count as usize);
        for _ in 0..count {
            let t_exp = read_coord(&mut r)?;
            let mut a_exps = Vec::with_capacity(dim);
            for _ in 0..dim {
                a_exps.push(read_coord(&mut r)?);
            }
            let dist = read_u32(&mut r)?;
            if dist > radius {
                return Err(Error::CacheFormat(format!(
                    "record distance {dist} exceeds radius {radius}"
                )));
            }
            table.insert(GroupElement::new(t_exp, a_exps), dist);
        }
        let mut trailing = [0u8; 1];
        if r.read(&mut trailing)? != 0 {
            return Err(Error::CacheFormat("trailing bytes after records".into()));
        }
        Ok(BallCache { dim, radius, table })
    }

    /// Writes the ball as CSV with header `r,p1,...,pd,dist`, in canonical
    /// record order.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<(), Error> {
        write!(out, "r")?;
        for i in 1..=self.dim {
            write!(out, ",p{i}")?;
        }
        writeln!(out, ",dist")?;
        for (g, dist) in self.elements_in_order() {
            write!(out, "{}", g.t_exp())?;
            for i in 1..=self.dim {
                write!(out, ",{}", g.a_exp(i))?;
            }
            writeln!(out, ",{dist}")?;
        }
        Ok(())
    }
}

fn write_coord<W: Write>(w: &mut W, value: &BigInt) -> Result<(), Error> {
    let bytes = value.to_signed_bytes_le();
    w.write_all(&(bytes.len() as u32).to_le_bytes())?;
    w.write_all(&bytes)?;
    Ok(())
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32, Error> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf)
        .map_err(|_| Error::CacheFormat("truncated integer".into()))?;
    Ok(u32::from_le_bytes(buf))
}

fn read_coord<R: Read>(r: &mut R) -> Result<BigInt, Error> {
    let len = read_u32(r)? as usize;
    if len > 1 << 20 {
        return Err(Error::CacheFormat(format!(
            "implausible coordinate length {len}"
        )));
    }
    let mut buf = vec![0u8; len];
    r.read_exact(&mut buf)
        .map_err(|_| Error::CacheFormat("truncated coordinate".into()))?;
    Ok(BigInt::from_signed_bytes_le(&buf))
}
