//! Words over the standard generating set and their evaluation.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use super::element::GroupElement;
use crate::error::Error;

/// A generator symbol: the stable letter or a lattice generator (1-based).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Generator {
    T,
    A(usize),
}

/// One letter of a word: a generator or its formal inverse.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Letter {
    pub gen: Generator,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: Generator, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    /// The group element this letter denotes in the rank-`dim` group.
    pub fn element(&self, dim: usize) -> GroupElement {
        let g = match self.gen {
            Generator::T => GroupElement::t_generator(dim),
            Generator::A(i) => GroupElement::a_generator(dim, i),
        };
        if self.inverse {
            g.invert()
        } else {
            g
        }
    }

    pub fn formal_inverse(&self) -> Self {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }
}

impl fmt::Display for Letter {
    /// Text form: `t`/`T` for the stable letter, `a3`/`A3` for lattice
    /// generators; uppercase marks the inverse.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.gen, self.inverse) {
            (Generator::T, false) => write!(f, "t"),
            (Generator::T, true) => write!(f, "T"),
            (Generator::A(i), false) => write!(f, "a{i}"),
            (Generator::A(i), true) => write!(f, "A{i}"),
        }
    }
}

/// A word over the generators of the rank-`dim` group, evaluated left to
/// right. Words are formal: no free reduction is performed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Word {
    dim: usize,
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        Word {
            dim,
            letters: Vec::new(),
        }
    }

    pub fn from_letters(dim: usize, letters: Vec<Letter>) -> Self {
        for l in &letters {
            if let Generator::A(i) = l.gen {
                assert!(
                    (1..=dim).contains(&i),
                    "generator index {i} out of 1..={dim}"
                );
            }
        }
        Word { dim, letters }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn push(&mut self, letter: Letter) {
        if let Generator::A(i) = letter.gen {
            assert!(
                (1..=self.dim).contains(&i),
                "generator index {i} out of 1..={}",
                self.dim
            );
        }
        self.letters.push(letter);
    }

    /// Appends `gen^count`; the sign of `count` selects the inverse letter.
    pub fn push_power(&mut self, gen: Generator, count: &BigInt) {
        let reps = count
            .abs()
            .to_usize()
            .expect("letter count exceeds addressable word length");
        let letter = Letter::new(gen, count.is_negative());
        self.letters.reserve(reps);
        for _ in 0..reps {
            self.letters.push(letter);
        }
    }

    /// The formal inverse: reversed letters, each inverted.
    pub fn inverse(&self) -> Self {
        Word {
            dim: self.dim,
            letters: self
                .letters
                .iter()
                .rev()
                .map(Letter::formal_inverse)
                .collect(),
        }
    }

    /// Concatenation.
    ///
    /// # Panics
    ///
    /// Panics on dimension mismatch.
    pub fn concat(mut self, other: &Word) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.letters.extend_from_slice(&other.letters);
        self
    }

    /// Reinterprets the word in a larger-rank group; the letters are
    /// unchanged.
    pub fn embed(&self, dim: usize) -> Self {
        assert!(dim >= self.dim, "cannot embed into a smaller rank");
        Word {
            dim,
            letters: self.letters.clone(),
        }
    }

    /// Evaluates the word to a group element.
    pub fn eval(&self) -> GroupElement {
        let mut acc = GroupElement::identity(self.dim);
        for l in &self.letters {
            acc = acc.multiply(&l.element(self.dim));
        }
        acc
    }

    /// Parses whitespace-separated letters: `t`, `T`, `a<i>`, `A<i>`, where
    /// uppercase marks the inverse. The empty string is the empty word.
    pub fn parse(dim: usize, text: &str) -> Result<Self, Error> {
        assert!(dim >= 1, "dimension must be at least 1");
        let mut letters = Vec::new();
        let mut rest = text;
        let mut offset = 0usize;
        loop {
            let trimmed = rest.trim_start();
            offset += rest.len() - trimmed.len();
            if trimmed.is_empty() {
                break;
            }
            let end = trimmed
                .find(char::is_whitespace)
                .unwrap_or(trimmed.len());
            let token = &trimmed[..end];
            letters.push(Self::parse_letter(dim, token, offset)?);
            offset += end;
            rest = &trimmed[end..];
        }
        Ok(Word { dim, letters })
    }

    fn parse_letter(dim: usize, token: &str, position: usize) -> Result<Letter, Error> {
        let bad = |message: String| Error::Parse { position, message };
        match token {
            "t" => return Ok(Letter::new(Generator::T, false)),
            "T" => return Ok(Letter::new(Generator::T, true)),
            _ => {}
        }
        let inverse = match token.chars().next() {
            Some('a') => false,
            Some('A') => true,
            _ => {
                return Err(bad(format!(
                    "unknown letter {token:?}; expected t, T, a<i>, or A<i>"
                )))
            }
        };
        let index: usize = token[1..]
            .parse()
            .map_err(|_| bad(format!("bad generator index in {token:?}")))?;
        if !(1..=dim).contains(&index) {
            return Err(bad(format!(
                "generator index {index} out of 1..={dim}"
            )));
        }
        Ok(Letter::new(Generator::A(index), inverse))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}
