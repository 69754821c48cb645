//! Words in the free group on `A, B`, written over `{A, B, a, b}` with `a = A^{-1}`.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    /// `A`.
    A,
    /// `B`.
    B,
    /// `A^{-1}`, written `a`.
    AInv,
    /// `B^{-1}`, written `b`.
    BInv,
}

impl Letter {
    /// All four letters.
    pub const ALL: [Letter; 4] = [Letter::A, Letter::B, Letter::AInv, Letter::BInv];

    /// Position in `[A, B, a, b]`.
    pub fn index(self) -> usize {
        match self {
            Letter::A => 0,
            Letter::B => 1,
            Letter::AInv => 2,
            Letter::BInv => 3,
        }
    }

    /// Inverse letter.
    pub fn inverse(self) -> Letter {
        match self {
            Letter::A => Letter::AInv,
            Letter::B => Letter::BInv,
            Letter::AInv => Letter::A,
            Letter::BInv => Letter::B,
        }
    }

    /// Character used in the string form.
    pub fn to_char(self) -> char {
        match self {
            Letter::A => 'A',
            Letter::B => 'B',
            Letter::AInv => 'a',
            Letter::BInv => 'b',
        }
    }

    fn from_char(c: char) -> Option<Letter> {
        match c {
            'A' => Some(Letter::A),
            'B' => Some(Letter::B),
            'a' => Some(Letter::AInv),
            'b' => Some(Letter::BInv),
            _ => None,
        }
    }
}

/// Freely reduced word; the empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    /// Identity.
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    /// Parses a string over `{A, B, a, b}` and reduces it.
    pub fn parse(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(|c| Letter::from_char(c).ok_or_else(|| Error::BadWord(s.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_letters(&letters))
    }

    /// Reduced word of a letter sequence.
    pub fn from_letters(letters: &[Letter]) -> Self {
        let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
        for &l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Self(out)
    }

    /// Letters, leftmost acting last.
    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// Number of letters.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Whether this is the identity.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Inverse word.
    pub fn inverse(&self) -> Self {
        Self(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Reduced product `self * other`.
    pub fn concat(&self, other: &Word) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Self::from_letters(&v)
    }

    /// Product with one letter on the right.
    pub fn push(&self, l: Letter) -> Self {
        let mut v = self.0.clone();
        v.push(l);
        Self::from_letters(&v)
    }

    /// Conjugate `g self g^{-1}`.
    pub fn conjugated_by(&self, g: &Word) -> Self {
        g.concat(self).concat(&g.inverse())
    }

    /// All reduced words of exactly the given length.
    pub fn all_of_length(n: usize) -> Vec<Word> {
        let mut shell = vec![Word::identity()];
        for _ in 0..n {
            let mut next = Vec::with_capacity(shell.len() * 3);
            for w in &shell {
                for l in Letter::ALL {
                    if w.0.last() != Some(&l.inverse()) {
                        let mut v = w.0.clone();
                        v.push(l);
                        next.push(Word(v));
                    }
                }
            }
            shell = next;
        }
        shell
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Word::parse(s)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Word::parse(&s).map_err(serde::de::Error::custom)
    }
}
