//! Group words: parsing, evaluation, value sets and the checks built on them.

mod rs;
mod values;

pub use rs::{is_regular_semisimple, rs_fraction, RsMode, RsReport};
pub use values::{
    random_pair_generates, waring_check, word_value_set, FactorScan, GenerationReport, SampledDetail, SparseReport, ValueMode,
    WaringConfig, WaringReport, WordValueSet, DEFAULT_SAMPLES,
};

use std::fmt;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;

/// A freely reduced word in letters `x1, x2, …` (1-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    arity: usize,
    syllables: Vec<(usize, i64)>,
}

impl Word {
    /// Builds a word from `(letter, exponent)` pairs, reducing freely.
    pub fn from_syllables(items: impl IntoIterator<Item = (usize, i64)>) -> Result<Self> {
        let mut out: Vec<(usize, i64)> = Vec::new();
        for (letter, exp) in items {
            if letter == 0 {
                return Err(Error::invalid("letters are numbered from 1"));
            }
            if exp == 0 {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.0 == letter => {
                    last.1 += exp;
                    if last.1 == 0 {
                        out.pop();
                    }
                }
                _ => out.push((letter, exp)),
            }
        }
        Ok(Word {
            arity: out.iter().map(|s| s.0).max().unwrap_or(0),
            syllables: out,
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn syllables(&self) -> &[(usize, i64)] {
        &self.syllables
    }

    pub fn is_trivial(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Errors on the trivial word.
    pub fn require_nontrivial(&self) -> Result<&Self> {
        if self.is_trivial() {
            Err(Error::invalid("the trivial word is not allowed here"))
        } else {
            Ok(self)
        }
    }

    pub fn inverse(&self) -> Word {
        Word {
            arity: self.arity,
            syllables: self.syllables.iter().rev().map(|&(l, e)| (l, -e)).collect(),
        }
    }

    fn concat(parts: &[&Word]) -> Word {
        Word::from_syllables(parts.iter().flat_map(|w| w.syllables.iter().copied())).expect("letters are positive")
    }

    fn power(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let copies: Vec<&Word> = std::iter::repeat_n(&base, k.unsigned_abs() as usize).collect();
        Word::concat(&copies)
    }

    /// `[u, v] = u^-1 v^-1 u v`.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        Word::concat(&[&u.inverse(), &v.inverse(), u, v])
    }

    /// Substitutes `tuple[i-1]` for letter `i`.
    pub fn evaluate(&self, group: &FiniteGroup, tuple: &[usize]) -> Result<usize> {
        if tuple.len() < self.arity {
            return Err(Error::invalid(format!("word needs {} letters, got {}", self.arity, tuple.len())));
        }
        for &g in tuple {
            group.check(g)?;
        }
        Ok(self.evaluate_unchecked(group, tuple))
    }

    pub(crate) fn evaluate_unchecked(&self, group: &FiniteGroup, tuple: &[usize]) -> usize {
        self.syllables
            .iter()
            .fold(0, |acc, &(l, e)| group.multiply(acc, group.pow(tuple[l - 1], e)))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "1");
        }
        for (i, &(l, e)) in self.syllables.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if e == 1 {
                write!(f, "x{l}")?;
            } else {
                write!(f, "x{l}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Parses a word.
///
/// Grammar: a word is a sequence of terms separated by optional spaces; a
/// term is an atom with an optional `^int` exponent; an atom is a letter
/// `x1`…`x9` (also `x10`, …), a single letter `a`…`z` (with `a` = `x1`,
/// `b` = `x2`, …), a parenthesized word, or a commutator `[u,v]`.
pub fn parse_word(text: &str) -> Result<Word> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
    };
    let w = p.word()?;
    p.skip_space();
    if p.pos < p.chars.len() {
        return Err(p.error("unexpected character"));
    }
    Ok(w)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_space(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn word(&mut self) -> Result<Word> {
        let mut terms = Vec::new();
        loop {
            self.skip_space();
            match self.peek() {
                Some(c) if c.is_ascii_lowercase() || c == '[' || c == '(' => terms.push(self.term()?),
                _ => break,
            }
        }
        if terms.is_empty() {
            return Err(self.error("expected a letter, '(' or '['"));
        }
        let refs: Vec<&Word> = terms.iter().collect();
        Ok(Word::concat(&refs))
    }

    fn term(&mut self) -> Result<Word> {
        let atom = self.atom()?;
        self.skip_space();
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_space();
            let k = self.integer()?;
            return Ok(atom.power(k));
        }
        Ok(atom)
    }

    fn integer(&mut self) -> Result<i64> {
        let start = self.pos;
        if matches!(self.peek(), Some('-') | Some('+')) {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| Error::Parse {
            pos: start,
            msg: "expected an integer exponent".into(),
        })
    }

    fn atom(&mut self) -> Result<Word> {
        match self.peek() {
            Some('[') => {
                self.pos += 1;
                let u = self.word()?;
                self.skip_space();
                if self.peek() != Some(',') {
                    return Err(self.error("expected ','"));
                }
                self.pos += 1;
                let v = self.word()?;
                self.skip_space();
                if self.peek() != Some(']') {
                    return Err(self.error("expected ']'"));
                }
                self.pos += 1;
                Ok(Word::commutator(&u, &v))
            }
            Some('(') => {
                self.pos += 1;
                let w = self.word()?;
                self.skip_space();
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(w)
            }
            Some('x') if self.chars.get(self.pos + 1).is_some_and(|c| c.is_ascii_digit()) => {
                self.pos += 1;
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let s: String = self.chars[start..self.pos].iter().collect();
                let index: usize = s.parse().map_err(|_| self.error("letter index too large"))?;
                if index == 0 {
                    return Err(Error::Parse {
                        pos: start,
                        msg: "letters are numbered from 1".into(),
                    });
                }
                Word::letter(index)
            }
            Some(c) if c.is_ascii_lowercase() => {
                self.pos += 1;
                Word::letter(c as usize - 'a' as usize + 1)
            }
            _ => Err(self.error("expected a letter, '(' or '['")),
        }
    }
}

impl Word {
    fn letter(letter: usize) -> Result<Word> {
        Word::from_syllables([(letter, 1)])
    }
}
