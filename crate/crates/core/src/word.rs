//! Words over named generators and their free-group operations.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Generator name, cheap to clone.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Names match `[A-Za-z][A-Za-z0-9_']*`.
    pub fn is_valid_name(name: &str) -> bool {
        let mut chars = name.chars();
        match chars.next() {
            Some(c) if c.is_ascii_alphabetic() => {}
            _ => return false,
        }
        chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

/// A generator or its inverse.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub symbol: Symbol,
    pub inverse: bool,
}

impl Letter {
    pub fn new(symbol: Symbol, inverse: bool) -> Self {
        Letter { symbol, inverse }
    }

    pub fn pos(name: &str) -> Self {
        Letter::new(Symbol::new(name), false)
    }

    pub fn neg(name: &str) -> Self {
        Letter::new(Symbol::new(name), true)
    }

    pub fn inv(&self) -> Letter {
        Letter::new(self.symbol.clone(), !self.inverse)
    }

    pub fn sign(&self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn cancels(&self, other: &Letter) -> bool {
        self.symbol == other.symbol && self.inverse != other.inverse
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "{}^-1", self.symbol)
        } else {
            write!(f, "{}", self.symbol)
        }
    }
}

/// Finite sequence of letters. Not reduced unless stated.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn new() -> Self {
        Word::default()
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn letter(letter: Letter) -> Self {
        Word {
            letters: vec![letter],
        }
    }

    /// `name^k`, written out letter by letter.
    pub fn power(name: &Symbol, k: i64) -> Self {
        let letter = Letter::new(name.clone(), k < 0);
        Word {
            letters: vec![letter; k.unsigned_abs() as usize],
        }
    }

    /// `[a, b] = a^-1 b^-1 a b`, freely reduced.
    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.inverse()
            .concat(&b.inverse())
            .concat(a)
            .concat(b)
            .free_reduce()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn push(&mut self, letter: Letter) {
        self.letters.push(letter);
    }

    /// Appends a letter, cancelling it against the last letter if possible.
    pub fn push_reduced(&mut self, letter: Letter) {
        if self.letters.last().is_some_and(|l| l.cancels(&letter)) {
            self.letters.pop();
        } else {
            self.letters.push(letter);
        }
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(Letter::inv).collect(),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    /// Integer power of the whole word.
    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::new();
        for _ in 0..k.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    pub fn subword(&self, start: usize, end: usize) -> Word {
        Word {
            letters: self.letters[start..end].to_vec(),
        }
    }

    /// Cyclic permutation starting at letter `i`.
    pub fn rotate(&self, i: usize) -> Word {
        if self.is_empty() {
            return Word::new();
        }
        let i = i % self.len();
        let mut letters = self.letters[i..].to_vec();
        letters.extend_from_slice(&self.letters[..i]);
        Word { letters }
    }

    pub fn free_reduce(&self) -> Word {
        let mut out = Word::new();
        for l in &self.letters {
            out.push_reduced(l.clone());
        }
        out
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.letters.windows(2).all(|p| !p[0].cancels(&p[1]))
    }

    /// Splits a freely reduced word as `conj · core · conj^-1` with `core`
    /// cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let w = self.free_reduce();
        let n = w.len();
        let mut i = 0;
        while n >= 2 * (i + 1) && w.letters[i].cancels(&w.letters[n - 1 - i]) {
            i += 1;
        }
        (w.subword(0, i), w.subword(i, n - i))
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_freely_reduced()
            && (self.len() < 2 || !self.letters[0].cancels(&self.letters[self.len() - 1]))
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.letters.iter().map(|l| l.symbol.clone()).collect()
    }

    /// Exponent sum of one generator.
    pub fn exponent_sum(&self, symbol: &Symbol) -> i64 {
        self.letters
            .iter()
            .filter(|l| &l.symbol == symbol)
            .map(Letter::sign)
            .sum()
    }

    /// Removes every letter whose symbol is in `kill`, then freely reduces.
    pub fn delete_letters(&self, kill: &BTreeSet<Symbol>) -> Word {
        let mut out = Word::new();
        for l in self.letters.iter().filter(|l| !kill.contains(&l.symbol)) {
            out.push_reduced(l.clone());
        }
        out
    }

    /// Replaces symbols according to `map`; unmapped symbols are kept.
    pub fn rename(&self, map: &dyn Fn(&Symbol) -> Symbol) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .map(|l| Letter::new(map(&l.symbol), l.inverse))
                .collect(),
        }
    }

    /// Parses the token syntax `x1 t^-1 a^3`.
    pub fn parse(text: &str) -> Result<Word> {
        parse_line(text, 1, None)
    }

    /// Parses and rejects symbols outside `alphabet`.
    pub fn parse_in(text: &str, alphabet: &[Symbol]) -> Result<Word> {
        parse_line(text, 1, Some(alphabet))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word {
            letters: iter.into_iter().collect(),
        }
    }
}

pub(crate) fn parse_line(text: &str, line: usize, alphabet: Option<&[Symbol]>) -> Result<Word> {
    let mut word = Word::new();
    let mut rest = text;
    let mut offset = 0usize;
    loop {
        let trimmed = rest.trim_start();
        offset += rest.len() - trimmed.len();
        if trimmed.is_empty() {
            break;
        }
        let token_len = trimmed.find(char::is_whitespace).unwrap_or(trimmed.len());
        let token = &trimmed[..token_len];
        let column = text[..offset].chars().count() + 1;
        let err = |message: String| Error::Parse {
            line,
            column,
            message,
        };
        let (name, exponent) = match token.split_once('^') {
            None => (token, 1i64),
            Some((name, exp)) => {
                let k: i64 = exp
                    .parse()
                    .map_err(|_| err(format!("malformed exponent in `{token}`")))?;
                if k == 0 {
                    return Err(err(format!("zero exponent in `{token}`")));
                }
                (name, k)
            }
        };
        if !Symbol::is_valid_name(name) {
            return Err(err(format!("malformed token `{token}`")));
        }
        let symbol = Symbol::new(name);
        if let Some(alphabet) = alphabet {
            if !alphabet.contains(&symbol) {
                return Err(err(format!("unknown symbol `{name}`")));
            }
        }
        for l in Word::power(&symbol, exponent).into_letters() {
            word.push(l);
        }
        offset += token_len;
        rest = &trimmed[token_len..];
    }
    Ok(word)
}
