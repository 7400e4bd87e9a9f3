//! Exact arithmetic in `G_c = Z^c ⋊ Z` and in direct products of such groups.
//!
//! An element `(v, k)` stands for `x_1^{v_1} ⋯ x_c^{v_c} t^k`. Conjugation by
//! `t` acts by `t^-1 x_i t = x_i x_{i+1}` (with `x_c` central), so
//! `(v, k)(w, l) = (v + φ^{-k} w, k + l)` where `φ e_i = e_i + e_{i+1}`.
//! Commutators are `[a, b] = a^-1 b^-1 a b` throughout the crate.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{binomial, encode_int, Coord};
use crate::word::{Symbol, Word};

/// `φ_c^k v` for any integer `k`; entry `j` is `Σ_i C(k, j - i) v_i`.
pub fn phi_power_apply<T: Coord>(c: usize, k: &T, v: &[T]) -> Result<Vec<T>> {
    if v.len() != c {
        return Err(Error::RankMismatch {
            expected: c,
            found: v.len(),
        });
    }
    let coeffs: Vec<T> = (0..c).map(|d| binomial(k, d)).collect();
    Ok((0..c)
        .map(|j| {
            (0..=j).fold(T::zero(), |acc, i| {
                acc + coeffs[j - i].clone() * v[i].clone()
            })
        })
        .collect())
}

/// Generator of `G_c`: `X(i)` is `x_{i+1}` (zero-based), `T` is `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GcGen {
    X(usize),
    T,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GcElement<T> {
    v: Vec<T>,
    k: T,
}

impl<T: Coord> GcElement<T> {
    pub fn new(v: Vec<T>, k: T) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::Input("rank must be positive".into()));
        }
        Ok(GcElement { v, k })
    }

    pub fn identity(c: usize) -> Self {
        GcElement {
            v: vec![T::zero(); c],
            k: T::zero(),
        }
    }

    pub fn generator(c: usize, gen: GcGen) -> Self {
        let mut g = Self::identity(c);
        g.mul_gen(gen, false);
        g
    }

    /// `z_c^m`.
    pub fn central(c: usize, m: T) -> Self {
        let mut g = Self::identity(c);
        g.v[c - 1] = m;
        g
    }

    pub fn rank(&self) -> usize {
        self.v.len()
    }

    pub fn v(&self) -> &[T] {
        &self.v
    }

    pub fn k(&self) -> &T {
        &self.k
    }

    pub fn is_identity(&self) -> bool {
        self.k.is_zero() && self.v.iter().all(T::is_zero)
    }

    /// Right multiplication by a generator or its inverse, in place.
    pub fn mul_gen(&mut self, gen: GcGen, inverse: bool) {
        match gen {
            GcGen::T => {
                if inverse {
                    self.k = self.k.clone() - T::one();
                } else {
                    self.k = self.k.clone() + T::one();
                }
            }
            GcGen::X(i) => {
                let back = -self.k.clone();
                for j in i..self.v.len() {
                    let coeff = binomial(&back, j - i);
                    if inverse {
                        self.v[j] = self.v[j].clone() - coeff;
                    } else {
                        self.v[j] = self.v[j].clone() + coeff;
                    }
                }
            }
        }
    }

    /// Adds `m` to the central coordinate, i.e. multiplies by `z_c^m`.
    pub fn add_central(&mut self, m: &T) {
        let last = self.v.len() - 1;
        self.v[last] = self.v[last].clone() + m.clone();
    }

    /// Exponents `a` with `t^k x_1^{a_1} ⋯ x_c^{a_c}` equal to this element.
    pub fn t_first_exponents(&self) -> Vec<T> {
        phi_power_apply(self.rank(), &self.k, &self.v).expect("rank is consistent")
    }

    /// The word `t^k x_1^{a_1} ⋯ x_c^{a_c}` over the given alphabet.
    pub fn normal_word(&self, alphabet: &GcAlphabet) -> Word {
        let mut w = Word::power(&alphabet.t, to_i64(&self.k));
        for (i, a) in self.t_first_exponents().iter().enumerate() {
            w = w.concat(&Word::power(&alphabet.x[i], to_i64(a)));
        }
        w
    }

    pub fn encode(&self, out: &mut Vec<u8>) {
        for x in &self.v {
            encode_int(x, out);
        }
        encode_int(&self.k, out);
    }
}

impl<T: Coord> fmt::Debug for GcElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(v=(")?;
        for (i, x) in self.v.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "), k={})", self.k)
    }
}

impl<T: Coord> fmt::Display for GcElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub(crate) fn to_i64<T: Coord>(x: &T) -> i64 {
    x.to_i64().expect("exponent too large to spell as a word")
}

pub fn gc_multiply<T: Coord>(g: &GcElement<T>, h: &GcElement<T>) -> Result<GcElement<T>> {
    if g.rank() != h.rank() {
        return Err(Error::RankMismatch {
            expected: g.rank(),
            found: h.rank(),
        });
    }
    let twisted = phi_power_apply(h.rank(), &-g.k.clone(), &h.v)?;
    Ok(GcElement {
        v: g.v.iter().zip(twisted).map(|(a, b)| a.clone() + b).collect(),
        k: g.k.clone() + h.k.clone(),
    })
}

pub fn gc_inverse<T: Coord>(g: &GcElement<T>) -> GcElement<T> {
    let v = phi_power_apply(g.rank(), &g.k, &g.v).expect("rank is consistent");
    GcElement {
        v: v.into_iter().map(|x| -x).collect(),
        k: -g.k.clone(),
    }
}

/// `Some(m)` iff `g = z_c^m`.
pub fn is_central_power<T: Coord>(g: &GcElement<T>) -> Option<T> {
    let c = g.rank();
    if g.k.is_zero() && g.v[..c - 1].iter().all(T::is_zero) {
        Some(g.v[c - 1].clone())
    } else {
        None
    }
}

/// Symbol names for the generators of one copy of `G_c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GcAlphabet {
    pub x: Vec<Symbol>,
    pub t: Symbol,
    /// Extra names accepted for `x_c`.
    pub central_aliases: Vec<Symbol>,
}

impl GcAlphabet {
    /// `x1, …, xc, t`, with `z` accepted for `xc`.
    pub fn standard(c: usize) -> Self {
        GcAlphabet {
            x: (1..=c).map(|i| Symbol::new(&format!("x{i}"))).collect(),
            t: Symbol::new("t"),
            central_aliases: vec![Symbol::new("z")],
        }
    }

    pub fn rank(&self) -> usize {
        self.x.len()
    }

    pub fn lookup(&self, s: &Symbol) -> Option<GcGen> {
        if s == &self.t {
            return Some(GcGen::T);
        }
        if let Some(i) = self.x.iter().position(|x| x == s) {
            return Some(GcGen::X(i));
        }
        if self.central_aliases.contains(s) {
            return Some(GcGen::X(self.rank() - 1));
        }
        None
    }

    /// The central generator's preferred name.
    pub fn central(&self) -> &Symbol {
        &self.x[self.rank() - 1]
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        let mut out = self.x.clone();
        out.push(self.t.clone());
        out
    }
}

pub fn evaluate_word_gc<T: Coord>(c: usize, w: &Word) -> Result<GcElement<T>> {
    evaluate_in_alphabet(&GcAlphabet::standard(c), w)
}

pub fn evaluate_in_alphabet<T: Coord>(alphabet: &GcAlphabet, w: &Word) -> Result<GcElement<T>> {
    let mut g = GcElement::identity(alphabet.rank());
    for l in w.letters() {
        let gen = alphabet
            .lookup(&l.symbol)
            .ok_or_else(|| Error::UnknownSymbol(l.symbol.to_string()))?;
        g.mul_gen(gen, l.inverse);
    }
    Ok(g)
}

/// Descriptor of one direct factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PartKind {
    Nilpotent(usize),
    Cyclic,
}

/// Element of one direct factor.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PartElem<T> {
    Nil(GcElement<T>),
    Cyc(T),
}

impl<T: Coord> PartElem<T> {
    pub fn identity(kind: PartKind) -> Self {
        match kind {
            PartKind::Nilpotent(c) => PartElem::Nil(GcElement::identity(c)),
            PartKind::Cyclic => PartElem::Cyc(T::zero()),
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            PartElem::Nil(g) => g.is_identity(),
            PartElem::Cyc(m) => m.is_zero(),
        }
    }

    /// Exponent of the designated central generator.
    pub fn central(&self) -> &T {
        match self {
            PartElem::Nil(g) => &g.v[g.rank() - 1],
            PartElem::Cyc(m) => m,
        }
    }

    /// `Some(m)` iff the element is the `m`-th power of the central generator.
    pub fn central_power(&self) -> Option<T> {
        match self {
            PartElem::Nil(g) => is_central_power(g),
            PartElem::Cyc(m) => Some(m.clone()),
        }
    }

    pub fn add_central(&mut self, m: &T) {
        match self {
            PartElem::Nil(g) => g.add_central(m),
            PartElem::Cyc(x) => *x = x.clone() + m.clone(),
        }
    }

    fn multiply(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (PartElem::Nil(g), PartElem::Nil(h)) => Ok(PartElem::Nil(gc_multiply(g, h)?)),
            (PartElem::Cyc(a), PartElem::Cyc(b)) => Ok(PartElem::Cyc(a.clone() + b.clone())),
            _ => Err(Error::Input("mismatched direct factors".into())),
        }
    }

    fn inverse(&self) -> Self {
        match self {
            PartElem::Nil(g) => PartElem::Nil(gc_inverse(g)),
            PartElem::Cyc(a) => PartElem::Cyc(-a.clone()),
        }
    }

    fn encode(&self, out: &mut Vec<u8>) {
        match self {
            PartElem::Nil(g) => g.encode(out),
            PartElem::Cyc(m) => encode_int(m, out),
        }
    }
}

/// Element of a direct product of copies of `G_c` and `Z`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductElement<T> {
    pub parts: Vec<PartElem<T>>,
}

impl<T: Coord> ProductElement<T> {
    pub fn identity(kinds: &[PartKind]) -> Self {
        ProductElement {
            parts: kinds.iter().map(|&k| PartElem::identity(k)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.parts.iter().all(PartElem::is_identity)
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.parts.len() != other.parts.len() {
            return Err(Error::RankMismatch {
                expected: self.parts.len(),
                found: other.parts.len(),
            });
        }
        let parts = self
            .parts
            .iter()
            .zip(&other.parts)
            .map(|(a, b)| a.multiply(b))
            .collect::<Result<_>>()?;
        Ok(ProductElement { parts })
    }

    pub fn inverse(&self) -> Self {
        ProductElement {
            parts: self.parts.iter().map(PartElem::inverse).collect(),
        }
    }

    /// Right multiplication by a generator of one part. `gen` is ignored for
    /// cyclic parts.
    pub fn mul_gen(&mut self, part: usize, gen: GcGen, inverse: bool) {
        match &mut self.parts[part] {
            PartElem::Nil(g) => g.mul_gen(gen, inverse),
            PartElem::Cyc(m) => {
                let one = T::one();
                *m = if inverse { m.clone() - one } else { m.clone() + one };
            }
        }
    }

    /// `Some(m)` iff the element is `m`-th power of the central generator of `part`.
    pub fn power_of_part_centre(&self, part: usize) -> Option<T> {
        for (i, p) in self.parts.iter().enumerate() {
            if i != part && !p.is_identity() {
                return None;
            }
        }
        self.parts[part].central_power()
    }

    pub fn encode(&self, out: &mut Vec<u8>) {
        for p in &self.parts {
            p.encode(out);
        }
    }
}

impl<T: Coord> fmt::Debug for PartElem<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartElem::Nil(g) => write!(f, "{g:?}"),
            PartElem::Cyc(m) => write!(f, "{m}"),
        }
    }
}

impl<T: Coord> fmt::Debug for ProductElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, " × ")?;
            }
            write!(f, "{p:?}")?;
        }
        write!(f, "]")
    }
}
