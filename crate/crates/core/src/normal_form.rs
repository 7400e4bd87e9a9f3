//! Word problem and canonical forms in chain amalgams over central cyclic
//! edge groups.
//!
//! Factors `F_0, …, F_{n-1}` are direct products of copies of `G_c` and `Z`.
//! Edge `e` joins `F_e` and `F_{e+1}` and identifies the central generator of
//! one part on each side; both sides carry the same symbol.
//!
//! An element is stored as `h · r_1 ⋯ r_m` where `h ∈ F_0` is arbitrary and
//! `r_i ∈ F_{v_i}` walks a path `0 = v_0, v_1, …, v_m` of adjacent factors.
//! Each `r_i` has the coordinate of its incoming edge set to zero, so powers
//! of edge generators are carried on the leftmost syllable that can hold
//! them. A trivial `r_i` is allowed only where the path passes straight
//! through `v_i`; the last `r_m` is non-trivial. This form is unique.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::group::{GcAlphabet, GcGen, PartElem, PartKind, ProductElement};
use crate::presentation::{gamma_alphabets, j_alphabets, vertex_alphabet, Family, Presentation};
use crate::scalar::Coord;
use crate::word::{Letter, Symbol, Word};

/// Names of the generators of one direct part of a factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartAlphabet {
    Nil(GcAlphabet),
    Cyc(Symbol),
}

impl PartAlphabet {
    pub fn kind(&self) -> PartKind {
        match self {
            PartAlphabet::Nil(a) => PartKind::Nilpotent(a.rank()),
            PartAlphabet::Cyc(_) => PartKind::Cyclic,
        }
    }

    /// Name of the central generator.
    pub fn central(&self) -> &Symbol {
        match self {
            PartAlphabet::Nil(a) => a.central(),
            PartAlphabet::Cyc(s) => s,
        }
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        match self {
            PartAlphabet::Nil(a) => a.symbols(),
            PartAlphabet::Cyc(s) => vec![s.clone()],
        }
    }

    fn lookup(&self, s: &Symbol) -> Option<GcGen> {
        match self {
            PartAlphabet::Nil(a) => a.lookup(s),
            PartAlphabet::Cyc(c) => (c == s).then_some(GcGen::T),
        }
    }
}

/// Where a letter acts: factor, part and generator within the part.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LetterHome {
    pub factor: usize,
    pub part: usize,
    pub gen: GcGen,
}

/// Edge between factor `e` and `e + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub left_part: usize,
    pub right_part: usize,
    pub symbol: Symbol,
}

#[derive(Clone, Debug)]
pub struct AmalgamSchema {
    factors: Vec<Vec<PartAlphabet>>,
    kinds: Vec<Vec<PartKind>>,
    edges: Vec<Edge>,
    homes: BTreeMap<Symbol, Vec<LetterHome>>,
}

impl AmalgamSchema {
    /// `edges[e] = (left_part, right_part)`; the two parts must share their
    /// central symbol and a factor may not use one part for both its edges.
    pub fn new(factors: Vec<Vec<PartAlphabet>>, edges: Vec<(usize, usize)>) -> Result<Self> {
        if factors.is_empty() || edges.len() + 1 != factors.len() {
            return Err(Error::Input("a chain of n factors needs n - 1 edges".into()));
        }
        let mut edge_specs = Vec::new();
        for (e, &(lp, rp)) in edges.iter().enumerate() {
            let left = factors[e]
                .get(lp)
                .ok_or_else(|| Error::Input(format!("edge {e}: no part {lp} on the left")))?;
            let right = factors[e + 1]
                .get(rp)
                .ok_or_else(|| Error::Input(format!("edge {e}: no part {rp} on the right")))?;
            if left.central() != right.central() {
                return Err(Error::Input(format!(
                    "edge {e} joins `{}` to `{}`",
                    left.central(),
                    right.central()
                )));
            }
            if e > 0 && edges[e - 1].1 == lp {
                return Err(Error::Input(format!("factor {e} uses part {lp} for both edges")));
            }
            edge_specs.push(Edge {
                left_part: lp,
                right_part: rp,
                symbol: left.central().clone(),
            });
        }
        let mut homes: BTreeMap<Symbol, Vec<LetterHome>> = BTreeMap::new();
        for (f, parts) in factors.iter().enumerate() {
            for (p, alphabet) in parts.iter().enumerate() {
                let mut names = alphabet.symbols();
                if let PartAlphabet::Nil(a) = alphabet {
                    names.extend(a.central_aliases.iter().cloned());
                }
                for s in names {
                    let gen = alphabet.lookup(&s).expect("own symbol");
                    homes.entry(s).or_default().push(LetterHome {
                        factor: f,
                        part: p,
                        gen,
                    });
                }
            }
        }
        for (s, hs) in &homes {
            let shared_ok = hs.len() == 1
                || (hs.len() == 2
                    && hs[1].factor == hs[0].factor + 1
                    && edge_specs[hs[0].factor].symbol == *s);
            if !shared_ok {
                return Err(Error::Input(format!("symbol `{s}` is shared outside an edge")));
            }
        }
        let kinds = factors
            .iter()
            .map(|ps| ps.iter().map(PartAlphabet::kind).collect())
            .collect();
        Ok(AmalgamSchema {
            factors,
            kinds,
            edges: edge_specs,
            homes,
        })
    }

    /// Single factor made of the given parts.
    pub fn single(parts: Vec<PartAlphabet>) -> Self {
        Self::new(vec![parts], Vec::new()).expect("single factor")
    }

    pub fn gc(c: usize) -> Self {
        Self::single(vec![PartAlphabet::Nil(GcAlphabet::standard(c))])
    }

    pub fn gamma(a: usize, b: usize, c: usize) -> Self {
        let (ga, gb, gc, zeta) = gamma_alphabets(a, b, c);
        Self::new(
            vec![
                vec![PartAlphabet::Nil(ga)],
                vec![PartAlphabet::Nil(gb), PartAlphabet::Cyc(zeta)],
                vec![PartAlphabet::Nil(gc)],
            ],
            vec![(0, 0), (1, 0)],
        )
        .expect("well-formed")
    }

    pub fn j(a: usize, b: usize) -> Self {
        let [ga, gb, gb2, ga2] = j_alphabets(a, b);
        Self::new(
            vec![
                vec![PartAlphabet::Nil(ga)],
                vec![PartAlphabet::Nil(gb), PartAlphabet::Nil(gb2)],
                vec![PartAlphabet::Nil(ga2)],
            ],
            vec![(0, 0), (1, 0)],
        )
        .expect("well-formed")
    }

    pub fn central_amalgam(a: usize, b: usize) -> Self {
        Self::new(
            vec![
                vec![PartAlphabet::Nil(vertex_alphabet(a, "x", "z", "t_a", ""))],
                vec![PartAlphabet::Nil(vertex_alphabet(b, "y", "z", "t_b", ""))],
            ],
            vec![(0, 0)],
        )
        .expect("well-formed")
    }

    /// Schema solving the word problem of a presentation built by this crate.
    /// Custom presentations and HNN extensions over anything other than one
    /// central generator or the whole base are not supported.
    pub fn for_presentation(p: &Presentation) -> Result<Self> {
        match &p.family {
            Family::Gc(c) => Ok(Self::gc(*c)),
            Family::Gamma(a, b, c) => Ok(Self::gamma(*a, *b, *c)),
            Family::J(a, b) => Ok(Self::j(*a, *b)),
            Family::CentralAmalgam(a, b) => Ok(Self::central_amalgam(*a, *b)),
            Family::FreeAbelian(_) => Ok(Self::single(
                p.generators.iter().cloned().map(PartAlphabet::Cyc).collect(),
            )),
            Family::Product(p1, p2) => {
                let (s1, s2) = (Self::for_presentation(p1)?, Self::for_presentation(p2)?);
                if s1.factors.len() != 1 || s2.factors.len() != 1 {
                    return Err(Error::Input("products of amalgams are not supported".into()));
                }
                let mut parts = s1.factors[0].clone();
                parts.extend(s2.factors[0].iter().cloned());
                Ok(Self::single(parts))
            }
            Family::Hnn {
                base,
                subgroup,
                stable,
            } => {
                let s = Self::for_presentation(base)?;
                if s.factors.len() != 1 {
                    return Err(Error::Input("HNN base must be a single factor".into()));
                }
                let parts = s.factors[0].clone();
                let all: Vec<Symbol> = parts.iter().flat_map(PartAlphabet::symbols).collect();
                if subgroup.len() == all.len() && all.iter().all(|g| subgroup.contains(g)) {
                    let mut parts = parts;
                    parts.push(PartAlphabet::Cyc(stable.clone()));
                    return Ok(Self::single(parts));
                }
                if let [b] = subgroup.as_slice() {
                    if let Some(lp) = parts.iter().position(|pa| pa.central() == b) {
                        return Self::new(
                            vec![
                                parts,
                                vec![PartAlphabet::Cyc(b.clone()), PartAlphabet::Cyc(stable.clone())],
                            ],
                            vec![(lp, 0)],
                        );
                    }
                }
                Err(Error::Input(
                    "HNN subgroup must be one central generator or the whole base".into(),
                ))
            }
            Family::Custom => Err(Error::Input("no normal form for custom presentations".into())),
        }
    }

    pub fn factor_count(&self) -> usize {
        self.factors.len()
    }

    pub fn factor_parts(&self, f: usize) -> &[PartAlphabet] {
        &self.factors[f]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn homes(&self, s: &Symbol) -> Option<&[LetterHome]> {
        self.homes.get(s).map(Vec::as_slice)
    }

    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.homes.keys()
    }

    /// Identity of factor `f`.
    pub fn factor_identity<T: Coord>(&self, f: usize) -> ProductElement<T> {
        ProductElement::identity(&self.kinds[f])
    }

    /// Part of factor `f` carrying edge `e` (which must touch `f`).
    fn edge_part(&self, e: usize, f: usize) -> usize {
        if f == e {
            self.edges[e].left_part
        } else {
            debug_assert_eq!(f, e + 1);
            self.edges[e].right_part
        }
    }

    pub fn identity<T: Coord>(&self) -> NormalForm<T> {
        NormalForm {
            head: self.factor_identity(0),
            path: Vec::new(),
        }
    }

    /// Right multiplication by one letter, in place.
    pub fn mul_letter<T: Coord>(&self, nf: &mut NormalForm<T>, letter: &Letter) -> Result<()> {
        let homes = self
            .homes
            .get(&letter.symbol)
            .ok_or_else(|| Error::UnknownSymbol(letter.symbol.to_string()))?;
        let current = nf.last_vertex();
        let home = *homes.iter().find(|h| h.factor == current).unwrap_or(&homes[0]);
        let mut v = current;
        while v != home.factor {
            v = if home.factor > v { v + 1 } else { v - 1 };
            nf.path.push((v, self.factor_identity(v)));
        }
        match nf.path.last_mut() {
            None => nf.head.mul_gen(home.part, home.gen, letter.inverse),
            Some((_, last)) => {
                last.mul_gen(home.part, home.gen, letter.inverse);
                self.normalize_tail(nf);
            }
        }
        Ok(())
    }

    fn vertex_at(nf: &NormalForm<impl Coord>, pos: usize) -> usize {
        if pos == 0 {
            0
        } else {
            nf.path[pos - 1].0
        }
    }

    fn normalize_tail<T: Coord>(&self, nf: &mut NormalForm<T>) {
        let pos = nf.path.len();
        let v = Self::vertex_at(nf, pos);
        let prev = Self::vertex_at(nf, pos - 1);
        let e = v.min(prev);
        let part = self.edge_part(e, v);
        let last = &mut nf.path[pos - 1].1;
        let p = last.parts[part].central().clone();
        if !p.is_zero() {
            last.parts[part].add_central(&-p.clone());
            self.push_left(nf, pos, e, &p);
        }
        while nf.path.last().is_some_and(|(_, r)| r.is_identity()) {
            nf.path.pop();
        }
    }

    /// Moves the `p`-th power of edge `e` from position `pos` leftwards until
    /// a syllable can absorb it.
    fn push_left<T: Coord>(&self, nf: &mut NormalForm<T>, pos: usize, e: usize, p: &T) {
        let mut i = pos;
        loop {
            let q = i - 1;
            let u = Self::vertex_at(nf, q);
            let part = self.edge_part(e, u);
            if q == 0 {
                nf.head.parts[part].add_central(p);
                return;
            }
            if Self::vertex_at(nf, q - 1) == Self::vertex_at(nf, i) {
                i = q;
                continue;
            }
            nf.path[q - 1].1.parts[part].add_central(p);
            return;
        }
    }

    pub fn evaluate<T: Coord>(&self, w: &Word) -> Result<NormalForm<T>> {
        let mut nf = self.identity();
        for l in w.letters() {
            self.mul_letter(&mut nf, l)?;
        }
        Ok(nf)
    }

    pub fn is_identity(&self, w: &Word) -> Result<bool> {
        Ok(self.evaluate::<num_bigint::BigInt>(w)?.is_identity())
    }

    /// `Some(m)` iff `w` represents the `m`-th power of edge `e`'s generator.
    pub fn is_edge_power<T: Coord>(&self, w: &Word, e: usize) -> Result<Option<T>> {
        if e >= self.edges.len() {
            return Err(Error::Input(format!("no edge {e}")));
        }
        let nf = self.evaluate::<T>(w)?;
        Ok(self
            .as_factor_element(&nf, e)
            .and_then(|g| g.power_of_part_centre(self.edges[e].left_part)))
    }

    /// The element of factor `k` represented by `nf`, if it lies there.
    pub fn as_factor_element<T: Coord>(&self, nf: &NormalForm<T>, k: usize) -> Option<ProductElement<T>> {
        let m = nf.path.len();
        if m > k || nf.path.iter().enumerate().any(|(i, (v, _))| *v != i + 1) {
            return None;
        }
        let mut acc = nf.head.clone();
        for j in 0..k {
            let p = acc.power_of_part_centre(self.edges[j].left_part)?;
            let mut next = self.factor_identity::<T>(j + 1);
            next.parts[self.edges[j].right_part].add_central(&p);
            if let Some((_, r)) = nf.path.get(j) {
                next = next.multiply(r).expect("same factor");
            }
            acc = next;
        }
        Some(acc)
    }

    /// Word spelling one factor element over the factor's symbols.
    pub fn factor_word<T: Coord>(&self, f: usize, g: &ProductElement<T>) -> Word {
        let mut w = Word::new();
        for (alphabet, part) in self.factors[f].iter().zip(&g.parts) {
            let piece = match (alphabet, part) {
                (PartAlphabet::Nil(a), PartElem::Nil(x)) => x.normal_word(a),
                (PartAlphabet::Cyc(s), PartElem::Cyc(m)) => {
                    Word::power(s, m.to_i64().expect("exponent fits"))
                }
                _ => unreachable!("element matches its factor"),
            };
            w = w.concat(&piece);
        }
        w
    }

    /// A word representing `nf`.
    pub fn to_word<T: Coord>(&self, nf: &NormalForm<T>) -> Word {
        let mut w = self.factor_word(0, &nf.head);
        for (v, r) in &nf.path {
            w = w.concat(&self.factor_word(*v, r));
        }
        w
    }

    pub fn multiply<T: Coord>(&self, a: &NormalForm<T>, b: &NormalForm<T>) -> NormalForm<T> {
        let mut out = a.clone();
        for l in self.to_word(b).letters() {
            self.mul_letter(&mut out, l).expect("schema symbols");
        }
        out
    }
}

/// Canonical form of an element of a chain amalgam.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NormalForm<T> {
    head: ProductElement<T>,
    path: Vec<(usize, ProductElement<T>)>,
}

impl<T: Coord> NormalForm<T> {
    pub fn is_identity(&self) -> bool {
        self.path.is_empty() && self.head.is_identity()
    }

    fn last_vertex(&self) -> usize {
        self.path.last().map_or(0, |(v, _)| *v)
    }

    pub fn head(&self) -> &ProductElement<T> {
        &self.head
    }

    /// Path syllables `(factor, representative)`, including trivial
    /// pass-through ones.
    pub fn path(&self) -> &[(usize, ProductElement<T>)] {
        &self.path
    }

    /// Non-trivial syllables in order, the head counted as factor 0.
    pub fn syllables(&self) -> Vec<(usize, &ProductElement<T>)> {
        std::iter::once((0, &self.head))
            .chain(self.path.iter().map(|(v, r)| (*v, r)))
            .filter(|(_, r)| !r.is_identity())
            .collect()
    }

    /// Injective byte encoding: path length (u32), head, then for each path
    /// syllable its factor index (u32) and representative. Integers are
    /// written with a u16 length prefix followed by big-endian two's
    /// complement bytes. The identity of `G_c` encodes as
    /// `00 00 00 00` followed by `00 01 00` for each of its `c + 1` coordinates.
    pub fn canonical_key(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(&(self.path.len() as u32).to_be_bytes());
        self.head.encode(&mut out);
        for (v, r) in &self.path {
            out.extend_from_slice(&(*v as u32).to_be_bytes());
            r.encode(&mut out);
        }
        out
    }
}

impl<T: Coord> fmt::Debug for NormalForm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.head)?;
        for (v, r) in &self.path {
            write!(f, " ·{v} {r:?}")?;
        }
        Ok(())
    }
}

impl<T: Coord> fmt::Display for NormalForm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::evaluate_in_alphabet;
    use crate::presentation::{build_central_amalgam, build_free_abelian, build_gamma, build_gc, build_hnn_commuting, build_j, build_product};
    use num_bigint::BigInt;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    type Nf = NormalForm<BigInt>;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn nested(c: usize, k: i64, alphabet: &GcAlphabet) -> Word {
        let tk = Word::power(&alphabet.t, k);
        let mut word = Word::power(&alphabet.x[0], k);
        for _ in 1..c {
            word = Word::commutator(&word, &tk);
        }
        word
    }

    #[test]
    fn relators_evaluate_to_identity() {
        for (a, b, c) in [(2, 1, 3), (3, 2, 4), (1, 1, 2), (1, 1, 1)] {
            let p = build_gamma(a, b, c);
            let s = AmalgamSchema::for_presentation(&p).unwrap();
            for r in &p.relators {
                assert!(s.is_identity(r).unwrap(), "{r}");
            }
        }
        for (a, b) in [(1, 1), (2, 1), (2, 2)] {
            let p = build_j(a, b);
            let s = AmalgamSchema::for_presentation(&p).unwrap();
            for r in &p.relators {
                assert!(s.is_identity(r).unwrap(), "{r}");
            }
            let p = build_central_amalgam(a, b);
            let s = AmalgamSchema::for_presentation(&p).unwrap();
            assert!(p.relators.iter().all(|r| s.is_identity(r).unwrap()));
        }
    }

    #[test]
    fn commutator_of_edge_generators_is_trivial() {
        let s = AmalgamSchema::gamma(2, 1, 3);
        assert!(s.is_identity(&w("z^-1 zeta^-1 z zeta")).unwrap());
        assert!(!s.is_identity(&w("t_a")).unwrap());
        let nf: Nf = s.evaluate(&w("t_a^-1 t_c^-1 t_a t_c")).unwrap();
        assert!(!nf.is_identity());
        let factors: Vec<usize> = nf.syllables().iter().map(|(f, _)| *f).collect();
        assert_eq!(factors, vec![0, 2, 0, 2]);
    }

    #[test]
    fn conjugated_relators_are_trivial() {
        let p = build_gamma(2, 1, 3);
        let s = AmalgamSchema::for_presentation(&p).unwrap();
        let u = w("t_a x1 t_c^-1 zeta t_b u1");
        for r in &p.relators {
            let word = r.concat(&u).concat(&r.inverse()).concat(&u.inverse());
            assert!(s.is_identity(&word).unwrap());
        }
    }

    #[test]
    fn canonical_keys() {
        let s = AmalgamSchema::gamma(2, 1, 3);
        let id: Nf = s.identity();
        // head lives in G_2: coordinates x1, z and the t-exponent
        let mut expected = vec![0, 0, 0, 0];
        for _ in 0..3 {
            expected.extend_from_slice(&[0, 1, 0]);
        }
        assert_eq!(id.canonical_key(), expected);
        let a = w("t_a^-1 t_c^-1 t_a t_c");
        let b = w("t_c^-1 t_a^-1 t_c t_a");
        let ka = s.evaluate::<BigInt>(&a).unwrap().canonical_key();
        let kb = s.evaluate::<BigInt>(&b).unwrap().canonical_key();
        assert_ne!(ka, kb);
        let unreduced = w("t_a^-1 zeta zeta^-1 t_c^-1 t_a x1 x1^-1 t_c");
        assert_eq!(s.evaluate::<BigInt>(&unreduced).unwrap().canonical_key(), ka);
    }

    #[test]
    fn edge_powers() {
        for (a, b, c) in [(2, 1, 3), (3, 2, 4)] {
            let s = AmalgamSchema::gamma(a, b, c);
            let (ga, _, gc, _) = gamma_alphabets(a, b, c);
            for k in 1..=3i64 {
                let v = nested(a, k, &ga);
                assert_eq!(s.is_edge_power::<BigInt>(&v, 0).unwrap(), Some(BigInt::from(k.pow(a as u32))));
                let u = nested(c, k, &gc);
                assert_eq!(s.is_edge_power::<BigInt>(&u, 1).unwrap(), Some(BigInt::from(k.pow(c as u32))));
                assert_eq!(s.is_edge_power::<BigInt>(&u, 0).unwrap(), None);
            }
            assert_eq!(s.is_edge_power::<BigInt>(&Word::new(), 0).unwrap(), Some(BigInt::from(0)));
            assert_eq!(s.is_edge_power::<BigInt>(&w("t_a"), 0).unwrap(), None);
            // ζ written through the first factor's neighbour
            assert_eq!(s.is_edge_power::<BigInt>(&w("t_b zeta t_b^-1"), 1).unwrap(), Some(BigInt::from(1)));
            assert_eq!(s.is_edge_power::<BigInt>(&w("t_a z t_a^-1 z"), 0).unwrap(), Some(BigInt::from(2)));
        }
    }

    #[test]
    fn factor_elements_match_direct_evaluation() {
        let s = AmalgamSchema::gamma(3, 2, 4);
        let (ga, gb, gc, _) = gamma_alphabets(3, 2, 4);
        let cases = [(0, &ga, "x1 t_a x2^-1 t_a^2 z x1"), (2, &gc, "u1 t_c^-1 u3 t_c u2^2 zeta")];
        for (f, alphabet, text) in cases {
            let word = w(text);
            let nf: Nf = s.evaluate(&word).unwrap();
            let direct = evaluate_in_alphabet::<BigInt>(alphabet, &word).unwrap();
            let got = s.as_factor_element(&nf, f).unwrap();
            assert_eq!(got.parts[0], PartElem::Nil(direct));
        }
        let word = w("y1 t_b zeta^2 y1^-1 z");
        let nf: Nf = s.evaluate(&word).unwrap();
        let got = s.as_factor_element(&nf, 1).unwrap();
        let direct = evaluate_in_alphabet::<BigInt>(&gb, &w("y1 t_b y1^-1 z")).unwrap();
        assert_eq!(got.parts, vec![PartElem::Nil(direct), PartElem::Cyc(BigInt::from(2))]);
        assert!(s.as_factor_element(&nf, 0).is_none());
    }

    #[test]
    fn schemas_for_other_families() {
        let z2 = build_free_abelian(&["a", "b"]).unwrap();
        let hnn = build_hnn_commuting(&z2, &[Symbol::new("a")], &Symbol::new("tau")).unwrap();
        let s = AmalgamSchema::for_presentation(&hnn).unwrap();
        assert_eq!(s.factor_count(), 2);
        assert!(s.is_identity(&w("a^2 tau^3 a^-2 tau^-3")).unwrap());
        assert!(!s.is_identity(&w("b tau b^-1 tau^-1")).unwrap());
        let g2 = build_gc(2);
        let hnn = build_hnn_commuting(&g2, &[Symbol::new("x2")], &Symbol::new("tau")).unwrap();
        let s = AmalgamSchema::for_presentation(&hnn).unwrap();
        assert!(s.is_identity(&w("x1^-1 t^-1 x1 t tau x1^-1 t^-1 x1 t tau^-1 x2^-2")).unwrap());
        let whole = build_hnn_commuting(&z2, &[Symbol::new("a"), Symbol::new("b")], &Symbol::new("s")).unwrap();
        assert_eq!(AmalgamSchema::for_presentation(&whole).unwrap().factor_count(), 1);
        let free = build_hnn_commuting(&z2, &[], &Symbol::new("s")).unwrap();
        assert!(AmalgamSchema::for_presentation(&free).is_err());
        let prod = build_product(&build_free_abelian(&["a"]).unwrap(), &build_free_abelian(&["b", "c"]).unwrap()).unwrap();
        let s = AmalgamSchema::for_presentation(&prod).unwrap();
        assert!(s.is_identity(&w("a c a^-1 c^-1")).unwrap());
    }

    fn gamma_word(max: usize) -> impl Strategy<Value = Word> {
        let names = ["x1", "z", "t_a", "t_b", "u1", "u2", "zeta", "t_c"];
        prop::collection::vec((0..names.len(), any::<bool>()), 0..max).prop_map(move |v| {
            v.into_iter().map(|(i, inv)| Letter::new(Symbol::new(names[i]), inv)).collect()
        })
    }

    proptest! {
        #[test]
        fn evaluation_is_a_homomorphism(u in gamma_word(14), v in gamma_word(14)) {
            let s = AmalgamSchema::gamma(2, 1, 3);
            let nu: Nf = s.evaluate(&u).unwrap();
            let nv: Nf = s.evaluate(&v).unwrap();
            let nuv: Nf = s.evaluate(&u.concat(&v)).unwrap();
            prop_assert_eq!(s.multiply(&nu, &nv), nuv.clone());
            prop_assert_eq!(s.evaluate::<BigInt>(&s.to_word(&nuv)).unwrap(), nuv);
            let inverse: Nf = s.evaluate(&u.concat(&u.inverse())).unwrap();
            prop_assert!(inverse.is_identity());
        }

        #[test]
        fn rebracketing_keeps_keys(u in gamma_word(12), v in gamma_word(6), cut in 0usize..12, r in 0usize..12) {
            let p = build_gamma(2, 1, 3);
            let s = AmalgamSchema::for_presentation(&p).unwrap();
            let cut = cut.min(u.len());
            let rel = &p.relators[r % p.relators.len()];
            let inserted = u.subword(0, cut)
                .concat(&v)
                .concat(rel)
                .concat(&v.inverse())
                .concat(&u.subword(cut, u.len()));
            let a = s.evaluate::<BigInt>(&u).unwrap().canonical_key();
            let b = s.evaluate::<BigInt>(&inserted).unwrap().canonical_key();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn identities_survive_retractions(u in gamma_word(10), v in gamma_word(10)) {
            // [u, v] is trivial in Γ only if both retractions kill it.
            let s = AmalgamSchema::gamma(2, 1, 3);
            let word = Word::commutator(&u, &v);
            if s.is_identity(&word).unwrap() {
                let (ga, gb, gc, zeta) = gamma_alphabets(2, 1, 3);
                let keep_c: BTreeSet<Symbol> = gc.symbols().into_iter().collect();
                let kill_c: BTreeSet<Symbol> = ga.symbols().into_iter().chain(gb.symbols()).filter(|x| !keep_c.contains(x)).collect();
                let image = word.delete_letters(&kill_c);
                prop_assert!(evaluate_in_alphabet::<BigInt>(&gc, &image).unwrap().is_identity());
                let kill_ab: BTreeSet<Symbol> = keep_c.iter().cloned().chain([zeta]).collect();
                let image = word.delete_letters(&kill_ab);
                let ab = AmalgamSchema::central_amalgam(2, 1);
                prop_assert!(ab.is_identity(&image).unwrap());
            }
        }
    }
}
