//! Exact minimal area by exhaustive search.
//!
//! The search works on cyclic words. The first letter `x` of the canonical
//! representative either lies on a 2-cell, in which case some relator ending
//! in `x^-1` is inserted in front of it, or it is a bridge, in which case the
//! word splits as `x u x^-1 v` into the independent problems `u` and `v`.

use std::collections::HashMap;

use super::certificate::FillingCertificate;
use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::word::{Letter, Symbol, Word};

type Code = u16;

fn inv(c: Code) -> Code {
    c ^ 1
}

fn reduce(w: &[Code]) -> Vec<Code> {
    let mut out: Vec<Code> = Vec::with_capacity(w.len());
    for &c in w {
        if out.last() == Some(&inv(c)) {
            out.pop();
        } else {
            out.push(c);
        }
    }
    out
}

fn inverse(w: &[Code]) -> Vec<Code> {
    w.iter().rev().map(|&c| inv(c)).collect()
}

/// `w = conj · core · conj^-1` with `core` cyclically reduced; `w` freely
/// reduced.
fn cyclic_split(w: &[Code]) -> (Vec<Code>, Vec<Code>) {
    let mut i = 0;
    let n = w.len();
    while 2 * i + 1 < n && w[i] == inv(w[n - 1 - i]) {
        i += 1;
    }
    (w[..i].to_vec(), w[i..n - i].to_vec())
}

/// Least rotation of `w` or of `w^-1`: `(canonical, rotation, inverted)`
/// with `canonical = rotate(w or w^-1, rotation)`.
fn canonical(w: &[Code]) -> (Vec<Code>, usize, bool) {
    let mut best: Option<(Vec<Code>, usize, bool)> = None;
    let winv = inverse(w);
    for (src, inverted) in [(w, false), (winv.as_slice(), true)] {
        for r in 0..src.len().max(1) {
            let mut cand = src[r.min(src.len())..].to_vec();
            cand.extend_from_slice(&src[..r.min(src.len())]);
            if best.as_ref().map_or(true, |b| cand < b.0) {
                best = Some((cand, r, inverted));
            }
        }
    }
    best.expect("at least one candidate")
}

fn conjugate(factors: &mut [(Vec<Code>, Vec<Code>)], d: &[Code]) {
    for (g, _) in factors.iter_mut() {
        g.extend_from_slice(d);
        *g = reduce(g);
    }
}

fn invert(factors: Vec<(Vec<Code>, Vec<Code>)>) -> Vec<(Vec<Code>, Vec<Code>)> {
    factors.into_iter().rev().map(|(g, r)| (g, inverse(&r))).collect()
}

#[derive(Clone, Copy, Debug)]
enum Entry {
    Exact(u32),
    Above(u32),
}

type Factors = Vec<(Vec<Code>, Vec<Code>)>;

/// Memo entries kept before the memo is cleared.
const MEMO_LIMIT: usize = 4_000_000;

/// Search state for one presentation; the memo is reused across queries.
pub struct AreaOracle {
    symbols: Vec<Symbol>,
    by_last: HashMap<Code, Vec<Vec<Code>>>,
    max_len: usize,
    /// Per generator, the largest `|exponent sum|` of a relator.
    max_sum: Vec<i64>,
    memo: HashMap<Vec<Code>, Entry>,
    nodes: usize,
    node_budget: usize,
}

impl AreaOracle {
    pub fn new(p: &Presentation, node_budget: usize) -> Self {
        let symbols = p.generators.clone();
        let rels = p.symmetrized();
        let mut by_last: HashMap<Code, Vec<Vec<Code>>> = HashMap::new();
        let mut max_sum = vec![0i64; symbols.len()];
        let mut out = AreaOracle {
            symbols,
            by_last: HashMap::new(),
            max_len: rels.max_len(),
            max_sum: Vec::new(),
            memo: HashMap::new(),
            nodes: 0,
            node_budget,
        };
        for r in rels.words() {
            let codes = out.encode(r).expect("relators use the generators");
            for (i, s) in max_sum.iter_mut().enumerate() {
                *s = (*s).max(out.exponent_sum(&codes, i).abs());
            }
            by_last.entry(*codes.last().expect("non-empty")).or_default().push(codes);
        }
        out.by_last = by_last;
        out.max_sum = max_sum;
        out
    }

    fn encode(&self, w: &Word) -> Result<Vec<Code>> {
        w.letters()
            .iter()
            .map(|l| {
                let i = self
                    .symbols
                    .iter()
                    .position(|s| s == &l.symbol)
                    .ok_or_else(|| Error::UnknownSymbol(l.symbol.to_string()))?;
                Ok((2 * i + l.inverse as usize) as Code)
            })
            .collect()
    }

    fn decode(&self, w: &[Code]) -> Word {
        Word::from_letters(
            w.iter()
                .map(|&c| Letter::new(self.symbols[(c / 2) as usize].clone(), c % 2 == 1))
                .collect(),
        )
    }

    fn exponent_sum(&self, w: &[Code], gen: usize) -> i64 {
        w.iter()
            .filter(|&&c| (c / 2) as usize == gen)
            .map(|&c| if c % 2 == 0 { 1 } else { -1 })
            .sum()
    }

    fn lower_bound(&self, w: &[Code]) -> u32 {
        let mut lb = w.len().div_ceil(self.max_len.max(1)) as u32;
        for (i, &m) in self.max_sum.iter().enumerate() {
            let s = self.exponent_sum(w, i).abs();
            if s == 0 {
                continue;
            }
            if m == 0 {
                return u32::MAX;
            }
            lb = lb.max(((s + m - 1) / m) as u32);
        }
        lb
    }

    fn key(w: &[Code]) -> Vec<Code> {
        let (_, core) = cyclic_split(&reduce(w));
        canonical(&core).0
    }

    fn remember(&mut self, w: &[Code], entry: Entry) {
        // a full memo is dropped wholesale rather than grown without bound
        if self.memo.len() >= MEMO_LIMIT {
            self.memo.clear();
        }
        self.memo.insert(w.to_vec(), entry);
    }

    /// Exact area of the canonical cyclic word if it is at most `budget`.
    fn solve(&mut self, w: &[Code], budget: u32) -> Result<Option<u32>> {
        if w.is_empty() {
            return Ok(Some(0));
        }
        match self.memo.get(w) {
            Some(Entry::Exact(a)) => return Ok((*a <= budget).then_some(*a)),
            Some(Entry::Above(b)) if *b >= budget => return Ok(None),
            _ => {}
        }
        if self.lower_bound(w) > budget {
            self.remember(w, Entry::Above(budget));
            return Ok(None);
        }
        self.nodes += 1;
        if self.nodes > self.node_budget {
            return Err(Error::SearchBudget { completed: 0 });
        }
        let x = w[0];
        let rest = &w[1..];
        let mut best: Option<u32> = None;
        let mut limit = budget;
        for j in 0..rest.len() {
            if rest[j] != inv(x) {
                continue;
            }
            let u = Self::key(&rest[..j]);
            let v = Self::key(&rest[j + 1..]);
            let Some(au) = self.solve(&u, limit)? else {
                continue;
            };
            if let Some(av) = self.solve(&v, limit - au)? {
                best = Some(au + av);
                if au + av == 0 {
                    break;
                }
                limit = au + av - 1;
            }
        }
        let relators: Vec<Vec<Code>> = self.by_last.get(&inv(x)).cloned().unwrap_or_default();
        for r in &relators {
            if limit == 0 {
                break;
            }
            let mut next = r[..r.len() - 1].to_vec();
            next.extend_from_slice(rest);
            let next = Self::key(&next);
            if let Some(a) = self.solve(&next, limit - 1)? {
                best = Some(a + 1);
                limit = a;
            }
        }
        self.remember(w, best.map_or(Entry::Above(budget), Entry::Exact));
        Ok(best)
    }

    /// Minimal area of `w` if it is at most `area_budget`. Exhausting the
    /// node budget reports the largest area ruled out.
    pub fn area(&mut self, w: &Word, area_budget: u32) -> Result<Option<u32>> {
        let codes = reduce(&self.encode(w)?);
        let key = Self::key(&codes);
        if key.is_empty() {
            return Ok(Some(0));
        }
        self.nodes = 0;
        let lb = self.lower_bound(&key);
        if lb == u32::MAX {
            return Ok(None);
        }
        for b in lb..=area_budget {
            match self.solve(&key, b) {
                Ok(Some(a)) => return Ok(Some(a)),
                Ok(None) => {}
                Err(Error::SearchBudget { .. }) => {
                    return Err(Error::SearchBudget { completed: b - 1 });
                }
                Err(e) => return Err(e),
            }
        }
        Ok(None)
    }

    /// A minimal-area certificate if the area is at most `area_budget`.
    pub fn certificate(&mut self, w: &Word, area_budget: u32) -> Result<Option<FillingCertificate>> {
        let Some(_) = self.area(w, area_budget)? else {
            return Ok(None);
        };
        self.nodes = 0;
        let codes = reduce(&self.encode(w)?);
        let mut out = self.fillings_linear(&codes, 1)?;
        let factors = out.pop().expect("area is attained");
        Ok(Some(self.to_certificate(w, factors)))
    }

    /// Up to `limit` distinct minimal-area certificates.
    pub fn minimal_certificates(&mut self, w: &Word, area_budget: u32, limit: usize) -> Result<Vec<FillingCertificate>> {
        if self.area(w, area_budget)?.is_none() {
            return Ok(Vec::new());
        }
        self.nodes = 0;
        let codes = reduce(&self.encode(w)?);
        let all = self.fillings_linear(&codes, limit.max(1))?;
        Ok(all.into_iter().map(|f| self.to_certificate(w, f)).collect())
    }

    fn to_certificate(&self, w: &Word, factors: Factors) -> FillingCertificate {
        FillingCertificate {
            target: w.clone(),
            factors: factors
                .iter()
                .map(|(g, r)| (self.decode(g), self.decode(r)))
                .collect(),
        }
    }

    fn exact(&mut self, w: &[Code]) -> Result<u32> {
        let mut b = self.lower_bound(w);
        loop {
            if let Some(a) = self.solve(w, b)? {
                return Ok(a);
            }
            b += 1;
        }
    }

    /// Minimal fillings of a freely reduced null-homotopic word.
    fn fillings_linear(&mut self, w: &[Code], limit: usize) -> Result<Vec<Factors>> {
        let (c, core) = cyclic_split(w);
        let (canon, rot, inverted) = canonical(&core);
        let mut out = self.fillings_canonical(&canon, limit)?;
        let base = if inverted { inverse(&core) } else { core };
        let u_inv = inverse(&base[..rot.min(base.len())]);
        let c_inv = inverse(&c);
        for f in out.iter_mut() {
            conjugate(f, &u_inv);
            if inverted {
                *f = invert(std::mem::take(f));
            }
            conjugate(f, &c_inv);
        }
        Ok(out)
    }

    fn fillings_canonical(&mut self, w: &[Code], limit: usize) -> Result<Vec<Factors>> {
        if w.is_empty() {
            return Ok(vec![Vec::new()]);
        }
        let area = self.exact(w)?;
        let x = w[0];
        let rest = w[1..].to_vec();
        let mut out: Vec<Factors> = Vec::new();
        for j in 0..rest.len() {
            if out.len() >= limit {
                return Ok(out);
            }
            if rest[j] != inv(x) {
                continue;
            }
            let (u, v) = (reduce(&rest[..j]), reduce(&rest[j + 1..]));
            let (ku, kv) = (Self::key(&u), Self::key(&v));
            let Some(au) = self.solve(&ku, area)? else {
                continue;
            };
            if self.solve(&kv, area - au)? != Some(area - au) {
                continue;
            }
            let fu = self.fillings_linear(&u, limit)?;
            let fv = self.fillings_linear(&v, limit)?;
            for a in &fu {
                for b in &fv {
                    if out.len() >= limit {
                        return Ok(out);
                    }
                    let mut f = a.clone();
                    conjugate(&mut f, &[inv(x)]);
                    f.extend(b.iter().cloned());
                    out.push(f);
                }
            }
        }
        let relators: Vec<Vec<Code>> = self.by_last.get(&inv(x)).cloned().unwrap_or_default();
        for r in &relators {
            if out.len() >= limit || area == 0 {
                break;
            }
            let mut next = r[..r.len() - 1].to_vec();
            next.extend_from_slice(&rest);
            let next = reduce(&next);
            if self.solve(&Self::key(&next), area - 1)? != Some(area - 1) {
                continue;
            }
            for tail in self.fillings_linear(&next, limit - out.len())? {
                let mut f = vec![(Vec::new(), inverse(r))];
                f.extend(tail);
                out.push(f);
            }
        }
        Ok(out)
    }
}

/// Exact `Area(w)` in `p` if it is at most `area_budget`.
pub fn area_oracle(p: &Presentation, w: &Word, area_budget: u32, node_budget: usize) -> Result<Option<u32>> {
    p.check_word(w)?;
    AreaOracle::new(p, node_budget).area(w, area_budget)
}

/// A minimal-area certificate for `w` if its area is at most `area_budget`.
pub fn oracle_certificate(
    p: &Presentation,
    w: &Word,
    area_budget: u32,
    node_budget: usize,
) -> Result<Option<FillingCertificate>> {
    p.check_word(w)?;
    AreaOracle::new(p, node_budget).certificate(w, area_budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{build_free_abelian, build_gc, build_hnn_commuting};
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn z2() -> Presentation {
        build_free_abelian(&["a", "b"]).unwrap()
    }

    #[test]
    fn small_areas() {
        let p = z2();
        assert_eq!(area_oracle(&p, &Word::new(), 5, 1000).unwrap(), Some(0));
        assert_eq!(area_oracle(&p, &w("a b a^-1 b^-1"), 5, 1000).unwrap(), Some(1));
        assert_eq!(area_oracle(&p, &w("a^-2 b^-1 a^2 b"), 5, 1000).unwrap(), Some(2));
        assert_eq!(area_oracle(&p, &w("a^2 b^3 a^-2 b^-3"), 8, 100_000).unwrap(), Some(6));
        assert_eq!(area_oracle(&p, &w("a b"), 5, 1000).unwrap(), None);
        let hnn = build_hnn_commuting(&p, &["a".into()], &"tau".into()).unwrap();
        assert_eq!(area_oracle(&hnn, &w("a tau^3 a^-1 tau^-3"), 5, 100_000).unwrap(), Some(3));
    }

    #[test]
    fn gc_relators_have_area_one() {
        let p = build_gc(3);
        for r in &p.relators {
            assert_eq!(area_oracle(&p, r, 3, 1000).unwrap(), Some(1));
            assert_eq!(area_oracle(&p, &r.inverse(), 3, 1000).unwrap(), Some(1));
        }
    }

    #[test]
    fn certificates_are_valid_and_minimal() {
        let p = build_gc(2);
        let rels = p.symmetrized();
        let word = w("x1^-2 t^-1 x1^2 t x2^-2");
        let mut oracle = AreaOracle::new(&p, 1_000_000);
        let a = oracle.area(&word, 10).unwrap().unwrap();
        let cert = oracle.certificate(&word, 10).unwrap().unwrap();
        cert.validate(&rels).unwrap();
        assert_eq!(cert.area(), a as usize);
        let all = oracle.minimal_certificates(&word, 10, 20).unwrap();
        assert!(!all.is_empty());
        for c in all {
            c.validate(&rels).unwrap();
            assert_eq!(c.area(), a as usize);
        }
    }

    #[test]
    fn budget_exhaustion_reports_completed_depth() {
        let p = z2();
        let err = area_oracle(&p, &w("a^4 b^4 a^-4 b^-4"), 20, 10).unwrap_err();
        assert!(matches!(err, Error::SearchBudget { .. }));
    }

    #[test]
    fn unknown_symbols_are_rejected() {
        assert!(area_oracle(&z2(), &w("c"), 2, 10).is_err());
    }

    fn z2_word() -> impl Strategy<Value = Word> {
        prop::collection::vec((0..2usize, any::<bool>()), 0..6).prop_map(|v| {
            Word::from_letters(
                v.into_iter()
                    .map(|(i, inv)| Letter::new(["a", "b"][i].into(), inv))
                    .collect(),
            )
            .free_reduce()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn zero_iff_freely_trivial(u in z2_word()) {
            let a = area_oracle(&z2(), &u.concat(&u.inverse()), 4, 100_000).unwrap();
            prop_assert_eq!(a, Some(0));
            let b = area_oracle(&z2(), &u, 0, 100_000).unwrap();
            prop_assert_eq!(b == Some(0), u.is_empty());
        }

        #[test]
        fn subadditive(u in z2_word(), v in z2_word()) {
            let p = z2();
            let cu = Word::commutator(&u, &Word::parse("a").unwrap());
            let cv = Word::commutator(&v, &Word::parse("b").unwrap());
            let mut oracle = AreaOracle::new(&p, 1_000_000);
            let (au, av, auv) = (
                oracle.area(&cu, 8).unwrap(),
                oracle.area(&cv, 8).unwrap(),
                oracle.area(&cu.concat(&cv), 16).unwrap(),
            );
            if let (Some(au), Some(av), Some(auv)) = (au, av, auv) {
                prop_assert!(auv <= au + av);
            }
        }
    }
}
