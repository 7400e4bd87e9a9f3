//! Constructive fillers for the presentations built by this crate.

use num_bigint::BigInt;

use super::certificate::{relator_shortcut, FillingCertificate, Rewriter};
use super::gc_fill::gc_fill_in;
use super::oracle::AreaOracle;
use crate::error::{Error, Result};
use crate::group::to_i64;
use crate::normal_form::{AmalgamSchema, PartAlphabet};
use crate::presentation::{Presentation, RelatorSet};
use crate::word::Word;

/// Budgets for the search fallback used by presentations without a normal
/// form.
pub const FALLBACK_AREA_BUDGET: u32 = 24;
pub const FALLBACK_NODE_BUDGET: usize = 2_000_000;

fn part_of(schema: &AmalgamSchema, factor: usize, w: &Word, i: usize) -> Result<usize> {
    let s = &w.letters()[i].symbol;
    schema
        .homes(s)
        .and_then(|hs| hs.iter().find(|h| h.factor == factor))
        .map(|h| h.part)
        .ok_or_else(|| Error::Input(format!("`{s}` is not in factor {factor}")))
}

/// Fills a word that is trivial in one factor: sort the letters by direct
/// part with commutation relators, then fill each part separately.
pub fn fill_in_factor(schema: &AmalgamSchema, relators: &RelatorSet, factor: usize, w: &Word) -> Result<FillingCertificate> {
    if let Some(cert) = relator_shortcut(relators, w) {
        return Ok(cert);
    }
    let mut rw = Rewriter::new(relators, w);
    rw.free_reduce();
    let n = rw.current().len();
    for i in 0..n {
        let mut pos = i;
        let p = part_of(schema, factor, rw.current(), pos)?;
        while pos > 0 && part_of(schema, factor, rw.current(), pos - 1)? > p {
            let cur = rw.current().letters();
            let swapped = Word::from_letters(vec![cur[pos].clone(), cur[pos - 1].clone()]);
            rw.replace(pos - 1, 2, &swapped)?;
            pos -= 1;
        }
    }
    let parts = schema.factor_parts(factor);
    let mut end = rw.current().len();
    while end > 0 {
        let p = part_of(schema, factor, rw.current(), end - 1)?;
        let mut start = end - 1;
        while start > 0 && part_of(schema, factor, rw.current(), start - 1)? == p {
            start -= 1;
        }
        let block = rw.current().subword(start, end);
        let proof = match &parts[p] {
            PartAlphabet::Nil(alphabet) => gc_fill_in(alphabet, relators, &block)?,
            PartAlphabet::Cyc(_) => FillingCertificate::empty(Word::new()),
        };
        rw.replace_with(start, end - start, &Word::new(), &proof)?;
        end = start;
    }
    let cert = rw.finish()?;
    Ok(FillingCertificate {
        target: w.clone(),
        factors: cert.factors,
    })
}

#[derive(Clone, Debug)]
struct Syllable {
    start: usize,
    end: usize,
    factors: Vec<usize>,
}

/// Maximal runs of letters sharing a factor. Edge letters fit either
/// neighbour.
fn syllables(schema: &AmalgamSchema, w: &Word) -> Result<Vec<Syllable>> {
    let mut out: Vec<Syllable> = Vec::new();
    for (i, l) in w.letters().iter().enumerate() {
        let homes: Vec<usize> = schema
            .homes(&l.symbol)
            .ok_or_else(|| Error::UnknownSymbol(l.symbol.to_string()))?
            .iter()
            .map(|h| h.factor)
            .collect();
        if let Some(last) = out.last_mut() {
            let common: Vec<usize> = last.factors.iter().copied().filter(|f| homes.contains(f)).collect();
            if !common.is_empty() {
                last.factors = common;
                last.end = i + 1;
                continue;
            }
        }
        out.push(Syllable {
            start: i,
            end: i + 1,
            factors: homes,
        });
    }
    Ok(out)
}

/// The factor of an ambiguous syllable: the one nearest its predecessor.
fn resolve(sylls: &[Syllable], i: usize) -> usize {
    let s = &sylls[i];
    if s.factors.len() == 1 {
        return s.factors[0];
    }
    let m = sylls.len();
    let anchor = sylls[(i + m - 1) % m].factors[0];
    *s.factors
        .iter()
        .min_by_key(|&&f| (f as i64 - anchor as i64).abs())
        .expect("non-empty")
}

/// Fills a null-homotopic word in a chain amalgam by repeatedly replacing a
/// syllable at a turning point of its factor path with the edge power it
/// represents.
pub fn fill_amalgam(schema: &AmalgamSchema, relators: &RelatorSet, w: &Word) -> Result<FillingCertificate> {
    let mut rw = Rewriter::new(relators, w);
    let mut rounds = 0usize;
    let max_rounds = 4 * w.len() + 64;
    loop {
        rw.cyclic_reduce();
        if rw.current().is_empty() {
            break;
        }
        rounds += 1;
        if rounds > max_rounds {
            return Err(Error::Input("syllable reduction did not terminate".into()));
        }
        let sylls = syllables(schema, rw.current())?;
        let m = sylls.len();
        if m == 1 {
            let f = sylls[0].factors[0];
            let proof = fill_in_factor(schema, relators, f, rw.current())?;
            let n = rw.current().len();
            rw.replace_with(0, n, &Word::new(), &proof)?;
            continue;
        }
        let (first, last) = (&sylls[0], &sylls[m - 1]);
        if first.factors.iter().any(|f| last.factors.contains(f)) {
            rw.rotate(last.start);
            continue;
        }
        let factors: Vec<usize> = (0..m).map(|i| resolve(&sylls, i)).collect();
        let mut done = false;
        for i in 0..m {
            let f = factors[i];
            let (prev, next) = (factors[(i + m - 1) % m], factors[(i + 1) % m]);
            let edge = if prev < f && next < f {
                f - 1
            } else if prev > f && next > f {
                f
            } else {
                continue;
            };
            let s = &sylls[i];
            let piece = rw.current().subword(s.start, s.end);
            let Some(p) = schema.is_edge_power::<BigInt>(&piece, edge)? else {
                continue;
            };
            let power = Word::power(&schema.edges()[edge].symbol, to_i64(&p));
            let proof = fill_in_factor(schema, relators, f, &piece.concat(&power.inverse()))?;
            rw.replace_with(s.start, s.end - s.start, &power, &proof)?;
            done = true;
            break;
        }
        if !done {
            return Err(Error::NotNullHomotopic(format!("`{}` has no reducible syllable", rw.current())));
        }
    }
    rw.finish()
}

/// A valid filling of a null-homotopic word. Presentations with a normal
/// form use the constructive fillers; others fall back to the area oracle.
pub fn fill_word(p: &Presentation, w: &Word) -> Result<FillingCertificate> {
    p.check_word(w)?;
    let relators = p.symmetrized();
    let schema = match AmalgamSchema::for_presentation(p) {
        Ok(schema) => schema,
        Err(_) => {
            return AreaOracle::new(p, FALLBACK_NODE_BUDGET)
                .certificate(w, FALLBACK_AREA_BUDGET)?
                .ok_or_else(|| Error::NotNullHomotopic(format!("no filling of `{w}` found by search")));
        }
    };
    if !schema.is_identity(w)? {
        let nf = schema.evaluate::<BigInt>(w)?;
        return Err(Error::NotNullHomotopic(format!("`{w}` evaluates to {nf}")));
    }
    if w.free_reduce().is_empty() {
        return Ok(FillingCertificate::empty(w.clone()));
    }
    if let Some(cert) = relator_shortcut(&relators, w) {
        return Ok(cert);
    }
    fill_amalgam(&schema, &relators, w)
}
