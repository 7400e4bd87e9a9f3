//! Constructive filling in `G_c`: push every `t` to the front, then sort
//! the abelian `x`-word.

use num_bigint::BigInt;

use super::certificate::{relator_shortcut, FillingCertificate, Rewriter};
use crate::error::{Error, Result};
use crate::group::{evaluate_in_alphabet, GcAlphabet, GcElement, GcGen};
use crate::presentation::{build_gc, RelatorSet};
use crate::word::{Letter, Word};

/// Rewrites a word into `N · rest`, where `N = t^k x_1^{a_1} … x_c^{a_c}` is
/// the normal word of the prefix consumed so far.
struct Normalizer<'a> {
    alphabet: &'a GcAlphabet,
    rw: Rewriter<'a>,
    k: i64,
    a: Vec<i64>,
}

impl<'a> Normalizer<'a> {
    fn new(alphabet: &'a GcAlphabet, relators: &'a RelatorSet, w: &Word) -> Self {
        Normalizer {
            alphabet,
            rw: Rewriter::new(relators, w),
            k: 0,
            a: vec![0; alphabet.rank()],
        }
    }

    fn x(&self, i: usize, inverse: bool) -> Letter {
        Letter::new(self.alphabet.x[i].clone(), inverse)
    }

    fn t(&self, inverse: bool) -> Letter {
        Letter::new(self.alphabet.t.clone(), inverse)
    }

    fn k_len(&self) -> usize {
        self.k.unsigned_abs() as usize
    }

    fn n_len(&self) -> usize {
        self.k_len() + self.a.iter().map(|e| e.unsigned_abs() as usize).sum::<usize>()
    }

    fn run(&mut self) -> Result<()> {
        loop {
            let p = self.n_len();
            let Some(l) = self.rw.current().letters().get(p).cloned() else {
                return Ok(());
            };
            let gen = self
                .alphabet
                .lookup(&l.symbol)
                .ok_or_else(|| Error::UnknownSymbol(l.symbol.to_string()))?;
            match (gen, l.inverse) {
                (GcGen::X(j), inv) => self.x_step(p, j, inv)?,
                (GcGen::T, false) => self.t_step(p)?,
                (GcGen::T, true) => self.t_inv_step(p)?,
            }
        }
    }

    /// Moves `x_j^±1` at `p` left into block `j`.
    fn x_step(&mut self, p: usize, j: usize, inverse: bool) -> Result<()> {
        let l = self.x(j, inverse);
        // relator moves are checked against canonical names
        if self.rw.current().letters()[p] != l {
            return Err(Error::Input(format!(
                "`{}` is not a canonical name",
                self.rw.current().letters()[p]
            )));
        }
        let mut pos = p;
        for i in (j + 1..self.a.len()).rev() {
            for _ in 0..self.a[i].unsigned_abs() {
                let y = self.rw.current().letters()[pos - 1].clone();
                self.rw
                    .replace(pos - 1, 2, &Word::from_letters(vec![l.clone(), y]))?;
                pos -= 1;
            }
        }
        let e = if inverse { -1 } else { 1 };
        if self.a[j] != 0 && self.a[j].signum() != e {
            self.rw.cancel(pos - 1)?;
        }
        self.a[j] += e;
        Ok(())
    }

    /// Moves `t` at `p` left through the `x` blocks; the letters it emits are
    /// left unsorted as part of the unread rest.
    fn t_step(&mut self, p: usize) -> Result<()> {
        let c = self.a.len();
        let t = self.t(false);
        let mut pos = p;
        for i in (0..c).rev() {
            for _ in 0..self.a[i].unsigned_abs() {
                let y = self.rw.current().letters()[pos - 1].clone();
                let b = if i == c - 1 {
                    vec![t.clone(), y]
                } else if !y.inverse {
                    vec![t.clone(), y, self.x(i + 1, false)]
                } else {
                    vec![t.clone(), self.x(i + 1, true), y]
                };
                self.rw.replace(pos - 1, 2, &Word::from_letters(b))?;
                pos -= 1;
            }
        }
        if self.k < 0 {
            self.rw.cancel(pos - 1)?;
        }
        self.k += 1;
        self.a.iter_mut().for_each(|e| *e = 0);
        Ok(())
    }

    /// `X t^-1 → t^-1 X'` with `X' = t X t^-1`, justified by normalizing
    /// `X' t` to `t X`.
    fn t_inv_step(&mut self, p: usize) -> Result<()> {
        let start = self.k_len();
        let c = self.a.len();
        let block = GcElement::<BigInt>::new(self.a.iter().map(|&e| e.into()).collect(), BigInt::from(-1))?;
        let shifted: Vec<i64> = block
            .t_first_exponents()
            .iter()
            .map(crate::group::to_i64)
            .collect();
        let mut x_shifted = Word::new();
        for (i, &e) in shifted.iter().enumerate() {
            for _ in 0..e.unsigned_abs() {
                x_shifted.push(self.x(i, e < 0));
            }
        }
        let x_block = self.rw.current().subword(start, p);
        let t_word = Word::letter(self.t(false));
        let mut sub = Normalizer::new(self.alphabet, self.rw_relators(), &x_shifted.concat(&t_word));
        sub.run()?;
        if sub.rw.current() != &t_word.concat(&x_block) {
            return Err(Error::Input("internal: shifted block did not normalize".into()));
        }
        let proof = sub.rw.into_step().inverse().conjugate(&t_word);
        let b = Word::letter(self.t(true)).concat(&x_shifted);
        self.rw.replace_with(start, p + 1 - start, &b, &proof)?;
        if self.k > 0 {
            self.rw.cancel(start - 1)?;
        }
        self.k -= 1;
        debug_assert_eq!(self.a.len(), c);
        self.a = shifted;
        Ok(())
    }

    fn rw_relators(&self) -> &'a RelatorSet {
        self.rw.relators()
    }
}

/// Fills a word that is trivial in `G_c`, with letters named by `alphabet`
/// and relators drawn from `relators` (which must contain the `G_c`
/// relators over those names). Central aliases are not accepted.
pub fn gc_fill_in(alphabet: &GcAlphabet, relators: &RelatorSet, w: &Word) -> Result<FillingCertificate> {
    let g = evaluate_in_alphabet::<BigInt>(alphabet, w)?;
    if !g.is_identity() {
        return Err(Error::NotNullHomotopic(format!("`{w}` evaluates to {g:?}")));
    }
    if let Some(cert) = relator_shortcut(relators, w) {
        return Ok(cert);
    }
    // The normalizer's cost depends heavily on where it starts reading, so
    // every syllable start of the cyclic core is tried, in both directions.
    let (c, core) = w.cyclic_reduce();
    let letters = core.letters();
    let mut best: Option<FillingCertificate> = None;
    for i in 0..letters.len().max(1) {
        if i > 0 && letters[i].symbol == letters[i - 1].symbol {
            continue;
        }
        let rotated = core.rotate(i);
        let g = c.concat(&core.subword(0, i)).inverse().free_reduce();
        for inverted in [false, true] {
            let cert = if inverted {
                normalize(alphabet, relators, &rotated.inverse())?.inverse()
            } else {
                normalize(alphabet, relators, &rotated)?
            };
            if best.as_ref().map_or(true, |b| cert.area() < b.area()) {
                best = Some(cert.conjugate(&g));
            }
        }
    }
    let best = best.expect("at least one start is tried");
    Ok(FillingCertificate {
        target: w.clone(),
        factors: best.factors,
    })
}

fn normalize(alphabet: &GcAlphabet, relators: &RelatorSet, w: &Word) -> Result<FillingCertificate> {
    let mut norm = Normalizer::new(alphabet, relators, w);
    norm.run()?;
    norm.rw.finish()
}

/// Fills `w` in the standard presentation of `G_c`. If `w` is not trivial
/// but represents `z^m`, fills `w z^-m` instead. The alias `z` is rewritten
/// to `x_c`, so the certificate's target uses canonical names.
pub fn gc_fill(c: usize, w: &Word) -> Result<FillingCertificate> {
    let alphabet = GcAlphabet::standard(c);
    let central = alphabet.central().clone();
    let canonical = w.rename(&|s| {
        if alphabet.central_aliases.contains(s) {
            central.clone()
        } else {
            s.clone()
        }
    });
    let g = evaluate_in_alphabet::<BigInt>(&alphabet, &canonical)?;
    let target = match crate::group::is_central_power(&g) {
        Some(m) => canonical.concat(&Word::power(&central, -crate::group::to_i64(&m))),
        None => {
            return Err(Error::NotNullHomotopic(format!("`{w}` evaluates to {g:?}")));
        }
    };
    let relators = build_gc(c).symmetrized();
    gc_fill_in(&alphabet, &relators, &target)
}
