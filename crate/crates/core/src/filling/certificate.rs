//! Algebraic null-homotopy witnesses and the rewriting engine that
//! produces them.

use std::fmt;

use crate::error::{Error, Result};
use crate::presentation::RelatorSet;
use crate::word::{parse_line, Word};

/// `target = ∏ g_i^-1 r_i g_i` in the free group, `r_i` symmetrized relators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FillingCertificate {
    pub target: Word,
    /// `(conjugator g_i, relator r_i)` in product order.
    pub factors: Vec<(Word, Word)>,
}

impl FillingCertificate {
    pub fn empty(target: Word) -> Self {
        FillingCertificate {
            target,
            factors: Vec::new(),
        }
    }

    pub fn area(&self) -> usize {
        self.factors.len()
    }

    /// The product of the conjugated relators, freely reduced.
    pub fn product(&self) -> Word {
        let mut out = Word::new();
        for (g, r) in &self.factors {
            for l in g.inverse().letters().iter().chain(r.letters()).chain(g.letters()) {
                out.push_reduced(l.clone());
            }
        }
        out
    }

    pub fn validate(&self, relators: &RelatorSet) -> Result<()> {
        for (i, (_, r)) in self.factors.iter().enumerate() {
            if !relators.contains(r) {
                return Err(Error::InvalidCertificate(format!(
                    "factor {i}: `{r}` is not a symmetrized relator"
                )));
            }
        }
        let product = self.product();
        let target = self.target.free_reduce();
        if product != target {
            return Err(Error::InvalidCertificate(format!(
                "product `{product}` differs from target `{target}`"
            )));
        }
        Ok(())
    }

    /// Certificate for `self.target · other.target`.
    pub fn concat(&self, other: &FillingCertificate) -> FillingCertificate {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        FillingCertificate {
            target: self.target.concat(&other.target),
            factors,
        }
    }

    /// Certificate for `target^-1`.
    pub fn inverse(&self) -> FillingCertificate {
        FillingCertificate {
            target: self.target.inverse(),
            factors: self
                .factors
                .iter()
                .rev()
                .map(|(g, r)| (g.clone(), r.inverse()))
                .collect(),
        }
    }

    /// Certificate for `c^-1 · target · c`.
    pub fn conjugate(&self, c: &Word) -> FillingCertificate {
        FillingCertificate {
            target: c.inverse().concat(&self.target).concat(c).free_reduce(),
            factors: self
                .factors
                .iter()
                .map(|(g, r)| (g.concat(c).free_reduce(), r.clone()))
                .collect(),
        }
    }

    /// Text form: the target on the first line, then one
    /// `conjugator ; relator` pair per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("target: {}\n", self.target);
        for (g, r) in &self.factors {
            out.push_str(&format!("{g} ; {r}\n"));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, first) = lines.next().ok_or(Error::Parse {
            line: 1,
            column: 1,
            message: "missing target line".into(),
        })?;
        let body = first.strip_prefix("target:").ok_or(Error::Parse {
            line: 1,
            column: 1,
            message: "expected `target:`".into(),
        })?;
        let target = parse_line(&format!("       {body}"), 1, None)?;
        let mut factors = Vec::new();
        for (i, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let (g, r) = line.split_once(';').ok_or(Error::Parse {
                line: i + 1,
                column: 1,
                message: "expected `conjugator ; relator`".into(),
            })?;
            let g_word = parse_line(g, i + 1, None)?;
            let pad = " ".repeat(g.len() + 1);
            let r_word = parse_line(&format!("{pad}{r}"), i + 1, None)?;
            factors.push((g_word, r_word));
        }
        Ok(FillingCertificate { target, factors })
    }
}

impl fmt::Display for FillingCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Rewrites a word to the empty word one relator at a time, recording a
/// certificate.
///
/// Invariant: `start = (∏ factors) · C · current · C^-1` freely, where `C`
/// accumulates cyclic rotations.
pub struct Rewriter<'a> {
    relators: &'a RelatorSet,
    start: Word,
    conj: Word,
    current: Word,
    factors: Vec<(Word, Word)>,
}

impl<'a> Rewriter<'a> {
    pub fn new(relators: &'a RelatorSet, start: &Word) -> Self {
        Rewriter {
            relators,
            start: start.clone(),
            conj: Word::new(),
            current: start.clone(),
            factors: Vec::new(),
        }
    }

    pub fn relators(&self) -> &'a RelatorSet {
        self.relators
    }

    pub fn current(&self) -> &Word {
        &self.current
    }

    pub fn area(&self) -> usize {
        self.factors.len()
    }

    fn prefix(&self, pos: usize) -> Word {
        self.conj.concat(&self.current.subword(0, pos))
    }

    fn splice(&mut self, pos: usize, len: usize, b: &Word) {
        let mut letters = self.current.letters()[..pos].to_vec();
        letters.extend_from_slice(b.letters());
        letters.extend_from_slice(&self.current.letters()[pos + len..]);
        self.current = Word::from_letters(letters);
    }

    /// Replaces `current[pos..pos+len]` by `b`; `a b^-1` must freely reduce
    /// to a symmetrized relator.
    pub fn replace(&mut self, pos: usize, len: usize, b: &Word) -> Result<()> {
        let a = self.current.subword(pos, pos + len);
        let r = a.concat(&b.inverse()).free_reduce();
        if !self.relators.contains(&r) {
            return Err(Error::InvalidCertificate(format!(
                "`{a}` -> `{b}` is not a relator move"
            )));
        }
        let g = self.prefix(pos).inverse().free_reduce();
        self.factors.push((g, r));
        self.splice(pos, len, b);
        Ok(())
    }

    /// Replaces `current[pos..pos+len]` by `b` using a certificate whose
    /// target freely equals `a b^-1`.
    pub fn replace_with(&mut self, pos: usize, len: usize, b: &Word, proof: &FillingCertificate) -> Result<()> {
        let a = self.current.subword(pos, pos + len);
        if a.concat(&b.inverse()).free_reduce() != proof.target.free_reduce() {
            return Err(Error::InvalidCertificate(format!(
                "proof of `{}` does not justify `{a}` -> `{b}`",
                proof.target
            )));
        }
        let u_inv = self.prefix(pos).inverse();
        for (g, r) in &proof.factors {
            self.factors.push((g.concat(&u_inv).free_reduce(), r.clone()));
        }
        self.splice(pos, len, b);
        Ok(())
    }

    /// Free cancellation of `current[pos]` against `current[pos + 1]`.
    pub fn cancel(&mut self, pos: usize) -> Result<()> {
        let l = self.current.letters();
        if pos + 1 >= l.len() || !l[pos].cancels(&l[pos + 1]) {
            return Err(Error::Input(format!("no cancelling pair at {pos}")));
        }
        self.splice(pos, 2, &Word::new());
        Ok(())
    }

    pub fn free_reduce(&mut self) {
        self.current = self.current.free_reduce();
    }

    /// Cyclically permutes `current` to start at letter `i`.
    pub fn rotate(&mut self, i: usize) {
        self.conj = self.conj.concat(&self.current.subword(0, i)).free_reduce();
        self.current = self.current.rotate(i);
    }

    /// Freely and cyclically reduces `current`.
    pub fn cyclic_reduce(&mut self) {
        let (c, core) = self.current.cyclic_reduce();
        self.conj = self.conj.concat(&c).free_reduce();
        self.current = core;
    }

    /// Certificate for `start · (C current C^-1)^-1`, the part of the word
    /// consumed so far.
    pub fn into_step(self) -> FillingCertificate {
        let rest = self.conj.concat(&self.current).concat(&self.conj.inverse());
        FillingCertificate {
            target: self.start.concat(&rest.inverse()).free_reduce(),
            factors: self.factors,
        }
    }

    pub fn finish(self) -> Result<FillingCertificate> {
        let rest = self.current.free_reduce();
        if !rest.is_empty() {
            return Err(Error::NotNullHomotopic(format!("left over `{rest}`")));
        }
        Ok(FillingCertificate {
            target: self.start,
            factors: self.factors,
        })
    }
}

/// Single-factor certificate when `w` is a cyclic conjugate of a relator
/// (after cyclic reduction).
pub fn relator_shortcut(relators: &RelatorSet, w: &Word) -> Option<FillingCertificate> {
    let (c, core) = w.cyclic_reduce();
    if core.is_empty() {
        return None;
    }
    for i in 0..core.len() {
        let rotated = core.rotate(i);
        if relators.contains(&rotated) {
            // core = u (v u) u^-1 with u = core[..i]
            let u = core.subword(0, i);
            let g = c.concat(&u).inverse().free_reduce();
            return Some(FillingCertificate {
                target: w.clone(),
                factors: vec![(g, rotated)],
            });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::build_free_abelian;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn certificate_operations_stay_valid() {
        let p = build_free_abelian(&["a", "b"]).unwrap();
        let rels = p.symmetrized();
        let cert = FillingCertificate {
            target: w("a b a^-1 b^-1"),
            factors: vec![(Word::new(), w("a b a^-1 b^-1"))],
        };
        cert.validate(&rels).unwrap();
        cert.inverse().validate(&rels).unwrap();
        cert.conjugate(&w("a b^2")).validate(&rels).unwrap();
        cert.concat(&cert.inverse()).validate(&rels).unwrap();
        let bad = FillingCertificate {
            target: w("a"),
            ..cert.clone()
        };
        assert!(bad.validate(&rels).is_err());
        let not_rel = FillingCertificate {
            target: w("a a"),
            factors: vec![(Word::new(), w("a a"))],
        };
        assert!(not_rel.validate(&rels).is_err());
    }

    #[test]
    fn certificate_text_round_trips() {
        let cert = FillingCertificate {
            target: w("a b a^-1 b^-1"),
            factors: vec![(w("b^-1"), w("b a b^-1 a^-1")), (Word::new(), w("a b a^-1 b^-1"))],
        };
        let text = cert.to_text();
        assert_eq!(text.lines().next(), Some("target: a b a^-1 b^-1"));
        assert_eq!(FillingCertificate::from_text(&text).unwrap(), cert);
        assert!(FillingCertificate::from_text("a ; b").is_err());
    }

    #[test]
    fn rewriter_tracks_moves_and_rotations() {
        let p = build_free_abelian(&["a", "b"]).unwrap();
        let rels = p.symmetrized();
        let start = w("b a^2 b^-1 a^-2");
        let mut rw = Rewriter::new(&rels, &start);
        rw.rotate(1);
        // a a b^-1 a^-1 a^-1 b
        rw.replace(1, 2, &w("b^-1 a")).unwrap();
        rw.cancel(2).unwrap();
        rw.replace(0, 4, &Word::new()).unwrap();
        assert_eq!(rw.area(), 2);
        let cert = rw.finish().unwrap();
        cert.validate(&rels).unwrap();
        assert_eq!(cert.target, start);
    }

    #[test]
    fn rewriter_rejects_non_relator_moves() {
        let p = build_free_abelian(&["a", "b"]).unwrap();
        let rels = p.symmetrized();
        let mut rw = Rewriter::new(&rels, &w("a b"));
        assert!(rw.replace(0, 2, &w("a")).is_err());
        assert!(rw.finish().is_err());
    }

    #[test]
    fn shortcut_handles_conjugated_rotations() {
        let p = build_free_abelian(&["a", "b"]).unwrap();
        let rels = p.symmetrized();
        let word = w("a^2 b a^-1 b^-1 a^-1");
        let cert = relator_shortcut(&rels, &word).unwrap();
        assert_eq!(cert.area(), 1);
        cert.validate(&rels).unwrap();
        assert!(relator_shortcut(&rels, &w("a b")).is_none());
    }
}
