//! Van Kampen diagrams as combinatorial maps.
//!
//! Every edge is a pair of darts exchanged by `twin`; `next` walks a face
//! boundary. Darts leaving the same vertex form the orbits of
//! `d ↦ next(twin(d))`. The outer face is the `next`-cycle through `outer`,
//! which leaves the basepoint.

use std::collections::{HashMap, VecDeque};

use super::certificate::FillingCertificate;
use super::oracle::AreaOracle;
use crate::error::{Error, Result};
use crate::presentation::{Presentation, RelatorSet};
use crate::word::{Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanKampenDiagram {
    twin: Vec<usize>,
    next: Vec<usize>,
    label: Vec<Letter>,
    outer: Option<usize>,
}

impl VanKampenDiagram {
    /// The diagram of the empty word: one vertex, no edges.
    pub fn point() -> Self {
        VanKampenDiagram {
            twin: Vec::new(),
            next: Vec::new(),
            label: Vec::new(),
            outer: None,
        }
    }

    pub fn dart_count(&self) -> usize {
        self.twin.len()
    }

    pub fn twin(&self, d: usize) -> usize {
        self.twin[d]
    }

    pub fn next(&self, d: usize) -> usize {
        self.next[d]
    }

    pub fn label(&self, d: usize) -> &Letter {
        &self.label[d]
    }

    /// The next dart leaving the same vertex.
    pub fn next_at_vertex(&self, d: usize) -> usize {
        self.next[self.twin[d]]
    }

    pub fn outer_dart(&self) -> Option<usize> {
        self.outer
    }

    fn cycle(&self, start: usize) -> Vec<usize> {
        let mut out = vec![start];
        let mut d = self.next[start];
        while d != start {
            out.push(d);
            d = self.next[d];
        }
        out
    }

    /// Darts of the outer face, starting at the basepoint.
    pub fn outer_cycle(&self) -> Vec<usize> {
        self.outer.map(|d| self.cycle(d)).unwrap_or_default()
    }

    /// Face index of every dart; the outer face is `None`.
    pub fn face_of(&self) -> Vec<Option<usize>> {
        let mut out = vec![None; self.dart_count()];
        let mut seen = vec![false; self.dart_count()];
        for d in self.outer_cycle() {
            seen[d] = true;
        }
        let mut f = 0;
        for d in 0..self.dart_count() {
            if seen[d] {
                continue;
            }
            for e in self.cycle(d) {
                seen[e] = true;
                out[e] = Some(f);
            }
            f += 1;
        }
        out
    }

    /// Inner faces as dart cycles, in order of their least dart.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let face_of = self.face_of();
        let mut out: Vec<Vec<usize>> = Vec::new();
        for d in 0..self.dart_count() {
            if let Some(f) = face_of[d] {
                if f == out.len() {
                    out.push(self.cycle(d));
                }
            }
        }
        out
    }

    pub fn read(&self, darts: &[usize]) -> Word {
        Word::from_letters(darts.iter().map(|&d| self.label[d].clone()).collect())
    }

    pub fn boundary_word(&self) -> Word {
        self.read(&self.outer_cycle())
    }

    pub fn area(&self) -> usize {
        self.faces().len()
    }

    /// Vertex index of every dart's origin.
    pub fn origins(&self) -> (Vec<usize>, usize) {
        let n = self.dart_count();
        let mut out = vec![usize::MAX; n];
        let mut v = 0;
        for d in 0..n {
            if out[d] != usize::MAX {
                continue;
            }
            let mut e = d;
            loop {
                out[e] = v;
                e = self.next_at_vertex(e);
                if e == d {
                    break;
                }
            }
            v += 1;
        }
        (out, v.max(1))
    }

    pub fn vertex_count(&self) -> usize {
        self.origins().1
    }

    pub fn edge_count(&self) -> usize {
        self.dart_count() / 2
    }

    /// Distances from the basepoint in the 1-skeleton, by vertex.
    pub fn distances(&self) -> Vec<u32> {
        let (origin, nv) = self.origins();
        let Some(start) = self.outer else {
            return vec![0];
        };
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nv];
        for d in 0..self.dart_count() {
            adj[origin[d]].push(origin[self.twin[d]]);
        }
        let mut dist = vec![u32::MAX; nv];
        let base = origin[start];
        dist[base] = 0;
        let mut queue = VecDeque::from([base]);
        while let Some(v) = queue.pop_front() {
            for &u in &adj[v] {
                if dist[u] == u32::MAX {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    /// Largest distance from the basepoint.
    pub fn diameter(&self) -> u32 {
        self.distances().into_iter().max().unwrap_or(0)
    }

    fn is_connected(&self) -> bool {
        let n = self.dart_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(d) = stack.pop() {
            for e in [self.twin[d], self.next[d]] {
                if !seen[e] {
                    seen[e] = true;
                    count += 1;
                    stack.push(e);
                }
            }
        }
        count == n
    }

    /// Checks the map structure, planarity, face labels and, if given, the
    /// boundary word.
    pub fn validate(&self, relators: &RelatorSet, target: Option<&Word>) -> Result<()> {
        let n = self.dart_count();
        let bad = |m: String| Err(Error::InvalidDiagram(m));
        if self.next.len() != n || self.label.len() != n {
            return bad("array lengths differ".into());
        }
        if n == 0 {
            if self.outer.is_some() {
                return bad("outer dart in an empty diagram".into());
            }
        } else if !matches!(self.outer, Some(d) if d < n) {
            return bad("missing outer dart".into());
        }
        let mut has_prev = vec![false; n];
        for d in 0..n {
            let t = self.twin[d];
            if t >= n || t == d || self.twin[t] != d {
                return bad(format!("dart {d}: twin is not an involution"));
            }
            if self.label[t] != self.label[d].inv() {
                return bad(format!("dart {d}: twin label is not inverse"));
            }
            let e = self.next[d];
            if e >= n || has_prev[e] {
                return bad(format!("dart {d}: next is not a permutation"));
            }
            has_prev[e] = true;
        }
        if !self.is_connected() {
            return bad("not connected".into());
        }
        let faces = self.faces();
        let chi = self.vertex_count() as i64 - self.edge_count() as i64 + faces.len() as i64 + 1;
        if chi != 2 {
            return bad(format!("Euler characteristic {chi}"));
        }
        for (i, f) in faces.iter().enumerate() {
            let w = self.read(f);
            if !relators.contains(&w) {
                return bad(format!("face {i} reads `{w}`, not a relator"));
            }
        }
        if let Some(t) = target {
            let b = self.boundary_word();
            if b != t.free_reduce() {
                return bad(format!("boundary reads `{b}`, expected `{}`", t.free_reduce()));
            }
        }
        Ok(())
    }

    /// Text form: a header, then one `id twin next_at_vertex label` line per
    /// dart.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "darts {}\nouter {}\n",
            self.dart_count(),
            self.outer.map_or("none".to_string(), |d| d.to_string())
        );
        for d in 0..self.dart_count() {
            out.push_str(&format!(
                "{d} {} {} {}\n",
                self.twin[d],
                self.next_at_vertex(d),
                self.label[d]
            ));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let perr = |line: usize, m: &str| Error::Parse {
            line,
            column: 1,
            message: m.to_string(),
        };
        let mut lines = text.lines();
        let n: usize = lines
            .next()
            .and_then(|l| l.strip_prefix("darts "))
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| perr(1, "expected `darts N`"))?;
        let outer = match lines.next().and_then(|l| l.strip_prefix("outer ")).map(str::trim) {
            Some("none") => None,
            Some(s) => Some(s.parse().map_err(|_| perr(2, "bad outer dart"))?),
            None => return Err(perr(2, "expected `outer`")),
        };
        let mut twin = vec![0; n];
        let mut sigma = vec![0; n];
        let mut label = Vec::with_capacity(n);
        for d in 0..n {
            let line = lines.next().ok_or_else(|| perr(d + 3, "missing dart"))?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parse = |s: &str| s.parse::<usize>().map_err(|_| perr(d + 3, "bad index"));
            if fields.len() != 4 || parse(fields[0])? != d {
                return Err(perr(d + 3, "expected `id twin next label`"));
            }
            twin[d] = parse(fields[1])?;
            sigma[d] = parse(fields[2])?;
            let w = Word::parse(fields[3])?;
            if w.len() != 1 {
                return Err(perr(d + 3, "label must be one letter"));
            }
            label.push(w.letters()[0].clone());
        }
        if twin.iter().chain(&sigma).any(|&x| x >= n) {
            return Err(perr(3, "dart index out of range"));
        }
        let next = (0..n).map(|d| sigma[twin[d]]).collect();
        Ok(VanKampenDiagram {
            twin,
            next,
            label,
            outer,
        })
    }

    /// Removes dead darts and everything not connected to the outer face.
    fn compact(&mut self, alive: &[bool]) {
        let n = self.dart_count();
        let mut keep = vec![false; n];
        if let Some(o) = self.outer {
            let mut stack = vec![o];
            keep[o] = true;
            while let Some(d) = stack.pop() {
                for e in [self.twin[d], self.next[d]] {
                    if alive[e] && !keep[e] {
                        keep[e] = true;
                        stack.push(e);
                    }
                }
            }
        }
        let mut index = vec![usize::MAX; n];
        let mut k = 0;
        for d in 0..n {
            if keep[d] {
                index[d] = k;
                k += 1;
            }
        }
        let mut out = VanKampenDiagram::point();
        for d in 0..n {
            if keep[d] {
                out.twin.push(index[self.twin[d]]);
                out.next.push(index[self.next[d]]);
                out.label.push(self.label[d].clone());
            }
        }
        out.outer = self.outer.filter(|&o| keep[o]).map(|o| index[o]);
        *self = out;
    }

    /// Removes pairs of faces that are mirror images across a shared edge,
    /// keeping each removal only if the result stays valid.
    pub fn cancel_mirror_pairs(&mut self, relators: &RelatorSet) {
        let target = self.boundary_word();
        'outer: loop {
            let faces = self.faces();
            let face_of = self.face_of();
            for f1 in &faces {
                for &d in f1 {
                    let Some(g) = face_of[self.twin[d]] else {
                        continue;
                    };
                    if face_of[d] == Some(g) {
                        continue;
                    }
                    if let Some(candidate) = self.without_mirror_pair(f1, self.twin[d]) {
                        if candidate.validate(relators, Some(&target)).is_ok() {
                            *self = candidate;
                            continue 'outer;
                        }
                    }
                }
            }
            return;
        }
    }

    fn without_mirror_pair(&self, f1: &[usize], b0: usize) -> Option<Self> {
        let l = f1.len();
        let i0 = f1.iter().position(|&d| self.twin[d] == b0)?;
        let a: Vec<usize> = (0..l).map(|i| f1[(i0 + i) % l]).collect();
        let b = self.cycle(b0);
        if b.len() != l {
            return None;
        }
        for j in 1..l {
            if self.label[b[j]] != self.label[a[l - j]].inv() {
                return None;
            }
        }
        let mut out = self.clone();
        let mut alive = vec![true; self.dart_count()];
        for &d in a.iter().chain(&b) {
            alive[d] = false;
        }
        for j in 1..l {
            let (x, y) = (self.twin[a[l - j]], self.twin[b[j]]);
            if x == b[j] {
                continue;
            }
            if !alive[x] || !alive[y] {
                return None;
            }
            out.twin[x] = y;
            out.twin[y] = x;
        }
        out.compact(&alive);
        Some(out)
    }
}

/// Builds a wedge of lollipops reading the certificate's product, then folds
/// adjacent inverse boundary edges until the boundary reads the reduced
/// target.
pub fn certificate_to_diagram(cert: &FillingCertificate, relators: &RelatorSet) -> Result<VanKampenDiagram> {
    cert.validate(relators)
        .map_err(|e| Error::Input(format!("invalid certificate: {e}")))?;
    let mut d = VanKampenDiagram::point();
    let mut outer_seq: Vec<usize> = Vec::new();
    let new_dart = |d: &mut VanKampenDiagram, l: Letter| -> usize {
        let i = d.twin.len();
        d.twin.extend([i + 1, i]);
        d.next.extend([usize::MAX, usize::MAX]);
        d.label.push(l.inv());
        d.label.push(l);
        // dart `i + 1` carries `l`, its twin `i` carries `l^-1`
        i + 1
    };
    for (g, r) in &cert.factors {
        let stem: Vec<usize> = g.inverse().letters().iter().map(|l| new_dart(&mut d, l.clone())).collect();
        let lp: Vec<usize> = r.letters().iter().map(|l| new_dart(&mut d, l.clone())).collect();
        let m = lp.len();
        for i in 0..m {
            let inner = d.twin[lp[i]];
            d.next[inner] = d.twin[lp[(i + m - 1) % m]];
        }
        outer_seq.extend(&stem);
        outer_seq.extend(&lp);
        outer_seq.extend(stem.iter().rev().map(|&s| d.twin[s]));
    }
    let mut alive = vec![true; d.dart_count()];
    let mut stack: Vec<usize> = Vec::new();
    for &x in &outer_seq {
        match stack.last() {
            Some(&top) if d.label[top].cancels(&d.label[x]) => {
                stack.pop();
                alive[top] = false;
                alive[x] = false;
                if d.twin[top] != x {
                    let (a, b) = (d.twin[top], d.twin[x]);
                    d.twin[a] = b;
                    d.twin[b] = a;
                }
            }
            _ => stack.push(x),
        }
    }
    let k = stack.len();
    for i in 0..k {
        d.next[stack[i]] = stack[(i + 1) % k];
    }
    d.outer = stack.first().copied();
    d.compact(&alive);
    d.validate(relators, Some(&cert.target))?;
    Ok(d)
}

/// The `|U| × |U'|` grid of commutation cells with boundary `U U' U^-1 U'^-1`
/// read from the bottom-left corner.
pub fn grid_fill_commutator(u: &Word, u2: &Word, p: &Presentation) -> Result<VanKampenDiagram> {
    p.check_word(u)?;
    p.check_word(u2)?;
    let relators = p.symmetrized();
    let (w, h) = (u.len(), u2.len());
    let target = u.concat(u2).concat(&u.inverse()).concat(&u2.inverse());
    if w == 0 || h == 0 {
        let mut d = VanKampenDiagram::point();
        if !target.free_reduce().is_empty() {
            return Err(Error::Input("degenerate grid with a non-trivial boundary".into()));
        }
        d.outer = None;
        return Ok(d);
    }
    for a in u.letters() {
        for b in u2.letters() {
            let cell = Word::from_letters(vec![b.clone(), a.clone(), b.inv(), a.inv()]);
            if !relators.contains(&cell) {
                return Err(Error::Input(format!("no commutation relator for `{a}` and `{b}`")));
            }
        }
    }
    let mut d = VanKampenDiagram::point();
    // horizontal edge (i, j) runs from vertex (i, j) to (i + 1, j); vertical
    // edge (i, j) from (i, j) to (i, j + 1); the forward dart is even
    let mut edge = |l: &Letter| {
        let i = d.twin.len();
        d.twin.extend([i + 1, i]);
        d.next.extend([usize::MAX, usize::MAX]);
        d.label.extend([l.clone(), l.inv()]);
        i
    };
    let mut hor: HashMap<(usize, usize), usize> = HashMap::new();
    let mut ver: HashMap<(usize, usize), usize> = HashMap::new();
    for j in 0..=h {
        for (i, l) in u.letters().iter().enumerate() {
            hor.insert((i, j), edge(l));
        }
    }
    for (j, l) in u2.letters().iter().enumerate() {
        for i in 0..=w {
            ver.insert((i, j), edge(l));
        }
    }
    // cells clockwise: up the left side, right along the top, down, left
    for i in 0..w {
        for j in 0..h {
            let cyc = [ver[&(i, j)], hor[&(i, j + 1)], ver[&(i + 1, j)] + 1, hor[&(i, j)] + 1];
            for k in 0..4 {
                d.next[cyc[k]] = cyc[(k + 1) % 4];
            }
        }
    }
    let mut boundary: Vec<usize> = (0..w).map(|i| hor[&(i, 0)]).collect();
    boundary.extend((0..h).map(|j| ver[&(w, j)]));
    boundary.extend((0..w).rev().map(|i| hor[&(i, h)] + 1));
    boundary.extend((0..h).rev().map(|j| ver[&(0, j)] + 1));
    let k = boundary.len();
    for i in 0..k {
        d.next[boundary[i]] = boundary[(i + 1) % k];
    }
    d.outer = Some(boundary[0]);
    d.validate(&relators, Some(&target))?;
    Ok(d)
}

/// Over up to `limit` minimal-area fillings found by the oracle, the least
/// diameter, with the area and a diagram attaining it.
pub fn min_diameter_filling(
    p: &Presentation,
    w: &Word,
    area_budget: u32,
    node_budget: usize,
    limit: usize,
) -> Result<Option<(usize, u32, VanKampenDiagram)>> {
    p.check_word(w)?;
    let relators = p.symmetrized();
    let certs = AreaOracle::new(p, node_budget).minimal_certificates(w, area_budget, limit)?;
    let mut best: Option<(usize, u32, VanKampenDiagram)> = None;
    for cert in certs {
        let mut d = certificate_to_diagram(&cert, &relators)?;
        d.cancel_mirror_pairs(&relators);
        let diam = d.diameter();
        if best.as_ref().map_or(true, |b| diam < b.1) {
            best = Some((d.area(), diam, d));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filling::gc_fill::gc_fill;
    use crate::filling::oracle::oracle_certificate;
    use crate::presentation::{build_free_abelian, build_gc};
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn z2() -> Presentation {
        build_free_abelian(&["a", "b"]).unwrap()
    }

    #[test]
    fn single_relator_gives_one_face() {
        let p = z2();
        let rels = p.symmetrized();
        let r = w("a b a^-1 b^-1");
        let cert = FillingCertificate { target: r.clone(), factors: vec![(Word::new(), r.clone())] };
        let d = certificate_to_diagram(&cert, &rels).unwrap();
        assert_eq!(d.area(), 1);
        assert_eq!(d.vertex_count(), 4);
        assert_eq!(d.diameter(), 2);
        assert_eq!(d.boundary_word(), r);
    }

    #[test]
    fn empty_certificate_gives_a_point() {
        let rels = z2().symmetrized();
        let d = certificate_to_diagram(&FillingCertificate::empty(Word::new()), &rels).unwrap();
        assert_eq!(d, VanKampenDiagram::point());
        assert_eq!((d.area(), d.diameter(), d.vertex_count()), (0, 0, 1));
        d.validate(&rels, Some(&Word::new())).unwrap();
        let r = w("a b a^-1 b^-1");
        let bubble = FillingCertificate {
            target: Word::new(),
            factors: vec![(w("b^2"), r.clone()), (w("b^2"), r.inverse())],
        };
        assert_eq!(certificate_to_diagram(&bubble, &rels).unwrap(), VanKampenDiagram::point());
    }

    #[test]
    fn commutator_certificate_folds_to_two_faces() {
        let p = z2();
        let rels = p.symmetrized();
        let word = w("a^-2 b^-1 a^2 b");
        let cert = oracle_certificate(&p, &word, 4, 10_000).unwrap().unwrap();
        let d = certificate_to_diagram(&cert, &rels).unwrap();
        assert_eq!(d.area(), 2);
        assert_eq!(d.boundary_word(), word);
    }

    #[test]
    fn invalid_certificates_are_rejected() {
        let rels = z2().symmetrized();
        let cert = FillingCertificate { target: w("a"), factors: vec![] };
        assert!(matches!(certificate_to_diagram(&cert, &rels), Err(Error::Input(_))));
    }

    #[test]
    fn grids_have_the_expected_shape() {
        let p = z2();
        let d = grid_fill_commutator(&w("a^2"), &w("b^3"), &p).unwrap();
        assert_eq!(d.area(), 6);
        assert_eq!(d.diameter(), 5);
        assert_eq!(d.boundary_word(), w("a^2 b^3 a^-2 b^-3"));
        let one = grid_fill_commutator(&w("a"), &w("b^-1"), &p).unwrap();
        assert_eq!(one.area(), 1);
        assert!(grid_fill_commutator(&w("a"), &w("a"), &p).is_err());
    }

    #[test]
    fn text_form_round_trips() {
        let d = grid_fill_commutator(&w("a^2"), &w("b"), &z2()).unwrap();
        let text = d.to_text();
        assert!(text.starts_with("darts 14\nouter "));
        assert_eq!(VanKampenDiagram::from_text(&text).unwrap(), d);
        let p = VanKampenDiagram::point();
        assert_eq!(VanKampenDiagram::from_text(&p.to_text()).unwrap(), p);
        assert!(VanKampenDiagram::from_text("darts 1\nouter 0\n0 5 0 a\n").is_err());
    }

    #[test]
    fn validation_catches_broken_maps() {
        let p = z2();
        let rels = p.symmetrized();
        let d = grid_fill_commutator(&w("a"), &w("b"), &p).unwrap();
        let mut bad = d.clone();
        bad.label[0] = bad.label[0].inv();
        assert!(bad.validate(&rels, None).is_err());
        let mut twisted = d.clone();
        let (x, y) = (twisted.next[0], twisted.next[1]);
        twisted.next[0] = y;
        twisted.next[1] = x;
        assert!(twisted.validate(&rels, None).is_err());
        assert!(d.validate(&rels, Some(&w("a"))).is_err());
    }

    #[test]
    fn minimal_diameter_over_fillings() {
        let p = z2();
        let (area, diam, d) = min_diameter_filling(&p, &w("a^-2 b^-1 a^2 b"), 4, 10_000, 16).unwrap().unwrap();
        assert_eq!(area, 2);
        assert_eq!(diam, d.diameter());
        assert_eq!(diam, 3);
    }

    fn gc_word() -> impl Strategy<Value = Word> {
        prop::collection::vec((0..3usize, any::<bool>()), 0..7).prop_map(|v| {
            Word::from_letters(v.into_iter().map(|(i, inv)| Letter::new(["x1", "x2", "t"][i].into(), inv)).collect())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn filler_certificates_become_valid_diagrams(u in gc_word(), v in gc_word()) {
            let word = Word::commutator(&u, &v).concat(&Word::commutator(&v, &u));
            let rels = build_gc(2).symmetrized();
            let cert = gc_fill(2, &word).unwrap();
            let mut d = certificate_to_diagram(&cert, &rels).unwrap();
            prop_assert!(d.area() <= cert.area());
            d.cancel_mirror_pairs(&rels);
            d.validate(&rels, Some(&cert.target)).unwrap();
            prop_assert!(d.area() <= cert.area());
        }

        #[test]
        fn grid_diameter_is_bounded(p in 1usize..5, q in 1usize..5) {
            let u = Word::power(&"a".into(), p as i64);
            let v = Word::power(&"b".into(), q as i64);
            let d = grid_fill_commutator(&u, &v, &z2()).unwrap();
            prop_assert_eq!(d.area(), p * q);
            prop_assert_eq!(d.diameter() as usize, p + q);
        }
    }
}
