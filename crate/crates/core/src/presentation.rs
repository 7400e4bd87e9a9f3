//! Finite presentations and the builders for every family used by the crate.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::group::GcAlphabet;
use crate::word::{parse_line, Symbol, Word};

/// Which construction a presentation came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Gc(usize),
    Gamma(usize, usize, usize),
    J(usize, usize),
    /// `G_a *_z G_b` amalgamated over the centres.
    CentralAmalgam(usize, usize),
    Hnn {
        base: Box<Presentation>,
        subgroup: Vec<Symbol>,
        stable: Symbol,
    },
    Product(Box<Presentation>, Box<Presentation>),
    FreeAbelian(usize),
    Custom,
}

/// `⟨generators | relators⟩` with a family tag per relator.
///
/// Relator tags index the relator families used for monochromatic regions:
/// for chain amalgams tag `i` is the family of the `i`-th vertex group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<Symbol>,
    pub relators: Vec<Word>,
    pub relator_families: Vec<usize>,
    pub family: Family,
}

impl Presentation {
    pub fn new(generators: Vec<Symbol>, relators: Vec<Word>, family: Family) -> Result<Self> {
        let families = vec![0; relators.len()];
        Self::with_families(generators, relators, families, family)
    }

    pub fn with_families(
        generators: Vec<Symbol>,
        relators: Vec<Word>,
        relator_families: Vec<usize>,
        family: Family,
    ) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for g in &generators {
            if !Symbol::is_valid_name(g.as_str()) {
                return Err(Error::Input(format!("invalid generator name `{g}`")));
            }
            if !seen.insert(g.clone()) {
                return Err(Error::Input(format!("duplicate generator `{g}`")));
            }
        }
        if relator_families.len() != relators.len() {
            return Err(Error::Input("one family tag per relator required".into()));
        }
        for r in &relators {
            if let Some(s) = r.symbols().into_iter().find(|s| !seen.contains(s)) {
                return Err(Error::UnknownSymbol(s.to_string()));
            }
        }
        Ok(Presentation {
            generators,
            relators,
            relator_families,
            family,
        })
    }

    pub fn family_count(&self) -> usize {
        self.relator_families.iter().max().map_or(1, |m| m + 1)
    }

    pub fn has_generator(&self, s: &Symbol) -> bool {
        self.generators.contains(s)
    }

    pub fn symmetrized(&self) -> RelatorSet {
        RelatorSet::new(&self.relators, &self.relator_families)
    }

    /// Relators whose letters all lie in `alphabet`, with the generators
    /// of `alphabet` that belong to this presentation.
    pub fn restrict(&self, alphabet: &BTreeSet<Symbol>) -> Presentation {
        let generators: Vec<Symbol> = self
            .generators
            .iter()
            .filter(|g| alphabet.contains(*g))
            .cloned()
            .collect();
        let (relators, families) = self
            .relators
            .iter()
            .zip(&self.relator_families)
            .filter(|(r, _)| r.symbols().is_subset(alphabet))
            .map(|(r, &f)| (r.clone(), f))
            .unzip();
        Presentation {
            generators,
            relators,
            relator_families: families,
            family: Family::Custom,
        }
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        match w.letters().iter().find(|l| !self.has_generator(&l.symbol)) {
            Some(l) => Err(Error::UnknownSymbol(l.symbol.to_string())),
            None => Ok(()),
        }
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        Word::parse_in(text, &self.generators)
    }
}

/// Closure of the relators under cyclic permutation and inversion, after
/// cyclic reduction, deduplicated and sorted.
pub fn symmetrize(relators: &[Word]) -> Vec<Word> {
    let mut out = BTreeSet::new();
    for r in relators {
        let (_, core) = r.cyclic_reduce();
        if core.is_empty() {
            continue;
        }
        let inv = core.inverse();
        for i in 0..core.len() {
            out.insert(core.rotate(i));
            out.insert(inv.rotate(i));
        }
    }
    out.into_iter().collect()
}

/// Symmetrized relators with membership lookup and family tags.
#[derive(Clone, Debug)]
pub struct RelatorSet {
    words: Vec<Word>,
    families: HashMap<Word, usize>,
    max_len: usize,
}

impl RelatorSet {
    pub fn new(relators: &[Word], relator_families: &[usize]) -> Self {
        let mut families = HashMap::new();
        for (r, &f) in relators.iter().zip(relator_families) {
            for s in symmetrize(std::slice::from_ref(r)) {
                families.entry(s).or_insert(f);
            }
        }
        let words = symmetrize(relators);
        let max_len = words.iter().map(Word::len).max().unwrap_or(0);
        RelatorSet {
            words,
            families,
            max_len,
        }
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.families.contains_key(w)
    }

    pub fn family_of(&self, w: &Word) -> Option<usize> {
        self.families.get(w).copied()
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }
}

fn sym(name: &str) -> Symbol {
    Symbol::new(name)
}

fn letter_word(s: &Symbol) -> Word {
    Word::power(s, 1)
}

fn comm(a: &Symbol, b: &Symbol) -> Word {
    Word::commutator(&letter_word(a), &letter_word(b))
}

/// Relators of `G_c` over the given names: `[x_i, x_j]` for `i < j`,
/// `[x_c, t]`, then `[x_i, t] x_{i+1}^-1` for `i < c`.
pub fn gc_relators(alphabet: &GcAlphabet) -> Vec<Word> {
    let c = alphabet.rank();
    let x = &alphabet.x;
    let t = &alphabet.t;
    let mut out = Vec::new();
    for i in 0..c {
        for j in i + 1..c {
            out.push(comm(&x[i], &x[j]));
        }
    }
    out.push(comm(&x[c - 1], t));
    for i in 0..c - 1 {
        out.push(comm(&x[i], t).concat(&letter_word(&x[i + 1]).inverse()));
    }
    out
}

pub fn build_gc(c: usize) -> Presentation {
    let alphabet = GcAlphabet::standard(c);
    let relators = gc_relators(&alphabet);
    Presentation::new(alphabet.symbols(), relators, Family::Gc(c)).expect("well-formed")
}

/// Alphabet of one vertex group of a chain amalgam: the `x` names are
/// `{prefix}1 … {prefix}{c-1}` followed by the shared central name.
pub fn vertex_alphabet(c: usize, prefix: &str, central: &str, stable: &str, prime: &str) -> GcAlphabet {
    let mut x: Vec<Symbol> = (1..c).map(|i| sym(&format!("{prefix}{i}{prime}"))).collect();
    x.push(sym(&format!("{central}{prime}")));
    GcAlphabet {
        x,
        t: sym(&format!("{stable}{prime}")),
        central_aliases: Vec::new(),
    }
}

/// The three vertex-group alphabets of `Γ(a, b, c)` (the middle one is the
/// `G_b` part of `G_b × ⟨ζ⟩`), and the name of `ζ`.
pub fn gamma_alphabets(a: usize, b: usize, c: usize) -> (GcAlphabet, GcAlphabet, GcAlphabet, Symbol) {
    (
        vertex_alphabet(a, "x", "z", "t_a", ""),
        vertex_alphabet(b, "y", "z", "t_b", ""),
        vertex_alphabet(c, "u", "zeta", "t_c", ""),
        sym("zeta"),
    )
}

/// `Γ(a,b,c) = G_a *_{z} (G_b × ⟨ζ⟩) *_{ζ} G_c`.
///
/// Generators `x1.., z, t_a, y1.., t_b, u1.., zeta, t_c`. Relators are
/// `R_a` (the `G_a` relators with `x_a` named `z`), then `R_b` (the `G_b`
/// relators followed by `[zeta, y_i]`, `[zeta, t_b]`, `[z, zeta]`), then
/// `R_c` (the `G_c` relators with `x_c` named `zeta`). Tags are 0, 1, 2.
pub fn build_gamma(a: usize, b: usize, c: usize) -> Presentation {
    let (ga, gb, gc, zeta) = gamma_alphabets(a, b, c);
    let mut generators = ga.symbols();
    generators.extend(gb.x[..b - 1].iter().cloned());
    generators.push(gb.t.clone());
    generators.extend(gc.symbols());

    let mut relators = Vec::new();
    let mut families = Vec::new();
    let ra = gc_relators(&ga);
    families.extend(std::iter::repeat(0).take(ra.len()));
    relators.extend(ra);

    let mut rb = gc_relators(&gb);
    for y in &gb.x[..b - 1] {
        rb.push(comm(&zeta, y));
    }
    rb.push(comm(&zeta, &gb.t));
    rb.push(comm(gb.central(), &zeta));
    families.extend(std::iter::repeat(1).take(rb.len()));
    relators.extend(rb);

    let rc = gc_relators(&gc);
    families.extend(std::iter::repeat(2).take(rc.len()));
    relators.extend(rc);

    Presentation::with_families(generators, relators, families, Family::Gamma(a, b, c))
        .expect("well-formed")
}

/// Vertex-group alphabets of `J(a, b)`: `G_a`, `G_b`, `G'_b`, `G'_a`.
pub fn j_alphabets(a: usize, b: usize) -> [GcAlphabet; 4] {
    [
        vertex_alphabet(a, "x", "z", "t_a", ""),
        vertex_alphabet(b, "y", "z", "t_b", ""),
        vertex_alphabet(b, "y", "z", "t_b", "'"),
        vertex_alphabet(a, "x", "z", "t_a", "'"),
    ]
}

/// `J(a,b) = G_a *_{z} (G_b × G'_b) *_{z'} G'_a`.
///
/// The commuting block is `[u, u']` for every generator `u` of `G_b`
/// (including `z`) and every generator `u'` of `G'_b` (including `z'`),
/// giving `(b+1)^2` relators; the total relator count is
/// `2·(a(a-1)/2 + a) + 2·(b(b-1)/2 + b) + (b+1)^2`.
/// Tags: `S_a` is 0, `S_b`, `S'_b` and the commuting block are 1, `S'_a` is 2.
pub fn build_j(a: usize, b: usize) -> Presentation {
    let [ga, gb, gb2, ga2] = j_alphabets(a, b);
    let mut generators = ga.symbols();
    generators.extend(gb.x[..b - 1].iter().cloned());
    generators.push(gb.t.clone());
    generators.extend(ga2.symbols());
    generators.extend(gb2.x[..b - 1].iter().cloned());
    generators.push(gb2.t.clone());

    let mut relators = Vec::new();
    let mut families = Vec::new();
    let mut add = |rs: Vec<Word>, tag: usize| {
        families.extend(std::iter::repeat(tag).take(rs.len()));
        relators.extend(rs);
    };
    add(gc_relators(&ga), 0);
    add(gc_relators(&gb), 1);
    add(gc_relators(&gb2), 1);
    let mut block = Vec::new();
    for u in gb.symbols() {
        for u2 in gb2.symbols() {
            block.push(comm(&u, &u2));
        }
    }
    add(block, 1);
    add(gc_relators(&ga2), 2);
    Presentation::with_families(generators, relators, families, Family::J(a, b))
        .expect("well-formed")
}

/// `G_a *_z G_b` over the centres: generators `x1.., z, t_a, y1.., t_b`.
pub fn build_central_amalgam(a: usize, b: usize) -> Presentation {
    let ga = vertex_alphabet(a, "x", "z", "t_a", "");
    let gb = vertex_alphabet(b, "y", "z", "t_b", "");
    let mut generators = ga.symbols();
    generators.extend(gb.x[..b - 1].iter().cloned());
    generators.push(gb.t.clone());
    let ra = gc_relators(&ga);
    let rb = gc_relators(&gb);
    let mut families = vec![0; ra.len()];
    families.extend(std::iter::repeat(1).take(rb.len()));
    let relators = ra.into_iter().chain(rb).collect();
    Presentation::with_families(generators, relators, families, Family::CentralAmalgam(a, b))
        .expect("well-formed")
}

/// `⟨names | [g_i, g_j], i < j⟩`.
pub fn build_free_abelian(names: &[&str]) -> Result<Presentation> {
    let generators: Vec<Symbol> = names.iter().map(|n| sym(n)).collect();
    let mut relators = Vec::new();
    for i in 0..generators.len() {
        for j in i + 1..generators.len() {
            relators.push(comm(&generators[i], &generators[j]));
        }
    }
    Presentation::new(generators, relators, Family::FreeAbelian(names.len()))
}

/// `⟨A, τ | R, [τ, b] for b ∈ B⟩`. Base relators keep their tags; the
/// commuting relators get a new tag.
pub fn build_hnn_commuting(base: &Presentation, subgroup: &[Symbol], stable: &Symbol) -> Result<Presentation> {
    if base.has_generator(stable) {
        return Err(Error::Input(format!("stable letter `{stable}` already a generator")));
    }
    if let Some(b) = subgroup.iter().find(|b| !base.has_generator(b)) {
        return Err(Error::UnknownSymbol(b.to_string()));
    }
    let mut generators = base.generators.clone();
    generators.push(stable.clone());
    let tag = base.family_count();
    let mut relators = base.relators.clone();
    let mut families = base.relator_families.clone();
    for b in subgroup {
        relators.push(comm(stable, b));
        families.push(tag);
    }
    Presentation::with_families(
        generators,
        relators,
        families,
        Family::Hnn {
            base: Box::new(base.clone()),
            subgroup: subgroup.to_vec(),
            stable: stable.clone(),
        },
    )
}

/// Direct product: both relator lists plus `[a, a']` for every pair of
/// generators. The second factor's tags are shifted past the first's;
/// the commuting relators get the last tag.
pub fn build_product(p1: &Presentation, p2: &Presentation) -> Result<Presentation> {
    if let Some(g) = p2.generators.iter().find(|g| p1.has_generator(g)) {
        return Err(Error::Input(format!("generator `{g}` occurs in both factors")));
    }
    let mut generators = p1.generators.clone();
    generators.extend(p2.generators.iter().cloned());
    let shift = p1.family_count();
    let mut relators = p1.relators.clone();
    let mut families = p1.relator_families.clone();
    relators.extend(p2.relators.iter().cloned());
    families.extend(p2.relator_families.iter().map(|f| f + shift));
    let tag = shift + p2.family_count();
    for a in &p1.generators {
        for b in &p2.generators {
            relators.push(comm(a, b));
            families.push(tag);
        }
    }
    Presentation::with_families(
        generators,
        relators,
        families,
        Family::Product(Box::new(p1.clone()), Box::new(p2.clone())),
    )
}

/// Parses the text format:
///
/// ```text
/// [generators]
/// a b
/// [relators]
/// a b a^-1 b^-1
/// ```
///
/// Each relator occupies one line; `#` starts a comment. A section header
/// may be followed by content on the same line.
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    #[derive(PartialEq)]
    enum Section {
        None,
        Generators,
        Relators,
    }
    let mut section = Section::None;
    let mut generators: Vec<Symbol> = Vec::new();
    let mut relators = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        let mut rest = line;
        let mut offset = 0usize;
        loop {
            let next_header = ["[generators]", "[relators]"]
                .iter()
                .filter_map(|h| rest.find(h).map(|p| (p, *h)))
                .min();
            let (chunk, header) = match next_header {
                Some((p, h)) => (&rest[..p], Some(h)),
                None => (rest, None),
            };
            if !chunk.trim().is_empty() {
                let pad = " ".repeat(offset);
                let padded = format!("{pad}{chunk}");
                match section {
                    Section::None => {
                        return Err(Error::Parse {
                            line: line_no,
                            column: offset + chunk.len() - chunk.trim_start().len() + 1,
                            message: "content before any section header".into(),
                        })
                    }
                    Section::Generators => {
                        for l in parse_line(&padded, line_no, None)?.into_letters() {
                            if l.inverse {
                                return Err(Error::Parse {
                                    line: line_no,
                                    column: offset + 1,
                                    message: "generator declared with an exponent".into(),
                                });
                            }
                            generators.push(l.symbol);
                        }
                    }
                    Section::Relators => {
                        relators.push(parse_line(&padded, line_no, Some(&generators))?);
                    }
                }
            }
            match header {
                Some(h) => {
                    section = if h == "[generators]" {
                        Section::Generators
                    } else {
                        Section::Relators
                    };
                    let skip = chunk.len() + h.len();
                    offset += skip;
                    rest = &rest[skip..];
                }
                None => break,
            }
        }
    }
    Presentation::new(generators, relators, Family::Custom)
}

pub fn print_presentation(p: &Presentation) -> String {
    let mut out = String::from("[generators]\n");
    let names: Vec<&str> = p.generators.iter().map(Symbol::as_str).collect();
    out.push_str(&names.join(" "));
    out.push_str("\n[relators]\n");
    for r in &p.relators {
        out.push_str(&r.to_string());
        out.push('\n');
    }
    out
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_presentation(self))
    }
}
