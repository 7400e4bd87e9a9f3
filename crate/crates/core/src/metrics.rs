//! Word metrics by breadth-first search in Cayley graphs, length and
//! distortion curves, and log-log exponent fits.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use indexmap::IndexMap;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, ToPrimitive};

use crate::error::{Error, Result};
use crate::group::{is_central_power, GcAlphabet, GcElement, GcGen};
use crate::normal_form::{AmalgamSchema, NormalForm};
use crate::scalar::Coord;
use crate::word::{Letter, Symbol, Word};

/// A group with a finite generating set, as seen by the search.
pub trait CayleyGroup {
    type Element: Clone + Eq + Hash;

    fn identity(&self) -> Self::Element;

    /// Signed generators in search order.
    fn generators(&self) -> &[Letter];

    /// `g · generators()[i]`.
    fn step(&self, g: &Self::Element, i: usize) -> Self::Element;

    /// Injective byte encoding.
    fn key(&self, g: &Self::Element) -> Vec<u8>;
}

fn signed(symbols: &[Symbol]) -> Vec<Letter> {
    symbols
        .iter()
        .flat_map(|s| [Letter::new(s.clone(), false), Letter::new(s.clone(), true)])
        .collect()
}

/// `G_c` with generators `x1, x1^-1, …, xc, xc^-1, t, t^-1`.
pub struct GcGroup {
    alphabet: GcAlphabet,
    gens: Vec<Letter>,
}

impl GcGroup {
    pub fn new(c: usize) -> Self {
        Self::with_alphabet(GcAlphabet::standard(c))
    }

    pub fn with_alphabet(alphabet: GcAlphabet) -> Self {
        let gens = signed(&alphabet.symbols());
        GcGroup { alphabet, gens }
    }

    pub fn rank(&self) -> usize {
        self.alphabet.rank()
    }
}

impl CayleyGroup for GcGroup {
    type Element = GcElement<i64>;

    fn identity(&self) -> Self::Element {
        GcElement::identity(self.rank())
    }

    fn generators(&self) -> &[Letter] {
        &self.gens
    }

    fn step(&self, g: &Self::Element, i: usize) -> Self::Element {
        let l = &self.gens[i];
        let gen = self.alphabet.lookup(&l.symbol).expect("own generator");
        let mut h = g.clone();
        h.mul_gen(gen, l.inverse);
        h
    }

    fn key(&self, g: &Self::Element) -> Vec<u8> {
        let mut out = Vec::new();
        g.encode(&mut out);
        out
    }
}

/// The subgroup of `G_c` generated by some of its generators.
pub struct GcSubgroup {
    rank: usize,
    gens: Vec<(GcGen, bool)>,
    letters: Vec<Letter>,
}

impl GcSubgroup {
    pub fn new(c: usize, generators: &[GcGen]) -> Self {
        let alphabet = GcAlphabet::standard(c);
        let mut gens = Vec::new();
        let mut letters = Vec::new();
        for &g in generators {
            let name = match g {
                GcGen::X(i) => alphabet.x[i].clone(),
                GcGen::T => alphabet.t.clone(),
            };
            for inverse in [false, true] {
                gens.push((g, inverse));
                letters.push(Letter::new(name.clone(), inverse));
            }
        }
        GcSubgroup { rank: c, gens, letters }
    }

    /// `⟨x_c⟩`.
    pub fn centre(c: usize) -> Self {
        Self::new(c, &[GcGen::X(c - 1)])
    }
}

impl CayleyGroup for GcSubgroup {
    type Element = GcElement<i64>;

    fn identity(&self) -> Self::Element {
        GcElement::identity(self.rank)
    }

    fn generators(&self) -> &[Letter] {
        &self.letters
    }

    fn step(&self, g: &Self::Element, i: usize) -> Self::Element {
        let (gen, inverse) = self.gens[i];
        let mut h = g.clone();
        h.mul_gen(gen, inverse);
        h
    }

    fn key(&self, g: &Self::Element) -> Vec<u8> {
        let mut out = Vec::new();
        g.encode(&mut out);
        out
    }
}

/// A chain amalgam, or the subgroup generated by some of its symbols.
pub struct AmalgamGroup<'a, T> {
    schema: &'a AmalgamSchema,
    gens: Vec<Letter>,
    _coord: std::marker::PhantomData<T>,
}

impl<'a, T: Coord> AmalgamGroup<'a, T> {
    pub fn new(schema: &'a AmalgamSchema, symbols: &[Symbol]) -> Result<Self> {
        if let Some(s) = symbols.iter().find(|s| schema.homes(s).is_none()) {
            return Err(Error::UnknownSymbol(s.to_string()));
        }
        Ok(AmalgamGroup {
            schema,
            gens: signed(symbols),
            _coord: std::marker::PhantomData,
        })
    }
}

impl<T: Coord> CayleyGroup for AmalgamGroup<'_, T> {
    type Element = NormalForm<T>;

    fn identity(&self) -> Self::Element {
        self.schema.identity()
    }

    fn generators(&self) -> &[Letter] {
        &self.gens
    }

    fn step(&self, g: &Self::Element, i: usize) -> Self::Element {
        let mut h = g.clone();
        self.schema
            .mul_letter(&mut h, &self.gens[i])
            .expect("generators checked at construction");
        h
    }

    fn key(&self, g: &Self::Element) -> Vec<u8> {
        g.canonical_key()
    }
}

#[derive(Clone, Copy, Debug)]
struct Visit {
    dist: u32,
    parent: u32,
    gen: u32,
}

/// All elements within `radius` of the identity, with exact distances and
/// a geodesic witness for each.
pub struct Ball<E> {
    radius: u32,
    nodes: IndexMap<E, Visit>,
    generators: Vec<Letter>,
}

impl<E: Clone + Eq + Hash> Ball<E> {
    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn distance(&self, g: &E) -> Option<u32> {
        self.nodes.get(g).map(|v| v.dist)
    }

    /// Elements with their distances, in discovery order.
    pub fn iter(&self) -> impl Iterator<Item = (&E, u32)> {
        self.nodes.iter().map(|(e, v)| (e, v.dist))
    }

    /// Geodesic word from the identity to `g`.
    pub fn witness(&self, g: &E) -> Option<Word> {
        let (mut idx, _, _) = self.nodes.get_full(g)?;
        let mut letters = Vec::new();
        while idx != 0 {
            let v = self.nodes[idx];
            letters.push(self.generators[v.gen as usize].clone());
            idx = v.parent as usize;
        }
        letters.reverse();
        Some(Word::from_letters(letters))
    }

    /// Number of elements at each distance `0..=radius`.
    pub fn sphere_sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.radius as usize + 1];
        for v in self.nodes.values() {
            out[v.dist as usize] += 1;
        }
        out
    }

    /// Number of elements within each radius `0..=radius`.
    pub fn ball_sizes(&self) -> Vec<usize> {
        self.sphere_sizes()
            .iter()
            .scan(0, |acc, s| {
                *acc += s;
                Some(*acc)
            })
            .collect()
    }
}

/// Breadth-first search to `radius`, expanding generators in their listed
/// order. Fails once more than `node_budget` elements have been found,
/// reporting the last radius that was fully explored.
pub fn cayley_ball<G: CayleyGroup>(group: &G, radius: u32, node_budget: usize) -> Result<Ball<G::Element>> {
    let mut nodes = IndexMap::new();
    nodes.insert(
        group.identity(),
        Visit {
            dist: 0,
            parent: 0,
            gen: 0,
        },
    );
    let mut layer_start = 0;
    for d in 0..radius {
        let layer_end = nodes.len();
        for idx in layer_start..layer_end {
            for i in 0..group.generators().len() {
                let next = group.step(nodes.get_index(idx).expect("index in range").0, i);
                if !nodes.contains_key(&next) {
                    if nodes.len() >= node_budget {
                        return Err(Error::BallBudget { completed: d });
                    }
                    nodes.insert(
                        next,
                        Visit {
                            dist: d + 1,
                            parent: idx as u32,
                            gen: i as u32,
                        },
                    );
                }
            }
        }
        layer_start = layer_end;
    }
    Ok(Ball {
        radius,
        nodes,
        generators: group.generators().to_vec(),
    })
}

/// One point of a sampled metric function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample {
    pub n: u64,
    pub value: BigRational,
    /// The value is only a lower bound.
    pub saturated: bool,
}

/// Samples with strictly increasing `n`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Curve {
    pub samples: Vec<Sample>,
}

impl Curve {
    /// `(n, value)` pairs, skipping saturated samples unless asked.
    pub fn points<F: Float>(&self, include_saturated: bool) -> Vec<(u64, F)> {
        self.samples
            .iter()
            .filter(|s| include_saturated || !s.saturated)
            .map(|s| (s.n, F::from(s.value.to_f64().unwrap_or(f64::NAN)).unwrap_or(F::nan())))
            .collect()
    }

    pub fn value_at(&self, n: u64) -> Option<&BigRational> {
        self.samples.iter().find(|s| s.n == n).map(|s| &s.value)
    }

    /// `n,value,saturated` rows; values are printed with six decimals.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,value,saturated\n");
        for s in &self.samples {
            let v = s.value.to_f64().unwrap_or(f64::NAN);
            out.push_str(&format!("{},{:.6},{}\n", s.n, v, s.saturated));
        }
        out
    }
}

fn int_ratio(x: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// `(n, d(1, z_c^n))` for every `n > 0` whose central power lies in the
/// radius-`radius` ball of `G_c`.
pub fn central_length_curve(c: usize, radius: u32, node_budget: usize) -> Result<Curve> {
    let ball = cayley_ball(&GcGroup::new(c), radius, node_budget)?;
    Ok(central_lengths(&ball))
}

/// Central powers found in a ball of `G_c`.
pub fn central_lengths(ball: &Ball<GcElement<i64>>) -> Curve {
    let mut found: Vec<(u64, u32)> = ball
        .iter()
        .filter_map(|(g, d)| match is_central_power(g) {
            Some(n) if n > 0 => Some((n as u64, d)),
            _ => None,
        })
        .collect();
    found.sort_unstable();
    Curve {
        samples: found
            .into_iter()
            .map(|(n, d)| Sample {
                n,
                value: int_ratio(d as u64),
                saturated: false,
            })
            .collect(),
    }
}

/// Running maximum of per-level values turned into `δ̂(n) = max / n`.
fn distortion_from_levels(levels: &[(u64, bool)]) -> Curve {
    let mut best = 0u64;
    let mut saturated = false;
    let mut samples = Vec::new();
    for (n, &(v, sat)) in levels.iter().enumerate().skip(1) {
        best = best.max(v);
        saturated |= sat;
        samples.push(Sample {
            n: n as u64,
            value: BigRational::new(BigInt::from(best), BigInt::from(n)),
            saturated,
        });
    }
    Curve { samples }
}

/// `δ̂(n) = max{d_H(1,h) : h ∈ H, d_G(1,h) ≤ n} / n` for `1 ≤ n ≤ r_g`.
///
/// `member` decides membership of a `G`-element in `H`; `h` generates `H`
/// and shares `G`'s element type. A subgroup element of the `G`-ball that is
/// missing from the radius-`r_h` ball of `H` counts as `r_h + 1` and marks
/// the sample (and every later one) as saturated.
pub fn distortion_curve<G, H>(
    g: &G,
    h: &H,
    member: impl Fn(&G::Element) -> bool,
    r_g: u32,
    r_h: u32,
    node_budget: usize,
) -> Result<Curve>
where
    G: CayleyGroup,
    H: CayleyGroup<Element = G::Element>,
{
    let ball_g = cayley_ball(g, r_g, node_budget)?;
    let ball_h = cayley_ball(h, r_h, node_budget)?;
    let mut levels = vec![(0u64, false); r_g as usize + 1];
    for (e, d) in ball_g.iter() {
        if !member(e) {
            continue;
        }
        let (v, sat) = match ball_h.distance(e) {
            Some(dh) => (dh as u64, false),
            None => (r_h as u64 + 1, true),
        };
        let slot = &mut levels[d as usize];
        slot.0 = slot.0.max(v);
        slot.1 |= sat;
    }
    Ok(distortion_from_levels(&levels))
}

/// Distortion of the centre `⟨z⟩` in `G_c`.
pub fn centre_distortion(c: usize, r_g: u32, r_h: u32, node_budget: usize) -> Result<Curve> {
    distortion_curve(
        &GcGroup::new(c),
        &GcSubgroup::centre(c),
        |g| is_central_power(g).is_some(),
        r_g,
        r_h,
        node_budget,
    )
}

/// Distortion of `G_b` in `G_a *_z G_b` (amalgamated over the centres),
/// computed from balls of the two factors.
///
/// Every word for an element `h ∈ G_b` splits into `G_a`-syllables whose
/// product is a central power `z^p` and `G_b`-letters whose product is
/// `h z^{-p}`, so `d(1, h) = min_p d_{G_a}(1, z^p) + d_{G_b}(1, h z^{-p})`.
/// Both factor balls have radius `r_g`, which makes every ambient distance
/// up to `r_g` exact; intrinsic distances come from a `G_b` ball of radius
/// `r_h` and saturate beyond it.
pub fn central_amalgam_distortion(a: usize, b: usize, r_g: u32, r_h: u32, node_budget: usize) -> Result<Curve> {
    let ball_a = cayley_ball(&GcGroup::new(a), r_g, node_budget)?;
    let group_b = GcGroup::new(b);
    let ball_b = cayley_ball(&group_b, r_g.max(r_h), node_budget)?;
    let central: Vec<(i64, u32)> = ball_a
        .iter()
        .filter_map(|(g, d)| is_central_power(g).map(|p| (p, d)))
        .collect();
    let mut levels = vec![(0u64, false); r_g as usize + 1];
    for &(p, da) in &central {
        // ball iteration is in order of distance
        for (h, db) in ball_b.iter() {
            let level = da + db;
            if level > r_g {
                break;
            }
            let mut shifted = h.clone();
            shifted.add_central(&p);
            let (v, sat) = match ball_b.distance(&shifted) {
                Some(d) if d <= r_h => (d as u64, false),
                _ => (r_h as u64 + 1, true),
            };
            let slot = &mut levels[level as usize];
            slot.0 = slot.0.max(v);
            slot.1 |= sat;
        }
    }
    Ok(distortion_from_levels(&levels))
}

/// Least-squares line through `(log n, log value)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FitResult<F> {
    pub exponent: F,
    pub intercept: F,
    pub r_squared: F,
    pub n_min: u64,
    pub n_max: u64,
    /// `min value / n^exponent` over the fitted points.
    pub k_hat: F,
    /// `max value / n^exponent` over the fitted points.
    pub big_k_hat: F,
}

impl<F: Float + fmt::Display> FitResult<F> {
    pub const CSV_HEADER: &'static str = "exponent,intercept,r2,n_min,n_max,k_hat,K_hat";

    pub fn to_csv_row(&self) -> String {
        format!(
            "{:.6},{:.6},{:.6},{},{},{:.6},{:.6}",
            self.exponent, self.intercept, self.r_squared, self.n_min, self.n_max, self.k_hat, self.big_k_hat
        )
    }
}

/// Default lower end of a fit window.
pub const DEFAULT_N_MIN: u64 = 3;

pub fn fit_exponent<F: Float>(points: &[(u64, F)], n_min: u64) -> Result<FitResult<F>> {
    let used: Vec<(u64, F, F)> = points
        .iter()
        .filter(|(n, v)| *n >= n_min && *v > F::zero() && v.is_finite())
        .map(|&(n, v)| (n, F::from(n).expect("n fits").ln(), v.ln()))
        .collect();
    if used.len() < 3 {
        return Err(Error::Input(format!(
            "need at least 3 positive samples with n >= {n_min}, found {}",
            used.len()
        )));
    }
    let count = F::from(used.len()).expect("count fits");
    let mean_x = used.iter().fold(F::zero(), |acc, p| acc + p.1) / count;
    let mean_y = used.iter().fold(F::zero(), |acc, p| acc + p.2) / count;
    let sxx = used.iter().fold(F::zero(), |acc, p| acc + (p.1 - mean_x).powi(2));
    let sxy = used
        .iter()
        .fold(F::zero(), |acc, p| acc + (p.1 - mean_x) * (p.2 - mean_y));
    let syy = used.iter().fold(F::zero(), |acc, p| acc + (p.2 - mean_y).powi(2));
    if sxx.is_zero() {
        return Err(Error::Input("all samples share one n".into()));
    }
    let exponent = sxy / sxx;
    let intercept = mean_y - exponent * mean_x;
    let ss_res = used.iter().fold(F::zero(), |acc, p| {
        acc + (p.2 - (intercept + exponent * p.1)).powi(2)
    });
    let r_squared = if syy.is_zero() {
        F::one()
    } else {
        (F::one() - ss_res / syy).max(F::zero()).min(F::one())
    };
    let ratios = used.iter().map(|p| (p.2 - exponent * p.1).exp());
    let k_hat = ratios.clone().fold(F::infinity(), F::min);
    let big_k_hat = ratios.fold(F::neg_infinity(), F::max);
    Ok(FitResult {
        exponent,
        intercept,
        r_squared,
        n_min: used.first().expect("non-empty").0,
        n_max: used.last().expect("non-empty").0,
        k_hat,
        big_k_hat,
    })
}

/// Distances of every key in a ball, for order-independence checks.
pub fn distance_table<E: Clone + Eq + Hash, G: CayleyGroup<Element = E>>(group: &G, ball: &Ball<E>) -> HashMap<Vec<u8>, u32> {
    ball.iter().map(|(e, d)| (group.key(e), d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{evaluate_word_gc, gc_multiply};
    use crate::presentation::{build_central_amalgam, build_free_abelian};
    use num_traits::One;

    fn z2() -> (crate::presentation::Presentation, AmalgamSchema) {
        let p = build_free_abelian(&["a", "b"]).unwrap();
        let s = AmalgamSchema::for_presentation(&p).unwrap();
        (p, s)
    }

    #[test]
    fn small_balls() {
        let (p, s) = z2();
        let g = AmalgamGroup::<i64>::new(&s, &p.generators).unwrap();
        let ball = cayley_ball(&g, 1, 1000).unwrap();
        assert_eq!(ball.len(), 5);
        assert_eq!(cayley_ball(&g, 0, 1000).unwrap().len(), 1);
        let ball = cayley_ball(&g, 4, 1000).unwrap();
        assert_eq!(ball.ball_sizes(), vec![1, 5, 13, 25, 41]);
        let g2 = GcGroup::new(2);
        assert_eq!(cayley_ball(&g2, 1, 1000).unwrap().len(), 7);
        assert_eq!(cayley_ball(&g2, 0, 1000).unwrap().len(), 1);
    }

    #[test]
    fn budget_exhaustion_reports_completed_radius() {
        let g2 = GcGroup::new(2);
        let sizes = cayley_ball(&g2, 3, 100_000).unwrap().ball_sizes();
        let budget = sizes[2] + 1;
        assert_eq!(cayley_ball(&g2, 3, budget).err(), Some(Error::BallBudget { completed: 2 }));
    }

    /// Distances by brute force over all words of each length.
    fn brute_force_distances(c: usize, radius: usize) -> HashMap<GcElement<i64>, u32> {
        let gens = GcGroup::new(c).generators().to_vec();
        let mut best = HashMap::new();
        let mut frontier = vec![Word::new()];
        for len in 0..=radius {
            for word in &frontier {
                let g: GcElement<i64> = evaluate_word_gc(c, word).unwrap();
                best.entry(g).or_insert(len as u32);
            }
            if len == radius {
                break;
            }
            frontier = frontier
                .iter()
                .flat_map(|w| gens.iter().map(move |l| w.concat(&Word::letter(l.clone()))))
                .filter(|w| w.is_freely_reduced())
                .collect();
        }
        best
    }

    #[test]
    fn bfs_matches_word_enumeration() {
        for (c, r) in [(1, 5), (2, 5), (3, 4)] {
            let ball = cayley_ball(&GcGroup::new(c), r as u32, 1_000_000).unwrap();
            let brute = brute_force_distances(c, r);
            assert_eq!(ball.len(), brute.len());
            for (g, d) in ball.iter() {
                assert_eq!(brute[g], d);
            }
        }
    }

    #[test]
    fn metric_axioms_and_witnesses() {
        let group = GcGroup::new(2);
        let ball = cayley_ball(&group, 6, 1_000_000).unwrap();
        for (g, d) in ball.iter() {
            assert_eq!(d == 0, g.is_identity());
            let w = ball.witness(g).unwrap();
            assert_eq!(w.len() as u32, d);
            assert_eq!(&evaluate_word_gc::<i64>(2, &w).unwrap(), g);
            for i in 0..group.generators().len() {
                if let Some(d2) = ball.distance(&group.step(g, i)) {
                    assert!(d.abs_diff(d2) <= 1);
                }
            }
        }
    }

    #[test]
    fn ball_independent_of_generator_order() {
        let group = GcGroup::new(3);
        let mut reversed = GcAlphabet::standard(3);
        reversed.x.reverse();
        let ball = cayley_ball(&group, 4, 1_000_000).unwrap();
        // a group whose generator list is permuted: wrap with a custom order
        struct Permuted(GcGroup, Vec<usize>, Vec<Letter>);
        impl CayleyGroup for Permuted {
            type Element = GcElement<i64>;
            fn identity(&self) -> Self::Element {
                self.0.identity()
            }
            fn generators(&self) -> &[Letter] {
                &self.2
            }
            fn step(&self, g: &Self::Element, i: usize) -> Self::Element {
                self.0.step(g, self.1[i])
            }
            fn key(&self, g: &Self::Element) -> Vec<u8> {
                self.0.key(g)
            }
        }
        let order = vec![7, 3, 5, 0, 6, 2, 4, 1];
        let letters = order.iter().map(|&i| group.generators()[i].clone()).collect();
        let permuted = Permuted(GcGroup::new(3), order, letters);
        let other = cayley_ball(&permuted, 4, 1_000_000).unwrap();
        assert_eq!(distance_table(&group, &ball), distance_table(&permuted, &other));
        let smaller = cayley_ball(&group, 3, 1_000_000).unwrap();
        assert!(smaller.iter().all(|(g, d)| ball.distance(g) == Some(d)));
        assert_eq!(reversed.rank(), 3);
    }

    #[test]
    fn central_lengths() {
        let c1 = central_length_curve(1, 6, 100_000).unwrap();
        for s in &c1.samples {
            assert_eq!(s.value, int_ratio(s.n));
        }
        for c in 2..=3 {
            let curve = central_length_curve(c, 5, 1_000_000).unwrap();
            assert_eq!(curve.value_at(1), Some(&BigRational::one()));
        }
        // the nested commutator [x1^k, t^k] has length 4k and spells z^{k^2},
        // but for small n the generator z itself is shorter
        let curve = central_length_curve(2, 8, 1_000_000).unwrap();
        for n in 1..=8 {
            assert_eq!(curve.value_at(n), Some(&int_ratio(n)));
        }
        let z4 = gc_multiply(&GcElement::<i64>::central(2, 4), &GcElement::identity(2)).unwrap();
        assert!(is_central_power(&z4) == Some(4));
    }

    #[test]
    fn full_subgroup_has_no_distortion() {
        let (p, s) = z2();
        let g = AmalgamGroup::<i64>::new(&s, &p.generators).unwrap();
        let curve = distortion_curve(&g, &g, |_| true, 6, 6, 100_000).unwrap();
        assert!(curve.samples.iter().all(|x| x.value.is_one() && !x.saturated));
        let zp = build_free_abelian(&["a"]).unwrap();
        let zs = AmalgamSchema::for_presentation(&zp).unwrap();
        let zg = AmalgamGroup::<i64>::new(&zs, &zp.generators).unwrap();
        let curve = distortion_curve(&zg, &zg, |_| true, 10, 10, 1000).unwrap();
        assert!(curve.samples.iter().all(|x| x.value.is_one()));
    }

    #[test]
    fn centre_distortion_saturates_when_intrinsic_ball_is_small() {
        let s = AmalgamSchema::gc(2);
        let all: Vec<Symbol> = ["x1", "x2", "t"].iter().map(|n| Symbol::new(n)).collect();
        let g = AmalgamGroup::<i64>::new(&s, &all).unwrap();
        let h = AmalgamGroup::<i64>::new(&s, &[Symbol::new("x2")]).unwrap();
        let member = |nf: &NormalForm<i64>| s.as_factor_element(nf, 0).is_some_and(|e| e.power_of_part_centre(0).is_some());
        let exact = distortion_curve(&g, &h, member, 8, 64, 1_000_000).unwrap();
        assert!(exact.samples.iter().all(|x| !x.saturated));
        assert!(exact.samples.iter().all(|x| x.value.is_one()));
        let capped = distortion_curve(&g, &h, member, 8, 4, 1_000_000).unwrap();
        assert!(capped.samples.last().unwrap().saturated);
        assert!(!capped.samples[0].saturated);
    }

    #[test]
    fn amalgam_formula_matches_direct_search() {
        for (a, b, r) in [(2, 1, 7), (1, 1, 6), (2, 2, 5)] {
            let p = build_central_amalgam(a, b);
            let s = AmalgamSchema::for_presentation(&p).unwrap();
            let g = AmalgamGroup::<i64>::new(&s, &p.generators).unwrap();
            let hgens: Vec<Symbol> = p.generators.iter().filter(|x| s.homes(x).unwrap().iter().any(|h| h.factor == 1)).cloned().collect();
            let h = AmalgamGroup::<i64>::new(&s, &hgens).unwrap();
            let member = |nf: &NormalForm<i64>| s.as_factor_element(nf, 1).is_some();
            let direct = distortion_curve(&g, &h, member, r, 4 * r, 5_000_000).unwrap();
            let formula = central_amalgam_distortion(a, b, r, 4 * r, 5_000_000).unwrap();
            assert_eq!(direct, formula, "a={a} b={b}");
        }
    }

    #[test]
    fn fits() {
        let sq: Vec<(u64, f64)> = (1..=10).map(|n| (n, (n * n) as f64)).collect();
        let fit = fit_exponent(&sq, 1).unwrap();
        assert!((fit.exponent - 2.0).abs() < 1e-9);
        assert!((fit.r_squared - 1.0).abs() < 1e-9);
        let flat: Vec<(u64, f32)> = (1..=10).map(|n| (n, 3.0)).collect();
        let fit = fit_exponent(&flat, DEFAULT_N_MIN).unwrap();
        assert!(fit.exponent.abs() < 1e-6);
        assert_eq!((fit.n_min, fit.n_max), (3, 10));
        assert!((fit.k_hat - 3.0).abs() < 1e-4 && (fit.big_k_hat - 3.0).abs() < 1e-4);
        assert!(fit_exponent(&sq[..4], 3).is_err());
        assert_eq!(FitResult::<f64>::CSV_HEADER, "exponent,intercept,r2,n_min,n_max,k_hat,K_hat");
    }

    #[test]
    fn csv_layout() {
        let curve = Curve {
            samples: vec![
                Sample { n: 1, value: int_ratio(1), saturated: false },
                Sample { n: 2, value: BigRational::new(BigInt::from(5), BigInt::from(2)), saturated: true },
            ],
        };
        assert_eq!(curve.to_csv(), "n,value,saturated\n1,1.000000,false\n2,2.500000,true\n");
        assert_eq!(curve.points::<f64>(false), vec![(1, 1.0)]);
    }
}
