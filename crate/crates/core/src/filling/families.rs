//! The null-homotopic word families and their lower bounds.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::group::{GcAlphabet, GcElement};
use crate::metrics::{cayley_ball, AmalgamGroup, GcGroup};
use crate::normal_form::AmalgamSchema;
use crate::presentation::{gamma_alphabets, j_alphabets, Family, Presentation};
use crate::word::{Symbol, Word};

/// `[x_1^k, t^k, …, t^k]` with `c - 1` stable-letter entries (`x_1^k` when
/// `c = 1`). Represents `x_c^(k^c)`; length `(3·2^(c-1) - 2)·k`.
pub fn central_power_word(c: usize, k: i64, alphabet: &GcAlphabet) -> Word {
    let tk = Word::power(&alphabet.t, k);
    let mut w = Word::power(&alphabet.x[0], k);
    for _ in 1..c {
        w = w.inverse().concat(&tk.inverse()).concat(&w).concat(&tk);
    }
    w
}

/// `U V U^-1 V^-1` in `Γ(a,b,c)`, with `U = ζ^(n^c)` spelled in `G_c` and
/// `V = z^(n^a)` spelled in `G_a`.
pub fn build_wn_gamma(a: usize, b: usize, c: usize, n: i64) -> Word {
    let (ga, _, gc, _) = gamma_alphabets(a, b, c);
    let u = central_power_word(c, n, &gc);
    let v = central_power_word(a, n, &ga);
    Word::commutator(&u.inverse(), &v.inverse())
}

/// `V V' V^-1 V'^-1` in `J(a,b)`, with `V = z^(n^a)` and `V' = z'^(n^a)`
/// spelled in the two copies of `G_a`.
pub fn build_wn_j(a: usize, b: usize, n: i64) -> Word {
    let [ga, _, _, ga2] = j_alphabets(a, b);
    let v = central_power_word(a, n, &ga);
    let v2 = central_power_word(a, n, &ga2);
    Word::commutator(&v.inverse(), &v2.inverse())
}

/// Every generator of `p` outside `keep`.
pub fn kill_all_but(p: &Presentation, keep: &[Symbol]) -> BTreeSet<Symbol> {
    p.generators
        .iter()
        .filter(|g| !keep.contains(g))
        .cloned()
        .collect()
}

/// A lower bound that may have been cut off by the ball radius.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bound<V> {
    pub value: V,
    /// The distance was not found within the radius; `value` uses
    /// `radius + 1` in its place.
    pub saturated: bool,
}

fn power_u64(n: u64, e: usize) -> Result<u64> {
    n.checked_pow(e as u32)
        .ok_or_else(|| Error::Input(format!("{n}^{e} overflows")))
}

/// `d_{G_b}(1, z^(n^a))`, or `radius + 1` flagged as saturated.
fn central_distance(a: usize, b: usize, n: u64, radius: u32, node_budget: usize) -> Result<(u32, bool)> {
    let m = power_u64(n, a)?;
    let m = i64::try_from(m).map_err(|_| Error::Input(format!("z^{m} out of range")))?;
    let ball = cayley_ball(&GcGroup::new(b), radius, node_budget)?;
    Ok(match ball.distance(&GcElement::central(b, m)) {
        Some(d) => (d, false),
        None => (radius + 1, true),
    })
}

/// `n^c · d_{G_b}(1, z^(n^a))`, the area lower bound for `W_n` in
/// `Γ(a,b,c)`.
pub fn dehn_lower_bound_value(
    a: usize,
    b: usize,
    c: usize,
    n: u64,
    radius: u32,
    node_budget: usize,
) -> Result<Bound<BigInt>> {
    let (d, saturated) = central_distance(a, b, n, radius, node_budget)?;
    Ok(Bound {
        value: BigInt::from(n).pow(c as u32) * BigInt::from(d),
        saturated,
    })
}

/// `½ · d_{G_b}(1, z^(n^a))`, the diameter lower bound for `W_n` in `J(a,b)`.
pub fn isodiam_lower_bound_value(
    a: usize,
    b: usize,
    n: u64,
    radius: u32,
    node_budget: usize,
) -> Result<Bound<BigRational>> {
    let (d, saturated) = central_distance(a, b, n, radius, node_budget)?;
    Ok(Bound {
        value: BigRational::new(BigInt::from(d), BigInt::from(2)),
        saturated,
    })
}

/// True iff no non-empty subword of `v` represents the identity.
pub fn is_injective(schema: &AmalgamSchema, v: &Word) -> Result<bool> {
    for i in 0..v.len() {
        let mut nf = schema.identity::<BigInt>();
        for l in &v.letters()[i..] {
            schema.mul_letter(&mut nf, l)?;
            if nf.is_identity() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `m · d_B(1, h)` for `v` representing `h ∈ ⟨B⟩` in an HNN extension with
/// stable letter commuting with `B`; a lower bound for
/// `Area(v τ^m v^-1 τ^-m)`.
pub fn corridor_lower_bound(
    p: &Presentation,
    v: &Word,
    m: u64,
    radius: u32,
    node_budget: usize,
) -> Result<Bound<BigInt>> {
    let Family::Hnn {
        base,
        subgroup,
        stable,
    } = &p.family
    else {
        return Err(Error::Input("corridor bounds need an HNN presentation".into()));
    };
    base.check_word(v)?;
    if v.symbols().contains(stable) {
        return Err(Error::Input("v must not contain the stable letter".into()));
    }
    let schema = AmalgamSchema::for_presentation(p)?;
    if !is_injective(&schema, v)? {
        return Err(Error::Input(format!("`{v}` has a null-homotopic subword")));
    }
    let h = schema.evaluate::<i64>(v)?;
    let group = AmalgamGroup::<i64>::new(&schema, subgroup)?;
    let ball = cayley_ball(&group, radius, node_budget)?;
    if let Some(d) = ball.distance(&h) {
        return Ok(Bound {
            value: BigInt::from(m) * BigInt::from(d),
            saturated: false,
        });
    }
    let whole_base = base.generators.iter().all(|g| subgroup.contains(g));
    let member = whole_base || (schema.edges().len() == 1 && schema.is_edge_power::<BigInt>(v, 0)?.is_some());
    if !member {
        return Err(Error::Input(format!("`{v}` does not represent an element of the subgroup")));
    }
    Ok(Bound {
        value: BigInt::from(m) * BigInt::from(radius + 1),
        saturated: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{evaluate_in_alphabet, is_central_power};
    use num_traits::Zero;
    use crate::presentation::{build_free_abelian, build_gamma, build_gc, build_hnn_commuting, build_j};

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn central_power_words_evaluate_and_have_linear_length() {
        for c in 1..=4usize {
            let alphabet = GcAlphabet::standard(c);
            for k in 1..=4i64 {
                let word = central_power_word(c, k, &alphabet);
                let g = evaluate_in_alphabet::<BigInt>(&alphabet, &word).unwrap();
                assert_eq!(is_central_power(&g), Some(BigInt::from(k).pow(c as u32)), "c={c} k={k}");
                assert_eq!(word.len() as i64, (3 * (1 << (c - 1)) - 2) * k);
            }
        }
        let a2 = GcAlphabet::standard(2);
        assert_eq!(central_power_word(2, 1, &a2), w("x1^-1 t^-1 x1 t"));
        assert_eq!(central_power_word(2, 2, &a2).len(), 8);
    }

    #[test]
    fn wn_words_are_null_homotopic() {
        let schema = AmalgamSchema::gamma(2, 1, 3);
        for n in 1..=3 {
            assert!(schema.is_identity(&build_wn_gamma(2, 1, 3, n)).unwrap());
        }
        let j = AmalgamSchema::j(2, 1);
        for n in 1..=3 {
            let word = build_wn_j(2, 1, n);
            build_j(2, 1).check_word(&word).unwrap();
            assert!(j.is_identity(&word).unwrap());
        }
    }

    #[test]
    fn wn_lengths_are_linear() {
        let len = |n| build_wn_gamma(2, 1, 3, n).len() as f64;
        for n in [2, 4, 8] {
            assert!((len(2 * n) / len(n) - 2.0).abs() <= 0.1);
        }
    }

    #[test]
    fn retraction_of_wn_is_trivial_in_gc() {
        let p = build_gamma(2, 1, 3);
        let (_, _, gc, _) = gamma_alphabets(2, 1, 3);
        let kill = kill_all_but(&p, &gc.symbols());
        for n in 1..=3 {
            let image = build_wn_gamma(2, 1, 3, n).delete_letters(&kill);
            assert!(evaluate_in_alphabet::<BigInt>(&gc, &image).unwrap().is_identity());
        }
    }

    #[test]
    fn dehn_lower_bound_examples() {
        for m in 1..=4u64 {
            let b = dehn_lower_bound_value(1, 1, 2, m, 8, 1 << 20).unwrap();
            assert_eq!(b.value, BigInt::from(m.pow(3)));
            assert!(!b.saturated);
        }
        for n in 1..=3u64 {
            let b = dehn_lower_bound_value(2, 1, 3, n, 10, 1 << 20).unwrap();
            assert_eq!(b.value, BigInt::from(n.pow(5)));
        }
        let sat = dehn_lower_bound_value(2, 1, 3, 4, 10, 1 << 20).unwrap();
        assert!(sat.saturated);
        assert_eq!(sat.value, BigInt::from(64 * 11));
        let iso = isodiam_lower_bound_value(2, 1, 3, 12, 1 << 20).unwrap();
        assert_eq!(iso.value, BigRational::new(9.into(), 2.into()));
    }

    #[test]
    fn corridor_bounds_on_z2_hnn() {
        let base = build_free_abelian(&["a", "b"]).unwrap();
        let p = build_hnn_commuting(&base, &["a".into()], &"tau".into()).unwrap();
        let b = |v: &str, m| corridor_lower_bound(&p, &w(v), m, 6, 1 << 16).unwrap();
        assert_eq!(b("a", 3).value, BigInt::from(3));
        assert_eq!(b("a^2", 2).value, BigInt::from(4));
        assert_eq!(b("a", 0).value, BigInt::zero());
        assert!(corridor_lower_bound(&p, &w("b"), 1, 6, 1 << 16).is_err());
        assert!(corridor_lower_bound(&p, &w("a b a^-1 b^-1"), 1, 6, 1 << 16).is_err());
        let sat = b("a^9", 1);
        assert!(sat.saturated);
        assert!(corridor_lower_bound(&build_gc(2), &w("x1"), 1, 4, 100).is_err());
    }
}
