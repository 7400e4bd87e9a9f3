//! Monochromatic regions of a diagram and the checks run on them.

use std::collections::{BTreeMap, BTreeSet};

use super::diagram::{grid_fill_commutator, VanKampenDiagram};
use crate::error::{Error, Result};
use crate::presentation::{Family, Presentation, RelatorSet};
use crate::word::{Symbol, Word};

/// Inner faces grouped into maximal edge-connected same-family regions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonochromaticDecomposition {
    /// Region of each inner face, faces numbered as by
    /// [`VanKampenDiagram::faces`].
    pub region_of_face: Vec<usize>,
    /// Family tag of each region.
    pub families: Vec<usize>,
}

impl MonochromaticDecomposition {
    pub fn region_count(&self) -> usize {
        self.families.len()
    }

    pub fn faces_of(&self, region: usize) -> Vec<usize> {
        (0..self.region_of_face.len())
            .filter(|&f| self.region_of_face[f] == region)
            .collect()
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let up = parent[y];
        parent[y] = r;
        y = up;
    }
    r
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}

pub fn monochromatic_regions(d: &VanKampenDiagram, relators: &RelatorSet) -> Result<MonochromaticDecomposition> {
    let faces = d.faces();
    let family: Vec<usize> = faces
        .iter()
        .map(|f| {
            let w = d.read(f);
            relators
                .family_of(&w)
                .ok_or_else(|| Error::InvalidDiagram(format!("face `{w}` has no family")))
        })
        .collect::<Result<_>>()?;
    let face_of = d.face_of();
    let mut parent: Vec<usize> = (0..faces.len()).collect();
    for x in 0..d.dart_count() {
        if let (Some(f), Some(g)) = (face_of[x], face_of[d.twin(x)]) {
            if family[f] == family[g] {
                union(&mut parent, f, g);
            }
        }
    }
    let mut ids: BTreeMap<usize, usize> = BTreeMap::new();
    let mut families = Vec::new();
    let mut region_of_face = Vec::with_capacity(faces.len());
    for f in 0..faces.len() {
        let root = find(&mut parent, f);
        let next_id = ids.len();
        let id = *ids.entry(root).or_insert_with(|| {
            families.push(family[f]);
            next_id
        });
        region_of_face.push(id);
    }
    Ok(MonochromaticDecomposition {
        region_of_face,
        families,
    })
}

/// Region of every dart's face; `None` for the outer face.
fn dart_regions(d: &VanKampenDiagram, dec: &MonochromaticDecomposition) -> Vec<Option<usize>> {
    d.face_of()
        .into_iter()
        .map(|f| f.map(|f| dec.region_of_face[f]))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionVerdict {
    pub region: usize,
    pub family: usize,
    /// Number of boundary circles of the region.
    pub boundary_cycles: usize,
    pub is_disc: bool,
    /// Some edge of the region lies on the diagram's boundary.
    pub meets_boundary: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionReport {
    pub regions: Vec<RegionVerdict>,
    pub violations: Vec<String>,
}

impl RegionReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Every region must be a disc, and regions of the first and last family
/// (of `family_count`) must meet the diagram's boundary in an edge.
pub fn check_region_shapes(dec: &MonochromaticDecomposition, d: &VanKampenDiagram, family_count: usize) -> RegionReport {
    let region = dart_regions(d, dec);
    let (origin, _) = d.origins();
    let mut regions = Vec::new();
    let mut violations = Vec::new();
    for r in 0..dec.region_count() {
        let boundary: Vec<usize> = (0..d.dart_count())
            .filter(|&x| region[x] == Some(r) && region[d.twin(x)] != Some(r))
            .collect();
        let successor = |x: usize| {
            let mut y = d.next(x);
            while region[d.twin(y)] == Some(r) {
                y = d.next(d.twin(y));
            }
            y
        };
        let mut seen = BTreeSet::new();
        let mut cycles = 0;
        let mut simple = true;
        for &start in &boundary {
            if seen.contains(&start) {
                continue;
            }
            cycles += 1;
            let mut vertices = BTreeSet::new();
            let mut x = start;
            loop {
                seen.insert(x);
                if !vertices.insert(origin[x]) {
                    simple = false;
                }
                x = successor(x);
                if x == start {
                    break;
                }
            }
        }
        let is_disc = cycles == 1 && simple;
        let meets_boundary = boundary.iter().any(|&x| region[d.twin(x)].is_none());
        let family = dec.families[r];
        if !is_disc {
            violations.push(format!(
                "region {r} (family {family}) is not a disc: {cycles} boundary cycles{}",
                if simple { "" } else { ", pinched" }
            ));
        }
        let extreme = family == 0 || family + 1 == family_count;
        if extreme && !meets_boundary {
            violations.push(format!("region {r} (family {family}) misses the boundary"));
        }
        regions.push(RegionVerdict {
            region: r,
            family,
            boundary_cycles: cycles,
            is_disc,
            meets_boundary,
        });
    }
    RegionReport { regions, violations }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DualVerdict {
    Arcs,
    /// Two regions share a frontier that is not a single arc.
    NotArcShaped(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualTreeReport {
    pub verdict: DualVerdict,
    pub region_count: usize,
    /// One edge per pair of regions sharing a frontier arc.
    pub edges: Vec<(usize, usize)>,
    pub is_tree: bool,
    /// Regions of the middle family.
    pub middle_count: usize,
    pub boundary_length: usize,
    /// `middle_count ≤ boundary_length`.
    pub bound_holds: bool,
}

/// True iff the edges form one simple path.
fn is_arc(edges: &[(usize, usize)]) -> bool {
    let mut degree: BTreeMap<usize, usize> = BTreeMap::new();
    for &(a, b) in edges {
        *degree.entry(a).or_default() += 1;
        *degree.entry(b).or_default() += 1;
    }
    if degree.values().any(|&k| k > 2) || degree.len() != edges.len() + 1 {
        return false;
    }
    let vertices: Vec<usize> = degree.keys().copied().collect();
    let index = |v: usize| vertices.binary_search(&v).expect("vertex");
    let mut parent: Vec<usize> = (0..vertices.len()).collect();
    for &(a, b) in edges {
        union(&mut parent, index(a), index(b));
    }
    (0..vertices.len()).all(|i| find(&mut parent, i) == find(&mut parent, 0))
}

pub fn dual_arc_tree(d: &VanKampenDiagram, dec: &MonochromaticDecomposition, middle_family: usize) -> DualTreeReport {
    let region = dart_regions(d, dec);
    let (origin, _) = d.origins();
    let mut shared: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    for x in 0..d.dart_count() {
        if let (Some(a), Some(b)) = (region[x], region[d.twin(x)]) {
            if a < b {
                shared
                    .entry((a, b))
                    .or_default()
                    .push((origin[x], origin[d.twin(x)]));
            }
        }
    }
    let mut verdict = DualVerdict::Arcs;
    for (&(a, b), es) in &shared {
        if !is_arc(es) {
            verdict = DualVerdict::NotArcShaped(a, b);
            break;
        }
    }
    let n = dec.region_count();
    let edges: Vec<(usize, usize)> = shared.keys().copied().collect();
    let mut parent: Vec<usize> = (0..n).collect();
    for &(a, b) in &edges {
        union(&mut parent, a, b);
    }
    let connected = (0..n).all(|i| find(&mut parent, i) == find(&mut parent, 0));
    let is_tree = n == 0 || (connected && edges.len() + 1 == n);
    let middle_count = dec.families.iter().filter(|&&f| f == middle_family).count();
    let boundary_length = d.outer_cycle().len();
    DualTreeReport {
        verdict,
        region_count: n,
        edges,
        is_tree,
        middle_count,
        boundary_length,
        bound_holds: middle_count <= boundary_length,
    }
}

fn commutator_of(a: &str, b: &str) -> Word {
    Word::commutator(&Word::letter(crate::word::Letter::pos(a)), &Word::letter(crate::word::Letter::pos(b)))
}

/// A non-minimal diagram whose first-family region is an annulus: the 3×3
/// grid for `H = f b f`, `V = a e a` over
/// `⟨a,b,e,f | [a,b],[a,e],[f,a],[f,e] ; [b,e]⟩`, with the centre cell the
/// only one of the second family.
pub fn annular_example() -> (Presentation, VanKampenDiagram) {
    let generators = ["a", "b", "e", "f"].map(Symbol::new).to_vec();
    let relators = vec![
        commutator_of("a", "b"),
        commutator_of("a", "e"),
        commutator_of("f", "a"),
        commutator_of("f", "e"),
        commutator_of("b", "e"),
    ];
    let p = Presentation::with_families(generators, relators, vec![0, 0, 0, 0, 1], Family::Custom)
        .expect("well-formed");
    let h = Word::parse("f b f").expect("word");
    let v = Word::parse("a e a").expect("word");
    let d = grid_fill_commutator(&h, &v, &p).expect("commutation relators present");
    (p, d)
}

/// Three commutation cells in a row, each of its own family:
/// `⟨p,q,r,s | [p,s] ; [q,s] ; [r,s]⟩` filled along `H = p q r`, `V = s`.
pub fn corridor_chain_example() -> (Presentation, VanKampenDiagram) {
    let generators = ["p", "q", "r", "s"].map(Symbol::new).to_vec();
    let relators = vec![commutator_of("p", "s"), commutator_of("q", "s"), commutator_of("r", "s")];
    let p = Presentation::with_families(generators, relators, vec![0, 1, 2], Family::Custom)
        .expect("well-formed");
    let d = grid_fill_commutator(&Word::parse("p q r").expect("word"), &Word::parse("s").expect("word"), &p)
        .expect("commutation relators present");
    (p, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filling::certificate::FillingCertificate;
    use crate::filling::diagram::{certificate_to_diagram, min_diameter_filling};
    use crate::presentation::{build_free_abelian, build_gamma};

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn single_face_is_one_clean_region() {
        let p = build_free_abelian(&["a", "b"]).unwrap();
        let rels = p.symmetrized();
        let r = w("a^-1 b^-1 a b");
        let d = certificate_to_diagram(&FillingCertificate { target: r.clone(), factors: vec![(Word::new(), r)] }, &rels).unwrap();
        let dec = monochromatic_regions(&d, &rels).unwrap();
        assert_eq!(dec.region_count(), 1);
        assert!(check_region_shapes(&dec, &d, 1).is_clean());
        let tree = dual_arc_tree(&d, &dec, 0);
        assert!(tree.is_tree);
        assert_eq!(tree.region_count, 1);
        assert_eq!(tree.verdict, DualVerdict::Arcs);
    }

    #[test]
    fn shared_edges_join_and_vertices_do_not() {
        let p = build_free_abelian(&["a", "b"]).unwrap();
        let rels = p.symmetrized();
        let grid = grid_fill_commutator(&w("a^2"), &w("b"), &p).unwrap();
        assert_eq!(monochromatic_regions(&grid, &rels).unwrap().region_count(), 1);
        let r = w("a^-1 b^-1 a b");
        let wedge = FillingCertificate {
            target: r.concat(&r),
            factors: vec![(Word::new(), r.clone()), (Word::new(), r)],
        };
        let d = certificate_to_diagram(&wedge, &rels).unwrap();
        assert_eq!(d.area(), 2);
        let dec = monochromatic_regions(&d, &rels).unwrap();
        assert_eq!(dec.region_count(), 2);
        assert!(check_region_shapes(&dec, &d, 1).is_clean());
    }

    #[test]
    fn annulus_is_flagged() {
        let (p, d) = annular_example();
        let rels = p.symmetrized();
        let dec = monochromatic_regions(&d, &rels).unwrap();
        assert_eq!(dec.region_count(), 2);
        let report = check_region_shapes(&dec, &d, 2);
        assert!(!report.is_clean());
        let outer = report.regions.iter().find(|r| r.family == 0).unwrap();
        assert_eq!(outer.boundary_cycles, 2);
        assert!(!outer.is_disc);
    }

    #[test]
    fn corridor_chain_is_a_path() {
        let (p, d) = corridor_chain_example();
        let dec = monochromatic_regions(&d, &p.symmetrized()).unwrap();
        assert_eq!(dec.families, vec![0, 1, 2]);
        assert!(check_region_shapes(&dec, &d, 3).is_clean());
        let tree = dual_arc_tree(&d, &dec, 1);
        assert_eq!(tree.verdict, DualVerdict::Arcs);
        assert!(tree.is_tree);
        assert_eq!(tree.edges, vec![(0, 1), (1, 2)]);
        assert_eq!(tree.middle_count, 1);
        assert!(tree.bound_holds);
    }

    #[test]
    fn minimal_gamma_commutator_diagram_is_clean() {
        let p = build_gamma(2, 1, 3);
        let rels = p.symmetrized();
        let (_, _, d) = min_diameter_filling(&p, &w("z^-1 zeta^-1 z zeta"), 4, 100_000, 4).unwrap().unwrap();
        let dec = monochromatic_regions(&d, &rels).unwrap();
        assert!(check_region_shapes(&dec, &d, 3).is_clean());
    }
}
