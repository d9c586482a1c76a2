//! The permutations `p₀` and `p_α` on generators of S, orders, degree,
//! flatness, collapsible edges, `G₂` orbits and the graph Γ.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use petgraph::dot::{Config, Dot};
use petgraph::graph::UnGraph;
use petgraph::unionfind::UnionFind;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{Complex, Simplex, Vertex};
use crate::error::{Error, Result};
use crate::moves::{relabel, subdivide};
use crate::quotient::{quotient_complex, QuotientComplex, StellarStructure};
use crate::structure::{build_structure, BuildOptions};

/// A permutation of `0..n` as an index array.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return None;
            }
        }
        Some(Permutation(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn swap(&mut self, i: usize, j: usize) {
        self.0.swap(i, j);
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn is_involution(&self) -> bool {
        self.compose(self).is_identity()
    }

    /// Cycles of length ≥ 1, each starting at its smallest element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut c = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                c.push(i);
                i = self.0[i];
            }
            out.push(c);
        }
        out
    }

    /// Least common multiple of the cycle lengths.
    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| acc.lcm(&(c.len() as u64)))
    }
}

/// Distinct orders in decreasing order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DegreeString(pub Vec<u64>);

impl DegreeString {
    pub fn is_flat(&self) -> bool {
        self.0 == [2]
    }

    pub fn first(&self) -> u64 {
        self.0.first().copied().unwrap_or(1)
    }
}

impl fmt::Display for DegreeString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A class of codimension-1 faces of S identified through the pairing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceClass {
    pub id: usize,
    pub faces: Vec<Simplex>,
}

#[derive(Clone, Debug)]
pub struct PermutationAction {
    generators: Vec<Simplex>,
    index: BTreeMap<Simplex, usize>,
    p0: Permutation,
    classes: Vec<FaceClass>,
    p_alpha: Vec<Permutation>,
    unpaired: Option<Simplex>,
    quotient: QuotientComplex,
    sphere_dim: usize,
}

impl PermutationAction {
    pub fn new(structure: &StellarStructure) -> Result<Self> {
        let quotient = quotient_complex(structure)?;
        let sphere = &structure.sphere;
        let sphere_dim = sphere.dim().ok_or(Error::EmptyComplex)?;
        if sphere_dim == 0 {
            return Err(Error::Dimension { expected: 2, found: 1 });
        }
        let generators: Vec<Simplex> = sphere.generators().iter().cloned().collect();
        let index: BTreeMap<Simplex, usize> = generators.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();

        let mut p0 = Permutation::identity(generators.len());
        for (a, b) in &structure.equivalence.generator_pairs {
            p0.swap(index[a], index[b]);
        }
        let unpaired = structure.unpaired().into_iter().next();

        let k = sphere_dim - 1;
        let mut containing: BTreeMap<Simplex, Vec<usize>> = BTreeMap::new();
        for (i, g) in generators.iter().enumerate() {
            for f in g.facets() {
                containing.entry(f).or_default().push(i);
            }
        }

        let mut classes = Vec::new();
        let mut p_alpha = Vec::new();
        for id in 0..quotient.cells().count(k) {
            let faces = quotient.members(k, id).to_vec();
            let mut p = Permutation::identity(generators.len());
            let mut touched = BTreeSet::new();
            for f in &faces {
                let gens = &containing[f];
                for &g in gens {
                    if !touched.insert(g) {
                        return Err(Error::Internal(format!(
                            "face class {id} meets generator {} in two faces",
                            generators[g]
                        )));
                    }
                }
                if let [x, y] = gens[..] {
                    p.swap(x, y);
                }
            }
            classes.push(FaceClass { id, faces });
            p_alpha.push(p);
        }

        Ok(PermutationAction { generators, index, p0, classes, p_alpha, unpaired, quotient, sphere_dim })
    }

    pub fn generators(&self) -> &[Simplex] {
        &self.generators
    }

    pub fn index_of(&self, g: &Simplex) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn p0(&self) -> &Permutation {
        &self.p0
    }

    pub fn p_alpha(&self, class: usize) -> &Permutation {
        &self.p_alpha[class]
    }

    pub fn face_classes(&self) -> &[FaceClass] {
        &self.classes
    }

    pub fn quotient(&self) -> &QuotientComplex {
        &self.quotient
    }

    fn require_closed(&self) -> Result<()> {
        match &self.unpaired {
            Some(g) => Err(Error::StructureNotClosed(g.clone())),
            None => Ok(()),
        }
    }

    fn require_three_manifold(&self) -> Result<()> {
        if self.sphere_dim != 2 {
            return Err(Error::Dimension { expected: 3, found: self.sphere_dim + 1 });
        }
        Ok(())
    }

    /// Order of `p₀·p_α`.
    pub fn order_of(&self, class: usize) -> Result<u64> {
        self.require_closed()?;
        let order = self.p0.compose(&self.p_alpha[class]).order();
        if order == 1 {
            log::warn!("face class {class} has order 1");
        }
        Ok(order)
    }

    pub fn orders(&self) -> Result<Vec<u64>> {
        (0..self.classes.len()).map(|c| self.order_of(c)).collect()
    }

    pub fn degree(&self) -> Result<DegreeString> {
        let set: BTreeSet<u64> = self.orders()?.into_iter().collect();
        Ok(DegreeString(set.into_iter().rev().collect()))
    }

    pub fn is_flat(&self) -> Result<bool> {
        Ok(self.degree()?.is_flat())
    }

    /// `[deg = (2)] ⟺ [every class has at most two faces]`.
    pub fn flatness_equivalence_check(&self) -> Result<bool> {
        let small = self.classes.iter().all(|c| c.faces.len() <= 2);
        Ok(self.is_flat()? == small)
    }

    /// Classes `α` with `p_α(p₀(F)) = F` for some generator `F`.
    pub fn collapsible_edges(&self) -> Result<Vec<usize>> {
        self.require_closed()?;
        self.require_three_manifold()?;
        Ok((0..self.classes.len())
            .filter(|&c| (0..self.generators.len()).any(|f| self.p_alpha[c].apply(self.p0.apply(f)) == f))
            .collect())
    }

    /// Orbits of `G₂ = ⟨p_α : order 2, not collapsible⟩` on generators,
    /// each paired with its image under `p₀`.
    pub fn internally_flat_complexes(&self) -> Result<Vec<OrbitPair>> {
        let collapsible: BTreeSet<usize> = self.collapsible_edges()?.into_iter().collect();
        let gens: Vec<usize> = (0..self.classes.len())
            .filter(|c| !collapsible.contains(c))
            .filter(|&c| self.order_of(c).map(|o| o == 2).unwrap_or(false))
            .collect();
        let n = self.generators.len();
        let mut uf = UnionFind::<usize>::new(n);
        for &c in &gens {
            for i in 0..n {
                uf.union(i, self.p_alpha[c].apply(i));
            }
        }
        let mut orbits: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            orbits.entry(uf.find(i)).or_default().push(i);
        }
        let orbit_of: BTreeMap<usize, usize> = orbits.iter().flat_map(|(&r, m)| m.iter().map(move |&i| (i, r))).collect();
        let mut out = Vec::new();
        let mut done = BTreeSet::new();
        for (&root, members) in &orbits {
            if done.contains(&root) {
                continue;
            }
            let image: BTreeSet<usize> = members.iter().map(|&i| self.p0.apply(i)).collect();
            let image_root = orbit_of[image.iter().next().expect("nonempty")];
            let exact = orbits[&image_root].iter().copied().collect::<BTreeSet<_>>() == image;
            done.insert(root);
            done.insert(image_root);
            out.push(OrbitPair {
                first: members.iter().map(|&i| self.generators[i].clone()).collect(),
                second: image.iter().map(|&i| self.generators[i].clone()).collect(),
                image_is_orbit: exact,
            });
        }
        Ok(out)
    }

    /// Quotient edges whose class has order > 2, with their endpoint classes.
    pub fn gamma_graph(&self) -> Result<GammaGraph> {
        self.require_closed()?;
        self.require_three_manifold()?;
        let mut edges = Vec::new();
        let mut vertices = BTreeSet::new();
        for c in 0..self.classes.len() {
            let order = self.order_of(c)?;
            if order <= 2 {
                continue;
            }
            let cell = &self.quotient.cells().cells(1)[c];
            let (u, v) = (self.quotient.class_label(cell.vertices[0]), self.quotient.class_label(cell.vertices[1]));
            vertices.insert(u);
            vertices.insert(v);
            edges.push(GammaEdge { ends: (u.min(v), u.max(v)), class: c, order, faces: self.classes[c].faces.clone() });
        }
        Ok(GammaGraph { vertices: vertices.into_iter().collect(), edges })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitPair {
    pub first: Vec<Simplex>,
    pub second: Vec<Simplex>,
    /// `p₀` maps the first orbit exactly onto an orbit.
    pub image_is_orbit: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaEdge {
    /// Endpoint vertex classes, by smallest label.
    pub ends: (Vertex, Vertex),
    pub class: usize,
    pub order: u64,
    pub faces: Vec<Simplex>,
}

/// Graph of the non-flat edges of `S/≃`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<GammaEdge>,
}

impl GammaGraph {
    fn components_and_cycle(&self) -> (usize, bool) {
        let pos: BTreeMap<Vertex, usize> = self.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut uf = UnionFind::<usize>::new(self.vertices.len());
        let mut circuit = false;
        for e in &self.edges {
            if !uf.union(pos[&e.ends.0], pos[&e.ends.1]) {
                circuit = true;
            }
        }
        let comps = (0..self.vertices.len()).filter(|&i| uf.find(i) == i).count();
        (comps, circuit)
    }

    /// More edges than a spanning forest can hold.
    pub fn has_circuit(&self) -> bool {
        self.components_and_cycle().1
    }

    /// Connected, every vertex of degree 2.
    pub fn is_single_cycle(&self) -> bool {
        if self.edges.is_empty() {
            return false;
        }
        let mut degree: BTreeMap<Vertex, usize> = BTreeMap::new();
        for e in &self.edges {
            *degree.entry(e.ends.0).or_default() += 1;
            *degree.entry(e.ends.1).or_default() += 1;
        }
        self.components_and_cycle().0 == 1 && degree.values().all(|&d| d == 2)
    }

    /// Graphviz source.
    pub fn to_dot(&self) -> String {
        let mut g = UnGraph::<String, String>::new_undirected();
        let nodes: BTreeMap<Vertex, _> = self.vertices.iter().map(|&v| (v, g.add_node(format!("[{v}]")))).collect();
        for e in &self.edges {
            g.add_edge(nodes[&e.ends.0], nodes[&e.ends.1], format!("order {}", e.order));
        }
        format!("{}", Dot::with_config(&g, &[Config::GraphContentOnly]))
            .lines()
            .fold(String::from("graph gamma {\n"), |acc, l| acc + l + "\n")
            + "}\n"
    }
}

/// Upper bound for `deg(M)`: the lexicographically smallest degree string
/// over structures built from `rounds` randomly relabelled and subdivided
/// copies of M (round 0 is M itself).
pub fn degree_upper_bound(m: &Complex, rounds: usize, seed: u64, opts: &BuildOptions) -> Result<(DegreeString, StellarStructure)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(DegreeString, StellarStructure)> = None;
    for round in 0..=rounds {
        let candidate = if round == 0 { m.clone() } else { perturb(m, &mut rng)? };
        let (s, _) = build_structure(&candidate, opts)?;
        let deg = PermutationAction::new(&s)?.degree()?;
        if best.as_ref().map_or(true, |(b, _)| deg < *b) {
            best = Some((deg, s));
        }
    }
    Ok(best.expect("at least one round"))
}

fn perturb(m: &Complex, rng: &mut ChaCha8Rng) -> Result<Complex> {
    let verts: Vec<Vertex> = m.vertices().into_iter().collect();
    let mut shuffled = verts.clone();
    shuffled.shuffle(rng);
    let map: BTreeMap<Vertex, Vertex> = verts.into_iter().zip(shuffled).collect();
    let mut k = relabel(m, &map)?;
    let subdivisions = rng.gen_range(0..=2);
    for _ in 0..subdivisions {
        let gens: Vec<&Simplex> = k.generators().iter().collect();
        let g = gens[rng.gen_range(0..gens.len())].clone();
        let size = rng.gen_range(1..=g.len());
        let face = Simplex::from_iter_unsorted(g.vertices().choose_multiple(rng, size).copied());
        let fresh = k.max_label() + 1;
        k = subdivide(&k, &face, fresh)?;
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_basics() {
        let p = Permutation::from_images(vec![1, 2, 0, 4, 3]).unwrap();
        assert_eq!(p.order(), 6);
        assert_eq!(p.cycles(), vec![vec![0, 1, 2], vec![3, 4]]);
        assert!(p.compose(&p.inverse()).is_identity());
        assert!(!p.is_involution());
        assert!(Permutation::from_images(vec![0, 0]).is_none());
    }

    #[test]
    fn degree_string_order() {
        assert!(DegreeString(vec![2]) < DegreeString(vec![6, 2]));
        assert!(DegreeString(vec![2]).is_flat());
        assert_eq!(DegreeString(vec![10, 2]).to_string(), "(10, 2)");
    }

    #[test]
    fn gamma_cycle_detection() {
        let e = |u, v| GammaEdge { ends: (u, v), class: 0, order: 3, faces: vec![] };
        let tree = GammaGraph { vertices: vec![1, 2, 3, 4], edges: vec![e(1, 4), e(2, 4), e(3, 4)] };
        assert!(!tree.has_circuit() && !tree.is_single_cycle());
        let cycle = GammaGraph { vertices: vec![1, 2], edges: vec![e(1, 2), e(1, 2)] };
        assert!(cycle.has_circuit() && cycle.is_single_cycle());
        let empty = GammaGraph { vertices: vec![], edges: vec![] };
        assert!(!empty.has_circuit());
        assert!(tree.to_dot().starts_with("graph gamma {"));
    }

    fn action_of(m: &Complex) -> PermutationAction {
        let (s, _) = build_structure(m, &BuildOptions::default()).unwrap();
        PermutationAction::new(&s).unwrap()
    }

    #[test]
    fn boundary_of_four_simplex() {
        let act = action_of(&crate::complex::standard_sphere(3));
        assert_eq!(act.degree().unwrap(), DegreeString(vec![6, 2]));
        assert!(act.flatness_equivalence_check().unwrap());
        let gamma = act.gamma_graph().unwrap();
        assert!(!gamma.has_circuit());
        assert!(act.p0().is_involution());
        for c in 0..act.face_classes().len() {
            assert!(act.p_alpha(c).is_involution());
        }
    }

    #[test]
    fn open_structure_has_no_degree() {
        let act = action_of(&crate::complex::standard_ball(3));
        assert!(matches!(act.degree(), Err(Error::StructureNotClosed(_))));
    }

    #[test]
    fn upper_bound_is_deterministic() {
        let m = crate::complex::standard_sphere(3);
        let opts = BuildOptions::default();
        let (a, _) = degree_upper_bound(&m, 2, 7, &opts).unwrap();
        let (b, _) = degree_upper_bound(&m, 2, 7, &opts).unwrap();
        assert_eq!(a, b);
        assert!(a <= DegreeString(vec![6, 2]));
    }
}
