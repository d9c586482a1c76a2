//! Z₂ complexes of generator simplexes and the primitive calculus on them.

mod simplex;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Add;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use simplex::{Simplex, Vertex};

/// A finite Z₂ sum of generator simplexes.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Complex {
    #[serde(deserialize_with = "deserialize_generators")]
    generators: BTreeSet<Simplex>,
}

fn deserialize_generators<'de, D>(d: D) -> std::result::Result<BTreeSet<Simplex>, D::Error>
where
    D: serde::Deserializer<'de>,
{
    let list = Vec::<Simplex>::deserialize(d)?;
    let mut set = BTreeSet::new();
    for s in list {
        if !set.remove(&s) {
            set.insert(s);
        }
    }
    Ok(set)
}

/// Entry `i` counts the distinct `i`-simplexes occurring as faces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FVector(pub Vec<usize>);

impl FVector {
    pub fn euler_characteristic(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &c)| if i % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }
}

impl Complex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Mod-2 sum of the given simplexes (pairs cancel).
    pub fn from_generators(gens: impl IntoIterator<Item = Simplex>) -> Self {
        let mut k = Complex::new();
        for g in gens {
            k.toggle(g);
        }
        k
    }

    pub fn simplex(s: Simplex) -> Self {
        Self::from_generators([s])
    }

    /// Adds `s` mod 2: inserts it, or removes it when already present.
    pub fn toggle(&mut self, s: Simplex) {
        if !self.generators.remove(&s) {
            self.generators.insert(s);
        }
    }

    pub fn generators(&self) -> &BTreeSet<Simplex> {
        &self.generators
    }

    pub fn into_generators(self) -> BTreeSet<Simplex> {
        self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn contains_generator(&self, s: &Simplex) -> bool {
        self.generators.contains(s)
    }

    pub fn vertices(&self) -> BTreeSet<Vertex> {
        self.generators.iter().flat_map(|g| g.vertices().iter().copied()).collect()
    }

    pub fn max_label(&self) -> Vertex {
        self.generators.iter().filter_map(|g| g.vertices().last().copied()).max().unwrap_or(0)
    }

    /// Largest generator dimension; `None` when empty or only `{∅}`.
    pub fn dim(&self) -> Option<usize> {
        self.generators.iter().filter_map(Simplex::dim).max()
    }

    pub fn is_uniform(&self) -> bool {
        let mut lens = self.generators.iter().map(Simplex::len);
        match lens.next() {
            None => true,
            Some(l) => lens.all(|x| x == l),
        }
    }

    /// True if `face` is contained in some generator.
    pub fn has_face(&self, face: &Simplex) -> bool {
        self.generators.iter().any(|g| g.has_face(face))
    }

    /// Mod-2 sum of all codimension-1 faces of all generators.
    pub fn boundary(&self) -> Result<Complex> {
        let mut out = Complex::new();
        for g in &self.generators {
            if g.len() <= 1 {
                return Err(Error::BoundaryOfVertex);
            }
            for f in g.facets() {
                out.toggle(f);
            }
        }
        Ok(out)
    }

    /// Closed means the boundary vanishes; complexes of vertices count as closed.
    pub fn is_closed(&self) -> bool {
        self.boundary().map(|b| b.is_empty()).unwrap_or(true)
    }

    pub fn join(&self, other: &Complex) -> Result<Complex> {
        if !self.vertices().is_disjoint(&other.vertices()) {
            return Err(Error::JoinNotDisjoint);
        }
        let mut out = Complex::new();
        for g in &self.generators {
            for h in &other.generators {
                out.toggle(g.join(h).expect("disjoint vertex sets"));
            }
        }
        Ok(out)
    }

    /// `lk(A, K)`: complements `g ∖ A` over all generators `g ⊇ A`.
    pub fn link(&self, a: &Simplex) -> Complex {
        let mut out = BTreeSet::new();
        for g in self.generators.iter().filter(|g| g.has_face(a)) {
            let fresh = out.insert(g.minus(a));
            debug_assert!(fresh, "distinct generators have distinct complements");
        }
        Complex { generators: out }
    }

    /// `Q(A, K)`: generators not containing `A`.
    pub fn residual(&self, a: &Simplex) -> Complex {
        Complex {
            generators: self.generators.iter().filter(|g| !g.has_face(a)).cloned().collect(),
        }
    }

    /// Generators containing `A`.
    pub fn star(&self, a: &Simplex) -> Complex {
        Complex {
            generators: self.generators.iter().filter(|g| g.has_face(a)).cloned().collect(),
        }
    }

    /// Distinct faces with `k + 1` vertices.
    pub fn faces_of_dim(&self, k: usize) -> BTreeSet<Simplex> {
        self.generators
            .iter()
            .filter(|g| g.len() > k)
            .flat_map(|g| g.faces_of_dim(k).collect::<Vec<_>>())
            .collect()
    }

    /// All distinct nonempty faces, grouped by dimension.
    pub fn faces(&self) -> Vec<BTreeSet<Simplex>> {
        match self.dim() {
            None => Vec::new(),
            Some(d) => (0..=d).map(|k| self.faces_of_dim(k)).collect(),
        }
    }

    pub fn f_vector(&self) -> FVector {
        FVector(self.faces().iter().map(BTreeSet::len).collect())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().euler_characteristic()
    }

    /// Connectivity of the vertex–generator incidence graph. The empty
    /// complex counts as connected.
    pub fn is_connected(&self) -> bool {
        let verts: Vec<Vertex> = self.vertices().into_iter().collect();
        if verts.len() <= 1 {
            return true;
        }
        let index: BTreeMap<Vertex, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut uf = UnionFind::<usize>::new(verts.len());
        for g in &self.generators {
            let vs = g.vertices();
            for w in vs.windows(2) {
                uf.union(index[&w[0]], index[&w[1]]);
            }
        }
        let root = uf.find(0);
        (1..verts.len()).all(|i| uf.find(i) == root)
    }

    /// Maps every vertex through `f` (not checked for injectivity).
    pub(crate) fn map_vertices(&self, f: impl Fn(Vertex) -> Vertex) -> Complex {
        Complex::from_generators(self.generators.iter().map(|g| g.map(&f)))
    }
}

impl Add for &Complex {
    type Output = Complex;

    fn add(self, rhs: &Complex) -> Complex {
        Complex { generators: self.generators.symmetric_difference(&rhs.generators).cloned().collect() }
    }
}

impl Add for Complex {
    type Output = Complex;

    fn add(self, rhs: Complex) -> Complex {
        &self + &rhs
    }
}

impl FromIterator<Simplex> for Complex {
    fn from_iter<I: IntoIterator<Item = Simplex>>(iter: I) -> Self {
        Complex::from_generators(iter)
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.generators.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        f.write_str(&parts.join("+"))
    }
}

/// Hands out labels above every label seen so far.
#[derive(Clone, Debug)]
pub struct LabelAllocator {
    next: Vertex,
}

impl LabelAllocator {
    pub fn after(k: &Complex) -> Self {
        Self { next: k.max_label() + 1 }
    }

    pub fn starting_at(next: Vertex) -> Self {
        Self { next: next.max(1) }
    }

    pub fn fresh(&mut self) -> Vertex {
        let v = self.next;
        self.next += 1;
        v
    }

    pub fn reserve(&mut self, v: Vertex) {
        self.next = self.next.max(v + 1);
    }
}

/// `∂(1 2 … n+2)`, the standard stellar n-sphere.
pub fn standard_sphere(n: usize) -> Complex {
    standard_ball(n + 1).boundary().expect("simplex of dimension >= 1")
}

/// `(1 2 … n+1)`, the standard stellar n-ball.
pub fn standard_ball(n: usize) -> Complex {
    Complex::simplex(Simplex::from_sorted((1..=(n as Vertex + 1)).collect()))
}
