//! Regular equivalences on spheres, stellar structures `a★(S/≃)`, and the
//! quotient cell complex `S/≃`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::cells::{Cell, CellComplex};
use crate::complex::{Complex, Simplex, Vertex};
use crate::error::{Error, Result};

/// A vertex partition (only non-singleton classes listed) and a pairing of
/// generators.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularEquivalence {
    pub vertex_classes: Vec<Vec<Vertex>>,
    pub generator_pairs: Vec<(Simplex, Simplex)>,
}

impl RegularEquivalence {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Sorted classes without singletons, pairs as `(smaller, larger)` in order.
    pub fn normalized(mut self) -> Self {
        for c in &mut self.vertex_classes {
            c.sort_unstable();
            c.dedup();
        }
        self.vertex_classes.retain(|c| c.len() > 1);
        self.vertex_classes.sort();
        for p in &mut self.generator_pairs {
            if p.1 < p.0 {
                std::mem::swap(&mut p.0, &mut p.1);
            }
        }
        self.generator_pairs.sort();
        self
    }

    /// Representative (smallest member) of the class of `v`.
    pub fn representative_map(&self) -> BTreeMap<Vertex, Vertex> {
        let mut m = BTreeMap::new();
        for c in &self.vertex_classes {
            let rep = *c.iter().min().expect("nonempty class");
            for &v in c {
                m.entry(v).or_insert(rep);
            }
        }
        m
    }

    pub fn partner_map(&self) -> BTreeMap<Simplex, Simplex> {
        let mut m = BTreeMap::new();
        for (a, b) in &self.generator_pairs {
            m.insert(a.clone(), b.clone());
            m.insert(b.clone(), a.clone());
        }
        m
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    VertexInSeveralClasses { vertex: Vertex },
    UnknownVertex { vertex: Vertex },
    EquivalentVerticesInGenerator { generator: Simplex, vertices: (Vertex, Vertex) },
    NotAGenerator { simplex: Simplex },
    SelfPaired { generator: Simplex },
    PairedMoreThanOnce { generator: Simplex },
    ClassMismatch { first: Simplex, second: Simplex },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::VertexInSeveralClasses { vertex } => write!(f, "vertex {vertex} is in several classes"),
            Violation::UnknownVertex { vertex } => write!(f, "class vertex {vertex} is not a vertex of S"),
            Violation::EquivalentVerticesInGenerator { generator, vertices: (u, v) } => {
                write!(f, "generator {generator} contains equivalent vertices {u} and {v}")
            }
            Violation::NotAGenerator { simplex } => write!(f, "{simplex} is paired but is not a generator of S"),
            Violation::SelfPaired { generator } => write!(f, "{generator} is paired with itself"),
            Violation::PairedMoreThanOnce { generator } => write!(f, "{generator} is paired more than once"),
            Violation::ClassMismatch { first, second } => {
                write!(f, "paired generators {first} and {second} do not match class by class")
            }
        }
    }
}

/// Checks both regularity conditions; empty means valid.
pub fn validate(eq: &RegularEquivalence, s: &Complex) -> Vec<Violation> {
    let mut out = Vec::new();
    let verts = s.vertices();
    let mut seen = BTreeSet::new();
    for c in &eq.vertex_classes {
        for &v in c.iter().collect::<BTreeSet<_>>() {
            if !seen.insert(v) {
                out.push(Violation::VertexInSeveralClasses { vertex: v });
            }
            if !verts.contains(&v) {
                out.push(Violation::UnknownVertex { vertex: v });
            }
        }
    }
    let rep = eq.representative_map();
    let class = |v: Vertex| rep.get(&v).copied().unwrap_or(v);

    for g in s.generators() {
        let vs = g.vertices();
        'outer: for (i, &u) in vs.iter().enumerate() {
            for &v in &vs[i + 1..] {
                if class(u) == class(v) {
                    out.push(Violation::EquivalentVerticesInGenerator { generator: g.clone(), vertices: (u, v) });
                    break 'outer;
                }
            }
        }
    }

    let mut paired: BTreeMap<&Simplex, usize> = BTreeMap::new();
    for (a, b) in &eq.generator_pairs {
        for x in [a, b] {
            if !s.contains_generator(x) {
                out.push(Violation::NotAGenerator { simplex: x.clone() });
            }
        }
        if a == b {
            out.push(Violation::SelfPaired { generator: a.clone() });
            continue;
        }
        for x in [a, b] {
            let n = paired.entry(x).or_default();
            *n += 1;
            if *n == 2 {
                out.push(Violation::PairedMoreThanOnce { generator: x.clone() });
            }
        }
        let ca: Vec<Vertex> = sorted(a.vertices().iter().map(|&v| class(v)));
        let cb: Vec<Vertex> = sorted(b.vertices().iter().map(|&v| class(v)));
        if ca != cb {
            out.push(Violation::ClassMismatch { first: a.clone(), second: b.clone() });
        }
    }
    out
}

fn sorted(it: impl Iterator<Item = Vertex>) -> Vec<Vertex> {
    let mut v: Vec<Vertex> = it.collect();
    v.sort_unstable();
    v
}

/// `a★(S/≃)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "StructureJson", into = "StructureJson")]
pub struct StellarStructure {
    pub apex: Vertex,
    pub sphere: Complex,
    pub equivalence: RegularEquivalence,
}

#[derive(Serialize, Deserialize)]
struct StructureJson {
    apex: Vertex,
    closed: Option<bool>,
    equivalence: RegularEquivalence,
    sphere: Complex,
}

impl From<StellarStructure> for StructureJson {
    fn from(s: StellarStructure) -> Self {
        let closed = Some(s.is_closed());
        StructureJson { apex: s.apex, closed, equivalence: s.equivalence, sphere: s.sphere }
    }
}

impl TryFrom<StructureJson> for StellarStructure {
    type Error = String;

    fn try_from(j: StructureJson) -> std::result::Result<Self, String> {
        let s = StellarStructure { apex: j.apex, sphere: j.sphere, equivalence: j.equivalence.normalized() };
        match j.closed {
            Some(c) if c != s.is_closed() => Err(format!("\"closed\": {c} disagrees with the pairing")),
            _ => Ok(s),
        }
    }
}

impl StellarStructure {
    pub fn new(apex: Vertex, sphere: Complex, equivalence: RegularEquivalence) -> Self {
        StellarStructure { apex, sphere, equivalence: equivalence.normalized() }
    }

    /// Every generator of S is paired.
    pub fn is_closed(&self) -> bool {
        let partners = self.equivalence.partner_map();
        self.sphere.generators().iter().all(|g| partners.contains_key(g))
    }

    /// Dimension `n` of the manifold `a★(S/≃)`.
    pub fn manifold_dim(&self) -> usize {
        self.sphere.dim().map_or(0, |d| d + 1)
    }

    pub fn validate(&self) -> Vec<Violation> {
        validate(&self.equivalence, &self.sphere)
    }

    pub fn unpaired(&self) -> Vec<Simplex> {
        let partners = self.equivalence.partner_map();
        self.sphere.generators().iter().filter(|g| !partners.contains_key(*g)).cloned().collect()
    }
}

/// `S/≃` as a Δ-complex. Cells of dimension `k` are union-find classes of
/// `k`-faces of S, merged through paired generators; 0-cells are the vertex
/// classes. Each cell is ordered by increasing class id.
#[derive(Clone, Debug)]
pub struct QuotientComplex {
    cells: CellComplex,
    members: Vec<Vec<Vec<Simplex>>>,
    lookup: Vec<BTreeMap<Simplex, usize>>,
    classes: Vec<Vec<Vertex>>,
    sphere_counts: Vec<usize>,
    closed: bool,
}

pub fn quotient_complex(structure: &StellarStructure) -> Result<QuotientComplex> {
    let violations = structure.validate();
    if !violations.is_empty() {
        return Err(Error::InvalidEquivalence(violations));
    }
    let s = &structure.sphere;
    let d = s.dim().ok_or(Error::EmptyComplex)?;
    let rep = structure.equivalence.representative_map();
    let class_of_label = |v: Vertex| rep.get(&v).copied().unwrap_or(v);

    let mut by_rep: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for v in s.vertices() {
        by_rep.entry(class_of_label(v)).or_default().push(v);
    }
    let classes: Vec<Vec<Vertex>> = by_rep.into_values().collect();
    let class_id: BTreeMap<Vertex, usize> =
        classes.iter().enumerate().flat_map(|(i, c)| c.iter().map(move |&v| (v, i))).collect();

    let faces = s.faces();
    let sphere_counts: Vec<usize> = faces.iter().map(BTreeSet::len).collect();
    let index: Vec<BTreeMap<Simplex, usize>> =
        faces.iter().map(|fs| fs.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect()).collect();

    let matchings: Vec<BTreeMap<Vertex, Vertex>> = structure
        .equivalence
        .generator_pairs
        .iter()
        .map(|(g, p)| {
            let by_class: BTreeMap<usize, Vertex> = p.vertices().iter().map(|&v| (class_id[&v], v)).collect();
            g.vertices().iter().map(|&v| (v, by_class[&class_id[&v]])).collect()
        })
        .collect();

    let mut members: Vec<Vec<Vec<Simplex>>> = Vec::with_capacity(d + 1);
    let mut lookup: Vec<BTreeMap<Simplex, usize>> = Vec::with_capacity(d + 1);
    members.push(classes.iter().map(|c| c.iter().map(|&v| Simplex::vertex(v)).collect()).collect());
    lookup.push(
        faces[0].iter().map(|f| (f.clone(), class_id[&f.vertices()[0]])).collect(),
    );
    for k in 1..=d {
        let mut uf = UnionFind::<usize>::new(faces[k].len());
        for ((g, _), phi) in structure.equivalence.generator_pairs.iter().zip(&matchings) {
            for f in g.faces_of_dim(k) {
                let image = f.map(|v| phi[&v]);
                uf.union(index[k][&f], index[k][&image]);
            }
        }
        let mut groups: BTreeMap<usize, Vec<Simplex>> = BTreeMap::new();
        for (f, &i) in &index[k] {
            groups.entry(uf.find(i)).or_default().push(f.clone());
        }
        let mut cells_k: Vec<Vec<Simplex>> = groups.into_values().collect();
        cells_k.sort();
        let mut lk = BTreeMap::new();
        for (c, m) in cells_k.iter().enumerate() {
            for f in m {
                lk.insert(f.clone(), c);
            }
        }
        members.push(cells_k);
        lookup.push(lk);
    }

    let mut layers: Vec<Vec<Cell>> = Vec::with_capacity(d + 1);
    layers.push((0..classes.len()).map(|i| Cell { vertices: vec![i], faces: Vec::new() }).collect());
    for k in 1..=d {
        let mut layer = Vec::with_capacity(members[k].len());
        for m in &members[k] {
            let cell_of_member = |f: &Simplex| -> Cell {
                let mut vs: Vec<Vertex> = f.vertices().to_vec();
                vs.sort_by_key(|v| class_id[v]);
                let vertices: Vec<usize> = vs.iter().map(|v| class_id[v]).collect();
                let faces = (0..vs.len())
                    .map(|i| {
                        let face = Simplex::from_iter_unsorted(vs.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v));
                        lookup[k - 1][&face]
                    })
                    .collect();
                Cell { vertices, faces }
            };
            let cell = cell_of_member(&m[0]);
            if let Some(bad) = m[1..].iter().find(|f| cell_of_member(f) != cell) {
                return Err(Error::Internal(format!("identified faces {} and {bad} have different face cells", m[0])));
            }
            layer.push(cell);
        }
        layers.push(layer);
    }

    Ok(QuotientComplex {
        cells: CellComplex::new(layers),
        members,
        lookup,
        classes,
        sphere_counts,
        closed: structure.is_closed(),
    })
}

impl QuotientComplex {
    pub fn cells(&self) -> &CellComplex {
        &self.cells
    }

    /// `h_i`: number of `i`-cells.
    pub fn counts(&self) -> Vec<usize> {
        self.cells.counts()
    }

    /// `s_i`: number of `i`-faces of S.
    pub fn sphere_counts(&self) -> &[usize] {
        &self.sphere_counts
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn dim(&self) -> usize {
        self.cells.dim().unwrap_or(0)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells.euler_characteristic()
    }

    pub fn vertex_classes(&self) -> &[Vec<Vertex>] {
        &self.classes
    }

    /// Smallest vertex label of class `c`.
    pub fn class_label(&self, c: usize) -> Vertex {
        self.classes[c][0]
    }

    /// Faces of S identified into cell `(k, i)`.
    pub fn members(&self, k: usize, i: usize) -> &[Simplex] {
        &self.members[k][i]
    }

    pub fn cell_of(&self, face: &Simplex) -> Option<(usize, usize)> {
        let k = face.dim()?;
        self.lookup.get(k)?.get(face).map(|&i| (k, i))
    }

    /// `q_i`: cells of `a★(S/≃)`: the apex, the quotient cells, and one
    /// cone cell `a★σ` for every face `σ` of S (cones are never identified).
    pub fn cone_counts(&self) -> Vec<usize> {
        let h = self.counts();
        let s = &self.sphere_counts;
        let mut q = vec![h[0] + 1];
        for i in 1..h.len() {
            q.push(h[i] + s[i - 1]);
        }
        q.push(s[s.len() - 1]);
        q
    }

    /// A simplicial complex homeomorphic to the quotient: the class-labelled
    /// cells when no two cells share a class set, else the order complex of
    /// the cell poset (labels `1..`, grouped by dimension).
    pub fn simplicial_model(&self) -> Complex {
        let distinct = (0..=self.dim()).all(|k| {
            let sets: BTreeSet<&Vec<usize>> = self.cells.cells(k).iter().map(|c| &c.vertices).collect();
            sets.len() == self.cells.count(k)
        });
        let maximal = self.cells.maximal_cells();
        if distinct {
            maximal
                .iter()
                .map(|&(k, i)| {
                    Simplex::from_iter_unsorted(self.cells.cells(k)[i].vertices.iter().map(|&c| self.class_label(c)))
                })
                .collect()
        } else {
            let mut offset = vec![0u32; self.dim() + 2];
            for k in 0..=self.dim() {
                offset[k + 1] = offset[k] + self.cells.count(k) as u32;
            }
            let label = |k: usize, i: usize| offset[k] + i as u32 + 1;
            let mut out = BTreeSet::new();
            for &(k, i) in &maximal {
                let mut chains = vec![(vec![label(k, i)], i)];
                for dim in (0..k).rev() {
                    chains = chains
                        .into_iter()
                        .flat_map(|(chain, cell)| {
                            let faces: BTreeSet<usize> = self.cells.cells(dim + 1)[cell].faces.iter().copied().collect();
                            faces.into_iter().map(move |f| {
                                let mut c = chain.clone();
                                c.push(label(dim, f));
                                (c, f)
                            }).collect::<Vec<_>>()
                        })
                        .collect();
                }
                out.extend(chains.into_iter().map(|(c, _)| Simplex::from_iter_unsorted(c)));
            }
            Complex::from_generators(out)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerCheck {
    pub n: usize,
    pub chi_quotient: i64,
    pub chi_manifold: i64,
    pub holds: bool,
}

/// `χ(S/≃) = χ(M) + (−1)^{n+1}` for a closed n-manifold M.
pub fn euler_identity_check(structure: &StellarStructure, m: &Complex) -> Result<EulerCheck> {
    if !m.is_closed() || m.is_empty() {
        return Err(Error::NotClosed);
    }
    let q = quotient_complex(structure)?;
    let n = m.dim().expect("nonempty");
    let chi_quotient = q.euler_characteristic();
    let chi_manifold = m.euler_characteristic();
    let sign = if (n + 1) % 2 == 0 { 1 } else { -1 };
    Ok(EulerCheck { n, chi_quotient, chi_manifold, holds: chi_quotient == chi_manifold + sign })
}
