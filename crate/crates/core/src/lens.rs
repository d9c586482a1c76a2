//! Lens shells `ℓ(q,p)` as explicit stellar structures, and the repair loop
//! that refines a glued sphere until its equivalence is regular.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::f64::consts::PI;

use num_complex::Complex64;
use num_integer::Integer;
use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::complex::{Complex, LabelAllocator, Simplex, Vertex};
use crate::error::{Error, Result};
use crate::moves::subdivide;
use crate::quotient::{validate, RegularEquivalence, StellarStructure, Violation};

pub const ZERO: Vertex = 1;
pub const INFINITY: Vertex = 2;

/// Default round budget for [`make_regular`].
pub const DEFAULT_ROUNDS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct LensParams {
    q: u32,
    p: u32,
}

#[derive(Deserialize)]
struct RawParams {
    q: u32,
    p: u32,
}

impl TryFrom<RawParams> for LensParams {
    type Error = Error;
    fn try_from(r: RawParams) -> Result<Self> {
        LensParams::new(r.q, r.p)
    }
}

impl LensParams {
    pub fn new(q: u32, p: u32) -> Result<Self> {
        if !(q > p && p >= 1 && q.gcd(&p) == 1) {
            return Err(Error::InvalidLensParams { q, p });
        }
        Ok(LensParams { q, p })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// `e^{2πip/q}`.
    pub fn omega(&self) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * PI * self.p as f64 / self.q as f64)
    }
}

/// A generator-to-generator gluing with its vertex map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gluing {
    pub from: Simplex,
    pub to: Simplex,
    pub map: BTreeMap<Vertex, Vertex>,
}

/// A sphere with explicit gluings; the vertex classes are generated by the
/// given classes together with every gluing map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluedSphere {
    pub sphere: Complex,
    pub vertex_classes: Vec<Vec<Vertex>>,
    pub gluings: Vec<Gluing>,
}

fn equator(k: usize, n: usize) -> Vertex {
    3 + (k % n) as Vertex
}

/// Bipyramid over an `n`-gon: `(1 z_k z_{k+1})` inside, `(2 z_k z_{k+1})` outside.
pub fn bipyramid(n: usize) -> Complex {
    (0..n)
        .flat_map(|k| {
            [ZERO, INFINITY].map(|pole| Simplex::from_iter_unsorted([pole, equator(k, n), equator(k + 1, n)]))
        })
        .collect()
}

fn inner(k: usize, n: usize) -> Simplex {
    Simplex::from_iter_unsorted([ZERO, equator(k, n), equator(k + 1, n)])
}

fn outer(k: usize, n: usize) -> Simplex {
    Simplex::from_iter_unsorted([INFINITY, equator(k, n), equator(k + 1, n)])
}

/// `p₀(z) = ω/z̄` on `|z| ≤ 1`, `ω̄/z̄` outside; `None` is ∞.
fn p0(omega: Complex64, z: Option<Complex64>) -> Option<Complex64> {
    match z {
        None => Some(Complex64::new(0.0, 0.0)),
        Some(z) if z.norm_sqr() == 0.0 => None,
        Some(z) if z.norm_sqr() <= 1.0 + 1e-12 => Some(omega / z.conj()),
        Some(z) => Some(omega.conj() / z.conj()),
    }
}

/// Discretizes `p₀` on the bipyramid over an `n`-gon: vertices by position,
/// inner triangles by barycenter.
fn discretize(omega: Complex64, n: usize) -> Result<GluedSphere> {
    let step = 2.0 * PI / n as f64;
    let position = |v: Vertex| -> Option<Complex64> {
        match v {
            ZERO => Some(Complex64::new(0.0, 0.0)),
            INFINITY => None,
            _ => Some(Complex64::from_polar(1.0, step * (v - 3) as f64)),
        }
    };
    let locate = |z: Option<Complex64>| -> Result<Vertex> {
        let Some(z) = z else { return Ok(INFINITY) };
        if z.norm() < 1e-9 {
            return Ok(ZERO);
        }
        let k = (z.arg() / step).round().rem_euclid(n as f64) as usize;
        if (Complex64::from_polar(1.0, step * k as f64) - z).norm() > 1e-6 {
            return Err(Error::Internal(format!("p0 maps a vertex to {z}, not a vertex")));
        }
        Ok(equator(k, n))
    };
    let sector = |w: Complex64| -> usize { (w.arg().rem_euclid(2.0 * PI) / step).floor() as usize % n };

    let mut gluings = Vec::with_capacity(n);
    for k in 0..n {
        let from = inner(k, n);
        let bary = from.vertices().iter().map(|&v| position(v).expect("finite")).sum::<Complex64>() / 3.0;
        let w = p0(omega, Some(bary)).expect("barycenter is not 0");
        let to = outer(sector(w), n);
        let map: BTreeMap<Vertex, Vertex> =
            from.vertices().iter().map(|&v| locate(p0(omega, position(v))).map(|u| (v, u))).collect::<Result<_>>()?;
        let image = Simplex::from_iter_unsorted(map.values().copied());
        if image != to {
            return Err(Error::Internal(format!("vertices of {from} map to {image}, barycenter lands in {to}")));
        }
        gluings.push(Gluing { from, to, map });
    }
    Ok(GluedSphere { sphere: bipyramid(n), vertex_classes: vec![vec![ZERO, INFINITY]], gluings })
}

/// The bipyramid over a `2q`-gon with the discretized `p₀`.
pub fn lens_glued(params: LensParams) -> Result<GluedSphere> {
    discretize(params.omega(), 2 * params.q as usize)
}

/// The bipyramid over a `q`-gon; it repeats classes on the equator.
pub fn coarse_lens_glued(params: LensParams) -> Result<GluedSphere> {
    discretize(params.omega(), params.q as usize)
}

pub fn lens_structure(params: LensParams) -> Result<StellarStructure> {
    let (sphere, eq) = make_regular_glued(&lens_glued(params)?, DEFAULT_ROUNDS)?;
    finish(sphere, eq)
}

/// `z ↦ 1/z̄` on a bipyramid over an `n`-gon: each inner triangle is paired
/// with its mirror image and only the poles are identified.
pub fn mirror_structure(n: usize) -> Result<StellarStructure> {
    if n < 3 {
        return Err(Error::InvalidSimplex(format!("a bipyramid needs at least 3 equator vertices, got {n}")));
    }
    let (sphere, eq) = make_regular_glued(&discretize(Complex64::new(1.0, 0.0), n)?, DEFAULT_ROUNDS)?;
    finish(sphere, eq)
}

fn finish(sphere: Complex, eq: RegularEquivalence) -> Result<StellarStructure> {
    let apex = sphere.max_label() + 1;
    let s = StellarStructure::new(apex, sphere, eq);
    let violations = s.validate();
    if !violations.is_empty() {
        return Err(Error::InvalidEquivalence(violations));
    }
    if !s.is_closed() {
        return Err(Error::Internal("shell structure is not closed".into()));
    }
    Ok(s)
}

/// Derives the gluing maps of `eq` by class matching and repairs.
pub fn make_regular(s: &Complex, eq: &RegularEquivalence, rounds: usize) -> Result<(Complex, RegularEquivalence)> {
    let violations = validate(eq, s);
    if violations.is_empty() {
        return Ok((s.clone(), eq.clone()));
    }
    let rep = eq.representative_map();
    let class = |v: Vertex| rep.get(&v).copied().unwrap_or(v);
    let mut gluings = Vec::new();
    for (a, b) in &eq.generator_pairs {
        let by_class: BTreeMap<Vertex, Vec<Vertex>> = b.vertices().iter().fold(BTreeMap::new(), |mut m, &v| {
            m.entry(class(v)).or_insert_with(Vec::new).push(v);
            m
        });
        let mut map = BTreeMap::new();
        for &v in a.vertices() {
            match by_class.get(&class(v)).map(Vec::as_slice) {
                Some([u]) => {
                    map.insert(v, *u);
                }
                Some(_) => {
                    return Err(Error::InconsistentPairing(format!(
                        "gluing {a} → {b} is ambiguous: repeated class of {v}"
                    )))
                }
                None => return Err(Error::InconsistentPairing(format!("{a} and {b} do not match class by class"))),
            }
        }
        gluings.push(Gluing { from: a.clone(), to: b.clone(), map });
    }
    make_regular_glued(&GluedSphere { sphere: s.clone(), vertex_classes: eq.vertex_classes.clone(), gluings }, rounds)
}

/// Subdivides, a whole gluing-orbit of edges at a time, every edge joining
/// two equivalent vertices of a generator, until the equivalence is valid.
pub fn make_regular_glued(glued: &GluedSphere, rounds: usize) -> Result<(Complex, RegularEquivalence)> {
    let mut sphere = glued.sphere.clone();
    let mut classes = glued.vertex_classes.clone();
    let mut gluings = glued.gluings.clone();
    check_gluings(&sphere, &gluings)?;
    for round in 0..=rounds {
        let eq = equivalence(&sphere, &classes, &gluings);
        let violations = validate(&eq, &sphere);
        if violations.is_empty() {
            return Ok((sphere, eq));
        }
        let edge = match violations.iter().find_map(|v| match v {
            Violation::EquivalentVerticesInGenerator { vertices: (u, w), .. } => Some(Simplex::from_iter_unsorted([*u, *w])),
            _ => None,
        }) {
            Some(e) if violations.iter().all(|v| matches!(v, Violation::EquivalentVerticesInGenerator { .. })) => e,
            _ => {
                let msgs: Vec<String> = violations.iter().map(ToString::to_string).collect();
                return Err(Error::InconsistentPairing(msgs.join("; ")));
            }
        };
        if round == rounds {
            return Err(Error::BudgetExhausted(rounds));
        }
        log::debug!("make_regular round {round}: subdividing the orbit of {edge}");
        let orbit = edge_orbit(&edge, &gluings);
        let mut labels = LabelAllocator::after(&sphere);
        let mut origin: BTreeMap<Simplex, Simplex> = sphere.generators().iter().map(|g| (g.clone(), g.clone())).collect();
        let mut fresh: BTreeMap<Simplex, Vertex> = BTreeMap::new();
        for e in &orbit {
            let x = labels.fresh();
            let touched: Vec<Simplex> = sphere.generators().iter().filter(|g| g.has_face(e)).cloned().collect();
            sphere = subdivide(&sphere, e, x)?;
            for g in touched {
                let o = origin.remove(&g).expect("tracked generator");
                for f in e.facets() {
                    origin.insert(g.minus(e).join(&f).expect("disjoint").with_vertex(x), o.clone());
                }
            }
            fresh.insert(e.clone(), x);
        }
        let mut children: BTreeMap<&Simplex, Vec<&Simplex>> = BTreeMap::new();
        for (c, o) in &origin {
            children.entry(o).or_default().push(c);
        }
        let mut next = Vec::with_capacity(gluings.len());
        for gl in &gluings {
            let mut map = gl.map.clone();
            for (e, &x) in &fresh {
                if gl.from.has_face(e) {
                    let image = e.map(|v| gl.map[&v]);
                    let y = *fresh.get(&image).ok_or_else(|| {
                        Error::InconsistentPairing(format!("edge {e} maps to {image}, which was not subdivided"))
                    })?;
                    map.insert(x, y);
                }
            }
            for c in children.get(&gl.from).into_iter().flatten() {
                let image = c.map(|v| map[&v]);
                if origin.get(&image) != Some(&gl.to) {
                    return Err(Error::InconsistentPairing(format!(
                        "child {c} of {} maps to {image}, not a child of {}",
                        gl.from, gl.to
                    )));
                }
                let m = c.vertices().iter().map(|&v| (v, map[&v])).collect();
                next.push(Gluing { from: (*c).clone(), to: image, map: m });
            }
        }
        gluings = next;
        classes.push(fresh.values().copied().collect());
    }
    unreachable!("loop returns on the last round")
}

fn check_gluings(s: &Complex, gluings: &[Gluing]) -> Result<()> {
    for g in gluings {
        let keys: BTreeSet<Vertex> = g.map.keys().copied().collect();
        let values: BTreeSet<Vertex> = g.map.values().copied().collect();
        let from: BTreeSet<Vertex> = g.from.vertices().iter().copied().collect();
        let to: BTreeSet<Vertex> = g.to.vertices().iter().copied().collect();
        if keys != from || values != to {
            return Err(Error::InconsistentPairing(format!("map of {} → {} is not a bijection of their vertices", g.from, g.to)));
        }
        if !s.contains_generator(&g.from) || !s.contains_generator(&g.to) {
            return Err(Error::InconsistentPairing(format!("{} → {} glues a non-generator", g.from, g.to)));
        }
    }
    Ok(())
}

fn equivalence(s: &Complex, classes: &[Vec<Vertex>], gluings: &[Gluing]) -> RegularEquivalence {
    let verts: Vec<Vertex> = s.vertices().into_iter().collect();
    let pos: BTreeMap<Vertex, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut uf = UnionFind::<usize>::new(verts.len());
    for c in classes {
        for w in c.windows(2) {
            if let (Some(&a), Some(&b)) = (pos.get(&w[0]), pos.get(&w[1])) {
                uf.union(a, b);
            }
        }
    }
    for g in gluings {
        for (a, b) in &g.map {
            uf.union(pos[a], pos[b]);
        }
    }
    let mut groups: BTreeMap<usize, Vec<Vertex>> = BTreeMap::new();
    for (i, &v) in verts.iter().enumerate() {
        groups.entry(uf.find(i)).or_default().push(v);
    }
    RegularEquivalence {
        vertex_classes: groups.into_values().collect(),
        generator_pairs: gluings.iter().map(|g| (g.from.clone(), g.to.clone())).collect(),
    }
    .normalized()
}

/// Edges reachable from `edge` through the gluing maps in both directions.
fn edge_orbit(edge: &Simplex, gluings: &[Gluing]) -> BTreeSet<Simplex> {
    let inverse: Vec<BTreeMap<Vertex, Vertex>> =
        gluings.iter().map(|g| g.map.iter().map(|(&a, &b)| (b, a)).collect()).collect();
    let mut seen = BTreeSet::from([edge.clone()]);
    let mut queue = VecDeque::from([edge.clone()]);
    while let Some(e) = queue.pop_front() {
        for (g, inv) in gluings.iter().zip(&inverse) {
            for (side, map) in [(&g.from, &g.map), (&g.to, inv)] {
                if side.has_face(&e) {
                    let image = e.map(|v| map[&v]);
                    if seen.insert(image.clone()) {
                        queue.push_back(image);
                    }
                }
            }
        }
    }
    seen
}
