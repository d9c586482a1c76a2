//! Rewriting a connected stellar manifold into a stellar structure `a★(S/≃)`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::complex::{Complex, LabelAllocator, Simplex, Vertex};
use crate::error::{Error, Result};
use crate::manifold::check_manifold;
use crate::moves::{recognize, subdivide, weld, Move, Verdict, DEFAULT_BUDGET};
use crate::quotient::{euler_identity_check, RegularEquivalence, StellarStructure};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildOptions {
    /// Maximum number of attachment steps.
    pub budget: usize,
    /// Verify the manifold condition first.
    pub check_manifold: bool,
    /// Budget handed to the link recognizer.
    pub manifold_budget: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { budget: DEFAULT_BUDGET, check_manifold: true, manifold_budget: DEFAULT_BUDGET }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttachCase {
    /// The opposite vertex is new to the link.
    NewVertex,
    /// The opposite vertex is already in the link; a fresh copy is used.
    Copy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub step: usize,
    /// The generator of M being absorbed.
    pub generator: Simplex,
    /// The face of the link it is attached along.
    pub face: Simplex,
    pub case: AttachCase,
    /// Vertex joined to the apex: the opposite vertex or its copy.
    pub vertex: Vertex,
    pub moves: Vec<Move>,
    pub remaining: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildTrace {
    pub apex: Vertex,
    pub initial: Move,
    pub steps: Vec<TraceStep>,
}

/// In-progress state: `N = a★S + Q`, with `orig` mapping link labels back to
/// labels of M.
struct State {
    n: Complex,
    apex: Vertex,
    link: BTreeSet<Simplex>,
    orig: BTreeMap<Vertex, Vertex>,
    by_orig: BTreeMap<Simplex, BTreeSet<Simplex>>,
    vertex_use: BTreeMap<Vertex, usize>,
    q: BTreeSet<Simplex>,
}

impl State {
    fn orig_face(&self, f: &Simplex) -> Simplex {
        f.map(|v| self.orig[&v])
    }

    fn add_link_face(&mut self, f: Simplex) {
        for &v in f.vertices() {
            *self.vertex_use.entry(v).or_default() += 1;
        }
        let key = self.orig_face(&f);
        self.by_orig.entry(key).or_default().insert(f.clone());
        self.link.insert(f);
    }

    fn remove_link_face(&mut self, f: &Simplex) {
        for v in f.vertices() {
            let c = self.vertex_use.get_mut(v).expect("counted");
            *c -= 1;
            if *c == 0 {
                self.vertex_use.remove(v);
            }
        }
        let key = self.orig_face(f);
        if let Some(set) = self.by_orig.get_mut(&key) {
            set.remove(f);
            if set.is_empty() {
                self.by_orig.remove(&key);
            }
        }
        self.link.remove(f);
    }

    /// Smallest generator of Q with a facet matching a link face, with its
    /// smallest such facet.
    fn next_attachment(&self) -> Option<(Simplex, Simplex, Simplex)> {
        for p in &self.q {
            for f in p.facets().collect::<BTreeSet<_>>() {
                if let Some(faces) = self.by_orig.get(&f) {
                    if let Some(fs) = faces.iter().next() {
                        return Some((p.clone(), f, fs.clone()));
                    }
                }
            }
        }
        None
    }

    fn expected_complex(&self) -> Complex {
        let mut out: Complex = self.q.iter().cloned().collect();
        for f in &self.link {
            out.toggle(f.with_vertex(self.apex));
        }
        out
    }

    fn dump(&self) -> String {
        format!(
            "apex {}, link {}, remaining {}",
            self.apex,
            Complex::from_generators(self.link.iter().cloned()),
            Complex::from_generators(self.q.iter().cloned())
        )
    }
}

/// Builds the stellar structure by repeatedly attaching a generator of
/// `Q(a, N)` to the link of the apex along a shared facet.
pub fn build_structure(m: &Complex, opts: &BuildOptions) -> Result<(StellarStructure, BuildTrace)> {
    if m.is_empty() {
        return Err(Error::EmptyComplex);
    }
    if !m.is_uniform() {
        return Err(Error::NotUniform);
    }
    if m.dim() == Some(0) {
        return Err(Error::Dimension { expected: 1, found: 0 });
    }
    if !m.is_connected() {
        return Err(Error::Disconnected);
    }
    if opts.check_manifold {
        let report = check_manifold(m, opts.manifold_budget)?;
        if !report.is_manifold {
            let bad: Vec<String> = report.bad_vertices.iter().map(|b| format!("{} ({:?})", b.vertex, b.verdict)).collect();
            return Err(Error::NotManifold(format!("bad vertex links at {}", bad.join(", "))));
        }
    }

    let mut alloc = LabelAllocator::after(m);
    let g = m.generators().iter().next().expect("nonempty").clone();
    let apex = alloc.fresh();
    let n = subdivide(m, &g, apex)?;
    let mut st = State {
        n,
        apex,
        link: BTreeSet::new(),
        orig: g.vertices().iter().map(|&v| (v, v)).collect(),
        by_orig: BTreeMap::new(),
        vertex_use: BTreeMap::new(),
        q: m.generators().iter().filter(|h| **h != g).cloned().collect(),
    };
    for f in g.facets() {
        st.add_link_face(f);
    }
    let mut trace = BuildTrace { apex, initial: Move::Subdivide { simplex: g, vertex: apex }, steps: Vec::new() };

    while !st.q.is_empty() {
        if trace.steps.len() >= opts.budget {
            return Err(Error::BudgetExhausted(opts.budget));
        }
        let Some((p, face_orig, face)) = st.next_attachment() else {
            return Err(Error::Stalled(format!("no remaining generator meets the link; {}", st.dump())));
        };
        let v = p.minus(&face_orig).vertices()[0];
        let (case, x) = if st.vertex_use.contains_key(&v) {
            (AttachCase::Copy, alloc.fresh())
        } else {
            (AttachCase::NewVertex, v)
        };
        let p_view = face.with_vertex(x);
        let mut cur = st.n.clone();
        if p_view != p {
            cur.toggle(p.clone());
            cur.toggle(p_view.clone());
        }
        let b = alloc.fresh();
        let edge = Simplex::from_iter_unsorted([apex, x]);
        let n1 = subdivide(&cur, &face, b).map_err(|e| stall(&st, &p, e))?;
        let n2 = weld(&n1, &edge, b).map_err(|e| stall(&st, &p, e))?;

        let before = st.q.len();
        st.q.remove(&p);
        st.orig.insert(x, v);
        st.remove_link_face(&face);
        for f in face.facets() {
            st.add_link_face(f.with_vertex(x));
        }
        st.n = n2;
        if st.n != st.expected_complex() {
            return Err(Error::Internal(format!("N is not a★S + Q after absorbing {p}; {}", st.dump())));
        }
        if st.q.len() + 1 != before {
            return Err(Error::Internal("Q did not shrink by one generator".into()));
        }
        trace.steps.push(TraceStep {
            step: trace.steps.len() + 1,
            generator: p,
            face: face.clone(),
            case,
            vertex: x,
            moves: vec![Move::Subdivide { simplex: face, vertex: b }, Move::Weld { simplex: edge, vertex: b }],
            remaining: st.q.len(),
        });
    }

    let sphere: Complex = st.link.iter().cloned().collect();
    if sphere != st.n.link(&Simplex::vertex(apex)) {
        return Err(Error::Internal("final link differs from the tracked link".into()));
    }
    let mut classes: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for v in sphere.vertices() {
        classes.entry(st.orig[&v]).or_default().push(v);
    }
    let mut groups: BTreeMap<Simplex, Vec<Simplex>> = BTreeMap::new();
    for f in sphere.generators() {
        groups.entry(st.orig_face(f)).or_default().push(f.clone());
    }
    let mut pairs = Vec::new();
    for (key, members) in groups {
        match members.len() {
            1 => {}
            2 => pairs.push((members[0].clone(), members[1].clone())),
            k => return Err(Error::NotManifold(format!("face {key} of M occurs {k} times on the link"))),
        }
    }
    let eq = RegularEquivalence { vertex_classes: classes.into_values().collect(), generator_pairs: pairs };
    Ok((StellarStructure::new(apex, sphere, eq), trace))
}

fn stall(st: &State, p: &Simplex, e: Error) -> Error {
    Error::Stalled(format!("absorbing {p} failed: {e}; {}", st.dump()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub diagnostics: Vec<String>,
}

/// Post-hoc checks of a structure claimed for M.
pub fn verify_structure(m: &Complex, s: &StellarStructure, budget: usize) -> VerifyReport {
    let mut diagnostics = Vec::new();
    let sv = s.sphere.vertices();
    if sv.contains(&s.apex) {
        diagnostics.push(format!("apex {} is a vertex of S", s.apex));
    }
    if m.vertices().contains(&s.apex) {
        diagnostics.push(format!("apex {} is a vertex of M", s.apex));
    }
    if m.dim().map(|d| d + 1) != Some(s.manifold_dim() + 1) {
        diagnostics.push(format!("dim S + 1 = {} but dim M = {:?}", s.manifold_dim(), m.dim()));
    }
    match recognize(&s.sphere, budget) {
        Ok(Verdict::Sphere) => {}
        Ok(v) => diagnostics.push(format!("S is not recognized as a sphere ({v:?})")),
        Err(e) => diagnostics.push(format!("S is not recognized as a sphere ({e})")),
    }
    diagnostics.extend(s.validate().iter().map(|v| v.to_string()));
    let m_closed = m.is_closed();
    if s.is_closed() != m_closed {
        let unpaired = s.unpaired();
        diagnostics.push(format!(
            "M is {} but {} generators of S are unpaired",
            if m_closed { "closed" } else { "not closed" },
            unpaired.len()
        ));
    }
    if m_closed && diagnostics.is_empty() {
        match euler_identity_check(s, m) {
            Ok(c) if c.holds => {}
            Ok(c) => diagnostics.push(format!("Euler identity fails: χ(S/≃) = {}, χ(M) = {}", c.chi_quotient, c.chi_manifold)),
            Err(e) => diagnostics.push(e.to_string()),
        }
    }
    VerifyReport { ok: diagnostics.is_empty(), diagnostics }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{standard_ball, standard_sphere};
    use crate::quotient::quotient_complex;

    #[test]
    fn ball_needs_one_starring() {
        let (s, trace) = build_structure(&standard_ball(3), &BuildOptions::default()).unwrap();
        assert_eq!(s.apex, 5);
        assert_eq!(s.sphere, standard_sphere(2));
        assert_eq!(s.equivalence, RegularEquivalence::identity());
        assert!(!s.is_closed());
        assert!(trace.steps.is_empty());
    }

    #[test]
    fn two_sphere_gives_hexagon() {
        let m = standard_sphere(2);
        let (s, trace) = build_structure(&m, &BuildOptions::default()).unwrap();
        assert_eq!(trace.steps.len(), 3);
        assert!(s.is_closed());
        assert_eq!(s.sphere.len(), 6);
        let q = quotient_complex(&s).unwrap();
        assert_eq!(q.counts(), vec![4, 3]);
        assert_eq!(q.euler_characteristic(), 1);
        assert!(verify_structure(&m, &s, 100).ok);
    }

    #[test]
    fn verify_flags_defects() {
        let m = standard_sphere(2);
        let (s, _) = build_structure(&m, &BuildOptions::default()).unwrap();
        let mut broken = s.clone();
        broken.equivalence.generator_pairs.pop();
        assert!(!verify_structure(&m, &broken, 100).ok);
        let mut broken = s.clone();
        broken.apex = *s.sphere.vertices().iter().next().unwrap();
        assert!(!verify_structure(&m, &broken, 100).ok);
    }

    #[test]
    fn rejects_bad_inputs() {
        let two = Complex::from_generators([Simplex::new(vec![1, 2]).unwrap(), Simplex::new(vec![3, 4]).unwrap()]);
        assert_eq!(build_structure(&two, &BuildOptions::default()).unwrap_err(), Error::Disconnected);
        let pinched: Complex = [vec![1, 2, 3, 4], vec![1, 2, 5, 6]].into_iter().map(|v| Simplex::new(v).unwrap()).collect();
        assert!(matches!(build_structure(&pinched, &BuildOptions::default()), Err(Error::NotManifold(_))));
    }
}
