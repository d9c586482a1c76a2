//! First homology of quotients, flat-quotient classification, and the
//! collapse-based sphere workflow.

use serde::{Deserialize, Serialize};

use super::homology::{homology, HomologyGroup};
use super::surface::{classify_surface, SurfaceClass, SurfaceKind};
use crate::complex::{Complex, Simplex};
use crate::error::{Error, Result};
use crate::group::{DegreeString, PermutationAction};
use crate::moves::{collapse_greedy, prism};
use crate::quotient::{QuotientComplex, StellarStructure};
use crate::structure::{build_structure, BuildOptions};

pub fn h1(q: &QuotientComplex) -> HomologyGroup {
    homology(q.cells(), 1)
}

/// Surface classification of the quotient of a flat structure. χ ≠ 1 is
/// never reported as a disk or a projective plane.
pub fn classify_flat_quotient(q: &QuotientComplex) -> SurfaceClass {
    let mut class = classify_surface(q.cells());
    if matches!(class.kind, SurfaceKind::Disk | SurfaceKind::ProjectivePlane) && class.chi != 1 {
        class.diagnostics.push(format!("χ = {} for a {:?}", class.chi, class.kind));
        class.kind = SurfaceKind::Other { chi: class.chi, orientable: false, boundary_count: 0 };
    }
    class
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Conclusion {
    Sphere,
    NotSphere,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollapseEvidence {
    pub collapsible: bool,
    pub generators: usize,
    pub residue: Complex,
}

impl CollapseEvidence {
    fn of(k: &Complex) -> Self {
        let residue = collapse_greedy(k);
        let collapsible = residue.len() == 1 && residue.dim() == Some(0);
        CollapseEvidence { collapsible, generators: k.len(), residue }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaSummary {
    pub edges: usize,
    pub has_circuit: bool,
    pub single_cycle: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereReport {
    pub degree: DegreeString,
    pub flat: bool,
    pub surface: Option<SurfaceClass>,
    pub gamma: Option<GammaSummary>,
    pub h1: HomologyGroup,
    pub chi: i64,
    pub quotient_collapse: CollapseEvidence,
    pub prism_collapse: Option<CollapseEvidence>,
    /// `a★∂P + P` for the prism P is a closed complex.
    pub cone_closed: Option<bool>,
    pub evidence: Vec<String>,
    pub conclusion: Conclusion,
}

/// Builds a structure for the closed complex `m` and runs the workflow.
pub fn sphere_workflow(m: &Complex, budget: usize) -> Result<SphereReport> {
    if m.is_empty() {
        return Err(Error::EmptyComplex);
    }
    if !m.is_closed() {
        return Err(Error::NotClosed);
    }
    let opts = BuildOptions { budget, manifold_budget: budget, ..BuildOptions::default() };
    let (s, _) = build_structure(m, &opts)?;
    sphere_workflow_structure(&s)
}

pub fn sphere_workflow_structure(s: &StellarStructure) -> Result<SphereReport> {
    if !s.is_closed() {
        return Err(Error::NotClosed);
    }
    let action = PermutationAction::new(s)?;
    let q = action.quotient();
    let degree = action.degree()?;
    let flat = degree.is_flat();
    let mut evidence = vec![format!("deg(S/≃) = {degree}")];

    let surface = flat.then(|| classify_flat_quotient(q));
    if let Some(c) = &surface {
        evidence.push(format!("flat quotient classified as {:?} (χ = {})", c.kind, c.chi));
    }
    let gamma = if s.manifold_dim() == 3 {
        let g = action.gamma_graph()?;
        let summary = GammaSummary { edges: g.edges.len(), has_circuit: g.has_circuit(), single_cycle: g.is_single_cycle() };
        evidence.push(format!(
            "Γ has {} edges{}",
            summary.edges,
            if summary.has_circuit { ", with a circuit" } else { ", no circuit" }
        ));
        Some(summary)
    } else {
        None
    };

    let h1 = h1(q);
    evidence.push(format!("H₁(S/≃) = {h1}"));
    let chi = q.euler_characteristic();

    let model = q.simplicial_model();
    let quotient_collapse = CollapseEvidence::of(&model);
    evidence.push(format!(
        "quotient model ({} generators) {}",
        quotient_collapse.generators,
        if quotient_collapse.collapsible { "collapses to a point".to_string() } else { format!("stops at {}", quotient_collapse.residue) }
    ));

    let (mut prism_collapse, mut cone_closed) = (None, None);
    if quotient_collapse.collapsible {
        let p = prism(&model)?;
        let ev = CollapseEvidence::of(&p);
        evidence.push(format!("prism ({} generators) {}", ev.generators, if ev.collapsible { "collapses" } else { "does not collapse greedily" }));
        let apex = p.max_label() + 1;
        let cone = Complex::simplex(Simplex::vertex(apex)).join(&p.boundary()?)?;
        let closed = (&cone + &p).is_closed();
        evidence.push(format!("a★∂P + P is {}", if closed { "closed" } else { "not closed" }));
        prism_collapse = Some(ev);
        cone_closed = Some(closed);
    }

    let chain = quotient_collapse.collapsible
        && prism_collapse.as_ref().is_some_and(|e| e.collapsible)
        && cone_closed == Some(true);
    let conclusion = if !h1.is_trivial() {
        evidence.push("nontrivial H₁: not a sphere".into());
        Conclusion::NotSphere
    } else if chain {
        evidence.push("quotient collapsible, prism a ball: sphere".into());
        Conclusion::Sphere
    } else {
        evidence.push("collapse chain incomplete".into());
        Conclusion::Undetermined
    };

    Ok(SphereReport {
        degree,
        flat,
        surface,
        gamma,
        h1,
        chi,
        quotient_collapse,
        prism_collapse,
        cone_closed,
        evidence,
        conclusion,
    })
}
