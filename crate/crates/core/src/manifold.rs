//! Stellar-manifold verification: every vertex link is a ball or a sphere.

use serde::{Deserialize, Serialize};

use crate::complex::{Complex, Simplex, Vertex};
use crate::error::{Error, Result};
use crate::moves::{recognize, Verdict};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadVertex {
    pub vertex: Vertex,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifoldReport {
    pub is_manifold: bool,
    /// Some link could not be decided within the budget.
    pub undetermined: bool,
    pub dimension: usize,
    pub closed: bool,
    pub bad_vertices: Vec<BadVertex>,
}

pub fn check_manifold(m: &Complex, budget: usize) -> Result<ManifoldReport> {
    if m.is_empty() {
        return Err(Error::EmptyComplex);
    }
    if !m.is_uniform() {
        return Err(Error::NotUniform);
    }
    let dimension = m.dim().expect("nonempty");
    let mut bad_vertices = Vec::new();
    for v in m.vertices() {
        let lk = m.link(&Simplex::vertex(v));
        let verdict = recognize(&lk, budget)?;
        if !verdict.is_ball_or_sphere() {
            bad_vertices.push(BadVertex { vertex: v, verdict });
        }
    }
    let undetermined = bad_vertices.iter().any(|b| b.verdict == Verdict::Unknown);
    Ok(ManifoldReport {
        is_manifold: bad_vertices.is_empty(),
        undetermined,
        dimension,
        closed: m.is_closed(),
        bad_vertices,
    })
}

/// `check_manifold(Q(i, M))`.
pub fn residual_manifold_check(m: &Complex, i: Vertex, budget: usize) -> Result<ManifoldReport> {
    check_manifold(&m.residual(&Simplex::vertex(i)), budget)
}
