use std::collections::{BTreeMap, HashSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::cells::CellComplex;
use crate::complex::{Complex, Simplex, Vertex};
use crate::error::{Error, Result};
use crate::invariants::homology::homology_all;
use crate::invariants::surface::analyze_surface;
use crate::moves::{collapse::is_collapsible, subdivide, weld};

/// Default number of move applications a bounded search may spend.
pub const DEFAULT_BUDGET: usize = 10_000;

/// Largest link vertex count for which weld candidates are enumerated.
const WELD_SCAN_LIMIT: usize = 14;
/// Edges of maximal degree tried as subdivision moves at each search node.
const SUBDIVISION_BRANCHING: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Ball,
    Sphere,
    Unknown,
    Neither,
}

impl Verdict {
    pub fn is_ball_or_sphere(self) -> bool {
        matches!(self, Verdict::Ball | Verdict::Sphere)
    }
}

/// Decides whether `k` is a stellar ball or sphere. Exact up to dimension
/// 2; above that a bounded search which may answer `Unknown`.
pub fn recognize(k: &Complex, budget: usize) -> Result<Verdict> {
    if !k.is_uniform() {
        return Err(Error::NotUniform);
    }
    let mut left = budget;
    Ok(recognize_inner(k, &mut left))
}

fn recognize_inner(k: &Complex, budget: &mut usize) -> Verdict {
    if k.is_empty() {
        return Verdict::Neither;
    }
    let Some(d) = k.dim() else {
        // {∅}: the boundary of a point.
        return Verdict::Sphere;
    };
    if !k.is_connected() && d > 0 {
        return Verdict::Neither;
    }
    match d {
        0 => match k.len() {
            1 => Verdict::Ball,
            2 => Verdict::Sphere,
            _ => Verdict::Neither,
        },
        1 => recognize_graph(k),
        2 => recognize_surface(k),
        _ => recognize_high(k, d, budget),
    }
}

fn recognize_graph(k: &Complex) -> Verdict {
    let mut degree: BTreeMap<Vertex, usize> = BTreeMap::new();
    for e in k.generators() {
        for &v in e.vertices() {
            *degree.entry(v).or_default() += 1;
        }
    }
    let ends = degree.values().filter(|&&d| d == 1).count();
    if degree.values().any(|&d| d > 2) {
        return Verdict::Neither;
    }
    match ends {
        0 => Verdict::Sphere,
        2 => Verdict::Ball,
        _ => Verdict::Neither,
    }
}

fn recognize_surface(k: &Complex) -> Verdict {
    let r = analyze_surface(&CellComplex::from_simplicial(k));
    if !r.is_surface || !r.connected {
        return Verdict::Neither;
    }
    match (r.boundary_components, r.chi) {
        (0, 2) => Verdict::Sphere,
        (1, 1) => Verdict::Ball,
        _ => Verdict::Neither,
    }
}

fn recognize_high(k: &Complex, d: usize, budget: &mut usize) -> Verdict {
    let closed = k.is_closed();
    let mut links_known = true;
    for v in k.vertices() {
        match recognize_inner(&k.link(&Simplex::vertex(v)), budget) {
            Verdict::Sphere => {}
            Verdict::Ball if !closed => {}
            Verdict::Unknown => links_known = false,
            _ => return Verdict::Neither,
        }
    }

    let h = homology_all(&CellComplex::from_simplicial(k));
    let z = |g: &crate::invariants::homology::HomologyGroup| g.rank == 1 && g.torsion.is_empty();
    let homology_ok = z(&h[0])
        && h[1..d].iter().all(|g| g.is_trivial())
        && if closed { z(&h[d]) } else { h[d].is_trivial() };
    if !homology_ok {
        return Verdict::Neither;
    }
    if !closed {
        let b = k.boundary().expect("dimension >= 3");
        match recognize_inner(&b, budget) {
            Verdict::Sphere => {}
            Verdict::Unknown => links_known = false,
            _ => return Verdict::Neither,
        }
    }

    let found = search(k, d, closed, budget);
    match (found, links_known) {
        (true, true) if closed => Verdict::Sphere,
        (true, true) => Verdict::Ball,
        _ => Verdict::Unknown,
    }
}

fn certified(k: &Complex, d: usize, closed: bool) -> bool {
    if closed {
        if k.vertices().len() == d + 2 && k.len() == d + 2 {
            return true;
        }
        let mut punctured = k.clone();
        let first = k.generators().iter().next().expect("nonempty").clone();
        punctured.toggle(first);
        is_collapsible(&punctured)
    } else {
        k.len() == 1 || is_collapsible(k)
    }
}

/// Iterative deepening over welds, then subdivisions of maximal-degree edges.
fn search(k: &Complex, d: usize, closed: bool, budget: &mut usize) -> bool {
    let mut depth = 0;
    loop {
        let mut seen = HashSet::new();
        match dfs(k, d, closed, depth, budget, &mut seen) {
            Some(found) => return found,
            None if *budget == 0 => return false,
            None => depth += 1,
        }
    }
}

/// `Some(true)` on a certificate, `Some(false)` when the budget ran out,
/// `None` when the depth limit was reached without either.
fn dfs(k: &Complex, d: usize, closed: bool, depth: usize, budget: &mut usize, seen: &mut HashSet<Complex>) -> Option<bool> {
    if certified(k, d, closed) {
        return Some(true);
    }
    if depth == 0 {
        return None;
    }
    for child in children(k) {
        if *budget == 0 {
            return Some(false);
        }
        *budget -= 1;
        if !seen.insert(child.clone()) {
            continue;
        }
        if let Some(r) = dfs(&child, d, closed, depth - 1, budget, seen) {
            return Some(r);
        }
    }
    None
}

fn children(k: &Complex) -> Vec<Complex> {
    let mut out = Vec::new();
    for v in k.vertices() {
        let av = Simplex::vertex(v);
        let lk = k.link(&av);
        let w: Vec<Vertex> = lk.vertices().into_iter().collect();
        if w.len() > WELD_SCAN_LIMIT {
            continue;
        }
        let top = lk.dim().map_or(0, |x| x + 1);
        for size in 2..=(top + 1).min(w.len()) {
            for a in w.iter().copied().combinations(size) {
                let a = Simplex::from_sorted(a);
                let factors = lk
                    .generators()
                    .iter()
                    .all(|h| h.vertices().iter().filter(|&&x| a.contains(x)).count() == size - 1);
                if !factors {
                    continue;
                }
                if let Ok(c) = weld(k, &a, v) {
                    out.push(c);
                }
            }
        }
    }
    let mut degree: BTreeMap<Simplex, usize> = BTreeMap::new();
    for g in k.generators() {
        for e in g.faces_of_dim(1) {
            *degree.entry(e).or_default() += 1;
        }
    }
    let edges = degree.into_iter().sorted_by(|(e1, d1), (e2, d2)| d2.cmp(d1).then(e1.cmp(e2)));
    let fresh = k.max_label() + 1;
    for (e, _) in edges.take(SUBDIVISION_BRANCHING) {
        if let Ok(c) = subdivide(k, &e, fresh) {
            out.push(c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{standard_ball, standard_sphere};

    fn cx(gens: &[&[Vertex]]) -> Complex {
        gens.iter().map(|g| Simplex::new(g.to_vec()).unwrap()).collect()
    }

    #[test]
    fn low_dimensions() {
        assert_eq!(recognize(&cx(&[&[1]]), 10).unwrap(), Verdict::Ball);
        assert_eq!(recognize(&cx(&[&[1], &[2]]), 10).unwrap(), Verdict::Sphere);
        assert_eq!(recognize(&cx(&[&[1, 2], &[2, 3]]), 10).unwrap(), Verdict::Ball);
        assert_eq!(recognize(&standard_sphere(1), 10).unwrap(), Verdict::Sphere);
        assert_eq!(recognize(&cx(&[&[1, 2], &[3, 4]]), 10).unwrap(), Verdict::Neither);
        assert_eq!(recognize(&standard_sphere(2), 10).unwrap(), Verdict::Sphere);
        assert_eq!(recognize(&standard_ball(2), 10).unwrap(), Verdict::Ball);
    }

    #[test]
    fn standard_three_dimensional_objects() {
        assert_eq!(recognize(&standard_sphere(3), 100).unwrap(), Verdict::Sphere);
        assert_eq!(recognize(&standard_ball(3), 100).unwrap(), Verdict::Ball);
    }

    #[test]
    fn non_uniform_is_an_error() {
        assert_eq!(recognize(&cx(&[&[1, 2], &[2, 3, 4]]), 10), Err(Error::NotUniform));
    }

    #[test]
    fn torus_is_neither() {
        // 7-vertex torus: triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7.
        let t: Complex = (0..7u32)
            .flat_map(|i| {
                [[0, 1, 3], [0, 2, 3]].map(|o| Simplex::new(o.iter().map(|x| (i + x) % 7 + 1).collect()).unwrap())
            })
            .collect();
        assert_eq!(t.len(), 14);
        assert_eq!(t.euler_characteristic(), 0);
        assert_eq!(recognize(&t, 10).unwrap(), Verdict::Neither);
    }
}
