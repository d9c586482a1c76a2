use std::collections::VecDeque;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::cells::CellComplex;

/// Classification outcome for a 2-dimensional cell complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SurfaceKind {
    Disk,
    ProjectivePlane,
    Sphere,
    Other { chi: i64, orientable: bool, boundary_count: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceClass {
    #[serde(flatten)]
    pub kind: SurfaceKind,
    pub chi: i64,
    pub diagnostics: Vec<String>,
}

/// Raw surface checks on a 2-dimensional cell complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceReport {
    pub is_surface: bool,
    pub connected: bool,
    pub chi: i64,
    pub orientable: bool,
    pub boundary_components: usize,
    pub diagnostics: Vec<String>,
}

impl SurfaceReport {
    pub fn closed(&self) -> bool {
        self.boundary_components == 0
    }
}

pub fn analyze_surface(cc: &CellComplex) -> SurfaceReport {
    let mut diagnostics = Vec::new();
    let chi = cc.euler_characteristic();
    let (nv, ne) = (cc.count(0), cc.count(1));
    let tris = cc.cells(2);
    if cc.dim() != Some(2) {
        diagnostics.push(format!("dimension is {:?}, not 2", cc.dim()));
    }
    if cc.dim().is_some_and(|d| d > 2) {
        return SurfaceReport { is_surface: false, connected: false, chi, orientable: false, boundary_components: 0, diagnostics };
    }

    let mut sides: Vec<Vec<(usize, usize)>> = vec![Vec::new(); ne];
    for (t, cell) in tris.iter().enumerate() {
        for (i, &e) in cell.faces.iter().enumerate() {
            sides[e].push((t, i));
        }
    }
    for (e, s) in sides.iter().enumerate() {
        match s.len() {
            1 | 2 => {}
            0 => diagnostics.push(format!("edge {e} lies in no 2-cell")),
            n => diagnostics.push(format!("edge {e} lies in {n} sides of 2-cells")),
        }
    }
    for (e, cell) in cc.cells(1).iter().enumerate() {
        if cell.vertices[0] == cell.vertices[1] {
            diagnostics.push(format!("edge {e} is a loop"));
        }
    }

    for v in 0..nv {
        let nodes: Vec<usize> = (0..ne).filter(|&e| cc.cells(1)[e].vertices.contains(&v)).collect();
        if nodes.is_empty() {
            diagnostics.push(format!("vertex {v} has no incident edge"));
            continue;
        }
        let pos = |e: usize| nodes.binary_search(&e).expect("edge at v");
        let mut degree = vec![0usize; nodes.len()];
        let mut uf = UnionFind::<usize>::new(nodes.len());
        let mut arcs = 0;
        for cell in tris {
            for (i, &corner) in cell.vertices.iter().enumerate() {
                if corner != v {
                    continue;
                }
                let ends: Vec<usize> = (0..3).filter(|&j| j != i).map(|j| pos(cell.faces[j])).collect();
                degree[ends[0]] += 1;
                degree[ends[1]] += 1;
                uf.union(ends[0], ends[1]);
                arcs += 1;
            }
        }
        let connected = (1..nodes.len()).all(|i| uf.equiv(0, i));
        let bounded = degree.iter().all(|&d| (1..=2).contains(&d));
        let shape_ok = arcs == nodes.len() || arcs + 1 == nodes.len();
        if !(connected && bounded && shape_ok) {
            diagnostics.push(format!("link of vertex {v} is neither an arc nor a circle"));
        }
    }

    let mut boundary_uf = UnionFind::<usize>::new(nv);
    let mut on_boundary = vec![false; nv];
    for (e, s) in sides.iter().enumerate() {
        if s.len() == 1 {
            let vs = &cc.cells(1)[e].vertices;
            boundary_uf.union(vs[0], vs[1]);
            on_boundary[vs[0]] = true;
            on_boundary[vs[1]] = true;
        }
    }
    let boundary_components = (0..nv).filter(|&v| on_boundary[v] && boundary_uf.find(v) == v).count();

    let mut all_uf = UnionFind::<usize>::new(nv);
    for cell in cc.cells(1) {
        all_uf.union(cell.vertices[0], cell.vertices[1]);
    }
    let connected = nv > 0 && (1..nv).all(|v| all_uf.equiv(0, v));

    let orientable = orientable(tris.len(), &sides);
    SurfaceReport {
        is_surface: diagnostics.is_empty(),
        connected,
        chi,
        orientable,
        boundary_components,
        diagnostics,
    }
}

/// Coherent orientation search: across an edge with sides `(t₁,i₁)`, `(t₂,i₂)`
/// we need `(-1)^{i₁} o(t₁) = -(-1)^{i₂} o(t₂)`.
fn orientable(ntris: usize, sides: &[Vec<(usize, usize)>]) -> bool {
    let sign = |i: usize| if i % 2 == 0 { 1i8 } else { -1 };
    let mut adj: Vec<Vec<(usize, i8)>> = vec![Vec::new(); ntris];
    for s in sides.iter().filter(|s| s.len() == 2) {
        let ((t1, i1), (t2, i2)) = (s[0], s[1]);
        // o(t2) = rel · o(t1)
        let rel = -sign(i1) * sign(i2);
        adj[t1].push((t2, rel));
        adj[t2].push((t1, rel));
    }
    let mut o = vec![0i8; ntris];
    for start in 0..ntris {
        if o[start] != 0 {
            continue;
        }
        o[start] = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(t) = queue.pop_front() {
            for &(u, rel) in &adj[t] {
                let want = rel * o[t];
                if o[u] == 0 {
                    o[u] = want;
                    queue.push_back(u);
                } else if o[u] != want {
                    return false;
                }
            }
        }
    }
    true
}

/// Disk, projective plane, sphere, or `Other` with diagnostics.
pub fn classify_surface(cc: &CellComplex) -> SurfaceClass {
    let r = analyze_surface(cc);
    let other = SurfaceKind::Other { chi: r.chi, orientable: r.orientable, boundary_count: r.boundary_components };
    let mut diagnostics = r.diagnostics.clone();
    if !r.connected {
        diagnostics.push("not connected".into());
    }
    let kind = if !r.is_surface || !r.connected {
        other
    } else {
        match (r.boundary_components, r.chi, r.orientable) {
            (0, 2, true) => SurfaceKind::Sphere,
            (0, 1, false) => SurfaceKind::ProjectivePlane,
            (1, 1, true) => SurfaceKind::Disk,
            _ => other,
        }
    };
    SurfaceClass { kind, chi: r.chi, diagnostics }
}
