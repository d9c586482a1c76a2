//! Stellar subdivision, weld, relabeling, and what is built from them.

mod collapse;
mod prism;
mod recognize;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::complex::{Complex, Simplex, Vertex};
use crate::error::{Error, Result};

pub use collapse::{collapse_greedy, is_collapsible};
pub use prism::{prism, prism_via_subdivision, prism_offset};
pub use recognize::{recognize, Verdict, DEFAULT_BUDGET};

/// `(A a)K = a★∂A★lk(A,K) + Q(A,K)`.
pub fn subdivide(k: &Complex, a_simplex: &Simplex, a: Vertex) -> Result<Complex> {
    if a_simplex.is_empty() {
        return Err(Error::InvalidSimplex("cannot subdivide the empty simplex".into()));
    }
    if a == 0 {
        return Err(Error::InvalidSimplex("vertex labels must be positive".into()));
    }
    let mut out = Complex::new();
    let mut found = false;
    for g in k.generators() {
        if g.contains(a) {
            return Err(Error::VertexNotFresh(a));
        }
        if g.has_face(a_simplex) {
            found = true;
            let rest = g.minus(a_simplex);
            for f in a_simplex.facets() {
                let s = f.join(&rest).expect("disjoint").with_vertex(a);
                out.toggle(s);
            }
        } else {
            out.toggle(g.clone());
        }
    }
    if !found {
        return Err(Error::NotAFace(a_simplex.clone()));
    }
    Ok(out)
}

/// `(A a)⁻¹K = A★B + Q(a,K)` where `lk(a,K) = ∂A★B`.
pub fn weld(k: &Complex, a_simplex: &Simplex, a: Vertex) -> Result<Complex> {
    if a_simplex.is_empty() {
        return Err(Error::InvalidSimplex("cannot weld the empty simplex".into()));
    }
    let av = Simplex::vertex(a);
    if !k.has_face(&av) {
        return Err(Error::UnknownVertex(a));
    }
    if a_simplex.contains(a) {
        return Err(Error::WeldPrecondition(format!("{a} is a vertex of {a_simplex}")));
    }
    if k.has_face(a_simplex) {
        return Err(Error::WeldPrecondition(format!("{a_simplex} is already a simplex of the complex")));
    }
    let lk = k.link(&av);
    let b: BTreeSet<Simplex> = lk.generators().iter().map(|h| h.minus(a_simplex)).collect();
    let mut expected = Complex::new();
    for f in a_simplex.facets() {
        for rest in &b {
            match f.join(rest) {
                Some(s) => expected.toggle(s),
                None => return Err(not_factored(a, a_simplex)),
            }
        }
    }
    if expected != lk {
        return Err(not_factored(a, a_simplex));
    }
    let mut out = k.residual(&av);
    for rest in &b {
        out.toggle(a_simplex.join(rest).expect("B avoids A"));
    }
    Ok(out)
}

fn not_factored(a: Vertex, a_simplex: &Simplex) -> Error {
    Error::WeldPrecondition(format!("lk({a}) does not factor as ∂{a_simplex}★B"))
}

/// Maps vertices through `map` (identity off its keys).
pub fn relabel(k: &Complex, map: &BTreeMap<Vertex, Vertex>) -> Result<Complex> {
    let verts = k.vertices();
    let image = |v: Vertex| map.get(&v).copied().unwrap_or(v);
    let images: BTreeSet<Vertex> = verts.iter().map(|&v| image(v)).collect();
    if images.len() != verts.len() {
        return Err(Error::NonInjectiveRelabel);
    }
    if images.contains(&0) {
        return Err(Error::InvalidSimplex("vertex labels must be positive".into()));
    }
    Ok(k.map_vertices(image))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Move {
    Subdivide { simplex: Simplex, vertex: Vertex },
    Weld { simplex: Simplex, vertex: Vertex },
    Relabel {
        #[serde(deserialize_with = "string_keyed")]
        map: BTreeMap<Vertex, Vertex>,
    },
}

// Internally tagged enums buffer their content, which loses serde_json's
// integer-key coercion; parse the keys explicitly.
fn string_keyed<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<Vertex, Vertex>, D::Error> {
    let raw = BTreeMap::<String, Vertex>::deserialize(d)?;
    raw.into_iter()
        .map(|(k, v)| k.parse::<Vertex>().map(|k| (k, v)).map_err(serde::de::Error::custom))
        .collect()
}

impl Move {
    pub fn apply(&self, k: &Complex) -> Result<Complex> {
        match self {
            Move::Subdivide { simplex, vertex } => subdivide(k, simplex, *vertex),
            Move::Weld { simplex, vertex } => weld(k, simplex, *vertex),
            Move::Relabel { map } => relabel(k, map),
        }
    }

    pub fn inverse(&self) -> Move {
        match self {
            Move::Subdivide { simplex, vertex } => Move::Weld { simplex: simplex.clone(), vertex: *vertex },
            Move::Weld { simplex, vertex } => Move::Subdivide { simplex: simplex.clone(), vertex: *vertex },
            Move::Relabel { map } => Move::Relabel { map: map.iter().map(|(&k, &v)| (v, k)).collect() },
        }
    }
}

/// JSON form is a bare array of moves.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MoveSequence {
    pub moves: Vec<Move>,
}

impl MoveSequence {
    pub fn apply(&self, k: &Complex) -> Result<Complex> {
        self.moves.iter().try_fold(k.clone(), |acc, m| m.apply(&acc))
    }

    /// Reversed sequence of inverted moves.
    pub fn inverse(&self) -> MoveSequence {
        MoveSequence { moves: self.moves.iter().rev().map(Move::inverse).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::standard_sphere;

    fn cx(gens: &[&[Vertex]]) -> Complex {
        gens.iter().map(|g| Simplex::new(g.to_vec()).unwrap()).collect()
    }

    #[test]
    fn subdivide_simplex_and_edge() {
        let k = cx(&[&[1, 2, 3]]);
        let s = Simplex::new(vec![1, 2, 3]).unwrap();
        assert_eq!(subdivide(&k, &s, 4).unwrap(), cx(&[&[1, 2, 4], &[1, 3, 4], &[2, 3, 4]]));
        let circle = cx(&[&[1, 2, 3]]).boundary().unwrap();
        let e = Simplex::new(vec![1, 2]).unwrap();
        assert_eq!(subdivide(&circle, &e, 4).unwrap(), cx(&[&[1, 4], &[2, 4], &[1, 3], &[2, 3]]));
    }

    #[test]
    fn subdivide_errors() {
        let k = cx(&[&[1, 2, 3]]);
        assert_eq!(subdivide(&k, &Simplex::vertex(1), 2), Err(Error::VertexNotFresh(2)));
        let e = Simplex::new(vec![1, 5]).unwrap();
        assert_eq!(subdivide(&k, &e, 9), Err(Error::NotAFace(e)));
    }

    #[test]
    fn subdividing_a_vertex_relabels_it() {
        let s = standard_sphere(2);
        let out = subdivide(&s, &Simplex::vertex(1), 9).unwrap();
        assert_eq!(out, relabel(&s, &BTreeMap::from([(1, 9)])).unwrap());
    }

    #[test]
    fn weld_inverts_subdivide() {
        let k = cx(&[&[1, 2, 4], &[1, 3, 4], &[2, 3, 4]]);
        let s = Simplex::new(vec![1, 2, 3]).unwrap();
        assert_eq!(weld(&k, &s, 4).unwrap(), cx(&[&[1, 2, 3]]));
    }

    #[test]
    fn weld_rejects_unfactored_link() {
        // lk(5) is the two disjoint edges (1 2) and (3 4).
        let k = cx(&[&[1, 2, 5], &[3, 4, 5]]);
        let e = Simplex::new(vec![1, 3]).unwrap();
        assert!(matches!(weld(&k, &e, 5), Err(Error::WeldPrecondition(_))));
        let e = Simplex::new(vec![1, 2]).unwrap();
        assert!(matches!(weld(&k, &e, 5), Err(Error::WeldPrecondition(_))));
    }

    #[test]
    fn weld_rejects_existing_simplex() {
        let k = cx(&[&[1, 2, 4], &[1, 3, 4], &[2, 3, 4], &[1, 2, 3]]);
        let s = Simplex::new(vec![1, 2, 3]).unwrap();
        assert!(matches!(weld(&k, &s, 4), Err(Error::WeldPrecondition(_))));
    }

    #[test]
    fn weld_with_empty_b() {
        // lk(4) = ∂(1 2 3) exactly: B = {∅}.
        let k = cx(&[&[1, 2, 4], &[1, 3, 4], &[2, 3, 4]]);
        let s = Simplex::new(vec![1, 2, 3]).unwrap();
        assert_eq!(weld(&k, &s, 4).unwrap().len(), 1);
    }

    #[test]
    fn relabels() {
        let k = cx(&[&[1, 2, 3]]);
        assert_eq!(relabel(&k, &BTreeMap::from([(1, 2), (2, 1)])).unwrap(), k);
        let shifted: BTreeMap<_, _> = (1..=4).map(|i| (i, i + 10)).collect();
        let s = relabel(&standard_sphere(2), &shifted).unwrap();
        assert_eq!(s, cx(&[&[11, 12, 13], &[11, 12, 14], &[11, 13, 14], &[12, 13, 14]]));
        assert_eq!(relabel(&k, &BTreeMap::from([(1, 2)])), Err(Error::NonInjectiveRelabel));
    }

    #[test]
    fn move_json_format() {
        let json = r#"[{"op":"subdivide","simplex":[1,2],"vertex":9},{"op":"weld","simplex":[1,2],"vertex":9},{"op":"relabel","map":{"1":2,"2":1}}]"#;
        let seq: MoveSequence = serde_json::from_str(json).unwrap();
        assert_eq!(seq.moves.len(), 3);
        assert_eq!(serde_json::to_string(&seq).unwrap(), json);
        let k = standard_sphere(2);
        assert_eq!(seq.apply(&k).unwrap(), relabel(&k, &BTreeMap::from([(1, 2), (2, 1)])).unwrap());
        assert_eq!(seq.inverse().apply(&seq.apply(&k).unwrap()).unwrap(), k);
    }
}
