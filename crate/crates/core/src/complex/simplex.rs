use std::fmt;

use itertools::Itertools;
use serde::de::{self, SeqAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Vertex label. Labels are positive; 0 is never a valid vertex.
pub type Vertex = u32;

/// A simplex, stored as its strictly increasing vertex sequence.
///
/// The empty simplex exists only as the join identity (the link of a
/// generator is `{∅}`); it is never produced by the parser.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Simplex(Vec<Vertex>);

impl Simplex {
    /// Builds a simplex from vertices in any order. Rejects duplicates,
    /// zero labels and the empty list.
    pub fn new(mut vertices: Vec<Vertex>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidSimplex("simplex has no vertices".into()));
        }
        if vertices.contains(&0) {
            return Err(Error::InvalidSimplex("vertex labels must be positive".into()));
        }
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSimplex(format!("repeated vertex in {vertices:?}")));
        }
        Ok(Simplex(vertices))
    }

    pub fn empty() -> Self {
        Simplex(Vec::new())
    }

    pub fn vertex(v: Vertex) -> Self {
        Simplex(vec![v])
    }

    /// `vertices` must already be strictly increasing.
    pub(crate) fn from_sorted(vertices: Vec<Vertex>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]), "{vertices:?}");
        Simplex(vertices)
    }

    pub(crate) fn from_iter_unsorted(it: impl IntoIterator<Item = Vertex>) -> Self {
        let mut v: Vec<Vertex> = it.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Simplex(v)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Dimension `len - 1`; `None` for the empty simplex.
    pub fn dim(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// True if every vertex of `face` is a vertex of `self`.
    pub fn has_face(&self, face: &Simplex) -> bool {
        let mut it = self.0.iter();
        face.0.iter().all(|v| it.by_ref().any(|w| w == v))
    }

    pub fn is_disjoint(&self, other: &Simplex) -> bool {
        !self.0.iter().any(|v| other.contains(*v))
    }

    /// Union of two vertex-disjoint simplexes.
    pub fn join(&self, other: &Simplex) -> Option<Simplex> {
        if !self.is_disjoint(other) {
            return None;
        }
        let v = self.0.iter().copied().merge(other.0.iter().copied()).collect();
        Some(Simplex(v))
    }

    pub fn minus(&self, other: &Simplex) -> Simplex {
        Simplex(self.0.iter().copied().filter(|v| !other.contains(*v)).collect())
    }

    pub fn with_vertex(&self, v: Vertex) -> Simplex {
        Simplex::from_iter_unsorted(self.0.iter().copied().chain([v]))
    }

    pub fn without_vertex(&self, v: Vertex) -> Simplex {
        Simplex(self.0.iter().copied().filter(|&w| w != v).collect())
    }

    /// Codimension-1 faces, the i-th omitting the i-th vertex. The facets of
    /// a vertex are `[∅]`.
    pub fn facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        (0..self.0.len()).map(move |i| {
            let mut v = self.0.clone();
            v.remove(i);
            Simplex(v)
        })
    }

    /// All faces with `k + 1` vertices.
    pub fn faces_of_dim(&self, k: usize) -> impl Iterator<Item = Simplex> + '_ {
        self.0.iter().copied().combinations(k + 1).map(Simplex)
    }

    pub fn map(&self, f: impl Fn(Vertex) -> Vertex) -> Simplex {
        Simplex::from_iter_unsorted(self.0.iter().map(|&v| f(v)))
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(" "))
    }
}

impl Serialize for Simplex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Simplex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct SimplexVisitor;

        impl<'de> Visitor<'de> for SimplexVisitor {
            type Value = Simplex;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a non-empty array of strictly increasing positive integers")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Simplex, A::Error> {
                let mut v: Vec<Vertex> = Vec::new();
                while let Some(x) = seq.next_element::<Vertex>()? {
                    if x == 0 {
                        return Err(de::Error::custom("vertex labels must be positive"));
                    }
                    if let Some(&last) = v.last() {
                        if x == last {
                            return Err(de::Error::custom(format!("duplicated vertex {x}")));
                        }
                        if x < last {
                            return Err(de::Error::custom(format!(
                                "vertices not increasing: {x} after {last}"
                            )));
                        }
                    }
                    v.push(x);
                }
                if v.is_empty() {
                    return Err(de::Error::custom("simplex has no vertices"));
                }
                Ok(Simplex(v))
            }
        }

        d.deserialize_seq(SimplexVisitor)
    }
}

/// Shorthand for tests and fixtures: `simplex![1, 2, 3]`.
#[macro_export]
macro_rules! simplex {
    ($($v:expr),* $(,)?) => {
        $crate::complex::Simplex::new(vec![$($v),*]).expect("valid simplex literal")
    };
}
