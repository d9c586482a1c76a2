use std::collections::{BTreeMap, BTreeSet};

use crate::complex::{Complex, Simplex, Vertex};

struct Maximal {
    gens: BTreeSet<Simplex>,
    by_vertex: BTreeMap<Vertex, BTreeSet<Simplex>>,
}

impl Maximal {
    fn new(k: &Complex) -> Self {
        let mut m = Maximal { gens: BTreeSet::new(), by_vertex: BTreeMap::new() };
        let all: Vec<&Simplex> = k.generators().iter().collect();
        for g in &all {
            let dominated = all.iter().any(|h| h.len() > g.len() && h.has_face(g));
            if !dominated {
                m.insert((*g).clone());
            }
        }
        m
    }

    fn insert(&mut self, g: Simplex) {
        for &v in g.vertices() {
            self.by_vertex.entry(v).or_default().insert(g.clone());
        }
        self.gens.insert(g);
    }

    fn remove(&mut self, g: &Simplex) {
        for v in g.vertices() {
            if let Some(s) = self.by_vertex.get_mut(v) {
                s.remove(g);
            }
        }
        self.gens.remove(g);
    }

    fn containing<'a>(&'a self, s: &'a Simplex) -> impl Iterator<Item = &'a Simplex> + 'a {
        let first = s.vertices()[0];
        self.by_vertex.get(&first).into_iter().flatten().filter(move |g| g.has_face(s))
    }

    /// Smallest codimension-1 face lying in exactly one generator.
    fn smallest_free_face(&self) -> Option<(Simplex, Simplex)> {
        let mut best: Option<(Simplex, Simplex)> = None;
        for tau in self.gens.iter().filter(|g| g.len() >= 2) {
            for sigma in tau.facets() {
                if best.as_ref().is_some_and(|(b, _)| *b <= sigma) {
                    continue;
                }
                if self.containing(&sigma).nth(1).is_none() {
                    best = Some((sigma, tau.clone()));
                }
            }
        }
        best
    }
}

/// Removes free faces (with their unique coface) until none is left,
/// always taking the lexicographically smallest free face. Returns the
/// residue as its maximal simplexes.
pub fn collapse_greedy(k: &Complex) -> Complex {
    let mut m = Maximal::new(k);
    while let Some((sigma, tau)) = m.smallest_free_face() {
        m.remove(&tau);
        for f in tau.facets().filter(|f| *f != sigma) {
            if m.containing(&f).next().is_none() {
                m.insert(f);
            }
        }
    }
    Complex::from_generators(m.gens)
}

/// The greedy residue is a single vertex.
pub fn is_collapsible(k: &Complex) -> bool {
    let r = collapse_greedy(k);
    r.len() == 1 && r.generators().iter().all(|g| g.len() == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::standard_sphere;

    fn cx(gens: &[&[Vertex]]) -> Complex {
        gens.iter().map(|g| Simplex::new(g.to_vec()).unwrap()).collect()
    }

    #[test]
    fn simplex_collapses_to_vertex() {
        assert_eq!(collapse_greedy(&cx(&[&[1, 2, 3]])), cx(&[&[3]]));
    }

    #[test]
    fn closed_sphere_has_no_free_face() {
        let s = standard_sphere(2);
        assert_eq!(collapse_greedy(&s), s);
        assert!(!is_collapsible(&s));
    }

    #[test]
    fn cone_disk_collapses() {
        let d = cx(&[&[1, 2, 4], &[1, 3, 4], &[2, 3, 4]]);
        assert!(is_collapsible(&d));
    }

    #[test]
    fn dominated_generators_are_dropped() {
        assert_eq!(collapse_greedy(&cx(&[&[1, 2], &[1, 2, 3]])), cx(&[&[3]]));
    }
}
