mod common;

use std::collections::BTreeSet;

use common::{built, coprime_pairs, cx, zoo};
use stellar_core::complex::standard_sphere;
use stellar_core::group::{DegreeString, PermutationAction};
use stellar_core::invariants::homology::{homology, HomologyGroup};
use stellar_core::invariants::workflow::{classify_flat_quotient, h1};
use stellar_core::invariants::surface::SurfaceKind;
use stellar_core::lens::{lens_structure, LensParams};
use stellar_core::moves::collapse_greedy;
use stellar_core::quotient::{quotient_complex, RegularEquivalence, StellarStructure};

/// Orders of `p₀·p_α` on the `2q`-gon bipyramid, computed from index
/// arithmetic alone: generator `(h, k)` is the triangle over equator arc
/// `k` in hemisphere `h` (0 inner, 1 outer), `p₀(0, k) = (1, k + 2p)`.
fn lens_orders_oracle(q: usize, p: usize) -> BTreeSet<u64> {
    let n = 2 * q;
    let idx = |h: usize, k: usize| h * n + k % n;
    let mut p0 = vec![0; 2 * n];
    for k in 0..n {
        p0[idx(0, k)] = idx(1, k + 2 * p);
        p0[idx(1, k + 2 * p)] = idx(0, k);
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    // Equator arc k is shared by (0, k) and (1, k); arcs k and k + 2p are
    // glued, so the arc classes are the parities.
    for parity in 0..2 {
        let mut perm: Vec<usize> = (0..2 * n).collect();
        for k in (parity..n).step_by(2) {
            perm.swap(idx(0, k), idx(1, k));
        }
        classes.push(perm);
    }
    // Spoke (0, z_j) lies in (0, j-1), (0, j); its partner (∞, z_{j+2p}) in
    // (1, j+2p-1), (1, j+2p).
    for j in 0..n {
        let mut perm: Vec<usize> = (0..2 * n).collect();
        perm.swap(idx(0, j + n - 1), idx(0, j));
        perm.swap(idx(1, j + 2 * p + n - 1), idx(1, j + 2 * p));
        classes.push(perm);
    }
    classes
        .iter()
        .map(|pa| {
            let composite: Vec<usize> = (0..2 * n).map(|i| p0[pa[i]]).collect();
            let mut seen = vec![false; 2 * n];
            let mut order = 1u64;
            for s in 0..2 * n {
                let mut len = 0u64;
                let mut i = s;
                while !seen[i] {
                    seen[i] = true;
                    i = composite[i];
                    len += 1;
                }
                if len > 0 {
                    order = order / gcd(order, len) * len;
                }
            }
            order
        })
        .collect()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn lens_degree_matches_index_oracle() {
    for q in 2..=9u32 {
        for p in coprime_pairs(q) {
            let s = lens_structure(LensParams::new(q, p).unwrap()).unwrap();
            let act = PermutationAction::new(&s).unwrap();
            let oracle: Vec<u64> = lens_orders_oracle(q as usize, p as usize).into_iter().rev().collect();
            assert_eq!(act.degree().unwrap().0, oracle, "lens({q},{p})");
            assert_eq!(act.face_classes().len(), 2 + 2 * q as usize);
        }
    }
}

#[test]
fn frozen_lens_degrees() {
    let frozen: [(u32, &[u64]); 8] =
        [(2, &[2]), (3, &[6, 2]), (4, &[4, 2]), (5, &[10, 2]), (6, &[6, 2]), (7, &[14, 2]), (8, &[8, 2]), (9, &[18, 2])];
    for (q, deg) in frozen {
        for p in coprime_pairs(q) {
            let s = lens_structure(LensParams::new(q, p).unwrap()).unwrap();
            assert_eq!(PermutationAction::new(&s).unwrap().degree().unwrap(), DegreeString(deg.to_vec()));
        }
    }
}

/// Rank of a 0/1 matrix over GF(2), rows packed as `u128` bit sets.
fn gf2_rank(m: &[Vec<i64>]) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut rows: Vec<Vec<u128>> = m
        .iter()
        .map(|r| {
            let mut bits = vec![0u128; cols / 128 + 1];
            for (j, &x) in r.iter().enumerate() {
                if x.rem_euclid(2) == 1 {
                    bits[j / 128] |= 1 << (j % 128);
                }
            }
            bits
        })
        .collect();
    let mut rank = 0;
    for j in 0..cols {
        let (w, b) = (j / 128, 1u128 << (j % 128));
        let Some(pivot) = (rank..rows.len()).find(|&i| rows[i][w] & b != 0) else { continue };
        rows.swap(rank, pivot);
        let pr = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[w] & b != 0 {
                for (x, y) in row.iter_mut().zip(&pr) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[test]
fn integer_homology_agrees_with_gf2_ranks() {
    for (name, s) in zoo() {
        let q = quotient_complex(&s).unwrap();
        let cc = q.cells();
        let d = q.dim();
        let rank = |k: usize| if k == 0 || k > d { 0 } else { gf2_rank(&cc.boundary_matrix(k)) };
        for k in 0..=d {
            let betti2 = cc.count(k) - rank(k) - rank(k + 1);
            // Universal coefficients: H_k ⊗ Z₂ plus the 2-torsion of H_{k-1}.
            let tor = if k == 0 { 0 } else { homology(cc, k - 1).torsion.iter().filter(|t| *t % 2 == 0).count() };
            assert_eq!(homology(cc, k).mod2_dimension() + tor, betti2, "{name}, H_{k}");
        }
    }
}

#[test]
fn lens_homology_cannot_tell_p_apart() {
    let a = h1(&quotient_complex(&lens_structure(LensParams::new(5, 1).unwrap()).unwrap()).unwrap());
    let b = h1(&quotient_complex(&lens_structure(LensParams::new(5, 2).unwrap()).unwrap()).unwrap());
    assert_eq!(a, HomologyGroup { rank: 0, torsion: vec![5] });
    assert_eq!(a, b);
}

#[test]
fn greedy_collapse_order_on_cone_disk() {
    // Free edges (1 2), (1 3), (2 3); removing (1 2) with (1 2 4) leaves
    // (1 3 4), (2 3 4) and the edges (1 4), (2 4); then (1 3) clears
    // (1 3 4), leaving (1 4), (2 3 4); (1 4) goes with vertex 1; (2 3) with
    // (2 3 4) leaves (2 4), (3 4); (2 4) leaves (3 4); finally (3) leaves (4).
    let disk = cx(&[&[1, 2, 4], &[1, 3, 4], &[2, 3, 4]]);
    assert_eq!(collapse_greedy(&disk), cx(&[&[4]]));
    assert_eq!(collapse_greedy(&standard_sphere(2)), standard_sphere(2));
}

#[test]
fn paired_triangles_give_three_edge_classes() {
    // Bipyramid over the square 3 4 5 6 with poles 1, 2; opposite equator
    // vertices never share a triangle.
    let sphere = stellar_core::lens::bipyramid(4);
    let eq = RegularEquivalence {
        vertex_classes: vec![vec![1, 2], vec![3, 5], vec![4, 6]],
        generator_pairs: vec![(
            stellar_core::Simplex::new(vec![1, 3, 4]).unwrap(),
            stellar_core::Simplex::new(vec![2, 5, 6]).unwrap(),
        )],
    };
    let s = StellarStructure::new(7, sphere, eq);
    let q = quotient_complex(&s).unwrap();
    let merged: Vec<&[stellar_core::Simplex]> =
        (0..q.cells().count(1)).map(|i| q.members(1, i)).filter(|m| m.len() > 1).collect();
    assert_eq!(merged.len(), 3);
    assert!(merged.iter().all(|m| m.len() == 2));
}

#[test]
fn boundary_of_four_simplex_structure() {
    let s = built(&standard_sphere(3));
    let act = PermutationAction::new(&s).unwrap();
    assert_eq!(act.degree().unwrap(), DegreeString(vec![6, 2]));
    let g = act.gamma_graph().unwrap();
    assert_eq!(g.edges.len(), 4);
    assert!(!g.has_circuit());
    let hub = g.edges[0].ends.1;
    assert!(g.edges.iter().all(|e| e.ends.0 == hub || e.ends.1 == hub));
    let class = classify_flat_quotient(act.quotient());
    assert!(matches!(class.kind, SurfaceKind::Other { .. }));
    assert!(h1(act.quotient()).is_trivial());
    assert!(!act.collapsible_edges().unwrap().is_empty());
}

#[test]
fn lens_equator_is_not_collapsible_and_gamma_is_a_circle() {
    for q in [3u32, 4, 5, 7] {
        let s = lens_structure(LensParams::new(q, 1).unwrap()).unwrap();
        let act = PermutationAction::new(&s).unwrap();
        let collapsible: BTreeSet<usize> = act.collapsible_edges().unwrap().into_iter().collect();
        let g = act.gamma_graph().unwrap();
        assert_eq!(g.edges.len(), 2);
        assert!(g.edges.iter().all(|e| !collapsible.contains(&e.class)));
        assert!(g.is_single_cycle() && g.has_circuit());
        let pairs = act.internally_flat_complexes().unwrap();
        let covered: usize = pairs.iter().map(|p| p.first.len() + if p.first == p.second { 0 } else { p.second.len() }).sum();
        assert_eq!(covered, act.generators().len());
    }
}

#[test]
fn flatness_biconditional_on_lens() {
    let s = lens_structure(LensParams::new(7, 2).unwrap()).unwrap();
    let act = PermutationAction::new(&s).unwrap();
    assert!(!act.is_flat().unwrap());
    assert!(act.face_classes().iter().any(|c| c.faces.len() > 2));
    assert!(act.flatness_equivalence_check().unwrap());
}
