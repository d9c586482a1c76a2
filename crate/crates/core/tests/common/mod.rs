#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use stellar_core::complex::{standard_ball, standard_sphere};
use stellar_core::lens::{lens_structure, make_regular_glued, coarse_lens_glued, mirror_structure, LensParams};
use stellar_core::moves::subdivide;
use stellar_core::quotient::StellarStructure;
use stellar_core::structure::{build_structure, BuildOptions};
use stellar_core::{Complex, Simplex, Vertex};

pub fn cx(gens: &[&[Vertex]]) -> Complex {
    gens.iter().map(|g| Simplex::new(g.to_vec()).unwrap()).collect()
}

pub fn coprime_pairs(q: u32) -> Vec<u32> {
    (1..q).filter(|&p| gcd(q, p) == 1).collect()
}

pub fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Random `d`-dimensional generators on the vertices `1..=d+4`.
pub fn random_complex(rng: &mut ChaCha8Rng, d: usize) -> Complex {
    let verts: Vec<Vertex> = (1..=(d as Vertex + 4)).collect();
    let count = rng.gen_range(1..=8);
    (0..count)
        .map(|_| Simplex::new(verts.choose_multiple(rng, d + 1).copied().collect()).unwrap())
        .collect()
}

/// A random face of a random generator.
pub fn random_face(rng: &mut ChaCha8Rng, k: &Complex) -> Simplex {
    let gens: Vec<&Simplex> = k.generators().iter().collect();
    let g = gens[rng.gen_range(0..gens.len())];
    let size = rng.gen_range(1..=g.len());
    Simplex::new(g.vertices().choose_multiple(rng, size).copied().collect()).unwrap()
}

/// `steps` random stellar subdivisions of the standard sphere or ball.
pub fn random_manifold(rng: &mut ChaCha8Rng, d: usize, closed: bool, steps: usize) -> Complex {
    let mut k = if closed { standard_sphere(d) } else { standard_ball(d) };
    for _ in 0..steps {
        let face = random_face(rng, &k);
        let fresh = k.max_label() + 1;
        k = subdivide(&k, &face, fresh).unwrap();
    }
    k
}

pub fn built(m: &Complex) -> StellarStructure {
    build_structure(m, &BuildOptions::default()).unwrap().0
}

/// Closed structures used across the suite.
pub fn zoo() -> Vec<(String, StellarStructure)> {
    let mut out = Vec::new();
    for q in 2..=9 {
        for p in coprime_pairs(q) {
            out.push((format!("lens({q},{p})"), lens_structure(LensParams::new(q, p).unwrap()).unwrap()));
        }
    }
    for n in 2..=3 {
        out.push((format!("boundary of simplex, dim {n}"), built(&standard_sphere(n))));
    }
    for n in 3..=6 {
        out.push((format!("mirror bipyramid {n}"), mirror_structure(n).unwrap()));
    }
    for q in [3, 5] {
        let (s, eq) = make_regular_glued(&coarse_lens_glued(LensParams::new(q, 1).unwrap()).unwrap(), 8).unwrap();
        out.push((format!("repaired coarse lens({q},1)"), StellarStructure::new(s.max_label() + 1, s, eq)));
    }
    let octahedron = cx(&[
        &[1, 3, 5], &[1, 3, 6], &[1, 4, 5], &[1, 4, 6],
        &[2, 3, 5], &[2, 3, 6], &[2, 4, 5], &[2, 4, 6],
    ]);
    out.push(("octahedron".into(), built(&octahedron)));
    let mut rng = <ChaCha8Rng as rand::SeedableRng>::seed_from_u64(11);
    for i in 0..3 {
        let m = random_manifold(&mut rng, 3, true, 3);
        out.push((format!("subdivided 3-sphere #{i}"), built(&m)));
    }
    out
}
