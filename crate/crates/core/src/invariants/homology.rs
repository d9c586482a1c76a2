use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::cells::CellComplex;
use crate::invariants::snf::{invariant_factors, rank_gf2};

/// A finitely generated abelian group `Z^rank ⊕ Z/t₁ ⊕ …` with `t₁ | t₂ | …`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

/// First homology of a quotient; the same shape as any homology group.
pub type H1Group = HomologyGroup;

impl HomologyGroup {
    pub fn trivial() -> Self {
        HomologyGroup { rank: 0, torsion: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Dimension of `H ⊗ Z₂`-style mod-2 count: rank plus even torsion factors.
    pub fn mod2_dimension(&self) -> usize {
        self.rank + self.torsion.iter().filter(|&&t| t % 2 == 0).count()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.rank == 1 {
            parts.push("Z".to_string());
        } else if self.rank > 1 {
            parts.push(format!("Z^{}", self.rank));
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z_{t}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Integer homology `H_k` via Smith normal form of `∂_k` and `∂_{k+1}`.
pub fn homology(cc: &CellComplex, k: usize) -> HomologyGroup {
    let ck = cc.count(k);
    let rank_k = if k == 0 { 0 } else { invariant_factors(&cc.boundary_matrix(k)).len() };
    let next = invariant_factors(&cc.boundary_matrix(k + 1));
    let torsion = next
        .iter()
        .filter(|d| !d.is_one())
        .map(|d: &BigInt| u64::try_from(d).expect("torsion coefficient fits in u64"))
        .collect();
    HomologyGroup { rank: ck - rank_k - next.len(), torsion }
}

/// All integer homology groups `H_0 … H_dim`.
pub fn homology_all(cc: &CellComplex) -> Vec<HomologyGroup> {
    match cc.dim() {
        None => Vec::new(),
        Some(d) => (0..=d).map(|k| homology(cc, k)).collect(),
    }
}

/// `dim H_k(X; Z₂)` by elimination over GF(2), independent of the integer path.
pub fn betti_mod2(cc: &CellComplex, k: usize) -> usize {
    let rank_k = if k == 0 { 0 } else { rank_gf2(&cc.boundary_matrix(k)) };
    let rank_next = rank_gf2(&cc.boundary_matrix(k + 1));
    cc.count(k) - rank_k - rank_next
}
