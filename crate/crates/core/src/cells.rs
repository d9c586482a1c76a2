//! Δ-complexes: cells with ordered vertices and face maps.

use std::collections::BTreeMap;

use crate::complex::{Complex, Simplex};

/// A cell of dimension `k` has `k + 1` ordered vertices (0-cell ids) and
/// `k + 1` faces, face `i` omitting vertex `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub vertices: Vec<usize>,
    pub faces: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CellComplex {
    cells: Vec<Vec<Cell>>,
}

impl CellComplex {
    pub fn new(cells: Vec<Vec<Cell>>) -> Self {
        CellComplex { cells }
    }

    /// Every distinct face of `k` becomes a cell; vertex order is the label order.
    pub fn from_simplicial(k: &Complex) -> Self {
        let faces = k.faces();
        let index: Vec<BTreeMap<&Simplex, usize>> =
            faces.iter().map(|fs| fs.iter().enumerate().map(|(i, s)| (s, i)).collect()).collect();
        let mut cells = Vec::with_capacity(faces.len());
        for (dim, fs) in faces.iter().enumerate() {
            let layer = fs
                .iter()
                .map(|s| {
                    let vertices = s.vertices().iter().map(|&v| index[0][&Simplex::vertex(v)]).collect();
                    let faces = if dim == 0 { Vec::new() } else { s.facets().map(|f| index[dim - 1][&f]).collect() };
                    Cell { vertices, faces }
                })
                .collect();
            cells.push(layer);
        }
        CellComplex { cells }
    }

    pub fn dim(&self) -> Option<usize> {
        self.cells.len().checked_sub(1)
    }

    pub fn cells(&self, k: usize) -> &[Cell] {
        self.cells.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn count(&self, k: usize) -> usize {
        self.cells(k).len()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 0 { c.len() as i64 } else { -(c.len() as i64) })
            .sum()
    }

    /// Entries `(row, col, sign)` of `∂_k : C_k → C_{k-1}`, duplicates summed.
    pub fn boundary_entries(&self, k: usize) -> Vec<(usize, usize, i64)> {
        if k == 0 {
            return Vec::new();
        }
        let mut acc: BTreeMap<(usize, usize), i64> = BTreeMap::new();
        for (col, cell) in self.cells(k).iter().enumerate() {
            for (i, &f) in cell.faces.iter().enumerate() {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                *acc.entry((f, col)).or_default() += sign;
            }
        }
        acc.into_iter().filter(|&(_, v)| v != 0).map(|((r, c), v)| (r, c, v)).collect()
    }

    /// Dense `∂_k` with `count(k-1)` rows and `count(k)` columns.
    pub fn boundary_matrix(&self, k: usize) -> Vec<Vec<i64>> {
        let rows = if k == 0 { 0 } else { self.count(k - 1) };
        let mut m = vec![vec![0i64; self.count(k)]; rows];
        for (r, c, v) in self.boundary_entries(k) {
            m[r][c] = v;
        }
        m
    }

    /// Cells that are not a face of any higher cell.
    pub fn maximal_cells(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for k in 0..self.cells.len() {
            let mut covered = vec![false; self.count(k)];
            for c in self.cells(k + 1) {
                for &f in &c.faces {
                    covered[f] = true;
                }
            }
            out.extend(covered.iter().enumerate().filter(|(_, &c)| !c).map(|(i, _)| (k, i)));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::standard_sphere;

    #[test]
    fn simplicial_counts_and_signs() {
        let cc = CellComplex::from_simplicial(&standard_sphere(2));
        assert_eq!(cc.counts(), vec![4, 6, 4]);
        assert_eq!(cc.euler_characteristic(), 2);
        let d1 = cc.boundary_matrix(1);
        let d2 = cc.boundary_matrix(2);
        for r in 0..4 {
            for c in 0..4 {
                let s: i64 = (0..6).map(|m| d1[r][m] * d2[m][c]).sum();
                assert_eq!(s, 0);
            }
        }
    }
}
