use crate::complex::{Complex, LabelAllocator, Simplex, Vertex};
use crate::error::{Error, Result};
use crate::moves::{relabel, subdivide};

/// Offset between a label and its prism copy: the smallest power of ten
/// above the largest label.
pub fn prism_offset(k: &Complex) -> Vertex {
    let max = k.max_label();
    let mut l: Vertex = 10;
    while l <= max {
        l *= 10;
    }
    l
}

/// `P(K)`: for each generator `(i₀ … iₙ)` the simplexes
/// `{i₀ … i_k, j_k … jₙ}`, `k = 0..=n`, with `j = i + prism_offset(K)`.
pub fn prism(k: &Complex) -> Result<Complex> {
    if !k.is_uniform() {
        return Err(Error::NotUniform);
    }
    let off = prism_offset(k);
    let mut out = Complex::new();
    for g in k.generators() {
        let v = g.vertices();
        for split in 0..v.len() {
            let s = v[..=split].iter().copied().chain(v[split..].iter().map(|&x| x + off));
            out.toggle(Simplex::from_sorted(s.collect()));
        }
    }
    Ok(out)
}

/// The prism as `Q(a, L)` with `L` obtained from `a★K` by subdividing every
/// edge `(a b)` at a fresh `c_b`, vertices taken in decreasing order, and
/// then renaming `c_b` to the prism copy of `b`.
pub fn prism_via_subdivision(k: &Complex) -> Result<Complex> {
    if !k.is_uniform() {
        return Err(Error::NotUniform);
    }
    if k.is_empty() {
        return Ok(Complex::new());
    }
    let off = prism_offset(k);
    let mut alloc = LabelAllocator::after(k);
    let a = alloc.fresh();
    let mut l = Complex::simplex(Simplex::vertex(a)).join(k)?;
    let mut rename = std::collections::BTreeMap::new();
    for &b in k.vertices().iter().rev() {
        let c = alloc.fresh();
        l = subdivide(&l, &Simplex::from_iter_unsorted([a, b]), c)?;
        rename.insert(c, b + off);
    }
    relabel(&l.residual(&Simplex::vertex(a)), &rename)
}
