//! Fermionic Fock-space machinery: Jordan-Wigner creation/annihilation
//! matrices over a fixed canonical mode order, so anticommutation signs hold
//! by construction instead of by hand-entered amplitudes.
//!
//! Mode `p` of `n` acts on bit `n - 1 - p` of the basis index, i.e. mode 0
//! owns the most significant bit. The phase string counts occupied modes
//! strictly before `p` in the canonical order.
#![allow(clippy::needless_range_loop)]


use crate::linalg::{C64, ComplexMatrix};

/// Jordan-Wigner creation operator for mode `p` out of `n_modes`.
pub fn creation(n_modes: usize, p: usize) -> ComplexMatrix {
    assert!(p < n_modes);
    let dim = 1usize << n_modes;
    let mut m = ComplexMatrix::zeros(dim);
    let bit = n_modes - 1 - p;
    for b in 0..dim {
        if (b >> bit) & 1 == 0 {
            let occupied_before = (b >> (bit + 1)).count_ones();
            let sign = if occupied_before.is_multiple_of(2) { 1.0 } else { -1.0 };
            m.set(b | (1 << bit), b, C64::new(sign, 0.0));
        }
    }
    m
}

/// Jordan-Wigner annihilation operator (adjoint of `creation`).
pub fn annihilation(n_modes: usize, p: usize) -> ComplexMatrix {
    let c = creation(n_modes, p);
    let dim = c.dim();
    ComplexMatrix::from_fn(dim, |i, j| c.get(j, i).conj())
}

/// Applies a matrix to an amplitude vector.
pub fn apply(op: &ComplexMatrix, v: &[C64]) -> Vec<C64> {
    let n = op.dim();
    assert_eq!(v.len(), n);
    let mut out = vec![C64::new(0.0, 0.0); n];
    for (i, slot) in out.iter_mut().enumerate() {
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..n {
            let o = op.get(i, j);
            if o.norm_sqr() != 0.0 {
                acc += o * v[j];
            }
        }
        *slot = acc;
    }
    out
}

/// a*x + y for amplitude vectors.
pub fn axpy(a: C64, x: &[C64], y: &[C64]) -> Vec<C64> {
    x.iter().zip(y).map(|(xi, yi)| a * xi + yi).collect()
}

/// a*x for amplitude vectors.
pub fn apply_scalar(a: C64, x: &[C64]) -> Vec<C64> {
    x.iter().map(|xi| a * xi).collect()
}

/// The Fock vacuum |00...0> of `n_modes` modes.
pub fn vacuum_vector(n_modes: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); 1 << n_modes];
    v[0] = C64::new(1.0, 0.0);
    v
}
