//! Dense complex linear algebra for small quantum states: Hermitian
//! eigendecomposition, tensor-structured partial trace / partial transpose,
//! and entropy-safe logarithms.
//!
//! All density matrices in this crate are at most a few thousand rows, so
//! everything is dense, row-major and eagerly validated.
#![allow(clippy::needless_range_loop)]


use nalgebra::{Complex, DMatrix};
use num_complex::Complex64;

use crate::error::{Result, RqiError};

pub type C64 = Complex64;

/// Eigenvalues above `-TOL_NEG` are truncation noise; anything below counts
/// as genuinely negative for negativity purposes. Shared with `measures`.
pub const TOL_NEG: f64 = 1e-10;

/// Maximum allowed hermiticity residual for a constructed density matrix.
pub const HERM_TOL: f64 = 1e-12;

/// Maximum allowed deviation of a density-matrix trace from one.
pub const TRACE_TOL: f64 = 1e-10;

/// Square complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_rows(dim: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(RqiError::BadShape(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Ok(Self { dim, entries })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.entries[i * self.dim + j] = v;
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, v: C64) {
        self.entries[i * self.dim + j] += v;
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Max element norm of `M - M^dag`.
    pub fn hermiticity_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, s: f64) -> ComplexMatrix {
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.add_to(i, j, a * other.get(k, j));
                }
            }
        }
        out
    }

    fn to_nalgebra(&self) -> DMatrix<Complex<f64>> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| self.get(i, j))
    }
}

/// Ordered tensor-factor dimensions with labels, annotating a state or matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorShape {
    dims: Vec<usize>,
    labels: Vec<String>,
}

impl FactorShape {
    pub fn new(factors: &[(&str, usize)]) -> Result<Self> {
        if factors.is_empty() {
            return Err(RqiError::BadShape("shape needs at least one factor".into()));
        }
        for (label, d) in factors {
            if *d == 0 {
                return Err(RqiError::BadShape(format!("factor `{label}` has dim 0")));
            }
        }
        Ok(Self {
            dims: factors.iter().map(|(_, d)| *d).collect(),
            labels: factors.iter().map(|(l, _)| l.to_string()).collect(),
        })
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn rank(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self) -> Vec<&str> {
        self.labels.iter().map(|s| s.as_str()).collect()
    }

    pub fn dim_of(&self, label: &str) -> Result<usize> {
        Ok(self.dims[self.position(label)?])
    }

    fn position(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| RqiError::UnknownLabel(label.to_string()))
    }

    /// Row-major strides of each factor in the flattened index.
    fn strides(&self) -> Vec<usize> {
        let mut s = vec![1usize; self.dims.len()];
        for i in (0..self.dims.len().saturating_sub(1)).rev() {
            s[i] = s[i + 1] * self.dims[i + 1];
        }
        s
    }
}

/// Normalized pure state over a labeled tensor-product space.
#[derive(Debug, Clone)]
pub struct PureState {
    shape: FactorShape,
    amplitudes: Vec<C64>,
}

impl PureState {
    /// Builds a state, normalizing the amplitudes and fixing the global phase
    /// so that the first nonzero amplitude is real positive.
    pub fn new(shape: FactorShape, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != shape.total_dim() {
            return Err(RqiError::BadShape(format!(
                "amplitude count {} does not match shape dim {}",
                amplitudes.len(),
                shape.total_dim()
            )));
        }
        let norm2: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if norm2 < 1e-24 {
            return Err(RqiError::BadShape("state has zero norm".into()));
        }
        let norm = norm2.sqrt();
        let phase = amplitudes
            .iter()
            .find(|a| a.norm() > 1e-14)
            .map(|a| a / a.norm())
            .unwrap_or_else(|| C64::new(1.0, 0.0));
        let amplitudes = amplitudes
            .into_iter()
            .map(|a| a / (phase * norm))
            .collect();
        Ok(Self { shape, amplitudes })
    }

    pub fn shape(&self) -> &FactorShape {
        &self.shape
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, multi_index: &[usize]) -> C64 {
        let strides = self.shape.strides();
        let flat: usize = multi_index
            .iter()
            .zip(&strides)
            .map(|(i, s)| i * s)
            .sum();
        self.amplitudes[flat]
    }

    pub fn inner(&self, other: &PureState) -> C64 {
        assert_eq!(self.shape.dims, other.shape.dims, "shape mismatch");
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// |psi><psi| as a density matrix over the same shape.
    pub fn density_matrix(&self) -> DensityMatrix {
        let n = self.amplitudes.len();
        let mut m = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, self.amplitudes[i] * self.amplitudes[j].conj());
            }
        }
        DensityMatrix {
            matrix: m,
            shape: self.shape.clone(),
        }
    }
}

/// Hermitian, trace-one matrix with tensor-factor metadata.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    shape: FactorShape,
}

impl DensityMatrix {
    /// Validates hermiticity and unit trace at construction.
    pub fn new(matrix: ComplexMatrix, shape: FactorShape) -> Result<Self> {
        if matrix.dim() != shape.total_dim() {
            return Err(RqiError::BadShape(format!(
                "matrix dim {} does not match shape dim {}",
                matrix.dim(),
                shape.total_dim()
            )));
        }
        let res = matrix.hermiticity_residual();
        if res > HERM_TOL {
            return Err(RqiError::NotHermitian { residual: res });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(RqiError::BadShape(format!(
                "density matrix trace is {tr}, expected 1"
            )));
        }
        Ok(Self { matrix, shape })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn shape(&self) -> &FactorShape {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Relabels runs of consecutive factors as single coarse factors without
    /// moving data (row-major flattening makes the merge an index identity).
    /// `groups` lists (new_label, how_many_existing_factors) covering all
    /// factors in order.
    pub fn regroup(&self, groups: &[(&str, usize)]) -> Result<Self> {
        let total: usize = groups.iter().map(|(_, k)| k).sum();
        if total != self.shape.rank() {
            return Err(RqiError::BadShape(format!(
                "regroup covers {total} factors, shape has {}",
                self.shape.rank()
            )));
        }
        let mut factors = Vec::new();
        let mut at = 0usize;
        for (label, k) in groups {
            let d: usize = self.shape.dims[at..at + k].iter().product();
            factors.push((*label, d));
            at += k;
        }
        Ok(Self {
            matrix: self.matrix.clone(),
            shape: FactorShape::new(&factors)?,
        })
    }
}

/// Ascending eigenvalues of a Hermitian matrix, via complex Householder
/// tridiagonalization followed by implicit-shift QL on the real tridiagonal
/// form. (The general-purpose solver in our linear-algebra dependency
/// returns NaN on matrices with exact-zero structure, which reduced density
/// matrices produce all the time.)
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let res = m.hermiticity_residual();
    if res > HERM_TOL {
        return Err(RqiError::NotHermitian { residual: res });
    }
    let n = m.dim();
    if n == 0 {
        return Ok(vec![]);
    }
    if n == 1 {
        return Ok(vec![m.get(0, 0).re]);
    }
    let (d, e) = householder_tridiagonal(m);
    // deflate dust far below the matrix scale so badly graded tridiagonals
    // split into blocks instead of cycling in denormal arithmetic
    let scale = d
        .iter()
        .chain(e.iter())
        .fold(0.0f64, |a, &v| a.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    let floor = scale * 1e-280;
    let clean = |v: &f64| if v.abs() < floor { 0.0 } else { *v };
    let d: Vec<f64> = d.iter().map(clean).collect();
    let mut e: Vec<f64> = e.iter().map(clean).collect();
    if n >= 2 {
        e[n - 1] = 0.0;
    }

    // split into unreduced blocks and orient each one for QL, which wants
    // the grading to increase toward the bottom of the block
    let mut out = Vec::with_capacity(n);
    let mut start = 0usize;
    while start < n {
        let mut end = start;
        while end + 1 < n {
            let dd = d[end].abs() + d[end + 1].abs();
            if e[end].abs() <= f64::EPSILON * dd {
                break;
            }
            end += 1;
        }
        let len = end - start + 1;
        let mut db: Vec<f64> = d[start..=end].to_vec();
        let mut eb: Vec<f64> = vec![0.0; len];
        eb[..len - 1].copy_from_slice(&e[start..end]);
        if db[0].abs() > db[len - 1].abs() {
            db.reverse();
            eb[..len - 1].reverse();
        }
        if tql_values(&mut db, &mut eb).is_err() {
            // shifted QL can cycle on blocks whose grading is not monotone;
            // Sturm bisection always converges, at absolute accuracy of a
            // few ulps of the block norm
            db = d[start..=end].to_vec();
            eb = vec![0.0; len];
            eb[..len - 1].copy_from_slice(&e[start..end]);
            db = sturm_eigenvalues(&db, &eb);
        }
        out.extend_from_slice(&db);
        start = end + 1;
    }
    out.sort_by(|a, b| a.total_cmp(b));
    Ok(out)
}

/// Reduces a Hermitian matrix to real symmetric tridiagonal form by
/// Householder reflections; returns (diagonal, off-diagonal) with the
/// off-diagonal phases rotated away (eigenvalues depend on moduli only).
fn householder_tridiagonal(m: &ComplexMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = m.dim();
    let mut h = m.clone();
    let mut e = vec![0.0f64; n];
    for k in 0..n.saturating_sub(2) {
        // norm of the column below the diagonal
        let mut xnorm2 = 0.0f64;
        for i in k + 1..n {
            xnorm2 += h.get(i, k).norm_sqr();
        }
        let xnorm = xnorm2.sqrt();
        if xnorm < 1e-300 {
            e[k + 1] = 0.0;
            continue;
        }
        let x0 = h.get(k + 1, k);
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let alpha = phase * xnorm;
        // v = x + alpha e1, normalized
        let mut v = vec![C64::new(0.0, 0.0); n];
        for i in k + 1..n {
            v[i] = h.get(i, k);
        }
        v[k + 1] += alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 < 1e-300 {
            e[k + 1] = xnorm;
            continue;
        }
        let beta = 2.0 / vnorm2;
        // p = beta H v ; w = p - (beta/2 v^dag p) v ; H -= v w^dag + w v^dag
        let mut p = vec![C64::new(0.0, 0.0); n];
        for i in k..n {
            let mut acc = C64::new(0.0, 0.0);
            for j in k + 1..n {
                acc += h.get(i, j) * v[j];
            }
            p[i] = acc * beta;
        }
        let vdag_p: C64 = (k + 1..n).map(|i| v[i].conj() * p[i]).sum();
        let kappa = vdag_p * (beta / 2.0);
        for i in k..n {
            p[i] -= kappa * v[i];
        }
        for i in k..n {
            for j in k..n {
                let delta = v[i] * p[j].conj() + p[i] * v[j].conj();
                h.set(i, j, h.get(i, j) - delta);
            }
        }
        e[k + 1] = h.get(k + 1, k).norm();
    }
    if n >= 2 {
        e[n - 1] = h.get(n - 1, n - 2).norm();
    }
    let d: Vec<f64> = (0..n).map(|i| h.get(i, i).re).collect();
    // e[i] couples d[i-1] and d[i]; shift to the 0-based convention of tql
    let mut off = vec![0.0f64; n];
    off[..n - 1].copy_from_slice(&e[1..n]);
    (d, off)
}

/// Bisection on the Sturm sequence of a symmetric tridiagonal matrix:
/// `negcount(x)` counts eigenvalues below x through the signs of the
/// LDL^T pivots, and each eigenvalue is bracketed inside the Gershgorin
/// interval. Unconditionally convergent; used when shifted QL cycles.
fn sturm_eigenvalues(d: &[f64], e: &[f64]) -> Vec<f64> {
    let n = d.len();
    if n == 1 {
        return vec![d[0]];
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let off = if i > 0 { e[i - 1].abs() } else { 0.0 }
            + if i + 1 < n { e[i].abs() } else { 0.0 };
        lo = lo.min(d[i] - off);
        hi = hi.max(d[i] + off);
    }
    let span = (hi - lo).max(f64::MIN_POSITIVE);
    lo -= span * 1e-14;
    hi += span * 1e-14;
    let negcount = |x: f64| -> usize {
        let mut count = 0usize;
        let mut t = d[0] - x;
        if t < 0.0 {
            count += 1;
        }
        for i in 1..n {
            let denom = if t.abs() < 1e-300 {
                if t.is_sign_negative() { -1e-300 } else { 1e-300 }
            } else {
                t
            };
            t = d[i] - x - e[i - 1] * e[i - 1] / denom;
            if t < 0.0 {
                count += 1;
            }
        }
        count
    };
    (0..n)
        .map(|k| {
            let (mut a, mut b) = (lo, hi);
            for _ in 0..120 {
                let mid = 0.5 * (a + b);
                if negcount(mid) > k {
                    b = mid;
                } else {
                    a = mid;
                }
                if b - a <= 4.0 * f64::EPSILON * a.abs().max(b.abs()).max(1e-300) {
                    break;
                }
            }
            0.5 * (a + b)
        })
        .collect()
}

/// Implicit-shift QL iteration for a symmetric tridiagonal matrix,
/// eigenvalues only. `e[i]` couples `d[i]` and `d[i+1]`; `e[n-1]` unused.
fn tql_values(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            // locate a negligible subdiagonal element
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 64 {
                return Err(RqiError::BadShape(
                    "QL iteration failed to converge".into(),
                ));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0f64;
            let mut c = 1.0f64;
            let mut p = 0.0f64;
            let mut i = m as isize - 1;
            while i >= l as isize {
                let iu = i as usize;
                let f = s * e[iu];
                let b = c * e[iu];
                r = f.hypot(g);
                e[iu + 1] = r;
                if r == 0.0 {
                    d[iu + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[iu + 1] - p;
                r = (d[iu] - g) * s + 2.0 * c * b;
                p = s * r;
                d[iu + 1] = g + p;
                g = c * r - b;
                i -= 1;
            }
            if r == 0.0 && i >= l as isize {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Full Hermitian eigendecomposition; returns ascending eigenvalues and the
/// matching eigenvector columns. Used by tests to check the reconstruction
/// residual.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let res = m.hermiticity_residual();
    if res > HERM_TOL {
        return Err(RqiError::NotHermitian { residual: res });
    }
    let eig = m.to_nalgebra().symmetric_eigen();
    if eig.eigenvalues.iter().any(|v| !v.is_finite()) {
        return Err(RqiError::BadShape(
            "dense eigendecomposition produced non-finite values".into(),
        ));
    }
    let n = m.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = ComplexMatrix::from_fn(n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok((vals, vecs))
}

/// Reduced density matrix over the `keep` factors, tracing out the rest.
/// `keep` must be a nonempty proper subset of the labels.
pub fn partial_trace(rho: &DensityMatrix, keep: &[&str]) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return Err(RqiError::BadShape("keep set must not be empty".into()));
    }
    let shape = rho.shape();
    let keep_pos: Vec<usize> = keep
        .iter()
        .map(|l| shape.position(l))
        .collect::<Result<_>>()?;
    if keep_pos.len() == shape.rank() {
        return Err(RqiError::BadShape(
            "keep set equals the full label set; nothing to trace out".into(),
        ));
    }

    let trace_pos: Vec<usize> = (0..shape.rank()).filter(|p| !keep_pos.contains(p)).collect();
    let strides = shape.strides();
    let keep_dims: Vec<usize> = keep_pos.iter().map(|&p| shape.dims[p]).collect();
    let out_dim: usize = keep_dims.iter().product();
    let env_dims: Vec<usize> = trace_pos.iter().map(|&p| shape.dims[p]).collect();
    let env_total: usize = env_dims.iter().product();

    let flat_of = |keep_idx: &[usize], env_idx: &[usize]| -> usize {
        let mut flat = 0usize;
        for (v, &p) in keep_idx.iter().zip(&keep_pos) {
            flat += v * strides[p];
        }
        for (v, &p) in env_idx.iter().zip(&trace_pos) {
            flat += v * strides[p];
        }
        flat
    };

    let mut out = ComplexMatrix::zeros(out_dim);
    let mut ki = vec![0usize; keep_pos.len()];
    for i in 0..out_dim {
        unpack(i, &keep_dims, &mut ki);
        let mut kj = vec![0usize; keep_pos.len()];
        for j in 0..out_dim {
            unpack(j, &keep_dims, &mut kj);
            let mut acc = C64::new(0.0, 0.0);
            let mut env = vec![0usize; trace_pos.len()];
            for e in 0..env_total {
                unpack(e, &env_dims, &mut env);
                acc += rho.matrix.get(flat_of(&ki, &env), flat_of(&kj, &env));
            }
            out.set(i, j, acc);
        }
    }

    let factors: Vec<(&str, usize)> = keep.iter().zip(&keep_dims).map(|(l, &d)| (*l, d)).collect();
    DensityMatrix::new(symmetrize(out), FactorShape::new(&factors)?)
}

/// Reduced density matrix of a pure state over the `keep` factors, by direct
/// amplitude contraction (cheaper than building the full projector first).
pub fn partial_trace_state(psi: &PureState, keep: &[&str]) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return Err(RqiError::BadShape("keep set must not be empty".into()));
    }
    let shape = psi.shape();
    let keep_pos: Vec<usize> = keep
        .iter()
        .map(|l| shape.position(l))
        .collect::<Result<_>>()?;
    if keep_pos.len() == shape.rank() {
        return Err(RqiError::BadShape(
            "keep set equals the full label set; nothing to trace out".into(),
        ));
    }
    let trace_pos: Vec<usize> = (0..shape.rank()).filter(|p| !keep_pos.contains(p)).collect();
    let strides = shape.strides();
    let keep_dims: Vec<usize> = keep_pos.iter().map(|&p| shape.dims[p]).collect();
    let out_dim: usize = keep_dims.iter().product();
    let env_dims: Vec<usize> = trace_pos.iter().map(|&p| shape.dims[p]).collect();
    let env_total: usize = env_dims.iter().product();

    // psi reorganized as a (kept x env) rectangular array, then rho = A A^dag.
    let mut rect = vec![C64::new(0.0, 0.0); out_dim * env_total];
    let mut ki = vec![0usize; keep_pos.len()];
    let mut env = vec![0usize; trace_pos.len()];
    for i in 0..out_dim {
        unpack(i, &keep_dims, &mut ki);
        for e in 0..env_total {
            unpack(e, &env_dims, &mut env);
            let mut flat = 0usize;
            for (v, &p) in ki.iter().zip(&keep_pos) {
                flat += v * strides[p];
            }
            for (v, &p) in env.iter().zip(&trace_pos) {
                flat += v * strides[p];
            }
            rect[i * env_total + e] = psi.amplitudes[flat];
        }
    }
    let mut out = ComplexMatrix::zeros(out_dim);
    for i in 0..out_dim {
        for j in 0..out_dim {
            let mut acc = C64::new(0.0, 0.0);
            for e in 0..env_total {
                acc += rect[i * env_total + e] * rect[j * env_total + e].conj();
            }
            out.set(i, j, acc);
        }
    }
    let factors: Vec<(&str, usize)> = keep.iter().zip(&keep_dims).map(|(l, &d)| (*l, d)).collect();
    DensityMatrix::new(symmetrize(out), FactorShape::new(&factors)?)
}

/// Partial transpose on the factor `on`. The shape must have exactly two
/// factors; reduce with `partial_trace` first otherwise.
pub fn partial_transpose(rho: &DensityMatrix, on: &str) -> Result<ComplexMatrix> {
    let shape = rho.shape();
    if shape.rank() != 2 {
        return Err(RqiError::BadShape(format!(
            "partial transpose needs exactly 2 factors, got {}; reduce first",
            shape.rank()
        )));
    }
    let pos = shape.position(on)?;
    let (da, db) = (shape.dims[0], shape.dims[1]);
    let out = ComplexMatrix::from_fn(da * db, |row, col| {
        let (i, j) = (row / db, row % db);
        let (k, l) = (col / db, col % db);
        // transpose the chosen factor's indices
        if pos == 0 {
            rho.matrix.get(k * db + j, i * db + l)
        } else {
            rho.matrix.get(i * db + l, k * db + j)
        }
    });
    Ok(out)
}

/// Von Neumann entropy -Tr(rho log2 rho), with 0 log 0 = 0. Eigenvalues in
/// [-1e-10, 0) are clipped to zero; anything below -1e-8 is a positivity
/// violation.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let vals = hermitian_eigenvalues(rho.matrix())?;
    entropy_of_spectrum(&vals)
}

/// Entropy of a probability spectrum in bits, clipping small negative noise.
pub fn entropy_of_spectrum(vals: &[f64]) -> Result<f64> {
    const HARD_NEG: f64 = 1e-8;
    let mut s = 0.0;
    for &v in vals {
        if v < -HARD_NEG {
            return Err(RqiError::NotPositive { min_eigenvalue: v });
        }
        if v > 0.0 {
            s -= v * v.log2();
        }
    }
    Ok(s.max(0.0))
}

/// Clean up round-off so reduced matrices stay within the hermiticity bound.
fn symmetrize(m: ComplexMatrix) -> ComplexMatrix {
    let n = m.dim();
    ComplexMatrix::from_fn(n, |i, j| (m.get(i, j) + m.get(j, i).conj()) * 0.5)
}

#[inline]
fn unpack(mut flat: usize, dims: &[usize], out: &mut [usize]) {
    for i in (0..dims.len()).rev() {
        out[i] = flat % dims[i];
        flat /= dims[i];
    }
}
