//! Entanglement and correlation functionals over states and density
//! matrices: negativity, logarithmic negativity, von Neumann entropies,
//! mutual information, entropy of entanglement.
//!
//! Entropy logs are base 2 everywhere. Eigenvalues in [-1e-10, 0) are
//! clipped to zero in entropies but count as negative (per the same shared
//! constant TOL_NEG) in negativity.

use crate::error::{Result, RqiError};
use crate::linalg::{
    DensityMatrix, PureState, TOL_NEG, hermitian_eigenvalues, partial_trace, partial_trace_state,
    partial_transpose, von_neumann_entropy,
};

/// Everything one usually wants to know about a two-factor density matrix.
#[derive(Debug, Clone, Copy)]
pub struct BipartiteMeasureReport {
    pub negativity: f64,
    pub log_negativity: f64,
    pub entropy_a: f64,
    pub entropy_b: f64,
    pub entropy_ab: f64,
    pub mutual_information: f64,
    pub min_pt_eigenvalue: f64,
}

/// Sum of |negative eigenvalues| of the partial transpose; 0 for PPT states.
pub fn negativity(rho: &DensityMatrix) -> Result<f64> {
    let on = rho.shape().labels()[1].to_string();
    let pt = partial_transpose(rho, &on)?;
    let vals = hermitian_eigenvalues(&pt)?;
    Ok(vals.iter().filter(|&&v| v < -TOL_NEG).map(|v| -v).sum())
}

/// Most negative partial-transpose eigenvalue (0 if PPT).
pub fn min_pt_eigenvalue(rho: &DensityMatrix) -> Result<f64> {
    let on = rho.shape().labels()[1].to_string();
    let pt = partial_transpose(rho, &on)?;
    let vals = hermitian_eigenvalues(&pt)?;
    Ok(vals.first().copied().unwrap_or(0.0))
}

/// log2(2 N + 1).
pub fn log_negativity(neg: f64) -> f64 {
    (2.0 * neg + 1.0).log2()
}

/// I_AB = S_A + S_B - S_AB for a two-factor density matrix.
pub fn mutual_information(rho: &DensityMatrix) -> Result<f64> {
    let labels = rho.shape().labels();
    if labels.len() != 2 {
        return Err(RqiError::BadShape(format!(
            "mutual information needs a 2-factor shape, got {}",
            labels.len()
        )));
    }
    let (a, b) = (labels[0].to_string(), labels[1].to_string());
    let s_a = von_neumann_entropy(&partial_trace(rho, &[a.as_str()])?)?;
    let s_b = von_neumann_entropy(&partial_trace(rho, &[b.as_str()])?)?;
    let s_ab = von_neumann_entropy(rho)?;
    Ok(s_a + s_b - s_ab)
}

/// Entropy of entanglement of a pure state across the cut labeled by `cut`.
pub fn entanglement_entropy(psi: &PureState, cut: &[&str]) -> Result<f64> {
    von_neumann_entropy(&partial_trace_state(psi, cut)?)
}

pub fn bipartite_report(rho: &DensityMatrix) -> Result<BipartiteMeasureReport> {
    let labels = rho.shape().labels();
    if labels.len() != 2 {
        return Err(RqiError::BadShape(format!(
            "bipartite report needs a 2-factor shape, got {}",
            labels.len()
        )));
    }
    let (a, b) = (labels[0].to_string(), labels[1].to_string());
    let s_a = von_neumann_entropy(&partial_trace(rho, &[a.as_str()])?)?;
    let s_b = von_neumann_entropy(&partial_trace(rho, &[b.as_str()])?)?;
    let s_ab = von_neumann_entropy(rho)?;
    let neg = negativity(rho)?;
    Ok(BipartiteMeasureReport {
        negativity: neg,
        log_negativity: log_negativity(neg),
        entropy_a: s_a,
        entropy_b: s_b,
        entropy_ab: s_ab,
        mutual_information: s_a + s_b - s_ab,
        min_pt_eigenvalue: min_pt_eigenvalue(rho)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{C64, FactorShape};
    use crate::modes::SqueezingParam;
    use crate::states::{self, Spin, Truncation, UnruhWeights};

    fn bell() -> DensityMatrix {
        let shape = FactorShape::new(&[("A", 2), ("B", 2)]).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        PureState::new(
            shape,
            vec![
                C64::new(s, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(s, 0.0),
            ],
        )
        .unwrap()
        .density_matrix()
    }

    #[test]
    fn bell_pair_measures() {
        let rho = bell();
        let rep = bipartite_report(&rho).unwrap();
        assert!((rep.negativity - 0.5).abs() < 1e-12);
        assert!((rep.log_negativity - 1.0).abs() < 1e-12);
        assert!((rep.mutual_information - 2.0).abs() < 1e-11);
        assert!((rep.min_pt_eigenvalue + 0.5).abs() < 1e-12);
        // invariant: log_negativity = log2(2 N + 1)
        assert!((rep.log_negativity - (2.0 * rep.negativity + 1.0).log2()).abs() < 1e-12);
    }

    #[test]
    fn product_state_has_no_correlations() {
        let shape = FactorShape::new(&[("A", 2), ("B", 2)]).unwrap();
        let psi = PureState::new(
            shape,
            vec![
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        let rho = psi.density_matrix();
        assert!(negativity(&rho).unwrap() < 1e-12);
        assert!(mutual_information(&rho).unwrap().abs() < 1e-11);
        assert!(entanglement_entropy(&psi, &["A"]).unwrap() < 1e-12);
    }

    #[test]
    fn dirac_pair_negativity_law() {
        // N_AR = cos^2(r)/2 on a grid; N_AR + N_ARbar = 1/2
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for i in 0..12 {
            let r = i as f64 / 11.0 * std::f64::consts::FRAC_PI_4;
            let rp = SqueezingParam::fermionic(r).unwrap();
            let vac = states::dirac_vacuum(&rp).unwrap();
            let exc = states::dirac_particle(&rp, Spin::Down).unwrap();
            let psi = states::alice_pair(s, &vac, s, &exc).unwrap();
            let rho_ar = partial_trace_state(&psi, &["A", "I"]).unwrap();
            let rho_ab = partial_trace_state(&psi, &["A", "II"]).unwrap();
            let n_ar = negativity(&rho_ar).unwrap();
            let n_ab = negativity(&rho_ab).unwrap();
            assert!((n_ar - 0.5 * r.cos().powi(2)).abs() < 1e-10, "r = {r}");
            assert!((n_ar + n_ab - 0.5).abs() < 1e-10);
        }
    }

    #[test]
    fn entanglement_entropy_symmetric_under_complement() {
        let rp = SqueezingParam::bosonic(0.8).unwrap();
        let t = Truncation::new(60).unwrap();
        let psi = states::scalar_unruh_particle(&rp, &UnruhWeights::from_qr(0.9).unwrap(), &t)
            .unwrap();
        let s1 = entanglement_entropy(&psi, &["I"]).unwrap();
        let s2 = entanglement_entropy(&psi, &["II"]).unwrap();
        assert!((s1 - s2).abs() < 1e-10);
    }

    #[test]
    fn thermal_entropy_closed_form() {
        // S of the reduced two-mode squeezed state:
        // cosh^2 r log2 cosh^2 r - sinh^2 r log2 sinh^2 r
        for r in [0.3, 0.6, 1.0] {
            let rp = SqueezingParam::bosonic(r).unwrap();
            let t = Truncation::new(Truncation::required_n_max(r) + 18).unwrap();
            let psi = states::scalar_vacuum(&rp, &t).unwrap();
            let s = entanglement_entropy(&psi, &["I"]).unwrap();
            let (c2, s2) = (r.cosh().powi(2), r.sinh().powi(2));
            let want = c2 * c2.log2() - s2 * s2.log2();
            assert!((s - want).abs() < 1e-9, "r = {r}: {s} vs {want}");
        }
    }

    #[test]
    fn negativity_invariant_under_local_rotation() {
        // conjugate the Bell pair by a local unitary on B and compare
        use crate::linalg::ComplexMatrix;
        let rho = bell();
        let th = 0.7f64;
        let (c, s) = (th.cos(), th.sin());
        // U = I_2 (x) R(th)
        let mut u = ComplexMatrix::zeros(4);
        for a in 0..2 {
            u.set(a * 2, a * 2, C64::new(c, 0.0));
            u.set(a * 2, a * 2 + 1, C64::new(-s, 0.0));
            u.set(a * 2 + 1, a * 2, C64::new(s, 0.0));
            u.set(a * 2 + 1, a * 2 + 1, C64::new(c, 0.0));
        }
        let udag = ComplexMatrix::from_fn(4, |i, j| u.get(j, i).conj());
        let rotated = u.matmul(rho.matrix()).matmul(&udag);
        let rot = DensityMatrix::new(rotated, rho.shape().clone()).unwrap();
        let n0 = negativity(&rho).unwrap();
        let n1 = negativity(&rot).unwrap();
        assert!((n0 - n1).abs() < 1e-9);
    }
}
