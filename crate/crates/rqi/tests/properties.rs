//! Property-based invariants over randomly drawn parameters.

use proptest::prelude::*;

use rqi::linalg::{
    C64, ComplexMatrix, DensityMatrix, FactorShape, PureState, hermitian_eigen,
    hermitian_eigenvalues, partial_trace_state, partial_transpose, von_neumann_entropy,
};
use rqi::measures::{entanglement_entropy, negativity};
use rqi::modes::{SqueezingParam, Statistics, r_flat};
use rqi::scenarios::{self, FlatKind};
use rqi::states::{self, Truncation, UnruhWeights};

fn random_hermitian_2x2(a: f64, b: f64, re: f64, im: f64) -> ComplexMatrix {
    ComplexMatrix::from_rows(
        2,
        vec![
            C64::new(a, 0.0),
            C64::new(re, im),
            C64::new(re, -im),
            C64::new(b, 0.0),
        ],
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Closed 2x2 eigenvalues match the solver.
    #[test]
    fn eigenvalues_match_quadratic_formula(
        a in -2.0f64..2.0, b in -2.0f64..2.0, re in -2.0f64..2.0, im in -2.0f64..2.0
    ) {
        let m = random_hermitian_2x2(a, b, re, im);
        let vals = hermitian_eigenvalues(&m).unwrap();
        let mid = (a + b) / 2.0;
        let disc = ((a - b) / 2.0).hypot(C64::new(re, im).norm());
        prop_assert!((vals[0] - (mid - disc)).abs() < 1e-12);
        prop_assert!((vals[1] - (mid + disc)).abs() < 1e-12);
    }

    /// Spectral reconstruction residual stays within the contract bound.
    #[test]
    fn eigen_reconstruction_residual(seeds in prop::collection::vec(-1.0f64..1.0, 9)) {
        let mut h = ComplexMatrix::zeros(3);
        for i in 0..3 {
            h.set(i, i, C64::new(seeds[i], 0.0));
        }
        let mut k = 3;
        for (i, j) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let v = C64::new(seeds[k], seeds[k + 1]);
            h.set(i, j, v);
            h.set(j, i, v.conj());
            k += 2;
        }
        let (vals, vecs) = hermitian_eigen(&h).unwrap();
        let mut rec = ComplexMatrix::zeros(3);
        for kk in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    rec.add_to(i, j, vecs.get(i, kk) * vecs.get(j, kk).conj() * vals[kk]);
                }
            }
        }
        prop_assert!(rec.max_abs_diff(&h) < 3.0 * 1e-9);
    }

    /// Partial transpose is an involution and preserves product spectra.
    #[test]
    fn partial_transpose_involution_and_product_spectrum(
        amps in prop::collection::vec(-1.0f64..1.0, 8)
    ) {
        // product state |a> (x) |b> over 2 x 2
        let na = (amps[0] * amps[0] + amps[1] * amps[1]).sqrt().max(1e-3);
        let nb = (amps[2] * amps[2] + amps[3] * amps[3]).sqrt().max(1e-3);
        let a = [amps[0] / na, amps[1] / na];
        let b = [amps[2] / nb, amps[3] / nb];
        let shape = FactorShape::new(&[("A", 2), ("B", 2)]).unwrap();
        let mut v = vec![C64::new(0.0, 0.0); 4];
        for i in 0..2 {
            for j in 0..2 {
                v[i * 2 + j] = C64::new(a[i] * b[j], 0.0);
            }
        }
        let psi = PureState::new(shape.clone(), v).unwrap();
        let rho = psi.density_matrix();
        let pt = partial_transpose(&rho, "B").unwrap();
        // involution
        let pt_dm = DensityMatrix::new(pt.clone(), shape).unwrap();
        let back = partial_transpose(&pt_dm, "B").unwrap();
        prop_assert!(back.max_abs_diff(rho.matrix()) < 1e-12);
        // spectrum preserved on the product state
        let s1 = hermitian_eigenvalues(rho.matrix()).unwrap();
        let s2 = hermitian_eigenvalues(&pt).unwrap();
        for (x, y) in s1.iter().zip(&s2) {
            prop_assert!((x - y).abs() < 1e-10);
        }
        prop_assert!(negativity(&rho).unwrap() < 1e-10);
    }

    /// r_flat is increasing in acceleration, decreasing in frequency.
    #[test]
    fn squeezing_monotonicity(
        omega in 0.05f64..5.0, accel in 0.05f64..5.0, bump in 0.01f64..1.0
    ) {
        for stat in [Statistics::Bosonic, Statistics::Fermionic] {
            let base = r_flat(stat, omega, accel).unwrap().r;
            prop_assert!(r_flat(stat, omega, accel + bump).unwrap().r > base);
            prop_assert!(r_flat(stat, omega + bump, accel).unwrap().r < base);
        }
    }

    /// Entropy of entanglement is symmetric under complementary cuts.
    #[test]
    fn entanglement_entropy_cut_symmetry(r in 0.0f64..0.9, qr in 0.7071f64..1.0) {
        let rp = SqueezingParam::bosonic(r).unwrap();
        let t = Truncation::new(Truncation::required_n_max(r).max(20)).unwrap();
        let w = UnruhWeights::from_qr(qr).unwrap();
        let psi = states::scalar_unruh_particle(&rp, &w, &t).unwrap();
        let s1 = entanglement_entropy(&psi, &["I"]).unwrap();
        let s2 = entanglement_entropy(&psi, &["II"]).unwrap();
        prop_assert!((s1 - s2).abs() < 1e-10);
    }

    /// S_IJ = S_K for random tripartite pure constructions.
    #[test]
    fn pairwise_entropy_equals_complement(r in 0.05f64..1.2, n in 1u32..6) {
        let rp = SqueezingParam::bosonic(r).unwrap();
        let psi = states::bounded_boson_pair(&rp, n).unwrap();
        for (pair, single) in [
            (["A", "I"], "II"),
            (["A", "II"], "I"),
            (["I", "II"], "A"),
        ] {
            let s_pair = von_neumann_entropy(&partial_trace_state(&psi, &pair).unwrap()).unwrap();
            let s_single =
                von_neumann_entropy(&partial_trace_state(&psi, &[single]).unwrap()).unwrap();
            prop_assert!((s_pair - s_single).abs() < 1e-9);
        }
    }

    /// Fermionic negativity sum stays at 1/2 under the SMA for random r.
    #[test]
    fn fermionic_conservation_random_r(r in 0.0f64..std::f64::consts::FRAC_PI_4) {
        let t = Truncation::new(8).unwrap();
        let p = scenarios::flat_point(FlatKind::Dirac, &UnruhWeights::sma(), r, &t).unwrap();
        prop_assert!((p.n_ar + p.n_arbar - 0.5).abs() < 1e-10);
    }

    /// Negativity is invariant under random local rotations.
    #[test]
    fn negativity_local_unitary_invariance(theta in 0.0f64..std::f64::consts::PI, r in 0.0f64..0.7) {
        let rp = SqueezingParam::fermionic(r * std::f64::consts::FRAC_PI_4 / 0.7).unwrap();
        let rho = rqi::states::spin_bell_reduced(&rp, rqi::states::BellState::PhiPlus).unwrap();
        // rotate Alice's qubit by theta
        let (c, s) = (theta.cos(), theta.sin());
        let n = rho.dim();
        let mut u = ComplexMatrix::zeros(n);
        for b in 0..3 {
            u.set(b, b, C64::new(c, 0.0));
            u.set(b, 3 + b, C64::new(-s, 0.0));
            u.set(3 + b, b, C64::new(s, 0.0));
            u.set(3 + b, 3 + b, C64::new(c, 0.0));
        }
        let udag = ComplexMatrix::from_fn(n, |i, j| u.get(j, i).conj());
        let rotated = u.matmul(rho.matrix()).matmul(&udag);
        let rot = DensityMatrix::new(rotated, rho.shape().clone()).unwrap();
        let drift = (negativity(&rho).unwrap() - negativity(&rot).unwrap()).abs();
        prop_assert!(drift <= 1e-9);
    }

    /// The in-crate tridiagonal eigensolver agrees with the dense
    /// eigenvector-path solver on random dense Hermitian matrices.
    #[test]
    fn eigensolver_cross_validation(seed in prop::collection::vec(-1.0f64..1.0, 200), dim in 3usize..14) {
        let mut m = ComplexMatrix::zeros(dim);
        let mut k = 0;
        for i in 0..dim {
            m.set(i, i, C64::new(seed[k], 0.0));
            k += 1;
        }
        for i in 0..dim {
            for j in i + 1..dim {
                let v = C64::new(seed[k % seed.len()], seed[(k + 1) % seed.len()]);
                m.set(i, j, v);
                m.set(j, i, v.conj());
                k += 2;
            }
        }
        let a = hermitian_eigenvalues(&m).unwrap();
        let (b, _) = hermitian_eigen(&m).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-10, "{x} vs {y}");
        }
    }

    /// Parser smoke-fuzz: random mutations of valid configs never panic,
    /// and accepted outputs still round-trip.
    #[test]
    fn config_parser_mutation_smoke(mutations in prop::collection::vec((0usize..400, 0u8..255), 12)) {
        let base = "scenario = flat\noutput = o.csv\nformat = csv\n[params]\nkind = dirac\nqr = 1.0\n[grid]\nstart = 0\nstop = 0.7\npoints = 50\n[truncation]\nn_max = 40\n";
        let mut bytes = base.as_bytes().to_vec();
        for (pos, byte) in mutations {
            let i = pos % bytes.len();
            bytes[i] = byte;
        }
        if let Ok(text) = std::str::from_utf8(&bytes) {
            if let Ok(cfg) = rqi::config::parse_config(text) {
                let again = rqi::config::parse_config(&cfg.to_text()).unwrap();
                prop_assert_eq!(cfg, again);
            }
        }
    }

    /// Config files round-trip through parse -> render -> parse.
    #[test]
    fn config_round_trip(qr in 0.0f64..1.0, points in 2usize..500, nmax in 1u32..200) {
        let text = format!(
            "scenario = flat\nformat = json\n[params]\nkind = dirac\nqr = {qr}\n\
             [grid]\nstart = 0\nstop = 0.5\npoints = {points}\n[truncation]\nn_max = {nmax}\n"
        );
        let cfg = rqi::config::parse_config(&text).unwrap();
        let again = rqi::config::parse_config(&cfg.to_text()).unwrap();
        prop_assert_eq!(cfg, again);
    }
}
