//! Geometric-phase route to the Unruh effect: diagonalization of the
//! detector-field Hamiltonian, Berry phases of inertial and accelerated
//! detectors, dephasing cycle counts and the dynamical-phase precision
//! budget of the interferometric proposal.

use num_complex::Complex64;

use crate::error::{Result, RqiError};
use crate::modes::{SqueezingParam, Statistics, r_flat};

use super::bisect;

/// Speed of light, for the SI-facing helpers of this chapter.
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;

/// Derived quantities of the diagonalizing transformation for squeezing
/// split v and bare frequencies (omega_a, omega_b), omega_a/omega_b > e^{2v}.
#[derive(Debug, Clone, Copy)]
pub struct BerryDiag {
    /// Field-mode frequency of the coupled Hamiltonian.
    pub omega_a: f64,
    /// Detector frequency of the coupled Hamiltonian.
    pub omega_b: f64,
    /// Coupling strength.
    pub lambda: f64,
    /// Residual squeezing parameter, 2p = artanh(-2Z / hat-Omega_b).
    pub p: f64,
    /// Beam-splitter angle.
    pub s: f64,
    /// C = ln(omega_a/omega_b)/2; u = C - v.
    pub big_c: f64,
    /// Winding coefficient of the one-excitation Berry phase.
    pub g: f64,
    /// Ground-state Berry phase per cycle divided by 2 pi.
    pub t00: f64,
    /// Inputs, kept for the phase formulas.
    pub v: f64,
    pub bare_omega_a: f64,
    pub bare_omega_b: f64,
}

/// Evaluates the diagonalization constraints at (v, omega_a, omega_b).
pub fn berry_diagonalization(v: f64, omega_a: f64, omega_b: f64) -> Result<BerryDiag> {
    if v <= 0.0 || !v.is_finite() {
        return Err(RqiError::invalid("v", format!("must be finite > 0, got {v}")));
    }
    if omega_a <= 0.0 || omega_b <= 0.0 {
        return Err(RqiError::invalid("omega", "bare frequencies must be > 0"));
    }
    if omega_a / omega_b <= (2.0 * v).exp() {
        return Err(RqiError::invalid(
            "v",
            format!(
                "constraint omega_a/omega_b > e^(2v) violated: {} <= {}",
                omega_a / omega_b,
                (2.0 * v).exp()
            ),
        ));
    }
    let big_c = 0.5 * (omega_a / omega_b).ln();
    let u = big_c - v;
    let (s2v, s2u) = ((2.0 * v).sinh(), (2.0 * u).sinh());
    let (c2v, c2u) = ((2.0 * v).cosh(), (2.0 * u).cosh());
    let denom = omega_a * s2u + omega_b * s2v;

    let cap_omega_a = s2v * (c2u + s2u / (2.0 * v).tanh()) / (s2v / omega_a + s2u / omega_b);
    let hat_omega_b =
        (omega_a * omega_a * (4.0 * u).sinh() + omega_b * omega_b * (4.0 * v).sinh())
            / (2.0 * (omega_b * s2v + omega_a * s2u));
    let z = 0.5 * (omega_a * omega_a * s2u * s2u - omega_b * omega_b * s2v * s2v)
        / (omega_b * s2v + omega_a * s2u);
    let disc = hat_omega_b * hat_omega_b - 4.0 * z * z;
    if disc <= 0.0 {
        return Err(RqiError::invalid(
            "v",
            "non-physical branch: hat-Omega_b^2 < 4 Z^2",
        ));
    }
    let cap_omega_b = disc.sqrt();
    let p = 0.5 * (-2.0 * z / hat_omega_b).atanh();
    let lambda = p.exp() * (omega_a * omega_b * s2u * s2v).sqrt()
        / (omega_b * s2v + omega_a * s2u)
        * (omega_a * c2u - omega_b * c2v);
    let s = (omega_a * s2u / (omega_b * s2v)).sqrt().atan();
    let g = omega_b * s2v * c2u / denom;
    let t00 = (omega_a * v.sinh().powi(2) * s2u + omega_b * s2v * u.sinh().powi(2)) / denom;
    Ok(BerryDiag {
        omega_a: cap_omega_a,
        omega_b: cap_omega_b,
        lambda,
        p,
        s,
        big_c,
        g,
        t00,
        v,
        bare_omega_a: omega_a,
        bare_omega_b: omega_b,
    })
}

/// Berry phases after one closed cycle of the phase parameter.
#[derive(Debug, Clone, Copy)]
pub struct BerryPhases {
    /// Inertial ground-state phase, gamma_I = 2 pi T00.
    pub gamma_i: f64,
    /// Accelerated-detector phase at squeezing r.
    pub gamma_a: f64,
    /// delta = gamma_I - gamma_a per cycle.
    pub delta: f64,
    /// Interference visibility 1/cosh r.
    pub visibility: f64,
}

/// Phase acquired by the thermal detector state: gamma_a = gamma_I -
/// Arg(cosh^2 r - e^{2 pi i G} sinh^2 r), with Arg in (-pi, pi].
pub fn berry_phases(diag: &BerryDiag, r: &SqueezingParam) -> Result<BerryPhases> {
    if r.statistics != Statistics::Bosonic {
        return Err(RqiError::invalid("r", "the detector couples to a bosonic mode"));
    }
    let gamma_i = 2.0 * std::f64::consts::PI * diag.t00;
    let (c2, s2) = (r.r.cosh().powi(2), r.r.sinh().powi(2));
    let phase = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * diag.g);
    let z = Complex64::new(c2, 0.0) - phase * s2;
    let gamma_a = gamma_i - z.arg();
    Ok(BerryPhases {
        gamma_i,
        gamma_a,
        delta: gamma_i - gamma_a,
        visibility: 1.0 / r.r.cosh(),
    })
}

/// Direct summation of the mixed-state phase series
/// sum_n tanh^{2n} r e^{2 pi i G n} / cosh^2 r, truncated at n_terms, as an
/// independent route to gamma_a (used by the verification suite).
pub fn berry_phase_series(diag: &BerryDiag, r: f64, n_terms: usize) -> f64 {
    let t2 = r.tanh() * r.tanh();
    let step = Complex64::from_polar(t2, 2.0 * std::f64::consts::PI * diag.g);
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for _ in 0..=n_terms {
        sum += term;
        term *= step;
    }
    let gamma_i = 2.0 * std::f64::consts::PI * diag.t00;
    // e^{i eta} = e^{i gamma_I} sum / cosh^2 r; the phase relative to the
    // inertial one is Arg(sum)
    gamma_i + (sum / r.cosh().powi(2)).arg()
}

/// Analytic inversion of the diagonalization for target coupled parameters
/// (Omega, Omega, lambda), on the branch labeled by the winding fraction
/// g_branch = v/(v + u). Deterministic: leading-order seed plus damped
/// fixed-point polish.
pub fn berry_triple_for(
    target_omega: f64,
    target_lambda: f64,
    g_branch: f64,
) -> Result<BerryDiag> {
    if target_omega <= 0.0 || target_lambda <= 0.0 {
        return Err(RqiError::invalid("target", "targets must be > 0"));
    }
    if !(0.0 < g_branch && g_branch < 0.5) {
        return Err(RqiError::invalid("g_branch", "branch fraction must lie in (0, 1/2)"));
    }
    // leading order: C = lambda / (2 Omega sqrt(f(1-f))), v = f C, w = Omega
    let f = g_branch;
    let mut big_c = target_lambda / (2.0 * target_omega * (f * (1.0 - f)).sqrt());
    let mut w = target_omega;
    let mut out = None;
    for _ in 0..40 {
        let v = f * big_c;
        let (wa, wb) = (w * big_c.exp(), w * (-big_c).exp());
        let d = berry_diagonalization(v, wa, wb)?;
        // polish the scale against the geometric mean of the coupled
        // frequencies and the split against the coupling
        let scale = target_omega / (d.omega_a * d.omega_b).sqrt();
        let split = target_lambda / d.lambda;
        w *= scale;
        big_c *= split;
        out = Some(d);
        if (scale - 1.0).abs() < 1e-12 && (split - 1.0).abs() < 1e-12 {
            break;
        }
    }
    let d = out.expect("at least one iteration ran");
    if (d.omega_a - target_omega).abs() / target_omega > 1e-5
        || (d.lambda - target_lambda).abs() / target_lambda > 1e-5
    {
        return Err(RqiError::invalid(
            "target",
            "triple inversion did not reach the requested coupled parameters",
        ));
    }
    Ok(d)
}

/// Squeezing of a detector of proper frequency omega (rad/s) at proper
/// acceleration a (m/s^2): r = artanh(exp(-pi omega c / a)).
pub fn unruh_squeezing_si(omega_si: f64, accel_si: f64) -> Result<SqueezingParam> {
    r_flat(Statistics::Bosonic, omega_si * SPEED_OF_LIGHT, accel_si)
}

/// Number of cycles until the accumulated phase difference reaches pi.
/// Returns None when delta vanishes (no dephasing).
pub fn cycles_to_max_dephasing(diag: &BerryDiag, r: &SqueezingParam) -> Result<Option<u64>> {
    let phases = berry_phases(diag, r)?;
    let delta = phases.delta.abs();
    if delta < 1e-300 {
        return Ok(None);
    }
    Ok(Some((std::f64::consts::PI / delta).ceil() as u64))
}

/// Which arm of the interferometer a dynamical-phase budget refers to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseArm {
    /// Inertial atom at speed v over a path adjustable to Delta L.
    Inertial { speed: f64 },
    /// Uniformly accelerated atom over proper path length l_a.
    Accelerated { accel: f64, path_length: f64 },
}

/// Precision with which the dynamical phase can be adjusted given a path
/// length metrology of delta_l (SI units):
/// inertial Delta phi = Omega dL / v; accelerated
/// Delta phi = (Omega dL / c) e^x / sqrt((e^x - 1)(e^x + 1)), x = L a / c^2.
pub fn dynamical_phase_precision(arm: PhaseArm, omega: f64, delta_l: f64) -> Result<f64> {
    if omega <= 0.0 || delta_l <= 0.0 {
        return Err(RqiError::invalid("omega/delta_l", "must be > 0"));
    }
    match arm {
        PhaseArm::Inertial { speed } => {
            if speed <= 0.0 {
                return Err(RqiError::invalid("speed", "must be > 0"));
            }
            Ok(omega * delta_l / speed)
        }
        PhaseArm::Accelerated { accel, path_length } => {
            if accel <= 0.0 || path_length <= 0.0 {
                return Err(RqiError::invalid("accel/path_length", "must be > 0"));
            }
            let x = path_length * accel / (SPEED_OF_LIGHT * SPEED_OF_LIGHT);
            let ex = x.exp();
            Ok(omega * delta_l / SPEED_OF_LIGHT * ex / ((ex - 1.0) * (ex + 1.0)).sqrt())
        }
    }
}

/// Locates the acceleration at which the per-cycle dephasing reaches a
/// target value (CLI helper; monotone in a over the searched window).
pub fn accel_for_delta(diag: &BerryDiag, omega_si: f64, delta_target: f64) -> Result<f64> {
    let delta_at = |a: f64| -> f64 {
        let r = unruh_squeezing_si(omega_si, a).expect("valid inputs");
        berry_phases(diag, &r).expect("bosonic").delta.abs()
    };
    let (lo, hi) = (1e15, 1e20);
    if delta_at(lo) > delta_target || delta_at(hi) < delta_target {
        return Err(RqiError::invalid(
            "delta_target",
            "target dephasing not bracketed in [1e15, 1e20] m/s^2",
        ));
    }
    Ok(bisect(|a| delta_at(a) - delta_target, lo, hi, 1e6))
}
