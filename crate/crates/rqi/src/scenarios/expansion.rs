//! Entanglement generated by a Robertson-Walker expansion, and the
//! protocols that read the expansion parameters back out of it: rapidity
//! estimation through the optimal-momentum curve, and a volume lower bound
//! through the maximum achievable entropy.

use std::sync::OnceLock;

use crate::error::{Result, RqiError};
use crate::modes::{
    ExpansionParams, Statistics, chi_sq, gamma_sq_boson, gamma_sq_fermion,
};
use crate::table::CurveTable;

use super::golden_max;

/// Entropy logarithm base. The quoted reference values use bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBase {
    #[default]
    Two,
    Natural,
}

impl LogBase {
    fn log(&self, x: f64) -> f64 {
        match self {
            LogBase::Two => x.log2(),
            LogBase::Natural => x.ln(),
        }
    }
}

/// Entropy of entanglement between field modes of opposite momenta in the
/// asymptotic future, for an `in` vacuum.
///
/// Fermionic: qubit entropy with weight g = |gamma_F^- chi|^2,
///   S = log(1+g) - g/(1+g) log g.
/// Bosonic: geometric-state entropy with x = |gamma_B|^2,
///   S = -x/(1-x) log x - log(1-x).
pub fn expansion_entropy(p: &ExpansionParams, statistics: Statistics, base: LogBase) -> Result<f64> {
    match statistics {
        Statistics::Fermionic => {
            let g = gamma_sq_fermion(p)?.value * chi_sq(p);
            if g <= 0.0 {
                return Ok(0.0);
            }
            Ok(base.log(1.0 + g) - g / (1.0 + g) * base.log(g))
        }
        Statistics::Bosonic => {
            let x = gamma_sq_boson(p).value;
            if x >= 1.0 {
                return Err(RqiError::invalid(
                    "gamma_b",
                    format!("|gamma_B|^2 = {x} >= 1 is unphysical"),
                ));
            }
            if x <= 0.0 {
                return Ok(0.0);
            }
            Ok(-x / (1.0 - x) * base.log(x) - base.log(1.0 - x))
        }
    }
}

/// Result of a momentum scan for the most entangled mode.
#[derive(Debug, Clone, Copy)]
pub struct KPeak {
    pub k_star: f64,
    pub s_star: f64,
    /// true when the maximum is interior to the window (fermions); false
    /// when the curve is monotone and the supremum sits on the window edge.
    pub interior: bool,
}

/// Maximizes the entanglement entropy over the momentum window by golden
/// section. The fermionic curve peaks at an interior k; the bosonic one
/// decreases monotonically and returns the lower-edge supremum flagged
/// `interior = false`. Returns a "no peak" error when the landscape is flat.
pub fn optimal_k(
    statistics: Statistics,
    m: f64,
    rho: f64,
    eps: f64,
    k_window: (f64, f64),
) -> Result<KPeak> {
    let (lo, hi) = k_window;
    if !(lo > 0.0 && hi > lo) {
        return Err(RqiError::invalid("k_window", "need 0 < lo < hi"));
    }
    let s_at = |k: f64| -> f64 {
        let p = match ExpansionParams::new(k, m, rho, eps) {
            Ok(p) => p,
            Err(_) => return 0.0,
        };
        expansion_entropy(&p, statistics, LogBase::Two).unwrap_or(0.0)
    };
    match statistics {
        Statistics::Fermionic => {
            let (k_star, s_star) = golden_max(s_at, lo, hi, 1e-8 * (hi - lo).max(1.0));
            if s_star < 1e-12 {
                return Err(RqiError::invalid("landscape", "no entropy peak in window"));
            }
            let interior = k_star > lo + 1e-4 * (hi - lo) && k_star < hi - 1e-4 * (hi - lo);
            Ok(KPeak {
                k_star,
                s_star,
                interior,
            })
        }
        Statistics::Bosonic => {
            // report the window-edge supremum of the decreasing curve
            Ok(KPeak {
                k_star: lo,
                s_star: s_at(lo),
                interior: false,
            })
        }
    }
}

/// Rapidity-estimation outcome.
#[derive(Debug, Clone)]
pub struct ProtocolEstimate {
    pub estimated_rho: f64,
    pub epsilon_lower_bound: f64,
    pub optimal_k: f64,
    pub max_entropy_at_optimum: f64,
    /// Set when the two best candidates score within 5% of each other.
    pub ambiguous: bool,
}

/// Default momentum window of the estimation protocol.
pub const K_WINDOW: (f64, f64) = (1e-3, 80.0);

/// Optimal-k tuning curve k*(m) at epsilon = 1 for a candidate rapidity.
pub fn tuning_curve(rho: f64, masses: &[f64]) -> Result<Vec<f64>> {
    masses
        .iter()
        .map(|&m| Ok(optimal_k(Statistics::Fermionic, m, rho, 1.0, K_WINDOW)?.k_star))
        .collect()
}

/// Least-squares match of observed (mass, k*) pairs against candidate
/// tuning curves generated at epsilon = 1 (the curves are insensitive to
/// epsilon, so the data may come from any volume parameter).
pub fn estimate_rho(observed: &[(f64, f64)], rho_candidates: &[f64]) -> Result<ProtocolEstimate> {
    if observed.len() < 2 {
        return Err(RqiError::invalid("observed", "need at least two (m, k*) pairs"));
    }
    if rho_candidates.is_empty() {
        return Err(RqiError::invalid("rho_candidates", "need at least one candidate"));
    }
    let masses: Vec<f64> = observed.iter().map(|(m, _)| *m).collect();
    let mut scores = Vec::with_capacity(rho_candidates.len());
    for &rho in rho_candidates {
        let curve = tuning_curve(rho, &masses)?;
        let score: f64 = curve
            .iter()
            .zip(observed)
            .map(|(c, (_, k))| (c - k) * (c - k))
            .sum();
        scores.push((rho, score));
    }
    scores.sort_by(|a, b| a.1.total_cmp(&b.1));
    let best = scores[0];
    let ambiguous = scores.len() > 1 && scores[1].1 < best.1 * 1.05;
    // report the peak of the best candidate's entropy at the heaviest mass
    let m_ref = masses.iter().cloned().fold(f64::MIN, f64::max);
    let peak = optimal_k(Statistics::Fermionic, m_ref, best.0, 1.0, K_WINDOW)?;
    Ok(ProtocolEstimate {
        estimated_rho: best.0,
        epsilon_lower_bound: epsilon_lower_bound(peak.s_star).epsilon,
        optimal_k: peak.k_star,
        max_entropy_at_optimum: peak.s_star,
        ambiguous,
    })
}

/// Maximum achievable entropy over mass and momentum at a given volume
/// parameter; independent of the rapidity.
pub fn max_entropy_over_modes(eps: f64) -> f64 {
    // evaluated at a fixed interior rapidity; the optimum is rho-free
    let rho = 10.0;
    let mut best: f64 = 0.0;
    let masses = geomspace(0.05, 20.0, 120);
    for m in masses {
        if let Ok(p) = optimal_k(Statistics::Fermionic, m, rho, eps, K_WINDOW) {
            best = best.max(p.s_star);
        }
    }
    best
}

/// Lower bound on the expansion volume parameter from a measured optimum
/// entropy, by inverting the monotone S_max(eps) table.
#[derive(Debug, Clone, Copy)]
pub struct EpsilonBound {
    pub epsilon: f64,
    /// Set when the measured entropy exceeds the table range (eps -> inf).
    pub saturated: bool,
}

fn geomspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (l0, l1) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

fn smax_table() -> &'static Vec<(f64, f64)> {
    static TABLE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        geomspace(0.02, 60.0, 48)
            .into_iter()
            .map(|e| (e, max_entropy_over_modes(e)))
            .collect()
    })
}

pub fn epsilon_lower_bound(s_measured: f64) -> EpsilonBound {
    let table = smax_table();
    if s_measured <= 0.0 {
        return EpsilonBound {
            epsilon: 0.0,
            saturated: false,
        };
    }
    let (mut lo, mut hi) = (table[0], table[table.len() - 1]);
    if s_measured >= hi.1 {
        return EpsilonBound {
            epsilon: hi.0,
            saturated: true,
        };
    }
    if s_measured <= lo.1 {
        return EpsilonBound {
            epsilon: lo.0,
            saturated: false,
        };
    }
    for w in table.windows(2) {
        if w[0].1 <= s_measured && s_measured <= w[1].1 {
            lo = w[0];
            hi = w[1];
            break;
        }
    }
    // log-linear interpolation between bracketing table rows
    let f = (s_measured - lo.1) / (hi.1 - lo.1);
    EpsilonBound {
        epsilon: (lo.0.ln() + f * (hi.0.ln() - lo.0.ln())).exp(),
        saturated: false,
    }
}

/// Entropy-vs-momentum sweep table for the CLI.
pub fn expansion_entropy_curve(
    m: f64,
    rho: f64,
    eps: f64,
    k_grid: &[f64],
) -> Result<CurveTable> {
    let mut s_f = Vec::with_capacity(k_grid.len());
    let mut s_b = Vec::with_capacity(k_grid.len());
    for &k in k_grid {
        let p = ExpansionParams::new(k, m, rho, eps)?;
        s_f.push(expansion_entropy(&p, Statistics::Fermionic, LogBase::Two)?);
        s_b.push(expansion_entropy(&p, Statistics::Bosonic, LogBase::Two)?);
    }
    let mut table = CurveTable::new("k", k_grid.to_vec());
    table.add_metadata("m", m);
    table.add_metadata("rho", rho);
    table.add_metadata("eps", eps);
    table.push_column("s_fermion", s_f)?;
    table.push_column("s_boson", s_b)?;
    Ok(table)
}
