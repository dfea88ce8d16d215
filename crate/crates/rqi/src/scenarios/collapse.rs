//! Entanglement generated by gravitational collapse: entropy of
//! entanglement between outgoing Hawking modes and modes falling across the
//! forming horizon, for bosons and fermions.

use crate::error::Result;
use crate::modes::{Statistics, r_collapse};
use crate::table::CurveTable;

use super::bisect;

/// Closed-form entropy of entanglement of the collapse `in` vacuum at a
/// given squeezing, in bits.
pub fn collapse_entropy_closed(r: f64, statistics: Statistics) -> f64 {
    match statistics {
        Statistics::Bosonic => {
            let (c2, s2) = (r.cosh() * r.cosh(), r.sinh() * r.sinh());
            if s2 == 0.0 {
                return 0.0;
            }
            c2 * c2.log2() - s2 * s2.log2()
        }
        Statistics::Fermionic => {
            let (c2, s2) = (r.cos() * r.cos(), r.sin() * r.sin());
            let term = |p: f64| if p > 0.0 { p * p.log2() } else { 0.0 };
            -2.0 * (term(c2) + term(s2))
        }
    }
}

/// Entropy as a function of M*omega (geometric units).
pub fn collapse_entropy_at(m_omega: f64, statistics: Statistics) -> Result<f64> {
    let r = r_collapse(m_omega, 1.0, statistics)?;
    Ok(collapse_entropy_closed(r.r, statistics))
}

/// Both entropy curves over an M*omega grid, with the crossing point where
/// the fermionic curve overtakes the bosonic one.
#[derive(Debug, Clone)]
pub struct CollapseCurves {
    pub table: CurveTable,
    /// M*omega where S_fermion = S_boson (fermionic larger above it).
    pub crossing: Option<f64>,
}

pub fn collapse_entropy_curve(m_omega_grid: &[f64]) -> Result<CollapseCurves> {
    let mut s_bos = Vec::with_capacity(m_omega_grid.len());
    let mut s_fer = Vec::with_capacity(m_omega_grid.len());
    for &x in m_omega_grid {
        s_bos.push(collapse_entropy_at(x, Statistics::Bosonic)?);
        s_fer.push(collapse_entropy_at(x, Statistics::Fermionic)?);
    }
    let mut table = CurveTable::new("m_omega", m_omega_grid.to_vec());
    table.push_column("s_boson", s_bos)?;
    table.push_column("s_fermion", s_fer)?;
    let crossing = find_collapse_crossing(1e-3, 0.5);
    Ok(CollapseCurves { table, crossing })
}

/// Locates the finite M*omega beyond which the fermionic entropy exceeds
/// the bosonic one.
pub fn find_collapse_crossing(lo: f64, hi: f64) -> Option<f64> {
    let g = |x: f64| {
        collapse_entropy_at(x, Statistics::Fermionic).unwrap()
            - collapse_entropy_at(x, Statistics::Bosonic).unwrap()
    };
    if (g(lo) < 0.0) == (g(hi) < 0.0) {
        return None;
    }
    Some(bisect(g, lo, hi, 1e-10))
}
