//! Entanglement as a function of the distance to a Schwarzschild horizon:
//! each position maps to a Hawking squeezing parameter, which feeds the
//! flat-space single-point evaluation.

use crate::error::Result;
use crate::modes::{BlackHoleContext, Statistics, q_hawking, schwarzschild_proper_acceleration};
use crate::table::CurveTable;

use super::flat::{boson_n_ar_sma_closed, fermion_n_ar_closed, fermion_n_arbar_closed};

/// Sweeps the coordinate distance to the horizon. Columns: the squeezing q,
/// N_AR, N_ARbar, the proper acceleration, the validity ratio Delta0/R_S and
/// an `approx_valid` 0/1 flag (0 where Delta0/R_S >= 1).
pub fn black_hole_sweep(
    mass: f64,
    omega: f64,
    delta0_grid: &[f64],
    statistics: Statistics,
) -> Result<CurveTable> {
    let mut q_col = Vec::with_capacity(delta0_grid.len());
    let mut n_ar = Vec::with_capacity(delta0_grid.len());
    let mut n_arbar = Vec::with_capacity(delta0_grid.len());
    let mut accel = Vec::with_capacity(delta0_grid.len());
    let mut ratio = Vec::with_capacity(delta0_grid.len());
    let mut valid = Vec::with_capacity(delta0_grid.len());
    for &d0 in delta0_grid {
        let ctx = BlackHoleContext::new(mass, 2.0 * mass + d0, omega)?;
        let q = q_hawking(&ctx, statistics)?;
        let pa = schwarzschild_proper_acceleration(&ctx);
        q_col.push(q.r);
        accel.push(pa.exact);
        ratio.push(ctx.validity_ratio());
        valid.push(if ctx.validity_ratio() < 1.0 { 1.0 } else { 0.0 });
        match statistics {
            Statistics::Fermionic => {
                n_ar.push(fermion_n_ar_closed(q.r));
                n_arbar.push(fermion_n_arbar_closed(q.r));
            }
            Statistics::Bosonic => {
                n_ar.push(boson_n_ar_sma_closed(q.r));
                n_arbar.push(0.0);
            }
        }
    }
    let mut table = CurveTable::new("delta0", delta0_grid.to_vec());
    table.add_metadata("mass", mass);
    table.add_metadata("omega", omega);
    table.add_metadata(
        "statistics",
        match statistics {
            Statistics::Bosonic => "bosonic",
            Statistics::Fermionic => "fermionic",
        },
    );
    table.push_column("q", q_col)?;
    table.push_column("n_ar", n_ar)?;
    table.push_column("n_arbar", n_arbar)?;
    table.push_column("proper_acceleration", accel)?;
    table.push_column("validity_ratio", ratio)?;
    table.push_column("approx_valid", valid)?;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fermionic_limit_and_mass_ordering() {
        // Delta0 -> 0: N_AR -> 1/4 independent of omega
        for omega in [0.3, 1.0, 3.0] {
            let t = black_hole_sweep(1.0, omega, &[1e-14, 0.01, 0.1], Statistics::Fermionic)
                .unwrap();
            let n = t.column("n_ar").unwrap();
            assert!((n[0] - 0.25).abs() < 1e-6, "omega = {omega}: {}", n[0]);
        }
        // smaller mass degrades more at fixed (omega, Delta0)
        let small = black_hole_sweep(0.5, 0.5, &[0.05], Statistics::Fermionic).unwrap();
        let large = black_hole_sweep(2.0, 0.5, &[0.05], Statistics::Fermionic).unwrap();
        assert!(small.column("n_ar").unwrap()[0] < large.column("n_ar").unwrap()[0]);
    }

    #[test]
    fn validity_flag() {
        let t = black_hole_sweep(1.0, 1.0, &[0.1, 2.5], Statistics::Bosonic).unwrap();
        let v = t.column("approx_valid").unwrap();
        assert_eq!(v[0], 1.0);
        assert_eq!(v[1], 0.0);
    }
}
