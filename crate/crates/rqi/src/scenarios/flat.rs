//! Flat-space sweeps: negativity and mutual-information curves for the four
//! field kinds, bounded-occupation crossing points, multimode binomial
//! negativities, particle/antiparticle sector tradeoffs and the
//! entanglement-amplification scan.

use crate::error::{Result, RqiError};
use crate::linalg::{DensityMatrix, PureState, TOL_NEG, hermitian_eigenvalues, partial_trace_state, von_neumann_entropy};
use crate::measures::negativity;
use crate::modes::{SqueezingParam, Statistics};
use crate::states::{
    self, FieldKind, PsiSign, Spin, StateFamilyParams, Truncation, UnruhWeights,
};
use crate::table::CurveTable;

use super::{bisect, golden_max};

/// Field kind of a flat-space sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlatKind {
    Boson,
    /// Bosonic field with occupation bounded at N.
    Bounded(u32),
    Grassmann,
    Dirac,
}

impl FlatKind {
    pub fn statistics(&self) -> Statistics {
        match self {
            FlatKind::Boson | FlatKind::Bounded(_) => Statistics::Bosonic,
            FlatKind::Grassmann | FlatKind::Dirac => Statistics::Fermionic,
        }
    }
}

/// All six bipartite quantities of one sweep point.
#[derive(Debug, Clone, Copy)]
pub struct FlatPoint {
    pub n_ar: f64,
    pub n_arbar: f64,
    pub n_rrbar: f64,
    pub i_ar: f64,
    pub i_arbar: f64,
    pub i_rrbar: f64,
    pub s_a: f64,
}

/// Internal cutoff for the Rob-AntiRob column of a beyond-SMA boson sweep;
/// the direct partial-transpose spectrum is cubic in the cut dimension.
const BOSON_RRBAR_CUTOFF: u32 = 24;

/// The maximally entangled pair of the requested kind as a tripartite pure
/// state (Alice x region I factors x region II factors).
pub fn flat_pair_state(
    kind: FlatKind,
    w: &UnruhWeights,
    r: f64,
    t: &Truncation,
) -> Result<PureState> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    match kind {
        FlatKind::Dirac => {
            if !w.is_sma() {
                return Err(RqiError::invalid(
                    "qr",
                    "the Dirac pair is implemented in the single-mode basis; use qR = 1",
                ));
            }
            let rp = SqueezingParam::fermionic(r)?;
            let vac = states::dirac_vacuum(&rp)?;
            let exc = states::dirac_particle(&rp, Spin::Down)?;
            states::alice_pair(s, &vac, s, &exc)
        }
        FlatKind::Grassmann => {
            let rp = SqueezingParam::fermionic(r)?;
            states::psi_pm_state(&rp, w, PsiSign::Plus)
        }
        FlatKind::Boson => {
            let rp = SqueezingParam::bosonic(r)?;
            let p = StateFamilyParams::new(s, 0.0, 1.0)?;
            states::family_state(&p, FieldKind::Boson, &rp, w, t)
        }
        FlatKind::Bounded(n) => {
            if !w.is_sma() {
                return Err(RqiError::invalid(
                    "qr",
                    "the bounded-boson pair is implemented in the single-mode basis; use qR = 1",
                ));
            }
            let rp = SqueezingParam::bosonic(r)?;
            states::bounded_boson_pair(&rp, n)
        }
    }
}

/// Region labels of a tripartite flat state, by kind.
fn region_labels(kind: FlatKind) -> (Vec<&'static str>, Vec<&'static str>) {
    match kind {
        FlatKind::Grassmann => (vec!["I+", "I-"], vec!["II+", "II-"]),
        _ => (vec!["I"], vec!["II"]),
    }
}

/// Two-factor Alice-vs-region reduction of a tripartite state.
fn reduce_bipartite(psi: &PureState, first: &[&str], second: &[&str]) -> Result<DensityMatrix> {
    let mut keep: Vec<&str> = first.to_vec();
    keep.extend_from_slice(second);
    let rho = partial_trace_state(psi, &keep)?;
    rho.regroup(&[("X", first.len()), ("Y", second.len())])
}

/// Evaluates the six bipartite quantities at one squeezing value.
pub fn flat_point(kind: FlatKind, w: &UnruhWeights, r: f64, t: &Truncation) -> Result<FlatPoint> {
    let psi = flat_pair_state(kind, w, r, t)?;
    let (region_i, region_ii) = region_labels(kind);

    let rho_ar = reduce_bipartite(&psi, &["A"], &region_i)?;
    let rho_arbar = reduce_bipartite(&psi, &["A"], &region_ii)?;

    let s_a = von_neumann_entropy(&partial_trace_state(&psi, &["A"])?)?;
    let s_r = von_neumann_entropy(&partial_trace_state(&psi, &region_i)?)?;
    let s_rbar = von_neumann_entropy(&partial_trace_state(&psi, &region_ii)?)?;
    let s_ar = von_neumann_entropy(&rho_ar)?;
    let s_arbar = von_neumann_entropy(&rho_arbar)?;
    // the tripartite state is pure, so S_(R Rbar) equals S_A (Schmidt)
    let s_rrbar = s_a;

    let n_ar = negativity(&rho_ar)?;
    let n_arbar = negativity(&rho_arbar)?;
    let n_rrbar = match kind {
        FlatKind::Boson => {
            if w.is_sma() {
                boson_rrbar_negativity_sma(r)
            } else {
                // display-only approximation at a fixed cut; disclosed in
                // the table metadata
                let cut = t.n_max.min(BOSON_RRBAR_CUTOFF);
                let psi_rr = states::maxent_boson_pair_unchecked(r, w, cut)?;
                let rho = reduce_bipartite(&psi_rr, &region_i, &region_ii)?;
                negativity(&rho)?
            }
        }
        _ => {
            let rho = reduce_bipartite(&psi, &region_i, &region_ii)?;
            negativity(&rho)?
        }
    };

    Ok(FlatPoint {
        n_ar,
        n_arbar,
        n_rrbar,
        i_ar: s_a + s_r - s_ar,
        i_arbar: s_a + s_rbar - s_arbar,
        i_rrbar: s_r + s_rbar - s_rrbar,
        s_a,
    })
}

/// Full sweep over an r grid. Columns: n_ar, n_arbar, n_rrbar, i_ar,
/// i_arbar, i_rrbar, plus the conservation diagnostics neg_sum,
/// mi_conservation_residual (= I_AR + I_ARbar - 2 S_A) and s_a.
pub fn flat_space_curves(
    kind: FlatKind,
    w: &UnruhWeights,
    r_grid: &[f64],
    t: &Truncation,
) -> Result<CurveTable> {
    if kind.statistics() == Statistics::Fermionic {
        let limit = std::f64::consts::FRAC_PI_4 + 1e-12;
        if r_grid.iter().any(|&r| r < 0.0 || r > limit) {
            return Err(RqiError::invalid(
                "r_grid",
                "fermionic squeezing grid must lie within [0, pi/4]",
            ));
        }
    }
    let mut cols: [Vec<f64>; 9] = Default::default();
    for &r in r_grid {
        let p = flat_point(kind, w, r, t)?;
        cols[0].push(p.n_ar);
        cols[1].push(p.n_arbar);
        cols[2].push(p.n_rrbar);
        cols[3].push(p.i_ar);
        cols[4].push(p.i_arbar);
        cols[5].push(p.i_rrbar);
        cols[6].push(p.n_ar + p.n_arbar);
        cols[7].push(p.i_ar + p.i_arbar - 2.0 * p.s_a);
        cols[8].push(p.s_a);
    }
    let mut table = CurveTable::new("r", r_grid.to_vec());
    table.add_metadata("kind", format!("{kind:?}"));
    table.add_metadata("qr", w.q_r.norm());
    table.add_metadata("n_max", t.n_max);
    if kind == FlatKind::Boson && !w.is_sma() {
        table.add_metadata("rrbar_cutoff", BOSON_RRBAR_CUTOFF.min(t.n_max));
    }
    let names = [
        "n_ar",
        "n_arbar",
        "n_rrbar",
        "i_ar",
        "i_arbar",
        "i_rrbar",
        "neg_sum",
        "mi_conservation_residual",
        "s_a",
    ];
    for (name, col) in names.iter().zip(cols) {
        table.push_column(name, col)?;
    }
    Ok(table)
}

/// Closed-form Alice-Rob negativity of the bounded-occupation pair,
/// from the 2x2 block eigenvalues of the partial transpose.
pub fn bounded_n_ar_closed(n_bound: u32, r: f64) -> f64 {
    if r < 1e-12 {
        return 0.5;
    }
    let (t2, c2) = (r.tanh() * r.tanh(), r.cosh() * r.cosh());
    let s2 = r.sinh() * r.sinh();
    let cn2 = states::bounded_norm_constant(r, n_bound).powi(2);
    let mut total = 0.0;
    let mut t2n = 1.0;
    for n in 0..n_bound {
        let a = n as f64 / s2 + t2;
        let lam = t2n / (2.0 * cn2 * c2) * (a - (a * a + 4.0 / c2).sqrt());
        if lam < -TOL_NEG {
            total -= lam;
        }
        t2n *= t2;
    }
    total
}

/// Closed-form Alice-Rob negativity for the unbounded scalar pair (single
/// Unruh mode, qR = 1), summed adaptively to machine precision.
pub fn boson_n_ar_sma_closed(r: f64) -> f64 {
    if r < 1e-12 {
        return 0.5;
    }
    let (t2, c2) = (r.tanh() * r.tanh(), r.cosh() * r.cosh());
    let s2 = r.sinh() * r.sinh();
    let mut total = 0.0;
    let mut t2n = 1.0;
    let mut n = 0u32;
    loop {
        let a = n as f64 / s2 + t2;
        let lam = t2n / (4.0 * c2) * (a - (a * a + 4.0 / c2).sqrt());
        if lam < 0.0 {
            total -= lam;
        }
        // the negative branch magnitude decays at least geometrically
        if t2n / (4.0 * c2) * (2.0 / c2) / (a + 1.0) < 1e-16 && n > 4 {
            break;
        }
        t2n *= t2;
        n += 1;
        if n > 100_000 {
            break;
        }
    }
    total
}

/// Rob-AntiRob negativity of the unbounded scalar pair (qR = 1) via the
/// tridiagonal-block structure of the partial transpose.
pub fn boson_rrbar_negativity_sma(r: f64) -> f64 {
    if r < 1e-12 {
        return 0.0;
    }
    let t = r.tanh();
    let (c2, c4) = (r.cosh() * r.cosh(), r.cosh().powi(4));
    // blocks of dimension d couple states |n m| with n + m = d - 1; their
    // entries scale as tanh^(d-2), so truncate when that weight is dust
    let d_cut = ((1e-18f64.ln() / t.ln()).ceil() as usize).clamp(4, 4000);
    let mut total = 0.0;
    for d in 1..=d_cut {
        let mut m = crate::linalg::ComplexMatrix::zeros(d);
        let a = |n: usize| -> f64 {
            if n % 2 == 1 {
                t.powi(d as i32 - 1) / (2.0 * c2)
            } else {
                let l = (n / 2) as f64;
                ((d as f64 - l) * l).sqrt() * t.powi(d as i32 - 2) / (2.0 * c4)
            }
        };
        for i in 0..d - 1 {
            let v = crate::linalg::C64::new(a(i + 1), 0.0);
            m.set(i, i + 1, v);
            m.set(i + 1, i, v);
        }
        m.set(d - 1, d - 1, crate::linalg::C64::new(a(d), 0.0));
        let vals = hermitian_eigenvalues(&m).expect("symmetric block");
        total += vals.iter().filter(|&&v| v < -TOL_NEG).map(|v| -v).sum::<f64>();
    }
    total
}

/// The bounded pair's Alice-AntiRob partial transpose is positive except
/// for the single edge block {|0, N-1>, |1, N>}, whose negative eigenvalue
/// gives N = tanh^{2(N-1)} r / (2 C_N^2 cosh^2 r) (sqrt(1 + 4 N tanh^2 r /
/// cosh^2 r) - 1). It vanishes like tanh^{2N} as the bound is lifted.
pub fn bounded_n_arbar_edge_closed(n_bound: u32, r: f64) -> f64 {
    if r < 1e-12 {
        return 0.0;
    }
    let (t2, c2) = (r.tanh() * r.tanh(), r.cosh() * r.cosh());
    let cn2 = states::bounded_norm_constant(r, n_bound).powi(2);
    let w = t2.powi(n_bound as i32 - 1) / (cn2 * c2);
    let lam = w * ((1.0 + 4.0 * n_bound as f64 * t2 / c2).sqrt() - 1.0) / 2.0;
    if lam > TOL_NEG { lam } else { 0.0 }
}

/// Outcome of a bounded-occupation crossing search.
#[derive(Debug, Clone, Copy)]
pub enum CrossingResult {
    Found {
        r_c: f64,
        /// true when the higher-N curve sits below the lower-N curve before
        /// the crossing and above it after.
        n2_lower_before: bool,
    },
    NoCrossing,
}

/// Locates the crossing of the Alice-Rob negativity curves for two bounds
/// N1 < N2 inside the search window by scan + bisection (|dr| <= 1e-8).
pub fn bounded_crossing(n1: u32, n2: u32, r_lo: f64, r_hi: f64) -> Result<CrossingResult> {
    if n1 < 1 {
        return Err(RqiError::invalid("n1", "must be >= 1"));
    }
    if n1 == n2 {
        return Ok(CrossingResult::NoCrossing);
    }
    let f = |r: f64| bounded_n_ar_closed(n1, r) - bounded_n_ar_closed(n2, r);
    let scan = 400;
    let mut prev_r = r_lo.max(1e-6);
    let mut prev_f = f(prev_r);
    for i in 1..=scan {
        let r = r_lo.max(1e-6) + (r_hi - r_lo.max(1e-6)) * i as f64 / scan as f64;
        let fr = f(r);
        if prev_f == 0.0 || (prev_f < 0.0) != (fr < 0.0) {
            let r_c = bisect(f, prev_r, r, 1e-8);
            // sign pattern just outside the bracket
            let before = f((r_c - 0.05).max(1e-6));
            return Ok(CrossingResult::Found {
                r_c,
                n2_lower_before: before > 0.0,
            });
        }
        prev_r = r;
        prev_f = fr;
    }
    Ok(CrossingResult::NoCrossing)
}

/// Multimode maximally entangled fermion families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MultimodeVariant {
    /// Dirac vacuum + one-particle pair over n frequency modes.
    VacuumPlusPair,
    /// Bell state of two different frequency-spin modes.
    BellTwoFrequencies,
    /// Spinless (Grassmann) vacuum + one-particle pair.
    Grassmann,
}

/// Evaluates the multimode binomial negativity sum. All variants collapse to
/// cos^2(r)/2 independently of the number of modes.
pub fn multimode_fermion_negativity(
    n_modes: u32,
    r: f64,
    variant: MultimodeVariant,
) -> Result<f64> {
    if n_modes < 1 {
        return Err(RqiError::invalid("n_modes", "must be >= 1"));
    }
    if n_modes > 60 {
        return Err(RqiError::invalid(
            "n_modes",
            "binomial accumulation is guarded at n <= 60",
        ));
    }
    if !(0.0..=std::f64::consts::FRAC_PI_4 + 1e-12).contains(&r) {
        return Err(RqiError::invalid("r", "fermionic r must lie in [0, pi/4]"));
    }
    let n = n_modes as i64;
    let tan2 = r.tan() * r.tan();
    let cos = r.cos();
    // (prefactor, binomial row order, number of terms)
    let (pref, row): (f64, i64) = match variant {
        MultimodeVariant::VacuumPlusPair => (cos.powi(4 * n as i32) / 2.0, 2 * n - 1),
        MultimodeVariant::BellTwoFrequencies => (cos.powi(4 * n as i32 - 2) / 2.0, 2 * n - 2),
        MultimodeVariant::Grassmann => (cos.powi(2 * n as i32) / 2.0, n - 1),
    };
    // sum_{m=0}^{row} C(row, m) tan^{2m} r via the recurrence
    // C(row, m+1) = C(row, m) (row - m)/(m + 1)
    let mut sum = 0.0f64;
    let mut binom = 1.0f64;
    let mut t2m = 1.0f64;
    for m in 0..=row.max(0) {
        sum += binom * t2m;
        binom *= (row - m) as f64 / (m + 1) as f64;
        t2m *= tan2;
    }
    Ok(pref * sum)
}

/// Which maximally entangled fermionic state a sector analysis starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectorState {
    PsiPlus,
    PsiMinus,
    PsiOne,
}

/// Negativities of the full and charge-resolved bipartitions.
#[derive(Debug, Clone, Copy)]
pub struct SectorReport {
    pub full_ar: f64,
    pub full_arbar: f64,
    pub particle_ar: f64,
    pub particle_arbar: f64,
    pub antiparticle_ar: f64,
    pub antiparticle_arbar: f64,
}

/// Particle/antiparticle sector tradeoff for one of the three entangled
/// families, tracing the opposite charge sector out of each region.
pub fn sector_negativities(
    state: SectorState,
    r: f64,
    w: &UnruhWeights,
) -> Result<SectorReport> {
    let rp = SqueezingParam::fermionic(r)?;
    let psi = match state {
        SectorState::PsiPlus => states::psi_pm_state(&rp, w, PsiSign::Plus)?,
        SectorState::PsiMinus => states::psi_pm_state(&rp, w, PsiSign::Minus)?,
        SectorState::PsiOne => states::psi_one_state(&rp, w)?,
    };
    let neg_of = |first: &[&str], second: &[&str]| -> Result<f64> {
        negativity(&reduce_bipartite(&psi, first, second)?)
    };
    Ok(SectorReport {
        full_ar: neg_of(&["A"], &["I+", "I-"])?,
        full_arbar: neg_of(&["A"], &["II+", "II-"])?,
        particle_ar: neg_of(&["A"], &["I+"])?,
        particle_arbar: neg_of(&["A"], &["II+"])?,
        antiparticle_ar: neg_of(&["A"], &["I-"])?,
        antiparticle_arbar: neg_of(&["A"], &["II-"])?,
    })
}

/// Closed forms for |Psi_1|: N_AR = ||qR|^2 cos^2 r - |qL|^2 sin^2 r| / 2 and
/// the wedge-swapped partner.
pub fn psi_one_n_ar_closed(r: f64, w: &UnruhWeights) -> f64 {
    let (c2, s2) = (r.cos() * r.cos(), r.sin() * r.sin());
    0.5 * (w.q_r.norm_sqr() * c2 - w.q_l.norm_sqr() * s2).abs()
}

pub fn psi_one_n_arbar_closed(r: f64, w: &UnruhWeights) -> f64 {
    let (c2, s2) = (r.cos() * r.cos(), r.sin() * r.sin());
    0.5 * (w.q_l.norm_sqr() * c2 - w.q_r.norm_sqr() * s2).abs()
}

/// Acceleration at which the |Psi_1> Alice-AntiRob negativity vanishes:
/// tan^2 r = 1/|qR|^2 - 1, located by root-finding the numerical curve.
pub fn psi_one_arbar_zero(w: &UnruhWeights) -> Result<f64> {
    let f = |r: f64| -> f64 {
        let (c2, s2) = (r.cos() * r.cos(), r.sin() * r.sin());
        w.q_l.norm_sqr() * c2 - w.q_r.norm_sqr() * s2
    };
    let (lo, hi) = (0.0, std::f64::consts::FRAC_PI_4);
    if (f(lo) < 0.0) == (f(hi) < 0.0) {
        return Err(RqiError::invalid("qr", "no zero crossing in [0, pi/4]"));
    }
    Ok(bisect(f, lo, hi, 1e-10))
}

/// Summary of an amplification scan.
#[derive(Debug, Clone, Copy)]
pub struct AmplificationSummary {
    pub max_n: f64,
    pub r_at_max: f64,
    pub inertial_n: f64,
    /// max_n / N(0) - 1 when the inertial negativity is nonzero.
    pub relative_gain: Option<f64>,
    /// max_n - N(0); reported always, the headline number when N(0) = 0.
    pub absolute_gain: f64,
}

/// Alice-Rob and Alice-AntiRob negativities of the amplification family over
/// an r grid, plus the located maximum of N_AR.
pub fn amplification_scan(
    params: &StateFamilyParams,
    kind: FieldKind,
    w: &UnruhWeights,
    r_grid: &[f64],
    t: &Truncation,
) -> Result<(CurveTable, AmplificationSummary)> {
    let n_ar_at = |r: f64| -> Result<f64> {
        let stat = match kind {
            FieldKind::Boson => SqueezingParam::bosonic(r)?,
            FieldKind::Grassmann => SqueezingParam::fermionic(r)?,
        };
        let psi = states::family_state(params, kind, &stat, w, t)?;
        let region_i: &[&str] = match kind {
            FieldKind::Boson => &["I"],
            FieldKind::Grassmann => &["I+", "I-"],
        };
        negativity(&reduce_bipartite(&psi, &["A"], region_i)?)
    };
    let n_arbar_at = |r: f64| -> Result<f64> {
        let stat = match kind {
            FieldKind::Boson => SqueezingParam::bosonic(r)?,
            FieldKind::Grassmann => SqueezingParam::fermionic(r)?,
        };
        let psi = states::family_state(params, kind, &stat, w, t)?;
        let region_ii: &[&str] = match kind {
            FieldKind::Boson => &["II"],
            FieldKind::Grassmann => &["II+", "II-"],
        };
        negativity(&reduce_bipartite(&psi, &["A"], region_ii)?)
    };

    let mut ar = Vec::with_capacity(r_grid.len());
    let mut arbar = Vec::with_capacity(r_grid.len());
    for &r in r_grid {
        ar.push(n_ar_at(r)?);
        arbar.push(n_arbar_at(r)?);
    }

    // refine the grid argmax by golden section on the bracketing interval
    let imax = ar
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let lo = if imax == 0 { r_grid[0] } else { r_grid[imax - 1] };
    let hi = if imax + 1 == r_grid.len() {
        r_grid[imax]
    } else {
        r_grid[imax + 1]
    };
    let (r_at_max, max_n) = if lo < hi {
        golden_max(|r| n_ar_at(r).unwrap_or(f64::NEG_INFINITY), lo, hi, 1e-8)
    } else {
        (r_grid[imax], ar[imax])
    };
    let inertial_n = n_ar_at(0.0)?;
    let relative_gain = if inertial_n > 1e-12 {
        Some(max_n / inertial_n - 1.0)
    } else {
        None
    };

    let mut table = CurveTable::new("r", r_grid.to_vec());
    table.add_metadata("p", params.p);
    table.add_metadata("alpha", params.alpha);
    table.add_metadata("beta", params.beta);
    table.add_metadata("qr", w.q_r.norm());
    table.add_metadata("kind", format!("{kind:?}"));
    table.push_column("n_ar", ar)?;
    table.push_column("n_arbar", arbar)?;
    let summary = AmplificationSummary {
        max_n,
        r_at_max,
        inertial_n,
        relative_gain,
        absolute_gain: max_n - inertial_n,
    };
    Ok((table, summary))
}

/// cos^2(r)/2, the universal fermionic Alice-Rob law at qR = 1.
pub fn fermion_n_ar_closed(r: f64) -> f64 {
    0.5 * r.cos() * r.cos()
}

/// sin^2(r)/2, its Alice-AntiRob partner.
pub fn fermion_n_arbar_closed(r: f64) -> f64 {
    0.5 * r.sin() * r.sin()
}
