//! Constructors for every state family used by the scenarios: scalar and
//! fermionic vacua and excitations in the accelerated basis, entangled
//! families, and their reduced density matrices, in explicit truncated
//! tensor-product form.
//!
//! Fermionic factors follow the canonical mode order (I+, II-, I-, II+) for
//! the Grassmann field and (up_I, down_I, up_II, down_II) for the Dirac
//! field; anticommutation signs come from Jordan-Wigner strings over those
//! orders, never from hand-entered amplitudes.

use crate::error::{Result, RqiError};
use crate::fock;
use crate::linalg::{C64, ComplexMatrix, DensityMatrix, FactorShape, PureState};
use crate::modes::{GammaValue, ExpansionParams, SqueezingParam, Statistics, chi_sq, gamma_sq_fermion};

/// Complex pair selecting the Unruh-mode superposition, |qR|^2 + |qL|^2 = 1.
#[derive(Debug, Clone, Copy)]
pub struct UnruhWeights {
    pub q_r: C64,
    pub q_l: C64,
}

impl UnruhWeights {
    pub fn new(q_r: C64, q_l: C64) -> Result<Self> {
        let n = q_r.norm_sqr() + q_l.norm_sqr();
        if (n - 1.0).abs() > 1e-12 {
            return Err(RqiError::invalid(
                "unruh_weights",
                format!("|qR|^2 + |qL|^2 = {n}, expected 1"),
            ));
        }
        Ok(Self { q_r, q_l })
    }

    /// Single-mode-approximation choice qR = 1.
    pub fn sma() -> Self {
        Self {
            q_r: C64::new(1.0, 0.0),
            q_l: C64::new(0.0, 0.0),
        }
    }

    /// Real weights from |qR| alone, with qL = sqrt(1 - qR^2) >= 0.
    pub fn from_qr(q_r: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&q_r) {
            return Err(RqiError::invalid("qr", format!("must lie in [0, 1], got {q_r}")));
        }
        Self::new(
            C64::new(q_r, 0.0),
            C64::new((1.0 - q_r * q_r).max(0.0).sqrt(), 0.0),
        )
    }

    pub fn is_sma(&self) -> bool {
        (self.q_r.norm() - 1.0).abs() < 1e-14 && self.q_l.norm() < 1e-14
    }
}

/// Amplitudes of the entanglement-amplification family.
#[derive(Debug, Clone, Copy)]
pub struct StateFamilyParams {
    pub p: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl StateFamilyParams {
    pub fn new(p: f64, alpha: f64, beta: f64) -> Result<Self> {
        for (name, v) in [("p", p), ("alpha", alpha), ("beta", beta)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(RqiError::InvalidParam {
                    name,
                    reason: format!("must lie in [0, 1], got {v}"),
                });
            }
        }
        Ok(Self { p, alpha, beta })
    }
}

/// Highest bosonic occupation retained. The geometric tail above n_max must
/// carry at most 1e-10 probability for the r in use.
#[derive(Debug, Clone, Copy)]
pub struct Truncation {
    pub n_max: u32,
}

impl Truncation {
    pub const TAIL_BOUND: f64 = 1e-10;

    pub fn new(n_max: u32) -> Result<Self> {
        if n_max < 1 {
            return Err(RqiError::invalid("n_max", "must be >= 1"));
        }
        Ok(Self { n_max })
    }

    /// Tail mass sum_{n > n_max} tanh^{2n} r / cosh^2 r = tanh(r)^{2(n_max+1)}.
    pub fn tail_mass(&self, r: f64) -> f64 {
        r.tanh().powi(2 * (self.n_max as i32 + 1))
    }

    pub fn check(&self, r: f64) -> Result<()> {
        let tail = self.tail_mass(r);
        if tail > Self::TAIL_BOUND {
            return Err(RqiError::Truncation {
                tail,
                r,
                suggested: Self::required_n_max(r),
            });
        }
        Ok(())
    }

    /// Smallest n_max whose tail satisfies the bound at this r.
    pub fn required_n_max(r: f64) -> u32 {
        let t = r.tanh();
        if t <= 0.0 {
            return 1;
        }
        let n = Self::TAIL_BOUND.ln() / (2.0 * t.ln()) - 1.0;
        (n.ceil().max(1.0) as u32).max(1)
    }

    /// Convenience: a truncation that is tail-valid at r (used by sweeps).
    pub fn for_r(r: f64) -> Self {
        Self {
            n_max: Self::required_n_max(r).max(1),
        }
    }
}

fn require_bosonic(r: &SqueezingParam) -> Result<f64> {
    match r.statistics {
        Statistics::Bosonic => Ok(r.r),
        Statistics::Fermionic => Err(RqiError::invalid("r", "expected a bosonic squeezing parameter")),
    }
}

fn require_fermionic(r: &SqueezingParam) -> Result<f64> {
    match r.statistics {
        Statistics::Fermionic => Ok(r.r),
        Statistics::Bosonic => Err(RqiError::invalid("r", "expected a fermionic squeezing parameter")),
    }
}

/// f(n) = tanh^n r / cosh r, the two-mode squeezed amplitude profile.
fn squeezed_profile(r: f64, n_max: u32) -> Vec<f64> {
    let (t, c) = (r.tanh(), r.cosh());
    let mut f = Vec::with_capacity(n_max as usize + 1);
    let mut cur = 1.0 / c;
    for _ in 0..=n_max {
        f.push(cur);
        cur *= t;
    }
    f
}

/// Minkowski vacuum of one scalar Unruh mode in the Rindler basis:
/// (1/cosh r) sum_n tanh^n r |n>_I |n>_II, truncated at n_max.
pub fn scalar_vacuum(r: &SqueezingParam, t: &Truncation) -> Result<PureState> {
    let r = require_bosonic(r)?;
    t.check(r)?;
    let d = t.n_max as usize + 2;
    let f = squeezed_profile(r, t.n_max);
    let shape = FactorShape::new(&[("I", d), ("II", d)])?;
    let mut amps = vec![C64::new(0.0, 0.0); d * d];
    for (n, &fn_val) in f.iter().enumerate() {
        amps[n * d + n] = C64::new(fn_val, 0.0);
    }
    PureState::new(shape, amps)
}

/// One Unruh particle on the scalar vacuum:
/// sum_n f(n) sqrt(n+1)/cosh r [ qL |n>_I |n+1>_II + qR |n+1>_I |n>_II ].
pub fn scalar_unruh_particle(
    r: &SqueezingParam,
    w: &UnruhWeights,
    t: &Truncation,
) -> Result<PureState> {
    let r = require_bosonic(r)?;
    t.check(r)?;
    let d = t.n_max as usize + 2;
    let f = squeezed_profile(r, t.n_max);
    let shape = FactorShape::new(&[("I", d), ("II", d)])?;
    let mut amps = vec![C64::new(0.0, 0.0); d * d];
    let cosh = r.cosh();
    for (n, &fn_val) in f.iter().enumerate() {
        let c = fn_val * ((n + 1) as f64).sqrt() / cosh;
        amps[n * d + (n + 1)] += w.q_l * c;
        amps[(n + 1) * d + n] += w.q_r * c;
    }
    PureState::new(shape, amps)
}

/// Canonical Grassmann mode order: (I+, II-, I-, II+).
const GRASS_IP: usize = 0;
const GRASS_IIM: usize = 1;
const GRASS_IM: usize = 2;
const GRASS_IIP: usize = 3;

fn grassmann_shape() -> FactorShape {
    FactorShape::new(&[("I+", 2), ("II-", 2), ("I-", 2), ("II+", 2)]).expect("static shape")
}

struct GrassmannOps {
    /// C_R^dag = cos r c+_{I+} - sin r d_{II-}
    c_r_dag: ComplexMatrix,
    /// C_L^dag = cos r c+_{II+} - sin r d_{I-}
    c_l_dag: ComplexMatrix,
    /// D_R^dag = sin r c_{I+} + cos r d+_{II-}
    d_r_dag: ComplexMatrix,
    /// D_L^dag = sin r c_{II+} + cos r d+_{I-}
    d_l_dag: ComplexMatrix,
    vacuum: Vec<C64>,
}

fn grassmann_ops(r: f64) -> GrassmannOps {
    let (c, s) = (r.cos(), r.sin());
    let n = 4;
    let cre = |p| fock::creation(n, p);
    let ann = |p| fock::annihilation(n, p);
    let lin = |a: f64, ma: &ComplexMatrix, b: f64, mb: &ComplexMatrix| {
        ComplexMatrix::from_fn(1 << n, |i, j| ma.get(i, j) * a + mb.get(i, j) * b)
    };
    let c_r_dag = lin(c, &cre(GRASS_IP), -s, &ann(GRASS_IIM));
    let c_l_dag = lin(c, &cre(GRASS_IIP), -s, &ann(GRASS_IM));
    let d_r_dag = lin(s, &ann(GRASS_IP), c, &cre(GRASS_IIM));
    let d_l_dag = lin(s, &ann(GRASS_IIP), c, &cre(GRASS_IM));

    // |0> = (cos r + sin r c+_{I+} d+_{II-}) (cos r - sin r d+_{I-} c+_{II+}) |vac>
    let bare = fock::vacuum_vector(n);
    let pair_r = cre(GRASS_IP).matmul(&cre(GRASS_IIM));
    let pair_l = cre(GRASS_IM).matmul(&cre(GRASS_IIP));
    let stage1 = fock::axpy(
        C64::new(-s, 0.0),
        &fock::apply(&pair_l, &bare),
        &bare.iter().map(|a| a * c).collect::<Vec<_>>(),
    );
    let vacuum = fock::axpy(
        C64::new(s, 0.0),
        &fock::apply(&pair_r, &stage1),
        &stage1.iter().map(|a| a * c).collect::<Vec<_>>(),
    );
    GrassmannOps {
        c_r_dag,
        c_l_dag,
        d_r_dag,
        d_l_dag,
        vacuum,
    }
}

/// Grassmann Minkowski vacuum over (I+, II-, I-, II+):
/// cos^2 r |0000> - sin r cos r |0011> + sin r cos r |1100> - sin^2 r |1111>
/// in this factor order.
pub fn grassmann_vacuum(r: &SqueezingParam) -> Result<PureState> {
    let r = require_fermionic(r)?;
    let ops = grassmann_ops(r);
    PureState::new(grassmann_shape(), ops.vacuum)
}

/// Unruh particle c+_U|0> = [qR C_R^dag + qL C_L^dag] |0>.
pub fn grassmann_unruh_particle(r: &SqueezingParam, w: &UnruhWeights) -> Result<PureState> {
    let r = require_fermionic(r)?;
    let ops = grassmann_ops(r);
    let right = fock::apply(&ops.c_r_dag, &ops.vacuum);
    let left = fock::apply(&ops.c_l_dag, &ops.vacuum);
    let amps = fock::axpy(w.q_r, &right, &fock::apply_scalar(w.q_l, &left));
    PureState::new(grassmann_shape(), amps)
}

/// Unruh antiparticle d+_U|0> = [qL D_R^dag + qR D_L^dag] |0>.
pub fn grassmann_unruh_antiparticle(r: &SqueezingParam, w: &UnruhWeights) -> Result<PureState> {
    let r = require_fermionic(r)?;
    let ops = grassmann_ops(r);
    let right = fock::apply(&ops.d_r_dag, &ops.vacuum);
    let left = fock::apply(&ops.d_l_dag, &ops.vacuum);
    let amps = fock::axpy(w.q_l, &right, &fock::apply_scalar(w.q_r, &left));
    PureState::new(grassmann_shape(), amps)
}

/// Spin component along the quantization axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spin {
    Up,
    Down,
}

/// Dirac single-factor basis order: |0>, |up>, |down>, |p> (spin pair).
pub const DIRAC_BASIS: [&str; 4] = ["0", "up", "down", "p"];

// Dirac JW mode order: (up_I, down_I, up_II, down_II).
const DIRAC_UP_I: usize = 0;
const DIRAC_DOWN_I: usize = 1;
const DIRAC_UP_II: usize = 2;
const DIRAC_DOWN_II: usize = 3;

/// Regroups the 16 JW amplitudes (bit order up_I, down_I, up_II, down_II)
/// into (I: 4) x (II: 4) factors with basis order 0, up, down, p.
fn dirac_regroup(jw: &[C64]) -> Vec<C64> {
    let idx4 = |hi: usize, lo: usize| hi + 2 * lo; // (0,0)->0 (1,0)->up (0,1)->down (1,1)->p
    let mut out = vec![C64::new(0.0, 0.0); 16];
    for (b, &a) in jw.iter().enumerate() {
        let (b3, b2, b1, b0) = ((b >> 3) & 1, (b >> 2) & 1, (b >> 1) & 1, b & 1);
        let i_region = idx4(b3, b2);
        let ii_region = idx4(b1, b0);
        out[i_region * 4 + ii_region] = a;
    }
    out
}

fn dirac_shape() -> FactorShape {
    FactorShape::new(&[("I", 4), ("II", 4)]).expect("static shape")
}

/// Dirac vacuum amplitudes in the 16-dim JW space (crate-internal, used by
/// the annihilation-check oracle).
pub(crate) fn dirac_vacuum_jw(r: f64) -> Vec<C64> {
    let (c, s) = (r.cos(), r.sin());
    let n = 4;
    let bare = fock::vacuum_vector(n);
    // per-spin squeezers: (cos r + sin r c+_{up,I} d+_{down,II}) and
    // (cos r + sin r c+_{down,I} d+_{up,II})
    let pair_up = fock::creation(n, DIRAC_UP_I).matmul(&fock::creation(n, DIRAC_DOWN_II));
    let pair_down = fock::creation(n, DIRAC_DOWN_I).matmul(&fock::creation(n, DIRAC_UP_II));
    let stage1 = fock::axpy(
        C64::new(s, 0.0),
        &fock::apply(&pair_down, &bare),
        &bare.iter().map(|a| a * c).collect::<Vec<_>>(),
    );
    fock::axpy(
        C64::new(s, 0.0),
        &fock::apply(&pair_up, &stage1),
        &stage1.iter().map(|a| a * c).collect::<Vec<_>>(),
    )
}

/// Transformed Unruh annihilator c_{s,U} = cos r c_{s,I} - sin r d+_{-s,II}
/// in the 16-dim JW space (crate-internal oracle helper).
#[cfg_attr(not(test), allow(dead_code))]
pub(crate) fn dirac_unruh_annihilator(r: f64, spin: Spin) -> ComplexMatrix {
    let (c, s) = (r.cos(), r.sin());
    let (part, anti) = match spin {
        Spin::Up => (DIRAC_UP_I, DIRAC_DOWN_II),
        Spin::Down => (DIRAC_DOWN_I, DIRAC_UP_II),
    };
    let a = fock::annihilation(4, part);
    let d = fock::creation(4, anti);
    ComplexMatrix::from_fn(16, |i, j| a.get(i, j) * c - d.get(i, j) * s)
}

/// Dirac Minkowski vacuum over (I: 4, II: 4):
/// cos^2 r |00> + sin r cos r (|up,down> + |down,up>) + sin^2 r |p,p>.
pub fn dirac_vacuum(r: &SqueezingParam) -> Result<PureState> {
    let r = require_fermionic(r)?;
    PureState::new(dirac_shape(), dirac_regroup(&dirac_vacuum_jw(r)))
}

/// Dirac one-particle Unruh state (single-mode approximation):
/// |up>_U = cos r |up, 0> + sin r |p, up>,
/// |down>_U = cos r |down, 0> - sin r |p, down>.
pub fn dirac_particle(r: &SqueezingParam, spin: Spin) -> Result<PureState> {
    let r_val = require_fermionic(r)?;
    let vac = dirac_vacuum_jw(r_val);
    let (c, s) = (r_val.cos(), r_val.sin());
    let part = match spin {
        Spin::Up => DIRAC_UP_I,
        Spin::Down => DIRAC_DOWN_I,
    };
    let anti = match spin {
        Spin::Up => DIRAC_DOWN_II,
        Spin::Down => DIRAC_UP_II,
    };
    // c+_{s,U} = cos r c+_{s,I} - sin r d_{-s,II}
    let cre = fock::creation(4, part);
    let ann = fock::annihilation(4, anti);
    let op = ComplexMatrix::from_fn(16, |i, j| cre.get(i, j) * c - ann.get(i, j) * s);
    PureState::new(dirac_shape(), dirac_regroup(&fock::apply(&op, &vac)))
}

/// Tensor (a0 |0>_A rob0 + a1 |1>_A rob1), Alice as an abstract dim-2 factor
/// prepended to the Rob factors. Both Rob states must share a shape.
pub fn alice_pair(a0: f64, rob0: &PureState, a1: f64, rob1: &PureState) -> Result<PureState> {
    if rob0.shape() != rob1.shape() {
        return Err(RqiError::BadShape("Rob states differ in shape".into()));
    }
    let rd = rob0.shape().total_dim();
    let mut factors: Vec<(&str, usize)> = vec![("A", 2)];
    let labels = rob0.shape().labels();
    for (l, d) in labels.iter().zip(rob0.shape().dims()) {
        factors.push((l, *d));
    }
    let shape = FactorShape::new(&factors)?;
    let mut amps = vec![C64::new(0.0, 0.0); 2 * rd];
    for (i, &a) in rob0.amplitudes().iter().enumerate() {
        amps[i] = a * a0;
    }
    for (i, &a) in rob1.amplitudes().iter().enumerate() {
        amps[rd + i] = a * a1;
    }
    PureState::new(shape, amps)
}

/// Bounded-occupation analog of the maximally entangled scalar pair:
/// (|0>_A |0_N> + |1>_A |1_N>) / C_N(r) over (A: 2, I: N+1, II: N+1).
pub fn bounded_boson_pair(r: &SqueezingParam, n_bound: u32) -> Result<PureState> {
    let r = require_bosonic(r)?;
    if n_bound < 1 {
        return Err(RqiError::invalid("n_bound", "must be >= 1"));
    }
    let nn = n_bound as usize;
    let d = nn + 1;
    let f = squeezed_profile(r, n_bound);
    let cosh = r.cosh();
    let mut amps = vec![C64::new(0.0, 0.0); 2 * d * d];
    for (n, &fv) in f.iter().enumerate().take(nn + 1) {
        amps[n * d + n] = C64::new(fv, 0.0); // |0>_A |n n>
    }
    for (n, &fv) in f.iter().enumerate().take(nn) {
        let c = fv * ((n + 1) as f64).sqrt() / cosh;
        amps[d * d + (n + 1) * d + n] = C64::new(c, 0.0); // |1>_A |n+1 n>
    }
    let shape = FactorShape::new(&[("A", 2), ("I", d), ("II", d)])?;
    PureState::new(shape, amps)
}

/// Closed-form normalization C_N(r) of `bounded_boson_pair`:
/// sqrt(2 - tanh^{2N} r (tanh^2 r + 1 + N / cosh^2 r)).
pub fn bounded_norm_constant(r: f64, n_bound: u32) -> f64 {
    let t2 = r.tanh() * r.tanh();
    let tail = t2.powi(n_bound as i32) * (t2 + 1.0 + n_bound as f64 / r.cosh().powi(2));
    (2.0 - tail).sqrt()
}

/// Maximally entangled scalar pair at a fixed cut with no tail validation;
/// display-only approximation used for the Rob-AntiRob column of
/// beyond-single-mode sweeps, where the honest cut would make the
/// partial-transpose spectrum cubically expensive.
pub(crate) fn maxent_boson_pair_unchecked(
    r: f64,
    w: &UnruhWeights,
    n_max: u32,
) -> Result<PureState> {
    let d = n_max as usize + 2;
    let f = squeezed_profile(r, n_max);
    let cosh = r.cosh();
    let rd = d * d;
    let mut amps = vec![C64::new(0.0, 0.0); 2 * rd];
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for (n, &fv) in f.iter().enumerate() {
        amps[n * d + n] = C64::new(fv * s, 0.0);
    }
    for (n, &fv) in f.iter().enumerate() {
        let c = fv * ((n + 1) as f64).sqrt() / cosh * s;
        amps[rd + n * d + (n + 1)] += w.q_l * c;
        amps[rd + (n + 1) * d + n] += w.q_r * c;
    }
    let shape = FactorShape::new(&[("A", 2), ("I", d), ("II", d)])?;
    PureState::new(shape, amps)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Boson,
    Grassmann,
}

/// Amplification family
/// P |0>_A [alpha |1> + sqrt(1-alpha^2)|0>] +
/// sqrt(1-P^2) |1>_A [beta |1> + sqrt(1-beta^2)|0>],
/// where |1> is the Unruh excitation of the chosen kind, expanded in the
/// Rindler tensor basis.
pub fn family_state(
    params: &StateFamilyParams,
    kind: FieldKind,
    r: &SqueezingParam,
    w: &UnruhWeights,
    t: &Truncation,
) -> Result<PureState> {
    let (vac, one) = match kind {
        FieldKind::Boson => (scalar_vacuum(r, t)?, scalar_unruh_particle(r, w, t)?),
        FieldKind::Grassmann => (grassmann_vacuum(r)?, grassmann_unruh_particle(r, w)?),
    };
    let (p, a, b) = (params.p, params.alpha, params.beta);
    let mix = |c1: f64, st1: &PureState, c0: f64, st0: &PureState| -> Vec<C64> {
        st1.amplitudes()
            .iter()
            .zip(st0.amplitudes())
            .map(|(x1, x0)| x1 * c1 + x0 * c0)
            .collect()
    };
    let rob0 = PureState::new(
        vac.shape().clone(),
        mix(a, &one, (1.0 - a * a).max(0.0).sqrt(), &vac),
    )?;
    let rob1 = PureState::new(
        vac.shape().clone(),
        mix(b, &one, (1.0 - b * b).max(0.0).sqrt(), &vac),
    )?;
    alice_pair(p, &rob0, (1.0 - p * p).max(0.0).sqrt(), &rob1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsiSign {
    Plus,
    Minus,
}

/// |Psi+-> = (|0>_A |0> + |1>_A |1>^+-_U)/sqrt(2): occupation-number
/// entangled pairs with a particle (+) or antiparticle (-) Unruh excitation.
pub fn psi_pm_state(r: &SqueezingParam, w: &UnruhWeights, sign: PsiSign) -> Result<PureState> {
    let vac = grassmann_vacuum(r)?;
    let exc = match sign {
        PsiSign::Plus => grassmann_unruh_particle(r, w)?,
        PsiSign::Minus => grassmann_unruh_antiparticle(r, w)?,
    };
    let s = std::f64::consts::FRAC_1_SQRT_2;
    alice_pair(s, &vac, s, &exc)
}

/// |Psi1> = (|+>_A |1>^-_U + |->_A |1>^+_U)/sqrt(2): maximally entangled in
/// the particle/antiparticle degree of freedom. Alice's dim-2 factor holds
/// her particle (index 0) / antiparticle (index 1) charge label.
pub fn psi_one_state(r: &SqueezingParam, w: &UnruhWeights) -> Result<PureState> {
    let anti = grassmann_unruh_antiparticle(r, w)?;
    let part = grassmann_unruh_particle(r, w)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    alice_pair(s, &anti, s, &part)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

/// Alice-Rob reduction of a spin Bell state with Rob accelerated: Alice is a
/// spin qubit (up, down), Rob a qutrit (up, down, pair).
///
/// rho = 1/2 [ cos^2 r (|s1 s2><s1 s2| +- cross) +
///             sin^2 r (|up p><up p| + |down p><down p|) ].
pub fn spin_bell_reduced(r: &SqueezingParam, which: BellState) -> Result<DensityMatrix> {
    let r = require_fermionic(r)?;
    let (c2, s2) = (r.cos() * r.cos(), r.sin() * r.sin());
    let shape = FactorShape::new(&[("A", 2), ("R", 3)])?;
    // Alice basis: up, down. Rob basis: up, down, p.
    let idx = |a: usize, b: usize| a * 3 + b;
    let mut m = ComplexMatrix::zeros(6);
    let (k1, k2, sign) = match which {
        BellState::PhiPlus => (idx(0, 0), idx(1, 1), 1.0),
        BellState::PhiMinus => (idx(0, 0), idx(1, 1), -1.0),
        BellState::PsiPlus => (idx(0, 1), idx(1, 0), 1.0),
        BellState::PsiMinus => (idx(0, 1), idx(1, 0), -1.0),
    };
    m.set(k1, k1, C64::new(c2 / 2.0, 0.0));
    m.set(k2, k2, C64::new(c2 / 2.0, 0.0));
    m.set(k1, k2, C64::new(sign * c2 / 2.0, 0.0));
    m.set(k2, k1, C64::new(sign * c2 / 2.0, 0.0));
    m.set(idx(0, 2), idx(0, 2), C64::new(s2 / 2.0, 0.0));
    m.set(idx(1, 2), idx(1, 2), C64::new(s2 / 2.0, 0.0));
    DensityMatrix::new(m, shape)
}

/// Occupation-number density matrix after tracing the total spin out of the
/// vacuum + one-particle superposition with amplitudes (mu, beta, gamma) on
/// |00>, |up down>, |down up>. Basis: Alice occupation (0,1) x Rob
/// occupation (0,1,2).
pub fn spin_traced_reduced(
    mu: f64,
    beta: f64,
    gamma: f64,
    r: &SqueezingParam,
) -> Result<DensityMatrix> {
    let r = require_fermionic(r)?;
    let w = mu * mu + beta * beta + gamma * gamma;
    if w > 1.0 + 1e-12 {
        return Err(RqiError::invalid(
            "mu/beta/gamma",
            format!("|mu|^2+|beta|^2+|gamma|^2 = {w} exceeds 1"),
        ));
    }
    let (c, s) = (r.cos(), r.sin());
    let (c2, s2) = (c * c, s * s);
    let shape = FactorShape::new(&[("A", 2), ("R", 3)])?;
    let idx = |a: usize, b: usize| a * 3 + b;
    let mut m = ComplexMatrix::zeros(6);
    let mu2 = mu * mu;
    m.set(idx(0, 0), idx(0, 0), C64::new(mu2 * c2 * c2, 0.0));
    m.set(idx(0, 1), idx(0, 1), C64::new(mu2 * 2.0 * s2 * c2, 0.0));
    m.set(idx(0, 2), idx(0, 2), C64::new(mu2 * s2 * s2, 0.0));
    let cross = mu * c2 * c * (beta - gamma) / std::f64::consts::SQRT_2;
    m.set(idx(0, 0), idx(1, 1), C64::new(cross, 0.0));
    m.set(idx(1, 1), idx(0, 0), C64::new(cross, 0.0));
    m.set(idx(1, 1), idx(1, 1), C64::new((1.0 - mu2) * c2, 0.0));
    m.set(idx(1, 2), idx(1, 2), C64::new((1.0 - mu2) * s2, 0.0));
    DensityMatrix::new(m, shape)
}

/// Collapse `in` vacuum in the out/horizon basis.
///
/// Bosonic: two-mode squeezed state over (hor, out) with tanh r = e^{-4 pi M w}.
/// Fermionic: cos^2 r |00;00> - (sin 2r)/2 |01;10> + (sin 2r)/2 |10;01>
///            - sin^2 r |11;11>, each factor indexed 2*n_particle + n_anti.
pub fn collapse_out_state(r: &SqueezingParam, t: &Truncation) -> Result<PureState> {
    match r.statistics {
        Statistics::Bosonic => {
            t.check(r.r)?;
            let d = t.n_max as usize + 2;
            let f = squeezed_profile(r.r, t.n_max);
            let shape = FactorShape::new(&[("hor", d), ("out", d)])?;
            let mut amps = vec![C64::new(0.0, 0.0); d * d];
            for (n, &fv) in f.iter().enumerate() {
                amps[n * d + n] = C64::new(fv, 0.0);
            }
            PureState::new(shape, amps)
        }
        Statistics::Fermionic => {
            let rr = r.r;
            let (c2, s2) = (rr.cos() * rr.cos(), rr.sin() * rr.sin());
            let half_sin2r = rr.sin() * rr.cos();
            let shape = FactorShape::new(&[("hor", 4), ("out", 4)])?;
            let mut amps = vec![C64::new(0.0, 0.0); 16];
            let idx = |p: usize, a: usize| 2 * p + a;
            amps[idx(0, 0) * 4 + idx(0, 0)] = C64::new(c2, 0.0);
            amps[idx(0, 1) * 4 + idx(1, 0)] = C64::new(-half_sin2r, 0.0);
            amps[idx(1, 0) * 4 + idx(0, 1)] = C64::new(half_sin2r, 0.0);
            amps[idx(1, 1) * 4 + idx(1, 1)] = C64::new(-s2, 0.0);
            PureState::new(shape, amps)
        }
    }
}

/// Asymptotic-future content of the expansion `in` vacuum.
#[derive(Debug, Clone)]
pub enum ExpansionOut {
    /// (|0> - gamma* chi |1_k 1_-k>)/sqrt(1 + |gamma chi|^2) over (k, -k).
    Fermionic(PureState),
    /// Bosonic path: only |gamma_B|^2 feeds the entropy; no explicit state.
    BosonicWeight(GammaValue),
}

pub fn expansion_out_state(p: &ExpansionParams, statistics: Statistics) -> Result<ExpansionOut> {
    match statistics {
        Statistics::Fermionic => {
            let g = (gamma_sq_fermion(p)?.value * chi_sq(p)).sqrt();
            let shape = FactorShape::new(&[("k", 2), ("-k", 2)])?;
            let mut amps = vec![C64::new(0.0, 0.0); 4];
            amps[0] = C64::new(1.0, 0.0);
            amps[3] = C64::new(-g, 0.0);
            Ok(ExpansionOut::Fermionic(PureState::new(shape, amps)?))
        }
        Statistics::Bosonic => Ok(ExpansionOut::BosonicWeight(crate::modes::gamma_sq_boson(p))),
    }
}

/// Gaussian Unruh smearing weights on an Omega grid:
/// gR ~ (pi lambda)^{-1/4} exp(-(Omega - mu)^2 / (2 lambda)),
/// gL ~ (pi lambda)^{-1/4} exp(-(Omega + mu)^2 / (2 lambda)),
/// with the arbitrary length constant fixed so both are real.
#[derive(Debug, Clone)]
pub struct SmearingTable {
    pub omega: Vec<f64>,
    pub g_r: Vec<f64>,
    pub g_l: Vec<f64>,
    /// Trapezoid integral of |gR|^2 + |gL|^2 over the grid; ~1 when the grid
    /// covers the peaks.
    pub parseval: f64,
    /// Set when the grid misses part of [mu - 5 sqrt(lambda), mu + 5 sqrt(lambda)].
    pub grid_warning: bool,
}

pub fn unruh_smearing_weights(
    omega0: f64,
    lambda: f64,
    mu: f64,
    grid: &[f64],
) -> Result<SmearingTable> {
    if omega0 <= 0.0 {
        return Err(RqiError::invalid("omega0", "must be > 0"));
    }
    if lambda <= 0.0 {
        return Err(RqiError::invalid("lambda", "must be > 0"));
    }
    if grid.len() < 2 {
        return Err(RqiError::invalid("grid", "need at least two points"));
    }
    let pref = (std::f64::consts::PI * lambda).powf(-0.25);
    let g = |center: f64, w: f64| pref * (-(w - center).powi(2) / (2.0 * lambda)).exp();
    let omega: Vec<f64> = grid.to_vec();
    let g_r: Vec<f64> = omega.iter().map(|&w| g(mu, w)).collect();
    let g_l: Vec<f64> = omega.iter().map(|&w| g(-mu, w)).collect();
    let mut parseval = 0.0;
    for i in 0..omega.len() - 1 {
        let dw = omega[i + 1] - omega[i];
        let f0 = g_r[i] * g_r[i] + g_l[i] * g_l[i];
        let f1 = g_r[i + 1] * g_r[i + 1] + g_l[i + 1] * g_l[i + 1];
        parseval += 0.5 * (f0 + f1) * dw;
    }
    let span = 5.0 * lambda.sqrt();
    let lo_needed = (mu - span).max(0.0);
    let hi_needed = mu + span;
    let grid_warning = omega[0] > lo_needed + 1e-12 || omega[omega.len() - 1] < hi_needed - 1e-12;
    Ok(SmearingTable {
        omega,
        g_r,
        g_l,
        parseval,
        grid_warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{partial_trace_state, hermitian_eigenvalues};

    const FRAC_PI_4: f64 = std::f64::consts::FRAC_PI_4;

    fn boson_r(x: f64) -> SqueezingParam {
        SqueezingParam::bosonic(x).unwrap()
    }

    fn fermi_r(x: f64) -> SqueezingParam {
        SqueezingParam::fermionic(x).unwrap()
    }

    #[test]
    fn scalar_vacuum_limits_and_profile() {
        let t = Truncation::new(12).unwrap();
        let v0 = scalar_vacuum(&boson_r(0.0), &t).unwrap();
        assert!((v0.amplitude(&[0, 0]).re - 1.0).abs() < 1e-14);

        // amplitude ratio f(1)/f(0) = tanh r
        let t = Truncation::new(20).unwrap();
        let r = 0.5f64.atanh();
        let v = scalar_vacuum(&boson_r(r), &t).unwrap();
        let ratio = v.amplitude(&[1, 1]).re / v.amplitude(&[0, 0]).re;
        assert!((ratio - 0.5).abs() < 1e-12);
    }

    #[test]
    fn scalar_vacuum_reduction_is_thermal() {
        // diagonal weights tanh^{2n} r / cosh^2 r, term by term
        let r = 0.6;
        let t = Truncation::new(40).unwrap();
        let v = scalar_vacuum(&boson_r(r), &t).unwrap();
        let red = partial_trace_state(&v, &["I"]).unwrap();
        for n in 0..=12usize {
            let want = r.tanh().powi(2 * n as i32) / r.cosh().powi(2);
            assert!(
                (red.matrix().get(n, n).re - want).abs() < 1e-10,
                "thermal weight mismatch at n = {n}"
            );
        }
    }

    #[test]
    fn truncation_tail_enforced() {
        let t = Truncation::new(4).unwrap();
        let err = scalar_vacuum(&boson_r(1.2), &t);
        match err {
            Err(RqiError::Truncation { suggested, .. }) => {
                assert!(Truncation::new(suggested).unwrap().check(1.2).is_ok());
            }
            other => panic!("expected truncation error, got {other:?}"),
        }
    }

    #[test]
    fn scalar_particle_forms() {
        let t = Truncation::new(10).unwrap();
        // qR = 1, r = 0 -> |1 0>
        let p = scalar_unruh_particle(&boson_r(0.0), &UnruhWeights::sma(), &t).unwrap();
        assert!((p.amplitude(&[1, 0]).re - 1.0).abs() < 1e-14);
        // qR = qL = 1/sqrt2, r = 0 -> (|1 0> + |0 1>)/sqrt2
        let w = UnruhWeights::from_qr(std::f64::consts::FRAC_1_SQRT_2).unwrap();
        let p = scalar_unruh_particle(&boson_r(0.0), &w, &t).unwrap();
        assert!((p.amplitude(&[1, 0]).re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((p.amplitude(&[0, 1]).re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        // qR = 1 at r > 0: f(n) sqrt(n+1)/cosh r on |n+1, n>
        let r = 0.7;
        let t = Truncation::new(40).unwrap();
        let p = scalar_unruh_particle(&boson_r(r), &UnruhWeights::sma(), &t).unwrap();
        for n in 0..5usize {
            let want = r.tanh().powi(n as i32) / r.cosh().powi(2) * ((n + 1) as f64).sqrt();
            assert!((p.amplitude(&[n + 1, n]).re - want).abs() < 1e-10);
        }
    }

    #[test]
    fn grassmann_vacuum_amplitudes() {
        // spec basis |ijkl| (I+, I-, II+, II-) maps to our factor order
        // (I+, II-, I-, II+) as amplitude(&[i, l, j, k])
        let r = 0.4;
        let v = grassmann_vacuum(&fermi_r(r)).unwrap();
        let (c, s) = (r.cos(), r.sin());
        let amp9 = |i: usize, j: usize, k: usize, l: usize| v.amplitude(&[i, l, j, k]);
        assert!((amp9(0, 0, 0, 0).re - c * c).abs() < 1e-14);
        assert!((amp9(0, 1, 1, 0).re + s * c).abs() < 1e-14);
        assert!((amp9(1, 0, 0, 1).re - s * c).abs() < 1e-14);
        assert!((amp9(1, 1, 1, 1).re + s * s).abs() < 1e-14);
        // r = pi/4: amplitudes (1/2, -1/2, 1/2, -1/2)
        let v = grassmann_vacuum(&fermi_r(FRAC_PI_4)).unwrap();
        assert!((v.amplitude(&[0, 0, 0, 0]).re - 0.5).abs() < 1e-14);
        // norm is identically 1 by construction
        let n: f64 = v.amplitudes().iter().map(|a| a.norm_sqr()).sum();
        assert!((n - 1.0).abs() < 1e-14);
    }

    #[test]
    fn grassmann_particle_amplitudes() {
        let r: f64 = 0.3;
        let (c, s) = (r.cos(), r.sin());
        let w = UnruhWeights::from_qr(0.8).unwrap();
        let p = grassmann_unruh_particle(&fermi_r(r), &w).unwrap();
        let amp9 = |i: usize, j: usize, k: usize, l: usize| p.amplitude(&[i, l, j, k]);
        // qR [C |1000> - S |1110>] + qL [C |0010> + S |1011>]
        assert!((amp9(1, 0, 0, 0).re - 0.8 * c).abs() < 1e-14);
        assert!((amp9(1, 1, 1, 0).re + 0.8 * s).abs() < 1e-14);
        assert!((amp9(0, 0, 1, 0).re - 0.6 * c).abs() < 1e-14);
        assert!((amp9(1, 0, 1, 1).re - 0.6 * s).abs() < 1e-14);
        // qR = 1, r = 0 -> |1000>
        let p = grassmann_unruh_particle(&fermi_r(0.0), &UnruhWeights::sma()).unwrap();
        assert!((p.amplitude(&[1, 0, 0, 0]).re - 1.0).abs() < 1e-14);
        // orthogonal to the vacuum for all r, w
        for rr in [0.0, 0.3, 0.7, FRAC_PI_4] {
            let v = grassmann_vacuum(&fermi_r(rr)).unwrap();
            let p = grassmann_unruh_particle(&fermi_r(rr), &w).unwrap();
            assert!(v.inner(&p).norm() < 1e-13);
            let a = grassmann_unruh_antiparticle(&fermi_r(rr), &w).unwrap();
            assert!(v.inner(&a).norm() < 1e-13);
            assert!(p.inner(&a).norm() < 1e-13);
        }
    }

    #[test]
    fn grassmann_antiparticle_amplitudes() {
        let r: f64 = 0.3;
        let (c, s) = (r.cos(), r.sin());
        let w = UnruhWeights::from_qr(0.8).unwrap();
        let a = grassmann_unruh_antiparticle(&fermi_r(r), &w).unwrap();
        let amp9 = |i: usize, j: usize, k: usize, l: usize| a.amplitude(&[i, l, j, k]);
        // qL [C |0001> - S |0111>] + qR [C |0100> + S |1101>]
        assert!((amp9(0, 0, 0, 1).re - 0.6 * c).abs() < 1e-14);
        assert!((amp9(0, 1, 1, 1).re + 0.6 * s).abs() < 1e-14);
        assert!((amp9(0, 1, 0, 0).re - 0.8 * c).abs() < 1e-14);
        assert!((amp9(1, 1, 0, 1).re - 0.8 * s).abs() < 1e-14);
    }

    #[test]
    fn grassmann_vacuum_annihilated_by_unruh_operators() {
        // the four transformed annihilators (adjoints of the creation
        // combinations) must kill the vacuum
        for r in [0.0, 0.35, FRAC_PI_4] {
            let ops = grassmann_ops(r);
            let vac = &ops.vacuum;
            for (name, cre) in [
                ("C_R", &ops.c_r_dag),
                ("C_L", &ops.c_l_dag),
                ("D_R", &ops.d_r_dag),
                ("D_L", &ops.d_l_dag),
            ] {
                let ann = ComplexMatrix::from_fn(16, |i, j| cre.get(j, i).conj());
                let out = fock::apply(&ann, vac);
                let norm: f64 = out.iter().map(|a| a.norm_sqr()).sum();
                assert!(norm.sqrt() < 1e-12, "{name} at r = {r}");
            }
        }
    }

    #[test]
    fn expansion_state_matches_entropy_formula() {
        use crate::measures::entanglement_entropy;
        use crate::modes::{ExpansionParams, Statistics};
        use crate::scenarios::{LogBase, expansion_entropy};
        let p = ExpansionParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
        match expansion_out_state(&p, Statistics::Fermionic).unwrap() {
            ExpansionOut::Fermionic(psi) => {
                let s = entanglement_entropy(&psi, &["k"]).unwrap();
                let want = expansion_entropy(&p, Statistics::Fermionic, LogBase::Two).unwrap();
                assert!((s - want).abs() < 1e-12, "{s} vs {want}");
            }
            other => panic!("unexpected {other:?}"),
        }
        // massless: the out state is the bare vacuum
        let p0 = ExpansionParams::new(1.0, 0.0, 1.0, 1.0).unwrap();
        match expansion_out_state(&p0, Statistics::Fermionic).unwrap() {
            ExpansionOut::Fermionic(psi) => {
                assert!((psi.amplitude(&[0, 0]).re - 1.0).abs() < 1e-14);
            }
            other => panic!("unexpected {other:?}"),
        }
        // bosonic path hands back the weight for the entropy formulas
        match expansion_out_state(&p, Statistics::Bosonic).unwrap() {
            ExpansionOut::BosonicWeight(g) => assert!(g.value > 0.0 && g.value < 1.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn wedge_swap_symmetry() {
        // swapping I <-> II together with qR <-> qL permutes amplitudes
        let r = fermi_r(0.5);
        let w = UnruhWeights::from_qr(0.8).unwrap();
        let swapped = UnruhWeights::new(w.q_l, w.q_r).unwrap();
        let p = grassmann_unruh_particle(&r, &w).unwrap();
        let q = grassmann_unruh_particle(&r, &swapped).unwrap();
        // mirror map: (I+, II-, I-, II+) -> (II+, I-, II-, I+)
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        let a = p.amplitude(&[i, j, k, l]);
                        let b = q.amplitude(&[l, k, j, i]);
                        assert!(
                            (a.norm() - b.norm()).abs() < 1e-12,
                            "mirror amplitude mismatch at {i}{j}{k}{l}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn dirac_vacuum_coefficients() {
        let r = 0.5;
        let v = dirac_vacuum(&fermi_r(r)).unwrap();
        let (c, s) = (r.cos(), r.sin());
        // V = cos^2, A = B = sin cos, C = sin^2 on |00>, |up down>, |down up>, |pp>
        assert!((v.amplitude(&[0, 0]).re - c * c).abs() < 1e-14);
        assert!((v.amplitude(&[1, 2]).re - s * c).abs() < 1e-14);
        assert!((v.amplitude(&[2, 1]).re - s * c).abs() < 1e-14);
        assert!((v.amplitude(&[3, 3]).re - s * s).abs() < 1e-14);
        // r = 0 -> |0 0>
        let v0 = dirac_vacuum(&fermi_r(0.0)).unwrap();
        assert!((v0.amplitude(&[0, 0]).re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn dirac_vacuum_annihilated_by_unruh_operators() {
        for r in [0.0, 0.3, 0.7, FRAC_PI_4] {
            let vac = dirac_vacuum_jw(r);
            for spin in [Spin::Up, Spin::Down] {
                let op = dirac_unruh_annihilator(r, spin);
                let out = fock::apply(&op, &vac);
                let norm: f64 = out.iter().map(|a| a.norm_sqr()).sum();
                assert!(norm.sqrt() < 1e-12, "annihilation failed at r = {r}");
            }
        }
    }

    #[test]
    fn dirac_particle_forms() {
        let r: f64 = 0.5;
        let (c, s) = (r.cos(), r.sin());
        let up = dirac_particle(&fermi_r(r), Spin::Up).unwrap();
        assert!((up.amplitude(&[1, 0]).re - c).abs() < 1e-14);
        assert!((up.amplitude(&[3, 1]).re - s).abs() < 1e-14);
        let down = dirac_particle(&fermi_r(r), Spin::Down).unwrap();
        assert!((down.amplitude(&[2, 0]).re - c).abs() < 1e-14);
        assert!((down.amplitude(&[3, 2]).re + s).abs() < 1e-14);
        // r = 0 -> |up, 0>
        let up0 = dirac_particle(&fermi_r(0.0), Spin::Up).unwrap();
        assert!((up0.amplitude(&[1, 0]).re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn bounded_pair_normalization_oracle() {
        // closed-form C_N vs direct norm of the raw amplitudes
        for (n, r) in [(1u32, 0.5f64.atanh()), (3, 0.8), (40, 0.6)] {
            let f = squeezed_profile(r, n);
            let mut direct = 0.0;
            for (i, &fv) in f.iter().enumerate() {
                direct += fv * fv;
                if i < n as usize {
                    let c = fv * ((i + 1) as f64).sqrt() / r.cosh();
                    direct += c * c;
                }
            }
            let direct = direct.sqrt();
            assert!(
                (direct - bounded_norm_constant(r, n)).abs() < 1e-12,
                "C_N mismatch at N = {n}"
            );
        }
        // N large at moderate r: C_N -> sqrt 2
        assert!((bounded_norm_constant(0.6, 40) - std::f64::consts::SQRT_2).abs() < 1e-10);
        // r = 0 -> (|000> + |110>)/sqrt2
        let st = bounded_boson_pair(&boson_r(0.0), 1).unwrap();
        assert!((st.amplitude(&[0, 0, 0]).re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
        assert!((st.amplitude(&[1, 1, 0]).re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn family_state_special_cases() {
        let t = Truncation::new(20).unwrap();
        // alpha = beta -> product with Alice: zero correlations by construction
        let p = StateFamilyParams::new(0.7, 0.5, 0.5).unwrap();
        let st = family_state(&p, FieldKind::Boson, &boson_r(0.4), &UnruhWeights::sma(), &t).unwrap();
        let rho_a = partial_trace_state(&st, &["A"]).unwrap();
        let vals = hermitian_eigenvalues(rho_a.matrix()).unwrap();
        // reduced Alice state stays pure for a product state
        assert!((vals.last().unwrap() - 1.0).abs() < 1e-12);

        // P = 1/sqrt2, alpha = 0, beta = 1, qR = 1 reproduces the canonical
        // maximally entangled pair
        let p = StateFamilyParams::new(std::f64::consts::FRAC_1_SQRT_2, 0.0, 1.0).unwrap();
        let st = family_state(&p, FieldKind::Boson, &boson_r(0.0), &UnruhWeights::sma(), &t).unwrap();
        assert!((st.amplitude(&[0, 0, 0]).re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((st.amplitude(&[1, 1, 0]).re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn spin_bell_reduced_properties() {
        for which in [
            BellState::PhiPlus,
            BellState::PhiMinus,
            BellState::PsiPlus,
            BellState::PsiMinus,
        ] {
            // trace = 1 at all r (checked by the DensityMatrix constructor)
            let rho = spin_bell_reduced(&fermi_r(0.5), which).unwrap();
            assert_eq!(rho.dim(), 6);
            // r = 0: pure Bell projector
            let rho0 = spin_bell_reduced(&fermi_r(0.0), which).unwrap();
            let vals = hermitian_eigenvalues(rho0.matrix()).unwrap();
            assert!((vals.last().unwrap() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn spin_traced_normalization_guard() {
        assert!(spin_traced_reduced(0.9, 0.9, 0.0, &fermi_r(0.3)).is_err());
        assert!(spin_traced_reduced(0.5, 0.5, 0.5, &fermi_r(0.3)).is_ok());
    }

    #[test]
    fn collapse_states() {
        let t = Truncation::new(30).unwrap();
        // r = 0 -> |0>|0>
        let b = collapse_out_state(&boson_r(0.0), &t).unwrap();
        assert!((b.amplitude(&[0, 0]).re - 1.0).abs() < 1e-14);
        let f = collapse_out_state(&fermi_r(0.0), &t).unwrap();
        assert!((f.amplitude(&[0, 0]).re - 1.0).abs() < 1e-14);
        // fermionic norm identically 1
        let f = collapse_out_state(&fermi_r(0.6), &t).unwrap();
        let n: f64 = f.amplitudes().iter().map(|a| a.norm_sqr()).sum();
        assert!((n - 1.0).abs() < 1e-14);
        // reduced out-state thermal: successive diagonal ratio tanh^2 r
        let r = 0.45;
        let b = collapse_out_state(&boson_r(r), &t).unwrap();
        let red = partial_trace_state(&b, &["out"]).unwrap();
        for n in 0..6usize {
            let ratio = red.matrix().get(n + 1, n + 1).re / red.matrix().get(n, n).re;
            assert!((ratio - r.tanh() * r.tanh()).abs() < 1e-12);
        }
    }

    #[test]
    fn smearing_weights_properties() {
        let lambda = 0.5;
        let mu = 4.0;
        let grid: Vec<f64> = (0..2000).map(|i| i as f64 * 0.005).collect();
        let tab = unruh_smearing_weights(1.0, lambda, mu, &grid).unwrap();
        assert!(!tab.grid_warning);
        // Parseval within grid tolerance
        assert!((tab.parseval - 1.0).abs() < 1e-6, "parseval = {}", tab.parseval);
        // mu >> sqrt(lambda): |gL|/|gR| at Omega = mu is e^{-2 mu^2 / lambda}
        let i = tab
            .omega
            .iter()
            .position(|&w| (w - mu).abs() < 2.6e-3)
            .unwrap();
        let ratio = tab.g_l[i] / tab.g_r[i];
        assert!((ratio.ln() - (-2.0 * mu * mu / lambda)).abs() < 0.05);
        // mu = 0: mirror-symmetric
        let tab = unruh_smearing_weights(1.0, lambda, 0.0, &grid).unwrap();
        for i in 0..tab.omega.len() {
            assert!((tab.g_r[i] - tab.g_l[i]).abs() < 1e-14);
        }
        // uncertainty product: Delta Omega * Delta ln(w l) = 1/2 for Gaussians;
        // numerically Delta Omega over the (two-sided) table is sqrt(lambda/2)
        let tab = unruh_smearing_weights(1.0, lambda, mu, &grid).unwrap();
        let mut norm = 0.0;
        let mut mean = 0.0;
        let mut m2 = 0.0;
        for i in 0..tab.omega.len() - 1 {
            let dw = tab.omega[i + 1] - tab.omega[i];
            let f = tab.g_r[i] * tab.g_r[i]; // gL negligible here
            norm += f * dw;
            mean += tab.omega[i] * f * dw;
            m2 += tab.omega[i] * tab.omega[i] * f * dw;
        }
        mean /= norm;
        let var: f64 = m2 / norm - mean * mean;
        let d_omega = var.sqrt();
        let d_ln = (2.0f64 * lambda).powf(-0.5);
        assert!((d_omega * d_ln - 0.5).abs() < 1e-3);
        // missing grid coverage sets the warning
        let short: Vec<f64> = (0..100).map(|i| i as f64 * 0.01).collect();
        assert!(unruh_smearing_weights(1.0, lambda, mu, &short).unwrap().grid_warning);
    }
}
