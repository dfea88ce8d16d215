//! Maps physical scenario parameters (acceleration, black-hole mass and
//! position, collapse mass, cosmological expansion parameters) to the
//! squeezing / Bogoliubov quantities consumed by the state constructors.
//!
//! Natural units hbar = c = G = k_B = 1 throughout; the CLI layer owns any
//! SI conversion.

use crate::error::{Result, RqiError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistics {
    Bosonic,
    Fermionic,
}

/// Acceleration-dependent mixing angle. Bosonic r lives in [0, inf),
/// fermionic r in [0, pi/4].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezingParam {
    pub statistics: Statistics,
    pub r: f64,
}

impl SqueezingParam {
    pub fn new(statistics: Statistics, r: f64) -> Result<Self> {
        if !r.is_finite() || r < 0.0 {
            return Err(RqiError::invalid("r", format!("must be finite >= 0, got {r}")));
        }
        if statistics == Statistics::Fermionic && r > std::f64::consts::FRAC_PI_4 + 1e-12 {
            return Err(RqiError::invalid(
                "r",
                format!("fermionic r must lie in [0, pi/4], got {r}"),
            ));
        }
        Ok(Self { statistics, r })
    }

    pub fn bosonic(r: f64) -> Result<Self> {
        Self::new(Statistics::Bosonic, r)
    }

    pub fn fermionic(r: f64) -> Result<Self> {
        Self::new(Statistics::Fermionic, r)
    }
}

/// tanh r = exp(-pi w / a) for bosons, tan r = exp(-pi w / a) for fermions.
/// Zero acceleration returns r = 0 exactly (inertial limit).
pub fn r_flat(statistics: Statistics, omega: f64, accel: f64) -> Result<SqueezingParam> {
    if !omega.is_finite() || omega <= 0.0 {
        return Err(RqiError::invalid("omega", format!("must be finite > 0, got {omega}")));
    }
    if !accel.is_finite() || accel < 0.0 {
        return Err(RqiError::invalid("accel", format!("must be finite >= 0, got {accel}")));
    }
    if accel == 0.0 {
        return SqueezingParam::new(statistics, 0.0);
    }
    let x = (-std::f64::consts::PI * omega / accel).exp();
    squeezing_from_exponential(statistics, x)
}

/// Common inversion: bosonic r = artanh(x), fermionic r = arctan(x),
/// with x = exp(-pi w/a) or a scenario-specific replacement.
fn squeezing_from_exponential(statistics: Statistics, x: f64) -> Result<SqueezingParam> {
    let r = match statistics {
        Statistics::Bosonic => {
            if x >= 1.0 {
                return Err(RqiError::invalid(
                    "exponential",
                    format!("bosonic artanh argument must be < 1, got {x}"),
                ));
            }
            x.atanh()
        }
        Statistics::Fermionic => x.atan(),
    };
    SqueezingParam::new(statistics, r)
}

/// Schwarzschild observer at r0 > 2M with a mode of proper frequency omega.
/// Geometric units G = c = 1; kappa = 1/(4M) is the surface gravity.
#[derive(Debug, Clone, Copy)]
pub struct BlackHoleContext {
    pub mass: f64,
    pub r0: f64,
    pub omega: f64,
}

impl BlackHoleContext {
    pub fn new(mass: f64, r0: f64, omega: f64) -> Result<Self> {
        if !mass.is_finite() || mass <= 0.0 {
            return Err(RqiError::invalid("mass", format!("must be finite > 0, got {mass}")));
        }
        if !omega.is_finite() || omega <= 0.0 {
            return Err(RqiError::invalid("omega", format!("must be finite > 0, got {omega}")));
        }
        if !r0.is_finite() || r0 <= 2.0 * mass {
            return Err(RqiError::invalid(
                "r0",
                format!("observer must sit outside the horizon: r0 = {r0} <= 2M = {}", 2.0 * mass),
            ));
        }
        Ok(Self { mass, r0, omega })
    }

    pub fn schwarzschild_radius(&self) -> f64 {
        2.0 * self.mass
    }

    /// Coordinate distance to the horizon.
    pub fn delta0(&self) -> f64 {
        self.r0 - self.schwarzschild_radius()
    }

    /// f0 = 1 - 2M/r0, the redshift factor at the observer.
    pub fn f0(&self) -> f64 {
        1.0 - self.schwarzschild_radius() / self.r0
    }

    pub fn surface_gravity(&self) -> f64 {
        1.0 / (4.0 * self.mass)
    }

    /// Delta0 / R_S, the small parameter of the near-horizon Rindler mapping.
    pub fn validity_ratio(&self) -> f64 {
        self.delta0() / self.schwarzschild_radius()
    }
}

/// Proper acceleration of a static Schwarzschild observer, with the
/// near-horizon Rindler form kappa/sqrt(f0) alongside.
#[derive(Debug, Clone, Copy)]
pub struct ProperAcceleration {
    /// a0 = kappa (1 - f0)^2 / sqrt(f0)
    pub exact: f64,
    /// kappa / sqrt(f0)
    pub near_horizon: f64,
    /// Delta0 / R_S; the near-horizon form is good when this is small.
    pub validity_ratio: f64,
}

pub fn schwarzschild_proper_acceleration(ctx: &BlackHoleContext) -> ProperAcceleration {
    let f0 = ctx.f0();
    let kappa = ctx.surface_gravity();
    ProperAcceleration {
        exact: kappa * (1.0 - f0).powi(2) / f0.sqrt(),
        near_horizon: kappa / f0.sqrt(),
        validity_ratio: ctx.validity_ratio(),
    }
}

/// Hartle-Hawking/Boulware squeezing in units natural to the black hole:
/// tanh q = exp(-(Omega/2) sqrt(1 - 1/R0)) with Omega = 8 pi M w and
/// R0 = r0/(2M); fermionic with tan.
pub fn q_hawking(ctx: &BlackHoleContext, statistics: Statistics) -> Result<SqueezingParam> {
    let big_omega = 8.0 * std::f64::consts::PI * ctx.mass * ctx.omega;
    let r0_units = ctx.r0 / ctx.schwarzschild_radius();
    let x = (-(big_omega / 2.0) * (1.0 - 1.0 / r0_units).sqrt()).exp();
    squeezing_from_exponential(statistics, x)
}

/// Collapse (Vaidya) squeezing: tanh r = exp(-4 pi M w) for bosons,
/// tan r = exp(-4 pi M w) for fermions.
pub fn r_collapse(omega: f64, mass: f64, statistics: Statistics) -> Result<SqueezingParam> {
    if !omega.is_finite() || omega <= 0.0 {
        return Err(RqiError::invalid("omega", format!("must be finite > 0, got {omega}")));
    }
    if !mass.is_finite() || mass <= 0.0 {
        return Err(RqiError::invalid("mass", format!("must be finite > 0, got {mass}")));
    }
    let x = (-4.0 * std::f64::consts::PI * mass * omega).exp();
    squeezing_from_exponential(statistics, x)
}

/// Robertson-Walker expansion C(eta) = (1 + eps(1 + tanh(rho eta)))^2 for a
/// mode of momentum k and field mass m.
#[derive(Debug, Clone, Copy)]
pub struct ExpansionParams {
    pub k: f64,
    pub m: f64,
    pub rho: f64,
    pub eps: f64,
}

impl ExpansionParams {
    pub fn new(k: f64, m: f64, rho: f64, eps: f64) -> Result<Self> {
        if !k.is_finite() || k <= 0.0 {
            return Err(RqiError::invalid("k", format!("must be finite > 0, got {k}")));
        }
        if !m.is_finite() || m < 0.0 {
            return Err(RqiError::invalid("m", format!("must be finite >= 0, got {m}")));
        }
        if !rho.is_finite() || rho <= 0.0 {
            return Err(RqiError::invalid("rho", format!("must be finite > 0, got {rho}")));
        }
        if !eps.is_finite() || eps <= 0.0 {
            return Err(RqiError::invalid("eps", format!("must be finite > 0, got {eps}")));
        }
        Ok(Self { k, m, rho, eps })
    }

    pub fn mu_in(&self) -> f64 {
        self.m
    }

    pub fn mu_out(&self) -> f64 {
        self.m * (1.0 + 2.0 * self.eps)
    }

    pub fn omega_in(&self) -> f64 {
        self.k.hypot(self.mu_in())
    }

    pub fn omega_out(&self) -> f64 {
        self.k.hypot(self.mu_out())
    }

    pub fn omega_minus(&self) -> f64 {
        (self.omega_out() - self.omega_in()) / 2.0
    }

    pub fn omega_plus(&self) -> f64 {
        (self.omega_out() + self.omega_in()) / 2.0
    }
}

/// A Bogoliubov-quotient magnitude plus a flag telling whether a special
/// evaluation branch (series fallback / analytic continuation) was used.
#[derive(Debug, Clone, Copy)]
pub struct GammaValue {
    pub value: f64,
    pub special_branch: bool,
}

/// Stable ln sinh(z) for z > 0.
fn ln_sinh(z: f64) -> f64 {
    debug_assert!(z > 0.0);
    z + (-(-2.0 * z).exp()).ln_1p() - std::f64::consts::LN_2
}

/// |gamma_F^-|^2 before the |chi|^2 factor:
///
/// [(w- + me)(w+ + me) / ((w- - me)(w+ - me))]
///   * sinh(pi(w- - me)/rho) sinh(pi(w- + me)/rho)
///     / [sinh(pi(w+ + me)/rho) sinh(pi(w+ - me)/rho)]
///
/// The point w- = me (reached at k -> 0) is a removable singularity, handled
/// by a second-order series for sinh(pi x/rho)/x inside |x| < 1e-6.
pub fn gamma_sq_fermion(p: &ExpansionParams) -> Result<GammaValue> {
    if p.m == 0.0 {
        // massless: w- = 0 and the quotient vanishes identically
        return Ok(GammaValue {
            value: 0.0,
            special_branch: false,
        });
    }
    let me = p.m * p.eps;
    let (wm, wp) = (p.omega_minus(), p.omega_plus());
    let pi = std::f64::consts::PI;
    let x = wm - me;
    if wp - me <= 0.0 {
        // cannot happen for valid params: w+ >= m(1+eps) > m eps
        return Err(RqiError::invalid("eps", "degenerate w+ = m eps"));
    }
    // log-space for the huge sinh arguments; the (w- - me) factor pairs with
    // sinh(pi(w- - me)/rho), leaving the even function sinh(pi x/rho)/x.
    let ln_a = (wm + me).ln() + (wp + me).ln() - (wp - me).ln();
    let ln_b = ln_sinh(pi * (wm + me) / p.rho)
        - ln_sinh(pi * (wp + me) / p.rho)
        - ln_sinh(pi * (wp - me) / p.rho);
    let (f, special) = if x.abs() < 1e-6 {
        let t = pi * x / p.rho;
        (pi / p.rho * (1.0 + t * t / 6.0), true)
    } else {
        ((pi * x.abs() / p.rho).sinh() / x.abs(), false)
    };
    Ok(GammaValue {
        value: (ln_a + ln_b).exp() * f,
        special_branch: special,
    })
}

/// |chi|^2 = (mu_out - w_out)^2 / k^2. Equals 1 in the massless limit.
pub fn chi_sq(p: &ExpansionParams) -> f64 {
    let d = p.mu_out() - p.omega_out();
    d * d / (p.k * p.k)
}

/// |gamma_B|^2 = [cosh(pi wbar/rho) + cosh(2 pi w-/rho)]
///             / [cosh(pi wbar/rho) + cosh(2 pi w+/rho)],
/// wbar = sqrt(m^2 (2 eps + 1)^2 - rho^2). An imaginary wbar is continued
/// as cosh -> cos and flagged.
pub fn gamma_sq_boson(p: &ExpansionParams) -> GammaValue {
    let pi = std::f64::consts::PI;
    let wbar_sq = (p.m * (2.0 * p.eps + 1.0)).powi(2) - p.rho * p.rho;
    let (a2, a3) = (2.0 * pi * p.omega_minus() / p.rho, 2.0 * pi * p.omega_plus() / p.rho);
    if wbar_sq >= 0.0 {
        let a1 = pi * wbar_sq.sqrt() / p.rho;
        // log-sum-exp over the four exponentials of each cosh pair
        let m = a1.max(a2).max(a3);
        let num = (a1 - m).exp() + (-a1 - m).exp() + (a2 - m).exp() + (-a2 - m).exp();
        let den = (a1 - m).exp() + (-a1 - m).exp() + (a3 - m).exp() + (-a3 - m).exp();
        GammaValue {
            value: num / den,
            special_branch: false,
        }
    } else {
        let cw = (pi * (-wbar_sq).sqrt() / p.rho).cos();
        GammaValue {
            value: (cw + a2.cosh()) / (cw + a3.cosh()),
            special_branch: true,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, PI};

    #[test]
    fn r_flat_limits() {
        // a -> inf: exponent -> 1, fermionic r -> pi/4
        let r = r_flat(Statistics::Fermionic, 1e-12 / PI, 1.0).unwrap();
        assert!((r.r - FRAC_PI_4).abs() < 1e-9);
        // a -> 0 exactly: inertial limit r = 0
        assert_eq!(r_flat(Statistics::Bosonic, 1.0, 0.0).unwrap().r, 0.0);
        assert_eq!(r_flat(Statistics::Fermionic, 1.0, 0.0).unwrap().r, 0.0);
        assert!(r_flat(Statistics::Bosonic, 1.0, f64::NAN).is_err());
        assert!(r_flat(Statistics::Bosonic, -1.0, 1.0).is_err());
    }

    #[test]
    fn r_flat_direct_evaluation() {
        // pi w / a = ln 2 -> tanh r = 1/2
        let a = PI / 2.0f64.ln();
        let r = r_flat(Statistics::Bosonic, 1.0, a).unwrap();
        assert!((r.r - 0.5f64.atanh()).abs() < 1e-14);
        assert!((r.r - 0.549306).abs() < 1e-6);
    }

    #[test]
    fn r_flat_monotonicity() {
        let mut prev = 0.0;
        for i in 1..50 {
            let a = i as f64 * 0.2;
            let r = r_flat(Statistics::Fermionic, 1.0, a).unwrap().r;
            assert!(r > prev, "r_flat must increase with a");
            prev = r;
        }
        let mut prev = f64::INFINITY;
        for i in 1..50 {
            let w = i as f64 * 0.2;
            let r = r_flat(Statistics::Bosonic, w, 1.0).unwrap().r;
            assert!(r < prev, "r_flat must decrease with omega");
            prev = r;
        }
    }

    #[test]
    fn proper_acceleration_plug_in() {
        // f0 = 1/4 (r0 = 8M/3): a0 = kappa (3/4)^2 / (1/2) = (9/8) kappa
        let ctx = BlackHoleContext::new(1.0, 8.0 / 3.0, 1.0).unwrap();
        assert!((ctx.f0() - 0.25).abs() < 1e-14);
        let a = schwarzschild_proper_acceleration(&ctx);
        assert!((a.exact - 9.0 / 8.0 * ctx.surface_gravity()).abs() < 1e-14);
        // asymptotic flatness
        let far = BlackHoleContext::new(1.0, 1e12, 1.0).unwrap();
        assert!(schwarzschild_proper_acceleration(&far).exact < 1e-11);
        // near-horizon agreement within relative 3e-4 at Delta0/R_S = 1e-4
        let near = BlackHoleContext::new(1.0, 2.0 * (1.0 + 1e-4), 1.0).unwrap();
        let pa = schwarzschild_proper_acceleration(&near);
        assert!((pa.exact - pa.near_horizon).abs() / pa.near_horizon < 3e-4);
        assert!(BlackHoleContext::new(1.0, 2.0, 1.0).is_err());
        assert!(BlackHoleContext::new(1.0, 1.5, 1.0).is_err());
    }

    #[test]
    fn q_hawking_values_and_monotonicity() {
        // Omega sqrt(1 - 1/R0) = 2 ln 2 -> tanh q = 1/2
        // pick R0 = 2 => sqrt = 1/sqrt2, Omega = 2 sqrt2 ln2 => w = Omega/(8 pi M)
        let r0_units: f64 = 2.0;
        let s = (1.0 - 1.0 / r0_units).sqrt();
        let m = 1.0;
        let w = 2.0 * 2.0f64.ln() / s / (8.0 * PI * m);
        let ctx = BlackHoleContext::new(m, 2.0 * m * r0_units, w).unwrap();
        let q = q_hawking(&ctx, Statistics::Bosonic).unwrap();
        assert!((q.r.tanh() - 0.5).abs() < 1e-12);

        // r0 -> 2M+ : q -> statistics maximum
        let ctx = BlackHoleContext::new(1.0, 2.0 + 1e-13, 1e-3).unwrap();
        let qf = q_hawking(&ctx, Statistics::Fermionic).unwrap();
        assert!((qf.r - FRAC_PI_4).abs() < 1e-6);

        // fixed w and Delta0: smaller mass gives larger q
        let d0 = 0.1;
        let q1 = q_hawking(&BlackHoleContext::new(1.0, 2.0 + d0, 0.3).unwrap(), Statistics::Fermionic)
            .unwrap();
        let q2 = q_hawking(&BlackHoleContext::new(2.0, 4.0 + d0, 0.3).unwrap(), Statistics::Fermionic)
            .unwrap();
        assert!(q1.r > q2.r);

        // monotone in 1/Delta0 at fixed M, w
        let mut prev = 0.0;
        for d in [1.0, 0.5, 0.1, 0.01, 0.001] {
            let q = q_hawking(&BlackHoleContext::new(1.0, 2.0 + d, 0.3).unwrap(), Statistics::Bosonic)
                .unwrap();
            assert!(q.r > prev);
            prev = q.r;
        }
    }

    #[test]
    fn rindler_approximation_regime() {
        // q_hawking vs r_flat(w, a0) agree within 1e-2 for Delta0/R_S <= 1e-3
        for d_ratio in [1e-3, 1e-4, 1e-5] {
            for w in [0.05, 0.2, 1.0] {
                let m = 1.0;
                let ctx = BlackHoleContext::new(m, 2.0 * m * (1.0 + d_ratio), w).unwrap();
                let q = q_hawking(&ctx, Statistics::Bosonic).unwrap().r;
                let a0 = schwarzschild_proper_acceleration(&ctx).exact;
                let r = r_flat(Statistics::Bosonic, w, a0).unwrap().r;
                assert!(
                    (q - r).abs() / q < 1e-2,
                    "mismatch at ratio {d_ratio} w {w}: q={q} r={r}"
                );
            }
        }
    }

    #[test]
    fn r_collapse_values() {
        // 4 pi M w = ln 2 -> tanh r = 1/2
        let m = 2.0f64.ln() / (4.0 * PI);
        let r = r_collapse(1.0, m, Statistics::Bosonic).unwrap();
        assert!((r.r.tanh() - 0.5).abs() < 1e-14);
        // Mw -> inf: r -> 0
        assert!(r_collapse(1.0, 1e6, Statistics::Bosonic).unwrap().r < 1e-300);
        // fermionic Mw -> 0: r -> pi/4 (maximally entangled limit)
        let r = r_collapse(1e-12, 1.0, Statistics::Fermionic).unwrap();
        assert!((r.r - FRAC_PI_4).abs() < 1e-10);
    }

    #[test]
    fn gamma_fermion_edges() {
        // massless field: vanishes exactly
        let p = ExpansionParams::new(1.0, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(gamma_sq_fermion(&p).unwrap().value, 0.0);
        // k = m = rho = eps = 1: positive, finite
        let p = ExpansionParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let g = gamma_sq_fermion(&p).unwrap();
        assert!(g.value > 0.0 && g.value.is_finite());
        // eps -> 0 not allowed by type; small eps pushes w- -> 0 and the
        // product with chi^2 goes to zero downstream
        let p = ExpansionParams::new(1.0, 1.0, 1.0, 1e-8).unwrap();
        let g = gamma_sq_fermion(&p).unwrap();
        assert!(g.value * chi_sq(&p) < 1e-10);
    }

    #[test]
    fn gamma_fermion_series_fallback_continuous() {
        // w- = m eps happens at k -> 0; check continuity across the window
        let m = 1.0;
        let g_in = |k: f64| gamma_sq_fermion(&ExpansionParams::new(k, m, 1.0, 1.0).unwrap()).unwrap();
        // pick k so that |w- - me| straddles 1e-6
        let k_at = |target: f64| {
            // solve w-(k) - me = -target approximately by bisection
            let f = |k: f64| {
                let p = ExpansionParams::new(k, m, 1.0, 1.0).unwrap();
                (p.omega_minus() - m * p.eps).abs() - target
            };
            let (mut lo, mut hi) = (1e-6, 1.0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if f(mid) > 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        };
        let k_inside = k_at(5e-7);
        let k_outside = k_at(2e-6);
        let gi = g_in(k_inside);
        let go = g_in(k_outside);
        assert!(gi.special_branch);
        assert!(!go.special_branch);
        assert!((gi.value - go.value).abs() / go.value < 1e-4);
    }

    #[test]
    fn chi_sq_values() {
        // ultrarelativistic: k >> mu_out -> 1
        let p = ExpansionParams::new(1e8, 1.0, 1.0, 1.0).unwrap();
        assert!((chi_sq(&p) - 1.0).abs() < 1e-6);
        // k = m = rho = eps = 1: mu_out = 3, w_out = sqrt(10)
        let p = ExpansionParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
        assert!((chi_sq(&p) - (3.0 - 10.0f64.sqrt()).powi(2)).abs() < 1e-14);
        // m -> 0: mu_out -> 0, w_out -> k, ratio -> 1
        let p = ExpansionParams::new(1.0, 1e-14, 1.0, 1.0).unwrap();
        assert!((chi_sq(&p) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gamma_boson_values() {
        // k = m = rho = 1, eps large: |gamma_B|^2 -> e^(-pi sqrt 2)
        let p = ExpansionParams::new(1.0, 1.0, 1.0, 1e5).unwrap();
        let g = gamma_sq_boson(&p);
        assert!((g.value - (-PI * 2.0f64.sqrt()).exp()).abs() < 1e-4);
        assert!(!g.special_branch);
        // in (0,1)
        for eps in [0.1, 1.0, 10.0] {
            let g = gamma_sq_boson(&ExpansionParams::new(0.7, 0.5, 2.0, eps).unwrap());
            assert!(g.value > 0.0 && g.value < 1.0);
        }
        // imaginary wbar regime is flagged: m^2 (2 eps + 1)^2 < rho^2
        let g = gamma_sq_boson(&ExpansionParams::new(1.0, 0.1, 5.0, 0.5).unwrap());
        assert!(g.special_branch);
        assert!(g.value > 0.0 && g.value < 1.0);
    }
}
