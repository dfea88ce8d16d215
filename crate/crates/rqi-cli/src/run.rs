use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rqi::config::{self, OutputFormat, RunConfig};
use rqi::error::RqiError;
use rqi::modes::Statistics;
use rqi::scenarios::{
    self, CrossingResult, FlatKind, MultimodeVariant, PhaseArm, SectorState,
    linspace,
};
use rqi::states::{FieldKind, StateFamilyParams, Truncation, UnruhWeights};
use rqi::table::{CurveTable, fmt_sig};

/// Entanglement in accelerated frames, black holes, collapse and expansion.
#[derive(Parser)]
#[command(name = "rqi", version, about)]
pub struct Cli {
    /// Read the run from a config file instead of flags (other arguments
    /// are ignored).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Args, Clone, Default)]
pub struct OutputArgs {
    /// Output file (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format: csv or json.
    #[arg(long, default_value = "csv")]
    pub format: String,
}

#[derive(Args, Clone)]
pub struct GridArgs {
    /// Grid start.
    #[arg(long)]
    pub start: Option<f64>,
    /// Grid stop.
    #[arg(long)]
    pub stop: Option<f64>,
    /// Grid size.
    #[arg(long, default_value_t = scenarios::DEFAULT_GRID_POINTS)]
    pub points: usize,
}

#[derive(Subcommand, Clone)]
pub enum Command {
    /// Negativity and mutual-information sweep for a flat-space pair.
    Flat {
        /// Field kind: boson, grassmann or dirac.
        #[arg(long, default_value = "dirac")]
        kind: String,
        /// Right Unruh weight |qR| in [1/sqrt2, 1].
        #[arg(long, default_value_t = 1.0)]
        qr: f64,
        /// Bosonic occupation cutoff (tail-checked; auto when omitted).
        #[arg(long)]
        nmax: Option<u32>,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Bounded-occupation boson sweep and crossing search.
    Bounded {
        /// Occupation bound N >= 1 of the swept curve.
        #[arg(long, default_value_t = 1)]
        n: u32,
        /// Optional second bound; when given, locates the crossing point.
        #[arg(long)]
        n2: Option<u32>,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Multimode fermionic negativity from the binomial sums.
    Multimode {
        /// Number of frequency modes (<= 60).
        #[arg(long, default_value_t = 20)]
        modes: u32,
        /// Variant: vac-pair, bell-two-freq or grassmann.
        #[arg(long, default_value = "vac-pair")]
        variant: String,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Particle/antiparticle sector negativities of the entangled families.
    Sectors {
        /// State: psi-plus, psi-minus or psi-one.
        #[arg(long, default_value = "psi-plus")]
        state: String,
        #[arg(long, default_value_t = 1.0)]
        qr: f64,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Entanglement amplification scan of the two-parameter family.
    Amplify {
        /// Field kind: boson or grassmann.
        #[arg(long, default_value = "boson")]
        kind: String,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = std::f64::consts::FRAC_1_SQRT_2)]
        qr: f64,
        #[arg(long)]
        nmax: Option<u32>,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Entanglement as a function of the distance to a Schwarzschild horizon.
    Blackhole {
        /// Black-hole mass in solar masses.
        #[arg(long, default_value_t = 1.0)]
        solar_masses: f64,
        /// Mode frequency in units of the surface gravity (Omega = 8 pi M w).
        #[arg(long, default_value_t = std::f64::consts::PI)]
        omega_natural: f64,
        /// Statistics: bosonic or fermionic.
        #[arg(long, default_value = "fermionic")]
        statistics: String,
        /// Sweep of Delta0/R_S from this value ...
        #[arg(long, default_value_t = 1e-6)]
        ratio_start: f64,
        /// ... to this value (log-spaced).
        #[arg(long, default_value_t = 0.05)]
        ratio_stop: f64,
        #[arg(long, default_value_t = scenarios::DEFAULT_GRID_POINTS)]
        points: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Entropy generated by gravitational collapse vs M*omega.
    Collapse {
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Entanglement from cosmological expansion; rho/eps estimation.
    Expansion {
        #[arg(long, default_value_t = 1.0)]
        m: f64,
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        #[arg(long, default_value_t = 1.0)]
        eps: f64,
        /// Also run the rapidity-estimation protocol against these
        /// comma-separated candidates.
        #[arg(long)]
        estimate: Option<String>,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Geometric-phase detection: dephasing vs acceleration.
    Berry {
        /// Coupled mode/detector frequency in Hz (both arms).
        #[arg(long, default_value_t = 2.0e9)]
        omega: f64,
        /// Coupling strength in Hz.
        #[arg(long, default_value_t = 250.0)]
        lambda: f64,
        /// Winding branch fraction of the inversion, in (0, 1/2).
        #[arg(long, default_value_t = 0.0747)]
        branch: f64,
        /// Acceleration sweep in m/s^2 (log-spaced).
        #[arg(long, default_value_t = 1.0e16)]
        accel_start: f64,
        #[arg(long, default_value_t = 1.0e18)]
        accel_stop: f64,
        #[arg(long, default_value_t = scenarios::DEFAULT_GRID_POINTS)]
        points: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Gaussian Unruh smearing weight tables.
    Smearing {
        #[arg(long, default_value_t = 1.0)]
        omega0: f64,
        #[arg(long, default_value_t = 0.5)]
        lambda: f64,
        #[arg(long, default_value_t = 4.0)]
        mu: f64,
        #[arg(long, default_value_t = 0.0)]
        grid_start: f64,
        #[arg(long, default_value_t = 10.0)]
        grid_stop: f64,
        #[arg(long, default_value_t = 2000)]
        points: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Brute-force verification of the registered reference matrices and
    /// closed forms.
    Verify {
        /// Run every registered scenario.
        #[arg(long)]
        all: bool,
        /// Or a single scenario by name.
        #[arg(long)]
        scenario: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

pub fn dispatch(cli: Cli) -> Result<ExitCode, RqiError> {
    if let Some(path) = &cli.config {
        let text = fs::read_to_string(path)?;
        let cfg = config::parse_config(&text)?;
        return run_config(cfg);
    }
    let Some(cmd) = cli.command else {
        return Err(RqiError::invalid(
            "command",
            "expected a subcommand or --config <file>; see --help",
        ));
    };
    run_command(cmd)
}

fn env_nmax() -> Option<u32> {
    std::env::var("RQI_NMAX")
        .ok()
        .and_then(|v| v.parse::<u32>().ok())
}

/// Tail-valid truncation for a grid: explicit flag, then RQI_NMAX, then the
/// smallest cut that satisfies the tail bound at the largest r.
fn pick_truncation(explicit: Option<u32>, r_max: f64) -> Result<Truncation, RqiError> {
    if let Some(n) = explicit.or_else(env_nmax) {
        let t = Truncation::new(n)?;
        t.check(r_max)?;
        return Ok(t);
    }
    Truncation::new(Truncation::required_n_max(r_max).clamp(8, 400))
}

fn write_table(table: &CurveTable, out: &OutputArgs) -> Result<(), RqiError> {
    let format = OutputFormat::parse(&out.format)?;
    let rendered = match format {
        OutputFormat::Csv => table.to_csv(),
        OutputFormat::Json => table.to_json()?,
    };
    match &out.out {
        Some(path) => fs::write(path, rendered)?,
        None => print!("{rendered}"),
    }
    Ok(())
}

fn parse_flat_kind(kind: &str) -> Result<FlatKind, RqiError> {
    match kind {
        "boson" => Ok(FlatKind::Boson),
        "grassmann" => Ok(FlatKind::Grassmann),
        "dirac" => Ok(FlatKind::Dirac),
        other => Err(RqiError::invalid(
            "kind",
            format!("expected boson, grassmann or dirac, got `{other}`"),
        )),
    }
}

fn fermionic_default_grid(grid: &GridArgs) -> (f64, f64) {
    (
        grid.start.unwrap_or(0.0),
        grid.stop.unwrap_or(std::f64::consts::FRAC_PI_4),
    )
}

fn bosonic_default_grid(grid: &GridArgs) -> (f64, f64) {
    (grid.start.unwrap_or(0.0), grid.stop.unwrap_or(1.5))
}

fn run_command(cmd: Command) -> Result<ExitCode, RqiError> {
    match cmd {
        Command::Flat {
            kind,
            qr,
            nmax,
            grid,
            output,
        } => {
            let kind = parse_flat_kind(&kind)?;
            let (start, stop) = match kind.statistics() {
                Statistics::Fermionic => fermionic_default_grid(&grid),
                Statistics::Bosonic => bosonic_default_grid(&grid),
            };
            let r_grid = linspace(start, stop, grid.points);
            let t = pick_truncation(nmax, stop)?;
            let w = UnruhWeights::from_qr(qr)?;
            let table = scenarios::flat_space_curves(kind, &w, &r_grid, &t)?;
            write_table(&table, &output)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bounded {
            n,
            n2,
            grid,
            output,
        } => {
            let (start, stop) = bosonic_default_grid(&grid);
            let r_grid = linspace(start, stop, grid.points);
            let t = Truncation::new(n.max(1))?;
            let mut table =
                scenarios::flat_space_curves(FlatKind::Bounded(n), &UnruhWeights::sma(), &r_grid, &t)?;
            if let Some(n2) = n2 {
                match scenarios::bounded_crossing(n.min(n2), n.max(n2), start.max(1e-4), stop.max(3.0))? {
                    CrossingResult::Found { r_c, n2_lower_before } => {
                        table.add_metadata("crossing_r", fmt_sig(r_c));
                        table.add_metadata("n2_lower_before", n2_lower_before);
                    }
                    CrossingResult::NoCrossing => {
                        table.add_metadata("crossing_r", "none");
                    }
                }
            }
            write_table(&table, &output)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Multimode {
            modes,
            variant,
            grid,
            output,
        } => {
            let variant = match variant.as_str() {
                "vac-pair" => MultimodeVariant::VacuumPlusPair,
                "bell-two-freq" => MultimodeVariant::BellTwoFrequencies,
                "grassmann" => MultimodeVariant::Grassmann,
                other => {
                    return Err(RqiError::invalid(
                        "variant",
                        format!("expected vac-pair, bell-two-freq or grassmann, got `{other}`"),
                    ));
                }
            };
            let (start, stop) = fermionic_default_grid(&grid);
            let r_grid = linspace(start, stop, grid.points);
            let mut values = Vec::with_capacity(r_grid.len());
            let mut single = Vec::with_capacity(r_grid.len());
            for &r in &r_grid {
                values.push(scenarios::multimode_fermion_negativity(modes, r, variant)?);
                single.push(scenarios::fermion_n_ar_closed(r));
            }
            let mut table = CurveTable::new("r", r_grid);
            table.add_metadata("modes", modes);
            table.add_metadata("variant", format!("{variant:?}"));
            table.push_column("n_ar", values)?;
            table.push_column("single_mode_law", single)?;
            write_table(&table, &output)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sectors {
            state,
            qr,
            grid,
            output,
        } => {
            let state = match state.as_str() {
                "psi-plus" => SectorState::PsiPlus,
                "psi-minus" => SectorState::PsiMinus,
                "psi-one" => SectorState::PsiOne,
                other => {
                    return Err(RqiError::invalid(
                        "state",
                        format!("expected psi-plus, psi-minus or psi-one, got `{other}`"),
                    ));
                }
            };
            let w = UnruhWeights::from_qr(qr)?;
            let (start, stop) = fermionic_default_grid(&grid);
            let r_grid = linspace(start, stop, grid.points);
            let mut cols: [Vec<f64>; 6] = Default::default();
            for &r in &r_grid {
                let rep = scenarios::sector_negativities(state, r, &w)?;
                cols[0].push(rep.full_ar);
                cols[1].push(rep.full_arbar);
                cols[2].push(rep.particle_ar);
                cols[3].push(rep.particle_arbar);
                cols[4].push(rep.antiparticle_ar);
                cols[5].push(rep.antiparticle_arbar);
            }
            let mut table = CurveTable::new("r", r_grid);
            table.add_metadata("state", format!("{state:?}"));
            table.add_metadata("qr", qr);
            let names = [
                "full_ar",
                "full_arbar",
                "particle_ar",
                "particle_arbar",
                "antiparticle_ar",
                "antiparticle_arbar",
            ];
            for (name, col) in names.iter().zip(cols) {
                table.push_column(name, col)?;
            }
            write_table(&table, &output)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Amplify {
            kind,
            p,
            alpha,
            beta,
            qr,
            nmax,
            grid,
            output,
        } => {
            let kind = match kind.as_str() {
                "boson" => FieldKind::Boson,
                "grassmann" => FieldKind::Grassmann,
                other => {
                    return Err(RqiError::invalid(
                        "kind",
                        format!("expected boson or grassmann, got `{other}`"),
                    ));
                }
            };
            let params = StateFamilyParams::new(p, alpha, beta)?;
            let w = UnruhWeights::from_qr(qr)?;
            let (start, stop) = match kind {
                FieldKind::Boson => (grid.start.unwrap_or(0.0), grid.stop.unwrap_or(1.0)),
                FieldKind::Grassmann => fermionic_default_grid(&grid),
            };
            let r_grid = linspace(start, stop, grid.points);
            let t = pick_truncation(nmax, stop)?;
            let (mut table, summary) =
                scenarios::amplification_scan(&params, kind, &w, &r_grid, &t)?;
            table.add_metadata("max_n", fmt_sig(summary.max_n));
            table.add_metadata("r_at_max", fmt_sig(summary.r_at_max));
            table.add_metadata("inertial_n", fmt_sig(summary.inertial_n));
            table.add_metadata("absolute_gain", fmt_sig(summary.absolute_gain));
            match summary.relative_gain {
                Some(g) => table.add_metadata("relative_gain", fmt_sig(g)),
                None => table.add_metadata("relative_gain", "undefined (inertial negativity 0)"),
            }
            eprintln!(
                "max_N = {:.6} at r = {:.6} (inertial {:.6}, gain {:.2}%)",
                summary.max_n,
                summary.r_at_max,
                summary.inertial_n,
                100.0 * summary.relative_gain.unwrap_or(f64::NAN)
            );
            write_table(&table, &output)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Blackhole {
            solar_masses,
            omega_natural,
            statistics,
            ratio_start,
            ratio_stop,
            points,
            output,
        } => {
            let stat = parse_statistics(&statistics)?;
            // geometric units: half Schwarzschild radius of the Sun in km is
            // irrelevant here; mass enters only through M*w, so sweep in
            // natural units with M = solar masses in geometric length
            const SOLAR_MASS_GEOMETRIC_KM: f64 = 1.476_625;
            let mass = solar_masses * SOLAR_MASS_GEOMETRIC_KM;
            let omega = omega_natural / (8.0 * std::f64::consts::PI * mass);
            if !(ratio_start > 0.0 && ratio_stop > ratio_start) {
                return Err(RqiError::invalid(
                    "ratio",
                    "need 0 < ratio_start < ratio_stop",
                ));
            }
            let r_s = 2.0 * mass;
            let grid: Vec<f64> = (0..points)
                .map(|i| {
                    let f = i as f64 / (points - 1) as f64;
                    r_s * (ratio_start.ln() + f * (ratio_stop.ln() - ratio_start.ln())).exp()
                })
                .collect();
            let mut table = scenarios::black_hole_sweep(mass, omega, &grid, stat)?;
            table.add_metadata("solar_masses", solar_masses);
            table.add_metadata("omega_natural", omega_natural);
            write_table(&table, &output)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Collapse { grid, output } => {
            let start = grid.start.unwrap_or(1e-3);
            let stop = grid.stop.unwrap_or(0.5);
            if !(start > 0.0 && stop > start) {
                return Err(RqiError::invalid("grid", "need 0 < start < stop"));
            }
            // log-spaced M*omega grid
            let g: Vec<f64> = (0..grid.points)
                .map(|i| {
                    let f = i as f64 / (grid.points - 1) as f64;
                    (start.ln() + f * (stop.ln() - start.ln())).exp()
                })
                .collect();
            let curves = scenarios::collapse_entropy_curve(&g)?;
            let mut table = curves.table;
            match curves.crossing {
                Some(x) => table.add_metadata("fermion_exceeds_boson_beyond", fmt_sig(x)),
                None => table.add_metadata("fermion_exceeds_boson_beyond", "none"),
            }
            write_table(&table, &output)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Expansion {
            m,
            rho,
            eps,
            estimate,
            grid,
            output,
        } => {
            let start = grid.start.unwrap_or(0.05);
            let stop = grid.stop.unwrap_or(10.0);
            let k_grid = linspace(start, stop, grid.points);
            let mut table = scenarios::expansion_entropy_curve(m, rho, eps, &k_grid)?;
            let peak = scenarios::optimal_k(Statistics::Fermionic, m, rho, eps, (start, stop))?;
            table.add_metadata("k_star", fmt_sig(peak.k_star));
            table.add_metadata("s_star", fmt_sig(peak.s_star));
            table.add_metadata("interior_peak", peak.interior);
            if let Some(cands) = estimate {
                let candidates: Result<Vec<f64>, _> =
                    cands.split(',').map(|s| s.trim().parse::<f64>()).collect();
                let candidates = candidates.map_err(|_| {
                    RqiError::invalid("estimate", "expected comma-separated numbers")
                })?;
                let masses = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0];
                let observed: Result<Vec<(f64, f64)>, RqiError> = masses
                    .iter()
                    .map(|&mm| {
                        Ok((
                            mm,
                            scenarios::optimal_k(
                                Statistics::Fermionic,
                                mm,
                                rho,
                                eps,
                                scenarios::K_WINDOW,
                            )?
                            .k_star,
                        ))
                    })
                    .collect();
                let est = scenarios::estimate_rho(&observed?, &candidates)?;
                table.add_metadata("estimated_rho", est.estimated_rho);
                table.add_metadata("epsilon_lower_bound", fmt_sig(est.epsilon_lower_bound));
                table.add_metadata("ambiguous", est.ambiguous);
            }
            write_table(&table, &output)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Berry {
            omega,
            lambda,
            branch,
            accel_start,
            accel_stop,
            points,
            output,
        } => {
            let diag = scenarios::berry_triple_for(omega, lambda, branch)?;
            if !(accel_start > 0.0 && accel_stop > accel_start) {
                return Err(RqiError::invalid("accel", "need 0 < start < stop"));
            }
            let accels: Vec<f64> = (0..points)
                .map(|i| {
                    let f = i as f64 / (points - 1) as f64;
                    (accel_start.ln() + f * (accel_stop.ln() - accel_start.ln())).exp()
                })
                .collect();
            let mut delta = Vec::with_capacity(points);
            let mut cycles = Vec::with_capacity(points);
            let mut visibility = Vec::with_capacity(points);
            for &a in &accels {
                let r = scenarios::unruh_squeezing_si(omega, a)?;
                let ph = scenarios::berry_phases(&diag, &r)?;
                delta.push(ph.delta.abs());
                visibility.push(ph.visibility);
                cycles.push(match scenarios::cycles_to_max_dephasing(&diag, &r)? {
                    Some(n) => n as f64,
                    None => f64::MAX,
                });
            }
            let mut table = CurveTable::new("accel_m_per_s2", accels);
            table.add_metadata("omega_hz", omega);
            table.add_metadata("lambda_hz", lambda);
            table.add_metadata("branch_g", fmt_sig(diag.g));
            table.add_metadata("gamma_i", fmt_sig(2.0 * std::f64::consts::PI * diag.t00));
            table.push_column("delta_per_cycle", delta)?;
            table.push_column("cycles_to_pi", cycles)?;
            table.push_column("visibility", visibility)?;
            // dynamical-phase precision reference points
            let inertial =
                scenarios::dynamical_phase_precision(PhaseArm::Inertial { speed: 100.0 }, omega, 1e-11)?;
            table.add_metadata("dphi_inertial_100mps", fmt_sig(inertial));
            write_table(&table, &output)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Smearing {
            omega0,
            lambda,
            mu,
            grid_start,
            grid_stop,
            points,
            output,
        } => {
            if grid_stop <= grid_start || points < 2 {
                return Err(RqiError::invalid("grid", "need start < stop and points >= 2"));
            }
            let grid = linspace(grid_start, grid_stop, points);
            let tab = rqi::states::unruh_smearing_weights(omega0, lambda, mu, &grid)?;
            let mut table = CurveTable::new("omega", tab.omega.clone());
            table.add_metadata("omega0", omega0);
            table.add_metadata("lambda", lambda);
            table.add_metadata("mu", mu);
            table.add_metadata("parseval", fmt_sig(tab.parseval));
            table.add_metadata("grid_warning", tab.grid_warning);
            if tab.grid_warning {
                eprintln!(
                    "warning: grid does not cover five standard deviations around the peaks"
                );
            }
            table.push_column("g_r", tab.g_r)?;
            table.push_column("g_l", tab.g_l)?;
            write_table(&table, &output)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            all,
            scenario,
            output,
        } => {
            let reports = if all {
                rqi::oracle::verify_all()?
            } else if let Some(name) = scenario {
                if rqi::oracle::MATRIX_SCENARIOS.contains(&name.as_str()) {
                    vec![rqi::oracle::verify_reduced_matrix(&name)?]
                } else if rqi::oracle::CLOSED_FORM_SCENARIOS.contains(&name.as_str()) {
                    vec![rqi::oracle::verify_closed_forms(&name)?]
                } else {
                    return Err(RqiError::invalid(
                        "scenario",
                        format!(
                            "unknown scenario `{name}`; known: {:?} {:?}",
                            rqi::oracle::MATRIX_SCENARIOS,
                            rqi::oracle::CLOSED_FORM_SCENARIOS
                        ),
                    ));
                }
            } else {
                return Err(RqiError::invalid("scenario", "pass --all or --scenario <name>"));
            };
            let mut table = CurveTable::new("scenario_index", (0..reports.len()).map(|i| i as f64).collect());
            let mut devs = Vec::new();
            let mut ok = true;
            let mut worst: f64 = 0.0;
            for r in &reports {
                println!(
                    "{}  max_dev={}  grid={}  worst={}  [{}]",
                    r.scenario,
                    fmt_sig(r.max_abs_deviation),
                    r.grid_size,
                    r.worst_point,
                    if r.passed() { "pass" } else { "FAIL" }
                );
                devs.push(r.max_abs_deviation);
                worst = worst.max(r.max_abs_deviation);
                ok &= r.passed();
            }
            println!("global max deviation: {}", fmt_sig(worst));
            for (i, r) in reports.iter().enumerate() {
                table.add_metadata(&format!("scenario_{i}"), &r.scenario);
            }
            table.push_column("max_abs_deviation", devs)?;
            if output.out.is_some() {
                write_table(&table, &output)?;
            }
            Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            })
        }
    }
}

fn parse_statistics(s: &str) -> Result<Statistics, RqiError> {
    match s {
        "bosonic" | "boson" => Ok(Statistics::Bosonic),
        "fermionic" | "fermion" | "dirac" => Ok(Statistics::Fermionic),
        other => Err(RqiError::invalid(
            "statistics",
            format!("expected bosonic or fermionic, got `{other}`"),
        )),
    }
}

/// Builds a Command from a parsed config file and runs it.
fn run_config(cfg: RunConfig) -> Result<ExitCode, RqiError> {
    let output = OutputArgs {
        out: cfg.output.as_ref().map(PathBuf::from),
        format: match cfg.format {
            OutputFormat::Csv => "csv".into(),
            OutputFormat::Json => "json".into(),
        },
    };
    let grid = GridArgs {
        start: cfg.grid.map(|g| g.start),
        stop: cfg.grid.map(|g| g.stop),
        points: cfg.grid.map(|g| g.points).unwrap_or(scenarios::DEFAULT_GRID_POINTS),
    };
    let num = |key: &str, default: f64| cfg.number(key).unwrap_or(default);
    let cmd = match cfg.scenario.as_str() {
        "flat" => Command::Flat {
            kind: cfg.text("kind").unwrap_or_else(|| "dirac".into()),
            qr: num("qr", 1.0),
            nmax: cfg.n_max,
            grid,
            output,
        },
        "bounded" => Command::Bounded {
            n: num("n", 1.0) as u32,
            n2: cfg.number("n2").map(|v| v as u32),
            grid,
            output,
        },
        "multimode" => Command::Multimode {
            modes: num("modes", 20.0) as u32,
            variant: cfg.text("variant").unwrap_or_else(|| "vac-pair".into()),
            grid,
            output,
        },
        "sectors" => Command::Sectors {
            state: cfg.text("state").unwrap_or_else(|| "psi-plus".into()),
            qr: num("qr", 1.0),
            grid,
            output,
        },
        "amplify" => Command::Amplify {
            kind: cfg.text("kind").unwrap_or_else(|| "boson".into()),
            p: num("p", 0.4),
            alpha: num("alpha", 0.0),
            beta: num("beta", 1.0),
            qr: num("qr", std::f64::consts::FRAC_1_SQRT_2),
            nmax: cfg.n_max,
            grid,
            output,
        },
        "blackhole" => Command::Blackhole {
            solar_masses: num("solar_masses", 1.0),
            omega_natural: num("omega_natural", std::f64::consts::PI),
            statistics: cfg.text("statistics").unwrap_or_else(|| "fermionic".into()),
            ratio_start: num("ratio_start", 1e-6),
            ratio_stop: num("ratio_stop", 0.05),
            points: grid.points,
            output,
        },
        "collapse" => Command::Collapse { grid, output },
        "expansion" => Command::Expansion {
            m: num("m", 1.0),
            rho: num("rho", 1.0),
            eps: num("eps", 1.0),
            estimate: cfg.text("estimate"),
            grid,
            output,
        },
        "berry" => Command::Berry {
            omega: num("omega", 2.0e9),
            lambda: num("lambda", 250.0),
            branch: num("branch", 0.0747),
            accel_start: num("accel_start", 1.0e16),
            accel_stop: num("accel_stop", 1.0e18),
            points: grid.points,
            output,
        },
        "smearing" => Command::Smearing {
            omega0: num("omega0", 1.0),
            lambda: num("lambda", 0.5),
            mu: num("mu", 4.0),
            grid_start: grid.start.unwrap_or(0.0),
            grid_stop: grid.stop.unwrap_or(10.0),
            points: grid.points,
            output,
        },
        "verify" => Command::Verify {
            all: cfg.text("scenario_name").is_none(),
            scenario: cfg.text("scenario_name"),
            output,
        },
        other => {
            return Err(RqiError::invalid(
                "scenario",
                format!("unknown scenario `{other}`"),
            ));
        }
    };
    run_command(cmd)
}
