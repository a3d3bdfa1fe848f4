//! Command-line surface: exclusion-constant curves, verification suites,
//! bound evaluation, density covering and degree tables.

mod density_io;
mod report;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use exclusionkit_core::bounds::{self, GasSpec};
use exclusionkit_core::config::ToolkitConfig;
use exclusionkit_core::constants::{xi_f, xi_h, xi_s};
use exclusionkit_core::covering;
use exclusionkit_core::error::CoreError;
use exclusionkit_core::fractionality::{xi_a, xi_a_limit, ReducedFraction};
use exclusionkit_core::suites;
use exclusionkit_core::trap::{self, Packing, TrapSpec};
use exclusionkit_core::trial_degrees::{self, PhiChoice, TrialSpec, Variant};
use num::integer::gcd;
use serde_json::json;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "exclusionkit", version, about = "Exclusion constants, kinetic-energy bounds and their verification oracles")]
struct Cli {
    /// TOML configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// output directory (default: print to stdout)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// root-finding tolerance override
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    S,
    H,
    A,
    F,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BoundKind {
    Anyon,
    Ll,
    Cs,
    Trap,
    Gas,
}

#[derive(Subcommand)]
enum Command {
    /// Sample an exclusion constant as CSV
    Xi {
        #[arg(long, value_enum)]
        model: Model,
        #[arg(long)]
        start: Option<f64>,
        #[arg(long)]
        end: Option<f64>,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        /// Farey denominator cap for the A-model limit curve
        #[arg(long, default_value_t = 30)]
        max_denominator: u64,
    },
    /// Run a named invariant suite and emit a JSON report
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Evaluate an energy bound
    Bound {
        #[arg(long, value_enum)]
        kind: BoundKind,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        eta: Option<f64>,
        /// statistics parameter as a reduced fraction mu/nu
        #[arg(long)]
        mu: Option<u64>,
        #[arg(long)]
        nu: Option<u64>,
        #[arg(long)]
        particles: Option<f64>,
        #[arg(long)]
        extent: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[arg(long)]
        mass: Option<f64>,
        #[arg(long)]
        length: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        #[arg(long)]
        density: Option<PathBuf>,
    },
    /// Build and export the covering tree of a density file
    Cover {
        #[arg(long)]
        density: PathBuf,
        /// exclusion factor entering the assembled bound
        #[arg(long, default_value_t = 1.0)]
        xi: f64,
    },
    /// Write a small built-in density file for trying `cover` and `bound`
    SampleDensity,
    /// Emit the degree/momentum/energy table of the trial states
    Degrees {
        #[arg(long)]
        mu: i64,
        #[arg(long)]
        nu: i64,
        #[arg(long, default_value_t = 20)]
        kmax: i64,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        #[arg(long, default_value = "odd")]
        variant: String,
        #[arg(long, default_value = "none")]
        phi: String,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version with success
            let code = if e.exit_code() == 0 { 0 } else { 2 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    init_threads();
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

enum Outcome {
    Pass,
    CheckFailed,
}

fn init_threads() {
    if let Ok(v) = std::env::var("EXCLUSIONKIT_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn load_config(cli: &Cli) -> Result<ToolkitConfig> {
    let mut cfg: ToolkitConfig = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?
        }
        None => ToolkitConfig::default(),
    };
    if let Some(t) = cli.tol {
        cfg.tolerances.root = t;
    }
    cfg.validate().map_err(|e| anyhow!("invalid configuration: {e}"))?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<Outcome> {
    let cfg = load_config(&cli)?;
    let out = cli.out.clone();
    match cli.command {
        Command::Xi { model, start, end, step, max_denominator } => {
            let csv = cmd_xi(&cfg, model, start, end, step, max_denominator)?;
            let name = match model {
                Model::S => "xi_s.csv",
                Model::H => "xi_h.csv",
                Model::A => "xi_a.csv",
                Model::F => "xi_f.csv",
            };
            report::emit(&out, name, &csv)?;
            Ok(Outcome::Pass)
        }
        Command::Verify { suite } => {
            let reports = suites::run_suite(&suite, &cfg)
                .map_err(|e| anyhow!("verify failed to run: {e}"))?;
            let all_pass = reports.iter().all(|r| r.pass);
            let body = serde_json::to_string_pretty(&report::envelope(
                &cfg,
                json!({"suite": suite, "all_pass": all_pass, "checks": reports}),
            ))?;
            report::emit(&out, "verify.json", &format!("{body}\n"))?;
            Ok(if all_pass { Outcome::Pass } else { Outcome::CheckFailed })
        }
        Command::Bound {
            kind,
            alpha,
            eta,
            mu,
            nu,
            particles,
            extent,
            gamma,
            mass,
            length,
            omega,
            density,
        } => {
            let body = cmd_bound(
                &cfg, kind, alpha, eta, mu, nu, particles, extent, gamma, mass, length, omega,
                density,
            )?;
            report::emit(&out, "bound.json", &format!("{body}\n"))?;
            Ok(Outcome::Pass)
        }
        Command::Cover { density, xi } => {
            let body = cmd_cover(&cfg, &density, xi)?;
            report::emit(&out, "cover.json", &format!("{body}\n"))?;
            Ok(Outcome::Pass)
        }
        Command::SampleDensity => {
            let grid = suites::conformance_density().map_err(core_err)?;
            report::emit(&out, "sample_density.csv", &density_io::format_density(&grid))?;
            Ok(Outcome::Pass)
        }
        Command::Degrees { mu, nu, kmax, omega, variant, phi } => {
            let csv = cmd_degrees(mu, nu, kmax, omega, &variant, &phi)?;
            report::emit(&out, "degrees.csv", &csv)?;
            Ok(Outcome::Pass)
        }
    }
}

fn cmd_xi(
    cfg: &ToolkitConfig,
    model: Model,
    start: Option<f64>,
    end: Option<f64>,
    step: f64,
    max_denominator: u64,
) -> Result<String> {
    if step <= 0.0 {
        bail!("step must be > 0");
    }
    let tol = cfg.tolerances.root;
    let mut csv = String::new();
    match model {
        Model::S => {
            let (a, b) = (start.unwrap_or(0.0), end.unwrap_or(10.0));
            writeln!(csv, "t,xi_s").unwrap();
            let mut t = a;
            while t <= b + 1e-12 {
                writeln!(csv, "{t},{}", xi_s(t, tol).map_err(core_err)?.value).unwrap();
                t += step;
            }
        }
        Model::H => {
            let (a, b) = (start.unwrap_or(1.0), end.unwrap_or(10.0));
            if a < 1.0 {
                bail!("the H-model constant is only defined for alpha >= 1");
            }
            writeln!(csv, "alpha,xi_h").unwrap();
            let mut x = a;
            while x <= b + 1e-12 {
                writeln!(csv, "{x},{}", xi_h(x, tol).map_err(core_err)?.value).unwrap();
                x += step;
            }
        }
        Model::A => {
            writeln!(csv, "mu,nu,alpha,limit").unwrap();
            let mut rows: Vec<(f64, u64, u64, f64)> = Vec::new();
            for nu in 1..=max_denominator {
                for mu in 0..=2 * nu {
                    if gcd(mu, nu) != 1 {
                        continue;
                    }
                    let frac = ReducedFraction::new(mu, nu).map_err(core_err)?;
                    let lim = xi_a_limit(frac).map_err(core_err)?;
                    rows.push((mu as f64 / nu as f64, mu, nu, lim.value));
                }
            }
            rows.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.2.cmp(&b.2)));
            for (alpha, mu, nu, lim) in rows {
                writeln!(csv, "{mu},{nu},{alpha},{lim}").unwrap();
            }
        }
        Model::F => {
            writeln!(csv, "xi_f").unwrap();
            writeln!(csv, "{}", xi_f()).unwrap();
        }
    }
    Ok(csv)
}

#[allow(clippy::too_many_arguments)]
fn cmd_bound(
    cfg: &ToolkitConfig,
    kind: BoundKind,
    alpha: Option<f64>,
    eta: Option<f64>,
    mu: Option<u64>,
    nu: Option<u64>,
    particles: Option<f64>,
    extent: Option<f64>,
    gamma: f64,
    mass: Option<f64>,
    length: Option<f64>,
    omega: f64,
    density: Option<PathBuf>,
) -> Result<String> {
    let consts = &cfg.bound;
    let payload = match kind {
        BoundKind::Gas => {
            let (mu, nu) = (need(mu, "--mu")?, need(nu, "--nu")?);
            let frac = ReducedFraction::new(mu, nu).map_err(core_err)?;
            let spec = GasSpec::new(need(particles, "--particles")?, need(extent, "--extent")?)
                .map_err(core_err)?;
            json!(bounds::gas_anyon(frac, &spec, consts))
        }
        BoundKind::Anyon => {
            let path = density.ok_or_else(|| anyhow!("--density FILE is required"))?;
            let rho = density_io::read_density(&path)?;
            let alpha = need(alpha, "--alpha")?;
            let n = need(particles, "--particles")? as u64;
            let closed = bounds::lt_anyon_kinetic(&rho, alpha, n, consts).map_err(core_err)?;
            let xi = xi_a(alpha, n).map_err(core_err)?.value;
            let primed = cfg.primed();
            let (tree, covering_report) =
                covering::anyon_bound_from_grid(&rho, xi, &cfg.uncertainty, &primed)
                    .map_err(core_err)?;
            json!({
                "closed_form": closed,
                "xi": xi,
                "covering": covering_report,
                "tree": tree.map(|t| t.to_json()),
            })
        }
        BoundKind::Ll => {
            let eta = need(eta, "--eta")?;
            let spec = GasSpec::new(need(particles, "--particles")?, need(extent, "--extent")?)
                .map_err(core_err)?
                .with_gamma(gamma)
                .map_err(core_err)?;
            json!({
                "total": bounds::ll_gas(&spec, eta, consts).map_err(core_err)?,
                "per_unit_length": bounds::ll_homogeneous(&spec, eta, consts).map_err(core_err)?,
            })
        }
        BoundKind::Cs => {
            let alpha = need(alpha, "--alpha")?;
            if let (Some(m), Some(l)) = (mass, length) {
                json!({
                    "local": bounds::lt_cs_local(m, l, alpha, consts).map_err(core_err)?,
                })
            } else {
                let spec =
                    GasSpec::new(need(particles, "--particles")?, need(extent, "--extent")?)
                        .map_err(core_err)?;
                json!({
                    "per_unit_length": bounds::cs_gas(&spec, alpha, consts).map_err(core_err)?,
                    "exact_thermodynamic": bounds::cs_exact_thermo(alpha, spec.rhobar())
                        .map_err(core_err)?,
                })
            }
        }
        BoundKind::Trap => {
            let alpha = need(alpha, "--alpha")?;
            let n = need(particles, "--particles")? as u64;
            let spec = TrapSpec::new(omega, n, alpha).map_err(core_err)?;
            let lower = trap::minimize_harmonic_functional(&spec, consts).map_err(core_err)?;
            let upper = trap::upper_bound_single(n, omega, Packing::Square);
            let powerlaw = if alpha >= 1.0 {
                Some(trap::powerlaw_trap_bound(&spec, None).map_err(core_err)?)
            } else {
                None
            };
            json!({
                "lower": lower,
                "upper": upper,
                "powerlaw_lower": powerlaw,
            })
        }
    };
    let body = serde_json::to_string_pretty(&report::envelope(cfg, payload))?;
    Ok(body)
}

fn cmd_cover(cfg: &ToolkitConfig, density: &PathBuf, xi: f64) -> Result<String> {
    let rho = density_io::read_density(density)?;
    let primed = cfg.primed();
    match covering::build_tree_with(&rho, cfg.thresholds) {
        Ok(mut tree) => {
            covering::classify_a(&mut tree, &cfg.uncertainty);
            covering::check_structure(&tree).map_err(core_err)?;
            let a1 = covering::verify_a1_sum(&tree, &cfg.uncertainty).map_err(core_err)?;
            let bound = covering::assemble_anyon_bound(&tree, xi, &cfg.uncertainty, &primed)
                .map_err(core_err)?;
            let body = serde_json::to_string_pretty(&report::envelope(
                cfg,
                json!({"tree": tree.to_json(), "a1_sums": a1, "bound": bound}),
            ))?;
            Ok(body)
        }
        Err(CoreError::DegenerateCover { mass }) => {
            let body = serde_json::to_string_pretty(&report::envelope(
                cfg,
                json!({
                    "tree": null,
                    "bound": {"value": 0.0, "flags": [format!("degenerate cover: mass {mass} < 2")]},
                }),
            ))?;
            Ok(body)
        }
        Err(e) => Err(core_err(e)),
    }
}

fn cmd_degrees(
    mu: i64,
    nu: i64,
    kmax: i64,
    omega: f64,
    variant: &str,
    phi: &str,
) -> Result<String> {
    let variant = match variant {
        "even" => Variant::Even,
        "odd" => Variant::Odd,
        other => bail!("unknown variant '{other}'; expected even|odd"),
    };
    let phi = match phi {
        "none" => PhiChoice::None,
        "neighbor" => PhiChoice::Neighbor,
        "parameter" => PhiChoice::Parameter,
        other => bail!("unknown phi choice '{other}'; expected none|neighbor|parameter"),
    };
    if kmax < 1 {
        bail!("--kmax must be >= 1");
    }
    let mut csv = String::from("k,n,l,degree,e_pred\n");
    for k in 1..=kmax {
        let spec = TrialSpec::new(mu, nu, k, variant, phi).map_err(core_err)?;
        let ledger = trial_degrees::degree(&spec);
        let l = trial_degrees::angular_momentum(&spec);
        let e = trial_degrees::predicted_energy(&spec, omega).map_err(core_err)?;
        writeln!(
            csv,
            "{k},{},{},{},{}",
            spec.n_particles(),
            trial_degrees::ratio_f64(l),
            trial_degrees::ratio_f64(ledger.total),
            e.value
        )
        .unwrap();
    }
    Ok(csv)
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| anyhow!("{flag} is required for this bound kind"))
}

fn core_err(e: CoreError) -> anyhow::Error {
    anyhow!("{e}")
}
