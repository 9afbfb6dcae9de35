use std::path::PathBuf;
use std::process::ExitCode;

use anisowalk_core::classifier::{classify, DEFAULT_MARGIN};
use anisowalk_core::engine::{Mechanism, ObserverConfig, Simulator};
use anisowalk_core::oracle::{exact_expected_range, exact_origin_local_time_distribution, exact_site_distribution};
use anisowalk_core::theory::{
    comb_return_prob, green_truncated, lil_constants, periodic_return_prob, scaling_exponents, Case,
};
use anisowalk_core::ProfileSpec;
use anisowalk_lab::config::{parse_profile, Config, Format};
use anisowalk_lab::experiments::{registry, resolve, run_experiment, Overrides};
use anisowalk_lab::export::{write_csv_file, write_json, write_plot_data, OUT_DIR_ENV};
use anisowalk_lab::runner::{stream_seed, Runner};
use anisowalk_lab::{LabError, LabResult};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "anisowalk", version, about = "Anisotropic random walks on the square lattice")]
struct Cli {
    /// TOML file with [profile], [experiment] and [output] tables.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MechanismArg {
    Direct,
    Construction,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleWhat {
    Site,
    LocalTime,
    Range,
}

#[derive(Subcommand)]
enum Command {
    /// Run independent walks and print one JSON record per replica.
    Simulate {
        /// e.g. comb, hphc, constant:1/4, periodic:1/4,1/2, powertail:gamma=2,alpha=2,p0=1/4
        #[arg(long)]
        profile: Option<String>,
        #[arg(long)]
        steps: Option<u64>,
        #[arg(long)]
        replicas: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum)]
        mechanism: Option<MechanismArg>,
        /// Keep the full local-time field and report the range.
        #[arg(long)]
        field: bool,
    },
    /// Recurrence/transience verdict from cut conductances.
    Classify {
        #[arg(long)]
        profile: Option<String>,
        #[arg(long, default_value_t = 10_000)]
        k_max: u64,
        #[arg(long, default_value_t = DEFAULT_MARGIN)]
        margin: f64,
    },
    /// Scaling exponents, exported almost-sure constants and leading-order formulas.
    Theory {
        /// comb, periodic, hphc or alpha=<value>
        #[arg(long)]
        case: String,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        p0: Option<f64>,
        /// Evaluate the leading-order formulas at this N.
        #[arg(long)]
        n: Option<u64>,
    },
    /// Exact small-N laws as JSON.
    Oracle {
        #[arg(long)]
        profile: Option<String>,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value = "site")]
        what: OracleWhat,
    },
    /// Run a registered experiment (or `all`) and judge it.
    Verify {
        name: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, env = OUT_DIR_ENV)]
        out: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        format: Option<Vec<Format>>,
        #[arg(long)]
        replicas: Option<u64>,
        /// Multiply registered replica counts (e.g. 0.01 for a smoke run).
        #[arg(long)]
        scale: Option<f64>,
        /// Leave wall time out of the records so reruns are byte-identical.
        #[arg(long)]
        no_timing: bool,
        #[arg(long)]
        plot_data: bool,
    },
    /// Print the registry.
    ListExperiments,
}

enum Failure {
    Usage(String),
    Runtime(String),
    Checks,
}

impl From<LabError> for Failure {
    fn from(e: LabError) -> Self {
        if e.is_usage() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Runtime(e.to_string())
        }
    }
}

impl From<anisowalk_core::Error> for Failure {
    fn from(e: anisowalk_core::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn profile_from(arg: Option<&str>, cfg: &Config) -> Result<ProfileSpec, Failure> {
    match (arg, &cfg.profile) {
        (Some(text), _) => Ok(parse_profile(text)?),
        (None, Some(table)) => Ok(table.resolve()?),
        (None, None) => Err(Failure::Usage("no profile given (use --profile or a [profile] table)".into())),
    }
}

fn print(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("JSON values serialize"));
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    cfg: &Config,
    runner: &Runner,
    profile: Option<&str>,
    steps: Option<u64>,
    replicas: Option<u64>,
    seed: Option<u64>,
    mechanism: Option<MechanismArg>,
    field: bool,
) -> Result<(), Failure> {
    let profile = profile_from(profile, cfg)?;
    let ex = &cfg.experiment;
    let steps = steps.or(ex.steps).ok_or_else(|| Failure::Usage("--steps is required".into()))?;
    let seed = seed.or(ex.seed).ok_or_else(|| Failure::Usage("--seed is required".into()))?;
    let replicas = replicas.or(ex.replicas).unwrap_or(1);
    let mech = match (mechanism, ex.mechanism.as_deref()) {
        (Some(MechanismArg::Direct), _) | (None, Some("direct")) => Mechanism::Direct,
        (Some(MechanismArg::Construction), _) | (None, Some("construction") | None) => Mechanism::Construction,
        (None, Some(other)) => return Err(Failure::Usage(format!("unknown mechanism `{other}`"))),
    };
    let obs = if field {
        ObserverConfig::full_field()
    } else {
        ObserverConfig::counters()
    };
    let sim = Simulator::new(&profile, steps);
    let stream = stream_seed(seed, "simulate", &profile.label());
    let records = runner.replicas(replicas, stream, |r, rng| {
        let s = sim.run(mech, steps, rng, &obs)?;
        Ok(json!({
            "replica": r,
            "final": [s.pos.k, s.pos.j],
            "horizontal": s.horizontal,
            "vertical": s.vertical,
            "returns_to_origin": s.returns_to_origin,
            "xi2_zero": s.xi2_zero,
            "range": s.range(),
        }))
    })?;
    print(&json!({
        "profile": profile.label(),
        "steps": steps,
        "mechanism": mech.as_str(),
        "seed": seed,
        "replicas": records,
    }));
    Ok(())
}

fn theory(case: &str, gamma: Option<f64>, p0: Option<f64>, n: Option<u64>) -> Result<(), Failure> {
    let case = Case::parse(case).map_err(|e| Failure::Usage(e.to_string()))?;
    let pairs = |v: Vec<(&str, f64)>| -> Value { v.into_iter().map(|(k, x)| (k.to_string(), json!(x))).collect() };
    let mut out = json!({
        "case": format!("{case:?}"),
        "scaling_exponents": pairs(scaling_exponents(case)),
        "almost_sure_constants_export_only": pairs(lil_constants(case, gamma, p0)?),
    });
    if let Some(n) = n {
        let mut formulas = serde_json::Map::new();
        if case == Case::Comb {
            formulas.insert("comb_return_prob".into(), json!(comb_return_prob(n)?));
        }
        if let (Some(g), Some(p)) = (gamma, p0) {
            formulas.insert("periodic_return_prob".into(), json!(periodic_return_prob(g, p, n)?));
            formulas.insert("green_truncated".into(), json!(green_truncated(g, p, n as f64)?));
        }
        out["formulas_at_n"] = json!({ "n": n, "values": formulas });
    }
    print(&out);
    Ok(())
}

fn oracle(profile: &ProfileSpec, n: u32, what: OracleWhat) -> Result<(), Failure> {
    let value = match what {
        OracleWhat::Site => {
            let d = exact_site_distribution(profile, n)?;
            let masses: Vec<Value> = d
                .masses
                .iter()
                .map(|(s, p)| json!({ "k": s.k, "j": s.j, "exact": p.exact().map(|r| r.to_string()), "value": p.to_f64() }))
                .collect();
            json!({ "profile": profile.label(), "N": n, "kind": "site", "total": d.total.to_string(), "masses": masses })
        }
        OracleWhat::LocalTime => {
            let d = exact_origin_local_time_distribution(profile, n)?;
            let masses: Vec<Value> = d
                .iter()
                .map(|(c, p)| json!({ "count": c, "exact": p.exact().map(|r| r.to_string()), "value": p.to_f64() }))
                .collect();
            json!({ "profile": profile.label(), "N": n, "kind": "origin-local-time", "masses": masses })
        }
        OracleWhat::Range => {
            let e = exact_expected_range(profile, n)?;
            json!({ "profile": profile.label(), "N": n, "kind": "expected-range",
                    "exact": e.exact().map(|r| r.to_string()), "value": e.to_f64() })
        }
    };
    print(&value);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn verify(
    cfg: &Config,
    runner: &Runner,
    name: &str,
    seed: Option<u64>,
    out: Option<PathBuf>,
    format: Option<Vec<Format>>,
    replicas: Option<u64>,
    scale: Option<f64>,
    no_timing: bool,
    plot_data: bool,
) -> Result<(), Failure> {
    let ex = &cfg.experiment;
    let seed = seed
        .or(ex.seed)
        .ok_or_else(|| Failure::Usage("verify needs an explicit --seed".into()))?;
    let names: Vec<&str> = if name == "all" {
        registry().iter().map(|d| d.name).collect()
    } else {
        vec![name]
    };
    let overrides = Overrides {
        replicas: replicas.or(ex.replicas),
        scale: scale.or(ex.scale),
    };
    let out = out.or_else(|| cfg.output.dir.clone());
    let formats = format.or_else(|| cfg.output.formats.clone()).unwrap_or(vec![Format::Json, Format::Csv]);
    let plot_data = plot_data || cfg.output.plot_data.unwrap_or(false);

    let specs = names
        .iter()
        .map(|n| resolve(n, seed, overrides))
        .collect::<LabResult<Vec<_>>>()?;
    let mut outcomes = Vec::new();
    for spec in &specs {
        let o = run_experiment(spec, runner, !no_timing)?;
        let time = o.wall_time_s.map(|t| format!(" {t:.1}s")).unwrap_or_default();
        println!("{} {}{}", if o.pass { "PASS" } else { "FAIL" }, o.spec.name, time);
        for c in &o.checks {
            println!(
                "    {} {} N={} statistic={} target={} tolerance={}",
                if c.pass { "ok  " } else { "FAIL" },
                c.label,
                c.n,
                c.statistic,
                c.target,
                c.tolerance
            );
        }
        if let Some(dir) = &out {
            if formats.contains(&Format::Json) {
                write_json(&o, dir)?;
            }
            if plot_data {
                write_plot_data(&o, dir)?;
            }
        }
        outcomes.push(o);
    }
    if let Some(dir) = &out {
        if formats.contains(&Format::Csv) {
            let file = if name == "all" { "outcomes.csv".to_string() } else { format!("{name}.csv") };
            write_csv_file(&outcomes, &dir.join(file))?;
        }
    }
    if outcomes.iter().all(|o| o.pass) {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let runner = Runner::new(cli.jobs.or(cfg.experiment.jobs))?;
    match cli.command {
        Command::Simulate {
            profile,
            steps,
            replicas,
            seed,
            mechanism,
            field,
        } => simulate(&cfg, &runner, profile.as_deref(), steps, replicas, seed, mechanism, field),
        Command::Classify { profile, k_max, margin } => {
            let profile = profile_from(profile.as_deref(), &cfg)?;
            let r = classify(&profile, k_max, margin).map_err(|e| Failure::Usage(e.to_string()))?;
            print(&json!({
                "profile": profile.label(),
                "verdict": r.verdict.as_str(),
                "rationale": r.rationale,
                "fitted_growth_exponent": r.fitted_growth_exponent,
                "fit_residual": r.fit_residual,
                "transience_exponent": r.transience_exponent,
                "nash_williams_partial_sums": r.nash_williams_partial_sums,
            }));
            // Human-readable copy on stderr keeps stdout machine-readable.
            eprintln!("verdict   {}  ({})", r.verdict.as_str(), r.rationale);
            eprintln!("growth    {:.4} (residual {:.2e})", r.fitted_growth_exponent, r.fit_residual);
            eprintln!("{:>10}  {:>14}", "k", "partial sum");
            for (k, s) in &r.nash_williams_partial_sums {
                eprintln!("{k:>10}  {s:>14.6}");
            }
            Ok(())
        }
        Command::Theory { case, gamma, p0, n } => theory(&case, gamma, p0, n),
        Command::Oracle { profile, n, what } => {
            let profile = profile_from(profile.as_deref(), &cfg)?;
            oracle(&profile, n, what)
        }
        Command::Verify {
            name,
            seed,
            out,
            format,
            replicas,
            scale,
            no_timing,
            plot_data,
        } => verify(&cfg, &runner, &name, seed, out, format, replicas, scale, no_timing, plot_data),
        Command::ListExperiments => {
            for d in registry() {
                println!("{:<22} {:<4} {:<48} {}", d.name, d.criterion, d.anchor, d.summary);
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}
