//! Command-line front end: instance generation, the three solvers, the
//! brute-force oracles, and the benchmark sweep.

mod tables;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};

use stochpath_core::distribution::Pmf;
use stochpath_core::generator::{derive_rho0, derive_tau, generate, Family, GenSpec};
use stochpath_core::graph::{ArcWeight, Instance};
use stochpath_core::oracle::{enumerate_elementary_paths, oracle_srcspp, oracle_sspp, OracleBudget};
use stochpath_core::risk::RiskMeasure;
use stochpath_core::sota::{build_upper_bound_lists, solve_sota, SotaResult, UbLists};
use stochpath_core::srcspp::{solve_srcspp, SrcsppOptions, SrcsppStatus};
use stochpath_core::sspp::{solve_sspp, trivial_bounds, SsppOptions};

use tables::{num, secs, Format, Table};

#[derive(Parser)]
#[command(name = "stochpath", version, about = "Shortest paths with stochastic travel times")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a grid benchmark instance.
    Generate {
        #[arg(long)]
        width: usize,
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1e-4)]
        eps: f64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Solve the on-time-arrival fixed point.
    Sota {
        instance: PathBuf,
        #[arg(long, default_value = "csv")]
        format: Format,
        /// Write the CDF of the solution at --dump-vertex as CSV.
        #[arg(long)]
        dump_cdf: Option<PathBuf>,
        /// Vertex for --dump-cdf (default: origin).
        #[arg(long)]
        dump_vertex: Option<usize>,
    },
    /// Minimize a risk measure over origin-destination paths.
    Sspp {
        instance: PathBuf,
        #[command(flatten)]
        risk: RiskFlags,
        #[arg(long, default_value = "csv")]
        format: Format,
        /// Use the trivial all-zero lower bounds (ablation).
        #[arg(long)]
        trivial_bounds: bool,
        /// Skip the upper-bound path lists.
        #[arg(long)]
        no_ublists: bool,
    },
    /// Minimize cost subject to a risk budget.
    Srcspp {
        instance: PathBuf,
        #[command(flatten)]
        risk: RiskFlags,
        /// Direct risk budget.
        #[arg(long)]
        rho0: Option<f64>,
        /// Derive the budget as (1 - alpha) * rho(Z_o) + alpha * rho(X_Q);
        /// small alpha means a tight budget.
        #[arg(long)]
        alpha: Option<f64>,
        /// Wall-clock limit in seconds.
        #[arg(long, default_value_t = 300.0)]
        time_limit: f64,
        #[arg(long, default_value = "csv")]
        format: Format,
        #[arg(long)]
        trivial_bounds: bool,
        #[arg(long)]
        no_ublists: bool,
    },
    /// Run the full parameter sweep and emit all benchmark tables.
    Bench {
        #[arg(long, default_value = "10,40", value_delimiter = ',')]
        widths: Vec<usize>,
        #[arg(long, default_value = "generic,lognormal,lognormal-long,gamma",
              value_delimiter = ',', value_parser = parse_family)]
        families: Vec<Family>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1e-4)]
        eps: f64,
        #[arg(long, default_value_t = 300.0)]
        time_limit: f64,
        #[arg(long, default_value = "csv")]
        format: Format,
    },
    /// Brute-force reference solvers (small instances only).
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// List all elementary origin-destination paths.
    Paths { instance: PathBuf },
    /// Exhaustive risk minimization.
    Sspp {
        instance: PathBuf,
        #[command(flatten)]
        risk: RiskFlags,
    },
    /// Exhaustive constrained cost minimization.
    Srcspp {
        instance: PathBuf,
        #[command(flatten)]
        risk: RiskFlags,
        #[arg(long)]
        rho0: f64,
    },
}

#[derive(Args)]
struct RiskFlags {
    /// mean | ptau | var | cvar | stepcost
    #[arg(long)]
    risk: String,
    /// Threshold for ptau.
    #[arg(long)]
    tau: Option<u64>,
    /// Derive tau as the p-quantile of the on-time-arrival bound Z_o.
    #[arg(long)]
    p: Option<f64>,
    /// Confidence level for var/cvar.
    #[arg(long)]
    beta: Option<f64>,
    /// JSON file with [[t, value], ...] breakpoints for stepcost.
    #[arg(long)]
    breakpoints: Option<PathBuf>,
}

/// Resolved risk measure plus the parameter columns it fills.
struct ResolvedRisk {
    measure: RiskMeasure,
    kind: RiskKind,
    p: Option<f64>,
    tau: Option<u64>,
    beta: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum RiskKind {
    Ptau,
    Other,
}

impl RiskFlags {
    /// `z_o` is required only for `--risk ptau --p`.
    fn resolve(&self, z_o: Option<&Pmf>) -> Result<ResolvedRisk, String> {
        let r = match self.risk.as_str() {
            "mean" => ResolvedRisk {
                measure: RiskMeasure::mean(),
                kind: RiskKind::Other,
                p: None,
                tau: None,
                beta: Some(0.0),
            },
            "ptau" => {
                let (tau, p) = match (self.tau, self.p) {
                    (Some(t), _) => (t, self.p),
                    (None, Some(p)) => {
                        let z = z_o.ok_or("--p needs the on-time-arrival bound; pass --tau")?;
                        (derive_tau(z, p), Some(p))
                    }
                    (None, None) => return Err("--risk ptau needs --tau or --p".into()),
                };
                ResolvedRisk {
                    measure: RiskMeasure::ProbGeq { tau },
                    kind: RiskKind::Ptau,
                    p,
                    tau: Some(tau),
                    beta: None,
                }
            }
            "var" | "cvar" => {
                let beta = self.beta.ok_or("--risk var/cvar needs --beta")?;
                let measure = if self.risk == "var" {
                    RiskMeasure::VaR { beta }
                } else {
                    RiskMeasure::CVaR { beta }
                };
                ResolvedRisk {
                    measure,
                    kind: RiskKind::Other,
                    p: None,
                    tau: None,
                    beta: Some(beta),
                }
            }
            "stepcost" => {
                let path = self
                    .breakpoints
                    .as_ref()
                    .ok_or("--risk stepcost needs --breakpoints")?;
                let bytes = std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
                let breakpoints: Vec<(u64, f64)> =
                    serde_json::from_slice(&bytes).map_err(|e| e.to_string())?;
                ResolvedRisk {
                    measure: RiskMeasure::ExpectationOfF { breakpoints },
                    kind: RiskKind::Other,
                    p: None,
                    tau: None,
                    beta: None,
                }
            }
            other => return Err(format!("unknown risk {other:?}")),
        };
        r.measure.validate().map_err(|e| e.to_string())?;
        Ok(r)
    }
}

fn parse_family(s: &str) -> Result<Family, String> {
    match s {
        "generic" => Ok(Family::Generic),
        "lognormal" => Ok(Family::Lognormal),
        "lognormal-long" => Ok(Family::LognormalLong),
        "gamma" => Ok(Family::Gamma),
        other => Err(format!("unknown family {other:?}")),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help/version are not usage errors.
            use clap::error::ErrorKind::*;
            if matches!(e.kind(), DisplayHelp | DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            return ExitCode::from(64);
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Generate {
            width,
            family,
            seed,
            eps,
            output,
        } => {
            let spec = GenSpec {
                width,
                family,
                seed,
                eps,
            };
            let generated = generate(&spec).map_err(|e| e.to_string())?;
            std::fs::write(&output, generated.instance.save())
                .map_err(|e| format!("{}: {e}", output.display()))?;
            eprintln!(
                "wrote {} ({} vertices, {} arcs, {} redraws)",
                output.display(),
                generated.instance.vertices(),
                generated.instance.arcs().len(),
                generated.degenerate_redraws
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Sota {
            instance,
            format,
            dump_cdf,
            dump_vertex,
        } => cmd_sota(&instance, format, dump_cdf.as_deref(), dump_vertex),
        Command::Sspp {
            instance,
            risk,
            format,
            trivial_bounds,
            no_ublists,
        } => cmd_sspp(&instance, &risk, format, trivial_bounds, no_ublists),
        Command::Srcspp {
            instance,
            risk,
            rho0,
            alpha,
            time_limit,
            format,
            trivial_bounds,
            no_ublists,
        } => cmd_srcspp(
            &instance,
            &risk,
            rho0,
            alpha,
            Duration::from_secs_f64(time_limit),
            format,
            trivial_bounds,
            no_ublists,
        ),
        Command::Bench {
            widths,
            families,
            seed,
            eps,
            time_limit,
            format,
        } => cmd_bench(
            &widths,
            &families,
            seed,
            eps,
            Duration::from_secs_f64(time_limit),
            format,
        ),
        Command::Oracle { command } => cmd_oracle(command),
    }
}

fn load(path: &Path) -> Result<Instance, String> {
    let bytes = std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let (instance, report) = Instance::load(&bytes).map_err(|e| e.to_string())?;
    if !report.unreachable_to_destination.is_empty() {
        eprintln!(
            "note: {} vertices cannot reach the destination",
            report.unreachable_to_destination.len()
        );
    }
    Ok(instance)
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Preprocessing shared by the label solvers: the on-time-arrival bounds
/// plus the non-dominated upper-bound path lists.
struct Prep {
    sota: SotaResult,
    lists: UbLists,
    sota_cpu: Duration,
    /// SOTA plus list construction; the number reported in the solver
    /// tables.
    prep_cpu: Duration,
}

const UB_LIST_LEN: usize = 4;

fn prepare(inst: &Instance) -> Result<Prep, String> {
    let start = Instant::now();
    let sota = solve_sota(inst, inst.destination()).map_err(|e| e.to_string())?;
    let sota_cpu = start.elapsed();
    let lists = build_upper_bound_lists(inst, &sota, UB_LIST_LEN);
    Ok(Prep {
        sota,
        lists,
        sota_cpu,
        prep_cpu: start.elapsed(),
    })
}

fn origin_bound(inst: &Instance, prep: &Prep) -> Result<Pmf, String> {
    prep.sota.z[inst.origin()]
        .as_pmf()
        .cloned()
        .ok_or_else(|| "no origin-destination path".to_string())
}

fn cmd_sota(
    path: &Path,
    format: Format,
    dump_cdf: Option<&Path>,
    dump_vertex: Option<usize>,
) -> Result<ExitCode, String> {
    let inst = load(path)?;
    let start = Instant::now();
    let res = solve_sota(&inst, inst.destination()).map_err(|e| e.to_string())?;
    let cpu = start.elapsed();
    let mut table = Table::new("sota", &["instance", "ell", "updates", "expansions", "cpu_s"]);
    table.push(vec![
        stem(path),
        res.support_size(inst.origin()).to_string(),
        res.stats.updates.to_string(),
        res.stats.expansions.to_string(),
        secs(cpu),
    ]);
    print!("{}", table.emit(format));
    if let Some(out) = dump_cdf {
        let v = dump_vertex.unwrap_or(inst.origin());
        let mut csv = String::from("t,cdf\n");
        if let Some(pmf) = res.z[v].as_pmf() {
            for t in 0..=pmf.max_support() {
                csv.push_str(&format!("{t},{}\n", pmf.cdf(t as i64)));
            }
        }
        std::fs::write(out, csv).map_err(|e| format!("{}: {e}", out.display()))?;
    }
    Ok(ExitCode::SUCCESS)
}

/// Columns of the risk-minimization tables; `param_cols` comes first.
fn sspp_table(kind: RiskKind) -> Table {
    match kind {
        RiskKind::Ptau => Table::new(
            "sspp_ptau",
            &[
                "instance", "p", "tau", "sota_risk", "esp_risk", "sota_cpu_s", "labels_treated",
                "labels_expanded", "sspp_cpu_s", "opt_risk", "total_cpu_s",
            ],
        ),
        RiskKind::Other => Table::new(
            "sspp_cvar",
            &[
                "instance", "beta", "sota_risk", "esp_risk", "sota_cpu_s", "labels_treated",
                "labels_expanded", "sspp_cpu_s", "opt_risk", "total_cpu_s",
            ],
        ),
    }
}

fn srcspp_table(kind: RiskKind) -> Table {
    match kind {
        RiskKind::Ptau => Table::new(
            "srcspp_ptau",
            &[
                "instance", "p", "tau", "alpha", "sp_cost", "rho0", "sota_cpu_s",
                "labels_treated", "labels_expanded", "srcspp_cpu_s", "risk_p", "lb", "c_p",
                "gap_pct", "total_cpu_s",
            ],
        ),
        RiskKind::Other => Table::new(
            "srcspp_cvar",
            &[
                "instance", "beta", "alpha", "sp_cost", "rho0", "sota_cpu_s", "labels_treated",
                "labels_expanded", "srcspp_cpu_s", "risk_p", "lb", "c_p", "gap_pct",
                "total_cpu_s",
            ],
        ),
    }
}

fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

#[allow(clippy::too_many_arguments)]
fn sspp_row(
    name: &str,
    inst: &Instance,
    prep: &Prep,
    risk: &ResolvedRisk,
    use_trivial: bool,
    no_ublists: bool,
) -> Result<Vec<String>, String> {
    let bounds = if use_trivial {
        trivial_bounds(inst.vertices())
    } else {
        prep.sota.z.clone()
    };
    let lists = if no_ublists { None } else { Some(&prep.lists) };
    let start = Instant::now();
    let res = solve_sspp(inst, &risk.measure, &bounds, lists, &SsppOptions::default())
        .map_err(|e| e.to_string())?;
    let cpu = start.elapsed();
    let z_o = origin_bound(inst, prep)?;
    let mut row = vec![name.to_string()];
    match risk.kind {
        RiskKind::Ptau => {
            row.push(risk.p.map(|p| format!("{p}")).unwrap_or_default());
            row.push(risk.tau.unwrap().to_string());
        }
        RiskKind::Other => row.push(opt_num(risk.beta)),
    }
    row.extend([
        num(risk.measure.evaluate(&z_o)),
        num(res.initial_upper_bound),
        secs(prep.prep_cpu),
        res.stats.labels_treated.to_string(),
        res.stats.labels_expanded.to_string(),
        secs(cpu),
        num(res.value),
        secs(prep.prep_cpu + cpu),
    ]);
    Ok(row)
}

fn cmd_sspp(
    path: &Path,
    flags: &RiskFlags,
    format: Format,
    use_trivial: bool,
    no_ublists: bool,
) -> Result<ExitCode, String> {
    let mut inst = load(path)?;
    if inst.arcs().iter().any(|a| a.travel.is_deterministic_zero()) {
        let t = inst.zero_arc_transform().map_err(|e| e.to_string())?;
        if t.residual_zero_arc {
            return Err("instance has an irreducible zero travel-time origin-destination arc".into());
        }
        eprintln!("note: rewrote deterministic-zero arcs");
        inst = t.instance;
    }
    let prep = prepare(&inst)?;
    let risk = flags.resolve(Some(&origin_bound(&inst, &prep)?))?;
    let mut table = sspp_table(risk.kind);
    table.push(sspp_row(&stem(path), &inst, &prep, &risk, use_trivial, no_ublists)?);
    print!("{}", table.emit(format));
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn srcspp_row(
    name: &str,
    inst: &Instance,
    prep: &Prep,
    risk: &ResolvedRisk,
    rho0: Option<f64>,
    alpha: Option<f64>,
    time_limit: Duration,
    use_trivial: bool,
    no_ublists: bool,
) -> Result<(Vec<String>, SrcsppStatus, bool), String> {
    let pi = inst.dijkstra_to_destination(ArcWeight::Cost);
    let sp_path = inst
        .shortest_path_to_destination(inst.origin(), ArcWeight::Cost)
        .ok_or("no origin-destination path")?;
    let sp_cost = inst.path_cost(&sp_path).map_err(|e| e.to_string())?;
    let z_o = origin_bound(inst, prep)?;
    let rho0 = match (rho0, alpha) {
        (Some(r), _) => r,
        (None, Some(a)) => {
            let q_dist = inst.path_distribution(&sp_path).map_err(|e| e.to_string())?;
            // The alpha knob follows the benchmark convention: small alpha
            // tightens the budget toward rho(Z_o).
            derive_rho0(&risk.measure, &z_o, &q_dist, 1.0 - a)
        }
        (None, None) => return Err("need --rho0 or --alpha".into()),
    };
    let bounds = if use_trivial {
        trivial_bounds(inst.vertices())
    } else {
        prep.sota.z.clone()
    };
    let lists = if no_ublists { None } else { Some(&prep.lists) };
    let start = Instant::now();
    let res = solve_srcspp(
        inst,
        &risk.measure,
        rho0,
        &bounds,
        &pi,
        lists,
        time_limit,
        &SrcsppOptions::default(),
    )
    .map_err(|e| e.to_string())?;
    let cpu = start.elapsed();

    let mut row = vec![name.to_string()];
    match risk.kind {
        RiskKind::Ptau => {
            row.push(risk.p.map(|p| format!("{p}")).unwrap_or_default());
            row.push(risk.tau.unwrap().to_string());
        }
        RiskKind::Other => row.push(opt_num(risk.beta)),
    }
    let c_p = match (res.status, res.cost) {
        (SrcsppStatus::Infeasible, _) => "INFEAS.".to_string(),
        (_, None) => "inf".to_string(),
        (_, Some(c)) => num(c),
    };
    let gap = match res.status {
        SrcsppStatus::Optimal => num(0.0),
        SrcsppStatus::Infeasible => String::new(),
        SrcsppStatus::TimeLimit => {
            if res.gap.is_finite() {
                num(res.gap * 100.0)
            } else {
                "inf".to_string()
            }
        }
    };
    let lb = match res.status {
        // LB is shown only when optimality was not proved.
        SrcsppStatus::TimeLimit => num(res.lower_bound),
        _ => String::new(),
    };
    row.extend([
        alpha.map(|a| format!("{a}")).unwrap_or_default(),
        num(sp_cost),
        num(rho0),
        secs(prep.prep_cpu),
        res.stats.labels_treated.to_string(),
        res.stats.labels_expanded.to_string(),
        secs(cpu),
        opt_num(res.risk),
        lb,
        c_p,
        gap,
        secs(prep.prep_cpu + cpu),
    ]);
    Ok((row, res.status, res.cost.is_some()))
}

#[allow(clippy::too_many_arguments)]
fn cmd_srcspp(
    path: &Path,
    flags: &RiskFlags,
    rho0: Option<f64>,
    alpha: Option<f64>,
    time_limit: Duration,
    format: Format,
    use_trivial: bool,
    no_ublists: bool,
) -> Result<ExitCode, String> {
    let inst = load(path)?;
    let prep = prepare(&inst)?;
    let risk = flags.resolve(Some(&origin_bound(&inst, &prep)?))?;
    let mut table = srcspp_table(risk.kind);
    let (row, status, has_incumbent) = srcspp_row(
        &stem(path),
        &inst,
        &prep,
        &risk,
        rho0,
        alpha,
        time_limit,
        use_trivial,
        no_ublists,
    )?;
    table.push(row);
    print!("{}", table.emit(format));
    if status == SrcsppStatus::TimeLimit && !has_incumbent {
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(
    widths: &[usize],
    families: &[Family],
    seed: u64,
    eps: f64,
    time_limit: Duration,
    format: Format,
) -> Result<ExitCode, String> {
    let mut instances = Table::new("instances", &["instance", "vertices", "arcs", "ell"]);
    let mut sota_table = Table::new("sota", &["instance", "updates", "expansions", "cpu_s"]);
    let mut sspp_ptau = sspp_table(RiskKind::Ptau);
    let mut sspp_cvar = sspp_table(RiskKind::Other);
    let mut srcspp_ptau = srcspp_table(RiskKind::Ptau);
    let mut srcspp_cvar = srcspp_table(RiskKind::Other);

    for &family in families {
        for &width in widths {
            let spec = GenSpec {
                width,
                family,
                seed,
                eps,
            };
            let name = spec.instance_name();
            let inst = generate(&spec).map_err(|e| e.to_string())?.instance;
            let prep = prepare(&inst)?;
            let z_o = origin_bound(&inst, &prep)?;

            instances.push(vec![
                name.clone(),
                inst.vertices().to_string(),
                inst.arcs().len().to_string(),
                prep.sota.support_size(inst.origin()).to_string(),
            ]);
            sota_table.push(vec![
                name.clone(),
                prep.sota.stats.updates.to_string(),
                prep.sota.stats.expansions.to_string(),
                secs(prep.sota_cpu),
            ]);

            for p in [0.5, 0.8, 0.95] {
                let risk = ResolvedRisk {
                    measure: RiskMeasure::ProbGeq { tau: derive_tau(&z_o, p) },
                    kind: RiskKind::Ptau,
                    p: Some(p),
                    tau: Some(derive_tau(&z_o, p)),
                    beta: None,
                };
                sspp_ptau.push(sspp_row(&name, &inst, &prep, &risk, false, false)?);
            }
            for beta in [0.01, 0.05, 0.25] {
                let risk = ResolvedRisk {
                    measure: RiskMeasure::CVaR { beta },
                    kind: RiskKind::Other,
                    p: None,
                    tau: None,
                    beta: Some(beta),
                };
                sspp_cvar.push(sspp_row(&name, &inst, &prep, &risk, false, false)?);
            }
            for alpha in [0.02, 0.1, 0.5] {
                let p = 0.95;
                let risk = ResolvedRisk {
                    measure: RiskMeasure::ProbGeq { tau: derive_tau(&z_o, p) },
                    kind: RiskKind::Ptau,
                    p: Some(p),
                    tau: Some(derive_tau(&z_o, p)),
                    beta: None,
                };
                let (row, _, _) = srcspp_row(
                    &name, &inst, &prep, &risk, None, Some(alpha), time_limit, false, false,
                )?;
                srcspp_ptau.push(row);
            }
            for alpha in [0.02, 0.1, 0.5] {
                let risk = ResolvedRisk {
                    measure: RiskMeasure::CVaR { beta: 0.05 },
                    kind: RiskKind::Other,
                    p: None,
                    tau: None,
                    beta: Some(0.05),
                };
                let (row, _, _) = srcspp_row(
                    &name, &inst, &prep, &risk, None, Some(alpha), time_limit, false, false,
                )?;
                srcspp_cvar.push(row);
            }
        }
    }

    for table in [
        &instances,
        &sota_table,
        &sspp_ptau,
        &sspp_cvar,
        &srcspp_ptau,
        &srcspp_cvar,
    ] {
        print!("{}", table.emit(format));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_oracle(command: OracleCommand) -> Result<ExitCode, String> {
    let budget = OracleBudget::default();
    match command {
        OracleCommand::Paths { instance } => {
            let inst = load(&instance)?;
            let paths = enumerate_elementary_paths(&inst, &budget).map_err(|e| e.to_string())?;
            for p in &paths {
                let seq: Vec<String> = p
                    .vertex_sequence(&inst, inst.origin())
                    .iter()
                    .map(|v| v.to_string())
                    .collect();
                println!("{}", seq.join(" "));
            }
            eprintln!("{} elementary paths", paths.len());
        }
        OracleCommand::Sspp { instance, risk } => {
            let inst = load(&instance)?;
            let risk = risk.resolve(None)?;
            let (value, path) =
                oracle_sspp(&inst, &risk.measure, &budget).map_err(|e| e.to_string())?;
            let seq: Vec<String> = path
                .vertex_sequence(&inst, inst.origin())
                .iter()
                .map(|v| v.to_string())
                .collect();
            println!("value {value}");
            println!("path {}", seq.join(" "));
        }
        OracleCommand::Srcspp {
            instance,
            risk,
            rho0,
        } => {
            let inst = load(&instance)?;
            let risk = risk.resolve(None)?;
            match oracle_srcspp(&inst, &risk.measure, rho0, &budget).map_err(|e| e.to_string())? {
                Some((cost, path)) => {
                    let seq: Vec<String> = path
                        .vertex_sequence(&inst, inst.origin())
                        .iter()
                        .map(|v| v.to_string())
                        .collect();
                    println!("cost {cost}");
                    println!("path {}", seq.join(" "));
                }
                None => println!("INFEAS."),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
