//! `trotter` command-line front end. JSON goes to stdout (or `--out`), CSV
//! likewise; exit code 0 on success, 1 on a contract violation, 2 on bad
//! input or any other failure.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use trotter::bench::{bench_csv, bound_prefactor, parse_sizes, run_bench, schedule_for, summarize, BenchConfig, BenchModel, TimeRule};
use trotter::bounds::{fourth_order_bound, homogeneous_trotter_number, tight_low_order_bound, NormMode};
use trotter::checks::{run_suite, SUITES};
use trotter::formula::{empirical_error, empirical_trotter_number};
use trotter::hamiltonians::{tfim, tfim_chain, GroupedHamiltonian};
use trotter::io::{read_hamiltonian, Cell, Csv, SCHEMA_VERSION};
use trotter::local_obs::light_cone_planner;
use trotter::planner::{plan, Model, PlanParams};
use trotter::qmc::{ferromagnet_trotter_number, matchgate, multiplicative_factor_check, partition_ratio, tfim_trotter_number, Matchgate};
use trotter::rng::XorShift64Star;
use trotter::{Error, Result};

#[derive(Parser)]
#[command(name = "trotter", version, about = "Trotter error bounds, empirical Trotter numbers and resource plans")]
struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Empirical and bound Trotter numbers for Heisenberg chains, as CSV.
    Bench(BenchArgs),
    /// Commutator error bound of a product formula, as JSON.
    Bound(BoundArgs),
    /// Exact Trotter error or minimal Trotter number, as JSON.
    Empirical(EmpiricalArgs),
    /// Asymptotic resource plan (JSON), or a comparison grid over all models (CSV).
    Plan(PlanArgs),
    /// Trotter numbers for quantum Monte Carlo, as JSON.
    Qmc(QmcArgs),
    /// Run property suites; exits 1 on any violation.
    Check(CheckArgs),
}

#[derive(Args)]
struct BenchArgs {
    /// heisenberg-nn or heisenberg-pl.
    #[arg(long, default_value = "heisenberg-nn")]
    model: String,
    /// even-odd, x-y-z or per-term.
    #[arg(long, default_value = "even-odd")]
    ordering: String,
    /// Power-law exponent (heisenberg-pl).
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    /// Sizes: `10`, `5,7,9` or `5..=11`.
    #[arg(long, default_value = "10")]
    n: String,
    /// `t=n` or a fixed time.
    #[arg(long, default_value = "t=n")]
    t_rule: String,
    #[arg(long, default_value_t = 1e-3)]
    eps: f64,
    #[arg(long, default_value_t = 5)]
    instances: usize,
    /// Instance i uses seed + i.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    order: usize,
    /// Norm mode of the commutator bound; defaults to the cluster mode for
    /// nearest-neighbor chains and exact norms for power-law chains.
    #[arg(long)]
    mode: Option<String>,
    /// Only the bound columns (no exact simulation).
    #[arg(long)]
    skip_empirical: bool,
}

#[derive(Args)]
struct HamArgs {
    /// Hamiltonian JSON file.
    #[arg(long)]
    ham: Option<PathBuf>,
    /// Built-in model when no file is given: heisenberg-nn or heisenberg-pl.
    #[arg(long, default_value = "heisenberg-nn")]
    model: String,
    #[arg(long, default_value = "even-odd")]
    ordering: String,
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    #[arg(long, default_value_t = 6)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

impl HamArgs {
    fn load(&self) -> Result<GroupedHamiltonian> {
        match &self.ham {
            Some(path) => read_hamiltonian(path),
            None => bench_model(&self.model, self.alpha)?.build(self.n, self.seed, &self.ordering.parse()?),
        }
    }

    fn echo(&self) -> Value {
        match &self.ham {
            Some(path) => json!({ "ham": path.display().to_string() }),
            None => json!({
                "model": self.model, "ordering": self.ordering, "alpha": self.alpha, "n": self.n, "seed": self.seed
            }),
        }
    }
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    ham: HamArgs,
    /// 1, 2 (tight bounds) or 4.
    #[arg(long, default_value_t = 4)]
    order: usize,
    #[arg(long, default_value_t = 0.1)]
    t: f64,
    /// dense-exact, coeff-1norm or cluster-exact-innermost-triangle.
    #[arg(long, default_value = "dense")]
    mode: String,
    /// Also report the Trotter number for this total error.
    #[arg(long)]
    eps: Option<f64>,
}

#[derive(Args)]
struct EmpiricalArgs {
    #[command(flatten)]
    ham: HamArgs,
    #[arg(long, default_value_t = 4)]
    order: usize,
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    #[arg(long, default_value_t = 1e-3)]
    eps: f64,
    /// Report the error at this r instead of searching.
    #[arg(long)]
    r: Option<u64>,
}

#[derive(Args)]
struct PlanArgs {
    /// electronic-structure, k-local, power-law, power-law-truncated,
    /// quasilocal, clustered or light-cone.
    #[arg(long, default_value = "power-law")]
    model: String,
    #[arg(long, default_value_t = 100.0)]
    n: f64,
    #[arg(long, default_value_t = 100.0)]
    t: f64,
    #[arg(long, default_value_t = 1e-3)]
    eps: f64,
    #[arg(long, default_value_t = 4)]
    p: usize,
    #[arg(long, default_value_t = 4.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1)]
    d: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 1.0)]
    induced_one_norm: f64,
    #[arg(long, default_value_t = 1.0)]
    one_norm: f64,
    #[arg(long, default_value_t = 1.0)]
    h_b: f64,
    #[arg(long, default_value_t = 1.0)]
    degree: f64,
    #[arg(long, default_value_t = 1.0)]
    cc: f64,
    /// Observable radius for the light-cone plan.
    #[arg(long, default_value_t = 0.0)]
    x0: f64,
    /// Emit a CSV grid over every model instead of one JSON plan.
    #[arg(long)]
    grid: bool,
}

#[derive(Args)]
struct QmcArgs {
    /// tfim, ferromagnet or matchgate.
    #[arg(long, default_value = "tfim")]
    model: String,
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Imaginary time β.
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    /// Uniform TFIM coupling and field (ignored with --random).
    #[arg(long, default_value_t = 1.0)]
    j: f64,
    #[arg(long, default_value_t = 1.0)]
    h: f64,
    /// Random couplings and fields in [0.1, 1) from --seed.
    #[arg(long)]
    random: bool,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value = "dense")]
    mode: String,
    /// Verify the multiplicative error exactly (TFIM, small n).
    #[arg(long)]
    verify: bool,
    /// Ferromagnet constant c.
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    /// Matchgate f, g or h.
    #[arg(long, default_value = "g")]
    gate: String,
    /// Matchgate parameter.
    #[arg(long, default_value_t = 0.25)]
    param: f64,
}

#[derive(Args)]
struct CheckArgs {
    /// all, or one of the suite names.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

/// Outcome of a subcommand: the text to emit and whether contracts held.
struct Output {
    text: String,
    ok: bool,
}

fn bench_model(name: &str, alpha: f64) -> Result<BenchModel> {
    match name {
        "heisenberg-nn" => Ok(BenchModel::HeisenbergNn),
        "heisenberg-pl" => Ok(BenchModel::HeisenbergPl { alpha }),
        _ => Err(Error::Input(format!("unknown model {name:?}; expected heisenberg-nn or heisenberg-pl"))),
    }
}

fn document(command: &str, params: Value, result: Value, start: Instant) -> String {
    let doc = json!({
        "schema": SCHEMA_VERSION,
        "command": command,
        "params": params,
        "result": result,
        "wall_time_s": start.elapsed().as_secs_f64(),
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    s.push('\n');
    s
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("plain data serializes")
}

fn cmd_bench(a: &BenchArgs) -> Result<Output> {
    let start = Instant::now();
    let model = bench_model(&a.model, a.alpha)?;
    let mode = match &a.mode {
        Some(m) => m.parse()?,
        None if matches!(model, BenchModel::HeisenbergPl { .. }) => NormMode::DenseExact,
        None => NormMode::Cluster,
    };
    let cfg = BenchConfig {
        model,
        ordering: a.ordering.clone(),
        sizes: parse_sizes(&a.n)?,
        time_rule: a.t_rule.parse::<TimeRule>()?,
        eps: a.eps,
        instances: a.instances,
        seed: a.seed,
        order: a.order,
        mode,
        skip_empirical: a.skip_empirical,
    };
    let rows = run_bench(&cfg)?;
    for s in summarize(&rows) {
        eprintln!(
            "n={}: r_empirical {:?}, r_bound_ours {:.1}, r_bound_1norm {:.1}, ratio {:?}",
            s.n,
            s.r_empirical.map(|v| v.0),
            s.r_bound_ours.0,
            s.r_bound_1norm.0,
            s.ratio.map(|v| v.0)
        );
    }
    eprintln!("wall time {:.1?}", start.elapsed());
    Ok(Output { text: bench_csv(&cfg, &rows)?.render(), ok: true })
}

fn cmd_bound(a: &BoundArgs) -> Result<Output> {
    let start = Instant::now();
    let h = a.ham.load()?;
    let mode: NormMode = a.mode.parse()?;
    let report = match a.order {
        1 | 2 => tight_low_order_bound(&h, a.t, a.order, mode)?,
        4 => fourth_order_bound(&h, a.t, mode)?,
        p => return Err(Error::Input(format!("bounds are implemented for orders 1, 2 and 4, got {p}"))),
    };
    let mut result = report.to_json();
    if let Some(eps) = a.eps {
        let c = bound_prefactor(&h, a.order, mode)?;
        result["trotter_number"] = to_value(&homogeneous_trotter_number(c, a.order, a.t, eps)?.r);
    }
    let params = json!({ "hamiltonian": a.ham.echo(), "order": a.order, "t": a.t, "mode": mode.to_string(), "eps": a.eps });
    Ok(Output { text: document("bound", params, result, start), ok: true })
}

fn cmd_empirical(a: &EmpiricalArgs) -> Result<Output> {
    let start = Instant::now();
    let h = a.ham.load()?;
    let s = schedule_for(a.order, h.gamma())?;
    let result = match a.r {
        Some(r) => json!({ "r": r, "error": empirical_error(&h, &s, a.t, r)? }),
        None => to_value(&empirical_trotter_number(&h, &s, a.t, a.eps)?),
    };
    let params = json!({ "hamiltonian": a.ham.echo(), "order": a.order, "t": a.t, "eps": a.eps, "r": a.r });
    Ok(Output { text: document("empirical", params, result, start), ok: true })
}

fn plan_params(a: &PlanArgs) -> PlanParams {
    PlanParams {
        n: a.n,
        t: a.t,
        eps: a.eps,
        p: a.p,
        alpha: a.alpha,
        d: a.d,
        k: a.k,
        induced_one_norm: a.induced_one_norm,
        one_norm: a.one_norm,
        h_b: a.h_b,
        degree: a.degree,
        cc: a.cc,
    }
}

fn cmd_plan(a: &PlanArgs) -> Result<Output> {
    let start = Instant::now();
    let params = plan_params(a);
    if a.grid {
        let mut csv = Csv::new(&["model", "n", "t", "eps", "p", "alpha", "d", "r", "gates", "ell", "n_exponent", "t_exponent", "note"]);
        for model in Model::ALL {
            let head: Vec<Cell> =
                vec![model.name().into(), a.n.into(), a.t.into(), a.eps.into(), a.p.into(), a.alpha.into(), a.d.into()];
            let mut row = head;
            match plan(model, &params) {
                Ok(pl) => row.extend([
                    pl.r.into(),
                    pl.gates.into(),
                    pl.ell.into(),
                    pl.n_exponent.into(),
                    pl.t_exponent.into(),
                    pl.notes.join("; ").into(),
                ]),
                Err(e) => row.extend([Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty, e.to_string().into()]),
            }
            csv.push(row)?;
        }
        return Ok(Output { text: csv.render(), ok: true });
    }
    let result = if a.model == "light-cone" {
        to_value(&light_cone_planner(a.alpha, a.d, a.p, a.t, a.eps, a.x0)?)
    } else {
        to_value(&plan(a.model.parse()?, &params)?)
    };
    let mut echo = to_value(&params);
    echo["model"] = json!(a.model);
    echo["x0"] = json!(a.x0);
    Ok(Output { text: document("plan", echo, result, start), ok: true })
}

fn cmd_qmc(a: &QmcArgs) -> Result<Output> {
    let start = Instant::now();
    let mut ok = true;
    let (params, result) = match a.model.as_str() {
        "tfim" => {
            let (x, y) = if a.random {
                let mut rng = XorShift64Star::new(a.seed);
                let couplings: BTreeMap<_, _> = (0..a.n.saturating_sub(1)).map(|u| ((u, u + 1), rng.uniform(0.1, 1.0))).collect();
                let fields: BTreeMap<_, _> = (0..a.n).map(|u| (u, rng.uniform(0.1, 1.0))).collect();
                tfim(a.n, &couplings, &fields)?
            } else {
                tfim_chain(a.n, a.j, a.h)?
            };
            let mode: NormMode = a.mode.parse()?;
            let pl = tfim_trotter_number(&x, &y, a.beta, a.eps, mode)?;
            let mut result = to_value(&pl);
            if a.verify {
                let (hi, lo) = multiplicative_factor_check(&x, &y, a.beta, pl.r)?;
                let z = partition_ratio(&x, &y, a.beta, pl.r)?;
                let bound = a.eps.exp();
                let holds = hi <= bound && lo >= 1.0 / bound && z <= bound && z >= 1.0 / bound;
                ok &= holds;
                result["verification"] = json!({
                    "max_eigenvalue_ratio": hi, "min_eigenvalue_ratio": lo, "partition_ratio": z, "holds": holds
                });
            }
            let params = json!({
                "model": "tfim", "n": a.n, "beta": a.beta, "eps": a.eps, "j": a.j, "h": a.h,
                "random": a.random, "seed": a.seed, "mode": mode.to_string(), "verify": a.verify
            });
            (params, result)
        }
        "ferromagnet" => {
            let pl = ferromagnet_trotter_number(a.n, a.beta, a.eps, a.c)?;
            (json!({ "model": "ferromagnet", "n": a.n, "beta": a.beta, "eps": a.eps, "c": a.c }), to_value(&pl))
        }
        "matchgate" => {
            let kind: Matchgate = a.gate.parse()?;
            let m = matchgate(kind, a.param)?;
            let rows: Vec<Vec<f64>> = (0..m.dim()).map(|i| (0..m.dim()).map(|j| m.get(i, j).re).collect()).collect();
            (json!({ "model": "matchgate", "gate": a.gate, "param": a.param }), json!({ "matrix": rows }))
        }
        other => return Err(Error::Input(format!("unknown QMC model {other:?}; expected tfim, ferromagnet or matchgate"))),
    };
    Ok(Output { text: document("qmc", params, result, start), ok })
}

fn cmd_check(a: &CheckArgs) -> Result<Output> {
    let start = Instant::now();
    let names: Vec<&str> = if a.suite == "all" { SUITES.to_vec() } else { vec![a.suite.as_str()] };
    let mut reports = Vec::new();
    for name in names {
        let t0 = Instant::now();
        let rep = run_suite(name, a.seed)?;
        eprintln!(
            "{:24} {} ({} cases, {} violations, {:.1?})",
            rep.name,
            if rep.passed() { "pass" } else { "FAIL" },
            rep.cases,
            rep.violations,
            t0.elapsed()
        );
        reports.push(rep);
    }
    let ok = reports.iter().all(|r| r.passed());
    let result = json!({ "passed": ok, "suites": to_value(&reports) });
    Ok(Output { text: document("check", json!({ "suite": a.suite, "seed": a.seed }), result, start), ok })
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Bench(a) => cmd_bench(a),
        Command::Bound(a) => cmd_bound(a),
        Command::Empirical(a) => cmd_empirical(a),
        Command::Plan(a) => cmd_plan(a),
        Command::Qmc(a) => cmd_qmc(a),
        Command::Check(a) => cmd_check(a),
    }
}

fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if let Err(e) = emit(&cli, &out.text) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if out.ok { ExitCode::SUCCESS } else { ExitCode::from(1) }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if matches!(e, Error::Contract(_)) { 1 } else { 2 })
        }
    }
}
