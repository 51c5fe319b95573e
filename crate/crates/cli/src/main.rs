use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use nicer_ears_core::approx::{connected_tjoin_3_2, tsp_7_5, two_ecss_4_3, BlockTrace, RunTrace};
use nicer_ears_core::generate::generate;
use nicer_ears_core::graph::{parse_graph, Instance};
use nicer_ears_core::lp::{lp_2ec, lp_tjoin, CutFamily, LpLimits, Q};
use nicer_ears_core::oracle::{opt_2ecss, opt_connected_tjoin, phi_oracle, OracleLimits};
use nicer_ears_core::verify::{parse_solution, verify_solution, write_solution, Problem};
use nicer_ears_core::{Multigraph, Solution};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const SCHEMA: &str = "nicer-ears-report/1";

#[derive(Parser)]
#[command(name = "nicer-ears", version, about = "Ear-decomposition approximations for graphic TSP, connected T-joins and 2ECSS")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Tsp,
    Tjoin,
    #[value(name = "2ecss")]
    TwoEcss,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleKind {
    Tsp,
    Tjoin,
    #[value(name = "2ecss")]
    TwoEcss,
    Phi,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run an approximation algorithm and report bounds.
    Solve {
        problem: Kind,
        file: PathBuf,
        /// Also compute the exact LP relaxation.
        #[arg(long)]
        lp: bool,
        /// Also compute the optimum by brute force.
        #[arg(long)]
        oracle: bool,
        /// Write the JSON report here (`-` for stdout).
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write the solution file here.
        #[arg(long)]
        solution: Option<PathBuf>,
    },
    /// Print an instance of a generated family.
    Gen {
        /// fig3, fig4, fig5, theta, cycle_st, random (2EC multigraph), random2vc.
        family: String,
        /// Family parameter; the vertex bound for the random families.
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a solution file against an instance.
    Verify {
        instance: PathBuf,
        solution: PathBuf,
        /// Defaults to tjoin when the instance has a T line, tsp otherwise.
        #[arg(long)]
        problem: Option<Kind>,
    },
    /// Exact optimum by brute force (small instances only).
    Oracle {
        problem: OracleKind,
        file: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        solution: Option<PathBuf>,
    },
}

fn rat(q: &Q) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

fn qi(x: usize) -> Q {
    Q::from_integer(x.into())
}

#[derive(Serialize)]
struct InstanceMeta {
    path: String,
    n: usize,
    m: usize,
    /// 1-based.
    t: Option<Vec<usize>>,
}

#[derive(Serialize, Default)]
struct Bounds {
    lower_bound: Option<String>,
    l_phi: Option<usize>,
    l_mu: Option<usize>,
    lambda: Option<String>,
    lp: Option<String>,
    lp_error: Option<String>,
}

#[derive(Serialize, Default)]
struct OracleOut {
    value: Option<usize>,
    error: Option<String>,
}

#[derive(Serialize)]
struct Assertions {
    solution_valid: bool,
    /// Output within the guaranteed ratio of the in-run lower bound.
    ratio_vs_lower_bound: Option<bool>,
    ratio_vs_lp: Option<bool>,
    at_least_oracle: Option<bool>,
}

#[derive(Serialize)]
struct BlockDigest {
    vertices: usize,
    edges: usize,
    method: &'static str,
    phi: Option<usize>,
    pendant: usize,
    drum: usize,
    mu: usize,
    l_phi: Option<usize>,
    l_mu: Option<usize>,
    lower_bound: String,
    candidates: Vec<(&'static str, usize)>,
    chosen: &'static str,
    cardinality: usize,
    threshold_branch: Option<&'static str>,
}

#[derive(Serialize)]
struct Report {
    schema: &'static str,
    instance: InstanceMeta,
    problem: &'static str,
    algorithm: String,
    cardinality: usize,
    guaranteed_ratio: Option<String>,
    bounds: Bounds,
    oracle: Option<OracleOut>,
    assertions: Assertions,
    failure: Option<String>,
    blocks: Vec<BlockDigest>,
}

impl Report {
    fn ok(&self) -> bool {
        let a = &self.assertions;
        a.solution_valid && [a.ratio_vs_lower_bound, a.ratio_vs_lp, a.at_least_oracle].iter().all(|x| x.unwrap_or(true))
    }
}

fn digest(b: &BlockTrace) -> BlockDigest {
    BlockDigest {
        vertices: b.vertices,
        edges: b.edges,
        method: b.method,
        phi: b.phi,
        pendant: b.pendant,
        drum: b.drum,
        mu: b.mu,
        l_phi: b.l_phi,
        l_mu: b.l_mu,
        lower_bound: rat(&b.lower_bound),
        candidates: b.candidates.clone(),
        chosen: b.chosen,
        cardinality: b.cardinality,
        threshold_branch: b.threshold_branch,
    }
}

fn load(path: &Path) -> anyhow::Result<Instance> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_graph(&text).with_context(|| format!("parsing {}", path.display()))
}

fn meta(path: &Path, inst: &Instance) -> InstanceMeta {
    InstanceMeta {
        path: path.display().to_string(),
        n: inst.graph.n(),
        m: inst.graph.m(),
        t: inst.t.as_ref().map(|t| t.iter().map(|v| v + 1).collect()),
    }
}

fn problem_of(kind: Kind, inst: &Instance) -> anyhow::Result<Problem> {
    Ok(match kind {
        Kind::Tsp => Problem::Tsp,
        Kind::TwoEcss => Problem::TwoEcss,
        Kind::Tjoin => Problem::Tjoin(inst.t.clone().context("tjoin needs a `t` line in the instance")?),
    })
}

fn name(kind: Kind) -> &'static str {
    match kind {
        Kind::Tsp => "tsp",
        Kind::Tjoin => "tjoin",
        Kind::TwoEcss => "2ecss",
    }
}

fn lp_value(g: &Multigraph, problem: &Problem) -> nicer_ears_core::Result<Q> {
    let lim = LpLimits::default();
    match problem {
        Problem::Tjoin(t) => Ok(lp_tjoin(g, t, CutFamily::EvenT, &lim)?.value),
        _ if g.is_two_edge_connected() => Ok(lp_2ec(g, &lim)?.value),
        _ => Ok(lp_tjoin(g, &[], CutFamily::EvenT, &lim)?.value),
    }
}

fn oracle_value(g: &Multigraph, problem: &Problem) -> nicer_ears_core::Result<(usize, Solution)> {
    let lim = OracleLimits::figures();
    match problem {
        Problem::Tsp => opt_connected_tjoin(g, &[], &lim),
        Problem::Tjoin(t) => opt_connected_tjoin(g, t, &lim),
        Problem::TwoEcss => opt_2ecss(g, &lim).map(|(v, es)| (v, Solution::from_edges(g.m(), &es))),
    }
}

/// Whole-instance L_φ, L_μ, Λ when the graph is a single ear-method block.
fn single_block_bounds(trace: &RunTrace, b: &mut Bounds) {
    let ears: Vec<&BlockTrace> = trace.blocks.iter().filter(|x| x.method == "ears").collect();
    if trace.blocks.len() == 1 && ears.len() == 1 {
        b.l_phi = ears[0].l_phi;
        b.l_mu = ears[0].l_mu;
        if let (Some(p), Some(m)) = (b.l_phi, b.l_mu) {
            b.lambda = Some(rat(&nicer_ears_core::bounds::lambda(m, p)));
        }
    }
}

fn emit(report: &Report, json: Option<&Path>) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(report)? + "\n";
    match json {
        Some(p) if p == Path::new("-") => print!("{text}"),
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => {}
    }
    if json != Some(Path::new("-")) {
        let status = if report.ok() { "ok" } else { "FAILED" };
        println!(
            "{} {}: cardinality {} lower bound {} lp {} oracle {} [{status}]",
            report.algorithm,
            report.instance.path,
            report.cardinality,
            report.bounds.lower_bound.as_deref().unwrap_or("-"),
            report.bounds.lp.as_deref().unwrap_or("-"),
            report.oracle.as_ref().and_then(|o| o.value).map(|v| v.to_string()).unwrap_or_else(|| "-".into()),
        );
        if let Some(f) = &report.failure {
            eprintln!("failure: {f}");
        }
    }
    Ok(())
}

fn write_sol(path: Option<&Path>, sol: &Solution) -> anyhow::Result<()> {
    if let Some(p) = path {
        std::fs::write(p, write_solution(sol)).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn solve(kind: Kind, file: &Path, lp: bool, oracle: bool, json: Option<&Path>, solution: Option<&Path>) -> anyhow::Result<bool> {
    let inst = load(file)?;
    let g = &inst.graph;
    let problem = problem_of(kind, &inst)?;
    let run = match &problem {
        Problem::Tsp => tsp_7_5(g),
        Problem::Tjoin(t) => connected_tjoin_3_2(g, t),
        Problem::TwoEcss => two_ecss_4_3(g),
    };
    let (sol, trace) = match run {
        Ok(x) => x,
        Err(e) => bail!("{} failed: {e}", name(kind)),
    };
    let verdict = verify_solution(g, &sol, &problem);
    let card = sol.cardinality();
    let mut bounds = Bounds { lower_bound: Some(rat(&trace.lower_bound)), ..Default::default() };
    single_block_bounds(&trace, &mut bounds);
    let in_run = trace
        .blocks
        .iter()
        .filter(|b| b.method == "ears")
        .all(|b| qi(b.cardinality) <= trace.ratio.clone() * b.lower_bound.clone());
    let mut ratio_vs_lp = None;
    if lp {
        match lp_value(g, &problem) {
            Ok(v) => {
                ratio_vs_lp = Some(qi(card) <= trace.ratio.clone() * v.clone());
                bounds.lp = Some(rat(&v));
            }
            Err(e) => bounds.lp_error = Some(e.to_string()),
        }
    }
    let mut oracle_out = None;
    let mut at_least = None;
    if oracle {
        let mut o = OracleOut::default();
        match oracle_value(g, &problem) {
            Ok((v, _)) => {
                at_least = Some(card >= v);
                o.value = Some(v);
            }
            Err(e) => o.error = Some(e.to_string()),
        }
        oracle_out = Some(o);
    }
    write_sol(solution, &sol)?;
    let report = Report {
        schema: SCHEMA,
        instance: meta(file, &inst),
        problem: name(kind),
        algorithm: trace.algorithm.to_string(),
        cardinality: card,
        guaranteed_ratio: Some(rat(&trace.ratio)),
        bounds,
        oracle: oracle_out,
        assertions: Assertions { solution_valid: verdict.ok(), ratio_vs_lower_bound: Some(in_run), ratio_vs_lp, at_least_oracle: at_least },
        failure: verdict.failure.clone(),
        blocks: trace.blocks.iter().map(digest).collect(),
    };
    emit(&report, json)?;
    Ok(report.ok())
}

fn run_oracle(kind: OracleKind, file: &Path, json: Option<&Path>, solution: Option<&Path>) -> anyhow::Result<bool> {
    let inst = load(file)?;
    let g = &inst.graph;
    let meta = meta(file, &inst);
    let (problem_name, value, valid, failure) = match kind {
        OracleKind::Phi => {
            let (phi, _) = phi_oracle(g, 16).context("φ oracle")?;
            ("phi", phi, true, None)
        }
        _ => {
            let k = match kind {
                OracleKind::Tsp => Kind::Tsp,
                OracleKind::Tjoin => Kind::Tjoin,
                _ => Kind::TwoEcss,
            };
            let problem = problem_of(k, &inst)?;
            let (v, sol) = oracle_value(g, &problem).context("oracle")?;
            let verdict = verify_solution(g, &sol, &problem);
            write_sol(solution, &sol)?;
            (name(k), v, verdict.ok(), verdict.failure)
        }
    };
    let report = Report {
        schema: SCHEMA,
        instance: meta,
        problem: problem_name,
        algorithm: format!("oracle_{problem_name}"),
        cardinality: value,
        guaranteed_ratio: None,
        bounds: Bounds::default(),
        oracle: Some(OracleOut { value: Some(value), error: None }),
        assertions: Assertions { solution_valid: valid, ratio_vs_lower_bound: None, ratio_vs_lp: None, at_least_oracle: None },
        failure,
        blocks: Vec::new(),
    };
    emit(&report, json)?;
    Ok(report.ok())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Solve { problem, file, lp, oracle, json, solution } => solve(problem, &file, lp, oracle, json.as_deref(), solution.as_deref()),
        Cmd::Gen { family, k, seed, out } => generate(&family, k, seed).map_err(anyhow::Error::from).and_then(|gen| {
            let text = gen.graph.to_instance(gen.t.as_deref());
            match out {
                Some(p) => std::fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?,
                None => print!("{text}"),
            }
            Ok(true)
        }),
        Cmd::Verify { instance, solution, problem } => (|| {
            let inst = load(&instance)?;
            let kind = problem.unwrap_or(if inst.t.is_some() { Kind::Tjoin } else { Kind::Tsp });
            let p = problem_of(kind, &inst)?;
            let text = std::fs::read_to_string(&solution).with_context(|| format!("reading {}", solution.display()))?;
            let sol = parse_solution(&text, inst.graph.m()).with_context(|| format!("parsing {}", solution.display()))?;
            let v = verify_solution(&inst.graph, &sol, &p);
            match &v.failure {
                None => println!("pass: {} solution with {} edges", name(kind), v.cardinality),
                Some(f) => println!("fail: {f}"),
            }
            Ok(v.ok())
        })(),
        Cmd::Oracle { problem, file, json, solution } => run_oracle(problem, &file, json.as_deref(), solution.as_deref()),
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
