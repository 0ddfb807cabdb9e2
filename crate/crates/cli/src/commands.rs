use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use trikernel::audit::audit_outcome;
use trikernel::gen::{generate, GenSpec};
use trikernel::graph::{parse_graph, write_edge_list};
use trikernel::oracle::{self, OracleError};
use trikernel::rules::{kernelize_with, KernelConfig, RuleCounters};
use trikernel::{
    kernelize, lift_solution, Graph, Instance, KernelOutcome, ProblemVariant, Solution, Verdict,
};

use crate::args::{
    AuditArgs, Command, GenFlags, GenerateArgs, InstanceArgs, KernelizeArgs, Problem, SolveArgs,
    VerifyArgs,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{0}")]
    Input(String),
    #[error("refusing to solve: {0}")]
    Budget(#[from] OracleError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Budget(_) => EXIT_BUDGET,
            _ => EXIT_INPUT,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    if path == Path::new("-") {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text).map_err(io_err(path))?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(io_err(path))
    }
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(io_err(path))
}

fn create_dir(path: &Path) -> Result<(), CliError> {
    fs::create_dir_all(path).map_err(io_err(path))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output types serialize");
    s.push('\n');
    s
}

fn load_instance(args: &InstanceArgs) -> Result<Instance, CliError> {
    let text = read_text(&args.input)?;
    let graph = parse_graph(&text, args.format.into()).map_err(|e| CliError::Parse {
        path: args.input.clone(),
        message: e.to_string(),
    })?;
    Ok(Instance::new(graph, args.k, args.problem.into()))
}

fn load_spec(flags: &GenFlags) -> Result<GenSpec, CliError> {
    match &flags.spec {
        Some(path) => serde_json::from_str(&read_text(path)?).map_err(|e| CliError::Parse {
            path: path.clone(),
            message: e.to_string(),
        }),
        None => Ok(flags.to_spec()),
    }
}

pub fn run(command: &Command) -> Result<i32, CliError> {
    match command {
        Command::Kernelize(a) => cmd_kernelize(a, command),
        Command::Solve(a) => cmd_solve(a),
        Command::Verify(a) => cmd_verify(a, command),
        Command::Audit(a) => cmd_audit(a),
        Command::Generate(a) => cmd_generate(a),
        Command::Run { manifest } => {
            let text = read_text(manifest)?;
            let inner: Command = serde_json::from_str(&text).map_err(|e| CliError::Parse {
                path: manifest.clone(),
                message: e.to_string(),
            })?;
            run(&inner)
        }
    }
}

#[derive(Serialize)]
struct KernelStats<'a> {
    problem: ProblemVariant,
    verdict: Verdict,
    n: usize,
    m: usize,
    k: i64,
    kernel_n: usize,
    kernel_m: usize,
    kernel_k: i64,
    packing_size: usize,
    /// `kernel_n ≤ 3 kernel_k`; only meaningful for a `reduced` verdict.
    within_bound: Option<bool>,
    counters: &'a RuleCounters,
}

fn stats<'a>(original: &Instance, out: &'a KernelOutcome) -> KernelStats<'a> {
    let kernel = &out.instance;
    KernelStats {
        problem: original.variant,
        verdict: out.verdict,
        n: original.graph.n(),
        m: original.graph.m(),
        k: original.k,
        kernel_n: kernel.graph.n(),
        kernel_m: kernel.graph.m(),
        kernel_k: kernel.k,
        packing_size: out.packing.len(),
        within_bound: (out.verdict == Verdict::Reduced)
            .then(|| kernel.graph.n() as i64 <= 3 * kernel.k),
        counters: &out.counters,
    }
}

fn cmd_kernelize(args: &KernelizeArgs, command: &Command) -> Result<i32, CliError> {
    let original = load_instance(&args.instance)?;
    let out = kernelize(&original);
    let kernel = &out.instance;
    println!("verdict: {}", out.verdict);
    println!("k: {} -> {}", original.k, kernel.k);
    println!(
        "n: {} -> {} (3k = {}, |S| = {})",
        original.graph.n(),
        kernel.graph.n(),
        3 * kernel.k,
        out.packing.len()
    );
    println!("rule applications: {}", out.counters.total());
    if let Some(dir) = &args.out {
        create_dir(dir)?;
        write_text(&dir.join("kernel.txt"), &write_edge_list(&kernel.graph))?;
        let mut trace = out.trace_json();
        trace.push('\n');
        write_text(&dir.join("trace.json"), &trace)?;
        write_text(&dir.join("stats.json"), &to_json(&stats(&original, &out)))?;
        write_text(&dir.join("manifest.json"), &to_json(command))?;
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct SolveReport {
    problem: ProblemVariant,
    k: i64,
    verdict: Verdict,
    /// Size of the instance the oracle actually ran on.
    solved_n: usize,
    solved_m: usize,
    witness: Option<Solution>,
}

/// Certificate for a verdict the driver reached on its own.
fn driver_certificate(out: &KernelOutcome) -> Solution {
    match out.instance.variant {
        ProblemVariant::Etp => Solution::Packing(out.packing.triangles().collect()),
        ProblemVariant::Etc => Solution::Cover(Vec::new()),
    }
}

fn cmd_solve(args: &SolveArgs) -> Result<i32, CliError> {
    let original = load_instance(&args.instance)?;
    if args.no_kernel {
        let witness = oracle::decide_with_witness(&original)?;
        return finish_solve(args, &original, &original.graph, witness);
    }
    let out = kernelize(&original);
    let reduced = match out.verdict {
        Verdict::No => None,
        Verdict::Yes => Some(driver_certificate(&out)),
        Verdict::Reduced => oracle::decide_with_witness(&out.instance)?,
    };
    let lifted = match reduced.map(|sol| lift_solution(&original, &out, &sol)) {
        None => None,
        Some(Ok(l)) => Some(l),
        Some(Err(e)) => {
            eprintln!("error: {e}");
            return Ok(EXIT_PROPERTY);
        }
    };
    finish_solve(args, &original, &out.instance.graph, lifted)
}

fn finish_solve(
    args: &SolveArgs,
    original: &Instance,
    solved: &Graph,
    witness: Option<Solution>,
) -> Result<i32, CliError> {
    if let Some(w) = &witness {
        if let Err(e) = w.validate(original) {
            eprintln!("error: witness rejected: {e}");
            return Ok(EXIT_PROPERTY);
        }
    }
    let report = SolveReport {
        problem: original.variant,
        k: original.k,
        verdict: if witness.is_some() { Verdict::Yes } else { Verdict::No },
        solved_n: solved.n(),
        solved_m: solved.m(),
        witness,
    };
    let json = to_json(&report);
    print!("{json}");
    if let Some(path) = &args.out {
        write_text(path, &json)?;
    }
    Ok(EXIT_OK)
}

fn cmd_audit(args: &AuditArgs) -> Result<i32, CliError> {
    let original = load_instance(&args.instance)?;
    let out = kernelize(&original);
    let Some(report) = audit_outcome(&out) else {
        println!("no residual graph to audit (verdict: {})", out.verdict);
        return Ok(EXIT_OK);
    };
    for (check, outcome) in &report.checks {
        if outcome.passed {
            println!("PASS {}", check.name());
        } else {
            println!("FAIL {}: {}", check.name(), outcome.witnesses.join("; "));
        }
    }
    let c = &report.counters;
    println!(
        "n = {}, |S| = {}, 3|S| = {}, k = {}, 3k = {}",
        c.n,
        c.packing_size,
        3 * c.packing_size,
        out.instance.k,
        3 * out.instance.k
    );
    println!("min vertex value = {}", report.min_vertex_value);
    if let Some(path) = &args.out {
        let mut json = report.to_json();
        json.push('\n');
        write_text(path, &json)?;
    }
    Ok(if report.passed { EXIT_OK } else { EXIT_PROPERTY })
}

fn cmd_generate(args: &GenerateArgs) -> Result<i32, CliError> {
    let spec = load_spec(&args.gen)?;
    let g = generate(&spec).map_err(|e| CliError::Input(e.to_string()))?;
    let text = write_edge_list(&g);
    match &args.out {
        Some(path) => write_text(path, &text)?,
        None => print!("{text}"),
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct Mismatch {
    instance: usize,
    seed: u64,
    problem: ProblemVariant,
    k: i64,
    expected: bool,
    kernel_verdict: Verdict,
    decided: bool,
    graph: String,
    trace: serde_json::Value,
}

#[derive(Default)]
struct Tally {
    checked: usize,
    reduced: usize,
    refused: usize,
    mismatches: Vec<Mismatch>,
}

fn optimum(g: &Graph, variant: ProblemVariant) -> Result<usize, OracleError> {
    Ok(match variant {
        ProblemVariant::Etp => oracle::solve_etp_exact(g)?.optimum,
        ProblemVariant::Etc => oracle::solve_etc_exact(g)?.optimum,
    })
}

fn verify_instance(
    index: usize,
    seed: u64,
    g: &Graph,
    args: &VerifyArgs,
    variants: &[ProblemVariant],
) -> Tally {
    let config = KernelConfig {
        fault: args.fault.map(Into::into),
    };
    let mut tally = Tally::default();
    let k_max = args.k_max.unwrap_or(g.n() as i64);
    for &variant in variants {
        let Ok(opt) = optimum(g, variant) else {
            tally.refused += 1;
            continue;
        };
        let opt = opt as i64;
        for k in args.k_min..=k_max {
            let expected = match variant {
                ProblemVariant::Etp => opt >= k,
                ProblemVariant::Etc => opt <= k,
            };
            let out = kernelize_with(&Instance::new(g.clone(), k, variant), &config);
            let decided = match out.verdict {
                Verdict::Yes => true,
                Verdict::No => false,
                Verdict::Reduced => {
                    tally.reduced += 1;
                    match oracle::decide(&out.instance) {
                        Ok(d) => d,
                        Err(_) => {
                            tally.refused += 1;
                            continue;
                        }
                    }
                }
            };
            tally.checked += 1;
            if decided != expected {
                tally.mismatches.push(Mismatch {
                    instance: index,
                    seed,
                    problem: variant,
                    k,
                    expected,
                    kernel_verdict: out.verdict,
                    decided,
                    graph: write_edge_list(g),
                    trace: serde_json::to_value(&out.trace).expect("events serialize"),
                });
            }
        }
    }
    tally
}

fn cmd_verify(args: &VerifyArgs, command: &Command) -> Result<i32, CliError> {
    let spec = load_spec(&args.gen)?;
    let variants: Vec<ProblemVariant> = match args.problem {
        Some(p) => vec![p.into()],
        None => vec![Problem::Etp.into(), Problem::Etc.into()],
    };
    if args.instances == 0 {
        eprintln!("warning: empty corpus, nothing verified");
        return Ok(EXIT_OK);
    }
    let seeds: Vec<u64> = (0..args.instances as u64)
        .map(|i| spec.seed.wrapping_add(i))
        .collect();
    let graphs = seeds
        .iter()
        .map(|&s| generate(&spec.with_seed(s)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Input(e.to_string()))?;

    let tallies: Vec<Tally> = graphs
        .par_iter()
        .enumerate()
        .map(|(i, g)| verify_instance(i, seeds[i], g, args, &variants))
        .collect();
    let mut total = Tally::default();
    for t in tallies {
        total.checked += t.checked;
        total.reduced += t.reduced;
        total.refused += t.refused;
        total.mismatches.extend(t.mismatches);
    }

    println!(
        "instances: {}, decisions checked: {}, reduced kernels: {}, refused: {}, mismatches: {}",
        args.instances,
        total.checked,
        total.reduced,
        total.refused,
        total.mismatches.len()
    );
    if let Some(dir) = &args.out {
        create_dir(dir)?;
        write_text(&dir.join("manifest.json"), &to_json(command))?;
        for (i, m) in total.mismatches.iter().enumerate() {
            write_text(&dir.join(format!("mismatch-{i:04}.json")), &to_json(m))?;
        }
    }
    if let Some(first) = total.mismatches.first() {
        eprintln!(
            "mismatch: instance {} (seed {}), {} k = {}: oracle says {}, kernel path says {} (verdict {})",
            first.instance,
            first.seed,
            first.problem,
            first.k,
            first.expected,
            first.decided,
            first.kernel_verdict
        );
        eprint!("{}", first.graph);
        eprintln!("trace: {}", first.trace);
        return Ok(EXIT_PROPERTY);
    }
    if total.refused > 0 {
        eprintln!("warning: {} oracle calls refused over budget", total.refused);
        return Ok(EXIT_BUDGET);
    }
    Ok(EXIT_OK)
}
