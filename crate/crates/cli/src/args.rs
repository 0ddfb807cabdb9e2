use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use trikernel::gen::{GenKind, GenSpec};
use trikernel::rules::Fault;
use trikernel::{GraphFormat, ProblemVariant};

#[derive(Debug, Parser)]
#[command(name = "trikernel", version, about = "Kernelize, solve and audit edge triangle packing and covering instances")]
pub struct Cli {
    /// Worker threads for `verify` (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Reduce an instance to a kernel or a verdict.
    Kernelize(KernelizeArgs),
    /// Decide an instance and print a witness for yes-instances.
    Solve(SolveArgs),
    /// Compare kernelize against the exact oracle on a generated corpus.
    Verify(VerifyArgs),
    /// Run the charge-redistribution audit on the kernel of an instance.
    Audit(AuditArgs),
    /// Write a generated graph as an edge list.
    Generate(GenerateArgs),
    /// Execute a run manifest written by an earlier `--out` run.
    #[serde(skip)]
    Run {
        manifest: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    Etp,
    Etc,
}

impl From<Problem> for ProblemVariant {
    fn from(p: Problem) -> Self {
        match p {
            Problem::Etp => ProblemVariant::Etp,
            Problem::Etc => ProblemVariant::Etc,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Edgelist,
    Dimacs,
}

impl From<Format> for GraphFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Edgelist => GraphFormat::EdgeList,
            Format::Dimacs => GraphFormat::Dimacs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct InstanceArgs {
    /// Graph file, or `-` for stdin.
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub problem: Problem,
    #[arg(long, allow_negative_numbers = true)]
    pub k: i64,
    #[arg(long, value_enum, default_value_t = Format::Edgelist)]
    #[serde(default)]
    pub format: Format,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct KernelizeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub instance: InstanceArgs,
    /// Directory for kernel.txt, trace.json, stats.json and manifest.json.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct SolveArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub instance: InstanceArgs,
    /// Run the oracle on the input directly instead of on its kernel.
    #[arg(long)]
    #[serde(default)]
    pub no_kernel: bool,
    /// File for the witness as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct AuditArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub instance: InstanceArgs,
    /// File for the audit report as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    ErdosRenyi,
    PlantedPacking,
    K4Gadgets,
    CrownGadgets,
    SplittableMix,
}

impl From<Kind> for GenKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::ErdosRenyi => GenKind::ErdosRenyi,
            Kind::PlantedPacking => GenKind::PlantedPacking,
            Kind::K4Gadgets => GenKind::K4Gadgets,
            Kind::CrownGadgets => GenKind::CrownGadgets,
            Kind::SplittableMix => GenKind::SplittableMix,
        }
    }
}

/// Generator parameters, from flags or a JSON spec file.
#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct GenFlags {
    /// JSON generator spec; overrides the other generator flags.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Kind::ErdosRenyi)]
    pub kind: Kind,
    #[arg(long, default_value_t = 10)]
    pub n: u32,
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    #[arg(long, default_value_t = 1)]
    pub count: u32,
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    #[arg(long, default_value_t = 2)]
    pub t: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl GenFlags {
    pub fn to_spec(&self) -> GenSpec {
        GenSpec {
            kind: self.kind.into(),
            n: self.n,
            p: self.p,
            count: self.count,
            noise: self.noise,
            t: self.t,
            seed: self.seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct GenerateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub gen: GenFlags,
    /// Output file; stdout if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FaultArg {
    CliqueKeepsParameter,
    CrownOvercharges,
}

impl From<FaultArg> for Fault {
    fn from(f: FaultArg) -> Self {
        match f {
            FaultArg::CliqueKeepsParameter => Fault::CliqueKeepsParameter,
            FaultArg::CrownOvercharges => Fault::CrownOvercharges,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub gen: GenFlags,
    /// Number of graphs; graph i uses seed + i.
    #[arg(long, default_value_t = 100)]
    pub instances: usize,
    /// Only this variant; both if absent.
    #[arg(long, value_enum)]
    pub problem: Option<Problem>,
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub k_min: i64,
    /// Largest k to check; the graph's vertex count if absent.
    #[arg(long)]
    pub k_max: Option<i64>,
    /// Kernelize with a deliberate rule bug, to check that verify notices.
    #[arg(long, value_enum)]
    pub fault: Option<FaultArg>,
    /// Directory for failing instances and manifest.json.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
