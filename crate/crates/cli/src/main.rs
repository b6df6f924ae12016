// Copyright 2026 The codelineage Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;

use chrono::{DateTime, Utc};
use clap::{Args, Parser, Subcommand, ValueEnum};

use codelineage::corpus::parse_timestamp;
use codelineage::pipeline::{self, BaselineConfig, PipelineError, RunConfig, Scope, Stage};
use codelineage::similarity::FileQuery;

/// Provenance analysis for collections of software projects.
///
/// Each subcommand is one pipeline stage. Stages read and write artifacts in
/// the output directory: run `index` first, then `select`, then any of the
/// analysis stages, and finally `report`. `run` executes every stage.
///
/// Exit status: 0 success, 1 usage error, 2 data error, 3 missing
/// prerequisite artifact.
#[derive(Debug, Parser)]
#[command(name = "codelineage", version)]
struct Cli {
    /// Directory holding all artifacts.
    #[arg(long, short, global = true, default_value = "out")]
    out: PathBuf,

    /// Worker threads. Output does not depend on this value.
    #[arg(long, short, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: Option<u16>,

    /// More log output (repeat for debug).
    #[arg(long, short, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Load the manifest, classify and hash every source file.
    Index(IndexArgs),
    /// Rate repositories and keep the most relevant per project.
    Select(SelectArgs),
    /// Name-prefix derivations.
    DeriveName(NameArgs),
    /// Shared-commit fork derivations.
    DeriveCommit(ScopeArgs),
    /// Copyright-attribution derivations.
    DeriveCopyright(CopyrightArgs),
    /// File-hash similarity graph and its components.
    Similarity(SimilarityArgs),
    /// Match projects against dated snapshots of a reference codebase.
    Baseline(BaselineArgs),
    /// Profile the Solidity contracts listed in the manifest.
    Solidity,
    /// Merge all derivation edges and summarize per project.
    Report,
    /// Run every stage in order.
    Run(Box<RunArgs>),
    /// List projects holding a source file with a given name.
    Query(QueryArgs),
}

#[derive(Debug, Args)]
struct IndexArgs {
    /// Project manifest, one JSON object per line.
    #[arg(long, short)]
    manifest: PathBuf,
    /// Extension table replacing the built-in one (`<ext> <language>` lines).
    #[arg(long)]
    extensions: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SelectArgs {
    /// Time staleness is measured against (default: latest update in the corpus).
    #[arg(long, value_parser = timestamp)]
    reference_time: Option<DateTime<Utc>>,
    /// Exclusion list replacing the built-in one.
    #[arg(long)]
    exclusions: Option<PathBuf>,
    /// CSV of `project_id,repo_id,action` with action `pin` or `ban`.
    #[arg(long)]
    overrides: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct NameArgs {
    /// Stoplist replacing the built-in one, one name per line.
    #[arg(long)]
    stoplist: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ScopeValue {
    Selected,
    All,
}

#[derive(Debug, Args)]
struct ScopeArgs {
    /// Repositories to analyze.
    #[arg(long, value_enum, default_value = "selected")]
    scope: ScopeValue,
}

#[derive(Debug, Args)]
struct CopyrightArgs {
    #[command(flatten)]
    scope: ScopeArgs,
    /// Alias map (`pattern,project_id`) replacing the built-in one.
    #[arg(long)]
    aliases: Option<PathBuf>,
    /// Author map (`pattern,project_id`) replacing the built-in one.
    #[arg(long)]
    authors: Option<PathBuf>,
    /// Library names masked out of copyright lines, one per line.
    #[arg(long)]
    libraries: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SimilarityArgs {
    #[command(flatten)]
    scope: ScopeArgs,
    /// Edges need a score strictly above this value.
    #[arg(long, default_value_t = 0.7)]
    threshold: f64,
}

#[derive(Debug, Args)]
struct BaselineArgs {
    #[command(flatten)]
    scope: ScopeArgs,
    /// Commit log of the reference codebase.
    #[arg(long)]
    baseline_log: PathBuf,
    /// Directory with one tree per commit, named by commit hash.
    #[arg(long)]
    snapshots: PathBuf,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Debug, Args)]
struct GridArgs {
    /// First grid point (default: first commit).
    #[arg(long, value_parser = timestamp)]
    start_time: Option<DateTime<Utc>>,
    /// Days between grid points.
    #[arg(long, default_value_t = 183, value_parser = clap::value_parser!(u32).range(1..))]
    interval_days: u32,
    /// Score bands for the version histogram.
    #[arg(long, value_delimiter = ',', default_value = "0.3,0.5,0.7")]
    bands: Vec<f64>,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    index: IndexArgs,
    #[command(flatten)]
    select: SelectArgs,
    #[command(flatten)]
    name: NameArgs,
    #[command(flatten)]
    copyright: CopyrightArgs,
    /// Edges need a score strictly above this value.
    #[arg(long, default_value_t = 0.7)]
    threshold: f64,
    /// Commit log of the reference codebase; enables the baseline stage.
    #[arg(long, requires = "snapshots")]
    baseline_log: Option<PathBuf>,
    /// Directory with one tree per commit, named by commit hash.
    #[arg(long, requires = "baseline_log")]
    snapshots: Option<PathBuf>,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct QueryTarget {
    /// File name (last path segment) equal to this value.
    #[arg(long)]
    name_equals: Option<String>,
    /// File name containing this value.
    #[arg(long)]
    name_contains: Option<String>,
}

#[derive(Debug, Args)]
struct QueryArgs {
    #[command(flatten)]
    scope: ScopeArgs,
    #[command(flatten)]
    target: QueryTarget,
}

fn timestamp(s: &str) -> Result<DateTime<Utc>, String> {
    parse_timestamp(s).ok_or_else(|| format!("unrecognized timestamp {s:?}"))
}

impl From<ScopeValue> for Scope {
    fn from(v: ScopeValue) -> Self {
        match v {
            ScopeValue::Selected => Scope::Selected,
            ScopeValue::All => Scope::All,
        }
    }
}

impl GridArgs {
    fn apply(&self, config: &mut RunConfig) {
        config.interval_days = self.interval_days;
        config.score_bands = self.bands.clone();
    }
}

impl SelectArgs {
    fn apply(&self, config: &mut RunConfig) {
        config.reference_time = self.reference_time;
        config.exclusions = self.exclusions.clone();
        config.overrides = self.overrides.clone();
    }
}

impl CopyrightArgs {
    fn apply(&self, config: &mut RunConfig) {
        config.scope = self.scope.scope.into();
        config.aliases = self.aliases.clone();
        config.authors = self.authors.clone();
        config.libraries = self.libraries.clone();
    }
}

fn execute(cli: Cli) -> Result<(), PipelineError> {
    let mut config = RunConfig::new(&cli.out);
    config.jobs = match cli.jobs {
        Some(j) => usize::from(j),
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let stage = match cli.command {
        Command::Index(a) => {
            config.manifest = Some(a.manifest);
            config.extensions = a.extensions;
            Stage::Index
        }
        Command::Select(a) => {
            a.apply(&mut config);
            Stage::Select
        }
        Command::DeriveName(a) => {
            config.stoplist = a.stoplist;
            Stage::DeriveName
        }
        Command::DeriveCommit(a) => {
            config.scope = a.scope.into();
            Stage::DeriveCommit
        }
        Command::DeriveCopyright(a) => {
            a.apply(&mut config);
            Stage::DeriveCopyright
        }
        Command::Similarity(a) => {
            config.scope = a.scope.scope.into();
            config.threshold = a.threshold;
            Stage::Similarity
        }
        Command::Baseline(a) => {
            config.scope = a.scope.scope.into();
            a.grid.apply(&mut config);
            config.baseline = Some(BaselineConfig {
                commit_log: a.baseline_log,
                snapshots: a.snapshots,
                start_time: a.grid.start_time,
            });
            Stage::Baseline
        }
        Command::Solidity => Stage::Solidity,
        Command::Report => Stage::Report,
        Command::Run(a) => {
            config.manifest = Some(a.index.manifest);
            config.extensions = a.index.extensions;
            a.select.apply(&mut config);
            config.stoplist = a.name.stoplist;
            a.copyright.apply(&mut config);
            config.threshold = a.threshold;
            a.grid.apply(&mut config);
            if let (Some(commit_log), Some(snapshots)) = (a.baseline_log, a.snapshots) {
                config.baseline = Some(BaselineConfig {
                    commit_log,
                    snapshots,
                    start_time: a.grid.start_time,
                });
            }
            return pipeline::run_all(&config);
        }
        Command::Query(a) => {
            config.scope = a.scope.scope.into();
            let query = match (a.target.name_equals, a.target.name_contains) {
                (Some(n), _) => FileQuery::NameEquals(n),
                (None, Some(n)) => FileQuery::NameContains(n),
                (None, None) => unreachable!("clap enforces one target"),
            };
            config.validate()?;
            for p in pipeline::query_files(&config, &query)? {
                println!("{p}");
            }
            return Ok(());
        }
    };
    pipeline::run_stage(stage, &config)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
