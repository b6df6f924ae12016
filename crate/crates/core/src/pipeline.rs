// Copyright 2026 The codelineage Authors
// SPDX-License-Identifier: Apache-2.0

//! Stage runner. Stages exchange data only through files in the output
//! directory, so any stage can be rerun on its own once its inputs exist.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chrono::{DateTime, Utc};
use rayon::prelude::*;
use thiserror::Error;

use crate::baseline::{self, DirSnapshotProvider, Metric};
use crate::corpus::{
    index_corpus, load_manifest, parse_commit_log, CorpusIndex, ExtensionTable, IndexError, ProjectId, RepoId,
};
use crate::derive::{
    commit, copyright, edges_from_json, edges_to_csv, edges_to_json, name, sort_edges, DerivationEdge, DerivationMethod,
};
use crate::selection::{
    read_selection_csv, select_corpus, selected_by_project, write_selection_csv, ExclusionList, RelevanceBonus,
    SelectionOverrides,
};
use crate::similarity::{self, FileQuery, RepoScope};
use crate::solidity::{self, ContractProfile, Feature};

pub mod artifacts {
    pub const INDEX: &str = "index.json";
    pub const SELECTION: &str = "selection.csv";
    pub const ATTRIBUTIONS: &str = "attributions.csv";
    pub const GRAPH_JSON: &str = "similarity-graph.json";
    pub const GRAPH_DOT: &str = "similarity-graph.dot";
    pub const SCORES: &str = "similarity-scores.csv";
    pub const COMPONENTS: &str = "similarity-components.csv";
    pub const DEGREES: &str = "similarity-degrees.csv";
    pub const VERSIONS: &str = "baseline-versions.json";
    pub const MATCHES: &str = "baseline-matches.csv";
    pub const MATRIX_HASH: &str = "baseline-matrix-hash.csv";
    pub const MATRIX_DIR: &str = "baseline-matrix-dir.csv";
    pub const HISTOGRAM: &str = "baseline-histogram.csv";
    pub const PROFILES: &str = "contract-profiles.json";
    pub const CDF: &str = "contract-cdf.csv";
    pub const DIVERSITY: &str = "contract-diversity.csv";
    pub const TEMPLATES: &str = "contract-templates.csv";
    pub const DERIVATIONS_JSON: &str = "derivations.json";
    pub const DERIVATIONS_CSV: &str = "derivations.csv";
    pub const SUMMARY: &str = "project-summary.csv";
}

/// `edges-<method>.json`
pub fn edges_json_name(method: DerivationMethod) -> String {
    format!("edges-{}.json", method.as_str())
}

/// `edges-<method>.csv`
pub fn edges_csv_name(method: DerivationMethod) -> String {
    format!("edges-{}.csv", method.as_str())
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{0}")]
    Usage(String),
    #[error("{context}: {message}")]
    Data { context: String, message: String },
    #[error("missing {}: run `{producer}` first", path.display())]
    Prerequisite { path: PathBuf, producer: &'static str },
}

impl PipelineError {
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Usage(_) => 1,
            PipelineError::Data { .. } => 2,
            PipelineError::Prerequisite { .. } => 3,
        }
    }

    fn data(context: impl fmt::Display, message: impl fmt::Display) -> Self {
        PipelineError::Data {
            context: context.to_string(),
            message: message.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Index,
    Select,
    DeriveName,
    DeriveCommit,
    DeriveCopyright,
    Similarity,
    Baseline,
    Solidity,
    Report,
}

impl Stage {
    pub const ALL: [Stage; 9] = [
        Stage::Index,
        Stage::Select,
        Stage::DeriveName,
        Stage::DeriveCommit,
        Stage::DeriveCopyright,
        Stage::Similarity,
        Stage::Baseline,
        Stage::Solidity,
        Stage::Report,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Index => "index",
            Stage::Select => "select",
            Stage::DeriveName => "derive-name",
            Stage::DeriveCommit => "derive-commit",
            Stage::DeriveCopyright => "derive-copyright",
            Stage::Similarity => "similarity",
            Stage::Baseline => "baseline",
            Stage::Solidity => "solidity",
            Stage::Report => "report",
        }
    }
}

impl FromStr for Stage {
    type Err = PipelineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Stage::ALL
            .into_iter()
            .find(|st| st.as_str() == s)
            .ok_or_else(|| PipelineError::Usage(format!("unknown stage {s:?}")))
    }
}

/// Which repositories the code-level stages look at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scope {
    /// Only repositories picked by the `select` stage.
    #[default]
    Selected,
    All,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineConfig {
    /// Commit log of the reference codebase, `<hash> <timestamp>` per line.
    pub commit_log: PathBuf,
    /// Directory holding one materialized tree per commit, named by hash.
    pub snapshots: PathBuf,
    /// Grid anchor; defaults to the first commit.
    pub start_time: Option<DateTime<Utc>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub manifest: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub threshold: f64,
    pub interval_days: u32,
    /// Defaults to the latest `last_update` in the corpus.
    pub reference_time: Option<DateTime<Utc>>,
    pub extensions: Option<PathBuf>,
    pub exclusions: Option<PathBuf>,
    pub overrides: Option<PathBuf>,
    pub stoplist: Option<PathBuf>,
    pub aliases: Option<PathBuf>,
    pub authors: Option<PathBuf>,
    pub libraries: Option<PathBuf>,
    pub score_bands: Vec<f64>,
    pub scope: Scope,
    pub baseline: Option<BaselineConfig>,
    pub jobs: usize,
}

impl RunConfig {
    pub fn new(out_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            manifest: None,
            out_dir: out_dir.into(),
            threshold: similarity::DEFAULT_THRESHOLD,
            interval_days: baseline::DEFAULT_INTERVAL_DAYS,
            reference_time: None,
            extensions: None,
            exclusions: None,
            overrides: None,
            stoplist: None,
            aliases: None,
            authors: None,
            libraries: None,
            score_bands: baseline::DEFAULT_SCORE_BANDS.to_vec(),
            scope: Scope::Selected,
            baseline: None,
            jobs: 1,
        }
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        if !(0.0..1.0).contains(&self.threshold) {
            return Err(PipelineError::Usage(format!(
                "threshold {} is outside [0, 1)",
                self.threshold
            )));
        }
        if self.interval_days < 1 {
            return Err(PipelineError::Usage("interval must be at least one day".into()));
        }
        if self.jobs < 1 {
            return Err(PipelineError::Usage("jobs must be at least 1".into()));
        }
        if self.score_bands.iter().any(|b| !(0.0..=1.0).contains(b)) {
            return Err(PipelineError::Usage("score bands must lie in [0, 1]".into()));
        }
        Ok(())
    }

    fn path(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }
}

/// Runs one stage on a thread pool of `config.jobs` threads.
pub fn run_stage(stage: Stage, config: &RunConfig) -> Result<(), PipelineError> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| PipelineError::data("thread pool", e))?;
    fs::create_dir_all(&config.out_dir).map_err(|e| PipelineError::data(config.out_dir.display(), e))?;
    log::info!("stage {}", stage.as_str());
    pool.install(|| match stage {
        Stage::Index => stage_index(config),
        Stage::Select => stage_select(config),
        Stage::DeriveName => stage_derive_name(config),
        Stage::DeriveCommit => stage_derive_commit(config),
        Stage::DeriveCopyright => stage_derive_copyright(config),
        Stage::Similarity => stage_similarity(config),
        Stage::Baseline => stage_baseline(config),
        Stage::Solidity => stage_solidity(config),
        Stage::Report => stage_report(config),
    })
}

/// Every stage in order. The baseline stage is skipped when no baseline is
/// configured.
pub fn run_all(config: &RunConfig) -> Result<(), PipelineError> {
    for stage in Stage::ALL {
        if stage == Stage::Baseline && config.baseline.is_none() {
            log::info!("no baseline configured, skipping");
            continue;
        }
        run_stage(stage, config)?;
    }
    Ok(())
}

fn read_input(path: &Path) -> Result<String, PipelineError> {
    fs::read_to_string(path).map_err(|e| PipelineError::data(path.display(), e))
}

fn read_artifact(config: &RunConfig, name: &str, producer: &'static str) -> Result<String, PipelineError> {
    let path = config.path(name);
    if !path.is_file() {
        return Err(PipelineError::Prerequisite { path, producer });
    }
    read_input(&path)
}

/// Writes through a temporary file so a failed run never leaves a truncated
/// artifact behind.
fn write_artifact(config: &RunConfig, name: &str, contents: &str) -> Result<(), PipelineError> {
    let path = config.path(name);
    let tmp = config.path(&format!(".{name}.tmp"));
    fs::write(&tmp, contents)
        .and_then(|()| fs::rename(&tmp, &path))
        .map_err(|e| PipelineError::data(path.display(), e))?;
    log::debug!("wrote {}", path.display());
    Ok(())
}

fn load_index(config: &RunConfig) -> Result<CorpusIndex, PipelineError> {
    let text = read_artifact(config, artifacts::INDEX, "index")?;
    CorpusIndex::from_json(&text).map_err(|e| PipelineError::data(config.path(artifacts::INDEX).display(), e))
}

fn load_scope(config: &RunConfig, index: &CorpusIndex) -> Result<RepoScope, PipelineError> {
    match config.scope {
        Scope::All => Ok(similarity::scope_all(index)),
        Scope::Selected => {
            let text = read_artifact(config, artifacts::SELECTION, "select")?;
            let rows = read_selection_csv(&text)
                .map_err(|e| PipelineError::data(config.path(artifacts::SELECTION).display(), e))?;
            Ok(similarity::scope_selected(index, &selected_by_project(&rows)))
        }
    }
}

fn write_edges(config: &RunConfig, method: DerivationMethod, edges: &[DerivationEdge]) -> Result<(), PipelineError> {
    write_artifact(config, &edges_json_name(method), &edges_to_json(edges))?;
    write_artifact(config, &edges_csv_name(method), &edges_to_csv(edges))
}

fn csv_text(rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn stage_index(config: &RunConfig) -> Result<(), PipelineError> {
    let manifest = config
        .manifest
        .as_deref()
        .ok_or_else(|| PipelineError::Usage("the index stage needs a manifest".into()))?;
    let projects = load_manifest(manifest).map_err(|e| PipelineError::data(manifest.display(), e))?;
    let table = match &config.extensions {
        Some(p) => ExtensionTable::parse(&read_input(p)?).map_err(|e| PipelineError::data(p.display(), e))?,
        None => ExtensionTable::builtin(),
    };
    let (index, skipped) = index_corpus(projects, &table).map_err(|e: IndexError| PipelineError::data("index", e))?;
    if skipped > 0 {
        log::warn!("{skipped} unreadable entries skipped while indexing");
    }
    write_artifact(config, artifacts::INDEX, &index.to_json())
}

fn stage_select(config: &RunConfig) -> Result<(), PipelineError> {
    let index = load_index(config)?;
    let exclusions = match &config.exclusions {
        Some(p) => ExclusionList::parse(&read_input(p)?).map_err(|e| PipelineError::data(p.display(), e))?,
        None => ExclusionList::builtin(),
    };
    let overrides = match &config.overrides {
        Some(p) => SelectionOverrides::parse(&read_input(p)?).map_err(|e| PipelineError::data(p.display(), e))?,
        None => SelectionOverrides::default(),
    };
    let reference = match config.reference_time {
        Some(t) => t,
        None => index
            .projects
            .values()
            .flat_map(|p| p.repositories.iter().map(|r| r.last_update))
            .max()
            .unwrap_or(DateTime::<Utc>::UNIX_EPOCH),
    };
    let rows = select_corpus(
        index.projects.values(),
        reference,
        &RelevanceBonus::default(),
        &exclusions,
        &overrides,
    )
    .map_err(|e| PipelineError::data("select", e))?;
    let text = write_selection_csv(&rows).map_err(|e| PipelineError::data("select", e))?;
    write_artifact(config, artifacts::SELECTION, &text)
}

fn stage_derive_name(config: &RunConfig) -> Result<(), PipelineError> {
    let index = load_index(config)?;
    let stoplist = match &config.stoplist {
        Some(p) => name::Stoplist::parse(&read_input(p)?),
        None => name::Stoplist::builtin(),
    };
    let edges = name::detect_name_derivations(index.projects.values(), &stoplist);
    write_edges(config, DerivationMethod::Name, &edges)
}

fn stage_derive_commit(config: &RunConfig) -> Result<(), PipelineError> {
    let index = load_index(config)?;
    let scope = load_scope(config, &index)?;
    let repos = scope.iter().flat_map(|(p, repos)| {
        let index = &index;
        repos.iter().filter_map(move |r| index.repo(r).map(|snap| (p, snap)))
    });
    let edges = commit::detect_fork_derivations(&commit::index_commits(repos));
    write_edges(config, DerivationMethod::Commit, &edges)
}

fn load_name_map(
    path: &Option<PathBuf>,
    builtin: fn() -> copyright::NameMap,
) -> Result<copyright::NameMap, PipelineError> {
    match path {
        Some(p) => copyright::NameMap::parse(&read_input(p)?).map_err(|e| PipelineError::data(p.display(), e)),
        None => Ok(builtin()),
    }
}

fn stage_derive_copyright(config: &RunConfig) -> Result<(), PipelineError> {
    let index = load_index(config)?;
    let scope = load_scope(config, &index)?;
    let aliases = load_name_map(&config.aliases, copyright::NameMap::builtin_aliases)?;
    let authors = load_name_map(&config.authors, copyright::NameMap::builtin_authors)?;
    let libraries = match &config.libraries {
        Some(p) => copyright::LibraryExclusions::parse(&read_input(p)?),
        None => copyright::LibraryExclusions::builtin(),
    };
    let resolver = copyright::Resolver::new(index.projects.values(), aliases, authors, libraries);
    let repos: Vec<(ProjectId, RepoId, PathBuf)> = scope
        .iter()
        .flat_map(|(p, repos)| {
            repos
                .iter()
                .filter_map(|r| index.repo(r).map(|snap| (p.clone(), r.clone(), snap.root_path.clone())))
        })
        .collect();
    let table = ExtensionTable::from_map(index.extension_table.clone());
    let (mined, skipped) = copyright::mine_corpus(&repos, &table, copyright::HeaderWindows::default(), &resolver)
        .map_err(|e| PipelineError::data("derive-copyright", e))?;
    if skipped > 0 {
        log::warn!("{skipped} unreadable files skipped while mining copyright lines");
    }
    let mut rows = vec![["project_id", "repo_id", "source", "resolved_project", "line"]
        .map(String::from)
        .to_vec()];
    for (project, list) in &mined {
        for a in list {
            rows.push(vec![
                project.to_string(),
                a.repo_id.to_string(),
                a.source.as_str().to_string(),
                a.resolved_project.as_ref().map(ToString::to_string).unwrap_or_default(),
                a.raw_line.clone(),
            ]);
        }
    }
    write_artifact(config, artifacts::ATTRIBUTIONS, &csv_text(rows))?;
    write_edges(
        config,
        DerivationMethod::Copyright,
        &copyright::detect_copyright_derivations(&mined),
    )
}

fn stage_similarity(config: &RunConfig) -> Result<(), PipelineError> {
    let index = load_index(config)?;
    let scope = load_scope(config, &index)?;
    let scores = similarity::pairwise_scores(&index, &scope);
    let graph = similarity::graph_from_scores(scope.keys().cloned().collect(), &scores, config.threshold);

    let mut rows = vec![["source", "target", "matched_files", "total_files", "score"]
        .map(String::from)
        .to_vec()];
    rows.extend(scores.iter().map(|s| {
        vec![
            s.source.to_string(),
            s.target.to_string(),
            s.matched_files.to_string(),
            s.total_files.to_string(),
            s.score.to_string(),
        ]
    }));
    write_artifact(config, artifacts::SCORES, &csv_text(rows))?;

    let stats = similarity::component_stats(&graph);
    let mut comps = String::from("component,node_count,edge_count,mean_score\n");
    let mut degrees = String::from("component,project_id,in_degree,out_degree,degree\n");
    for c in &stats {
        let _ = writeln!(comps, "{},{},{},{}", c.rank, c.node_count(), c.edge_count, c.mean_score);
        for d in &c.degrees {
            let _ = writeln!(
                degrees,
                "{},{},{},{},{}",
                c.rank,
                d.project_id,
                d.in_degree,
                d.out_degree,
                d.degree()
            );
        }
    }
    let summary = similarity::graph_summary(&graph);
    log::info!(
        "similarity graph: {} of {} projects connected by {} edges in {} components",
        summary.connected_node_count,
        summary.node_count,
        summary.edge_count,
        summary.component_count
    );
    write_artifact(config, artifacts::COMPONENTS, &comps)?;
    write_artifact(config, artifacts::DEGREES, &degrees)?;
    write_artifact(
        config,
        artifacts::GRAPH_JSON,
        &similarity::graph_to_json(&graph, &index),
    )?;
    write_artifact(config, artifacts::GRAPH_DOT, &similarity::graph_to_dot(&graph, &index))?;
    write_edges(
        config,
        DerivationMethod::Filehash,
        &similarity::filehash_edges(&graph, &scores),
    )
}

fn stage_baseline(config: &RunConfig) -> Result<(), PipelineError> {
    let bc = config
        .baseline
        .as_ref()
        .ok_or_else(|| PipelineError::Usage("the baseline stage needs a commit log and a snapshot directory".into()))?;
    let index = load_index(config)?;
    let scope = load_scope(config, &index)?;
    let history = parse_commit_log(&RepoId::new("baseline"), &read_input(&bc.commit_log)?)
        .map_err(|e| PipelineError::data(bc.commit_log.display(), e))?;
    let start = match bc.start_time {
        Some(t) => t,
        None => history
            .iter()
            .map(|c| c.committer_timestamp)
            .min()
            .ok_or_else(|| PipelineError::data(bc.commit_log.display(), "history is empty"))?,
    };
    let provider = DirSnapshotProvider::new(&bc.snapshots, ExtensionTable::from_map(index.extension_table.clone()));
    let versions = baseline::snapshot_baseline(&history, &provider, start, config.interval_days)
        .map_err(|e| PipelineError::data("baseline", e))?;
    let matches = baseline::match_corpus(&index, &scope, &versions, &Metric::ALL);
    let n = versions.len() as u32;
    write_artifact(
        config,
        artifacts::VERSIONS,
        &baseline::versions_to_json(&versions, &provider),
    )?;
    write_artifact(config, artifacts::MATCHES, &baseline::matches_to_csv(&matches))?;
    write_artifact(
        config,
        artifacts::MATRIX_HASH,
        &baseline::score_matrix_csv(&matches, Metric::Hash, n),
    )?;
    write_artifact(
        config,
        artifacts::MATRIX_DIR,
        &baseline::score_matrix_csv(&matches, Metric::Dir, n),
    )?;
    let hist = baseline::version_histogram(&matches, n, &config.score_bands);
    write_artifact(config, artifacts::HISTOGRAM, &baseline::histogram_to_csv(&hist))
}

fn stage_solidity(config: &RunConfig) -> Result<(), PipelineError> {
    let index = load_index(config)?;
    let mut jobs = Vec::new();
    let mut used: BTreeSet<String> = BTreeSet::new();
    for p in index.projects.values() {
        for c in &p.contract_sources {
            let file = c
                .path
                .file_name()
                .map_or_else(|| c.path.display().to_string(), |f| f.to_string_lossy().into_owned());
            let base = format!("{}/{}", p.project_id, file);
            let mut id = base.clone();
            let mut k = 2;
            while !used.insert(id.clone()) {
                id = format!("{base}#{k}");
                k += 1;
            }
            jobs.push((id, c.origin, c.path.clone()));
        }
    }
    let profiles: Vec<ContractProfile> = jobs
        .par_iter()
        .map(|(id, origin, path)| {
            let bytes = fs::read(path).map_err(|e| PipelineError::data(path.display(), e))?;
            Ok(solidity::profile_contract(
                id,
                *origin,
                &String::from_utf8_lossy(&bytes),
            ))
        })
        .collect::<Result<_, PipelineError>>()?;
    let mut filters = vec![None];
    filters.extend(
        profiles
            .iter()
            .map(|p| p.origin)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .map(Some),
    );
    let mut cdfs = Vec::new();
    for feature in Feature::ALL {
        cdfs.extend(
            filters
                .iter()
                .filter_map(|o| solidity::aggregate_cdf(&profiles, feature, *o)),
        );
    }
    write_artifact(config, artifacts::PROFILES, &solidity::profiles_to_json(&profiles))?;
    write_artifact(config, artifacts::CDF, &solidity::cdfs_to_csv(&cdfs))?;
    write_artifact(config, artifacts::DIVERSITY, &solidity::diversity_to_csv(&cdfs))?;
    let templates = solidity::template_counts(&profiles);
    write_artifact(
        config,
        artifacts::TEMPLATES,
        &solidity::template_counts_to_csv(&templates),
    )
}

fn stage_report(config: &RunConfig) -> Result<(), PipelineError> {
    let index = load_index(config)?;
    let mut all = Vec::new();
    let mut present = Vec::new();
    for method in DerivationMethod::ALL {
        let name = edges_json_name(method);
        let path = config.path(&name);
        if !path.is_file() {
            log::warn!("no {} edges found ({} missing)", method, path.display());
            continue;
        }
        let edges = edges_from_json(&read_input(&path)?).map_err(|e| PipelineError::data(path.display(), e))?;
        present.push(method);
        all.extend(edges);
    }
    if present.is_empty() {
        return Err(PipelineError::Prerequisite {
            path: config.path(&edges_json_name(DerivationMethod::Name)),
            producer: "derive-name",
        });
    }
    sort_edges(&mut all);
    write_artifact(config, artifacts::DERIVATIONS_JSON, &edges_to_json(&all))?;
    write_artifact(config, artifacts::DERIVATIONS_CSV, &edges_to_csv(&all))?;

    let selected = match read_artifact(config, artifacts::SELECTION, "select") {
        Ok(text) => Some(
            read_selection_csv(&text)
                .map_err(|e| PipelineError::data(config.path(artifacts::SELECTION).display(), e))?,
        ),
        Err(PipelineError::Prerequisite { .. }) => None,
        Err(e) => return Err(e),
    };
    let selected = selected.map(|rows| selected_by_project(&rows));

    let mut targets: BTreeMap<(&ProjectId, DerivationMethod), BTreeSet<&ProjectId>> = BTreeMap::new();
    let mut derivatives: BTreeMap<&ProjectId, BTreeSet<&ProjectId>> = BTreeMap::new();
    for e in &all {
        targets.entry((&e.source, e.method)).or_default().insert(&e.target);
        derivatives.entry(&e.target).or_default().insert(&e.source);
    }
    let mut header: Vec<String> = [
        "project_id",
        "name",
        "kind",
        "category",
        "repositories",
        "selected_repositories",
        "source_files",
    ]
    .map(String::from)
    .to_vec();
    header.extend(DerivationMethod::ALL.iter().map(|m| format!("{m}_targets")));
    header.push("derivative_count".into());
    let mut rows = vec![header];
    for p in index.projects.values() {
        let files: usize = p.repositories.iter().map(|r| index.files_of(&r.repo_id).len()).sum();
        let mut row = vec![
            p.project_id.to_string(),
            p.name.clone(),
            p.kind.as_str().to_string(),
            p.category.clone().unwrap_or_default(),
            p.repositories.len().to_string(),
            selected
                .as_ref()
                .map(|s| s.get(&p.project_id).map_or(0, Vec::len).to_string())
                .unwrap_or_default(),
            files.to_string(),
        ];
        for m in DerivationMethod::ALL {
            let list = targets.get(&(&p.project_id, m));
            row.push(
                list.map(|t| t.iter().map(|id| id.as_str()).collect::<Vec<_>>().join(";"))
                    .unwrap_or_default(),
            );
        }
        row.push(derivatives.get(&p.project_id).map_or(0, BTreeSet::len).to_string());
        rows.push(row);
    }
    write_artifact(config, artifacts::SUMMARY, &csv_text(rows))
}

/// Projects in scope holding a matching source file.
pub fn query_files(config: &RunConfig, query: &FileQuery) -> Result<Vec<ProjectId>, PipelineError> {
    let index = load_index(config)?;
    let scope = load_scope(config, &index)?;
    let all: Vec<ProjectId> = scope.keys().cloned().collect();
    Ok(similarity::projects_with_file(&index, &scope, &all, query))
}

/// Every artifact a full run writes, given whether a baseline is configured.
pub fn expected_artifacts(with_baseline: bool) -> Vec<String> {
    use artifacts::*;
    let mut out: Vec<String> = [
        INDEX,
        SELECTION,
        ATTRIBUTIONS,
        GRAPH_JSON,
        GRAPH_DOT,
        SCORES,
        COMPONENTS,
        DEGREES,
    ]
    .into_iter()
    .map(String::from)
    .collect();
    for m in DerivationMethod::ALL {
        out.push(edges_json_name(m));
        out.push(edges_csv_name(m));
    }
    if with_baseline {
        out.extend([VERSIONS, MATCHES, MATRIX_HASH, MATRIX_DIR, HISTOGRAM].map(String::from));
    }
    out.extend(
        [
            PROFILES,
            CDF,
            DIVERSITY,
            TEMPLATES,
            DERIVATIONS_JSON,
            DERIVATIONS_CSV,
            SUMMARY,
        ]
        .map(String::from),
    );
    out
}
