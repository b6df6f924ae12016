// Copyright 2026 The codelineage Authors
// SPDX-License-Identifier: Apache-2.0

//! Dated snapshot versions of a reference codebase and best-version matching.
//!
//! Versions are taken on a fixed grid `start + k * interval`. At each grid
//! point the latest commit at or before it defines the snapshot; grid points
//! selecting the same commit as their predecessor collapse into one version.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::PathBuf;

use chrono::{DateTime, Duration, Utc};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{
    classify_tree, ClassifyError, CommitHash, CommitRecord, ContentHash, CorpusIndex, ExtensionTable, ProjectId,
    RepoId, SourceFile,
};
use crate::similarity::{project_files, RepoScope};

pub const VERSIONS_SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_INTERVAL_DAYS: u32 = 183;
pub const DEFAULT_SCORE_BANDS: [f64; 3] = [0.3, 0.5, 0.7];

#[derive(Debug, Error)]
pub enum BaselineError {
    #[error("baseline history is empty")]
    EmptyHistory,
    #[error("interval must be at least one day")]
    BadInterval,
    #[error("cannot materialize snapshot {commit}: {message}")]
    Materialize { commit: CommitHash, message: String },
    #[error("versions document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("versions document schema version {found} is not supported (expected {expected})")]
    SchemaVersion { found: u32, expected: u32 },
}

/// Materializes the source files of a commit of the reference codebase.
pub trait SnapshotProvider: Sync {
    fn materialize(&self, commit: &CommitHash) -> Result<Vec<SourceFile>, BaselineError>;

    /// Human-readable location of a snapshot, recorded in the versions manifest.
    fn location(&self, commit: &CommitHash) -> String;
}

/// Snapshots pre-materialized as `<root>/<commit hash>/`.
#[derive(Debug, Clone)]
pub struct DirSnapshotProvider {
    pub root: PathBuf,
    pub table: ExtensionTable,
}

impl DirSnapshotProvider {
    pub fn new(root: impl Into<PathBuf>, table: ExtensionTable) -> Self {
        DirSnapshotProvider {
            root: root.into(),
            table,
        }
    }

    fn dir(&self, commit: &CommitHash) -> PathBuf {
        self.root.join(commit.as_str())
    }
}

impl SnapshotProvider for DirSnapshotProvider {
    fn materialize(&self, commit: &CommitHash) -> Result<Vec<SourceFile>, BaselineError> {
        classify_tree(&RepoId::new(commit.as_str()), &self.dir(commit), &self.table)
            .map(|c| c.files)
            .map_err(|e: ClassifyError| BaselineError::Materialize {
                commit: commit.clone(),
                message: e.to_string(),
            })
    }

    fn location(&self, commit: &CommitHash) -> String {
        self.dir(commit).display().to_string()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineVersion {
    pub version_label: u32,
    pub snapshot_time: DateTime<Utc>,
    pub commit_hash: CommitHash,
    pub file_hashes: BTreeSet<ContentHash>,
    pub file_paths: BTreeSet<String>,
}

/// Grid points and the commit each one selects, after collapsing repeats.
pub fn version_grid(
    history: &[CommitRecord],
    start_time: DateTime<Utc>,
    interval_days: u32,
) -> Result<Vec<(DateTime<Utc>, CommitHash)>, BaselineError> {
    if interval_days == 0 {
        return Err(BaselineError::BadInterval);
    }
    let mut sorted: Vec<&CommitRecord> = history.iter().collect();
    sorted.sort_by_key(|a| a.committer_timestamp);
    let (first, last) = match (sorted.first(), sorted.last()) {
        (Some(f), Some(l)) => (f.committer_timestamp, l.committer_timestamp),
        _ => return Err(BaselineError::EmptyHistory),
    };
    let step = Duration::days(i64::from(interval_days));
    let mut out: Vec<(DateTime<Utc>, CommitHash)> = Vec::new();
    let mut point = start_time;
    let mut cursor = 0usize;
    while point <= last {
        if point >= first {
            while cursor + 1 < sorted.len() && sorted[cursor + 1].committer_timestamp <= point {
                cursor += 1;
            }
            let commit = &sorted[cursor].commit_hash;
            if out.last().map(|(_, c)| c) != Some(commit) {
                out.push((point, commit.clone()));
            }
        }
        point += step;
    }
    if out.is_empty() {
        // No grid point falls inside the history: the first point after its
        // start sees the final state.
        let mut point = start_time;
        if point < first {
            let gap = (first - start_time).num_seconds();
            let k = (gap + step.num_seconds() - 1) / step.num_seconds();
            point = start_time + Duration::seconds(k * step.num_seconds());
        }
        out.push((point, sorted[sorted.len() - 1].commit_hash.clone()));
    }
    Ok(out)
}

pub fn snapshot_baseline(
    history: &[CommitRecord],
    provider: &dyn SnapshotProvider,
    start_time: DateTime<Utc>,
    interval_days: u32,
) -> Result<Vec<BaselineVersion>, BaselineError> {
    let grid = version_grid(history, start_time, interval_days)?;
    grid.par_iter()
        .enumerate()
        .map(|(i, (time, commit))| {
            let files = provider.materialize(commit)?;
            Ok(BaselineVersion {
                version_label: i as u32 + 1,
                snapshot_time: *time,
                commit_hash: commit.clone(),
                file_hashes: files.iter().map(|f| f.content_hash).collect(),
                file_paths: files.into_iter().map(|f| f.rel_path).collect(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Hash,
    Dir,
}

impl Metric {
    pub const ALL: [Metric; 2] = [Metric::Hash, Metric::Dir];

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Hash => "hash",
            Metric::Dir => "dir",
        }
    }
}

/// Fraction of `files` whose relative path is in `paths`; `None` for no files.
pub fn s_dir(files: &[&SourceFile], paths: &BTreeSet<String>) -> Option<f64> {
    if files.is_empty() {
        return None;
    }
    let matched = files.iter().filter(|f| paths.contains(&f.rel_path)).count();
    Some(matched as f64 / files.len() as f64)
}

/// S_dir between two projects: paths of `source` found anywhere in `target`.
pub fn s_dir_project(source: &ProjectId, target: &ProjectId, index: &CorpusIndex, scope: &RepoScope) -> Option<f64> {
    let files = project_files(index, scope);
    let paths: BTreeSet<String> = files.get(target)?.iter().map(|f| f.rel_path.clone()).collect();
    if paths.is_empty() {
        return None;
    }
    s_dir(files.get(source)?, &paths)
}

fn s_hash_version(files: &[&SourceFile], hashes: &BTreeSet<ContentHash>) -> Option<f64> {
    if files.is_empty() {
        return None;
    }
    let matched = files.iter().filter(|f| hashes.contains(&f.content_hash)).count();
    Some(matched as f64 / files.len() as f64)
}

pub fn score_against(files: &[&SourceFile], version: &BaselineVersion, metric: Metric) -> Option<f64> {
    match metric {
        Metric::Hash => s_hash_version(files, &version.file_hashes),
        Metric::Dir => s_dir(files, &version.file_paths),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VersionMatch {
    pub project_id: ProjectId,
    pub metric: Metric,
    pub best_version: u32,
    pub best_score: f64,
    pub per_version_scores: Vec<(u32, f64)>,
}

/// Scores one project's files against every version; the earliest version
/// wins ties. `None` when the project has no files or there are no versions.
pub fn match_to_versions(
    project_id: &ProjectId,
    files: &[&SourceFile],
    versions: &[BaselineVersion],
    metric: Metric,
) -> Option<VersionMatch> {
    let per_version_scores: Vec<(u32, f64)> = versions
        .iter()
        .map(|v| Some((v.version_label, score_against(files, v, metric)?)))
        .collect::<Option<_>>()?;
    let mut best = *per_version_scores.first()?;
    for &(label, score) in &per_version_scores[1..] {
        if score > best.1 {
            best = (label, score);
        }
    }
    Some(VersionMatch {
        project_id: project_id.clone(),
        metric,
        best_version: best.0,
        best_score: best.1,
        per_version_scores,
    })
}

/// Matches every project in scope that has source files. Sorted by
/// (project, metric).
pub fn match_corpus(
    index: &CorpusIndex,
    scope: &RepoScope,
    versions: &[BaselineVersion],
    metrics: &[Metric],
) -> Vec<VersionMatch> {
    let files = project_files(index, scope);
    let jobs: Vec<(&ProjectId, &Vec<&SourceFile>, Metric)> = files
        .iter()
        .flat_map(|(p, f)| metrics.iter().map(move |m| (p, f, *m)))
        .collect();
    let mut out: Vec<VersionMatch> = jobs
        .par_iter()
        .filter_map(|(p, f, m)| match_to_versions(p, f, versions, *m))
        .collect();
    out.sort_by(|a, b| (&a.project_id, a.metric).cmp(&(&b.project_id, b.metric)));
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramRow {
    pub metric: Metric,
    pub version: u32,
    /// Projects counted here have `best_score >= band`.
    pub band: f64,
    pub count: usize,
}

/// Number of projects assigned to each version, per metric and score band.
pub fn version_histogram(matches: &[VersionMatch], version_count: u32, bands: &[f64]) -> Vec<HistogramRow> {
    let present: BTreeSet<Metric> = matches.iter().map(|m| m.metric).collect();
    let mut rows = Vec::new();
    for metric in present {
        for version in 1..=version_count {
            for &band in bands {
                let count = matches
                    .iter()
                    .filter(|m| m.metric == metric && m.best_version == version && m.best_score >= band)
                    .count();
                rows.push(HistogramRow {
                    metric,
                    version,
                    band,
                    count,
                });
            }
        }
    }
    rows
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VersionEntry {
    pub label: u32,
    pub time: DateTime<Utc>,
    pub commit: CommitHash,
    pub path: String,
    pub file_count: usize,
}

#[derive(Serialize, Deserialize)]
struct VersionsDocument {
    schema_version: u32,
    versions: Vec<VersionEntry>,
}

pub fn versions_to_json(versions: &[BaselineVersion], provider: &dyn SnapshotProvider) -> String {
    let doc = VersionsDocument {
        schema_version: VERSIONS_SCHEMA_VERSION,
        versions: versions
            .iter()
            .map(|v| VersionEntry {
                label: v.version_label,
                time: v.snapshot_time,
                commit: v.commit_hash.clone(),
                path: provider.location(&v.commit_hash),
                file_count: v.file_paths.len(),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("versions serialize");
    s.push('\n');
    s
}

pub fn versions_from_json(text: &str) -> Result<Vec<VersionEntry>, BaselineError> {
    let doc: VersionsDocument = serde_json::from_str(text)?;
    if doc.schema_version != VERSIONS_SCHEMA_VERSION {
        return Err(BaselineError::SchemaVersion {
            found: doc.schema_version,
            expected: VERSIONS_SCHEMA_VERSION,
        });
    }
    Ok(doc.versions)
}

fn csv_string(rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

/// `project_id,metric,best_version,best_score`
pub fn matches_to_csv(matches: &[VersionMatch]) -> String {
    let mut rows = vec![vec![
        "project_id".into(),
        "metric".into(),
        "best_version".into(),
        "best_score".into(),
    ]];
    rows.extend(matches.iter().map(|m| {
        vec![
            m.project_id.to_string(),
            m.metric.as_str().into(),
            m.best_version.to_string(),
            m.best_score.to_string(),
        ]
    }));
    csv_string(rows)
}

/// One row per project, one column per version, for a single metric.
pub fn score_matrix_csv(matches: &[VersionMatch], metric: Metric, version_count: u32) -> String {
    let mut header = vec!["project_id".to_string()];
    header.extend((1..=version_count).map(|v| format!("v{v}")));
    let mut rows = vec![header];
    for m in matches.iter().filter(|m| m.metric == metric) {
        let by_label: BTreeMap<u32, f64> = m.per_version_scores.iter().copied().collect();
        let mut row = vec![m.project_id.to_string()];
        row.extend((1..=version_count).map(|v| by_label.get(&v).map(|s| s.to_string()).unwrap_or_default()));
        rows.push(row);
    }
    csv_string(rows)
}

/// `metric,version,band,count`
pub fn histogram_to_csv(rows: &[HistogramRow]) -> String {
    let mut out = String::from("metric,version,band,count\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{}", r.metric.as_str(), r.version, r.band, r.count);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::hash_file;
    use chrono::TimeZone;
    use proptest::prelude::*;

    fn t0() -> DateTime<Utc> {
        Utc.with_ymd_and_hms(2009, 8, 1, 0, 0, 0).unwrap()
    }

    fn commit(n: u64) -> CommitHash {
        CommitHash::parse(&format!("{n:040x}")).unwrap()
    }

    fn history(days: &[i64]) -> Vec<CommitRecord> {
        days.iter()
            .enumerate()
            .map(|(i, d)| CommitRecord {
                commit_hash: commit(i as u64 + 1),
                committer_timestamp: t0() + Duration::days(*d),
            })
            .collect()
    }

    fn file(path: &str, body: &[u8]) -> SourceFile {
        SourceFile {
            repo_id: "r".into(),
            rel_path: path.into(),
            language: "C".into(),
            content_hash: hash_file(body),
            byte_size: body.len() as u64,
        }
    }

    struct Memory(BTreeMap<CommitHash, Vec<SourceFile>>);

    impl SnapshotProvider for Memory {
        fn materialize(&self, commit: &CommitHash) -> Result<Vec<SourceFile>, BaselineError> {
            self.0.get(commit).cloned().ok_or_else(|| BaselineError::Materialize {
                commit: commit.clone(),
                message: "missing".into(),
            })
        }
        fn location(&self, commit: &CommitHash) -> String {
            format!("mem:{commit}")
        }
    }

    #[test]
    fn twenty_months_gives_four_versions() {
        // one commit every ten days across ~20 months
        let days: Vec<i64> = (0..=61).map(|k| k * 10).collect();
        let grid = version_grid(&history(&days), t0(), 183).unwrap();
        assert_eq!(grid.len(), 4);
        let offsets: Vec<i64> = grid.iter().map(|(t, _)| (*t - t0()).num_days()).collect();
        assert_eq!(offsets, [0, 183, 366, 549]);
    }

    #[test]
    fn nine_years_gives_eighteen_versions() {
        let days: Vec<i64> = (0..=329).map(|k| k * 10).collect();
        assert_eq!(version_grid(&history(&days), t0(), 183).unwrap().len(), 18);
    }

    #[test]
    fn single_commit_and_empty_history() {
        assert_eq!(version_grid(&history(&[0]), t0(), 183).unwrap().len(), 1);
        assert!(matches!(version_grid(&[], t0(), 183), Err(BaselineError::EmptyHistory)));
        assert!(matches!(
            version_grid(&history(&[0]), t0(), 0),
            Err(BaselineError::BadInterval)
        ));
    }

    #[test]
    fn quiet_periods_collapse() {
        // nothing happens between day 10 and day 700
        let grid = version_grid(&history(&[0, 10, 700]), t0(), 183).unwrap();
        let commits: Vec<_> = grid.iter().map(|(_, c)| c.clone()).collect();
        assert_eq!(commits, [commit(1), commit(2)]);
    }

    #[test]
    fn grid_points_before_first_commit_are_skipped() {
        let grid = version_grid(&history(&[400, 500]), t0(), 183).unwrap();
        assert_eq!((grid[0].0 - t0()).num_days(), 549);
        assert_eq!(grid.len(), 1);
    }

    #[test]
    fn dir_and_hash_are_independent() {
        let original: Vec<SourceFile> = (0..30)
            .map(|i| file(&format!("src/f{i}.cpp"), format!("a{i}").as_bytes()))
            .collect();
        let copy: Vec<SourceFile> = (0..30)
            .map(|i| file(&format!("src/f{i}.cpp"), format!("b{i}").as_bytes()))
            .collect();
        let v = BaselineVersion {
            version_label: 1,
            snapshot_time: t0(),
            commit_hash: commit(1),
            file_hashes: original.iter().map(|f| f.content_hash).collect(),
            file_paths: original.iter().map(|f| f.rel_path.clone()).collect(),
        };
        let refs: Vec<&SourceFile> = copy.iter().collect();
        assert_eq!(score_against(&refs, &v, Metric::Dir), Some(1.0));
        assert_eq!(score_against(&refs, &v, Metric::Hash), Some(0.0));

        let moved: Vec<SourceFile> = (0..30)
            .map(|i| file(&format!("lib/f{i}.cpp"), format!("a{i}").as_bytes()))
            .collect();
        let refs: Vec<&SourceFile> = moved.iter().collect();
        assert_eq!(score_against(&refs, &v, Metric::Dir), Some(0.0));
        assert_eq!(score_against(&refs, &v, Metric::Hash), Some(1.0));
    }

    #[test]
    fn eight_of_ten_paths() {
        let files: Vec<SourceFile> = (0..10).map(|i| file(&format!("f{i}.c"), b"x")).collect();
        let paths: BTreeSet<String> = (0..8).map(|i| format!("f{i}.c")).collect();
        let refs: Vec<&SourceFile> = files.iter().collect();
        assert_eq!(s_dir(&refs, &paths), Some(0.8));
        assert_eq!(s_dir(&[], &paths), None);
    }

    fn versions_with(trees: Vec<Vec<SourceFile>>) -> (Vec<BaselineVersion>, Memory) {
        let days: Vec<i64> = (0..trees.len() as i64).map(|k| k * 183).collect();
        let hist = history(&days);
        let mem = Memory(hist.iter().map(|c| c.commit_hash.clone()).zip(trees).collect());
        (snapshot_baseline(&hist, &mem, t0(), 183).unwrap(), mem)
    }

    #[test]
    fn argmax_prefers_earliest_on_ties() {
        let shared = file("a.c", b"shared");
        let trees = vec![vec![file("z.c", b"z")], vec![shared.clone()], vec![shared.clone()]];
        let (versions, _) = versions_with(trees);
        let m = match_to_versions(&"p".into(), &[&shared], &versions, Metric::Hash).unwrap();
        assert_eq!((m.best_version, m.best_score), (2, 1.0));
        assert_eq!(m.per_version_scores, [(1, 0.0), (2, 1.0), (3, 1.0)]);
    }

    #[test]
    fn outputs_are_well_formed() {
        let f = file("a.c", b"a");
        let (versions, mem) = versions_with(vec![vec![f.clone()], vec![f.clone(), file("b.c", b"b")]]);
        let json = versions_to_json(&versions, &mem);
        let back = versions_from_json(&json).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[1].file_count, 2);
        assert!(back[0].path.starts_with("mem:"));
        let m = match_to_versions(&"p".into(), &[&f], &versions, Metric::Dir).unwrap();
        assert_eq!(
            matches_to_csv(std::slice::from_ref(&m)),
            "project_id,metric,best_version,best_score\np,dir,1,1\n"
        );
        assert_eq!(
            score_matrix_csv(std::slice::from_ref(&m), Metric::Dir, 2),
            "project_id,v1,v2\np,1,1\n"
        );
        let hist = version_histogram(&[m], 2, &[0.5]);
        assert_eq!(
            histogram_to_csv(&hist),
            "metric,version,band,count\ndir,1,0.5,1\ndir,2,0.5,0\n"
        );
    }

    proptest! {
        #[test]
        fn argmax_agrees_with_exhaustive_search(scores in prop::collection::vec(0u8..4, 1..12)) {
            // version v holds hashes 0..scores[v] of a 3-file project
            let project: Vec<SourceFile> = (0..3).map(|i| file(&format!("f{i}.c"), &[i])).collect();
            let trees = scores
                .iter()
                .map(|&n| project.iter().take(n as usize).cloned().chain([file("pad.c", b"pad")]).collect())
                .collect();
            let (versions, _) = versions_with(trees);
            let refs: Vec<&SourceFile> = project.iter().collect();
            let m = match_to_versions(&"p".into(), &refs, &versions, Metric::Hash).unwrap();
            let top = *scores.iter().max().unwrap();
            let first = scores.iter().position(|&s| s == top).unwrap() as u32 + 1;
            prop_assert_eq!(m.best_version, first);
            prop_assert_eq!(m.best_score, f64::from(top) / 3.0);
        }

        #[test]
        fn versions_are_monotone(mut days in prop::collection::vec(0i64..4000, 1..40), interval in 1u32..400, lead in 0i64..300) {
            days.sort();
            let grid = version_grid(&history(&days), t0() + Duration::days(lead) - Duration::days(150), interval).unwrap();
            prop_assert!(!grid.is_empty());
            prop_assert!(grid.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 != w[1].1));
        }
    }
}
