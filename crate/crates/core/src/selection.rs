// Copyright 2026 The codelineage Authors
// SPDX-License-Identifier: Apache-2.0

//! Repository rating and top-fifth selection.
//!
//! Each repository of a project gets an integer score
//! `fork_count - staleness_weeks + relevance_bonus`. Repositories whose names
//! hit the exclusion list are dropped, and the best `max(1, ceil(N / 5))` of
//! the remaining `N` are kept.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::io;

use chrono::{DateTime, Utc};
use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Project, ProjectId, ProjectKind, RepoId, RepositorySnapshot};
use crate::normalize::fold_name;

const DEFAULT_EXCLUSIONS: &str = include_str!("../data/exclusions.txt");

const SECONDS_PER_WEEK: i64 = 7 * 24 * 60 * 60;

#[derive(Debug, Error)]
pub enum SelectionError {
    #[error("line {line}: {message}")]
    ExclusionList { line: usize, message: String },
    #[error("repository {repo} was updated at {last_update}, after the reference time {reference}")]
    FutureUpdate {
        repo: RepoId,
        last_update: DateTime<Utc>,
        reference: DateTime<Utc>,
    },
    #[error("overrides line {line}: {message}")]
    Overrides { line: usize, message: String },
    #[error("selection report line {line}: {message}")]
    Report { line: usize, message: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Name terms and patterns that disqualify a repository, with per-project
/// exceptions.
#[derive(Debug, Clone)]
pub struct ExclusionList {
    literal_terms: Vec<String>,
    patterns: Vec<Regex>,
    exceptions: Vec<(String, String)>,
}

impl ExclusionList {
    pub fn builtin() -> Self {
        Self::parse(DEFAULT_EXCLUSIONS).expect("shipped exclusion list is well-formed")
    }

    pub fn empty() -> Self {
        ExclusionList {
            literal_terms: Vec::new(),
            patterns: Vec::new(),
            exceptions: Vec::new(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, SelectionError> {
        let mut list = Self::empty();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| SelectionError::ExclusionList { line: i + 1, message };
            if let Some(pattern) = line.strip_prefix("re:") {
                let re = Regex::new(pattern.trim()).map_err(|e| err(format!("bad pattern: {e}")))?;
                list.patterns.push(re);
            } else if let Some(rule) = line.strip_prefix("allow:") {
                let (project, repo) = rule
                    .split_once('/')
                    .ok_or_else(|| err("expected allow:<project_id>/<repository name>".into()))?;
                let (project, repo) = (project.trim(), repo.trim());
                if project.is_empty() || repo.is_empty() {
                    return Err(err("empty project or repository in exception".into()));
                }
                list.exceptions
                    .push((project.to_ascii_lowercase(), repo.to_ascii_lowercase()));
            } else {
                list.literal_terms.push(line.to_ascii_lowercase());
            }
        }
        Ok(list)
    }

    pub fn add_term(&mut self, term: &str) {
        self.literal_terms.push(term.to_ascii_lowercase());
    }

    pub fn add_exception(&mut self, project: &str, repo_name: &str) {
        self.exceptions
            .push((project.to_ascii_lowercase(), repo_name.to_ascii_lowercase()));
    }

    /// The term or pattern matching `repo_name`, ignoring exceptions. When
    /// several literal terms match, the longest wins (`"website"` over
    /// `"site"`); patterns are consulted only if no literal term matches.
    pub fn matching_term(&self, repo_name: &str) -> Option<String> {
        let name = repo_name.to_ascii_lowercase();
        let literal = self.literal_terms.iter().filter(|t| name.contains(t.as_str())).fold(
            None::<&String>,
            |best, t| match best {
                Some(b) if b.len() >= t.len() => Some(b),
                _ => Some(t),
            },
        );
        if let Some(t) = literal {
            return Some(t.clone());
        }
        self.patterns
            .iter()
            .find(|re| re.is_match(&name))
            .map(|re| format!("re:{}", re.as_str()))
    }

    /// The exclusion reason for `repo_name` within `project`, or `None` when
    /// the repository stays eligible.
    pub fn is_excluded(&self, project: &ProjectId, repo_name: &str) -> Option<String> {
        let term = self.matching_term(repo_name)?;
        let project = project.as_str().to_ascii_lowercase();
        let name = repo_name.to_ascii_lowercase();
        let allowed = self
            .exceptions
            .iter()
            .any(|(p, r)| *p == project && (r == "*" || *r == name));
        (!allowed).then_some(term)
    }
}

/// Name-relevance bonuses. Only the largest applicable bonus is awarded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelevanceBonus {
    /// Repository name equals the project name (case and punctuation folded).
    pub exact_name: i64,
    /// Repository name contains the project name or `core`.
    pub contains_name_or_core: i64,
    /// Token project whose repository name contains `token` or `contract`.
    pub token_or_contract: i64,
}

impl Default for RelevanceBonus {
    fn default() -> Self {
        RelevanceBonus {
            exact_name: 100,
            contains_name_or_core: 50,
            token_or_contract: 50,
        }
    }
}

impl RelevanceBonus {
    pub fn for_repo(&self, repo_name: &str, project_name: &str, kind: ProjectKind) -> i64 {
        let repo = fold_name(repo_name);
        let project = fold_name(project_name);
        if !project.is_empty() && repo == project {
            return self.exact_name;
        }
        let mut bonus = 0;
        if (!project.is_empty() && repo.contains(&project)) || repo.contains("core") {
            bonus = bonus.max(self.contains_name_or_core);
        }
        if kind == ProjectKind::Token && (repo.contains("token") || repo.contains("contract")) {
            bonus = bonus.max(self.token_or_contract);
        }
        bonus
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepoRating {
    pub repo_id: RepoId,
    pub repo_name: String,
    pub staleness_weeks: u64,
    pub fork_count: u64,
    pub relevance_bonus: i64,
    pub excluded: bool,
    pub excluded_by: Option<String>,
    pub score: i64,
}

/// Whole weeks between `last_update` and `reference`, rounded down.
pub fn staleness_weeks(last_update: DateTime<Utc>, reference: DateTime<Utc>) -> Option<u64> {
    let secs = (reference - last_update).num_seconds();
    (secs >= 0).then_some((secs / SECONDS_PER_WEEK) as u64)
}

/// Rates one repository. The rating is never marked excluded here; see
/// [`rate_project`].
pub fn score_repository(
    repo: &RepositorySnapshot,
    project: &Project,
    reference: DateTime<Utc>,
    bonus: &RelevanceBonus,
) -> Result<RepoRating, SelectionError> {
    let weeks = staleness_weeks(repo.last_update, reference).ok_or(SelectionError::FutureUpdate {
        repo: repo.repo_id.clone(),
        last_update: repo.last_update,
        reference,
    })?;
    let relevance_bonus = bonus.for_repo(&repo.name, &project.name, project.kind);
    let score = repo.fork_count as i64 - weeks as i64 + relevance_bonus;
    Ok(RepoRating {
        repo_id: repo.repo_id.clone(),
        repo_name: repo.name.clone(),
        staleness_weeks: weeks,
        fork_count: repo.fork_count,
        relevance_bonus,
        excluded: false,
        excluded_by: None,
        score,
    })
}

/// Rates every repository of a project and applies the exclusion list.
pub fn rate_project(
    project: &Project,
    reference: DateTime<Utc>,
    bonus: &RelevanceBonus,
    exclusions: &ExclusionList,
) -> Result<Vec<RepoRating>, SelectionError> {
    project
        .repositories
        .iter()
        .map(|repo| {
            let mut rating = score_repository(repo, project, reference, bonus)?;
            rating.excluded_by = exclusions.is_excluded(&project.project_id, &repo.name);
            rating.excluded = rating.excluded_by.is_some();
            Ok(rating)
        })
        .collect()
}

/// Number of repositories kept out of `n` eligible ones.
pub fn selection_size(n: usize) -> usize {
    if n == 0 {
        0
    } else {
        n.div_ceil(5).max(1)
    }
}

fn rank_order(a: &RepoRating, b: &RepoRating) -> Ordering {
    b.score
        .cmp(&a.score)
        .then(b.fork_count.cmp(&a.fork_count))
        .then_with(|| a.repo_name.cmp(&b.repo_name))
        .then_with(|| a.repo_id.cmp(&b.repo_id))
}

/// Picks the top `max(1, ceil(N / 5))` non-excluded repositories. Ties on
/// score go to more forks, then the lexicographically smaller name.
pub fn select_repositories(ratings: &[RepoRating]) -> Vec<RepoId> {
    let mut eligible: Vec<&RepoRating> = ratings.iter().filter(|r| !r.excluded).collect();
    eligible.sort_by(|a, b| rank_order(a, b));
    let k = selection_size(eligible.len());
    eligible.into_iter().take(k).map(|r| r.repo_id.clone()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum OverrideAction {
    Pin,
    Ban,
}

/// Manual per-project adjustments applied after the automatic selection.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SelectionOverrides {
    entries: BTreeMap<ProjectId, BTreeMap<RepoId, OverrideAction>>,
}

impl SelectionOverrides {
    /// Parses `project_id,repo_id,action` CSV where action is `pin` or `ban`.
    pub fn parse(text: &str) -> Result<Self, SelectionError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut out = SelectionOverrides::default();
        for (i, row) in rdr.records().enumerate() {
            let line = i + 2;
            let row = row?;
            if row.len() != 3 {
                return Err(SelectionError::Overrides {
                    line,
                    message: "expected project_id,repo_id,action".into(),
                });
            }
            let action = match &row[2] {
                "pin" => OverrideAction::Pin,
                "ban" => OverrideAction::Ban,
                other => {
                    return Err(SelectionError::Overrides {
                        line,
                        message: format!("unknown action {other:?}"),
                    })
                }
            };
            out.insert(ProjectId::new(&row[0]), RepoId::new(&row[1]), action);
        }
        Ok(out)
    }

    pub fn insert(&mut self, project: ProjectId, repo: RepoId, action: OverrideAction) {
        self.entries.entry(project).or_default().insert(repo, action);
    }

    /// Removes banned repositories and appends pinned ones that belong to the
    /// project.
    pub fn apply(&self, project: &Project, selected: Vec<RepoId>) -> Vec<RepoId> {
        let Some(rules) = self.entries.get(&project.project_id) else {
            return selected;
        };
        let mut out: Vec<RepoId> = selected
            .into_iter()
            .filter(|r| rules.get(r) != Some(&OverrideAction::Ban))
            .collect();
        for repo in &project.repositories {
            if rules.get(&repo.repo_id) == Some(&OverrideAction::Pin) && !out.contains(&repo.repo_id) {
                out.push(repo.repo_id.clone());
            }
        }
        out
    }
}

/// One row of the selection report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectionRow {
    pub project_id: ProjectId,
    pub repo_id: RepoId,
    pub score: i64,
    pub selected: bool,
    pub excluded_by: String,
}

/// Rates and selects repositories for every project. Rows follow project
/// order, then repository rank.
pub fn select_corpus<'a>(
    projects: impl IntoIterator<Item = &'a Project>,
    reference: DateTime<Utc>,
    bonus: &RelevanceBonus,
    exclusions: &ExclusionList,
    overrides: &SelectionOverrides,
) -> Result<Vec<SelectionRow>, SelectionError> {
    let mut rows = Vec::new();
    for project in projects {
        let mut ratings = rate_project(project, reference, bonus, exclusions)?;
        let picked = overrides.apply(project, select_repositories(&ratings));
        let picked: BTreeSet<_> = picked.into_iter().collect();
        ratings.sort_by(rank_order);
        for r in ratings {
            rows.push(SelectionRow {
                project_id: project.project_id.clone(),
                selected: picked.contains(&r.repo_id),
                repo_id: r.repo_id,
                score: r.score,
                excluded_by: r.excluded_by.unwrap_or_default(),
            });
        }
    }
    Ok(rows)
}

pub fn write_selection_csv(rows: &[SelectionRow]) -> Result<String, SelectionError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    if rows.is_empty() {
        w.write_record(["project_id", "repo_id", "score", "selected", "excluded_by"])?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn read_selection_csv(text: &str) -> Result<Vec<SelectionRow>, SelectionError> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["project_id", "repo_id", "score", "selected", "excluded_by"] {
        return Err(SelectionError::Report {
            line: 1,
            message: "unexpected header".into(),
        });
    }
    rdr.deserialize()
        .enumerate()
        .map(|(i, row)| {
            row.map_err(|e| SelectionError::Report {
                line: i + 2,
                message: e.to_string(),
            })
        })
        .collect()
}

/// Selected repositories per project, from a selection report.
pub fn selected_by_project(rows: &[SelectionRow]) -> BTreeMap<ProjectId, Vec<RepoId>> {
    let mut out: BTreeMap<ProjectId, Vec<RepoId>> = BTreeMap::new();
    for row in rows.iter().filter(|r| r.selected) {
        out.entry(row.project_id.clone()).or_default().push(row.repo_id.clone());
    }
    out
}
