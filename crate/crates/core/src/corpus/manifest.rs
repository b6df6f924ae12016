// Copyright 2026 The codelineage Authors
// SPDX-License-Identifier: Apache-2.0

//! JSON Lines project manifest and plain-text commit log exports.
//!
//! Manifest lines look like
//!
//! ```text
//! {"id":"btc","name":"Bitcoin","symbol":"BTC","kind":"coin",
//!  "repos":[{"repo_id":"bitcoin/bitcoin","path":"repos/bitcoin","fork_count":3,
//!            "last_update":"2018-05-01T00:00:00Z","commit_log_path":"logs/bitcoin.log"}]}
//! ```
//!
//! and commit logs hold one `<40-hex-hash> <ISO-8601 timestamp>` per line.

use std::collections::BTreeSet;
use std::io;
use std::path::{Path, PathBuf};

use serde_json::{Map, Value};
use thiserror::Error;

use super::{
    parse_timestamp, CommitHash, CommitRecord, ContractOrigin, ContractSource, Project, ProjectId, ProjectKind, RepoId,
    RepositorySnapshot,
};

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("cannot read manifest {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("manifest line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("manifest line {line}: field `{field}`: {message}")]
    BadField {
        line: usize,
        field: String,
        message: String,
    },
    #[error("manifest line {line}: missing required field `{field}`")]
    MissingField { line: usize, field: String },
    #[error("manifest line {line}: duplicate project id {id:?}")]
    DuplicateId { line: usize, id: String },
    #[error("manifest line {line}: duplicate repository id {id:?}")]
    DuplicateRepo { line: usize, id: String },
    #[error("manifest line {line}: {message}")]
    Invalid { line: usize, message: String },
    #[error(transparent)]
    CommitLog(#[from] CommitLogError),
}

#[derive(Debug, Error)]
pub enum CommitLogError {
    #[error("cannot read commit log {path} of repository {repo}: {source}")]
    Io {
        repo: RepoId,
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("commit log of repository {repo}, line {line}: {message}")]
    Malformed { repo: RepoId, line: usize, message: String },
}

/// One parsed manifest line before commit logs are read from disk.
#[derive(Debug, Clone)]
pub struct ManifestRecord {
    pub line: usize,
    pub project: Project,
    /// Commit log location per entry of `project.repositories`.
    pub commit_logs: Vec<Option<PathBuf>>,
}

/// Reads the manifest and every commit log it references. Relative paths are
/// resolved against the manifest's directory.
pub fn load_manifest(path: &Path) -> Result<Vec<Project>, ManifestError> {
    let text = std::fs::read_to_string(path).map_err(|source| ManifestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let base = path.parent().unwrap_or_else(|| Path::new(""));
    let records = parse_manifest_str(&text, base)?;
    let mut projects = Vec::with_capacity(records.len());
    for record in records {
        let mut project = record.project;
        for (repo, log_path) in project.repositories.iter_mut().zip(record.commit_logs) {
            let Some(log_path) = log_path else { continue };
            let text = std::fs::read_to_string(&log_path).map_err(|source| CommitLogError::Io {
                repo: repo.repo_id.clone(),
                path: log_path.clone(),
                source,
            })?;
            let log = parse_commit_log(&repo.repo_id, &text)?;
            // A declared creation time wins over the first commit.
            let declared = repo.created_at;
            *repo = RepositorySnapshot::new(
                repo.repo_id.clone(),
                std::mem::take(&mut repo.name),
                std::mem::take(&mut repo.root_path),
                repo.fork_count,
                repo.last_update,
                log,
            );
            if declared.is_some() {
                repo.created_at = declared;
            }
        }
        projects.push(project);
    }
    Ok(projects)
}

/// Parses manifest text without touching the filesystem.
pub fn parse_manifest_str(text: &str, base_dir: &Path) -> Result<Vec<ManifestRecord>, ManifestError> {
    let mut records = Vec::new();
    let mut ids = BTreeSet::new();
    let mut repo_ids = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let value: Value = serde_json::from_str(raw).map_err(|e| ManifestError::Malformed {
            line,
            message: format!("invalid JSON: {e}"),
        })?;
        let Value::Object(obj) = value else {
            return Err(ManifestError::Malformed {
                line,
                message: "expected a JSON object".into(),
            });
        };
        let record = parse_record(line, &obj, base_dir)?;
        if !ids.insert(record.project.project_id.clone()) {
            return Err(ManifestError::DuplicateId {
                line,
                id: record.project.project_id.to_string(),
            });
        }
        for repo in &record.project.repositories {
            if !repo_ids.insert(repo.repo_id.clone()) {
                return Err(ManifestError::DuplicateRepo {
                    line,
                    id: repo.repo_id.to_string(),
                });
            }
        }
        record
            .project
            .validate()
            .map_err(|message| ManifestError::Invalid { line, message })?;
        records.push(record);
    }
    Ok(records)
}

fn parse_record(line: usize, obj: &Map<String, Value>, base: &Path) -> Result<ManifestRecord, ManifestError> {
    let fields = Fields { line, obj, prefix: "" };
    let id = fields.required_str("id")?;
    if id.is_empty() {
        return Err(fields.bad("id", "must not be empty"));
    }
    let name = fields.required_str("name")?;
    let symbol = fields.optional_str("symbol")?.unwrap_or_default();
    let kind = match fields.optional_str("kind")?.as_deref() {
        None | Some("coin") => ProjectKind::Coin,
        Some("token") => ProjectKind::Token,
        Some(other) => return Err(fields.bad("kind", &format!("expected \"coin\" or \"token\", got {other:?}"))),
    };
    let category = fields.optional_str("category")?;

    let mut repositories = Vec::new();
    let mut commit_logs = Vec::new();
    for (j, item) in fields.optional_array("repos")?.iter().enumerate() {
        let prefix = format!("repos[{j}].");
        let Value::Object(repo) = item else {
            return Err(ManifestError::BadField {
                line,
                field: format!("repos[{j}]"),
                message: "expected an object".into(),
            });
        };
        let rf = Fields {
            line,
            obj: repo,
            prefix: &prefix,
        };
        let repo_id = rf.required_str("repo_id")?;
        if repo_id.is_empty() {
            return Err(rf.bad("repo_id", "must not be empty"));
        }
        let path = rf.required_str("path")?;
        let root_path = base.join(&path);
        let repo_name = match rf.optional_str("name")? {
            Some(n) => n,
            None => default_repo_name(&repo_id, &path),
        };
        let fork_count = match repo.get("fork_count") {
            None | Some(Value::Null) => 0,
            Some(v) => v
                .as_u64()
                .ok_or_else(|| rf.bad("fork_count", "expected a non-negative integer"))?,
        };
        let last_update_raw = rf.required_str("last_update")?;
        let last_update =
            parse_timestamp(&last_update_raw).ok_or_else(|| rf.bad("last_update", "expected an ISO-8601 timestamp"))?;
        let created_at = match rf.optional_str("created_at")? {
            None => None,
            Some(raw) => {
                Some(parse_timestamp(&raw).ok_or_else(|| rf.bad("created_at", "expected an ISO-8601 timestamp"))?)
            }
        };
        let log = rf.optional_str("commit_log_path")?.map(|p| base.join(p));
        let mut snapshot = RepositorySnapshot::new(
            RepoId::new(repo_id),
            repo_name,
            root_path,
            fork_count,
            last_update,
            Vec::new(),
        );
        snapshot.created_at = created_at;
        repositories.push(snapshot);
        commit_logs.push(log);
    }

    let mut contract_sources = Vec::new();
    for (j, item) in fields.optional_array("contracts")?.iter().enumerate() {
        let field = format!("contracts[{j}]");
        let bad = |message: &str| ManifestError::BadField {
            line,
            field: field.clone(),
            message: message.into(),
        };
        let source = match item {
            Value::String(p) => ContractSource {
                path: base.join(p),
                origin: ContractOrigin::Deployed,
            },
            Value::Object(o) => {
                let path = o
                    .get("path")
                    .and_then(Value::as_str)
                    .ok_or_else(|| bad("expected a string `path`"))?;
                let origin = match o.get("origin").and_then(Value::as_str) {
                    None | Some("deployed") => ContractOrigin::Deployed,
                    Some("repository") => ContractOrigin::Repository,
                    Some(_) => return Err(bad("origin must be \"deployed\" or \"repository\"")),
                };
                ContractSource {
                    path: base.join(path),
                    origin,
                }
            }
            _ => return Err(bad("expected a path string or {path, origin} object")),
        };
        contract_sources.push(source);
    }

    Ok(ManifestRecord {
        line,
        project: Project {
            project_id: ProjectId::new(id),
            name,
            symbol,
            kind,
            category,
            repositories,
            contract_sources,
        },
        commit_logs,
    })
}

fn default_repo_name(repo_id: &str, path: &str) -> String {
    let from_id = repo_id.rsplit('/').next().unwrap_or(repo_id);
    if !from_id.is_empty() {
        return from_id.to_owned();
    }
    Path::new(path)
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

struct Fields<'a> {
    line: usize,
    obj: &'a Map<String, Value>,
    prefix: &'a str,
}

impl Fields<'_> {
    fn bad(&self, field: &str, message: &str) -> ManifestError {
        ManifestError::BadField {
            line: self.line,
            field: format!("{}{field}", self.prefix),
            message: message.into(),
        }
    }

    fn required_str(&self, field: &str) -> Result<String, ManifestError> {
        match self.obj.get(field) {
            None | Some(Value::Null) => Err(ManifestError::MissingField {
                line: self.line,
                field: format!("{}{field}", self.prefix),
            }),
            Some(Value::String(s)) => Ok(s.clone()),
            Some(_) => Err(self.bad(field, "expected a string")),
        }
    }

    fn optional_str(&self, field: &str) -> Result<Option<String>, ManifestError> {
        match self.obj.get(field) {
            None | Some(Value::Null) => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(_) => Err(self.bad(field, "expected a string")),
        }
    }

    fn optional_array(&self, field: &str) -> Result<&[Value], ManifestError> {
        match self.obj.get(field) {
            None | Some(Value::Null) => Ok(&[]),
            Some(Value::Array(a)) => Ok(a),
            Some(_) => Err(self.bad(field, "expected an array")),
        }
    }
}

/// Parses a commit log export. Blank lines are ignored; the result is sorted
/// ascending by committer timestamp.
pub fn parse_commit_log(repo: &RepoId, text: &str) -> Result<Vec<CommitRecord>, CommitLogError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let malformed = |message: String| CommitLogError::Malformed {
            repo: repo.clone(),
            line: i + 1,
            message,
        };
        let (hash, ts) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| malformed("expected `<hash> <timestamp>`".into()))?;
        let commit_hash = CommitHash::parse(hash).ok_or_else(|| malformed(format!("invalid commit hash {hash:?}")))?;
        let committer_timestamp =
            parse_timestamp(ts).ok_or_else(|| malformed(format!("invalid timestamp {:?}", ts.trim())))?;
        out.push(CommitRecord {
            commit_hash,
            committer_timestamp,
        });
    }
    out.sort_by_key(|a| a.committer_timestamp);
    Ok(out)
}
