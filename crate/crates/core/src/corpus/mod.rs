// Copyright 2026 The codelineage Authors
// SPDX-License-Identifier: Apache-2.0

//! Corpus data model: projects, repositories, commits and hashed source files.

mod extensions;
mod files;
mod index;
mod manifest;

use std::fmt;
use std::path::PathBuf;

use chrono::{DateTime, NaiveDate, NaiveDateTime, Utc};
use serde::{Deserialize, Serialize};

pub use extensions::{ExtensionTable, ExtensionTableError};
pub(crate) use files::relative_path as files_relative_path;
pub use files::{classify_source_files, classify_tree, hash_file, hash_reader, ClassifiedFiles, ClassifyError};
pub use index::{build_corpus_index, index_corpus, FileLocation, IndexError, INDEX_SCHEMA_VERSION};
pub use manifest::{
    load_manifest, parse_commit_log, parse_manifest_str, CommitLogError, ManifestError, ManifestRecord,
};

macro_rules! string_id {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(String);

        impl $name {
            pub fn new(id: impl Into<String>) -> Self {
                $name(id.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                $name(s.to_owned())
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                $name(s)
            }
        }
    };
}

string_id!(
    /// Identifier of a project, unique within a corpus.
    ProjectId
);
string_id!(
    /// Identifier of a repository, unique within a corpus.
    RepoId
);

/// SHA-256 digest of a file's raw bytes.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ContentHash([u8; 32]);

impl ContentHash {
    pub fn from_bytes(bytes: [u8; 32]) -> Self {
        ContentHash(bytes)
    }

    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }

    pub fn from_hex(s: &str) -> Option<Self> {
        let mut out = [0u8; 32];
        hex::decode_to_slice(s, &mut out).ok()?;
        Some(ContentHash(out))
    }
}

impl fmt::Debug for ContentHash {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ContentHash({})", self.to_hex())
    }
}

impl fmt::Display for ContentHash {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Serialize for ContentHash {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for ContentHash {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        ContentHash::from_hex(&s).ok_or_else(|| serde::de::Error::custom(format!("invalid content hash {s:?}")))
    }
}

/// A 40-character lowercase hexadecimal commit id.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct CommitHash(String);

impl CommitHash {
    /// Accepts 40 hex digits in either case; the stored form is lowercase.
    pub fn parse(s: &str) -> Option<Self> {
        if s.len() == 40 && s.bytes().all(|b| b.is_ascii_hexdigit()) {
            Some(CommitHash(s.to_ascii_lowercase()))
        } else {
            None
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for CommitHash {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        CommitHash::parse(&s).ok_or_else(|| format!("invalid commit hash {s:?}"))
    }
}

impl From<CommitHash> for String {
    fn from(h: CommitHash) -> String {
        h.0
    }
}

impl fmt::Display for CommitHash {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommitRecord {
    pub commit_hash: CommitHash,
    pub committer_timestamp: DateTime<Utc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProjectKind {
    Coin,
    Token,
}

impl ProjectKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ProjectKind::Coin => "coin",
            ProjectKind::Token => "token",
        }
    }
}

/// Where a contract source was obtained from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ContractOrigin {
    Deployed,
    Repository,
}

impl ContractOrigin {
    pub fn as_str(self) -> &'static str {
        match self {
            ContractOrigin::Deployed => "deployed",
            ContractOrigin::Repository => "repository",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractSource {
    pub path: PathBuf,
    pub origin: ContractOrigin,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepositorySnapshot {
    pub repo_id: RepoId,
    pub name: String,
    pub root_path: PathBuf,
    pub fork_count: u64,
    pub last_update: DateTime<Utc>,
    pub commit_log: Vec<CommitRecord>,
    pub created_at: Option<DateTime<Utc>>,
}

impl RepositorySnapshot {
    /// Builds a snapshot, sorting the commit log by committer time and
    /// deriving `created_at` from its earliest entry.
    pub fn new(
        repo_id: RepoId,
        name: impl Into<String>,
        root_path: impl Into<PathBuf>,
        fork_count: u64,
        last_update: DateTime<Utc>,
        mut commit_log: Vec<CommitRecord>,
    ) -> Self {
        commit_log.sort_by_key(|a| a.committer_timestamp);
        let created_at = commit_log.first().map(|c| c.committer_timestamp);
        RepositorySnapshot {
            repo_id,
            name: name.into(),
            root_path: root_path.into(),
            fork_count,
            last_update,
            commit_log,
            created_at,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Project {
    pub project_id: ProjectId,
    pub name: String,
    pub symbol: String,
    pub kind: ProjectKind,
    pub category: Option<String>,
    pub repositories: Vec<RepositorySnapshot>,
    pub contract_sources: Vec<ContractSource>,
}

impl Project {
    /// Checks the per-project invariants; returns a description of the first
    /// violation.
    pub fn validate(&self) -> Result<(), String> {
        if self.project_id.as_str().is_empty() {
            return Err("project id is empty".into());
        }
        if self.name.trim().is_empty() {
            return Err("name is empty".into());
        }
        if self.kind == ProjectKind::Token && self.repositories.is_empty() && self.contract_sources.is_empty() {
            return Err("token without repositories needs at least one contract source".into());
        }
        let mut seen = std::collections::BTreeSet::new();
        for repo in &self.repositories {
            if !seen.insert(&repo.repo_id) {
                return Err(format!("repository {} listed twice", repo.repo_id));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceFile {
    pub repo_id: RepoId,
    pub rel_path: String,
    pub language: String,
    pub content_hash: ContentHash,
    pub byte_size: u64,
}

/// Read-only view over every project and hashed source file in a corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusIndex {
    pub schema_version: u32,
    pub projects: std::collections::BTreeMap<ProjectId, Project>,
    pub files: std::collections::BTreeMap<RepoId, Vec<SourceFile>>,
    pub hash_to_files: std::collections::BTreeMap<ContentHash, Vec<FileLocation>>,
    pub extension_table: std::collections::BTreeMap<String, String>,
}

impl CorpusIndex {
    pub fn project_of_repo(&self, repo: &RepoId) -> Option<&ProjectId> {
        self.projects
            .values()
            .find(|p| p.repositories.iter().any(|r| &r.repo_id == repo))
            .map(|p| &p.project_id)
    }

    pub fn repo(&self, repo: &RepoId) -> Option<&RepositorySnapshot> {
        self.projects
            .values()
            .flat_map(|p| p.repositories.iter())
            .find(|r| &r.repo_id == repo)
    }

    pub fn files_of(&self, repo: &RepoId) -> &[SourceFile] {
        self.files.get(repo).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Parses the timestamp forms found in exports: RFC 3339 / ISO 8601 with an
/// offset, git's `%ci` form (`2013-09-01 12:00:00 +0200`), a naive
/// `YYYY-MM-DDTHH:MM:SS` taken as UTC, or a bare date at midnight UTC.
pub fn parse_timestamp(s: &str) -> Option<DateTime<Utc>> {
    let s = s.trim();
    if let Ok(t) = DateTime::parse_from_rfc3339(s) {
        return Some(t.with_timezone(&Utc));
    }
    if let Ok(t) = DateTime::parse_from_str(s, "%Y-%m-%d %H:%M:%S %z") {
        return Some(t.with_timezone(&Utc));
    }
    for fmt in ["%Y-%m-%dT%H:%M:%S", "%Y-%m-%d %H:%M:%S"] {
        if let Ok(t) = NaiveDateTime::parse_from_str(s, fmt) {
            return Some(t.and_utc());
        }
    }
    NaiveDate::parse_from_str(s, "%Y-%m-%d")
        .ok()
        .and_then(|d| d.and_hms_opt(0, 0, 0))
        .map(|t| t.and_utc())
}
