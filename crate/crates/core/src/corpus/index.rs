// Copyright 2026 The codelineage Authors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{
    classify_source_files, ClassifyError, CorpusIndex, ExtensionTable, Project, ProjectId, RepoId, SourceFile,
};

/// Bumped whenever the serialized index layout changes.
pub const INDEX_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FileLocation {
    pub repo_id: RepoId,
    pub rel_path: String,
}

#[derive(Debug, Error)]
pub enum IndexError {
    #[error("project {project} references repository {repo} which has no file listing")]
    MissingRepo { project: ProjectId, repo: RepoId },
    #[error("file listing for repository {0} does not belong to any project")]
    UnknownRepo(RepoId),
    #[error("project id {0} appears twice")]
    DuplicateProject(ProjectId),
    #[error("repository {repo}: {source}")]
    Classify {
        repo: RepoId,
        #[source]
        source: ClassifyError,
    },
    #[error("index schema version {found} is not supported (expected {expected})")]
    SchemaVersion { found: u32, expected: u32 },
    #[error("malformed index document: {0}")]
    Json(#[from] serde_json::Error),
}

/// Aggregates per-repository file lists into an index.
pub fn build_corpus_index(
    projects: Vec<Project>,
    mut files: BTreeMap<RepoId, Vec<SourceFile>>,
    table: &ExtensionTable,
) -> Result<CorpusIndex, IndexError> {
    let mut by_id = BTreeMap::new();
    let mut kept_files = BTreeMap::new();
    for project in projects {
        for repo in &project.repositories {
            let mut list = files.remove(&repo.repo_id).ok_or_else(|| IndexError::MissingRepo {
                project: project.project_id.clone(),
                repo: repo.repo_id.clone(),
            })?;
            list.sort_by(|a, b| a.rel_path.cmp(&b.rel_path));
            kept_files.insert(repo.repo_id.clone(), list);
        }
        let id = project.project_id.clone();
        if by_id.insert(id.clone(), project).is_some() {
            return Err(IndexError::DuplicateProject(id));
        }
    }
    if let Some(repo) = files.into_keys().next() {
        return Err(IndexError::UnknownRepo(repo));
    }

    let mut hash_to_files: BTreeMap<_, Vec<FileLocation>> = BTreeMap::new();
    for (repo, list) in &kept_files {
        for f in list {
            hash_to_files.entry(f.content_hash).or_default().push(FileLocation {
                repo_id: repo.clone(),
                rel_path: f.rel_path.clone(),
            });
        }
    }
    for locations in hash_to_files.values_mut() {
        locations.sort();
    }

    Ok(CorpusIndex {
        schema_version: INDEX_SCHEMA_VERSION,
        projects: by_id,
        files: kept_files,
        hash_to_files,
        extension_table: table.as_map().clone(),
    })
}

/// Classifies every repository (in parallel on the current rayon pool) and
/// builds the index. Returns the number of unreadable entries skipped.
pub fn index_corpus(projects: Vec<Project>, table: &ExtensionTable) -> Result<(CorpusIndex, usize), IndexError> {
    let repos: Vec<_> = projects.iter().flat_map(|p| p.repositories.iter()).collect();
    let classified: Vec<_> = repos
        .par_iter()
        .map(|repo| {
            classify_source_files(repo, table)
                .map(|c| (repo.repo_id.clone(), c))
                .map_err(|source| IndexError::Classify {
                    repo: repo.repo_id.clone(),
                    source,
                })
        })
        .collect::<Result<_, _>>()?;
    let mut skipped = 0;
    let files = classified
        .into_iter()
        .map(|(id, c)| {
            skipped += c.skipped;
            (id, c.files)
        })
        .collect();
    Ok((build_corpus_index(projects, files, table)?, skipped))
}

impl CorpusIndex {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("index serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, IndexError> {
        #[derive(Deserialize)]
        struct Header {
            schema_version: u32,
        }
        let header: Header = serde_json::from_str(text)?;
        if header.schema_version != INDEX_SCHEMA_VERSION {
            return Err(IndexError::SchemaVersion {
                found: header.schema_version,
                expected: INDEX_SCHEMA_VERSION,
            });
        }
        Ok(serde_json::from_str(text)?)
    }

    /// Checks the structural invariants: every file is listed exactly once in
    /// the inverted map, and extension keys are lowercase.
    pub fn check_invariants(&self) -> Result<(), String> {
        let mut expected: BTreeMap<_, Vec<FileLocation>> = BTreeMap::new();
        for (repo, list) in &self.files {
            for f in list {
                if &f.repo_id != repo {
                    return Err(format!("file {} filed under {repo}", f.rel_path));
                }
                expected.entry(f.content_hash).or_default().push(FileLocation {
                    repo_id: repo.clone(),
                    rel_path: f.rel_path.clone(),
                });
            }
        }
        for v in expected.values_mut() {
            v.sort();
        }
        if expected != self.hash_to_files {
            return Err("inverted hash map disagrees with file lists".into());
        }
        if let Some(k) = self.extension_table.keys().find(|k| **k != k.to_ascii_lowercase()) {
            return Err(format!("extension {k:?} is not lowercase"));
        }
        Ok(())
    }
}
