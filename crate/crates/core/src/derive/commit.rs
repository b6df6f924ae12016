// Copyright 2026 The codelineage Authors
// SPDX-License-Identifier: Apache-2.0

//! Git-fork derivations from shared commit hashes.
//!
//! Every commit is credited to the oldest repository containing it (earliest
//! first commit, ties by repository id). All other repositories holding that
//! commit are forks of it, and the relation is lifted to projects. This
//! flattens chains: a fork of a fork is credited to the root whenever the
//! root still holds the shared commits.

use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, Utc};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{sort_edges, DerivationEdge, DerivationMethod};
use crate::corpus::{CommitHash, ProjectId, RepoId, RepositorySnapshot};

pub const AMBIGUOUS_ORIGIN: &str = "ambiguous-origin";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepoAge {
    pub repo_id: RepoId,
    pub created_at: DateTime<Utc>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommitIndex {
    /// Repositories containing each commit, oldest first (ties by id).
    pub commit_to_repos: BTreeMap<CommitHash, Vec<RepoAge>>,
    pub repo_to_project: BTreeMap<RepoId, ProjectId>,
}

/// Maps every commit hash to the repositories whose logs contain it.
pub fn index_commits<'a>(repos: impl IntoIterator<Item = (&'a ProjectId, &'a RepositorySnapshot)>) -> CommitIndex {
    let repos: Vec<_> = repos.into_iter().collect();
    let per_repo: Vec<(RepoAge, BTreeSet<&CommitHash>)> = repos
        .par_iter()
        .filter_map(|(_, repo)| {
            let created_at = repo.created_at?;
            let commits = repo.commit_log.iter().map(|c| &c.commit_hash).collect();
            Some((
                RepoAge {
                    repo_id: repo.repo_id.clone(),
                    created_at,
                },
                commits,
            ))
        })
        .collect();

    let mut index = CommitIndex {
        repo_to_project: repos.iter().map(|(p, r)| (r.repo_id.clone(), (*p).clone())).collect(),
        ..Default::default()
    };
    for (age, commits) in per_repo {
        for c in commits {
            index.commit_to_repos.entry(c.clone()).or_default().push(age.clone());
        }
    }
    for list in index.commit_to_repos.values_mut() {
        list.sort_by(|a, b| (a.created_at, &a.repo_id).cmp(&(b.created_at, &b.repo_id)));
    }
    index
}

/// Project-level fork edges. The weight is the number of shared commits that
/// witness the edge; the evidence holds the smallest witnessing commit hash,
/// followed by [`AMBIGUOUS_ORIGIN`] when some witness had tied origins.
pub fn detect_fork_derivations(index: &CommitIndex) -> Vec<DerivationEdge> {
    struct Acc<'a> {
        witness: &'a CommitHash,
        count: u64,
        ambiguous: bool,
    }
    let mut acc: BTreeMap<(&ProjectId, &ProjectId), Acc> = BTreeMap::new();
    for (commit, holders) in &index.commit_to_repos {
        let [origin, rest @ ..] = holders.as_slice() else {
            continue;
        };
        if rest.is_empty() {
            continue;
        }
        let ambiguous = rest[0].created_at == origin.created_at;
        let Some(target) = index.repo_to_project.get(&origin.repo_id) else {
            continue;
        };
        let mut sources = BTreeSet::new();
        for holder in rest {
            match index.repo_to_project.get(&holder.repo_id) {
                Some(p) if p != target => {
                    sources.insert(p);
                }
                _ => {}
            }
        }
        for source in sources {
            let e = acc.entry((source, target)).or_insert(Acc {
                witness: commit,
                count: 0,
                ambiguous: false,
            });
            e.count += 1;
            e.ambiguous |= ambiguous;
        }
    }

    let mut edges: Vec<_> = acc
        .into_iter()
        .map(|((source, target), a)| {
            let mut evidence = vec![a.witness.to_string()];
            if a.ambiguous {
                evidence.push(AMBIGUOUS_ORIGIN.to_owned());
            }
            DerivationEdge {
                source: source.clone(),
                target: target.clone(),
                method: DerivationMethod::Commit,
                weight: Some(a.count as f64),
                evidence,
            }
        })
        .collect();
    sort_edges(&mut edges);
    edges
}
