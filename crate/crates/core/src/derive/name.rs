// Copyright 2026 The codelineage Authors
// SPDX-License-Identifier: Apache-2.0

//! Name-prefix derivations: "Bitcoin Planet" derives from "Bitcoin".

use std::collections::{BTreeMap, BTreeSet};

use super::{sort_edges, DerivationEdge, DerivationMethod};
use crate::corpus::{Project, ProjectId};
use crate::normalize::fold_name;

const DEFAULT_STOPLIST: &str = include_str!("../../data/stoplist.txt");

/// Common-word project names that never act as a derivation target.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stoplist {
    folded: BTreeSet<String>,
}

impl Stoplist {
    pub fn builtin() -> Self {
        Self::parse(DEFAULT_STOPLIST)
    }

    /// One name per line; blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Self {
        let folded = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(fold_name)
            .filter(|f| !f.is_empty())
            .collect();
        Stoplist { folded }
    }

    pub fn contains(&self, name: &str) -> bool {
        self.folded.contains(&fold_name(name))
    }
}

/// Emits `A -> B` whenever B's folded name is a proper prefix of A's and B is
/// not stoplisted. Output is sorted by (target, source).
pub fn detect_name_derivations<'a>(
    projects: impl IntoIterator<Item = &'a Project>,
    stoplist: &Stoplist,
) -> Vec<DerivationEdge> {
    let projects: Vec<&Project> = projects.into_iter().collect();
    let mut by_folded: BTreeMap<String, Vec<&Project>> = BTreeMap::new();
    for p in &projects {
        let f = fold_name(&p.name);
        if !f.is_empty() && !stoplist.folded.contains(&f) {
            by_folded.entry(f).or_default().push(p);
        }
    }

    let mut edges = Vec::new();
    for a in &projects {
        let folded = fold_name(&a.name);
        // Proper prefixes only: every char boundary strictly inside the name.
        for (cut, _) in folded.char_indices().skip(1) {
            let Some(origins) = by_folded.get(&folded[..cut]) else {
                continue;
            };
            for b in origins {
                if b.project_id == a.project_id {
                    continue;
                }
                edges.push(DerivationEdge {
                    source: a.project_id.clone(),
                    target: b.project_id.clone(),
                    method: DerivationMethod::Name,
                    weight: None,
                    evidence: vec![a.name.clone(), b.name.clone()],
                });
            }
        }
    }
    sort_edges(&mut edges);
    edges
}

/// Convenience for callers holding bare `(id, name)` pairs.
pub fn name_edges_from_pairs(pairs: &[(ProjectId, String)], stoplist: &Stoplist) -> Vec<DerivationEdge> {
    let projects: Vec<Project> = pairs
        .iter()
        .map(|(id, name)| Project {
            project_id: id.clone(),
            name: name.clone(),
            symbol: String::new(),
            kind: crate::corpus::ProjectKind::Coin,
            category: None,
            repositories: vec![],
            contract_sources: vec![],
        })
        .collect();
    detect_name_derivations(&projects, stoplist)
}
