// Copyright 2026 The codelineage Authors
// SPDX-License-Identifier: Apache-2.0

//! File-hash similarity between projects and the thresholded graph built
//! from it.
//!
//! `S_hash(C1, C2)` is the fraction of source files across C1's repositories
//! whose content hash occurs anywhere in C2's repositories. It is asymmetric,
//! counts duplicate files in C1 once per occurrence, and is undefined when
//! either side has no source files.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{ContentHash, CorpusIndex, ProjectId, RepoId, SourceFile};
use crate::derive::{DerivationEdge, DerivationMethod};

pub const GRAPH_SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_THRESHOLD: f64 = 0.7;

/// Which repositories count for each project.
pub type RepoScope = BTreeMap<ProjectId, Vec<RepoId>>;

/// Every repository of every project.
pub fn scope_all(index: &CorpusIndex) -> RepoScope {
    index
        .projects
        .values()
        .map(|p| {
            (
                p.project_id.clone(),
                p.repositories.iter().map(|r| r.repo_id.clone()).collect(),
            )
        })
        .collect()
}

/// Restricts `selected` to repositories the index knows about; projects absent
/// from `selected` get no repositories.
pub fn scope_selected(index: &CorpusIndex, selected: &BTreeMap<ProjectId, Vec<RepoId>>) -> RepoScope {
    index
        .projects
        .values()
        .map(|p| {
            let picked = selected.get(&p.project_id);
            let repos = p
                .repositories
                .iter()
                .map(|r| r.repo_id.clone())
                .filter(|r| picked.is_some_and(|s| s.contains(r)))
                .collect();
            (p.project_id.clone(), repos)
        })
        .collect()
}

/// Source files of each project within a scope.
pub fn project_files<'a>(index: &'a CorpusIndex, scope: &RepoScope) -> BTreeMap<ProjectId, Vec<&'a SourceFile>> {
    scope
        .iter()
        .map(|(p, repos)| {
            let files = repos.iter().flat_map(|r| index.files_of(r)).collect();
            (p.clone(), files)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityScore {
    pub source: ProjectId,
    pub target: ProjectId,
    pub score: f64,
    pub matched_files: usize,
    pub total_files: usize,
}

/// `S_hash(source, target)`, or `None` when either project has no source
/// files in scope.
pub fn s_hash_project(
    source: &ProjectId,
    target: &ProjectId,
    index: &CorpusIndex,
    scope: &RepoScope,
) -> Option<SimilarityScore> {
    let files_of = |p: &ProjectId| -> Vec<&SourceFile> {
        scope
            .get(p)
            .into_iter()
            .flatten()
            .flat_map(|r| index.files_of(r))
            .collect()
    };
    let src = files_of(source);
    let dst: HashSet<ContentHash> = files_of(target).iter().map(|f| f.content_hash).collect();
    if src.is_empty() || dst.is_empty() {
        return None;
    }
    let matched = src.iter().filter(|f| dst.contains(&f.content_hash)).count();
    Some(SimilarityScore {
        source: source.clone(),
        target: target.clone(),
        score: matched as f64 / src.len() as f64,
        matched_files: matched,
        total_files: src.len(),
    })
}

/// Scores for every ordered pair of distinct projects sharing at least one
/// content hash. Pairs sharing nothing score 0 and are skipped. Sorted by
/// (source, target).
pub fn pairwise_scores(index: &CorpusIndex, scope: &RepoScope) -> Vec<SimilarityScore> {
    let files = project_files(index, scope);
    let mut holders: HashMap<ContentHash, BTreeSet<&ProjectId>> = HashMap::new();
    for (p, list) in &files {
        for f in list {
            holders.entry(f.content_hash).or_default().insert(p);
        }
    }
    let sources: Vec<_> = files.iter().filter(|(_, l)| !l.is_empty()).collect();
    sources
        .par_iter()
        .flat_map_iter(|(source, list)| {
            let mut matched: BTreeMap<&ProjectId, usize> = BTreeMap::new();
            for f in list.iter() {
                for target in &holders[&f.content_hash] {
                    if target != source {
                        *matched.entry(target).or_default() += 1;
                    }
                }
            }
            let total = list.len();
            matched
                .into_iter()
                .map(|(target, m)| SimilarityScore {
                    source: (*source).clone(),
                    target: target.clone(),
                    score: m as f64 / total as f64,
                    matched_files: m,
                    total_files: total,
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphEdge {
    pub source: ProjectId,
    pub target: ProjectId,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityGraph {
    pub threshold: f64,
    /// Every project in scope, isolated or not.
    pub nodes: Vec<ProjectId>,
    /// Edges with score strictly above the threshold, sorted by (source, target).
    pub edges: Vec<GraphEdge>,
    /// Weakly connected components, largest first, ties by smallest member.
    pub components: Vec<Vec<ProjectId>>,
}

/// Builds the thresholded graph from the pruned pairwise scores.
pub fn build_similarity_graph(index: &CorpusIndex, scope: &RepoScope, threshold: f64) -> SimilarityGraph {
    graph_from_scores(
        scope.keys().cloned().collect(),
        &pairwise_scores(index, scope),
        threshold,
    )
}

pub fn graph_from_scores(nodes: Vec<ProjectId>, scores: &[SimilarityScore], threshold: f64) -> SimilarityGraph {
    let mut edges: Vec<GraphEdge> = scores
        .iter()
        .filter(|s| s.score > threshold)
        .map(|s| GraphEdge {
            source: s.source.clone(),
            target: s.target.clone(),
            score: s.score,
        })
        .collect();
    edges.sort_by(|a, b| (&a.source, &a.target).cmp(&(&b.source, &b.target)));
    let components = connected_components(&nodes, &edges);
    SimilarityGraph {
        threshold,
        nodes,
        edges,
        components,
    }
}

fn connected_components(nodes: &[ProjectId], edges: &[GraphEdge]) -> Vec<Vec<ProjectId>> {
    let pos: BTreeMap<&ProjectId, usize> = nodes.iter().enumerate().map(|(i, n)| (n, i)).collect();
    let mut parent: Vec<usize> = (0..nodes.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for e in edges {
        let (Some(&a), Some(&b)) = (pos.get(&e.source), pos.get(&e.target)) else {
            continue;
        };
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut groups: BTreeMap<usize, Vec<ProjectId>> = BTreeMap::new();
    for (i, n) in nodes.iter().enumerate() {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(n.clone());
    }
    let mut comps: Vec<Vec<ProjectId>> = groups
        .into_values()
        .map(|mut g| {
            g.sort();
            g
        })
        .collect();
    comps.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a[0].cmp(&b[0])));
    comps
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeDegree {
    pub project_id: ProjectId,
    pub in_degree: usize,
    pub out_degree: usize,
}

impl NodeDegree {
    pub fn degree(&self) -> usize {
        self.in_degree + self.out_degree
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentStats {
    /// 1-based rank by size.
    pub rank: usize,
    pub nodes: Vec<ProjectId>,
    pub edge_count: usize,
    pub degrees: Vec<NodeDegree>,
    /// Mean score over the component's edges.
    pub mean_score: f64,
}

impl ComponentStats {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphSummary {
    pub node_count: usize,
    pub connected_node_count: usize,
    pub isolated_node_count: usize,
    pub edge_count: usize,
    pub component_count: usize,
}

/// Per-component statistics for every component with at least one edge,
/// largest first.
pub fn component_stats(graph: &SimilarityGraph) -> Vec<ComponentStats> {
    let mut degree: BTreeMap<&ProjectId, (usize, usize)> = BTreeMap::new();
    for e in &graph.edges {
        degree.entry(&e.source).or_default().1 += 1;
        degree.entry(&e.target).or_default().0 += 1;
    }
    graph
        .components
        .iter()
        .filter(|c| c.len() > 1)
        .enumerate()
        .map(|(i, comp)| {
            let members: BTreeSet<&ProjectId> = comp.iter().collect();
            let inside: Vec<&GraphEdge> = graph.edges.iter().filter(|e| members.contains(&e.source)).collect();
            let mean_score = inside.iter().map(|e| e.score).sum::<f64>() / inside.len() as f64;
            ComponentStats {
                rank: i + 1,
                nodes: comp.clone(),
                edge_count: inside.len(),
                degrees: comp
                    .iter()
                    .map(|p| {
                        let (i, o) = degree.get(p).copied().unwrap_or_default();
                        NodeDegree {
                            project_id: p.clone(),
                            in_degree: i,
                            out_degree: o,
                        }
                    })
                    .collect(),
                mean_score,
            }
        })
        .collect()
}

pub fn graph_summary(graph: &SimilarityGraph) -> GraphSummary {
    let isolated = graph.components.iter().filter(|c| c.len() == 1).count();
    GraphSummary {
        node_count: graph.nodes.len(),
        connected_node_count: graph.nodes.len() - isolated,
        isolated_node_count: isolated,
        edge_count: graph.edges.len(),
        component_count: graph.components.len() - isolated,
    }
}

/// Graph edges in the unified derivation-edge schema.
pub fn filehash_edges(graph: &SimilarityGraph, scores: &[SimilarityScore]) -> Vec<DerivationEdge> {
    let counts: BTreeMap<(&ProjectId, &ProjectId), (usize, usize)> = scores
        .iter()
        .map(|s| ((&s.source, &s.target), (s.matched_files, s.total_files)))
        .collect();
    let mut edges: Vec<_> = graph
        .edges
        .iter()
        .map(|e| {
            let evidence = counts
                .get(&(&e.source, &e.target))
                .map(|(m, t)| vec![format!("{m}/{t} files identical")])
                .unwrap_or_default();
            DerivationEdge {
                source: e.source.clone(),
                target: e.target.clone(),
                method: DerivationMethod::Filehash,
                weight: Some(e.score),
                evidence,
            }
        })
        .collect();
    crate::derive::sort_edges(&mut edges);
    edges
}

#[derive(Serialize)]
struct JsonNode<'a> {
    id: &'a ProjectId,
    name: &'a str,
    category: Option<&'a str>,
}

#[derive(Serialize)]
struct JsonGraph<'a> {
    schema_version: u32,
    threshold: f64,
    nodes: Vec<JsonNode<'a>>,
    edges: &'a [GraphEdge],
    components: Vec<&'a Vec<ProjectId>>,
}

/// JSON form: isolated nodes and singleton components are omitted.
pub fn graph_to_json(graph: &SimilarityGraph, index: &CorpusIndex) -> String {
    let connected: BTreeSet<&ProjectId> = graph.edges.iter().flat_map(|e| [&e.source, &e.target]).collect();
    let nodes = connected
        .into_iter()
        .map(|id| {
            let p = index.projects.get(id);
            JsonNode {
                id,
                name: p.map_or(id.as_str(), |p| p.name.as_str()),
                category: p.and_then(|p| p.category.as_deref()),
            }
        })
        .collect();
    let doc = JsonGraph {
        schema_version: GRAPH_SCHEMA_VERSION,
        threshold: graph.threshold,
        nodes,
        edges: &graph.edges,
        components: graph.components.iter().filter(|c| c.len() > 1).collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("graph serializes");
    s.push('\n');
    s
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn graph_to_dot(graph: &SimilarityGraph, index: &CorpusIndex) -> String {
    let mut out = String::from("digraph similarity {\n");
    let connected: BTreeSet<&ProjectId> = graph.edges.iter().flat_map(|e| [&e.source, &e.target]).collect();
    for id in connected {
        let label = index.projects.get(id).map_or(id.as_str(), |p| p.name.as_str());
        let _ = writeln!(
            out,
            "  \"{}\" [label=\"{}\"];",
            dot_escape(id.as_str()),
            dot_escape(label)
        );
    }
    for e in &graph.edges {
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\" [label=\"{:.3}\"];",
            dot_escape(e.source.as_str()),
            dot_escape(e.target.as_str()),
            e.score
        );
    }
    out.push_str("}\n");
    out
}

/// How a file-presence query matches file names (the last path segment).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FileQuery {
    NameEquals(String),
    NameContains(String),
}

impl FileQuery {
    fn matches(&self, rel_path: &str) -> bool {
        let name = rel_path.rsplit('/').next().unwrap_or(rel_path);
        match self {
            FileQuery::NameEquals(n) => name == n,
            FileQuery::NameContains(n) => name.contains(n.as_str()),
        }
    }
}

/// Projects among `projects` holding at least one matching source file.
pub fn projects_with_file(
    index: &CorpusIndex,
    scope: &RepoScope,
    projects: &[ProjectId],
    query: &FileQuery,
) -> Vec<ProjectId> {
    projects
        .iter()
        .filter(|p| {
            scope
                .get(*p)
                .into_iter()
                .flatten()
                .flat_map(|r| index.files_of(r))
                .any(|f| query.matches(&f.rel_path))
        })
        .cloned()
        .collect()
}
