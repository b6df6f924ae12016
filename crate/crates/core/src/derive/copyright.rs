// Copyright 2026 The codelineage Authors
// SPDX-License-Identifier: Apache-2.0

//! Copyright derivations.
//!
//! Copyright lines are mined from COPYING/LICENSE files when a repository has
//! any, otherwise from the headers of its source files. Each line is resolved
//! to at most one project by, in order: a project name occurring in the line,
//! an alias (altered project names), or a known contributor. A project derives
//! from every other project its lines resolve to, so lineage is not flattened.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use regex::Regex;
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;
use thiserror::Error;
use walkdir::WalkDir;

use super::{sort_edges, DerivationEdge, DerivationMethod};
use crate::corpus::{ClassifyError, ExtensionTable, Project, ProjectId, RepoId};
use crate::normalize::{fold_name, FoldedText};

const DEFAULT_ALIASES: &str = include_str!("../../data/aliases.csv");
const DEFAULT_AUTHORS: &str = include_str!("../../data/authors.csv");
const DEFAULT_LIBRARIES: &str = include_str!("../../data/libraries.txt");

/// Witness lines kept per edge.
pub const MAX_WITNESSES: usize = 5;

#[derive(Debug, Error)]
pub enum CopyrightError {
    #[error("map line {line}: {message}")]
    Map { line: usize, message: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttributionSource {
    CopyingFile,
    SourceHeader,
}

impl AttributionSource {
    pub fn as_str(self) -> &'static str {
        match self {
            AttributionSource::CopyingFile => "copying_file",
            AttributionSource::SourceHeader => "source_header",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attribution {
    pub repo_id: RepoId,
    pub source: AttributionSource,
    /// The matching line with runs of whitespace collapsed to one space.
    pub raw_line: String,
    pub resolved_project: Option<ProjectId>,
}

/// How many leading lines of each file are scanned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeaderWindows {
    pub copying_lines: usize,
    pub source_lines: usize,
}

impl Default for HeaderWindows {
    fn default() -> Self {
        HeaderWindows {
            copying_lines: 50,
            source_lines: 30,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExtractedAttributions {
    pub attributions: Vec<Attribution>,
    pub skipped: usize,
}

fn copyright_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?i)copyright").expect("valid regex"))
}

/// `COPYING`, `COPYING.*`, `LICENSE` or `LICENSE.*`, case-insensitively.
pub fn is_license_file(file_name: &str) -> bool {
    let lower = file_name.to_ascii_lowercase();
    ["copying", "license"]
        .iter()
        .any(|stem| lower == *stem || lower.strip_prefix(stem).is_some_and(|r| r.starts_with('.')))
}

fn collapse_whitespace(line: &str) -> String {
    line.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Scans a repository tree for copyright lines.
pub fn extract_attributions(
    repo_id: &RepoId,
    root: &Path,
    table: &ExtensionTable,
    windows: HeaderWindows,
) -> Result<ExtractedAttributions, ClassifyError> {
    let meta = std::fs::metadata(root).map_err(|source| ClassifyError::UnreadableRoot {
        path: root.to_path_buf(),
        source,
    })?;
    if !meta.is_dir() {
        return Err(ClassifyError::NotADirectory(root.to_path_buf()));
    }

    let mut out = ExtractedAttributions::default();
    let mut license_files: Vec<(String, PathBuf)> = Vec::new();
    let mut source_files: Vec<(String, PathBuf)> = Vec::new();
    let walker = WalkDir::new(root)
        .follow_links(false)
        .into_iter()
        .filter_entry(|e| !(e.depth() > 0 && e.file_type().is_dir() && e.file_name() == ".git"));
    for entry in walker {
        let entry = match entry {
            Ok(e) => e,
            Err(err) => {
                log::warn!("skipping unreadable entry under {}: {err}", root.display());
                out.skipped += 1;
                continue;
            }
        };
        if !entry.file_type().is_file() {
            continue;
        }
        let rel = crate::corpus::files_relative_path(root, entry.path());
        if is_license_file(&entry.file_name().to_string_lossy()) {
            license_files.push((rel, entry.into_path()));
        } else if table.language_of(entry.path()).is_some() {
            source_files.push((rel, entry.into_path()));
        }
    }

    let (files, source, window) = if license_files.is_empty() {
        (source_files, AttributionSource::SourceHeader, windows.source_lines)
    } else {
        (license_files, AttributionSource::CopyingFile, windows.copying_lines)
    };
    let mut files = files;
    files.sort();

    let mut seen = BTreeSet::new();
    for (_, path) in files {
        let lines = match read_leading_lines(&path, window) {
            Ok(l) => l,
            Err(err) => {
                log::warn!("skipping unreadable file {}: {err}", path.display());
                out.skipped += 1;
                continue;
            }
        };
        for line in lines {
            if !copyright_re().is_match(&line) {
                continue;
            }
            let collapsed = collapse_whitespace(&line);
            if seen.insert(collapsed.clone()) {
                out.attributions.push(Attribution {
                    repo_id: repo_id.clone(),
                    source,
                    raw_line: collapsed,
                    resolved_project: None,
                });
            }
        }
    }
    Ok(out)
}

fn read_leading_lines(path: &Path, n: usize) -> std::io::Result<Vec<String>> {
    let mut reader = BufReader::new(File::open(path)?);
    let mut out = Vec::with_capacity(n);
    let mut buf = Vec::new();
    while out.len() < n {
        buf.clear();
        if reader.read_until(b'\n', &mut buf)? == 0 {
            break;
        }
        out.push(String::from_utf8_lossy(&buf).trim_end_matches(['\n', '\r']).to_owned());
    }
    Ok(out)
}

/// Folded name patterns mapped to project ids, from `pattern,project_id` CSV.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NameMap {
    entries: Vec<(String, ProjectId)>,
}

impl NameMap {
    pub fn parse(text: &str) -> Result<Self, CopyrightError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(text.as_bytes());
        let header = rdr.headers()?.clone();
        if header.iter().ne(["pattern", "project_id"]) {
            return Err(CopyrightError::Map {
                line: 1,
                message: "expected header `pattern,project_id`".into(),
            });
        }
        let mut map = NameMap::default();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let line = i + 2;
            if rec.len() != 2 || rec[0].is_empty() || rec[1].is_empty() {
                return Err(CopyrightError::Map {
                    line,
                    message: "expected two non-empty columns".into(),
                });
            }
            map.insert(&rec[0], ProjectId::new(&rec[1]));
        }
        Ok(map)
    }

    pub fn builtin_aliases() -> Self {
        Self::parse(DEFAULT_ALIASES).expect("shipped alias map is well-formed")
    }

    pub fn builtin_authors() -> Self {
        Self::parse(DEFAULT_AUTHORS).expect("shipped author map is well-formed")
    }

    pub fn insert(&mut self, pattern: &str, project: ProjectId) {
        let folded = fold_name(pattern);
        if !folded.is_empty() {
            self.entries.push((folded, project));
        }
        // Longest pattern first, ties by project id for determinism.
        self.entries
            .sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| (&a.0, &a.1).cmp(&(&b.0, &b.1))));
    }

    fn lookup(&self, text: &FoldedText, known: &BTreeSet<&ProjectId>) -> Option<ProjectId> {
        self.entries
            .iter()
            .find(|(pat, id)| known.contains(id) && text.contains_words(pat))
            .map(|(_, id)| id.clone())
    }
}

/// Library authors whose mentions are ignored during resolution.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LibraryExclusions {
    folded: Vec<String>,
}

impl LibraryExclusions {
    pub fn builtin() -> Self {
        Self::parse(DEFAULT_LIBRARIES)
    }

    pub fn parse(text: &str) -> Self {
        let mut folded: Vec<String> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(fold_name)
            .filter(|f| !f.is_empty())
            .collect();
        folded.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        folded.dedup();
        LibraryExclusions { folded }
    }
}

/// Resolves copyright lines to projects.
#[derive(Debug, Clone)]
pub struct Resolver {
    names: Vec<(String, ProjectId)>,
    aliases: NameMap,
    authors: NameMap,
    libraries: LibraryExclusions,
}

impl Resolver {
    pub fn new<'a>(
        projects: impl IntoIterator<Item = &'a Project>,
        aliases: NameMap,
        authors: NameMap,
        libraries: LibraryExclusions,
    ) -> Self {
        let mut names: Vec<(String, ProjectId)> = projects
            .into_iter()
            .map(|p| (fold_name(&p.name), p.project_id.clone()))
            .filter(|(f, _)| !f.is_empty())
            .collect();
        names.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| (&a.0, &a.1).cmp(&(&b.0, &b.1))));
        Resolver {
            names,
            aliases,
            authors,
            libraries,
        }
    }

    /// First firing rule wins: project name (longest first), alias, author.
    pub fn resolve(&self, line: &str) -> Option<ProjectId> {
        let mut text = FoldedText::new(line);
        for lib in &self.libraries.folded {
            text.mask(lib);
        }
        if let Some((_, id)) = self.names.iter().find(|(name, _)| text.contains_words(name)) {
            return Some(id.clone());
        }
        let known: BTreeSet<&ProjectId> = self.names.iter().map(|(_, id)| id).collect();
        self.aliases
            .lookup(&text, &known)
            .or_else(|| self.authors.lookup(&text, &known))
    }
}

/// Extracts and resolves attributions for every listed repository, in
/// parallel per repository. Output order follows the input order.
pub fn mine_corpus(
    repos: &[(ProjectId, RepoId, PathBuf)],
    table: &ExtensionTable,
    windows: HeaderWindows,
    resolver: &Resolver,
) -> Result<(BTreeMap<ProjectId, Vec<Attribution>>, usize), ClassifyError> {
    let mined: Vec<_> = repos
        .par_iter()
        .map(|(project, repo, root)| {
            extract_attributions(repo, root, table, windows).map(|mut ex| {
                for a in &mut ex.attributions {
                    a.resolved_project = resolver.resolve(&a.raw_line);
                }
                (project.clone(), ex)
            })
        })
        .collect::<Result<_, _>>()?;
    let mut out: BTreeMap<ProjectId, Vec<Attribution>> = BTreeMap::new();
    let mut skipped = 0;
    for (project, ex) in mined {
        skipped += ex.skipped;
        out.entry(project).or_default().extend(ex.attributions);
    }
    Ok((out, skipped))
}

/// `A -> B` whenever some attribution of A resolves to B != A. Evidence holds
/// up to [`MAX_WITNESSES`] distinct witness lines in lexicographic order; the
/// weight is the number of distinct witness lines.
pub fn detect_copyright_derivations(attributions: &BTreeMap<ProjectId, Vec<Attribution>>) -> Vec<DerivationEdge> {
    let mut witnesses: BTreeMap<(&ProjectId, &ProjectId), BTreeSet<&str>> = BTreeMap::new();
    for (source, list) in attributions {
        for a in list {
            match &a.resolved_project {
                Some(target) if target != source => {
                    witnesses.entry((source, target)).or_default().insert(&a.raw_line);
                }
                _ => {}
            }
        }
    }
    let mut edges: Vec<_> = witnesses
        .into_iter()
        .map(|((source, target), lines)| DerivationEdge {
            source: source.clone(),
            target: target.clone(),
            method: DerivationMethod::Copyright,
            weight: Some(lines.len() as f64),
            evidence: lines.iter().take(MAX_WITNESSES).map(|s| s.to_string()).collect(),
        })
        .collect();
    sort_edges(&mut edges);
    edges
}

/// Number of distinct derivatives per target, most derived first.
pub fn in_degrees(edges: &[DerivationEdge]) -> Vec<(ProjectId, usize)> {
    let mut deg: BTreeMap<&ProjectId, BTreeSet<&ProjectId>> = BTreeMap::new();
    for e in edges {
        deg.entry(&e.target).or_default().insert(&e.source);
    }
    let mut out: Vec<_> = deg.into_iter().map(|(p, s)| (p.clone(), s.len())).collect();
    out.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    out
}
