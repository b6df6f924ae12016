// Copyright 2026 The codelineage Authors
// SPDX-License-Identifier: Apache-2.0

//! Per-contract features of Solidity sources and popularity distributions
//! over a contract corpus.

mod features;
mod strip;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::corpus::ContractOrigin;

pub use features::{
    declared_contracts, detect_templates, extract_contract_graph, extract_pragma_versions, fingerprint_safemath,
    graph_from_declared, safemath_span, ContractGraph, ContractGraphError, Fingerprint, Template,
};
pub use strip::{mask_strings, strip_comments, Stripped};

pub const PROFILES_SCHEMA_VERSION: u32 = 1;
pub const NONE_VALUE: &str = "none";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractProfile {
    pub contract_file_id: String,
    pub origin: ContractOrigin,
    pub declared_contracts: BTreeMap<String, Vec<String>>,
    pub terminal_contracts: Vec<String>,
    /// Terminal contract -> transitive ancestors.
    pub types: BTreeMap<String, BTreeSet<String>>,
    /// Every declared contract -> transitive ancestors, intermediates included.
    pub closures: BTreeMap<String, BTreeSet<String>>,
    pub pragma_versions: Vec<String>,
    pub safemath_fingerprint: Option<String>,
    pub template_flags: BTreeSet<Template>,
    pub warnings: Vec<String>,
}

impl ContractProfile {
    /// Union of the ancestor types of all terminal contracts.
    pub fn type_inventory(&self) -> BTreeSet<&str> {
        self.types.values().flatten().map(String::as_str).collect()
    }
}

/// Runs every extractor over one contract file.
pub fn profile_contract(contract_file_id: &str, origin: ContractOrigin, source: &str) -> ContractProfile {
    let stripped = strip_comments(source);
    let text = stripped.text.as_str();
    let mut warnings = Vec::new();
    if stripped.unterminated_comment {
        warnings.push("unterminated block comment".to_string());
    }
    let graph = match extract_contract_graph(text) {
        Ok(g) => g,
        Err(e) => {
            warnings.push(e.to_string());
            ContractGraph {
                declared: declared_contracts(text),
                ..ContractGraph::default()
            }
        }
    };
    let safemath_fingerprint = match fingerprint_safemath(text) {
        Fingerprint::Digest(d) => Some(d),
        Fingerprint::Absent => None,
        Fingerprint::Unbalanced => {
            warnings.push("SafeMath block has unbalanced braces".to_string());
            None
        }
    };
    for w in &warnings {
        log::warn!("{contract_file_id}: {w}");
    }
    ContractProfile {
        contract_file_id: contract_file_id.to_string(),
        origin,
        types: graph.types(),
        declared_contracts: graph.declared,
        terminal_contracts: graph.terminals,
        closures: graph.closures,
        pragma_versions: extract_pragma_versions(text),
        safemath_fingerprint,
        template_flags: detect_templates(text),
        warnings,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Feature {
    Types,
    SolidityVersion,
    SafemathVersion,
}

impl Feature {
    pub const ALL: [Feature; 3] = [Feature::Types, Feature::SolidityVersion, Feature::SafemathVersion];

    pub fn as_str(self) -> &'static str {
        match self {
            Feature::Types => "types",
            Feature::SolidityVersion => "solidity_version",
            Feature::SafemathVersion => "safemath_version",
        }
    }

    /// Values a profile contributes. Types are multi-valued and contribute
    /// nothing when absent; the single-valued features report
    /// [`NONE_VALUE`] when missing.
    fn values(self, p: &ContractProfile) -> Vec<String> {
        match self {
            Feature::Types => p.type_inventory().into_iter().map(str::to_string).collect(),
            Feature::SolidityVersion => {
                vec![p
                    .pragma_versions
                    .first()
                    .cloned()
                    .unwrap_or_else(|| NONE_VALUE.to_string())]
            }
            Feature::SafemathVersion => {
                vec![p.safemath_fingerprint.clone().unwrap_or_else(|| NONE_VALUE.to_string())]
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PopularityCdf {
    pub feature: Feature,
    pub origin: Option<ContractOrigin>,
    /// Most popular first, ties in lexicographic order.
    pub ranked_counts: Vec<(String, usize)>,
    /// Running share of all counted occurrences, in percent.
    pub cumulative_pct: Vec<f64>,
    /// Contracts passing the origin filter.
    pub population: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiversityStats {
    /// Distinct values other than [`NONE_VALUE`].
    pub distinct_values: usize,
    /// Of those, values seen in exactly one contract.
    pub singleton_values: usize,
}

impl PopularityCdf {
    pub fn diversity(&self) -> DiversityStats {
        let real = self.ranked_counts.iter().filter(|(v, _)| v != NONE_VALUE);
        DiversityStats {
            distinct_values: real.clone().count(),
            singleton_values: real.filter(|(_, c)| *c == 1).count(),
        }
    }
}

/// Ranks feature values over the profiles matching `origin` (all when
/// `None`). Returns `None` when no profile matches.
pub fn aggregate_cdf(
    profiles: &[ContractProfile],
    feature: Feature,
    origin: Option<ContractOrigin>,
) -> Option<PopularityCdf> {
    let selected: Vec<&ContractProfile> = profiles
        .iter()
        .filter(|p| origin.map_or(true, |o| p.origin == o))
        .collect();
    if selected.is_empty() {
        return None;
    }
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for p in &selected {
        for v in feature.values(p) {
            *counts.entry(v).or_default() += 1;
        }
    }
    let mut ranked_counts: Vec<(String, usize)> = counts.into_iter().collect();
    ranked_counts.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    let total: usize = ranked_counts.iter().map(|(_, c)| c).sum();
    let mut running = 0usize;
    let cumulative_pct = ranked_counts
        .iter()
        .map(|(_, c)| {
            running += c;
            running as f64 * 100.0 / total as f64
        })
        .collect();
    Some(PopularityCdf {
        feature,
        origin,
        ranked_counts,
        cumulative_pct,
        population: selected.len(),
    })
}

fn origin_label(origin: Option<ContractOrigin>) -> &'static str {
    origin.map_or("all", ContractOrigin::as_str)
}

/// `feature,origin,rank,value,count,cumulative_pct`
pub fn cdfs_to_csv(cdfs: &[PopularityCdf]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["feature", "origin", "rank", "value", "count", "cumulative_pct"])
        .expect("in-memory write");
    for cdf in cdfs {
        for (i, ((value, count), pct)) in cdf.ranked_counts.iter().zip(&cdf.cumulative_pct).enumerate() {
            w.write_record([
                cdf.feature.as_str(),
                origin_label(cdf.origin),
                &(i + 1).to_string(),
                value,
                &count.to_string(),
                &format!("{pct:.4}"),
            ])
            .expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

/// `feature,origin,population,distinct_values,singleton_values`
pub fn diversity_to_csv(cdfs: &[PopularityCdf]) -> String {
    let mut out = String::from("feature,origin,population,distinct_values,singleton_values\n");
    for cdf in cdfs {
        let d = cdf.diversity();
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            cdf.feature.as_str(),
            origin_label(cdf.origin),
            cdf.population,
            d.distinct_values,
            d.singleton_values
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TemplateCount {
    pub template: Template,
    pub origin: ContractOrigin,
    pub count: usize,
    /// Share of contracts of that origin, in percent.
    pub pct: f64,
}

/// Template usage per origin. Origins with no contracts are left out.
pub fn template_counts(profiles: &[ContractProfile]) -> Vec<TemplateCount> {
    let origins: BTreeSet<ContractOrigin> = profiles.iter().map(|p| p.origin).collect();
    let mut out = Vec::new();
    for template in Template::ALL {
        for &origin in &origins {
            let pool: Vec<_> = profiles.iter().filter(|p| p.origin == origin).collect();
            let count = pool.iter().filter(|p| p.template_flags.contains(&template)).count();
            out.push(TemplateCount {
                template,
                origin,
                count,
                pct: count as f64 * 100.0 / pool.len() as f64,
            });
        }
    }
    out
}

/// `template,origin,count,pct`
pub fn template_counts_to_csv(rows: &[TemplateCount]) -> String {
    let mut out = String::from("template,origin,count,pct\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{:.2}",
            r.template.as_str(),
            r.origin.as_str(),
            r.count,
            r.pct
        );
    }
    out
}

#[derive(Serialize)]
struct ProfilesDocument<'a> {
    schema_version: u32,
    profiles: &'a [ContractProfile],
}

pub fn profiles_to_json(profiles: &[ContractProfile]) -> String {
    let doc = ProfilesDocument {
        schema_version: PROFILES_SCHEMA_VERSION,
        profiles,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("profiles serialize");
    s.push('\n');
    s
}
