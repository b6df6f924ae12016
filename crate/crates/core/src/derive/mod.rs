// Copyright 2026 The codelineage Authors
// SPDX-License-Identifier: Apache-2.0

//! Derivation detectors and the unified edge schema they share.
//!
//! An edge `source -> target` claims that `source` derives from `target`.

pub mod commit;
pub mod copyright;
pub mod name;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::ProjectId;

pub const EDGES_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DerivationMethod {
    Name,
    Commit,
    Copyright,
    Filehash,
}

impl DerivationMethod {
    pub const ALL: [DerivationMethod; 4] = [
        DerivationMethod::Name,
        DerivationMethod::Commit,
        DerivationMethod::Copyright,
        DerivationMethod::Filehash,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DerivationMethod::Name => "name",
            DerivationMethod::Commit => "commit",
            DerivationMethod::Copyright => "copyright",
            DerivationMethod::Filehash => "filehash",
        }
    }
}

impl fmt::Display for DerivationMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DerivationMethod {
    type Err = EdgeFormatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DerivationMethod::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| EdgeFormatError::Field {
                line: 0,
                message: format!("unknown method {s:?}"),
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivationEdge {
    pub source: ProjectId,
    pub target: ProjectId,
    pub method: DerivationMethod,
    pub weight: Option<f64>,
    pub evidence: Vec<String>,
}

#[derive(Debug, Error)]
pub enum EdgeFormatError {
    #[error("edge document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("edge document schema version {found} is not supported (expected {expected})")]
    SchemaVersion { found: u32, expected: u32 },
    #[error("edge table line {line}: {message}")]
    Field { line: usize, message: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("edge {source_id} -> {target} is a self-loop")]
    SelfLoop { source_id: ProjectId, target: ProjectId },
}

#[derive(Serialize, Deserialize)]
struct EdgeDocument {
    schema_version: u32,
    edges: Vec<DerivationEdge>,
}

pub fn edges_to_json(edges: &[DerivationEdge]) -> String {
    let doc = EdgeDocument {
        schema_version: EDGES_SCHEMA_VERSION,
        edges: edges.to_vec(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("edges serialize");
    s.push('\n');
    s
}

pub fn edges_from_json(text: &str) -> Result<Vec<DerivationEdge>, EdgeFormatError> {
    let doc: EdgeDocument = serde_json::from_str(text)?;
    if doc.schema_version != EDGES_SCHEMA_VERSION {
        return Err(EdgeFormatError::SchemaVersion {
            found: doc.schema_version,
            expected: EDGES_SCHEMA_VERSION,
        });
    }
    check_edges(&doc.edges)?;
    Ok(doc.edges)
}

const CSV_HEADER: [&str; 5] = ["source", "target", "method", "weight", "evidence"];

/// CSV form of the edge table. The evidence column holds a JSON array.
pub fn edges_to_csv(edges: &[DerivationEdge]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for e in edges {
        let weight = e.weight.map(|x| x.to_string()).unwrap_or_default();
        let evidence = serde_json::to_string(&e.evidence).expect("strings serialize");
        w.write_record([
            e.source.as_str(),
            e.target.as_str(),
            e.method.as_str(),
            &weight,
            &evidence,
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

pub fn edges_from_csv(text: &str) -> Result<Vec<DerivationEdge>, EdgeFormatError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    if rdr.headers()?.iter().ne(CSV_HEADER) {
        return Err(EdgeFormatError::Field {
            line: 1,
            message: "unexpected header".into(),
        });
    }
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec?;
        let field = |message: String| EdgeFormatError::Field { line, message };
        if rec.len() != 5 {
            return Err(field(format!("expected 5 columns, found {}", rec.len())));
        }
        let method = rec[2]
            .parse::<DerivationMethod>()
            .map_err(|_| field(format!("unknown method {:?}", &rec[2])))?;
        let weight = match &rec[3] {
            "" => None,
            w => Some(
                w.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| field(format!("bad weight {w:?}")))?,
            ),
        };
        let evidence: Vec<String> = serde_json::from_str(&rec[4]).map_err(|e| field(format!("bad evidence: {e}")))?;
        out.push(DerivationEdge {
            source: ProjectId::new(&rec[0]),
            target: ProjectId::new(&rec[1]),
            method,
            weight,
            evidence,
        });
    }
    check_edges(&out)?;
    Ok(out)
}

fn check_edges(edges: &[DerivationEdge]) -> Result<(), EdgeFormatError> {
    match edges.iter().find(|e| e.source == e.target) {
        Some(e) => Err(EdgeFormatError::SelfLoop {
            source_id: e.source.clone(),
            target: e.target.clone(),
        }),
        None => Ok(()),
    }
}

/// Canonical edge order: by target, then source, then method.
pub fn sort_edges(edges: &mut [DerivationEdge]) {
    edges.sort_by(|a, b| (&a.target, &a.source, a.method).cmp(&(&b.target, &b.source, b.method)));
}
