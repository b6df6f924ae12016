// Copyright 2026 The codelineage Authors
// SPDX-License-Identifier: Apache-2.0

//! Corpus-scale provenance analysis for software projects.
//!
//! The crate is organized as a set of pipeline stages that communicate through
//! versioned on-disk artifacts:
//!
//! * [`corpus`] loads the project manifest, classifies and hashes source files
//!   and builds the immutable [`corpus::CorpusIndex`].
//! * [`selection`] rates repositories and keeps the most relevant fifth.
//! * [`derive`] holds the name, commit and copyright detectors and the edge
//!   schema shared by all derivation methods.
//! * [`similarity`] computes file-hash similarity and the thresholded graph,
//!   which doubles as the fourth derivation method.
//! * [`baseline`] matches projects against dated snapshots of a reference
//!   codebase.
//! * [`solidity`] extracts structural features from token contracts.
//! * [`pipeline`] wires the stages together for the command-line tool.

pub mod baseline;
pub mod corpus;
pub mod derive;
pub mod normalize;
pub mod pipeline;
pub mod selection;
pub mod similarity;
pub mod solidity;

pub use corpus::{
    CommitHash, CommitRecord, ContentHash, CorpusIndex, Project, ProjectId, ProjectKind, RepoId, RepositorySnapshot,
    SourceFile,
};
pub use derive::{DerivationEdge, DerivationMethod};
