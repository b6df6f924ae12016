// Copyright 2026 The codelineage Authors
// SPDX-License-Identifier: Apache-2.0

use std::fs::File;
use std::io::{self, Read};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use thiserror::Error;
use walkdir::WalkDir;

use super::{ContentHash, ExtensionTable, RepoId, RepositorySnapshot, SourceFile};

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("repository root {path} is not a readable directory")]
    UnreadableRoot {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("repository root {0} is not a directory")]
    NotADirectory(PathBuf),
}

/// Source files of one tree plus the count of entries that could not be read.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClassifiedFiles {
    pub files: Vec<SourceFile>,
    pub skipped: usize,
}

/// SHA-256 over the exact bytes given; no newline or encoding normalization.
pub fn hash_file(bytes: &[u8]) -> ContentHash {
    ContentHash::from_bytes(Sha256::digest(bytes).into())
}

pub fn hash_reader<R: Read>(mut reader: R) -> io::Result<(ContentHash, u64)> {
    let mut hasher = Sha256::new();
    let mut buf = [0u8; 64 * 1024];
    let mut total = 0u64;
    loop {
        let n = reader.read(&mut buf)?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
        total += n as u64;
    }
    Ok((ContentHash::from_bytes(hasher.finalize().into()), total))
}

/// Enumerates and hashes the source files of a repository working tree.
pub fn classify_source_files(
    repo: &RepositorySnapshot,
    table: &ExtensionTable,
) -> Result<ClassifiedFiles, ClassifyError> {
    classify_tree(&repo.repo_id, &repo.root_path, table)
}

/// Walks `root` without following symlinks, skipping `.git` directories, and
/// returns every regular file whose extension is in `table`, sorted by
/// relative path.
pub fn classify_tree(repo_id: &RepoId, root: &Path, table: &ExtensionTable) -> Result<ClassifiedFiles, ClassifyError> {
    let meta = std::fs::metadata(root).map_err(|source| ClassifyError::UnreadableRoot {
        path: root.to_path_buf(),
        source,
    })?;
    if !meta.is_dir() {
        return Err(ClassifyError::NotADirectory(root.to_path_buf()));
    }
    std::fs::read_dir(root).map_err(|source| ClassifyError::UnreadableRoot {
        path: root.to_path_buf(),
        source,
    })?;

    let mut out = ClassifiedFiles::default();
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
        let Some(language) = table.language_of(entry.path()) else {
            continue;
        };
        let hashed = File::open(entry.path()).and_then(hash_reader);
        let (content_hash, byte_size) = match hashed {
            Ok(h) => h,
            Err(err) => {
                log::warn!("skipping unreadable file {}: {err}", entry.path().display());
                out.skipped += 1;
                continue;
            }
        };
        out.files.push(SourceFile {
            repo_id: repo_id.clone(),
            rel_path: relative_path(root, entry.path()),
            language: language.to_owned(),
            content_hash,
            byte_size,
        });
    }
    out.files.sort_by(|a, b| a.rel_path.cmp(&b.rel_path));
    Ok(out)
}

pub(crate) fn relative_path(root: &Path, path: &Path) -> String {
    let rel = path.strip_prefix(root).unwrap_or(path);
    rel.components()
        .map(|c| c.as_os_str().to_string_lossy())
        .collect::<Vec<_>>()
        .join("/")
}
