// Copyright 2026 The codelineage Authors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::path::Path;

use thiserror::Error;

const DEFAULT_TABLE: &str = include_str!("../../data/extensions.txt");

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExtensionTableError {
    #[error("line {line}: expected `<extension> <language>`")]
    Malformed { line: usize },
    #[error("line {line}: extension {extension:?} listed twice")]
    Duplicate { line: usize, extension: String },
}

/// Maps lowercase file extensions to language labels.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExtensionTable {
    entries: BTreeMap<String, String>,
}

impl ExtensionTable {
    /// The shipped table.
    pub fn builtin() -> Self {
        Self::parse(DEFAULT_TABLE).expect("shipped extension table is well-formed")
    }

    /// Parses `<extension> <language>` lines. Blank lines and `#` comments are
    /// ignored, a leading dot on the extension is dropped and the extension is
    /// lowercased. Extensions that no file name could end in (inner dots,
    /// separators, control characters) are rejected.
    pub fn parse(text: &str) -> Result<Self, ExtensionTableError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (ext, lang) = line
                .split_once(char::is_whitespace)
                .ok_or(ExtensionTableError::Malformed { line: i + 1 })?;
            let ext = ext.trim_start_matches('.').to_ascii_lowercase();
            let lang = lang.trim();
            let unusable = ext.chars().any(|c| matches!(c, '.' | '/' | '\\') || c.is_control());
            if ext.is_empty() || lang.is_empty() || unusable {
                return Err(ExtensionTableError::Malformed { line: i + 1 });
            }
            if entries.insert(ext.clone(), lang.to_owned()).is_some() {
                return Err(ExtensionTableError::Duplicate {
                    line: i + 1,
                    extension: ext,
                });
            }
        }
        Ok(ExtensionTable { entries })
    }

    pub fn from_map(entries: BTreeMap<String, String>) -> Self {
        let entries = entries.into_iter().map(|(k, v)| (k.to_ascii_lowercase(), v)).collect();
        ExtensionTable { entries }
    }

    pub fn insert(&mut self, extension: &str, language: &str) {
        self.entries.insert(extension.to_ascii_lowercase(), language.to_owned());
    }

    /// Language of a path, judged by its lowercased extension.
    pub fn language_of(&self, path: &Path) -> Option<&str> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        self.entries.get(&ext).map(String::as_str)
    }

    pub fn as_map(&self) -> &BTreeMap<String, String> {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_is_lowercase_and_covers_common_languages() {
        let t = ExtensionTable::builtin();
        assert!(t.as_map().keys().all(|k| k == &k.to_ascii_lowercase()));
        assert_eq!(t.language_of(Path::new("src/main.cpp")), Some("C++"));
        assert_eq!(t.language_of(Path::new("Token.sol")), Some("Solidity"));
        assert_eq!(t.language_of(Path::new("README.MD")), Some("Markdown"));
        assert_eq!(t.language_of(Path::new("logo.png")), None);
        assert_eq!(t.language_of(Path::new("COPYING")), None);
        assert_eq!(t.language_of(Path::new(".gitignore")), None);
    }

    #[test]
    fn parse_normalizes_and_rejects() {
        let t = ExtensionTable::parse("# c\n.CPP C++\n\nh  C Header\n").unwrap();
        assert_eq!(t.as_map().get("cpp").map(String::as_str), Some("C++"));
        assert_eq!(t.as_map().get("h").map(String::as_str), Some("C Header"));
        assert_eq!(
            ExtensionTable::parse("cpp\n"),
            Err(ExtensionTableError::Malformed { line: 1 })
        );
        assert!(matches!(
            ExtensionTable::parse("c C\nC C\n"),
            Err(ExtensionTableError::Duplicate { line: 2, .. })
        ));
        for bad in ["tar.gz Archive\n", "a/b X\n", "x\u{1}y X\n", ". Dot\n"] {
            assert_eq!(
                ExtensionTable::parse(bad),
                Err(ExtensionTableError::Malformed { line: 1 }),
                "{bad:?}"
            );
        }
    }
}
