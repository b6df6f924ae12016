// Copyright 2026 The codelineage Authors
// SPDX-License-Identifier: Apache-2.0

//! ASCII-only name folding shared by the name, selection and copyright stages.
//!
//! Folding lowercases ASCII letters and drops ASCII whitespace and punctuation.
//! Non-ASCII characters pass through untouched; corpus names are ASCII in
//! practice and no Unicode case folding is attempted.

/// Folds a name for comparison: `"Ethereum Gold"` becomes `"ethereumgold"`.
pub fn fold_name(name: &str) -> String {
    name.chars()
        .filter(|c| !(c.is_ascii_whitespace() || c.is_ascii_punctuation()))
        .map(|c| c.to_ascii_lowercase())
        .collect()
}

/// A line folded like [`fold_name`] that remembers where each original word
/// started and ended inside the folded string.
///
/// Used to find names inside free text without matching in the middle of a
/// word (`"ion"` must not match `"Foundation"`).
#[derive(Debug, Clone)]
pub struct FoldedText {
    folded: String,
    starts: Vec<usize>,
    ends: Vec<usize>,
}

impl FoldedText {
    pub fn new(text: &str) -> Self {
        let mut folded = String::with_capacity(text.len());
        let mut starts = Vec::new();
        let mut ends = Vec::new();
        let mut in_word = false;
        for c in text.chars() {
            if c.is_ascii_whitespace() || c.is_ascii_punctuation() {
                if in_word {
                    ends.push(folded.len());
                    in_word = false;
                }
                continue;
            }
            if !in_word {
                starts.push(folded.len());
                in_word = true;
            }
            folded.push(c.to_ascii_lowercase());
        }
        if in_word {
            ends.push(folded.len());
        }
        FoldedText { folded, starts, ends }
    }

    pub fn as_str(&self) -> &str {
        &self.folded
    }

    /// Returns true when `needle` (already folded) occurs in the text starting
    /// at a word start and ending at a word end.
    pub fn contains_words(&self, needle: &str) -> bool {
        self.find_words(needle).is_some()
    }

    /// Byte range of the first word-aligned occurrence of `needle`.
    pub fn find_words(&self, needle: &str) -> Option<(usize, usize)> {
        if needle.is_empty() {
            return None;
        }
        let mut from = 0;
        while let Some(pos) = self.folded[from..].find(needle) {
            let start = from + pos;
            let end = start + needle.len();
            if self.starts.binary_search(&start).is_ok() && self.ends.binary_search(&end).is_ok() {
                return Some((start, end));
            }
            from = start + self.folded[start..].chars().next().map_or(1, char::len_utf8);
        }
        None
    }

    /// Removes every word-aligned occurrence of `needle`, keeping word
    /// boundaries of the remaining text intact.
    pub fn mask(&mut self, needle: &str) {
        while let Some((start, end)) = self.find_words(needle) {
            self.folded.replace_range(start..end, "");
            let width = end - start;
            // find_words guarantees both lookups succeed.
            let first = self.starts.binary_search(&start).unwrap_or_default();
            let last = self.ends.binary_search(&end).unwrap_or_default();
            self.starts.drain(first..=last);
            self.ends.drain(first..=last);
            for s in &mut self.starts[first..] {
                *s -= width;
            }
            for e in &mut self.ends[first..] {
                *e -= width;
            }
        }
    }
}
