// Copyright 2026 The codelineage Authors
// SPDX-License-Identifier: Apache-2.0

#![no_main]

use libfuzzer_sys::fuzz_target;

use codelineage::corpus::{parse_commit_log, RepoId};

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(log) = parse_commit_log(&RepoId::new("fuzz"), text) {
            assert!(log.iter().all(|c| c.commit_hash.as_str().len() == 40));
        }
    }
});
