// Copyright 2026 The codelineage Authors
// SPDX-License-Identifier: Apache-2.0

#![no_main]

use libfuzzer_sys::fuzz_target;

use std::path::Path;

use codelineage::corpus::parse_manifest_str;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(records) = parse_manifest_str(text, Path::new("/corpus")) {
            for r in records {
                assert!(!r.project.project_id.as_str().is_empty());
                assert_eq!(r.commit_logs.len(), r.project.repositories.len());
            }
        }
    }
});
