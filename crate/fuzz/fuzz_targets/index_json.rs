// Copyright 2026 The codelineage Authors
// SPDX-License-Identifier: Apache-2.0

#![no_main]

use libfuzzer_sys::fuzz_target;

use codelineage::corpus::CorpusIndex;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(index) = CorpusIndex::from_json(text) {
            let _ = index.check_invariants();
        }
    }
});
