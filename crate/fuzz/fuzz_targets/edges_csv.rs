// Copyright 2026 The codelineage Authors
// SPDX-License-Identifier: Apache-2.0

#![no_main]

use libfuzzer_sys::fuzz_target;

use codelineage::derive::{edges_from_csv, edges_to_csv};

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(edges) = edges_from_csv(text) {
            let again = edges_from_csv(&edges_to_csv(&edges)).expect("own output parses");
            assert_eq!(edges.len(), again.len());
        }
    }
});
