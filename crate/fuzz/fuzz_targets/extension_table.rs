// Copyright 2026 The codelineage Authors
// SPDX-License-Identifier: Apache-2.0

#![no_main]

use libfuzzer_sys::fuzz_target;

use std::path::Path;

use codelineage::corpus::ExtensionTable;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(table) = ExtensionTable::parse(text) {
            for ext in table.as_map().keys() {
                assert!(table.language_of(Path::new(&format!("a.{ext}"))).is_some());
            }
        }
    }
});
