// Copyright 2026 The codelineage Authors
// SPDX-License-Identifier: Apache-2.0

#![no_main]

use libfuzzer_sys::fuzz_target;

use codelineage::selection::{read_selection_csv, selected_by_project, write_selection_csv};

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(rows) = read_selection_csv(text) {
            let _ = selected_by_project(&rows);
            if let Ok(out) = write_selection_csv(&rows) {
                assert_eq!(read_selection_csv(&out).expect("own output parses"), rows);
            }
        }
    }
});
