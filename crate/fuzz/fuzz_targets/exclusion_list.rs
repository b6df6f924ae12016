// Copyright 2026 The codelineage Authors
// SPDX-License-Identifier: Apache-2.0

#![no_main]

use libfuzzer_sys::fuzz_target;

use codelineage::corpus::ProjectId;
use codelineage::selection::ExclusionList;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(list) = ExclusionList::parse(text) {
            for name in text.lines().take(8) {
                let _ = list.is_excluded(&ProjectId::new("p"), name);
            }
        }
    }
});
