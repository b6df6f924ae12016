// Copyright 2026 The codelineage Authors
// SPDX-License-Identifier: Apache-2.0

#![no_main]

use libfuzzer_sys::fuzz_target;

use codelineage::derive::name::Stoplist;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let list = Stoplist::parse(text);
        for line in text.lines().take(8) {
            let _ = list.contains(line);
        }
    }
});
