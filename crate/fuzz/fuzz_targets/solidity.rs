// Copyright 2026 The codelineage Authors
// SPDX-License-Identifier: Apache-2.0

#![no_main]

use libfuzzer_sys::fuzz_target;

use codelineage::corpus::ContractOrigin;
use codelineage::solidity::{mask_strings, profile_contract, strip_comments};

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let stripped = strip_comments(text);
        assert_eq!(stripped.text.matches('\n').count(), text.matches('\n').count());
        assert_eq!(mask_strings(&stripped.text).len(), stripped.text.len());
        let _ = profile_contract("fuzz.sol", ContractOrigin::Deployed, text);
    }
});
