// Copyright 2026 The codelineage Authors
// SPDX-License-Identifier: Apache-2.0

//! Line-shape feature extraction over comment-stripped Solidity text.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::strip::mask_strings;

fn regex(cell: &'static OnceLock<Regex>, pattern: &str) -> &'static Regex {
    cell.get_or_init(|| Regex::new(pattern).expect("valid pattern"))
}

/// Version tokens of every `pragma solidity` line, in order. Range operators
/// are dropped and only the first bound of a range is kept.
pub fn extract_pragma_versions(text: &str) -> Vec<String> {
    static VERSION: OnceLock<Regex> = OnceLock::new();
    let version = regex(&VERSION, r"[0-9]+(?:\.(?:[0-9]+|[xX*]))*");
    text.lines()
        .filter_map(|line| {
            let rest = line.trim_start().strip_prefix("pragma")?;
            let rest = rest.trim_start().strip_prefix("solidity")?;
            let clause = rest.split(';').next().unwrap_or(rest);
            version.find(clause).map(|m| m.as_str().to_string())
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContractGraphError {
    #[error("cyclic inheritance: {}", .0.join(" -> "))]
    Cycle(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ContractGraph {
    /// Declared contract -> direct parents in declaration order.
    pub declared: BTreeMap<String, Vec<String>>,
    /// Declared contracts not used as a parent by another declaration.
    pub terminals: Vec<String>,
    /// Declared contract -> every ancestor reachable through parents.
    pub closures: BTreeMap<String, BTreeSet<String>>,
}

impl ContractGraph {
    /// Ancestor sets of the terminal contracts only.
    pub fn types(&self) -> BTreeMap<String, BTreeSet<String>> {
        self.terminals
            .iter()
            .map(|t| (t.clone(), self.closures.get(t).cloned().unwrap_or_default()))
            .collect()
    }
}

/// Splits an `is` clause on top-level commas, dropping constructor arguments.
fn split_parents(clause: &str) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    for c in clause.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(std::mem::take(&mut current));
                continue;
            }
            _ if depth == 0 => current.push(c),
            _ => {}
        }
    }
    parts.push(current);
    parts
        .into_iter()
        .map(|p| p.split_whitespace().collect::<String>())
        .filter(|p| !p.is_empty())
        .collect()
}

/// Direct-parent map of every `contract`, `abstract contract` and `interface`
/// declaration. Declarations may span lines up to the opening brace.
pub fn declared_contracts(text: &str) -> BTreeMap<String, Vec<String>> {
    static DECL: OnceLock<Regex> = OnceLock::new();
    let decl = regex(
        &DECL,
        r"\b(?:contract|interface)\s+([A-Za-z_$][A-Za-z0-9_$]*)\s*(?:\bis\b([^{;]*))?\{",
    );
    let masked = mask_strings(text);
    let mut declared: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for cap in decl.captures_iter(&masked) {
        let parents = cap.get(2).map(|m| split_parents(m.as_str())).unwrap_or_default();
        let entry = declared.entry(cap[1].to_string()).or_default();
        for p in parents {
            if !entry.contains(&p) {
                entry.push(p);
            }
        }
    }
    declared
}

/// Builds the inheritance graph with transitive closures. Parents that are
/// not declared in the text are kept as opaque names.
pub fn extract_contract_graph(text: &str) -> Result<ContractGraph, ContractGraphError> {
    graph_from_declared(declared_contracts(text))
}

pub fn graph_from_declared(declared: BTreeMap<String, Vec<String>>) -> Result<ContractGraph, ContractGraphError> {
    if let Some(cycle) = find_cycle(&declared) {
        return Err(ContractGraphError::Cycle(cycle));
    }
    let used: BTreeSet<&String> = declared.values().flatten().collect();
    let terminals = declared.keys().filter(|k| !used.contains(k)).cloned().collect();
    let closures = declared
        .keys()
        .map(|name| {
            let mut seen = BTreeSet::new();
            let mut stack: Vec<&String> = declared[name].iter().collect();
            while let Some(p) = stack.pop() {
                if seen.insert(p.clone()) {
                    stack.extend(declared.get(p).into_iter().flatten());
                }
            }
            (name.clone(), seen)
        })
        .collect();
    Ok(ContractGraph {
        declared,
        terminals,
        closures,
    })
}

fn find_cycle(declared: &BTreeMap<String, Vec<String>>) -> Option<Vec<String>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Open,
        Done,
    }
    let mut marks: BTreeMap<&str, Mark> = BTreeMap::new();
    for root in declared.keys() {
        if marks.contains_key(root.as_str()) {
            continue;
        }
        // (node, index of next parent to visit)
        let mut path: Vec<(&str, usize)> = vec![(root, 0)];
        marks.insert(root, Mark::Open);
        while let Some((node, next)) = path.last_mut() {
            let parents = declared.get(*node).map(Vec::as_slice).unwrap_or(&[]);
            match parents.get(*next) {
                None => {
                    marks.insert(node, Mark::Done);
                    path.pop();
                }
                Some(p) => {
                    *next += 1;
                    match marks.get(p.as_str()) {
                        Some(Mark::Open) => {
                            let start = path.iter().position(|(n, _)| *n == p).unwrap_or(0);
                            let mut cycle: Vec<String> = path[start..].iter().map(|(n, _)| n.to_string()).collect();
                            cycle.push(p.clone());
                            return Some(cycle);
                        }
                        Some(Mark::Done) => {}
                        None => {
                            marks.insert(p, Mark::Open);
                            path.push((p, 0));
                        }
                    }
                }
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fingerprint {
    Absent,
    /// SHA-256 hex digest of the block, declaration through closing brace.
    Digest(String),
    /// A SafeMath declaration whose braces never balance.
    Unbalanced,
}

impl Fingerprint {
    pub fn digest(&self) -> Option<&str> {
        match self {
            Fingerprint::Digest(d) => Some(d),
            _ => None,
        }
    }
}

/// Byte range of the first `contract SafeMath {` or `library SafeMath {`
/// block, or `Err(())` if its braces never balance.
pub fn safemath_span(text: &str) -> Option<Result<(usize, usize), ()>> {
    static DECL: OnceLock<Regex> = OnceLock::new();
    let decl = regex(&DECL, r"\b(?:contract|library)\s+SafeMath\s*\{");
    let masked = mask_strings(text);
    let m = decl.find(&masked)?;
    let mut depth = 0usize;
    for (i, b) in masked.bytes().enumerate().skip(m.end() - 1) {
        match b {
            b'{' => depth += 1,
            b'}' => {
                depth -= 1;
                if depth == 0 {
                    return Some(Ok((m.start(), i + 1)));
                }
            }
            _ => {}
        }
    }
    Some(Err(()))
}

pub fn fingerprint_safemath(text: &str) -> Fingerprint {
    match safemath_span(text) {
        None => Fingerprint::Absent,
        Some(Err(())) => Fingerprint::Unbalanced,
        Some(Ok((start, end))) => Fingerprint::Digest(hex::encode(Sha256::digest(&text.as_bytes()[start..end]))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Template {
    Firstblood,
    UpgradeableGolem,
    Openzeppelin,
    Safemath,
}

impl Template {
    pub const ALL: [Template; 4] = [
        Template::Firstblood,
        Template::UpgradeableGolem,
        Template::Openzeppelin,
        Template::Safemath,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Template::Firstblood => "firstblood",
            Template::UpgradeableGolem => "upgradeable_golem",
            Template::Openzeppelin => "openzeppelin",
            Template::Safemath => "safemath",
        }
    }
}

/// Keyword flags. Import paths count as mentions, so strings are not masked.
pub fn detect_templates(text: &str) -> BTreeSet<Template> {
    static PATTERNS: OnceLock<Vec<(Template, Regex)>> = OnceLock::new();
    let patterns = PATTERNS.get_or_init(|| {
        [
            (Template::Firstblood, r"\bStandardToken\b"),
            (Template::UpgradeableGolem, r"\bUpgradeableToken\b"),
            (Template::Openzeppelin, r"(?i)\b(?:open)?zeppelin\b"),
            (Template::Safemath, r"\bSafeMath\b"),
        ]
        .into_iter()
        .map(|(t, p)| (t, Regex::new(p).expect("valid pattern")))
        .collect()
    });
    patterns
        .iter()
        .filter(|(_, re)| re.is_match(text))
        .map(|(t, _)| *t)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(xs: &[&str]) -> BTreeSet<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn pragmas() {
        assert_eq!(extract_pragma_versions("pragma solidity ^0.4.18;"), ["0.4.18"]);
        assert_eq!(extract_pragma_versions("pragma solidity >=0.4.21 <0.6.0;"), ["0.4.21"]);
        assert_eq!(
            extract_pragma_versions("  pragma solidity 0.4.11;\npragma solidity ~0.4.x;"),
            ["0.4.11", "0.4.x"]
        );
        assert!(extract_pragma_versions("contract A {}").is_empty());
        assert!(extract_pragma_versions("pragma experimental ABIEncoderV2;").is_empty());
    }

    #[test]
    fn mintable_ownable() {
        let g = extract_contract_graph("contract Mintable is Ownable {}\ncontract X is Mintable {}").unwrap();
        assert_eq!(g.terminals, ["X"]);
        assert_eq!(g.types()["X"], set(&["Mintable", "Ownable"]));
    }

    #[test]
    fn lone_contract_and_diamond() {
        let g = extract_contract_graph("contract T { uint x; }").unwrap();
        assert_eq!(g.terminals, ["T"]);
        assert!(g.types()["T"].is_empty());

        let g =
            extract_contract_graph("contract A{} contract B is A{} contract C is A{} contract D is B, C{}").unwrap();
        assert_eq!(g.terminals, ["D"]);
        assert_eq!(g.types()["D"], set(&["A", "B", "C"]));
        assert_eq!(g.closures["B"], set(&["A"]));
    }

    #[test]
    fn declaration_shapes() {
        let src = "abstract contract Base {}\ninterface IERC20 {}\nlibrary SafeMath {}\n\
                   contract Token is\n    Base(1, f(2, 3)),\n    IERC20\n{\n  string s = \"contract Fake is Evil {\";\n}";
        let d = declared_contracts(src);
        assert_eq!(d.keys().collect::<Vec<_>>(), ["Base", "IERC20", "Token"]);
        assert_eq!(d["Token"], ["Base", "IERC20"]);
    }

    #[test]
    fn cycles_are_errors() {
        let err = extract_contract_graph("contract A is B {} contract B is A {}").unwrap_err();
        assert_eq!(err, ContractGraphError::Cycle(vec!["A".into(), "B".into(), "A".into()]));
        assert!(extract_contract_graph("contract S is S {}").is_err());
    }

    const SAFEMATH: &str = "library SafeMath {\n  function add(uint a, uint b) internal pure returns (uint) {\n    uint c = a + b;\n    return c;\n  }\n}";

    #[test]
    fn safemath_digests() {
        let a = format!("pragma solidity ^0.4.18;\n{SAFEMATH}\ncontract T {{}}");
        let b = format!("{SAFEMATH}\n");
        assert_eq!(fingerprint_safemath(&a), fingerprint_safemath(&b));
        assert!(fingerprint_safemath(&a).digest().is_some());

        let extended = SAFEMATH.replace("\n}", "\n  function sub() {}\n}");
        assert_ne!(fingerprint_safemath(&extended), fingerprint_safemath(SAFEMATH));
        let reformatted = SAFEMATH.replace("  ", "    ");
        assert_ne!(fingerprint_safemath(&reformatted), fingerprint_safemath(SAFEMATH));

        assert_eq!(fingerprint_safemath("contract T {}"), Fingerprint::Absent);
        assert_eq!(
            fingerprint_safemath("library SafeMath { function f() {"),
            Fingerprint::Unbalanced
        );
        let braces_in_string = "contract SafeMath { string s = \"}\"; }";
        let (start, end) = safemath_span(braces_in_string).unwrap().unwrap();
        assert_eq!(&braces_in_string[start..end], braces_in_string);
    }

    #[test]
    fn templates() {
        let t = detect_templates(
            "import \"zeppelin-solidity/Ownable.sol\";\ncontract X is StandardToken { using SafeMath for uint256; }",
        );
        assert_eq!(
            t,
            [Template::Firstblood, Template::Openzeppelin, Template::Safemath].into()
        );
        assert!(detect_templates("contract ERC20 { function transfer() {} }").is_empty());
        assert!(detect_templates("contract MyStandardTokenX {}").is_empty());
        assert_eq!(
            detect_templates("// OpenZeppelin\ncontract G is UpgradeableToken {}"),
            [Template::UpgradeableGolem, Template::Openzeppelin].into()
        );
        assert!(fingerprint_safemath("using SafeMath for uint256;").digest().is_none());
    }

    /// Random DAG: node i may only inherit from nodes with larger index.
    fn arb_dag() -> impl Strategy<Value = Vec<Vec<usize>>> {
        (1usize..=15)
            .prop_flat_map(|n| prop::collection::vec(prop::collection::vec(prop::bool::weighted(0.25), n), n))
            .prop_map(|m| {
                m.iter()
                    .enumerate()
                    .map(|(i, row)| (i + 1..row.len()).filter(|&j| row[j]).collect())
                    .collect()
            })
    }

    /// Floyd-Warshall style reachability over the adjacency matrix.
    fn reachability(parents: &[Vec<usize>]) -> Vec<Vec<bool>> {
        let n = parents.len();
        let mut r = vec![vec![false; n]; n];
        for (i, ps) in parents.iter().enumerate() {
            for &p in ps {
                r[i][p] = true;
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if r[i][k] && r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
        r
    }

    proptest! {
        #[test]
        fn closure_matches_reachability(dag in arb_dag()) {
            let name = |i: usize| format!("C{i}");
            let src: String = dag
                .iter()
                .enumerate()
                .map(|(i, ps)| {
                    if ps.is_empty() {
                        format!("contract {} {{}}\n", name(i))
                    } else {
                        format!("contract {} is {} {{}}\n", name(i), ps.iter().map(|&p| name(p)).collect::<Vec<_>>().join(", "))
                    }
                })
                .collect();
            let g = extract_contract_graph(&src).unwrap();
            let r = reachability(&dag);
            for (i, row) in r.iter().enumerate() {
                let want: BTreeSet<String> = (0..dag.len()).filter(|&j| row[j]).map(name).collect();
                prop_assert_eq!(&g.closures[&name(i)], &want);
            }
            let used: BTreeSet<usize> = dag.iter().flatten().copied().collect();
            let terminals: Vec<String> = {
                let mut t: Vec<String> = (0..dag.len()).filter(|i| !used.contains(i)).map(name).collect();
                t.sort();
                t
            };
            prop_assert_eq!(g.terminals, terminals);
        }

        #[test]
        fn safemath_block_is_balanced(body in "[{}a-z ;]{0,30}") {
            let src = format!("x library SafeMath {{{body}}} y");
            if let Some(Ok((start, end))) = safemath_span(&src) {
                let block = &src[start..end];
                let depth = block.bytes().fold(0i32, |d, b| match b { b'{' => d + 1, b'}' => d - 1, _ => d });
                prop_assert_eq!(depth, 0);
                let closed = block.ends_with('}');
                prop_assert!(closed);
                let open = block.find('{').unwrap();
                let mut d = 0i32;
                for (i, b) in block.bytes().enumerate().skip(open) {
                    match b { b'{' => d += 1, b'}' => d -= 1, _ => {} }
                    if i + 1 < block.len() {
                        prop_assert!(d >= 1);
                    }
                }
            }
        }
    }
}
