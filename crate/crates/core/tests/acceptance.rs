// Copyright 2026 The codelineage Authors
// SPDX-License-Identifier: Apache-2.0

//! End-to-end acceptance checks. Each check prints one PASS or FAIL line;
//! the process exits non-zero when any check fails.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration as StdDuration, Instant};

use chrono::{DateTime, Duration, TimeZone, Utc};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use walkdir::WalkDir;

use codelineage::baseline::{
    match_corpus, s_dir_project, snapshot_baseline, version_histogram, BaselineError, Metric, SnapshotProvider,
};
use codelineage::corpus::{
    build_corpus_index, hash_file, index_corpus, CommitHash, CommitRecord, ContractOrigin, CorpusIndex, ExtensionTable,
    Project, ProjectId, ProjectKind, RepoId, RepositorySnapshot, SourceFile,
};
use codelineage::derive::commit::{detect_fork_derivations, index_commits};
use codelineage::derive::copyright::{LibraryExclusions, NameMap, Resolver};
use codelineage::pipeline::{expected_artifacts, run_all, BaselineConfig, RunConfig};
use codelineage::selection::{select_corpus, selection_size, ExclusionList, RelevanceBonus, SelectionOverrides};
use codelineage::similarity::{build_similarity_graph, component_stats, s_hash_project, scope_all};
use codelineage::solidity::{aggregate_cdf, extract_contract_graph, profile_contract, Feature};

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        match $cond {
            true => {}
            false => return Err(format!($($fmt)+)),
        }
    };
}

fn t0() -> DateTime<Utc> {
    Utc.with_ymd_and_hms(2012, 1, 1, 0, 0, 0).unwrap()
}

fn repo(id: &str, root: impl Into<PathBuf>) -> RepositorySnapshot {
    RepositorySnapshot::new(RepoId::new(id), id, root, 0, t0(), Vec::new())
}

fn project(id: &str, name: &str, repos: Vec<RepositorySnapshot>) -> Project {
    Project {
        project_id: ProjectId::new(id),
        name: name.to_string(),
        symbol: id.to_ascii_uppercase(),
        kind: ProjectKind::Coin,
        category: None,
        repositories: repos,
        contract_sources: Vec::new(),
    }
}

fn write(path: &Path, bytes: &[u8]) {
    fs::create_dir_all(path.parent().unwrap()).unwrap();
    fs::write(path, bytes).unwrap();
}

fn tempdir() -> tempfile::TempDir {
    tempfile::tempdir().expect("temporary directory")
}

/// Bytes of every file the extension table recognizes, per project.
fn oracle_files(projects: &[Project], table: &ExtensionTable) -> BTreeMap<ProjectId, Vec<Vec<u8>>> {
    let mut out = BTreeMap::new();
    for p in projects {
        let mut files = Vec::new();
        for r in &p.repositories {
            for e in WalkDir::new(&r.root_path).sort_by_file_name() {
                let e = e.unwrap();
                if e.file_type().is_file() && table.language_of(e.path()).is_some() {
                    files.push(fs::read(e.path()).unwrap());
                }
            }
        }
        out.insert(p.project_id.clone(), files);
    }
    out
}

fn random_corpus(rng: &mut StdRng, dir: &Path) -> Vec<Project> {
    let pool: Vec<Vec<u8>> = (0..rng.random_range(3..40))
        .map(|i| format!("int f{i}() {{ return {i}; }}\n").into_bytes())
        .collect();
    let exts = ["c", "h", "py", "go", "txt", "rs"];
    let n_projects = rng.random_range(1..=10);
    let mut projects = Vec::new();
    for p in 0..n_projects {
        let n_repos = rng.random_range(1..=3);
        let mut repos = Vec::new();
        for r in 0..n_repos {
            let id = format!("p{p}-r{r}");
            let root = dir.join(&id);
            fs::create_dir_all(&root).unwrap();
            for f in 0..rng.random_range(0..=(50 / n_repos)) {
                let ext = exts[rng.random_range(0..exts.len())];
                let depth = rng.random_range(0..3);
                let path = root.join(format!("d{depth}/f{f}.{ext}"));
                let bytes = if rng.random_bool(0.2) {
                    format!("unique {p} {r} {f}\n").into_bytes()
                } else {
                    pool[rng.random_range(0..pool.len())].clone()
                };
                write(&path, &bytes);
            }
            repos.push(repo(&id, root));
        }
        projects.push(project(&format!("p{p}"), &format!("P{p}"), repos));
    }
    projects
}

fn check_hash_oracle() -> Check {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    let table = ExtensionTable::builtin();
    let mut pairs = 0usize;
    for round in 0..24 {
        let dir = tempdir();
        let projects = random_corpus(&mut rng, dir.path());
        let oracle = oracle_files(&projects, &table);
        let (index, _) = index_corpus(projects, &table).map_err(|e| e.to_string())?;
        let scope = scope_all(&index);
        for (a, fa) in &oracle {
            for (b, fb) in &oracle {
                if a == b {
                    continue;
                }
                let expected = (!fa.is_empty() && !fb.is_empty()).then(|| {
                    let m = fa.iter().filter(|x| fb.contains(x)).count();
                    m as f64 / fa.len() as f64
                });
                let got = s_hash_project(a, b, &index, &scope).map(|s| s.score);
                ensure!(
                    got == expected,
                    "round {round}, {a} -> {b}: got {got:?}, expected {expected:?}"
                );
                pairs += 1;
            }
        }
    }
    let elapsed = started.elapsed();
    ensure!(elapsed < StdDuration::from_secs(10), "took {elapsed:?}");
    println!(
        "    {pairs} ordered pairs over 24 corpora in {:.2}s",
        elapsed.as_secs_f64()
    );
    Ok(())
}

fn check_license_only_project() -> Check {
    let dir = tempdir();
    let license = b"GNU LESSER GENERAL PUBLIC LICENSE\nVersion 3, 29 June 2007\n";
    let mut projects = vec![{
        let root = dir.path().join("zeta");
        write(&root.join("LICENSE.md"), license);
        project("zeta", "Zeta", vec![repo("zeta", root)])
    }];
    for i in 0..5 {
        let id = format!("host{i}");
        let root = dir.path().join(&id);
        write(&root.join("LICENSE.md"), license);
        for f in 0..4 {
            write(
                &root.join(format!("src/m{f}.go")),
                format!("package h{i}f{f}\n").as_bytes(),
            );
        }
        projects.push(project(&id, &id, vec![repo(&id, root)]));
    }
    let (index, _) = index_corpus(projects, &ExtensionTable::builtin()).map_err(|e| e.to_string())?;
    let graph = build_similarity_graph(&index, &scope_all(&index), 0.7);
    let out: Vec<_> = graph.edges.iter().filter(|e| e.source.as_str() == "zeta").collect();
    ensure!(out.len() == 5, "zeta has out-degree {}", out.len());
    ensure!(out.iter().all(|e| e.score == 1.0), "non-unit scores: {out:?}");
    ensure!(graph.edges.len() == 5, "unexpected extra edges: {:?}", graph.edges);
    let stats = component_stats(&graph);
    let zeta = stats
        .iter()
        .flat_map(|c| &c.degrees)
        .find(|d| d.project_id.as_str() == "zeta")
        .ok_or("zeta missing from components")?;
    ensure!(zeta.out_degree == 5 && zeta.in_degree == 0, "degrees {zeta:?}");
    Ok(())
}

fn check_directory_copy() -> Check {
    let dir = tempdir();
    let (a, b) = (dir.path().join("orig"), dir.path().join("copy"));
    for i in 0..30 {
        let rel = format!("src/mod{}/unit{i}.c", i % 4);
        write(
            &a.join(&rel),
            format!("int unit{i}(void) {{ return {i}; }}\n").as_bytes(),
        );
        write(
            &b.join(&rel),
            format!("long renamed{i}(void) {{ return -{i}; }}\n").as_bytes(),
        );
    }
    let projects = vec![
        project("orig", "Orig", vec![repo("orig", a)]),
        project("copy", "Copy", vec![repo("copy", b)]),
    ];
    let (index, _) = index_corpus(projects, &ExtensionTable::builtin()).map_err(|e| e.to_string())?;
    let scope = scope_all(&index);
    let (src, dst) = (ProjectId::new("copy"), ProjectId::new("orig"));
    let dir_score = s_dir_project(&src, &dst, &index, &scope);
    let hash = s_hash_project(&src, &dst, &index, &scope).map(|s| (s.score, s.total_files));
    ensure!(dir_score == Some(1.0), "S_dir = {dir_score:?}");
    ensure!(hash == Some((0.0, 30)), "S_hash = {hash:?}");
    Ok(())
}

struct SyntheticHistory {
    days: BTreeMap<CommitHash, i64>,
}

const PERIODS: [i64; 5] = [61, 122, 183, 244, 305];

impl SyntheticHistory {
    fn new(span_days: i64, every: i64) -> Self {
        let days = (0..=span_days / every)
            .map(|k| {
                (
                    CommitHash::parse(&format!("{:040x}", 0xc0de_0000 + k)).unwrap(),
                    k * every,
                )
            })
            .collect();
        SyntheticHistory { days }
    }

    fn records(&self) -> Vec<CommitRecord> {
        self.days
            .iter()
            .map(|(h, d)| CommitRecord {
                commit_hash: h.clone(),
                committer_timestamp: t0() + Duration::days(*d),
            })
            .collect()
    }
}

impl SnapshotProvider for SyntheticHistory {
    fn materialize(&self, commit: &CommitHash) -> Result<Vec<SourceFile>, BaselineError> {
        let day = self.days[commit];
        Ok((0..20)
            .map(|i| {
                let body = format!("file {i} revision {}\n", day / PERIODS[i % 5]);
                SourceFile {
                    repo_id: RepoId::new(commit.as_str()),
                    rel_path: format!("src/f{i}.cpp"),
                    language: "C++".into(),
                    content_hash: hash_file(body.as_bytes()),
                    byte_size: body.len() as u64,
                }
            })
            .collect())
    }

    fn location(&self, commit: &CommitHash) -> String {
        format!("synthetic/{commit}")
    }
}

fn check_baseline_planting() -> Check {
    let history = SyntheticHistory::new(3287, 7);
    let versions = snapshot_baseline(&history.records(), &history, t0(), 183).map_err(|e| e.to_string())?;
    ensure!(versions.len() == 18, "{} versions", versions.len());

    let tree =
        |label: u32| -> Vec<SourceFile> { history.materialize(&versions[label as usize - 1].commit_hash).unwrap() };
    let plant = |id: &str, files: Vec<SourceFile>| {
        let files = files
            .into_iter()
            .map(|f| SourceFile {
                repo_id: RepoId::new(id),
                ..f
            })
            .collect::<Vec<_>>();
        (project(id, id, vec![repo(id, id)]), files)
    };
    let mut planted: BTreeMap<String, u32> = BTreeMap::new();
    let mut entries = Vec::new();
    for (label, copies) in [(3u32, 2usize), (9, 4), (15, 2)] {
        for c in 0..copies {
            let id = format!("v{label}-copy{c}");
            let mut files = tree(label);
            if c % 2 == 1 {
                let noise = format!("noise {id}\n");
                files.push(SourceFile {
                    rel_path: "src/extra.cpp".into(),
                    content_hash: hash_file(noise.as_bytes()),
                    ..files[0].clone()
                });
            }
            entries.push(plant(&id, files));
            planted.insert(id, label);
        }
    }
    let pick = |label: u32, path: &str| -> SourceFile {
        let mut f = tree(label).into_iter().find(|f| f.rel_path == "src/f0.cpp").unwrap();
        f.rel_path = path.into();
        f
    };
    entries.push(plant("tie", vec![pick(9, "a.cpp"), pick(10, "b.cpp")]));
    planted.insert("tie".into(), 9);

    let (projects, files): (Vec<_>, Vec<_>) = entries.into_iter().unzip();
    let files = projects
        .iter()
        .map(|p| p.repositories[0].repo_id.clone())
        .zip(files)
        .collect();
    let index = build_corpus_index(projects, files, &ExtensionTable::builtin()).map_err(|e| e.to_string())?;
    let matches = match_corpus(&index, &scope_all(&index), &versions, &[Metric::Hash]);
    ensure!(matches.len() == planted.len(), "{} matches", matches.len());
    for m in &matches {
        let want = planted[m.project_id.as_str()];
        ensure!(
            m.best_version == want,
            "{} assigned to {} not {want}",
            m.project_id,
            m.best_version
        );
    }
    let tie = matches.iter().find(|m| m.project_id.as_str() == "tie").unwrap();
    ensure!(
        tie.per_version_scores[8].1 == tie.per_version_scores[9].1,
        "tie fixture is not tied"
    );

    let rows = version_histogram(&matches, 18, &[0.7]);
    let counts: Vec<usize> = rows.iter().map(|r| r.count).collect();
    let peak = counts[8];
    ensure!(
        counts.iter().enumerate().all(|(i, &c)| i == 8 || c < peak),
        "no spike at version 9: {counts:?}"
    );
    Ok(())
}

fn commit(n: u32) -> CommitRecord {
    CommitRecord {
        commit_hash: CommitHash::parse(&format!("{n:040x}")).unwrap(),
        committer_timestamp: t0() + Duration::days(i64::from(n)),
    }
}

fn fork_repo(id: &str, created: (i32, u32), commits: &[u32]) -> RepositorySnapshot {
    let log = commits.iter().copied().map(commit).collect();
    let mut r = RepositorySnapshot::new(RepoId::new(id), id, id, 0, t0(), log);
    r.created_at = Some(Utc.with_ymd_and_hms(created.0, created.1, 1, 0, 0, 0).unwrap());
    r
}

fn check_fork_history() -> Check {
    let projects = [
        project(
            "alpha",
            "Alpha",
            vec![
                fork_repo("alpha/main", (2010, 1), &[1, 2, 3, 4, 5]),
                fork_repo("alpha/mirror", (2012, 1), &[1, 2, 3, 4, 5]),
            ],
        ),
        project(
            "beta",
            "Beta",
            vec![fork_repo("beta/main", (2011, 1), &[1, 2, 3, 6, 7])],
        ),
        project(
            "gamma",
            "Gamma",
            vec![fork_repo("gamma/main", (2011, 6), &[1, 2, 3, 6, 8])],
        ),
        project("delta", "Delta", vec![fork_repo("delta/main", (2013, 1), &[1, 2, 9])]),
        project("omega", "Omega", vec![fork_repo("omega/main", (2009, 1), &[10, 11])]),
    ];
    let index = index_commits(
        projects
            .iter()
            .flat_map(|p| p.repositories.iter().map(move |r| (&p.project_id, r))),
    );
    let got: BTreeSet<(String, String, u64)> = detect_fork_derivations(&index)
        .into_iter()
        .map(|e| {
            (
                e.source.to_string(),
                e.target.to_string(),
                e.weight.unwrap_or(-1.0) as u64,
            )
        })
        .collect();
    let want: BTreeSet<(String, String, u64)> = [
        ("beta", "alpha", 3),
        ("gamma", "alpha", 3),
        ("gamma", "beta", 1),
        ("delta", "alpha", 2),
    ]
    .into_iter()
    .map(|(s, t, w)| (s.to_string(), t.to_string(), w))
    .collect();
    ensure!(got == want, "edges {got:?}, expected {want:?}");
    Ok(())
}

fn check_copyright_resolution() -> Check {
    let projects: Vec<Project> = [
        ("bitcoin", "Bitcoin"),
        ("litecoin", "Litecoin"),
        ("peercoin", "Peercoin"),
        ("dash", "Dash"),
        ("monero", "Monero"),
        ("ethereum", "Ethereum"),
        ("qtum", "Qtum"),
        ("zcash", "Zcash"),
    ]
    .into_iter()
    .map(|(id, name)| project(id, name, Vec::new()))
    .collect();
    let resolver = Resolver::new(
        &projects,
        NameMap::builtin_aliases(),
        NameMap::builtin_authors(),
        LibraryExclusions::builtin(),
    );
    let hits = [
        ("Copyright (c) 2009-2014 The Bitcoin developers", "bitcoin"),
        ("Copyright (c) 2012-2013 The PPCoin developers", "peercoin"),
        ("Copyright (c) 2013 Pieter Wuille", "bitcoin"),
    ];
    for (line, want) in hits {
        let got = resolver.resolve(line);
        ensure!(
            got.as_ref().map(ProjectId::as_str) == Some(want),
            "{line:?} resolved to {got:?}"
        );
    }
    let distractors = [
        "Copyright (C) 2007 Free Software Foundation, Inc.",
        "Copyright 2010 Google Inc.",
        "Copyright (c) 2011 The LevelDB Authors. All rights reserved.",
        "Copyright (c) 1998-2011 The OpenSSL Project.",
        "Copyright (C) 1995-2013 Jean-loup Gailly and Mark Adler",
        "Copyright (c) 2005-2015 Thomas Bernard",
        "Copyright 2013 Niels Lohmann",
        "Copyright (c) 1990, 1993 The Regents of the University of California.",
        "Copyright (C) 2016 The Qt Company Ltd.",
        "Copyright (C) 2015 Digia Plc and/or its subsidiary(-ies).",
        "Copyright 2001-2004 Unicode, Inc.",
        "Copyright (c) 2011-2014 Yann Collet",
        "Copyright (c) 2012 Jeff Garzik",
        "Copyright (c) 2001-2017 Python Software Foundation",
        "Copyright 2009 Colin Percival",
        "Copyright (c) 2008 Daniel J. Bernstein",
        "Copyright 2014 Mozilla Foundation",
        "Copyright (c) Microsoft Corporation. All rights reserved.",
        "Copyright (C) 1995-1998 Eric Young (eay@cryptsoft.com)",
        "Copyright (c) 2003-2008 Nokia Corporation",
    ];
    let false_hits: Vec<_> = distractors
        .iter()
        .filter_map(|l| resolver.resolve(l).map(|p| format!("{l:?} -> {p}")))
        .collect();
    ensure!(false_hits.is_empty(), "false resolutions: {false_hits:?}");
    Ok(())
}

fn check_selection_sizes() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5eed_0007);
    let reference = t0() + Duration::weeks(400);
    let excluded = ["alpha-docs", "alpha-wallet-gui", "alpha-test-suite", "alpha-explorer"];
    for n in 1..=25 {
        let mut repos: Vec<RepositorySnapshot> = (0..n)
            .map(|i| {
                let mut r = repo(&format!("alpha/node-{i}"), "unused");
                r.fork_count = rng.random_range(0..5000);
                r.last_update = t0() + Duration::weeks(rng.random_range(0..400));
                r
            })
            .collect();
        for name in excluded {
            let mut r = repo(&format!("alpha/{name}"), "unused");
            r.name = name.to_string();
            r.fork_count = 1_000_000;
            r.last_update = reference;
            repos.push(r);
        }
        repos.shuffle(&mut rng);
        let p = project("alpha", "Alpha", repos);
        let rows = select_corpus(
            [&p],
            reference,
            &RelevanceBonus::default(),
            &ExclusionList::builtin(),
            &SelectionOverrides::default(),
        )
        .map_err(|e| e.to_string())?;
        let picked: Vec<_> = rows.iter().filter(|r| r.selected).collect();
        let want = (n as f64 * 0.2).ceil().max(1.0) as usize;
        ensure!(want == selection_size(n), "size formula disagrees at N={n}");
        ensure!(
            picked.len() == want,
            "N={n}: selected {}, expected {want}",
            picked.len()
        );
        ensure!(
            picked.iter().all(|r| r.excluded_by.is_empty()),
            "N={n}: an excluded repository was selected"
        );
        ensure!(
            rows.iter().filter(|r| !r.excluded_by.is_empty()).count() == excluded.len(),
            "N={n}: exclusion terms missed a repository"
        );
    }
    Ok(())
}

fn check_solidity() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5eed_0008);
    for round in 0..100 {
        let n = rng.random_range(1..=15usize);
        let parents: Vec<Vec<usize>> = (0..n)
            .map(|i| (0..i).filter(|_| rng.random_bool(0.3)).collect())
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let src: String = order
            .iter()
            .map(|&i| {
                let names: Vec<String> = parents[i].iter().map(|j| format!("C{j}")).collect();
                if names.is_empty() {
                    format!("contract C{i} {{ }}\n")
                } else {
                    format!("contract C{i} is {} {{ }}\n", names.join(", "))
                }
            })
            .collect();
        let graph = extract_contract_graph(&src).map_err(|e| format!("round {round}: {e}"))?;
        for i in 0..n {
            let mut seen = BTreeSet::new();
            let mut stack = parents[i].clone();
            while let Some(j) = stack.pop() {
                if seen.insert(j) {
                    stack.extend(&parents[j]);
                }
            }
            let want: BTreeSet<String> = seen.into_iter().map(|j| format!("C{j}")).collect();
            let got = &graph.closures[&format!("C{i}")];
            ensure!(*got == want, "round {round}, C{i}: {got:?} != {want:?}");
        }
    }

    let p = profile_contract(
        "x.sol",
        ContractOrigin::Deployed,
        "contract Ownable {}\ncontract Mintable is Ownable {}\ncontract X is Mintable {}\n",
    );
    let x: BTreeSet<&str> = p.types["X"].iter().map(String::as_str).collect();
    ensure!(x == BTreeSet::from(["Mintable", "Ownable"]), "X has types {x:?}");

    let mut sources = vec![
        "pragma solidity ^0.4.18;\ncontract Ownable {}\ncontract Mintable is Ownable {}\ncontract T is Mintable {}\n";
        4
    ];
    sources.push(
        "pragma solidity 0.4.11;\ncontract Ownable {}\ncontract Mintable is Ownable {}\ncontract T is Mintable {}\n",
    );
    sources.extend(["pragma solidity 0.4.11;\ncontract Pausable {}\ncontract P is Pausable {}\n"; 2]);
    sources.push("pragma solidity ^0.4.24;\ncontract Pausable {}\ncontract P is Pausable {}\n");
    sources.push("pragma solidity >=0.4.24 <0.6.0;\ncontract Lone {}\n");
    sources.push("contract Lone {}\n");
    let profiles: Vec<_> = sources
        .iter()
        .enumerate()
        .map(|(i, s)| profile_contract(&format!("c{i}.sol"), ContractOrigin::Deployed, s))
        .collect();

    let expect = |feature: Feature, want: &[(&str, usize, f64)]| -> Check {
        let cdf = aggregate_cdf(&profiles, feature, None).ok_or("empty cdf")?;
        ensure!(
            cdf.ranked_counts.len() == want.len(),
            "{feature:?}: {:?}",
            cdf.ranked_counts
        );
        for (k, (value, count, pct)) in want.iter().enumerate() {
            let (v, c) = &cdf.ranked_counts[k];
            ensure!(v == value && c == count, "{feature:?} rank {k}: ({v}, {c})");
            let got = cdf.cumulative_pct[k];
            ensure!((got - pct).abs() <= 0.1, "{feature:?} rank {k}: {got} vs {pct}");
        }
        Ok(())
    };
    expect(
        Feature::SolidityVersion,
        &[
            ("0.4.18", 4, 40.0),
            ("0.4.11", 3, 70.0),
            ("0.4.24", 2, 90.0),
            ("none", 1, 100.0),
        ],
    )?;
    expect(
        Feature::Types,
        &[("Mintable", 5, 38.46), ("Ownable", 5, 76.92), ("Pausable", 3, 100.0)],
    )?;
    Ok(())
}

fn demo_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../demo")
}

fn demo_config(out: &Path, jobs: usize) -> RunConfig {
    let demo = demo_dir();
    let mut config = RunConfig::new(out);
    config.manifest = Some(demo.join("manifest.jsonl"));
    config.baseline = Some(BaselineConfig {
        commit_log: demo.join("baseline/commits.txt"),
        snapshots: demo.join("baseline/snapshots"),
        start_time: None,
    });
    config.jobs = jobs;
    config
}

fn read_tree(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    WalkDir::new(dir)
        .sort_by_file_name()
        .into_iter()
        .map(Result::unwrap)
        .filter(|e| e.file_type().is_file())
        .map(|e| {
            let rel = e.path().strip_prefix(dir).unwrap().display().to_string();
            (rel, fs::read(e.path()).unwrap())
        })
        .collect()
}

fn check_determinism() -> Check {
    let dir = tempdir();
    let mut trees = Vec::new();
    for (run, jobs) in [1, 8, 1, 8].into_iter().enumerate() {
        let out = dir.path().join(format!("run{run}-j{jobs}"));
        run_all(&demo_config(&out, jobs)).map_err(|e| e.to_string())?;
        trees.push((jobs, read_tree(&out)));
    }
    let (_, first) = &trees[0];
    ensure!(!first.is_empty(), "no artifacts written");
    for (jobs, tree) in &trees[1..] {
        ensure!(tree.keys().eq(first.keys()), "artifact set differs at jobs={jobs}");
        for (name, bytes) in tree {
            ensure!(first[name] == *bytes, "{name} differs at jobs={jobs}");
        }
    }
    println!("    {} artifacts identical across 4 runs", first.len());
    Ok(())
}

fn check_demo_pipeline() -> Check {
    let dir = tempdir();
    let out = dir.path().join("out");
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    let started = Instant::now();
    run_all(&demo_config(&out, jobs)).map_err(|e| e.to_string())?;
    let elapsed = started.elapsed();
    ensure!(elapsed < StdDuration::from_secs(60), "took {elapsed:?}");
    for name in expected_artifacts(true) {
        let meta = fs::metadata(out.join(&name)).map_err(|e| format!("{name}: {e}"))?;
        ensure!(meta.len() > 0, "{name} is empty");
    }
    let index: CorpusIndex =
        serde_json::from_str(&fs::read_to_string(out.join("index.json")).unwrap()).map_err(|e| e.to_string())?;
    ensure!(index.projects.len() == 15, "{} projects indexed", index.projects.len());
    println!("    full run in {:.2}s", elapsed.as_secs_f64());
    Ok(())
}

type NamedCheck = (&'static str, fn() -> Check);

fn main() {
    let checks: [NamedCheck; 10] = [
        ("file-hash score matches byte oracle", check_hash_oracle),
        ("license-only project links to every host", check_license_only_project),
        ("directory copy with rewritten files", check_directory_copy),
        ("planted baseline versions recovered", check_baseline_planting),
        ("shared-commit edges on fork chains", check_fork_history),
        ("copyright lines resolve without false hits", check_copyright_resolution),
        ("repository selection sizes and exclusions", check_selection_sizes),
        ("contract closures, types and popularity", check_solidity),
        ("artifacts independent of thread count", check_determinism),
        ("demo corpus end to end", check_demo_pipeline),
    ];
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        match check() {
            Ok(()) => println!("PASS ac{} {name}", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL ac{} {name}: {e}", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", checks.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
