mod common;

use std::collections::{BTreeSet, HashSet};

use common::*;
use touching_lines::forbidden::is_forbidden_reference;
use touching_lines::search::{self, brute_force_check, brute_force_level, extend_level, run_search_levels, FeasibleLevel, SearchError};
use touching_lines::{canonical_code, canonical_form_brute_force, run_search, ForbiddenFamily, Graph, Scope, SearchOptions, Verdict};

/// Sizes of F_1..F_10 for the default family. Cross-checked against
/// brute-force enumeration (k <= 7) and a search that canonicalizes by
/// exhaustive permutation (k <= 8), then frozen.
const DEFAULT_COUNTS: [usize; 10] = [1, 2, 4, 9, 22, 62, 158, 242, 82, 0];

/// (3,4)-Ramsey graphs on 1..9 vertices.
const R34_COUNTS: [usize; 9] = [1, 2, 3, 6, 9, 15, 9, 3, 0];

fn levels(fam: &ForbiddenFamily, n: usize, jobs: usize) -> Vec<FeasibleLevel> {
    let opts = SearchOptions { jobs, ..Default::default() };
    run_search_levels(fam, n, &opts).unwrap().1
}

#[test]
fn default_family_counts() {
    let fam = ForbiddenFamily::default_family();
    let report = run_search(&fam, 12, &SearchOptions::default()).unwrap();
    let counts: Vec<usize> = report.levels.iter().map(|l| l.count).collect();
    assert_eq!(counts, DEFAULT_COUNTS);
    assert_eq!(report.verdict, Verdict::EmptyAt { k: 10 });
}

#[test]
fn r34_counts() {
    let fam = ForbiddenFamily::ramsey(3, 4).unwrap();
    let report = run_search(&fam, 9, &SearchOptions::default()).unwrap();
    let counts: Vec<usize> = report.levels.iter().map(|l| l.count).collect();
    assert_eq!(counts, R34_COUNTS);
    assert_eq!(report.verdict, Verdict::EmptyAt { k: 9 });
}

#[test]
fn first_extensions() {
    let fam = ForbiddenFamily::default_family();
    let f2 = extend_level(&FeasibleLevel::first(), &fam).level;
    assert_eq!(f2.count(), 2);
    let f3 = extend_level(&f2, &fam).level;
    assert_eq!(f3.count(), 4);
    let f4 = extend_level(&f3, &fam).level;
    assert_eq!(f4.count(), 9);
    let report = run_search(&fam, 4, &SearchOptions::default()).unwrap();
    let pairs: Vec<(usize, usize)> = report.levels.iter().map(|l| (l.k, l.count)).collect();
    assert_eq!(pairs, vec![(1, 1), (2, 2), (3, 4), (4, 9)]);
}

/// Labeled enumeration with the subset-enumeration filter and naive
/// canonical codes, compared class-for-class with the search.
fn assert_matches_enumeration(fam: &ForbiddenFamily, patterns: &[(Graph, Scope)], max_n: usize) {
    let searched = levels(fam, max_n, 1);
    for n in 1..=max_n {
        let level = searched.iter().find(|l| l.k == n);
        let search_codes: BTreeSet<u128> = level.map(|l| l.graphs.iter().map(|c| c.bits()).collect()).unwrap_or_default();
        let slots = n * (n - 1) / 2;
        let mut oracle = BTreeSet::new();
        let mut naive = HashSet::new();
        for bits in 0u128..1 << slots {
            let g = Graph::from_edge_bits(n, bits).unwrap();
            if is_forbidden_reference(&g, fam) {
                continue;
            }
            let code = canonical_code(&g);
            if oracle.insert(code.bits()) {
                // one representative per class goes through the slow oracles
                assert!(!naive_is_forbidden(&g, patterns), "{g}");
                naive.insert(naive_canonical_bits(&g));
            }
        }
        assert_eq!(search_codes, oracle, "level {n}");
        assert_eq!(naive.len(), oracle.len(), "level {n}: canonical codes split or merged classes");
        let bf = brute_force_level(fam, n).unwrap();
        assert_eq!(bf.graphs.iter().map(|c| c.bits()).collect::<BTreeSet<_>>(), oracle);
        assert_eq!(brute_force_check(fam, n).unwrap(), oracle.is_empty());
    }
}

#[test]
fn default_family_matches_enumeration_up_to_seven() {
    assert_matches_enumeration(&ForbiddenFamily::default_family(), &default_patterns(), 7);
}

#[test]
fn r34_family_matches_enumeration_up_to_seven() {
    assert_matches_enumeration(&ForbiddenFamily::ramsey(3, 4).unwrap(), &r34_patterns(), 7);
}

/// Level-by-level search that dedups by exhaustive minimum over all
/// relabelings and filters with the reference matcher.
#[test]
fn exhaustive_canonicalization_reproduces_levels_up_to_eight() {
    let fam = ForbiddenFamily::default_family();
    let searched = levels(&fam, 8, 1);
    let mut current: Vec<Graph> = vec![Graph::empty(1).unwrap()];
    for k in 2..=8 {
        let mut next = BTreeSet::new();
        for parent in &current {
            for mask in 0..1u16 << (k - 1) {
                let g = parent.extend(mask).unwrap();
                if !is_forbidden_reference(&g, &fam) {
                    next.insert(canonical_form_brute_force(&g).code);
                }
            }
        }
        let ours: Vec<_> = searched[k - 1].graphs.clone();
        assert_eq!(ours, next.iter().copied().collect::<Vec<_>>(), "level {k}");
        current = next.iter().map(|c| c.graph()).collect();
    }
}

#[test]
fn every_survivor_passes_a_full_check() {
    for fam in [ForbiddenFamily::default_family(), ForbiddenFamily::ramsey(3, 4).unwrap()] {
        for level in levels(&fam, 10, 1) {
            assert!(level.graphs.windows(2).all(|w| w[0] < w[1]), "level {} not strictly sorted", level.k);
            for code in &level.graphs {
                let g = code.graph();
                assert_eq!(canonical_code(&g), *code);
                assert!(!fam.is_forbidden(&g));
                assert!(!is_forbidden_reference(&g, &fam));
            }
        }
    }
}

#[test]
fn levels_are_closed_under_complement() {
    let fam = ForbiddenFamily::default_family();
    for level in levels(&fam, 9, 1) {
        let codes: HashSet<_> = level.graphs.iter().copied().collect();
        for code in &level.graphs {
            assert!(codes.contains(&canonical_code(&code.graph().complement())));
        }
    }
}

#[test]
fn deterministic_across_worker_counts() {
    let fam = ForbiddenFamily::default_family();
    let run = |jobs| {
        let opts = SearchOptions {
            jobs,
            witnesses: true,
            ..Default::default()
        };
        run_search(&fam, 10, &opts).unwrap().without_timings().to_json()
    };
    let one = run(1);
    for jobs in [2, 3, 8] {
        assert_eq!(run(jobs), one, "jobs={jobs}");
    }
    let r34 = ForbiddenFamily::ramsey(3, 4).unwrap();
    assert_eq!(levels(&r34, 9, 1), levels(&r34, 9, 4));
}

#[test]
fn emptiness_is_monotone() {
    let fam = ForbiddenFamily::default_family();
    for n in 10..=16 {
        let report = run_search(&fam, n, &SearchOptions::default()).unwrap();
        assert_eq!(report.verdict, Verdict::EmptyAt { k: 10 });
    }
    let report = run_search(&fam, 6, &SearchOptions::default()).unwrap();
    assert_eq!(report.verdict, Verdict::FeasibleSurvivors { k: 6, count: 62 });
}

#[test]
fn witnesses_are_the_last_nonempty_level() {
    let fam = ForbiddenFamily::default_family();
    let opts = SearchOptions {
        witnesses: true,
        ..Default::default()
    };
    let report = run_search(&fam, 4, &opts).unwrap();
    let w = report.witnesses.unwrap();
    assert_eq!(w.len(), 9);
    let report = run_search(&fam, 10, &opts).unwrap();
    let w = report.witnesses.unwrap();
    assert_eq!(w.len(), 82);
    let graphs: Vec<Graph> = w.iter().map(|s| touching_lines::graph6::decode(s).unwrap()).collect();
    assert!(graphs.iter().all(|g| g.n() == 9 && !fam.is_forbidden(g)));
}

#[test]
fn survivor_cap_reports_partial_progress() {
    let fam = ForbiddenFamily::default_family();
    let opts = SearchOptions {
        max_survivors: 100,
        ..Default::default()
    };
    match run_search(&fam, 10, &opts) {
        Err(SearchError::SurvivorCap { k, count, cap, partial }) => {
            assert_eq!((k, count, cap), (7, 158, 100));
            assert_eq!(partial.levels.len(), 7);
        }
        other => panic!("expected the cap to trip, got {other:?}"),
    }
}

#[test]
fn rejects_bad_inputs() {
    let fam = ForbiddenFamily::default_family();
    assert!(run_search(&fam, 0, &SearchOptions::default()).is_err());
    assert!(run_search(&fam, 17, &SearchOptions::default()).is_err());
    assert!(brute_force_level(&fam, 8).is_err());
    assert!(brute_force_check(&fam, search::BRUTE_FORCE_MAX_N + 1).is_err());
}

#[test]
fn brute_force_check_examples() {
    assert!(!brute_force_check(&ForbiddenFamily::default_family(), 4).unwrap());
    assert!(brute_force_check(&ForbiddenFamily::ramsey(2, 2).unwrap(), 2).unwrap());
    assert!(!brute_force_check(&ForbiddenFamily::ramsey(3, 3).unwrap(), 5).unwrap());
    assert!(brute_force_check(&ForbiddenFamily::ramsey(3, 3).unwrap(), 6).unwrap());
}
