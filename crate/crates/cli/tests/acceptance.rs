//! Acceptance suite: one test per shipped claim, each printing a
//! PASS line with its scale. Expected values come from brute-force
//! evaluation locally in this file wherever a reference is needed, so
//! the checks do not trust the code paths they certify.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use indep_core::formula::{Formula, Symbol, Theory, Valuation};
use indep_core::genfuzz::{gen_entailed_pair, gen_theory, GenConfig};
use indep_core::interpolation::{check_interpolant, interpolate, InterpolantMode};
use indep_core::oracle::{backend, Oracle};
use indep_core::partition::{build_partition, build_transformed};
use indep_core::pipelines::{
    independize, reznikoff_merge, tarski_chain, tarski_transform, PipelineMode, PipelineOptions,
};
use indep_core::starify::{check_star, starify, DEFAULT_STARIFY_CAP};

fn sym(name: &str) -> Symbol {
    Symbol::new(name).unwrap()
}

fn cfg(seed: u64, max_symbols: usize, max_formulas: usize) -> GenConfig {
    GenConfig {
        max_symbols,
        max_formulas,
        max_depth: 3,
        ..GenConfig::seeded(seed)
    }
}

/// Brute-force entailment over every joint valuation; the local
/// reference this suite trusts.
fn brute_entails(premises: &[Formula], conclusion: &Formula) -> bool {
    let mut symbols: BTreeSet<Symbol> = conclusion.symbols();
    for p in premises {
        symbols.extend(p.symbols());
    }
    let vars: Vec<&Symbol> = symbols.iter().collect();
    (0..1usize << vars.len()).all(|bits| {
        let v: Valuation = vars
            .iter()
            .enumerate()
            .map(|(j, s)| ((*s).clone(), bits & (1 << j) != 0))
            .collect();
        !premises.iter().all(|p| p.evaluate(&v).unwrap()) || conclusion.evaluate(&v).unwrap()
    })
}

/// Final-theorem suite: 500 seeded theories, both modes, output must be
/// equivalent to the input and independent, within five minutes.
#[test]
fn final_theorem_suite() {
    let started = Instant::now();
    let oracle = Oracle::default();
    let options = PipelineOptions::default();
    let mut fallbacks = 0;
    for seed in 0..500u64 {
        let t = gen_theory(&cfg(seed, 6, 10));
        for mode in [PipelineMode::Tarski, PipelineMode::Reznikoff] {
            let result = independize(&oracle, &t, mode, &options)
                .unwrap_or_else(|e| panic!("seed {seed} mode {mode:?}: {e}"));
            assert!(
                oracle
                    .equivalent_theories(&t, &result.output)
                    .unwrap()
                    .is_equivalent(),
                "seed {seed} mode {mode:?}: output not equivalent"
            );
            assert!(
                oracle.independent(&result.output).unwrap().all_independent(),
                "seed {seed} mode {mode:?}: output not independent"
            );
            fallbacks += result.fallback_used as u32;
        }
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs() < 300,
        "suite took {elapsed:?}, budget is five minutes"
    );
    println!(
        "ACCEPTANCE final-theorem: PASS (500 seeds x 2 modes, {fallbacks} fallbacks, {elapsed:?})"
    );
}

/// Chain-transform suite: the selection matches a brute-force reference,
/// and the guarded output is independent via the explicit witness models,
/// each re-validated by plain evaluation.
#[test]
fn chain_transform_suite() {
    let oracle = Oracle::default();
    let mut witnesses_checked = 0;
    for seed in 0..200u64 {
        let t = gen_theory(&cfg(seed.wrapping_mul(7).wrapping_add(1), 6, 10));
        let chain = tarski_chain(&oracle, &t).unwrap();

        let mut reference: Vec<Formula> = Vec::new();
        for f in t.iter() {
            if !brute_entails(&reference, f) {
                reference.push(f.clone());
            }
        }
        assert_eq!(chain.selected, reference, "seed {seed}: selection differs");

        let output = tarski_transform(&chain, false);
        assert!(
            oracle.independent(&output).unwrap().all_independent(),
            "seed {seed}: guarded output not independent"
        );

        let universe: BTreeSet<Symbol> =
            chain.selected.iter().flat_map(|f| f.symbols()).collect();
        for n in 0..chain.selected.len() {
            let witness = oracle
                .entails(&chain.selected[..n], &chain.selected[n])
                .unwrap()
                .countermodel()
                .expect("selected formulas are not entailed by their prefix")
                .extended_with_false(universe.iter());
            for (m, guarded) in chain.transformed.iter().enumerate() {
                assert_eq!(
                    guarded.evaluate(&witness).unwrap(),
                    m != n,
                    "seed {seed}: witness {n} misbehaves on member {m}"
                );
            }
            witnesses_checked += 1;
        }
    }
    println!("ACCEPTANCE chain-transform: PASS (200 seeds, {witnesses_checked} witness models)");
}

/// Merge suite: 100 random disjoint pairs satisfying the hypotheses;
/// the merge is equivalent to the union and independent.
#[test]
fn merge_suite() {
    let oracle = Oracle::default();
    let mut accepted = 0;
    let mut seed = 0u64;
    while accepted < 100 {
        seed += 1;
        assert!(seed < 20_000, "hypothesis filter accepted too few pairs");
        let c_formulas = gen_theory(&cfg(seed * 2, 4, 4)).formulas().to_vec();
        if c_formulas.is_empty() {
            continue;
        }
        let d_formulas: Vec<Formula> = gen_theory(&cfg(seed * 2 + 1, 4, 3))
            .iter()
            .filter(|f| !c_formulas.contains(f))
            .cloned()
            .collect();
        if d_formulas.len() > c_formulas.len() {
            continue;
        }
        let c = Theory::new(c_formulas.clone());
        let d = Theory::new(d_formulas.clone());
        let hypotheses_hold = (0..c.len()).all(|i| {
            let mut premises: Vec<Formula> = c_formulas
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, f)| f.clone())
                .collect();
            premises.extend(d_formulas.iter().cloned());
            !oracle
                .entails(&premises, &c_formulas[i])
                .unwrap()
                .is_entailed()
        });
        if !hypotheses_hold {
            continue;
        }
        let merged = reznikoff_merge(&oracle, &c, &d, true)
            .unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        let mut union = c_formulas.clone();
        union.extend(d_formulas);
        assert!(
            oracle
                .equivalent_theories(&Theory::new(union), &merged)
                .unwrap()
                .is_equivalent(),
            "seed {seed}: merge is not equivalent to the union"
        );
        assert!(
            oracle.independent(&merged).unwrap().all_independent(),
            "seed {seed}: merge is not independent"
        );
        accepted += 1;
    }
    println!("ACCEPTANCE merge: PASS (100 filtered pairs, last seed {seed})");
}

fn corpus_200() -> Vec<Theory> {
    (0..200u64).map(|seed| gen_theory(&cfg(seed, 4, 6))).collect()
}

/// Layering suite, random part: satisfiable corpus theories starify to
/// something equivalent that passes the brute-force coverage check.
/// Exhaustive part: every theory of up to three canonical two-symbol
/// formulas.
#[test]
fn layering_suite() {
    let oracle = Oracle::default();
    let mut random_checked = 0;
    for (seed, t) in corpus_200().into_iter().enumerate() {
        if oracle.satisfiable(t.formulas()).unwrap().model().is_none() {
            continue;
        }
        let out = starify(&oracle, &t, DEFAULT_STARIFY_CAP).unwrap();
        assert!(
            check_star(&oracle, &out, 40).unwrap().is_ok(),
            "seed {seed}: coverage violated"
        );
        assert!(
            oracle.equivalent_theories(&t, &out).unwrap().is_equivalent(),
            "seed {seed}: not equivalent"
        );
        random_checked += 1;
    }

    // all sixteen canonical formulas over {p, q}
    let vars = [sym("p"), sym("q")];
    let mut canonical: Vec<Formula> = Vec::new();
    for table in 0u32..16 {
        let mut minterms: Vec<Formula> = Vec::new();
        for row in 0..4u32 {
            if table & (1 << row) != 0 {
                let lits: Vec<Formula> = vars
                    .iter()
                    .enumerate()
                    .map(|(j, s)| {
                        if row & (1 << j) != 0 {
                            Formula::Var(s.clone())
                        } else {
                            Formula::not(Formula::Var(s.clone()))
                        }
                    })
                    .collect();
                minterms.push(Formula::conjoin(lits));
            }
        }
        let disjunction = match minterms.split_first() {
            None => Formula::False,
            Some((first, rest)) => rest.iter().cloned().fold(first.clone(), Formula::or),
        };
        canonical.push(disjunction.canonicalize());
    }
    canonical.sort();
    canonical.dedup();
    assert_eq!(canonical.len(), 16);

    let universe: BTreeSet<Symbol> = vars.iter().cloned().collect();
    let mut exhaustive_checked = 0;
    let mut members: Vec<usize> = Vec::new();
    exhaustive_theories(&canonical, &mut members, 0, &mut |formulas| {
        let t = Theory::with_universe(formulas.to_vec(), universe.clone()).unwrap();
        let out = starify(&oracle, &t, DEFAULT_STARIFY_CAP).unwrap();
        assert!(check_star(&oracle, &out, 40).unwrap().is_ok(), "{formulas:?}");
        assert!(
            oracle.equivalent_theories(&t, &out).unwrap().is_equivalent(),
            "{formulas:?}"
        );
        exhaustive_checked += 1;
    });
    assert_eq!(exhaustive_checked, 1 + 16 + 120 + 560);
    println!(
        "ACCEPTANCE layering: PASS ({random_checked} satisfiable corpus theories, {exhaustive_checked} exhaustive two-symbol theories)"
    );
}

/// Every subset of `pool` with at most three members, as formula slices.
fn exhaustive_theories(
    pool: &[Formula],
    members: &mut Vec<usize>,
    start: usize,
    visit: &mut impl FnMut(&[Formula]),
) {
    let formulas: Vec<Formula> = members.iter().map(|&i| pool[i].clone()).collect();
    visit(&formulas);
    if members.len() == 3 {
        return;
    }
    for i in start..pool.len() {
        members.push(i);
        exhaustive_theories(pool, members, i + 1, visit);
        members.pop();
    }
}

/// Guard-hypothesis suite: after starify + partition, no anchor entry is
/// entailed by the remaining guarded entries.
#[test]
fn guard_hypothesis_suite() {
    let oracle = Oracle::default();
    let mut entries_checked = 0;
    for (seed, t) in corpus_200().into_iter().enumerate() {
        if oracle.satisfiable(t.formulas()).unwrap().model().is_none() {
            continue;
        }
        let kept: Vec<Formula> = t
            .iter()
            .filter(|f| !oracle.valid(f).unwrap())
            .cloned()
            .collect();
        if kept.is_empty() {
            continue;
        }
        let starified = starify(&oracle, &Theory::new(kept), DEFAULT_STARIFY_CAP).unwrap();
        let state = build_partition(&starified).unwrap();
        let sets = build_transformed(&state);
        let c = sets.c_formulas();
        let d = sets.d_formulas();
        for i in 0..c.len() {
            let mut premises: Vec<Formula> = c
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, f)| f.clone())
                .collect();
            premises.extend(d.iter().cloned());
            assert!(
                !oracle.entails(&premises, &c[i]).unwrap().is_entailed(),
                "seed {seed}: guarded anchor {i} is entailed by the rest"
            );
            entries_checked += 1;
        }
    }
    println!("ACCEPTANCE guard-hypothesis: PASS ({entries_checked} anchor entries)");
}

/// Interpolation suite: 200 entailed pairs, both interpolants verified,
/// strongest entails weakest.
#[test]
fn interpolation_suite() {
    let oracle = Oracle::default();
    for seed in 0..200u64 {
        let (left, right) = gen_entailed_pair(&cfg(seed, 6, 6));
        let strongest = interpolate(&oracle, &left, &right, InterpolantMode::Strongest)
            .unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        let weakest = interpolate(&oracle, &left, &right, InterpolantMode::Weakest)
            .unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        assert!(
            check_interpolant(&oracle, &strongest).unwrap(),
            "seed {seed}: strongest fails verification"
        );
        assert!(
            check_interpolant(&oracle, &weakest).unwrap(),
            "seed {seed}: weakest fails verification"
        );
        assert!(
            oracle
                .entails(std::slice::from_ref(&strongest.tau), &weakest.tau)
                .unwrap()
                .is_entailed(),
            "seed {seed}: strongest does not entail weakest"
        );
    }
    println!("ACCEPTANCE interpolation: PASS (200 pairs x 2 modes)");
}

/// Backend cross-check: the enumerator and the clause-based search give
/// the same answer — and the same deterministic model — on 1,000 queries.
#[test]
fn backend_crosscheck_suite() {
    let mut disagreements = 0;
    for seed in 0..1000u64 {
        let premises = gen_theory(&cfg(seed * 3 + 1, 6, 4)).formulas().to_vec();
        let conclusion_pool = gen_theory(&cfg(seed * 3 + 2, 6, 2));
        let mut query = premises;
        if let Some(conclusion) = conclusion_pool.formulas().first() {
            query.push(Formula::not(conclusion.clone()));
        }
        let mut symbols: BTreeSet<Symbol> = BTreeSet::new();
        for f in &query {
            symbols.extend(f.symbols());
        }
        let vars: Vec<Symbol> = symbols.into_iter().collect();
        let by_enumeration = backend::enumeration_model(&query, &vars);
        let by_search = backend::search_model(&query, &vars);
        if by_enumeration != by_search {
            disagreements += 1;
            eprintln!("seed {seed}: enumeration {by_enumeration:?} vs search {by_search:?}");
        }
        if let Some(model) = &by_enumeration {
            for f in &query {
                assert!(f.evaluate(model).unwrap(), "seed {seed}: invalid model");
            }
        }
    }
    assert_eq!(disagreements, 0);
    println!("ACCEPTANCE backend-crosscheck: PASS (1000 queries, identical models)");
}

/// Determinism suite: certified runs over the golden corpus are
/// byte-identical when repeated.
#[test]
fn determinism_suite() {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let bin = env!("CARGO_BIN_EXE_indep");
    let mut artifacts = 0;
    for name in ["chain", "absorb", "mixed", "empty"] {
        for mode in ["tarski", "reznikoff"] {
            let mut runs: Vec<(Vec<u8>, Vec<u8>)> = Vec::new();
            for _ in 0..2 {
                let tmp = tempfile::tempdir().unwrap();
                let out = tmp.path().join("out.thy");
                let status = Command::new(bin)
                    .current_dir(&golden)
                    .args([
                        "independize",
                        "--mode",
                        mode,
                        "--certify",
                        &format!("{name}.thy"),
                        "-o",
                        out.to_str().unwrap(),
                    ])
                    .status()
                    .unwrap();
                assert!(status.success(), "{name} {mode}");
                let theory = std::fs::read(&out).unwrap();
                let report = std::fs::read(tmp.path().join("out.thy.json")).unwrap();
                runs.push((theory, report));
            }
            assert_eq!(runs[0], runs[1], "{name} {mode}: runs differ");
            artifacts += 2;
        }
    }
    println!("ACCEPTANCE determinism: PASS ({artifacts} artifact pairs byte-identical)");
}
