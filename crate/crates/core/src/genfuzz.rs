//! Seeded random theories, entailed formula pairs, and shrinking.
//!
//! Generation is a pure function of the configuration: the same config
//! always yields byte-identical output, so any failure reproduces from
//! its seed alone. The generators live in the shipped library (not in
//! test code) so the CLI can replay them.

use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::formula::{ForgetMode, Formula, Symbol, Theory};
use crate::oracle::Oracle;

/// Relative weights for the connectives when generating internal nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConnectiveWeights {
    pub not: u32,
    pub and: u32,
    pub or: u32,
    pub implies: u32,
    pub iff: u32,
}

impl ConnectiveWeights {
    pub fn uniform() -> ConnectiveWeights {
        ConnectiveWeights {
            not: 1,
            and: 1,
            or: 1,
            implies: 1,
            iff: 1,
        }
    }
}

impl Default for ConnectiveWeights {
    fn default() -> ConnectiveWeights {
        ConnectiveWeights::uniform()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub seed: u64,
    pub max_symbols: usize,
    pub max_formulas: usize,
    pub max_depth: usize,
    pub connective_weights: ConnectiveWeights,
}

impl GenConfig {
    pub fn seeded(seed: u64) -> GenConfig {
        GenConfig {
            seed,
            ..GenConfig::default()
        }
    }
}

impl Default for GenConfig {
    fn default() -> GenConfig {
        GenConfig {
            seed: 0,
            max_symbols: 4,
            max_formulas: 6,
            max_depth: 3,
            connective_weights: ConnectiveWeights::uniform(),
        }
    }
}

fn symbol_pool(count: usize) -> Vec<Symbol> {
    (0..count)
        .map(|i| Symbol::new(&format!("p{i}")).expect("generated names are valid"))
        .collect()
}

fn gen_formula(rng: &mut ChaCha8Rng, cfg: &GenConfig, pool: &[Symbol], depth: usize) -> Formula {
    let leaf = depth == 0 || rng.random_range(0..100) < 30;
    if leaf {
        if pool.is_empty() {
            return if rng.random_bool(0.5) {
                Formula::True
            } else {
                Formula::False
            };
        }
        return match rng.random_range(0..10) {
            0..8 => Formula::Var(pool[rng.random_range(0..pool.len())].clone()),
            8 => Formula::True,
            _ => Formula::False,
        };
    }
    let w = cfg.connective_weights;
    let total = w.not + w.and + w.or + w.implies + w.iff;
    debug_assert!(total > 0, "connective weights must not all be zero");
    let mut roll = rng.random_range(0..total);
    if roll < w.not {
        return Formula::not(gen_formula(rng, cfg, pool, depth - 1));
    }
    roll -= w.not;
    let a = gen_formula(rng, cfg, pool, depth - 1);
    let b = gen_formula(rng, cfg, pool, depth - 1);
    if roll < w.and {
        Formula::and(a, b)
    } else if roll < w.and + w.or {
        Formula::or(a, b)
    } else if roll < w.and + w.or + w.implies {
        Formula::implies(a, b)
    } else {
        Formula::iff(a, b)
    }
}

/// Generates a theory within the configured bounds, deterministically in
/// the config.
pub fn gen_theory(cfg: &GenConfig) -> Theory {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let pool = symbol_pool(cfg.max_symbols);
    let count = rng.random_range(0..=cfg.max_formulas);
    let formulas = (0..count)
        .map(|_| gen_formula(&mut rng, cfg, &pool, cfg.max_depth))
        .collect();
    Theory::new(formulas)
}

/// Generates a pair `(left, right)` with `left ⊨ right`: the left side is
/// a conjunction of two drawn formulas, the right side weakens the left's
/// projection onto a random symbol subset by a further disjunct. The
/// entailment is re-checked before the pair is returned; a failing draw
/// (which the construction rules out) is redrawn.
pub fn gen_entailed_pair(cfg: &GenConfig) -> (Formula, Formula) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let pool = symbol_pool(cfg.max_symbols);
    let oracle = Oracle::default();
    loop {
        let chi = gen_formula(&mut rng, cfg, &pool, cfg.max_depth);
        let rho = gen_formula(&mut rng, cfg, &pool, cfg.max_depth);
        let left = Formula::and(chi, rho);
        let hide: BTreeSet<Symbol> = left
            .symbols()
            .into_iter()
            .filter(|_| rng.random_bool(0.5))
            .collect();
        let projected = left.forget(&hide, ForgetMode::Exists);
        let sigma = gen_formula(&mut rng, cfg, &pool, cfg.max_depth);
        let right = Formula::or(projected, sigma);
        let entailed = oracle
            .entails(std::slice::from_ref(&left), &right)
            .expect("generator stays far below the oracle limits")
            .is_entailed();
        if entailed {
            return (left, right);
        }
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ShrinkError {
    #[error("the input theory does not fail the predicate")]
    PredicateDoesNotFail,
}

/// Greedily shrinks a failing theory while `is_failing` stays true:
/// drops one member at a time, then constant-folds single members,
/// restarting until neither step preserves the failure. The universe is
/// kept, so predicates that depend on it see a stable symbol set.
pub fn shrink<F>(failing: &Theory, is_failing: F) -> Result<Theory, ShrinkError>
where
    F: Fn(&Theory) -> bool,
{
    if !is_failing(failing) {
        return Err(ShrinkError::PredicateDoesNotFail);
    }
    let universe = failing.universe().clone();
    let rebuild = |formulas: Vec<Formula>| {
        Theory::with_universe(formulas, universe.clone())
            .expect("shrinking never introduces symbols")
    };
    let mut current = failing.clone();
    'outer: loop {
        for i in 0..current.len() {
            let mut formulas = current.formulas().to_vec();
            formulas.remove(i);
            let candidate = rebuild(formulas);
            if is_failing(&candidate) {
                current = candidate;
                continue 'outer;
            }
        }
        for i in 0..current.len() {
            let folded = current.formulas()[i].const_fold();
            if folded == current.formulas()[i] {
                continue;
            }
            let mut formulas = current.formulas().to_vec();
            formulas[i] = folded;
            let candidate = rebuild(formulas);
            if is_failing(&candidate) {
                current = candidate;
                continue 'outer;
            }
        }
        return Ok(current);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    #[test]
    fn same_config_same_output() {
        let cfg = GenConfig::seeded(42);
        assert_eq!(gen_theory(&cfg).to_text(), gen_theory(&cfg).to_text());
        assert_eq!(gen_entailed_pair(&cfg), gen_entailed_pair(&cfg));
        let other = GenConfig::seeded(43);
        assert_ne!(gen_theory(&cfg).to_text(), gen_theory(&other).to_text());
    }

    #[test]
    fn bounds_are_respected() {
        for seed in 0..50 {
            let cfg = GenConfig {
                seed,
                max_symbols: 3,
                max_formulas: 5,
                max_depth: 2,
                connective_weights: ConnectiveWeights::uniform(),
            };
            let t = gen_theory(&cfg);
            assert!(t.len() <= 5);
            assert!(t.universe().len() <= 3);
            fn depth(f: &Formula) -> usize {
                match f {
                    Formula::Var(_) | Formula::True | Formula::False => 0,
                    Formula::Not(g) => 1 + depth(g),
                    Formula::And(a, b)
                    | Formula::Or(a, b)
                    | Formula::Implies(a, b)
                    | Formula::Iff(a, b) => 1 + depth(a).max(depth(b)),
                }
            }
            for f in t.iter() {
                assert!(depth(f) <= 2);
            }
        }
    }

    #[test]
    fn no_symbols_means_constants_only() {
        let cfg = GenConfig {
            seed: 1,
            max_symbols: 0,
            max_formulas: 3,
            max_depth: 2,
            connective_weights: ConnectiveWeights::uniform(),
        };
        let t = gen_theory(&cfg);
        assert!(t.universe().is_empty());
    }

    #[test]
    fn entailed_pairs_verify() {
        let oracle = Oracle::default();
        for seed in 0..30 {
            let (left, right) = gen_entailed_pair(&GenConfig::seeded(seed));
            assert!(
                oracle
                    .entails(std::slice::from_ref(&left), &right)
                    .unwrap()
                    .is_entailed(),
                "seed {seed}"
            );
        }
    }

    #[test]
    fn single_symbol_pairs() {
        let cfg = GenConfig {
            max_symbols: 1,
            ..GenConfig::seeded(7)
        };
        let (left, right) = gen_entailed_pair(&cfg);
        assert!(left.symbols().len() <= 1);
        assert!(right.symbols().len() <= 1);
    }

    #[test]
    fn shrink_removes_irrelevant_members() {
        let oracle = Oracle::default();
        let t = Theory::new(vec![
            parse("p").unwrap(),
            parse("p | q").unwrap(),
            parse("r").unwrap(),
        ]);
        let not_independent =
            |t: &Theory| !oracle.independent(t).unwrap().all_independent();
        let shrunk = shrink(&t, not_independent).unwrap();
        assert_eq!(shrunk.to_text(), "p\np | q\n");
        // already minimal: unchanged
        let again = shrink(&shrunk, not_independent).unwrap();
        assert_eq!(again.to_text(), shrunk.to_text());
    }

    #[test]
    fn shrink_folds_constants() {
        let t = Theory::new(vec![parse("p & true").unwrap(), parse("p | q").unwrap()]);
        let shrunk = shrink(&t, |t| t.len() == 2).unwrap();
        assert_eq!(shrunk.to_text(), "p\np | q\n");
    }

    #[test]
    fn shrink_rejects_non_failing_input() {
        let t = Theory::empty();
        assert_eq!(
            shrink(&t, |_| false),
            Err(ShrinkError::PredicateDoesNotFail)
        );
    }
}
