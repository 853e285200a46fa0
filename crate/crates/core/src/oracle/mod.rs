//! Decision services: satisfiability, entailment, validity, theory
//! equivalence, and per-member independence, all returning concrete model
//! certificates that are re-checked by evaluation before being emitted.
//!
//! Two engines sit behind one interface: exhaustive enumeration up to a
//! configurable symbol threshold, and clause-based search with unit
//! propagation above it. Both pick models deterministically — the
//! lexicographically least satisfying assignment over the name-ordered
//! query symbols, `false` before `true`.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, Ordering};

use thiserror::Error;

use crate::formula::{Formula, Symbol, Theory, Valuation};

pub mod backend;

/// Hard cap on query symbols; queries beyond it are refused.
pub const DEFAULT_MAX_VARS: usize = 24;
/// Queries with at most this many symbols use exhaustive enumeration.
pub const DEFAULT_ENUM_THRESHOLD: usize = 20;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("query uses {symbols} symbols, above the configured limit of {max}")]
    ResourceLimit { symbols: usize, max: usize },
}

/// Outcome of a satisfiability query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatResult {
    Sat(Valuation),
    Unsat,
}

impl SatResult {
    pub fn model(&self) -> Option<&Valuation> {
        match self {
            SatResult::Sat(v) => Some(v),
            SatResult::Unsat => None,
        }
    }
}

/// Outcome of an entailment query: either the conclusion follows, or a
/// countermodel — a valuation satisfying every premise and falsifying the
/// conclusion, total on the query's symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Entailed,
    Countermodel(Valuation),
}

impl Certificate {
    pub fn is_entailed(&self) -> bool {
        matches!(self, Certificate::Entailed)
    }

    pub fn countermodel(&self) -> Option<&Valuation> {
        match self {
            Certificate::Countermodel(v) => Some(v),
            Certificate::Entailed => None,
        }
    }
}

/// A premises/conclusion pair for the entailment relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntailmentQuery {
    pub premises: Vec<Formula>,
    pub conclusion: Formula,
}

impl EntailmentQuery {
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = self.conclusion.symbols();
        for p in &self.premises {
            out.extend(p.symbols());
        }
        out
    }
}

/// Which entailment direction failed when comparing two theories.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// The left theory fails to entail a member of the right one.
    LeftToRight,
    /// The right theory fails to entail a member of the left one.
    RightToLeft,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TheoryEquivalence {
    Equivalent,
    NotEquivalent {
        direction: Direction,
        formula: Formula,
        countermodel: Valuation,
    },
}

impl TheoryEquivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, TheoryEquivalence::Equivalent)
    }
}

/// Per-member independence verdicts, by position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependenceReport {
    pub entries: Vec<IndependenceEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependenceEntry {
    pub independent: bool,
    /// When independent: a model of the remaining members plus the
    /// member's negation.
    pub witness: Option<Valuation>,
}

impl IndependenceReport {
    pub fn all_independent(&self) -> bool {
        self.entries.iter().all(|e| e.independent)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct OracleConfig {
    pub max_vars: usize,
    pub enum_threshold: usize,
}

impl Default for OracleConfig {
    fn default() -> OracleConfig {
        OracleConfig {
            max_vars: DEFAULT_MAX_VARS,
            enum_threshold: DEFAULT_ENUM_THRESHOLD,
        }
    }
}

/// The decision engine. Queries are pure; the only internal state is a
/// thread-safe counter of satisfiability decisions, for reporting.
#[derive(Debug, Default)]
pub struct Oracle {
    config: OracleConfig,
    calls: AtomicU64,
}

impl Oracle {
    pub fn new(config: OracleConfig) -> Oracle {
        Oracle {
            config,
            calls: AtomicU64::new(0),
        }
    }

    pub fn with_max_vars(max_vars: usize) -> Oracle {
        Oracle::new(OracleConfig {
            max_vars,
            ..OracleConfig::default()
        })
    }

    /// Number of satisfiability decisions performed so far.
    pub fn call_count(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    /// Decides joint satisfiability of `formulas`, returning the least
    /// model in the deterministic order if one exists. The empty sequence
    /// is satisfiable by the empty valuation.
    pub fn satisfiable(&self, formulas: &[Formula]) -> Result<SatResult, OracleError> {
        let mut symbols = BTreeSet::new();
        for f in formulas {
            symbols.extend(f.symbols());
        }
        let vars: Vec<Symbol> = symbols.into_iter().collect();
        if vars.len() > self.config.max_vars {
            return Err(OracleError::ResourceLimit {
                symbols: vars.len(),
                max: self.config.max_vars,
            });
        }
        self.calls.fetch_add(1, Ordering::Relaxed);
        let model = if vars.len() <= self.config.enum_threshold {
            backend::enumeration_model(formulas, &vars)
        } else {
            backend::search_model(formulas, &vars)
        };
        match model {
            Some(v) => {
                for f in formulas {
                    let ok = f
                        .evaluate(&v)
                        .expect("model must be total on the query symbols");
                    assert!(ok, "model returned by the engine fails re-evaluation");
                }
                Ok(SatResult::Sat(v))
            }
            None => Ok(SatResult::Unsat),
        }
    }

    /// Decides `premises ⊨ conclusion` via satisfiability of the premises
    /// plus the negated conclusion.
    pub fn entails(
        &self,
        premises: &[Formula],
        conclusion: &Formula,
    ) -> Result<Certificate, OracleError> {
        let mut query: Vec<Formula> = premises.to_vec();
        query.push(Formula::not(conclusion.clone()));
        match self.satisfiable(&query)? {
            SatResult::Sat(v) => Ok(Certificate::Countermodel(v)),
            SatResult::Unsat => Ok(Certificate::Entailed),
        }
    }

    pub fn decide(&self, query: &EntailmentQuery) -> Result<Certificate, OracleError> {
        self.entails(&query.premises, &query.conclusion)
    }

    /// True iff the formula holds under every valuation.
    pub fn valid(&self, formula: &Formula) -> Result<bool, OracleError> {
        Ok(self.entails(&[], formula)?.is_entailed())
    }

    /// True iff each member of either theory is entailed by the other
    /// theory's members, i.e. the theories have the same models.
    pub fn equivalent_theories(
        &self,
        left: &Theory,
        right: &Theory,
    ) -> Result<TheoryEquivalence, OracleError> {
        for f in right.iter() {
            if let Certificate::Countermodel(v) = self.entails(left.formulas(), f)? {
                return Ok(TheoryEquivalence::NotEquivalent {
                    direction: Direction::LeftToRight,
                    formula: f.clone(),
                    countermodel: v,
                });
            }
        }
        for f in left.iter() {
            if let Certificate::Countermodel(v) = self.entails(right.formulas(), f)? {
                return Ok(TheoryEquivalence::NotEquivalent {
                    direction: Direction::RightToLeft,
                    formula: f.clone(),
                    countermodel: v,
                });
            }
        }
        Ok(TheoryEquivalence::Equivalent)
    }

    /// Checks each member against the rest, by position: a duplicated
    /// formula keeps its other occurrence among the premises, so
    /// duplicates are never independent.
    pub fn independent(&self, theory: &Theory) -> Result<IndependenceReport, OracleError> {
        let formulas = theory.formulas();
        let mut entries = Vec::with_capacity(formulas.len());
        for (i, f) in formulas.iter().enumerate() {
            let mut query: Vec<Formula> = Vec::with_capacity(formulas.len());
            query.extend(
                formulas
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, g)| g.clone()),
            );
            query.push(Formula::not(f.clone()));
            let entry = match self.satisfiable(&query)? {
                SatResult::Sat(v) => IndependenceEntry {
                    independent: true,
                    witness: Some(v),
                },
                SatResult::Unsat => IndependenceEntry {
                    independent: false,
                    witness: None,
                },
            };
            entries.push(entry);
        }
        Ok(IndependenceReport { entries })
    }
}
