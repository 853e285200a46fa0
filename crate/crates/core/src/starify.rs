//! Replacing a theory by an equivalent one whose entailments are
//! controlled by symbol coverage.
//!
//! The target condition on a theory: whenever members' combined symbols
//! fail to cover another member's symbols, they must not entail it.
//! [`starify`] achieves it by enumerating the subsets `V` of the universe
//! in order of increasing size (ties lexicographic) and keeping, per `V`,
//! the strongest consequence of the theory over exactly `V` — unless it
//! is trivial, supported by fewer symbols, or already entailed by what
//! was kept before. Every consequence over symbols inside `V` follows
//! from the kept projection, which is what makes the coverage condition
//! go through.
//!
//! [`check_star`] is the brute-force checker used as the safety net: it
//! enumerates every member against every premise subset that fails to
//! cover its symbols.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use thiserror::Error;

use crate::formula::semantics::{formula_from_table, truth_table};
use crate::formula::{Formula, Symbol, Theory};
use crate::oracle::{Oracle, OracleError, SatResult};

/// Default cap on the universe size for [`starify`]; the construction
/// enumerates all `2^|universe|` symbol subsets.
pub const DEFAULT_STARIFY_CAP: usize = 14;

/// Default cap on the member count for [`check_star`]; the checker
/// enumerates all premise subsets per member.
pub const DEFAULT_STAR_CHECK_CAP: usize = 12;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum StarifyError {
    #[error("universe has {symbols} symbols, above the cap of {cap}")]
    ResourceLimit { symbols: usize, cap: usize },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum StarCheckError {
    #[error("theory has {formulas} members, above the cap of {cap}")]
    ResourceLimit { formulas: usize, cap: usize },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// The layered view of the rewrite: kept consequences grouped by how many
/// symbols they use, together with the theory they came from. A layer-`n`
/// member mentions exactly its `n` essential symbols, is entailed by the
/// source, and is not entailed by the layers below it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredTheory {
    layers: BTreeMap<usize, Vec<Formula>>,
    source: Theory,
}

impl LayeredTheory {
    pub fn layers(&self) -> &BTreeMap<usize, Vec<Formula>> {
        &self.layers
    }

    pub fn source(&self) -> &Theory {
        &self.source
    }

    /// Flattens in layer order, then subset order within a layer; the
    /// universe is the source's.
    pub fn flatten(&self) -> Theory {
        let formulas: Vec<Formula> = self.layers.values().flatten().cloned().collect();
        Theory::with_universe(formulas, self.source.universe().clone())
            .expect("members only mention universe symbols")
    }
}

/// Computes the layered rewrite of `theory`. An unsatisfiable input
/// collapses to the single member `false` (in layer zero).
pub fn starify_layers(
    oracle: &Oracle,
    theory: &Theory,
    cap: usize,
) -> Result<LayeredTheory, StarifyError> {
    let universe: Vec<Symbol> = theory.universe().iter().cloned().collect();
    let n = universe.len();
    if n > cap {
        return Err(StarifyError::ResourceLimit { symbols: n, cap });
    }
    let mut layers: BTreeMap<usize, Vec<Formula>> = BTreeMap::new();
    if oracle.satisfiable(theory.formulas())? == SatResult::Unsat {
        layers.insert(0, vec![Formula::False]);
        return Ok(LayeredTheory {
            layers,
            source: theory.clone(),
        });
    }

    let conjunction = theory.conjunction();
    let master = truth_table(&conjunction, &universe);
    let mut included: Vec<Formula> = Vec::new();
    for keep_positions in subsets_by_size(n) {
        let candidate = project_exists(&master, &universe, &keep_positions);
        if candidate == Formula::True {
            continue;
        }
        let v: BTreeSet<Symbol> = keep_positions
            .iter()
            .map(|&j| universe[j].clone())
            .collect();
        if candidate.essential_symbols() != v {
            continue;
        }
        if oracle.entails(&included, &candidate)?.is_entailed() {
            continue;
        }
        included.push(candidate.clone());
        layers.entry(v.len()).or_default().push(candidate);
    }
    Ok(LayeredTheory {
        layers,
        source: theory.clone(),
    })
}

/// Rewrites `theory` into an equivalent theory satisfying the coverage
/// condition: the flattened [`LayeredTheory`]. Output members appear in
/// subset order — by symbol-set size, then lexicographically — and each
/// mentions exactly its essential symbols, so members have pairwise
/// distinct symbol sets.
pub fn starify(oracle: &Oracle, theory: &Theory, cap: usize) -> Result<Theory, StarifyError> {
    Ok(starify_layers(oracle, theory, cap)?.flatten())
}

/// All subsets of `0..n` ordered by size, then lexicographically by the
/// ascending position sequence.
fn subsets_by_size(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(1 << n);
    for size in 0..=n {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            out.push(combo.clone());
            if !next_combination(&mut combo, n) {
                break;
            }
        }
    }
    out
}

/// Advances `combo` to the next ascending `k`-combination of `0..n` in
/// lexicographic order; false once exhausted.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Existential projection of a truth table over `universe` down to the
/// kept variable positions, rebuilt as a canonical formula.
fn project_exists(master: &[bool], universe: &[Symbol], keep_positions: &[usize]) -> Formula {
    let n = universe.len();
    let k = keep_positions.len();
    let mut projected = vec![false; 1 << k];
    let bit_pairs: Vec<(usize, usize)> = keep_positions
        .iter()
        .enumerate()
        .map(|(idx, &j)| (n - 1 - j, k - 1 - idx))
        .collect();
    for (i, &value) in master.iter().enumerate() {
        if !value {
            continue;
        }
        let mut k_idx = 0usize;
        for &(src_bit, dst_bit) in &bit_pairs {
            if i & (1 << src_bit) != 0 {
                k_idx |= 1 << dst_bit;
            }
        }
        projected[k_idx] = true;
    }
    let kept: Vec<Symbol> = keep_positions.iter().map(|&j| universe[j].clone()).collect();
    formula_from_table(&kept, &projected)
}

/// Outcome of the brute-force coverage check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StarCheck {
    Ok,
    Violation(StarViolation),
}

impl StarCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, StarCheck::Ok)
    }
}

/// A member entailed by premises whose symbols do not cover its own;
/// `uncovered` lists the member symbols the premises miss.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarViolation {
    pub index: usize,
    pub formula: Formula,
    pub premise_indices: Vec<usize>,
    pub premises: Vec<Formula>,
    pub uncovered: BTreeSet<Symbol>,
}

/// Checks the coverage condition by enumerating, for every member (by
/// position) and every subset of the other members (by ascending
/// bitmask), whether a non-covering premise set entails the member. The
/// first offense in that order is reported.
pub fn check_star(
    oracle: &Oracle,
    theory: &Theory,
    cap: usize,
) -> Result<StarCheck, StarCheckError> {
    if theory.len() > cap {
        return Err(StarCheckError::ResourceLimit {
            formulas: theory.len(),
            cap,
        });
    }
    let member_symbols: Vec<BTreeSet<Symbol>> =
        theory.iter().map(|f| f.symbols()).collect();
    for (i, psi) in theory.iter().enumerate() {
        let rest: Vec<usize> = (0..theory.len()).filter(|&j| j != i).collect();
        for mask in 0u64..(1u64 << rest.len()) {
            let chosen: Vec<usize> = rest
                .iter()
                .enumerate()
                .filter(|(bit, _)| mask & (1 << bit) != 0)
                .map(|(_, &j)| j)
                .collect();
            let mut union: BTreeSet<Symbol> = BTreeSet::new();
            for &j in &chosen {
                union.extend(member_symbols[j].iter().cloned());
            }
            if member_symbols[i].is_subset(&union) {
                continue;
            }
            let premises: Vec<Formula> = chosen
                .iter()
                .map(|&j| theory.formulas()[j].clone())
                .collect();
            if oracle.entails(&premises, psi)?.is_entailed() {
                return Ok(StarCheck::Violation(StarViolation {
                    index: i,
                    formula: psi.clone(),
                    premise_indices: chosen,
                    premises,
                    uncovered: &member_symbols[i] - &union,
                }));
            }
        }
    }
    Ok(StarCheck::Ok)
}
