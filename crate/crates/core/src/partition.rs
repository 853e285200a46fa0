//! Symbol partitioning of a theory.
//!
//! Anchors are chosen greedily: the first formula, then repeatedly the
//! least-index formula containing a symbol outside the coverage so far.
//! Each anchor `alpha` owns the nonempty set `N_alpha` of symbols it
//! introduces; the `N_alpha` are pairwise disjoint and cover every member
//! symbol. Every member joins the block of its largest divisor — the
//! greatest `beta` whose new symbols it mentions — which makes the blocks
//! a partition of the theory.
//!
//! From a partition the transformed sets are built: one guarded
//! implication per anchor (antecedent: the strictly-dividing earlier
//! anchors) and one per non-anchor member (antecedent: all its divisors).

use std::collections::BTreeSet;

use thiserror::Error;

use crate::formula::{Formula, Symbol, Theory};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("cannot partition an empty theory")]
    EmptyTheory,
    #[error("member {index} ({formula}) has no symbols; constant formulas must be filtered out first")]
    SymbolFreeFormula { index: usize, formula: Formula },
    #[error("no anchor with index {index}")]
    UnknownAnchor { index: usize },
}

/// One anchor: the member at `theory_pos` and the symbols it introduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Anchor {
    pub theory_pos: usize,
    pub new_symbols: BTreeSet<Symbol>,
}

/// The result of partitioning: anchors in selection order, blocks of
/// member positions per anchor, and the total symbol coverage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionState {
    formulas: Vec<Formula>,
    anchors: Vec<Anchor>,
    blocks: Vec<Vec<usize>>,
    covered: BTreeSet<Symbol>,
}

impl PartitionState {
    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }

    pub fn anchors(&self) -> &[Anchor] {
        &self.anchors
    }

    pub fn anchor_formula(&self, alpha: usize) -> Result<&Formula, PartitionError> {
        let anchor = self
            .anchors
            .get(alpha)
            .ok_or(PartitionError::UnknownAnchor { index: alpha })?;
        Ok(&self.formulas[anchor.theory_pos])
    }

    /// Member positions of block `alpha`, in input order.
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn covered(&self) -> &BTreeSet<Symbol> {
        &self.covered
    }

    /// The relation `beta | psi`: does `psi` mention a symbol that anchor
    /// `beta` introduced?
    pub fn divides(&self, beta: usize, psi: &Formula) -> Result<bool, PartitionError> {
        let anchor = self
            .anchors
            .get(beta)
            .ok_or(PartitionError::UnknownAnchor { index: beta })?;
        Ok(psi.symbols().iter().any(|s| anchor.new_symbols.contains(s)))
    }

    /// The relation `beta || phi_alpha`: `beta` strictly precedes `alpha`
    /// and divides its anchor formula.
    pub fn strictly_divides(&self, beta: usize, alpha: usize) -> Result<bool, PartitionError> {
        let formula = self.anchor_formula(alpha)?.clone();
        Ok(beta < alpha && self.divides(beta, &formula)?)
    }

    /// All anchor indices dividing `psi`, ascending. Nonempty for every
    /// member of the partitioned theory.
    pub fn divisors(&self, psi: &Formula) -> Vec<usize> {
        let symbols = psi.symbols();
        self.anchors
            .iter()
            .enumerate()
            .filter(|(_, a)| symbols.iter().any(|s| a.new_symbols.contains(s)))
            .map(|(beta, _)| beta)
            .collect()
    }
}

/// Partitions the theory. Every member must have at least one symbol, and
/// the theory must be nonempty.
pub fn build_partition(theory: &Theory) -> Result<PartitionState, PartitionError> {
    let formulas: Vec<Formula> = theory.formulas().to_vec();
    if formulas.is_empty() {
        return Err(PartitionError::EmptyTheory);
    }
    let member_symbols: Vec<BTreeSet<Symbol>> = formulas.iter().map(|f| f.symbols()).collect();
    for (index, symbols) in member_symbols.iter().enumerate() {
        if symbols.is_empty() {
            return Err(PartitionError::SymbolFreeFormula {
                index,
                formula: formulas[index].clone(),
            });
        }
    }
    let all_symbols: BTreeSet<Symbol> = member_symbols
        .iter()
        .flat_map(|s| s.iter().cloned())
        .collect();

    let mut anchors: Vec<Anchor> = Vec::new();
    let mut covered: BTreeSet<Symbol> = BTreeSet::new();
    while covered.len() < all_symbols.len() {
        let pos = member_symbols
            .iter()
            .position(|s| !s.is_subset(&covered))
            .expect("uncovered symbols always come from some member");
        let new_symbols: BTreeSet<Symbol> = &member_symbols[pos] - &covered;
        covered.extend(new_symbols.iter().cloned());
        anchors.push(Anchor {
            theory_pos: pos,
            new_symbols,
        });
    }

    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); anchors.len()];
    for (pos, symbols) in member_symbols.iter().enumerate() {
        let home = anchors
            .iter()
            .enumerate()
            .rev()
            .find(|(_, a)| symbols.iter().any(|s| a.new_symbols.contains(s)))
            .map(|(alpha, _)| alpha)
            .expect("every member symbol is covered by some anchor");
        blocks[home].push(pos);
    }

    Ok(PartitionState {
        formulas,
        anchors,
        blocks,
        covered,
    })
}

/// One guarded implication per anchor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CEntry {
    pub alpha: usize,
    pub formula: Formula,
}

/// One guarded implication per non-anchor member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DEntry {
    pub alpha: usize,
    pub theory_pos: usize,
    pub source: Formula,
    pub formula: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformedSets {
    pub c_entries: Vec<CEntry>,
    pub d_entries: Vec<DEntry>,
}

impl TransformedSets {
    pub fn c_formulas(&self) -> Vec<Formula> {
        self.c_entries.iter().map(|e| e.formula.clone()).collect()
    }

    pub fn d_formulas(&self) -> Vec<Formula> {
        self.d_entries.iter().map(|e| e.formula.clone()).collect()
    }
}

/// Builds the two transformed sets. For anchor `alpha` the entry is
/// `(/\ of strictly dividing anchors) -> phi_alpha`, or `phi_alpha` bare
/// when nothing strictly divides it. For a non-anchor member the entry is
/// `(/\ of all dividing anchors) -> member`. Antecedents fold left over
/// ascending anchor index.
pub fn build_transformed(state: &PartitionState) -> TransformedSets {
    let mut c_entries = Vec::with_capacity(state.anchors().len());
    for (alpha, anchor) in state.anchors().iter().enumerate() {
        let phi = state.formulas()[anchor.theory_pos].clone();
        let dividing: Vec<Formula> = state
            .divisors(&phi)
            .into_iter()
            .filter(|&beta| beta < alpha)
            .map(|beta| {
                state.formulas()[state.anchors()[beta].theory_pos].clone()
            })
            .collect();
        let formula = if dividing.is_empty() {
            phi
        } else {
            Formula::implies(Formula::conjoin(dividing), phi)
        };
        c_entries.push(CEntry { alpha, formula });
    }

    let mut d_entries = Vec::new();
    for (alpha, block) in state.blocks().iter().enumerate() {
        let anchor_pos = state.anchors()[alpha].theory_pos;
        for &pos in block {
            if pos == anchor_pos {
                continue;
            }
            let source = state.formulas()[pos].clone();
            let dividing: Vec<Formula> = state
                .divisors(&source)
                .into_iter()
                .map(|beta| state.formulas()[state.anchors()[beta].theory_pos].clone())
                .collect();
            debug_assert!(!dividing.is_empty(), "every member has a divisor");
            let formula = Formula::implies(Formula::conjoin(dividing), source.clone());
            d_entries.push(DEntry {
                alpha,
                theory_pos: pos,
                source,
                formula,
            });
        }
    }

    TransformedSets { c_entries, d_entries }
}
