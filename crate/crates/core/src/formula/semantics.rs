//! Semantic operations: evaluation, canonical forms, essential symbols,
//! and variable forgetting (projection).
//!
//! Canonical forms are Shannon expansions over the name-ordered essential
//! symbols, simplified by the fixed rewrite set (constant folding for
//! `~`/`&`/`|` plus collapse of equal branches). Equal canonical forms
//! coincide exactly with logical equivalence over the joint symbols.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use super::{EvalError, Formula, Symbol, Valuation};

/// Whether forgotten variables are eliminated existentially (disjunction
/// of cofactors, the strongest consequence over the remaining symbols) or
/// universally (conjunction of cofactors, the weakest sufficient formula).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ForgetMode {
    Exists,
    Forall,
}

impl Formula {
    /// Classical truth-table evaluation. Every symbol of the formula must
    /// be defined by the valuation; no short-circuiting, so a missing
    /// symbol is reported even under a constant-valued sibling.
    pub fn evaluate(&self, v: &Valuation) -> Result<bool, EvalError> {
        match self {
            Formula::Var(s) => v.get(s).ok_or_else(|| EvalError::UndefinedSymbol(s.clone())),
            Formula::True => Ok(true),
            Formula::False => Ok(false),
            Formula::Not(f) => Ok(!f.evaluate(v)?),
            Formula::And(a, b) => {
                let a = a.evaluate(v)?;
                let b = b.evaluate(v)?;
                Ok(a && b)
            }
            Formula::Or(a, b) => {
                let a = a.evaluate(v)?;
                let b = b.evaluate(v)?;
                Ok(a || b)
            }
            Formula::Implies(a, b) => {
                let a = a.evaluate(v)?;
                let b = b.evaluate(v)?;
                Ok(!a || b)
            }
            Formula::Iff(a, b) => {
                let a = a.evaluate(v)?;
                let b = b.evaluate(v)?;
                Ok(a == b)
            }
        }
    }

    /// Total evaluation through a symbol lookup; callers guarantee the
    /// lookup covers every symbol of the formula.
    pub(crate) fn eval_with<F: Fn(&Symbol) -> bool>(&self, lookup: &F) -> bool {
        match self {
            Formula::Var(s) => lookup(s),
            Formula::True => true,
            Formula::False => false,
            Formula::Not(f) => !f.eval_with(lookup),
            Formula::And(a, b) => a.eval_with(lookup) && b.eval_with(lookup),
            Formula::Or(a, b) => a.eval_with(lookup) || b.eval_with(lookup),
            Formula::Implies(a, b) => !a.eval_with(lookup) || b.eval_with(lookup),
            Formula::Iff(a, b) => a.eval_with(lookup) == b.eval_with(lookup),
        }
    }

    /// The symbols the formula's truth value actually depends on: those
    /// whose two cofactors are not logically equivalent.
    pub fn essential_symbols(&self) -> BTreeSet<Symbol> {
        let vars = sorted_symbols(self);
        let table = truth_table(self, &vars);
        let n = vars.len();
        let mut out = BTreeSet::new();
        for (j, var) in vars.iter().enumerate() {
            let bit = 1usize << (n - 1 - j);
            let differs = (0..table.len())
                .filter(|i| i & bit == 0)
                .any(|i| table[i] != table[i | bit]);
            if differs {
                out.insert(var.clone());
            }
        }
        out
    }

    /// Rewrites to the canonical form: a deterministic, semantics-equal
    /// formula mentioning exactly the essential symbols. Two formulas have
    /// equal canonical forms iff they are logically equivalent.
    pub fn canonicalize(&self) -> Formula {
        let vars = sorted_symbols(self);
        let table = truth_table(self, &vars);
        formula_from_table(&vars, &table)
    }

    /// Eliminates the symbols of `hide` from the formula by quantifying
    /// each cofactor pair per `mode`. The result is canonical, mentions no
    /// symbol of `hide`, and its symbols are exactly its essential ones.
    pub fn forget(&self, hide: &BTreeSet<Symbol>, mode: ForgetMode) -> Formula {
        let vars = sorted_symbols(self);
        let keep: Vec<Symbol> = vars.iter().filter(|v| !hide.contains(v)).cloned().collect();
        if keep.len() == vars.len() {
            return self.canonicalize();
        }
        let table = truth_table(self, &vars);
        let init = match mode {
            ForgetMode::Exists => false,
            ForgetMode::Forall => true,
        };
        let mut projected = vec![init; 1 << keep.len()];
        // position of each kept variable's bit within the projected index
        let kept_bits: Vec<(usize, usize)> = vars
            .iter()
            .enumerate()
            .filter(|(_, v)| !hide.contains(*v))
            .enumerate()
            .map(|(k, (j, _))| (vars.len() - 1 - j, keep.len() - 1 - k))
            .collect();
        for (i, &value) in table.iter().enumerate() {
            let mut k_idx = 0usize;
            for &(src_bit, dst_bit) in &kept_bits {
                if i & (1 << src_bit) != 0 {
                    k_idx |= 1 << dst_bit;
                }
            }
            match mode {
                ForgetMode::Exists => projected[k_idx] |= value,
                ForgetMode::Forall => projected[k_idx] &= value,
            }
        }
        formula_from_table(&keep, &projected)
    }

    /// Constant folding over all connectives; used to strip `true`/`false`
    /// leaves before clause translation and during shrinking.
    pub(crate) fn const_fold(&self) -> Formula {
        match self {
            Formula::Var(_) | Formula::True | Formula::False => self.clone(),
            Formula::Not(f) => match f.const_fold() {
                Formula::True => Formula::False,
                Formula::False => Formula::True,
                g => Formula::not(g),
            },
            Formula::And(a, b) => match (a.const_fold(), b.const_fold()) {
                (Formula::False, _) | (_, Formula::False) => Formula::False,
                (Formula::True, g) | (g, Formula::True) => g,
                (a, b) => Formula::and(a, b),
            },
            Formula::Or(a, b) => match (a.const_fold(), b.const_fold()) {
                (Formula::True, _) | (_, Formula::True) => Formula::True,
                (Formula::False, g) | (g, Formula::False) => g,
                (a, b) => Formula::or(a, b),
            },
            Formula::Implies(a, b) => match (a.const_fold(), b.const_fold()) {
                (Formula::False, _) | (_, Formula::True) => Formula::True,
                (Formula::True, g) => g,
                (g, Formula::False) => Formula::not(g),
                (a, b) => Formula::implies(a, b),
            },
            Formula::Iff(a, b) => match (a.const_fold(), b.const_fold()) {
                (Formula::True, g) | (g, Formula::True) => g,
                (Formula::False, g) | (g, Formula::False) => Formula::not(g).const_fold(),
                (a, b) => Formula::iff(a, b),
            },
        }
    }
}

pub(crate) fn sorted_symbols(f: &Formula) -> Vec<Symbol> {
    f.symbols().into_iter().collect()
}

/// Truth table of `f` over `vars` (which must cover its symbols). Row `i`
/// assigns `vars[j]` the bit `n-1-j` of `i`, so row order is lexicographic
/// over the name-ordered variables with `false` before `true`.
pub(crate) fn truth_table(f: &Formula, vars: &[Symbol]) -> Vec<bool> {
    let n = vars.len();
    debug_assert!(n < usize::BITS as usize);
    let positions: BTreeMap<&Symbol, usize> = vars.iter().enumerate().map(|(j, v)| (v, j)).collect();
    (0..1usize << n)
        .map(|i| f.eval_with(&|s: &Symbol| i & (1 << (n - 1 - positions[s])) != 0))
        .collect()
}

/// The valuation encoded by row `bits` of a table over `vars`.
pub(crate) fn valuation_from_bits(vars: &[Symbol], bits: usize) -> Valuation {
    let n = vars.len();
    vars.iter()
        .enumerate()
        .map(|(j, v)| (v.clone(), bits & (1 << (n - 1 - j)) != 0))
        .collect()
}

/// Shannon expansion of a truth table into a formula, splitting on
/// `vars[0]` first. Branches that agree collapse, so the output mentions
/// exactly the variables the table depends on.
pub(crate) fn formula_from_table(vars: &[Symbol], table: &[bool]) -> Formula {
    debug_assert_eq!(table.len(), 1 << vars.len());
    if vars.is_empty() {
        return if table[0] { Formula::True } else { Formula::False };
    }
    let half = table.len() / 2;
    let lo = formula_from_table(&vars[1..], &table[..half]);
    let hi = formula_from_table(&vars[1..], &table[half..]);
    if lo == hi {
        return lo;
    }
    let var = Formula::Var(vars[0].clone());
    let pos = match hi {
        Formula::True => var.clone(),
        Formula::False => Formula::False,
        h => Formula::and(var.clone(), h),
    };
    let neg = match lo {
        Formula::True => Formula::not(var),
        Formula::False => Formula::False,
        l => Formula::and(Formula::not(var), l),
    };
    match (pos, neg) {
        (Formula::False, n) => n,
        (p, Formula::False) => p,
        (p, n) => Formula::or(p, n),
    }
}
