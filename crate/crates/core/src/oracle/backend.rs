//! The two decision engines.
//!
//! `enumeration_model` walks every assignment in lexicographic order and
//! is the trusted reference. `search_model` translates to clauses and runs
//! a backtracking search with unit propagation, branching on the least
//! unassigned query symbol with `false` first — which makes it return the
//! same lexicographically least model the enumerator finds.

use std::collections::BTreeMap;

use crate::formula::semantics::valuation_from_bits;
use crate::formula::{Formula, Symbol, Valuation};

/// First satisfying assignment over `vars` in lexicographic order (`false`
/// before `true`, `vars[0]` most significant), or `None` if unsatisfiable.
/// `vars` must cover the symbols of all formulas.
pub fn enumeration_model(formulas: &[Formula], vars: &[Symbol]) -> Option<Valuation> {
    let n = vars.len();
    let positions: BTreeMap<&Symbol, usize> =
        vars.iter().enumerate().map(|(j, v)| (v, j)).collect();
    (0..1usize << n)
        .find(|&bits| {
            formulas
                .iter()
                .all(|f| f.eval_with(&|s: &Symbol| bits & (1 << (n - 1 - positions[s])) != 0))
        })
        .map(|bits| valuation_from_bits(vars, bits))
}

/// Clause-based search over the same query. Formulas are constant-folded,
/// translated to clauses with fresh definition variables, and solved by
/// backtracking with unit propagation.
pub fn search_model(formulas: &[Formula], vars: &[Symbol]) -> Option<Valuation> {
    let n = vars.len();
    let positions: BTreeMap<&Symbol, usize> =
        vars.iter().enumerate().map(|(j, v)| (v, j)).collect();
    let mut builder = ClauseBuilder {
        next_var: n,
        clauses: Vec::new(),
    };
    for f in formulas {
        match f.const_fold() {
            Formula::True => {}
            Formula::False => return None,
            folded => {
                let root = builder.encode(&folded, &positions);
                builder.clauses.push(vec![root]);
            }
        }
    }
    let mut solver = Solver {
        clauses: builder.clauses,
        assigns: vec![None; builder.next_var],
        trail: Vec::new(),
        query_vars: n,
    };
    if !solver.solve() {
        return None;
    }
    Some(
        vars.iter()
            .enumerate()
            .map(|(j, v)| (v.clone(), solver.assigns[j] == Some(true)))
            .collect(),
    )
}

/// Literals are `var + 1` with sign; variable indices below the query-var
/// count are the query symbols, the rest are definition variables.
type Lit = i32;

fn lit(var: usize, positive: bool) -> Lit {
    let l = var as Lit + 1;
    if positive {
        l
    } else {
        -l
    }
}

struct ClauseBuilder {
    next_var: usize,
    clauses: Vec<Vec<Lit>>,
}

impl ClauseBuilder {
    fn fresh(&mut self) -> Lit {
        let v = self.next_var;
        self.next_var += 1;
        lit(v, true)
    }

    /// Returns a literal equivalued with `f`, emitting the defining
    /// clauses in both directions so the definition variables are forced
    /// by propagation once the query variables are set. `f` contains no
    /// constants (it has been folded).
    fn encode(&mut self, f: &Formula, positions: &BTreeMap<&Symbol, usize>) -> Lit {
        match f {
            Formula::Var(s) => lit(positions[s], true),
            Formula::Not(g) => -self.encode(g, positions),
            Formula::And(a, b) => {
                let a = self.encode(a, positions);
                let b = self.encode(b, positions);
                let x = self.fresh();
                self.clauses.push(vec![-x, a]);
                self.clauses.push(vec![-x, b]);
                self.clauses.push(vec![x, -a, -b]);
                x
            }
            Formula::Or(a, b) => {
                let a = self.encode(a, positions);
                let b = self.encode(b, positions);
                let x = self.fresh();
                self.clauses.push(vec![-x, a, b]);
                self.clauses.push(vec![x, -a]);
                self.clauses.push(vec![x, -b]);
                x
            }
            Formula::Implies(a, b) => {
                let a = self.encode(a, positions);
                let b = self.encode(b, positions);
                let x = self.fresh();
                self.clauses.push(vec![-x, -a, b]);
                self.clauses.push(vec![x, a]);
                self.clauses.push(vec![x, -b]);
                x
            }
            Formula::Iff(a, b) => {
                let a = self.encode(a, positions);
                let b = self.encode(b, positions);
                let x = self.fresh();
                self.clauses.push(vec![-x, -a, b]);
                self.clauses.push(vec![-x, a, -b]);
                self.clauses.push(vec![x, a, b]);
                self.clauses.push(vec![x, -a, -b]);
                x
            }
            Formula::True | Formula::False => {
                unreachable!("constants are folded away before encoding")
            }
        }
    }
}

struct Frame {
    var: usize,
    /// A decision still has its `true` branch unexplored; propagated and
    /// flipped assignments do not.
    decision: bool,
}

struct Solver {
    clauses: Vec<Vec<Lit>>,
    assigns: Vec<Option<bool>>,
    trail: Vec<Frame>,
    query_vars: usize,
}

enum Propagation {
    Clean,
    Conflict,
}

impl Solver {
    fn lit_value(&self, l: Lit) -> Option<bool> {
        let v = self.assigns[(l.unsigned_abs() - 1) as usize]?;
        Some(if l > 0 { v } else { !v })
    }

    fn assign(&mut self, l: Lit, decision: bool) {
        let var = (l.unsigned_abs() - 1) as usize;
        self.assigns[var] = Some(l > 0);
        self.trail.push(Frame { var, decision });
    }

    fn propagate(&mut self) -> Propagation {
        loop {
            let mut changed = false;
            for ci in 0..self.clauses.len() {
                let mut unassigned: Option<Lit> = None;
                let mut unassigned_count = 0;
                let mut satisfied = false;
                for &l in &self.clauses[ci] {
                    match self.lit_value(l) {
                        Some(true) => {
                            satisfied = true;
                            break;
                        }
                        Some(false) => {}
                        None => {
                            unassigned = Some(l);
                            unassigned_count += 1;
                        }
                    }
                }
                if satisfied {
                    continue;
                }
                match unassigned_count {
                    0 => return Propagation::Conflict,
                    1 => {
                        self.assign(unassigned.unwrap(), false);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return Propagation::Clean;
            }
        }
    }

    /// Undo to the most recent open decision and take its `true` branch.
    /// False when no decision is left to flip.
    fn backtrack(&mut self) -> bool {
        while let Some(frame) = self.trail.pop() {
            self.assigns[frame.var] = None;
            if frame.decision {
                self.assign(lit(frame.var, true), false);
                return true;
            }
        }
        false
    }

    fn next_decision_var(&self) -> Option<usize> {
        (0..self.assigns.len()).find(|&v| self.assigns[v].is_none())
    }

    fn solve(&mut self) -> bool {
        loop {
            match self.propagate() {
                Propagation::Conflict => {
                    if !self.backtrack() {
                        return false;
                    }
                }
                Propagation::Clean => {
                    // query variables first keeps the found model minimal
                    // in the enumeration order; definition variables are
                    // forced once the query variables are total
                    match self.next_decision_var() {
                        Some(v) => {
                            debug_assert!(
                                v < self.query_vars,
                                "definition variables should be forced by propagation"
                            );
                            self.assign(lit(v, false), true);
                        }
                        None => return true,
                    }
                }
            }
        }
    }
}
