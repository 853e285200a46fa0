//! Propositional formulas: symbols, ASTs, theories, and valuations.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

mod parser;
pub(crate) mod semantics;
mod text;

pub use parser::{parse, ParseError};
pub use semantics::ForgetMode;
pub use text::TheoryTextError;

/// A propositional variable, identified by name.
///
/// Names are ASCII identifiers: a letter followed by letters, digits, or
/// underscores. Two symbols are equal iff their names are equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(String);

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("invalid symbol name {0:?}: must be a letter followed by letters, digits, or underscores")]
pub struct InvalidSymbolName(pub String);

impl Symbol {
    pub fn new(name: &str) -> Result<Symbol, InvalidSymbolName> {
        let mut chars = name.chars();
        let valid = match chars.next() {
            Some(c) if c.is_ascii_alphabetic() => {
                chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
            }
            _ => false,
        };
        if valid {
            Ok(Symbol(name.to_string()))
        } else {
            Err(InvalidSymbolName(name.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A propositional formula over the connectives `~ & | -> <->` plus the
/// constants `true` and `false`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Var(Symbol),
    True,
    False,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(s: Symbol) -> Formula {
        Formula::Var(s)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    /// Left-fold a nonempty sequence into a conjunction, `true` if empty.
    pub fn conjoin<I: IntoIterator<Item = Formula>>(formulas: I) -> Formula {
        let mut it = formulas.into_iter();
        match it.next() {
            None => Formula::True,
            Some(first) => it.fold(first, Formula::and),
        }
    }

    /// The set of symbols occurring at `Var` leaves (syntactic, one traversal).
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Formula::Var(s) => {
                out.insert(s.clone());
            }
            Formula::True | Formula::False => {}
            Formula::Not(f) => f.collect_symbols(out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.collect_symbols(out);
                b.collect_symbols(out);
            }
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            Formula::Not(..) => 5,
            Formula::Var(_) | Formula::True | Formula::False => 6,
        }
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, parens: bool) -> fmt::Result {
        if parens {
            write!(f, "({})", self)
        } else {
            write!(f, "{}", self)
        }
    }
}

/// Prints with minimal parentheses. `&`/`|` associate left, `->`/`<->`
/// right, so re-parsing the output reproduces the exact tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Var(s) => write!(f, "{s}"),
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Not(inner) => {
                f.write_str("~")?;
                inner.fmt_child(f, inner.prec() < 5)
            }
            Formula::And(a, b) => {
                a.fmt_child(f, a.prec() < 4)?;
                f.write_str(" & ")?;
                b.fmt_child(f, b.prec() <= 4)
            }
            Formula::Or(a, b) => {
                a.fmt_child(f, a.prec() < 3)?;
                f.write_str(" | ")?;
                b.fmt_child(f, b.prec() <= 3)
            }
            Formula::Implies(a, b) => {
                a.fmt_child(f, a.prec() <= 2)?;
                f.write_str(" -> ")?;
                b.fmt_child(f, b.prec() < 2)
            }
            Formula::Iff(a, b) => {
                a.fmt_child(f, a.prec() <= 1)?;
                f.write_str(" <-> ")?;
                b.fmt_child(f, b.prec() < 1)
            }
        }
    }
}

/// A total truth assignment over a finite symbol set.
///
/// Evaluation of a formula is defined only when the formula's symbols all
/// lie in the valuation's domain.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Valuation(BTreeMap<Symbol, bool>);

impl Valuation {
    pub fn new() -> Valuation {
        Valuation(BTreeMap::new())
    }

    pub fn set(&mut self, symbol: Symbol, value: bool) {
        self.0.insert(symbol, value);
    }

    pub fn get(&self, symbol: &Symbol) -> Option<bool> {
        self.0.get(symbol).copied()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Symbol> {
        self.0.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, bool)> {
        self.0.iter().map(|(s, v)| (s, *v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Extends the valuation so every symbol of `symbols` is defined,
    /// assigning `false` to the missing ones.
    pub fn extended_with_false<'a, I: IntoIterator<Item = &'a Symbol>>(
        &self,
        symbols: I,
    ) -> Valuation {
        let mut out = self.clone();
        for s in symbols {
            out.0.entry(s.clone()).or_insert(false);
        }
        out
    }
}

impl FromIterator<(Symbol, bool)> for Valuation {
    fn from_iter<I: IntoIterator<Item = (Symbol, bool)>>(iter: I) -> Valuation {
        Valuation(iter.into_iter().collect())
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("valuation does not define symbol {0}")]
    UndefinedSymbol(Symbol),
}

/// An ordered, finite sequence of formulas together with its symbol
/// universe. The universe always contains every member's symbols; the
/// member order is significant to the constructions built on top.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theory {
    formulas: Vec<Formula>,
    universe: BTreeSet<Symbol>,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("universe does not contain symbol {0} used by a member formula")]
pub struct UniverseError(pub Symbol);

impl Theory {
    /// Builds a theory whose universe is exactly the union of the member
    /// symbol sets.
    pub fn new(formulas: Vec<Formula>) -> Theory {
        let mut universe = BTreeSet::new();
        for f in &formulas {
            f.collect_symbols(&mut universe);
        }
        Theory { formulas, universe }
    }

    /// Builds a theory with an explicit universe, which must cover every
    /// member's symbols.
    pub fn with_universe(
        formulas: Vec<Formula>,
        universe: BTreeSet<Symbol>,
    ) -> Result<Theory, UniverseError> {
        for f in &formulas {
            for s in f.symbols() {
                if !universe.contains(&s) {
                    return Err(UniverseError(s));
                }
            }
        }
        Ok(Theory { formulas, universe })
    }

    pub fn empty() -> Theory {
        Theory::new(Vec::new())
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }

    pub fn universe(&self) -> &BTreeSet<Symbol> {
        &self.universe
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Formula> {
        self.formulas.iter()
    }

    /// Left-fold of the members into one conjunction, `true` if empty.
    pub fn conjunction(&self) -> Formula {
        Formula::conjoin(self.formulas.iter().cloned())
    }
}
