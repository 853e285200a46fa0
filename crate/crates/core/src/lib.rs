//! Turn a finite propositional theory into an equivalent independent
//! axiomatization, certifying every step against a semantic oracle.
//!
//! The pieces, bottom up:
//!
//! - [`formula`]: ASTs, parsing and printing, evaluation, canonical forms,
//!   and variable forgetting.
//! - [`oracle`]: satisfiability / entailment / equivalence / independence
//!   decisions with concrete model certificates.
//! - [`interpolation`]: strongest and weakest interpolants for entailed
//!   pairs, computed by forgetting.
//! - [`starify`]: replace a theory by an equivalent one in which symbol
//!   coverage controls entailment, via size-layered strongest
//!   consequences.
//! - [`partition`]: split a theory into blocks by the new symbols each
//!   anchor formula introduces, and build the guarded implication sets
//!   the merge step consumes.
//! - [`pipelines`]: the two end-to-end constructions (the chain transform
//!   and the starify/partition/merge route) plus final certification.
//! - [`genfuzz`]: seeded random theories, entailed pairs, and shrinking,
//!   shared by the test suites and the CLI.

pub mod formula;
pub mod genfuzz;
pub mod interpolation;
pub mod oracle;
pub mod partition;
pub mod pipelines;
pub mod starify;

pub use formula::{Formula, Symbol, Theory, Valuation};
pub use oracle::{Certificate, Oracle, OracleConfig, SatResult};
