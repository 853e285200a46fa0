//! The end-to-end constructions and their certification.
//!
//! Two routes from a theory to an equivalent independent one:
//!
//! - the chain transform ([`tarski_chain`] / [`tarski_transform`]): keep
//!   each formula not entailed by the keepers so far, then guard every
//!   kept formula with the conjunction of its predecessors;
//! - the merge route ([`reznikoff_pipeline`]): make symbol coverage
//!   control entailment ([`crate::starify`]), partition by fresh symbols
//!   ([`crate::partition`]), build the guarded sets, and conjoin each
//!   surplus guarded member onto a distinct anchor entry
//!   ([`reznikoff_merge`]).
//!
//! Either way the result is certified against the *original* input —
//! equivalence in both directions plus a per-member independence witness
//! — so a bug in one stage cannot be cancelled by a later one.

use thiserror::Error;

use crate::formula::{Formula, Theory, Valuation};
use crate::oracle::{Certificate, Direction, Oracle, OracleError, SatResult, TheoryEquivalence};
use crate::partition::{build_partition, build_transformed, PartitionError};
use crate::starify::{starify, StarifyError};

/// The inductive selection: `selected` keeps the least-index formula not
/// entailed by the previously kept ones; `transformed[n]` guards
/// `selected[n]` with the conjunction of `selected[..n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TarskiChain {
    pub selected: Vec<Formula>,
    pub transformed: Vec<Formula>,
}

/// Which construction produced a result.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PipelineMode {
    Tarski,
    Reznikoff,
}

#[derive(Clone, Copy, Debug)]
pub struct PipelineOptions {
    /// Collapse a finite chain into its single conjunction instead of
    /// emitting the guarded sequence.
    pub collapse: bool,
    /// Fall back to the chain transform when the merge route ends up
    /// with more surplus members than anchor entries.
    pub fallback: bool,
    /// Re-check the merge hypotheses explicitly before merging.
    pub paranoid: bool,
    /// Universe-size cap handed to the starify stage.
    pub starify_cap: usize,
}

impl Default for PipelineOptions {
    fn default() -> PipelineOptions {
        PipelineOptions {
            collapse: false,
            fallback: true,
            paranoid: false,
            starify_cap: crate::starify::DEFAULT_STARIFY_CAP,
        }
    }
}

/// Entailment certificates for both directions of an equivalence check,
/// one per formula of the respective side. All entries are `Entailed`
/// when certification succeeded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceCertificates {
    pub input_entails_output: Vec<Certificate>,
    pub output_entails_input: Vec<Certificate>,
}

/// A successful certification: equivalence both ways plus an independence
/// witness per output member (a model of the other members and the
/// member's negation).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certification {
    pub equivalence: EquivalenceCertificates,
    pub independence_witnesses: Vec<Valuation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedResult {
    pub output: Theory,
    pub certification: Certification,
    pub mode: PipelineMode,
    pub fallback_used: bool,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum MergeError {
    #[error("surplus set has {d_len} members but only {c_len} anchor entries are available")]
    SizeError { c_len: usize, d_len: usize },
    #[error("the two sets share the formula {formula}")]
    NotDisjoint { formula: Formula },
    #[error("merge hypothesis violated: anchor entry {index} ({formula}) is entailed by the remaining members")]
    HypothesisViolated { index: usize, formula: Formula },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CertifyError {
    #[error("output is not equivalent to the input: {formula} is not entailed")]
    NotEquivalent {
        direction: Direction,
        formula: Formula,
        countermodel: Valuation,
    },
    #[error("output is not independent: member {index} ({formula}) is entailed by the rest")]
    NotIndependent { index: usize, formula: Formula },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PipelineError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Starify(#[from] StarifyError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Merge(#[from] MergeError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
}

/// Builds the selection chain. Valid formulas are skipped (they are
/// entailed by the empty selection), as is anything entailed by the
/// formulas selected before it; the selection is equivalent to the input.
pub fn tarski_chain(oracle: &Oracle, theory: &Theory) -> Result<TarskiChain, OracleError> {
    let mut selected: Vec<Formula> = Vec::new();
    for f in theory.iter() {
        if oracle.entails(&selected, f)?.is_entailed() {
            continue;
        }
        selected.push(f.clone());
    }
    let transformed = selected
        .iter()
        .enumerate()
        .map(|(n, f)| {
            if n == 0 {
                f.clone()
            } else {
                Formula::implies(Formula::conjoin(selected[..n].iter().cloned()), f.clone())
            }
        })
        .collect();
    Ok(TarskiChain {
        selected,
        transformed,
    })
}

/// Turns a chain into a theory: the guarded sequence (independent by the
/// witness models used to select it), or with `collapse` the single
/// conjunction of the selection — empty chain, empty theory.
pub fn tarski_transform(chain: &TarskiChain, collapse: bool) -> Theory {
    if collapse {
        if chain.selected.is_empty() {
            Theory::empty()
        } else {
            Theory::new(vec![Formula::conjoin(chain.selected.iter().cloned())])
        }
    } else {
        Theory::new(chain.transformed.clone())
    }
}

/// Merges a surplus set `d` into an anchor set `c` by conjoining the
/// `i`-th member of `d` onto the `i`-th member of `c` (the injection is
/// fixed to position order) and keeping the untouched tail of `c`.
///
/// Preconditions: the sets are disjoint as formula sets, `d` is no larger
/// than `c`, and no member of `c` is entailed by the other members of the
/// union — the caller vouches for the last one unless `paranoid` is set.
pub fn reznikoff_merge(
    oracle: &Oracle,
    c: &Theory,
    d: &Theory,
    paranoid: bool,
) -> Result<Theory, MergeError> {
    for f in d.iter() {
        if c.formulas().contains(f) {
            return Err(MergeError::NotDisjoint { formula: f.clone() });
        }
    }
    if d.len() > c.len() {
        return Err(MergeError::SizeError {
            c_len: c.len(),
            d_len: d.len(),
        });
    }
    if paranoid {
        for (i, f) in c.iter().enumerate() {
            let mut premises: Vec<Formula> = c
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, g)| g.clone())
                .collect();
            premises.extend(d.iter().cloned());
            if oracle.entails(&premises, f)?.is_entailed() {
                return Err(MergeError::HypothesisViolated {
                    index: i,
                    formula: f.clone(),
                });
            }
        }
    }
    let mut formulas: Vec<Formula> = Vec::with_capacity(c.len());
    for (psi, target) in d.iter().zip(c.iter()) {
        formulas.push(Formula::and(psi.clone(), target.clone()));
    }
    formulas.extend(c.formulas()[d.len()..].iter().cloned());
    let universe = c.universe() | d.universe();
    Ok(Theory::with_universe(formulas, universe).expect("merge introduces no symbols"))
}

/// Certifies that `output` is equivalent to `input` (member by member,
/// both directions) and independent (every member has a countermodel
/// against the rest). Any failure aborts with the offending formula.
pub fn certify(
    oracle: &Oracle,
    input: &Theory,
    output: &Theory,
) -> Result<Certification, CertifyError> {
    let mut input_entails_output = Vec::with_capacity(output.len());
    for f in output.iter() {
        match oracle.entails(input.formulas(), f)? {
            Certificate::Entailed => input_entails_output.push(Certificate::Entailed),
            Certificate::Countermodel(v) => {
                return Err(CertifyError::NotEquivalent {
                    direction: Direction::LeftToRight,
                    formula: f.clone(),
                    countermodel: v,
                });
            }
        }
    }
    let mut output_entails_input = Vec::with_capacity(input.len());
    for f in input.iter() {
        match oracle.entails(output.formulas(), f)? {
            Certificate::Entailed => output_entails_input.push(Certificate::Entailed),
            Certificate::Countermodel(v) => {
                return Err(CertifyError::NotEquivalent {
                    direction: Direction::RightToLeft,
                    formula: f.clone(),
                    countermodel: v,
                });
            }
        }
    }
    let report = oracle.independent(output)?;
    let mut witnesses = Vec::with_capacity(report.entries.len());
    for (i, entry) in report.entries.into_iter().enumerate() {
        match entry.witness {
            Some(w) if entry.independent => witnesses.push(w),
            _ => {
                return Err(CertifyError::NotIndependent {
                    index: i,
                    formula: output.formulas()[i].clone(),
                });
            }
        }
    }
    Ok(Certification {
        equivalence: EquivalenceCertificates {
            input_entails_output,
            output_entails_input,
        },
        independence_witnesses: witnesses,
    })
}

/// The chain route, certified: drop an unsatisfiable input to `{false}`,
/// otherwise select and guard. Certification is against the original
/// input.
pub fn tarski_pipeline(
    oracle: &Oracle,
    theory: &Theory,
    options: &PipelineOptions,
) -> Result<CertifiedResult, PipelineError> {
    let output = if oracle.satisfiable(theory.formulas())? == SatResult::Unsat {
        Theory::new(vec![Formula::False])
    } else {
        let chain = tarski_chain(oracle, theory)?;
        tarski_transform(&chain, options.collapse)
    };
    let certification = certify(oracle, theory, &output)?;
    Ok(CertifiedResult {
        output,
        certification,
        mode: PipelineMode::Tarski,
        fallback_used: false,
    })
}

/// The merge route, certified. Steps: drop valid members (empty result if
/// nothing remains, `{false}` if what remains is unsatisfiable); starify;
/// partition and build the guarded sets; merge them — or, when the
/// surplus outgrows the anchors and `fallback` allows it, run the chain
/// transform on the starified theory instead. Certification is against
/// the original input.
pub fn reznikoff_pipeline(
    oracle: &Oracle,
    theory: &Theory,
    options: &PipelineOptions,
) -> Result<CertifiedResult, PipelineError> {
    let mut fallback_used = false;
    let output = reznikoff_output(oracle, theory, options, &mut fallback_used)?;
    let certification = certify(oracle, theory, &output)?;
    Ok(CertifiedResult {
        output,
        certification,
        mode: PipelineMode::Reznikoff,
        fallback_used,
    })
}

fn reznikoff_output(
    oracle: &Oracle,
    theory: &Theory,
    options: &PipelineOptions,
    fallback_used: &mut bool,
) -> Result<Theory, PipelineError> {
    let mut kept: Vec<Formula> = Vec::new();
    for f in theory.iter() {
        if !oracle.valid(f)? {
            kept.push(f.clone());
        }
    }
    if kept.is_empty() {
        return Ok(Theory::empty());
    }
    if oracle.satisfiable(&kept)? == SatResult::Unsat {
        return Ok(Theory::new(vec![Formula::False]));
    }
    let base = Theory::new(kept);
    let starified = starify(oracle, &base, options.starify_cap)?;
    let state = build_partition(&starified)?;
    let sets = build_transformed(&state);
    let c = Theory::new(sets.c_formulas());
    let d = Theory::new(sets.d_formulas());
    if d.len() <= c.len() {
        Ok(reznikoff_merge(oracle, &c, &d, options.paranoid)?)
    } else if options.fallback {
        *fallback_used = true;
        let chain = tarski_chain(oracle, &starified)?;
        Ok(tarski_transform(&chain, options.collapse))
    } else {
        Err(MergeError::SizeError {
            c_len: c.len(),
            d_len: d.len(),
        }
        .into())
    }
}

/// Dispatches to the requested pipeline.
pub fn independize(
    oracle: &Oracle,
    theory: &Theory,
    mode: PipelineMode,
    options: &PipelineOptions,
) -> Result<CertifiedResult, PipelineError> {
    match mode {
        PipelineMode::Tarski => tarski_pipeline(oracle, theory, options),
        PipelineMode::Reznikoff => reznikoff_pipeline(oracle, theory, options),
    }
}

/// Re-checks a certified result from scratch; used by tests and the
/// report verifier rather than trusting the stored certificates.
pub fn recheck(
    oracle: &Oracle,
    input: &Theory,
    result: &CertifiedResult,
) -> Result<bool, OracleError> {
    let equivalent = matches!(
        oracle.equivalent_theories(input, &result.output)?,
        TheoryEquivalence::Equivalent
    );
    let independent = oracle.independent(&result.output)?.all_independent();
    Ok(equivalent && independent)
}
