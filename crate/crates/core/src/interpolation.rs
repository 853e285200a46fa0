//! Interpolants for entailed formula pairs.
//!
//! Given `left ⊨ right`, an interpolant is a formula `tau` with
//! `left ⊨ tau ⊨ right` whose symbols occur on both sides. Interpolants
//! are computed by forgetting the one-sided symbols: existentially from
//! the left side (the strongest choice) or universally from the right
//! side (the weakest), so each result is independently checkable.

use thiserror::Error;

use crate::formula::{ForgetMode, Formula, Valuation};
use crate::oracle::{Certificate, Oracle, OracleError};

/// Which interpolant to compute for an entailed pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InterpolantMode {
    Strongest,
    Weakest,
}

/// An entailment chain `left ⊨ tau ⊨ right` with `tau` over the shared
/// symbols only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interpolant {
    pub left: Formula,
    pub tau: Formula,
    pub right: Formula,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum InterpolationError {
    #[error("left formula does not entail the right one")]
    NotEntailed { countermodel: Valuation },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Computes the interpolant of `left ⊨ right` in the requested mode. The
/// entailment itself is checked first; its countermodel is returned if it
/// fails. The returned `tau` is canonical, so its syntactic symbols equal
/// its essential ones.
pub fn interpolate(
    oracle: &Oracle,
    left: &Formula,
    right: &Formula,
    mode: InterpolantMode,
) -> Result<Interpolant, InterpolationError> {
    if let Certificate::Countermodel(v) = oracle.entails(std::slice::from_ref(left), right)? {
        return Err(InterpolationError::NotEntailed { countermodel: v });
    }
    let left_symbols = left.symbols();
    let right_symbols = right.symbols();
    let tau = match mode {
        InterpolantMode::Strongest => {
            let hide = &left_symbols - &right_symbols;
            left.forget(&hide, ForgetMode::Exists)
        }
        InterpolantMode::Weakest => {
            let hide = &right_symbols - &left_symbols;
            right.forget(&hide, ForgetMode::Forall)
        }
    };
    Ok(Interpolant {
        left: left.clone(),
        tau,
        right: right.clone(),
    })
}

/// True iff both entailments hold and `tau`'s symbols are contained in
/// both sides' symbol sets.
pub fn check_interpolant(oracle: &Oracle, i: &Interpolant) -> Result<bool, OracleError> {
    let shared = &i.left.symbols() & &i.right.symbols();
    if !i.tau.symbols().is_subset(&shared) {
        return Ok(false);
    }
    Ok(oracle
        .entails(std::slice::from_ref(&i.left), &i.tau)?
        .is_entailed()
        && oracle
            .entails(std::slice::from_ref(&i.tau), &i.right)?
            .is_entailed())
}
