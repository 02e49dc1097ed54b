//! Upper and lower D-central series.
//!
//! Terms are always stored as subspaces of the original algebra `L`; the
//! quotient algebras used to build the upper series are transient.

use crate::derivations::{DerivationError, DerivationSet};
use crate::linalg::{preimage, Subspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesFlavor {
    Upper,
    Lower,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesResult {
    pub flavor: SeriesFlavor,
    /// Upper: `ζ_0, ..., ζ_s`. Lower: `γ_1, ..., γ_s`. The last term is the
    /// first one that repeats.
    pub terms: Vec<Subspace>,
    /// Index `s` of the last stored term (`ζ_s` or `γ_s`).
    pub stabilized_at: usize,
    /// Upper flavor only.
    pub hypercenter: Option<Subspace>,
    /// Upper flavor only: smallest `ν` with `ζ_ν` equal to the hypercenter.
    pub zl: Option<usize>,
}

impl SeriesResult {
    /// The term with index `nu` in the usual numbering (`ζ_0 = 0`, `γ_1 = L`),
    /// extended constantly past stabilization.
    ///
    /// Panics for `nu = 0` on a lower series.
    pub fn term(&self, nu: usize) -> &Subspace {
        let pos = match self.flavor {
            SeriesFlavor::Upper => nu,
            SeriesFlavor::Lower => {
                assert!(nu >= 1, "lower series starts at γ_1");
                nu - 1
            }
        };
        &self.terms[pos.min(self.terms.len() - 1)]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.terms.iter().map(Subspace::dim).collect()
    }
}

/// `ζ_0 = 0` and `ζ_{ν+1}/ζ_ν = A_{L/ζ_ν}(D)`, computed by passing to the
/// quotient, taking the D-center of the induced set there and pulling back.
pub fn upper_d_central_series(d: &DerivationSet) -> Result<SeriesResult, DerivationError> {
    if !d.contains_adl() {
        return Err(DerivationError::MissingAdl);
    }
    let a = d.algebra();
    let mut terms = vec![Subspace::zero(a.field(), a.dim())];
    loop {
        let current = terms.last().expect("nonempty");
        // Invariance of ζ_ν is checked here rather than assumed.
        let induced = d.induced(current)?;
        let center = induced.set.d_center()?;
        let next = preimage(&induced.map.proj, &center)?;
        if !current.is_subspace_of(&next)? {
            return Err(DerivationError::Invariant("upper series is not ascending"));
        }
        if next == *current {
            break;
        }
        terms.push(next);
    }
    let s = terms.len() - 1;
    Ok(SeriesResult {
        flavor: SeriesFlavor::Upper,
        hypercenter: Some(terms[s].clone()),
        zl: Some(s),
        stabilized_at: s,
        terms,
    })
}

/// `γ_1 = L` and `γ_{ν+1} = [γ_ν, D]`, the sum of the images of `γ_ν` under D.
pub fn lower_d_central_series(d: &DerivationSet) -> Result<SeriesResult, DerivationError> {
    if !d.contains_adl() {
        return Err(DerivationError::MissingAdl);
    }
    let a = d.algebra();
    let mut terms = vec![Subspace::full(a.field(), a.dim())];
    loop {
        let current = terms.last().expect("nonempty");
        let next = d.image_of(current)?;
        if !next.is_subspace_of(current)? {
            return Err(DerivationError::Invariant("lower series is not descending"));
        }
        if next == *current {
            break;
        }
        terms.push(next);
    }
    Ok(SeriesResult {
        flavor: SeriesFlavor::Lower,
        stabilized_at: terms.len(),
        hypercenter: None,
        zl: None,
        terms,
    })
}
