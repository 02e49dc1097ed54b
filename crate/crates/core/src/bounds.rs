//! Dimension bounds for `[L, D]` and `γ_{m+1}(L, D)`, and their classical
//! specializations, evaluated as exact integer inequalities.
//!
//! Letters in reports: `t` is a codimension, `k = dim D - dim Ad^l(L)`, `m` is
//! the D-upper central length. The series index of the Baer-type bounds is
//! called `series_index` so it never collides with `k`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::LeibnizAlgebra;
use crate::derivations::{adl_set, derivation_algebra, DerivationError, DerivationSet};
use crate::series::{lower_d_central_series, upper_d_central_series};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("m must be at least 1 (got {0})")]
    LengthTooSmall(usize),
    #[error("series index must be at least 1 (got {0})")]
    SeriesIndex(usize),
    #[error(transparent)]
    Derivation(#[from] DerivationError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Claim {
    /// `dim [L, D] <= t(k + t)`, `t = codim A_L(D)`.
    TheoremA,
    /// `dim γ_{m+1}(L, D) <= β(k, m, t)`, `t = codim` of the upper D-hypercenter.
    TheoremB,
    /// `dim [L, L] <= t^2`, `t = codim ζ(L)`.
    SchurLeibniz,
    /// Lie algebras: `dim [L, L] <= t(t+1)/2`.
    SchurLie,
    /// `dim [L, Der(L)] <= t(t+1)`, `t = codim A_L(Der(L))`.
    HegartyLeibniz,
    /// Lie algebras: `dim [L, Der(L)] <= t(t+1)/2`.
    HegartyLie,
    /// `dim γ_{s+1}(L) <= 2^{s-1} t^{s+1}`, `t = codim ζ_s(L)`.
    BaerLeibniz,
    /// Lie algebras: `dim γ_{s+1}(L) <= t^s (t+1)/2`.
    BaerLie,
}

impl Claim {
    pub const ALL: [Claim; 8] = [
        Claim::TheoremA,
        Claim::TheoremB,
        Claim::SchurLeibniz,
        Claim::SchurLie,
        Claim::HegartyLeibniz,
        Claim::HegartyLie,
        Claim::BaerLeibniz,
        Claim::BaerLie,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Claim::TheoremA => "theorem_a",
            Claim::TheoremB => "theorem_b",
            Claim::SchurLeibniz => "schur_leibniz",
            Claim::SchurLie => "schur_lie",
            Claim::HegartyLeibniz => "hegarty_leibniz",
            Claim::HegartyLie => "hegarty_lie",
            Claim::BaerLeibniz => "baer_leibniz",
            Claim::BaerLie => "baer_lie",
        }
    }

    /// Human-readable form of the inequality.
    pub fn statement(self) -> &'static str {
        match self {
            Claim::TheoremA => "dim [L,D] <= t(k+t)",
            Claim::TheoremB => "dim γ_{m+1}(L,D) <= β(k,m,t)",
            Claim::SchurLeibniz => "dim [L,L] <= t^2",
            Claim::SchurLie => "dim [L,L] <= t(t+1)/2",
            Claim::HegartyLeibniz => "dim [L,Der(L)] <= t(t+1)",
            Claim::HegartyLie => "dim [L,Der(L)] <= t(t+1)/2",
            Claim::BaerLeibniz => "dim γ_{s+1}(L) <= 2^{s-1} t^{s+1}",
            Claim::BaerLie => "dim γ_{s+1}(L) <= t^s (t+1)/2",
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One evaluated inequality `lhs <= rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub claim: Claim,
    /// Named inputs (`t`, `k`, `m`, `series_index`, measured dimensions) in
    /// rendering order.
    pub quantities: Vec<(&'static str, BigUint)>,
    pub lhs: BigUint,
    pub rhs: BigUint,
    pub applicable: bool,
    /// `lhs <= rhs`; meaningful only when `applicable`.
    pub holds: bool,
}

impl BoundReport {
    fn new(
        claim: Claim,
        quantities: Vec<(&'static str, BigUint)>,
        lhs: usize,
        rhs: BigUint,
        applicable: bool,
    ) -> Self {
        let lhs = BigUint::from(lhs);
        let holds = applicable && lhs <= rhs;
        BoundReport {
            claim,
            quantities,
            lhs,
            rhs,
            applicable,
            holds,
        }
    }

    pub fn quantity(&self, name: &str) -> Option<&BigUint> {
        self.quantities
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, v)| v)
    }

    /// Failed applicable claim.
    pub fn is_violation(&self) -> bool {
        self.applicable && !self.holds
    }
}

fn big(x: usize) -> BigUint {
    BigUint::from(x)
}

/// `β(k, 1, t) = t(k + t)` and `β(k, m + 1, t) = β(k, m, t)(k + β(k, m, t))`.
pub fn beta(k: usize, m: usize, t: usize) -> Result<BigUint, BoundsError> {
    if m < 1 {
        return Err(BoundsError::LengthTooSmall(m));
    }
    let k = big(k);
    let mut b = big(t) * (&k + big(t));
    for _ in 1..m {
        b = &b * (&k + &b);
    }
    Ok(b)
}

/// `t(t+1)/2`, exact since one factor is even.
fn triangular(t: usize) -> BigUint {
    big(t) * big(t + 1) / 2u32
}

pub fn verify_theorem_a(d: &DerivationSet) -> Result<BoundReport, BoundsError> {
    let n = d.algebra().dim();
    let t = n - d.d_center()?.dim();
    let k = d.k()?;
    let lhs = d.d_derived().dim();
    let rhs = big(t) * big(k + t);
    Ok(BoundReport::new(
        Claim::TheoremA,
        vec![("t", big(t)), ("k", big(k)), ("dim_d", big(d.dim()))],
        lhs,
        rhs,
        true,
    ))
}

/// Not applicable when the upper D-central length is 0.
pub fn verify_theorem_b(d: &DerivationSet) -> Result<BoundReport, BoundsError> {
    let n = d.algebra().dim();
    let upper = upper_d_central_series(d)?;
    let lower = lower_d_central_series(d)?;
    let m = upper.zl.expect("upper series has zl");
    let hyper = upper
        .hypercenter
        .as_ref()
        .expect("upper series has hypercenter");
    let t = n - hyper.dim();
    let k = d.k()?;
    let lhs = lower.term(m + 1).dim();
    let mut quantities = vec![
        ("t", big(t)),
        ("k", big(k)),
        ("m", big(m)),
        ("dim_hypercenter", big(hyper.dim())),
    ];
    if m == 0 {
        return Ok(BoundReport::new(
            Claim::TheoremB,
            quantities,
            lhs,
            BigUint::zero(),
            false,
        ));
    }
    quantities.push(("dim_gamma", big(lhs)));
    Ok(BoundReport::new(
        Claim::TheoremB,
        quantities,
        lhs,
        beta(k, m, t)?,
        true,
    ))
}

/// The abelianization step inside the proof of the `[L, D]` bound:
/// `dim(([L,D] + [L,L]) / [L,L]) <= t k`. Returns `(lhs, rhs)`.
pub fn abelianization_step(d: &DerivationSet) -> Result<(usize, BigUint), BoundsError> {
    let a = d.algebra();
    let k_sub = a.derived_subalgebra();
    let lhs = d
        .d_derived()
        .sum(&k_sub)
        .map_err(DerivationError::from)?
        .dim()
        - k_sub.dim();
    let t = a.dim() - d.d_center()?.dim();
    Ok((lhs, big(t) * big(d.k()?)))
}

/// Schur-, Hegarty- and Baer-type reports for `L` with `D = Ad^l(L)` or
/// `D = Der(L)`. Lie-only claims are reported as not applicable for
/// non-Lie algebras.
pub fn verify_corollaries(
    a: &Arc<LeibnizAlgebra>,
    series_index: usize,
) -> Result<Vec<BoundReport>, BoundsError> {
    if series_index < 1 {
        return Err(BoundsError::SeriesIndex(series_index));
    }
    let n = a.dim();
    let lie = a.is_lie();
    let mut out = Vec::with_capacity(6);

    let t = a.centers().center.codim();
    let derived = a.derived_subalgebra().dim();
    out.push(BoundReport::new(
        Claim::SchurLeibniz,
        vec![("t", big(t))],
        derived,
        big(t) * big(t),
        true,
    ));
    out.push(BoundReport::new(
        Claim::SchurLie,
        vec![("t", big(t))],
        derived,
        triangular(t),
        lie,
    ));

    let der = derivation_algebra(a);
    let t = n - der.d_center()?.dim();
    let k = der.k()?;
    let lhs = der.d_derived().dim();
    let q = vec![("t", big(t)), ("k", big(k))];
    out.push(BoundReport::new(
        Claim::HegartyLeibniz,
        q.clone(),
        lhs,
        big(t) * big(t + 1),
        true,
    ));
    out.push(BoundReport::new(
        Claim::HegartyLie,
        q,
        lhs,
        triangular(t),
        lie,
    ));

    let adl = adl_set(a);
    let upper = upper_d_central_series(&adl)?;
    let lower = lower_d_central_series(&adl)?;
    let s = series_index;
    let t = n - upper.term(s).dim();
    let lhs = lower.term(s + 1).dim();
    let q = vec![("t", big(t)), ("series_index", big(s))];
    let tb = big(t);
    let leibniz_rhs = (BigUint::one() << (s - 1)) * tb.pow(s as u32 + 1);
    let lie_rhs = tb.pow(s as u32) * big(t + 1) / 2u32;
    out.push(BoundReport::new(
        Claim::BaerLeibniz,
        q.clone(),
        lhs,
        leibniz_rhs,
        true,
    ));
    out.push(BoundReport::new(Claim::BaerLie, q, lhs, lie_rhs, lie));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{catalog, CatalogFamily};
    use crate::field::FieldSpec;

    const Q: FieldSpec = FieldSpec::Rational;

    fn fam(f: CatalogFamily, n: usize) -> Arc<LeibnizAlgebra> {
        Arc::new(catalog(f, n, Q).unwrap())
    }

    fn q(r: &BoundReport, name: &str) -> u64 {
        r.quantity(name).unwrap().try_into().unwrap()
    }

    #[test]
    fn beta_examples() {
        assert_eq!(beta(0, 1, 3).unwrap(), big(9));
        assert_eq!(beta(2, 2, 3).unwrap(), big(255));
        for k in 0..6 {
            assert!(beta(k, 1, 0).unwrap().is_zero());
        }
        assert_eq!(beta(1, 0, 1), Err(BoundsError::LengthTooSmall(0)));
        // grows past u64 without trouble
        assert!(beta(3, 6, 5).unwrap().bits() > 64);
    }

    #[test]
    fn triangular_is_exact() {
        for t in 0..50usize {
            assert_eq!(triangular(t), big(t * (t + 1) / 2));
        }
    }

    #[test]
    fn theorem_a_examples() {
        let a1 = fam(CatalogFamily::CyclicLeibniz, 2);
        let r = verify_theorem_a(&adl_set(&a1)).unwrap();
        assert_eq!((q(&r, "t"), q(&r, "k")), (1, 0));
        assert_eq!((r.lhs.clone(), r.rhs.clone()), (big(1), big(1)));
        assert!(r.holds);

        let r = verify_theorem_a(&derivation_algebra(&a1)).unwrap();
        assert_eq!((q(&r, "t"), q(&r, "k")), (2, 1));
        assert_eq!((r.lhs.clone(), r.rhs.clone()), (big(2), big(6)));
        assert!(r.holds);

        let r = verify_theorem_a(&adl_set(&fam(CatalogFamily::Abelian, 3))).unwrap();
        assert_eq!(
            (q(&r, "t"), r.lhs.clone(), r.rhs.clone()),
            (0, big(0), big(0))
        );
        assert!(r.holds);
    }

    #[test]
    fn theorem_b_examples() {
        let r = verify_theorem_b(&adl_set(&fam(CatalogFamily::Heisenberg, 3))).unwrap();
        assert!(r.applicable && r.holds);
        assert_eq!((q(&r, "m"), q(&r, "t"), q(&r, "k")), (2, 0, 0));
        assert_eq!((r.lhs.clone(), r.rhs.clone()), (big(0), big(0)));

        let r = verify_theorem_b(&adl_set(&fam(CatalogFamily::Nonabelian2, 2))).unwrap();
        assert!(!r.applicable && !r.holds && !r.is_violation());
        assert_eq!(q(&r, "m"), 0);

        let r = verify_theorem_b(&adl_set(&fam(CatalogFamily::Abelian, 2))).unwrap();
        assert!(r.applicable && r.holds);
        assert_eq!((q(&r, "m"), q(&r, "t")), (1, 0));
        assert_eq!((r.lhs.clone(), r.rhs.clone()), (big(0), big(0)));
    }

    #[test]
    fn corollary_examples() {
        let reports = verify_corollaries(&fam(CatalogFamily::CyclicLeibniz, 2), 1).unwrap();
        let schur = &reports[0];
        assert_eq!(schur.claim, Claim::SchurLeibniz);
        assert_eq!(
            (q(schur, "t"), schur.lhs.clone(), schur.rhs.clone()),
            (1, big(1), big(1))
        );
        assert!(schur.holds);
        assert!(!reports[1].applicable);

        let reports = verify_corollaries(&fam(CatalogFamily::Heisenberg, 3), 2).unwrap();
        let lie = reports.iter().find(|r| r.claim == Claim::SchurLie).unwrap();
        assert_eq!(
            (q(lie, "t"), lie.lhs.clone(), lie.rhs.clone()),
            (2, big(1), big(3))
        );
        let baer = reports.iter().find(|r| r.claim == Claim::BaerLie).unwrap();
        assert_eq!(
            (q(baer, "t"), baer.lhs.clone(), baer.rhs.clone()),
            (0, big(0), big(0))
        );
        assert!(reports.iter().all(|r| r.holds));

        assert_eq!(
            verify_corollaries(&fam(CatalogFamily::Abelian, 1), 0),
            Err(BoundsError::SeriesIndex(0))
        );
    }

    #[test]
    fn abelianization_step_on_fixtures() {
        let a1 = fam(CatalogFamily::CyclicLeibniz, 2);
        let (lhs, rhs) = abelianization_step(&derivation_algebra(&a1)).unwrap();
        // [L,Der] = L, [L,L] = span{e2}; t = 2, k = 1
        assert_eq!((lhs, rhs), (1, big(2)));
        let (lhs, rhs) = abelianization_step(&adl_set(&a1)).unwrap();
        assert_eq!((lhs, rhs), (0, big(0)));
    }
}
