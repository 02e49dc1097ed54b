//! Structural invariants checked on every fuzzed instance.
//!
//! Each check returns failures instead of panicking so a batch run can
//! report all of them at once.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::algebra::LeibnizAlgebra;
use crate::bounds::{abelianization_step, verify_corollaries, verify_theorem_a, verify_theorem_b};
use crate::derivations::{ad_left, adl_set, derivation_algebra, DerivationSet};
use crate::fuzz::{random_element, random_invertible, random_scalar};
use crate::linalg::{Matrix, Subspace, Vector};
use crate::series::{lower_d_central_series, upper_d_central_series};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantFailure {
    pub name: &'static str,
    pub detail: String,
}

impl fmt::Display for InvariantFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.name, self.detail)
    }
}

#[derive(Default)]
struct Checker {
    failures: Vec<InvariantFailure>,
    checked: usize,
}

impl Checker {
    fn check(&mut self, name: &'static str, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(InvariantFailure {
                name,
                detail: detail(),
            });
        }
    }

    fn error(&mut self, name: &'static str, e: impl fmt::Display) {
        self.checked += 1;
        self.failures.push(InvariantFailure {
            name,
            detail: format!("error: {e}"),
        });
    }
}

/// Outcome of the invariant suite on one instance.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InvariantReport {
    pub checked: usize,
    pub failures: Vec<InvariantFailure>,
}

impl InvariantReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn sub(a: &Subspace, b: &Subspace) -> bool {
    a.is_subspace_of(b).unwrap_or(false)
}

/// Algebra-level invariants (no derivation set involved).
pub fn check_algebra<R: Rng>(rng: &mut R, a: &Arc<LeibnizAlgebra>) -> InvariantReport {
    let mut c = Checker::default();
    let centers = a.centers();
    c.check(
        "left_center_ideal",
        a.is_ideal(&centers.left).unwrap_or(false),
        || format!("dim ζ^l = {}", centers.left.dim()),
    );
    let meet = centers
        .left
        .intersect(&centers.right)
        .expect("same ambient");
    c.check("center_is_meet", meet == centers.center, || {
        "ζ != ζ^l ∩ ζ^r".into()
    });

    let derived = a.derived_subalgebra();
    c.check(
        "derived_ideal",
        a.is_ideal(&derived).unwrap_or(false),
        || format!("dim [L,L] = {}", derived.dim()),
    );
    match a.quotient(&derived) {
        Ok((ab, _)) => {
            let abelian = (0..ab.dim())
                .all(|i| (0..ab.dim()).all(|j| ab.basis_bracket(i, j).iter().all(|x| x.is_zero())));
            c.check("abelianization_abelian", abelian, || {
                "L/[L,L] has a nonzero bracket".into()
            });
        }
        Err(e) => c.error("abelianization_abelian", e),
    }
    if a.is_lie() {
        c.check(
            "lie_centers_agree",
            centers.left == centers.right && centers.left == centers.center,
            || "ζ^l, ζ^r, ζ differ on a Lie algebra".into(),
        );
    }

    let adl = adl_set(a);
    let der = derivation_algebra(a);
    c.check("adl_in_der", sub(adl.space(), der.space()), || {
        "Ad^l(L) not inside Der(L)".into()
    });
    c.check(
        "ann_adl_is_right_center",
        adl.annihilator() == centers.right,
        || {
            format!(
                "dim Ann(Ad^l) = {}, dim ζ^r = {}",
                adl.annihilator().dim(),
                centers.right.dim()
            )
        },
    );

    // [m, l_a] = l_{m(a)} for sampled m in Der(L) and a in L
    let ad = ad_left(a);
    for _ in 0..3 {
        let m = random_element(rng, &der);
        let x: Vector = (0..a.dim())
            .map(|_| random_scalar(rng, a.field()))
            .collect();
        let lhs = m.commutator(&ad.map(&x)).expect("square");
        let rhs = ad.map(&m.mul_vec(&x).expect("square"));
        c.check("commutator_with_left_multiplication", lhs == rhs, || {
            format!("m =\n{m}x = {x:?}")
        });
    }
    InvariantReport {
        checked: c.checked,
        failures: c.failures,
    }
}

/// Invariants involving a derivation set `d` and its two series.
pub fn check_derivation_set(d: &DerivationSet) -> InvariantReport {
    let mut c = Checker::default();
    let a = d.algebra();
    let centers = a.centers();

    match d.d_center() {
        Ok(dc) => {
            c.check("d_center_in_center", sub(&dc, &centers.center), || {
                format!(
                    "dim A_L(D) = {}, dim ζ = {}",
                    dc.dim(),
                    centers.center.dim()
                )
            });
            c.check(
                "d_center_invariant",
                d.leaves_invariant(&dc).unwrap_or(false),
                || "D does not preserve A_L(D)".into(),
            );
        }
        Err(e) => c.error("d_center_in_center", e),
    }
    if d.contains_adl() {
        c.check(
            "ann_in_ann_adl",
            sub(&d.annihilator(), &centers.right),
            || "Ann_L(D) not inside Ann_L(Ad^l)".into(),
        );
        c.check(
            "derived_in_d_derived",
            sub(&a.derived_subalgebra(), &d.d_derived()),
            || "[L,L] not inside [L,D]".into(),
        );
    }

    match upper_d_central_series(d) {
        Ok(up) => {
            let ascending = up
                .terms
                .windows(2)
                .all(|w| sub(&w[0], &w[1]) && w[0] != w[1]);
            c.check("upper_ascending", ascending, || {
                format!("dims {:?}", up.dims())
            });
            let descent = up.terms.windows(2).all(|w| {
                d.image_of(&w[1])
                    .map(|img| sub(&img, &w[0]))
                    .unwrap_or(false)
            });
            c.check("upper_descent", descent, || {
                "[ζ_{ν+1}, D] not inside ζ_ν".into()
            });
            let bracket_descent = up.terms.windows(2).all(|w| {
                w[1].basis_vectors().iter().all(|z| {
                    (0..a.dim()).all(|i| {
                        let x = a.basis_vector(i);
                        let zx = a.bracket(z, &x).expect("dims");
                        w[0].contains(&zx).unwrap_or(false)
                    })
                })
            });
            c.check("upper_left_bracket_descent", bracket_descent, || {
                "[ζ_{ν+1}, L] not inside ζ_ν".into()
            });

            match lower_d_central_series(d) {
                Ok(low) => {
                    let descending = low
                        .terms
                        .windows(2)
                        .all(|w| sub(&w[1], &w[0]) && w[0] != w[1]);
                    c.check("lower_descending", descending, || {
                        format!("dims {:?}", low.dims())
                    });
                    let invariant = low
                        .terms
                        .iter()
                        .all(|g| d.leaves_invariant(g).unwrap_or(false));
                    c.check("lower_invariant", invariant, || {
                        "a γ-term is not D-invariant".into()
                    });
                    let m = up.zl.expect("upper");
                    if up.hypercenter.as_ref().is_some_and(Subspace::is_full) {
                        c.check(
                            "nilpotent_lower_vanishes",
                            low.term(m + 1).is_zero(),
                            || format!("m = {m}, dim γ_{{m+1}} = {}", low.term(m + 1).dim()),
                        );
                        // γ_{ν+1} ⊆ ζ_{m-ν}
                        let linked = (0..=m).all(|nu| sub(low.term(nu + 1), up.term(m - nu)));
                        c.check("series_linked", linked, || {
                            "γ_{ν+1} not inside ζ_{m-ν}".into()
                        });
                    }
                }
                Err(e) => c.error("lower_descending", e),
            }
        }
        Err(e) => c.error("upper_ascending", e),
    }

    match verify_theorem_a(d) {
        Ok(r) => c.check("theorem_a", !r.is_violation(), || {
            format!("{} > {}", r.lhs, r.rhs)
        }),
        Err(e) => c.error("theorem_a", e),
    }
    match verify_theorem_b(d) {
        Ok(r) => c.check("theorem_b", !r.is_violation(), || {
            format!("{} > {}", r.lhs, r.rhs)
        }),
        Err(e) => c.error("theorem_b", e),
    }
    match abelianization_step(d) {
        Ok((lhs, rhs)) => c.check(
            "abelianization_step",
            num_bigint::BigUint::from(lhs) <= rhs,
            || format!("{lhs} > {rhs}"),
        ),
        Err(e) => c.error("abelianization_step", e),
    }
    InvariantReport {
        checked: c.checked,
        failures: c.failures,
    }
}

/// Corollary reports for `series_index` 1 to 3 hold.
pub fn check_corollaries(a: &Arc<LeibnizAlgebra>) -> InvariantReport {
    let mut c = Checker::default();
    for s in 1..=3 {
        match verify_corollaries(a, s) {
            Ok(reports) => {
                for r in reports {
                    c.check(r.claim.name(), !r.is_violation(), || {
                        format!("series_index {s}: {} > {}", r.lhs, r.rhs)
                    });
                }
            }
            Err(e) => c.error("corollaries", e),
        }
    }
    InvariantReport {
        checked: c.checked,
        failures: c.failures,
    }
}

/// Dimension profile of `L` and of each `D` over it, which must not depend
/// on the basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimProfile {
    pub centers: [usize; 3],
    pub derived: usize,
    pub der: usize,
    pub sets: Vec<SetProfile>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetProfile {
    pub adl: usize,
    pub d: usize,
    pub d_center: usize,
    pub d_derived: usize,
    pub upper: Vec<usize>,
    pub lower: Vec<usize>,
}

/// `None` when `sets` is empty or a set lacks `Ad^l(L)`.
pub fn dim_profile(sets: &[&DerivationSet]) -> Option<DimProfile> {
    let a = sets.first()?.algebra();
    let c = a.centers();
    let sets = sets
        .iter()
        .map(|d| {
            Some(SetProfile {
                adl: d.adl_space().dim(),
                d: d.dim(),
                d_center: d.d_center().ok()?.dim(),
                d_derived: d.d_derived().dim(),
                upper: upper_d_central_series(d).ok()?.dims(),
                lower: lower_d_central_series(d).ok()?.dims(),
            })
        })
        .collect::<Option<Vec<_>>>()?;
    Some(DimProfile {
        centers: [c.left.dim(), c.right.dim(), c.center.dim()],
        derived: a.derived_subalgebra().dim(),
        der: derivation_algebra(a).dim(),
        sets,
    })
}

/// Transports `(L, D)` along the basis change `P`: brackets become
/// `P^{-1}[P x, P y]` and each `α` becomes `P^{-1} α P`.
pub fn conjugate(d: &DerivationSet, p: &Matrix) -> Option<DerivationSet> {
    conjugate_all(&[d], p)?.pop()
}

/// [`conjugate`] for several sets over the same algebra, sharing the
/// transported algebra.
pub fn conjugate_all(sets: &[&DerivationSet], p: &Matrix) -> Option<Vec<DerivationSet>> {
    let a = sets.first()?.algebra();
    let pinv = p.inverse().ok()?;
    let b = Arc::new(a.change_basis(p).ok()?);
    sets.iter()
        .map(|d| {
            let mats: Vec<Matrix> = d
                .matrices()
                .iter()
                .map(|m| pinv.mul(&m.mul(p).expect("square")).expect("square"))
                .collect();
            DerivationSet::from_matrices(b.clone(), &mats).ok()
        })
        .collect()
}

/// Profiles of every set agree across `changes` random bases; one basis
/// change is applied to all sets at once.
pub fn check_basis_invariance<R: Rng>(
    rng: &mut R,
    sets: &[&DerivationSet],
    changes: usize,
) -> InvariantReport {
    let mut c = Checker::default();
    let Some(a) = sets.first().map(|d| d.algebra()) else {
        return InvariantReport::default();
    };
    let base = dim_profile(sets);
    for _ in 0..changes {
        let p = random_invertible(rng, a.dim(), a.field());
        let moved =
            conjugate_all(sets, &p).and_then(|ds| dim_profile(&ds.iter().collect::<Vec<_>>()));
        c.check("basis_invariance", base.is_some() && moved == base, || {
            format!("{base:?} vs {moved:?} under P =\n{p}")
        });
    }
    InvariantReport {
        checked: c.checked,
        failures: c.failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{catalog, CatalogFamily};
    use crate::field::FieldSpec;
    use crate::fuzz::instance_rng;

    #[test]
    fn catalog_passes_everything() {
        for field in [
            FieldSpec::Rational,
            FieldSpec::Prime(2),
            FieldSpec::Prime(3),
        ] {
            for f in CatalogFamily::ALL {
                for n in 1..=4 {
                    let Ok(a) = catalog(f, n, field) else {
                        continue;
                    };
                    let a = Arc::new(a);
                    let mut rng = instance_rng(3, n);
                    assert!(check_algebra(&mut rng, &a).passed(), "{f:?} {n} {field}");
                    assert!(check_corollaries(&a).passed());
                    let (adl, der) = (adl_set(&a), derivation_algebra(&a));
                    for d in [&adl, &der] {
                        let r = check_derivation_set(d);
                        assert!(r.passed(), "{f:?} {n} {field}: {:?}", r.failures);
                    }
                    assert!(check_basis_invariance(&mut rng, &[&adl, &der], 2).passed());
                }
            }
        }
    }

    #[test]
    fn conjugation_keeps_derivations() {
        let a = Arc::new(catalog(CatalogFamily::Heisenberg, 3, FieldSpec::Rational).unwrap());
        let der = derivation_algebra(&a);
        let p = Matrix::from_i64(FieldSpec::Rational, &[&[1, 1, 0], &[0, 1, 0], &[2, 0, 1]]);
        let moved = conjugate(&der, &p).unwrap();
        assert_eq!(moved.dim(), 6);
        assert_eq!(moved.space(), derivation_algebra(moved.algebra()).space());
    }
}
