//! Deterministic random generation of Leibniz algebras and of derivation sets
//! to pair them with.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{catalog, CatalogFamily, LeibnizAlgebra, StructureConstants};
use crate::derivations::{adl_set, derivation_algebra, lie_closure, DerivationSet};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FuzzError {
    #[error("fuzz dimension must be at least 1")]
    Dim,
    #[error("fuzz count must be at least 1")]
    Count,
    #[error("unknown strategy `{0}` (expected `catalog_conjugate` or `graded_reject`)")]
    Strategy(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FuzzStrategy {
    /// A catalog family, or a direct sum of two, in a random basis.
    CatalogConjugate,
    /// Random constants supported on `c[i][j][k]` with `k > max(i, j)`,
    /// kept only when the Leibniz identity holds.
    GradedReject,
}

impl FuzzStrategy {
    pub fn name(self) -> &'static str {
        match self {
            FuzzStrategy::CatalogConjugate => "catalog_conjugate",
            FuzzStrategy::GradedReject => "graded_reject",
        }
    }
}

impl fmt::Display for FuzzStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FuzzStrategy {
    type Err = FuzzError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "catalog_conjugate" => Ok(FuzzStrategy::CatalogConjugate),
            "graded_reject" => Ok(FuzzStrategy::GradedReject),
            _ => Err(FuzzError::Strategy(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FuzzConfig {
    pub dim: usize,
    pub field: FieldSpec,
    pub count: usize,
    pub seed: u64,
    pub strategy: FuzzStrategy,
}

impl FuzzConfig {
    pub fn validate(&self) -> Result<(), FuzzError> {
        if self.dim == 0 {
            return Err(FuzzError::Dim);
        }
        if self.count == 0 {
            return Err(FuzzError::Count);
        }
        Ok(())
    }
}

/// One generated algebra. `origin` names the recipe, e.g.
/// `heisenberg+abelian(1)` or `graded`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzItem {
    pub index: usize,
    pub origin: String,
    pub algebra: Arc<LeibnizAlgebra>,
}

/// Iterator over `cfg.count` algebras; identical configs give identical streams.
#[derive(Debug, Clone)]
pub struct FuzzStream {
    cfg: FuzzConfig,
    rng: ChaCha8Rng,
    produced: usize,
    attempts: usize,
}

pub fn fuzz_generate(cfg: FuzzConfig) -> Result<FuzzStream, FuzzError> {
    cfg.validate()?;
    Ok(FuzzStream {
        cfg,
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        produced: 0,
        attempts: 0,
    })
}

impl FuzzStream {
    /// `(accepted, drawn)` tables so far; equal for `catalog_conjugate`.
    pub fn acceptance(&self) -> (usize, usize) {
        (self.produced, self.attempts)
    }
}

impl Iterator for FuzzStream {
    type Item = FuzzItem;

    fn next(&mut self) -> Option<FuzzItem> {
        if self.produced == self.cfg.count {
            return None;
        }
        let (origin, algebra) = match self.cfg.strategy {
            FuzzStrategy::CatalogConjugate => {
                self.attempts += 1;
                catalog_conjugate(&mut self.rng, self.cfg.dim, self.cfg.field)
            }
            FuzzStrategy::GradedReject => loop {
                self.attempts += 1;
                let table = random_graded_table(&mut self.rng, self.cfg.dim, self.cfg.field);
                if let Ok(a) = LeibnizAlgebra::new(table) {
                    break ("graded".to_string(), a);
                }
            },
        };
        let item = FuzzItem {
            index: self.produced,
            origin,
            algebra: Arc::new(algebra),
        };
        self.produced += 1;
        Some(item)
    }
}

/// Uniform scalar for fuzzing: any residue over `F_p`, an integer in
/// `[-2, 2]` over `Q`.
pub fn random_scalar<R: Rng>(rng: &mut R, field: FieldSpec) -> Scalar {
    match field {
        FieldSpec::Rational => Scalar::from_i64(field, rng.random_range(-2..=2)),
        FieldSpec::Prime(p) => Scalar::from_i64(field, rng.random_range(0..p as i64)),
    }
}

/// Zero with probability 1/2, otherwise a uniform nonzero scalar (nonzero
/// residue over `F_p`, one of ±1, ±2 over `Q`).
fn sparse_scalar<R: Rng>(rng: &mut R, field: FieldSpec) -> Scalar {
    if rng.random_bool(0.5) {
        return Scalar::zero(field);
    }
    match field {
        FieldSpec::Rational => {
            let v = *[-2i64, -1, 1, 2].choose(rng).expect("nonempty");
            Scalar::from_i64(field, v)
        }
        FieldSpec::Prime(p) => Scalar::from_i64(field, rng.random_range(1..p as i64)),
    }
}

/// Random invertible `n x n` matrix `P L D U`: a permutation, unit lower and
/// upper triangular factors and an invertible diagonal. Every invertible
/// matrix has this shape. Over `Q` the diagonal is `±1` and the other entries
/// lie in `[-2, 2]`, so `P` and its inverse are integral.
pub fn random_invertible<R: Rng>(rng: &mut R, n: usize, field: FieldSpec) -> Matrix {
    let mut lower = Matrix::identity(field, n);
    let mut upper = Matrix::identity(field, n);
    for r in 0..n {
        for c in 0..r {
            lower.set(r, c, random_scalar(rng, field));
            upper.set(c, r, random_scalar(rng, field));
        }
    }
    let mut diag = Matrix::identity(field, n);
    for i in 0..n {
        let d = match field {
            FieldSpec::Rational => {
                Scalar::from_i64(field, if rng.random_bool(0.5) { 1 } else { -1 })
            }
            FieldSpec::Prime(p) => Scalar::from_i64(field, rng.random_range(1..p as i64)),
        };
        diag.set(i, i, d);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut perm = Matrix::zeros(field, n, n);
    for (c, &r) in order.iter().enumerate() {
        perm.set(r, c, Scalar::one(field));
    }
    [lower, diag, upper]
        .iter()
        .try_fold(perm, |acc, m| acc.mul(m))
        .expect("square factors")
}

/// Positions `(i, j, k)` with `k > max(i, j)`: the support of graded tables.
pub fn graded_positions(n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in i.max(j) + 1..n {
                out.push((i, j, k));
            }
        }
    }
    out
}

fn random_graded_table<R: Rng>(rng: &mut R, n: usize, field: FieldSpec) -> StructureConstants {
    let mut t = StructureConstants::zero(field, n);
    for (i, j, k) in graded_positions(n) {
        t.set(i, j, k, sparse_scalar(rng, field));
    }
    t
}

fn family_options(dim: usize) -> Vec<CatalogFamily> {
    CatalogFamily::ALL
        .into_iter()
        .filter(|f| f.supports_dim(dim))
        .collect()
}

fn family_label(f: CatalogFamily, dim: usize) -> String {
    match f.fixed_dim() {
        Some(_) => f.name().to_string(),
        None => format!("{}({dim})", f.name()),
    }
}

fn catalog_conjugate<R: Rng>(
    rng: &mut R,
    dim: usize,
    field: FieldSpec,
) -> (String, LeibnizAlgebra) {
    // Every single family of dimension `dim` and every direct sum of two.
    let mut recipes: Vec<Vec<(CatalogFamily, usize)>> = family_options(dim)
        .into_iter()
        .map(|f| vec![(f, dim)])
        .collect();
    for first in 1..dim {
        let second = dim - first;
        for f in family_options(first) {
            for g in family_options(second) {
                recipes.push(vec![(f, first), (g, second)]);
            }
        }
    }
    let recipe = recipes.choose(rng).expect("abelian always fits");
    let mut parts = recipe
        .iter()
        .map(|&(f, d)| catalog(f, d, field).expect("supported dim"));
    let first = parts.next().expect("nonempty recipe");
    let base = parts.fold(first, |acc, b| acc.direct_sum(&b).expect("same field"));
    let label = recipe
        .iter()
        .map(|&(f, d)| family_label(f, d))
        .collect::<Vec<_>>()
        .join("+");
    let p = random_invertible(rng, dim, field);
    let algebra = base.change_basis(&p).expect("invertible change of basis");
    (label, algebra)
}

/// Which derivation set an instance is paired with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DerivationKind {
    Adl,
    Der,
    /// Lie closure of one random derivation together with `Ad^l(L)`.
    Closure,
}

impl DerivationKind {
    pub fn name(self) -> &'static str {
        match self {
            DerivationKind::Adl => "adl",
            DerivationKind::Der => "der",
            DerivationKind::Closure => "closure",
        }
    }
}

/// Random element of `d` as a matrix.
pub fn random_element<R: Rng>(rng: &mut R, d: &DerivationSet) -> Matrix {
    let a = d.algebra();
    let n = a.dim();
    d.matrices()
        .iter()
        .fold(Matrix::zeros(a.field(), n, n), |acc, m| {
            acc.add(&m.scale(&random_scalar(rng, a.field())))
                .expect("same shape")
        })
}

/// Per-instance generator, independent of evaluation order.
pub fn instance_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64 + 1);
    rng
}

/// `Ad^l(L)` and `Der(L)`, plus one random intermediate closure when
/// `dim Der - dim Ad^l >= 2`.
pub fn pair_derivation_sets<R: Rng>(
    rng: &mut R,
    a: &Arc<LeibnizAlgebra>,
) -> Vec<(DerivationKind, DerivationSet)> {
    let adl = adl_set(a);
    let der = derivation_algebra(a);
    let mut out = Vec::with_capacity(3);
    if der.dim() >= adl.dim() + 2 {
        // A few draws to find a proper intermediate subalgebra; keep the last otherwise.
        let mut pick = None;
        for _ in 0..4 {
            let x = random_element(rng, &der);
            let closure = lie_closure(a, &[x]).expect("element of Der(L)");
            let proper = closure.dim() < der.dim() && closure.dim() > adl.dim();
            pick = Some(closure);
            if proper {
                break;
            }
        }
        out.push((DerivationKind::Closure, pick.expect("at least one draw")));
    }
    out.insert(0, (DerivationKind::Der, der));
    out.insert(0, (DerivationKind::Adl, adl));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(strategy: FuzzStrategy, dim: usize, field: FieldSpec, count: usize) -> FuzzConfig {
        FuzzConfig {
            dim,
            field,
            count,
            seed: 1,
            strategy,
        }
    }

    #[test]
    fn catalog_conjugate_always_valid() {
        let s = fuzz_generate(cfg(
            FuzzStrategy::CatalogConjugate,
            3,
            FieldSpec::Prime(5),
            200,
        ))
        .unwrap();
        let items: Vec<_> = s.collect();
        assert_eq!(items.len(), 200);
        assert!(items.iter().all(|i| i.algebra.dim() == 3));
        assert!(items
            .iter()
            .all(|i| i.algebra.constants().validate_leibniz().is_empty()));
    }

    #[test]
    fn same_seed_same_stream() {
        for strategy in [FuzzStrategy::CatalogConjugate, FuzzStrategy::GradedReject] {
            let c = cfg(strategy, 3, FieldSpec::Rational, 20);
            let a: Vec<_> = fuzz_generate(c).unwrap().collect();
            let b: Vec<_> = fuzz_generate(c).unwrap().collect();
            assert_eq!(a, b);
            let other: Vec<_> = fuzz_generate(FuzzConfig { seed: 2, ..c })
                .unwrap()
                .collect();
            assert_ne!(a, other);
        }
    }

    #[test]
    fn config_errors() {
        assert_eq!(
            fuzz_generate(cfg(FuzzStrategy::GradedReject, 0, FieldSpec::Rational, 1)).unwrap_err(),
            FuzzError::Dim
        );
        assert_eq!(
            fuzz_generate(cfg(FuzzStrategy::GradedReject, 2, FieldSpec::Rational, 0)).unwrap_err(),
            FuzzError::Count
        );
        assert!("random".parse::<FuzzStrategy>().is_err());
    }

    #[test]
    fn graded_support() {
        assert_eq!(graded_positions(2), vec![(0, 0, 1)]);
        assert_eq!(graded_positions(3).len(), 5);
        let s = fuzz_generate(cfg(FuzzStrategy::GradedReject, 4, FieldSpec::Prime(3), 30)).unwrap();
        for item in s {
            let t = item.algebra.constants();
            for i in 0..4 {
                for j in 0..4 {
                    for k in 0..=i.max(j) {
                        assert!(t.get(i, j, k).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn pairing_includes_closure_when_room() {
        let a = Arc::new(LeibnizAlgebra::abelian(FieldSpec::Rational, 2));
        let sets = pair_derivation_sets(&mut instance_rng(7, 0), &a);
        let kinds: Vec<_> = sets.iter().map(|(k, _)| *k).collect();
        assert_eq!(
            kinds,
            vec![
                DerivationKind::Adl,
                DerivationKind::Der,
                DerivationKind::Closure
            ]
        );
        assert!(sets.iter().all(|(_, d)| d.contains_adl() && d.closed()));

        let a1 = Arc::new(catalog(CatalogFamily::CyclicLeibniz, 2, FieldSpec::Rational).unwrap());
        assert_eq!(pair_derivation_sets(&mut instance_rng(7, 0), &a1).len(), 2);
    }
}
