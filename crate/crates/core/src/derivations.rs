//! Derivations of a Leibniz algebra and subalgebras `D` of `Der(L)`.
//!
//! A derivation set is stored as a subspace of `F^(n^2)` (row-major flattened
//! matrices). From it we get the annihilator `Ann_L(D)`, the D-center
//! `A_L(D) = Ann_L(D) ∩ ζ^l(L)`, the D-derived subalgebra `[L, D]`, and the
//! derivations induced on a quotient by a D-invariant ideal.

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{AlgebraError, LeibnizAlgebra};
use crate::field::Scalar;
use crate::linalg::{column_space, kernel, LinalgError, Matrix, QuotientMap, Subspace, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerivationError {
    #[error("matrix {index} is not a derivation (first failing basis pair ({}, {}))", .pairs[0].0 + 1, .pairs[0].1 + 1)]
    NotDerivation {
        index: usize,
        pairs: Vec<(usize, usize)>,
    },
    #[error("expected a {expected}x{expected} matrix, found {rows}x{cols}")]
    Shape {
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("derivation set does not contain Ad^l(L)")]
    MissingAdl,
    #[error("subspace is not invariant under the derivation set")]
    NotInvariant,
    #[error("internal invariant violated: {0}")]
    Invariant(&'static str),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

fn check_shape(a: &LeibnizAlgebra, m: &Matrix) -> Result<(), DerivationError> {
    let n = a.dim();
    if m.rows() != n || m.cols() != n {
        return Err(DerivationError::Shape {
            expected: n,
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if m.field() != a.field() {
        return Err(LinalgError::Field(a.field(), m.field()).into());
    }
    Ok(())
}

/// Basis pairs `(i, j)` where `m[e_i, e_j] != [m e_i, e_j] + [e_i, m e_j]`.
/// Empty means `m` is a derivation.
pub fn derivation_violations(
    a: &LeibnizAlgebra,
    m: &Matrix,
) -> Result<Vec<(usize, usize)>, DerivationError> {
    check_shape(a, m)?;
    let n = a.dim();
    let images: Vec<Vector> = (0..n).map(|c| m.column(c)).collect();
    let mut bad = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let lhs = m.mul_vec(a.basis_bracket(i, j))?;
            let x = a.bracket(&images[i], &a.basis_vector(j))?;
            let y = a.bracket(&a.basis_vector(i), &images[j])?;
            let rhs: Vector = x.iter().zip(&y).map(|(p, q)| p + q).collect();
            if lhs != rhs {
                bad.push((i, j));
            }
        }
    }
    Ok(bad)
}

pub fn is_derivation(a: &LeibnizAlgebra, m: &Matrix) -> Result<bool, DerivationError> {
    Ok(derivation_violations(a, m)?.is_empty())
}

/// The `n^3 x n^2` linear system whose kernel is `Der(L)`. Unknown `(r, c)`
/// (the `e_r`-coefficient of the image of `e_c`) sits in column `r n + c`;
/// equation `(i, j, k)` is the `e_k`-coefficient of the derivation law on `(e_i, e_j)`.
pub fn derivation_system(a: &LeibnizAlgebra) -> Matrix {
    let n = a.dim();
    let t = a.constants();
    let mut sys = Matrix::zeros(a.field(), n * n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let row = (i * n + j) * n + k;
                let mut acc = vec![Scalar::zero(a.field()); n * n];
                // m([e_i, e_j])_k = sum_s c[i][j][s] m[k][s]
                for s in 0..n {
                    acc[k * n + s] = &acc[k * n + s] + t.get(i, j, s);
                }
                // [m e_i, e_j]_k = sum_s m[s][i] c[s][j][k]
                for s in 0..n {
                    acc[s * n + i] = &acc[s * n + i] - t.get(s, j, k);
                }
                // [e_i, m e_j]_k = sum_s m[s][j] c[i][s][k]
                for s in 0..n {
                    acc[s * n + j] = &acc[s * n + j] - t.get(i, s, k);
                }
                for (col, x) in acc.into_iter().enumerate() {
                    sys.set(row, col, x);
                }
            }
        }
    }
    sys
}

/// `Ad^l(L)`: the left multiplications `l_{e_i}` and their span.
#[derive(Debug, Clone)]
pub struct AdLeft {
    pub generators: Vec<Matrix>,
    pub space: Subspace,
}

impl AdLeft {
    /// `l_x = sum_i x_i l_{e_i}`.
    pub fn map(&self, x: &[Scalar]) -> Matrix {
        let n = self.generators.len();
        let field = self.space.field();
        self.generators
            .iter()
            .zip(x)
            .fold(Matrix::zeros(field, n, n), |acc, (g, xi)| {
                acc.add(&g.scale(xi)).expect("same shape")
            })
    }
}

pub fn ad_left(a: &LeibnizAlgebra) -> AdLeft {
    let n = a.dim();
    let generators: Vec<Matrix> = (0..n)
        .map(|i| {
            a.left_multiplication(&a.basis_vector(i))
                .expect("basis vector")
        })
        .collect();
    let space = Subspace::span(
        a.field(),
        n * n,
        generators.iter().map(Matrix::flatten).collect(),
    )
    .expect("flattened n x n");
    AdLeft { generators, space }
}

/// A subspace `D` of `Der(L)` together with its algebra.
#[derive(Debug, Clone)]
pub struct DerivationSet {
    algebra: Arc<LeibnizAlgebra>,
    space: Subspace,
    adl: Subspace,
    contains_adl: bool,
    closed: bool,
}

impl PartialEq for DerivationSet {
    fn eq(&self, other: &Self) -> bool {
        self.algebra == other.algebra && self.space == other.space
    }
}

impl DerivationSet {
    /// Wraps an arbitrary subspace of matrices, checking that each basis
    /// element is a derivation and recording (not enforcing) whether the
    /// space contains `Ad^l(L)` and is commutator-closed.
    pub fn from_space(
        algebra: Arc<LeibnizAlgebra>,
        space: Subspace,
    ) -> Result<Self, DerivationError> {
        let n = algebra.dim();
        if space.ambient() != n * n {
            return Err(LinalgError::Dimension {
                expected: n * n,
                found: space.ambient(),
            }
            .into());
        }
        let mats = unflatten_all(&algebra, &space);
        for (index, m) in mats.iter().enumerate() {
            let pairs = derivation_violations(&algebra, m)?;
            if !pairs.is_empty() {
                return Err(DerivationError::NotDerivation { index, pairs });
            }
        }
        let adl = ad_left(&algebra).space;
        let contains_adl = adl.is_subspace_of(&space)?;
        let closed = commutators(&mats)?
            .iter()
            .map(|c| space.contains(&c.flatten()))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .all(|b| b);
        Ok(DerivationSet {
            algebra,
            space,
            adl,
            contains_adl,
            closed,
        })
    }

    pub fn from_matrices(
        algebra: Arc<LeibnizAlgebra>,
        mats: &[Matrix],
    ) -> Result<Self, DerivationError> {
        let n = algebra.dim();
        for m in mats {
            check_shape(&algebra, m)?;
        }
        let space = Subspace::span(
            algebra.field(),
            n * n,
            mats.iter().map(Matrix::flatten).collect(),
        )?;
        Self::from_space(algebra, space)
    }

    pub fn algebra(&self) -> &Arc<LeibnizAlgebra> {
        &self.algebra
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn adl_space(&self) -> &Subspace {
        &self.adl
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn contains_adl(&self) -> bool {
        self.contains_adl
    }

    pub fn closed(&self) -> bool {
        self.closed
    }

    /// `dim D - dim Ad^l(L)`.
    pub fn k(&self) -> Result<usize, DerivationError> {
        if !self.contains_adl {
            return Err(DerivationError::MissingAdl);
        }
        Ok(self.dim() - self.adl.dim())
    }

    /// Canonical basis of `D` as `n x n` matrices.
    pub fn matrices(&self) -> Vec<Matrix> {
        unflatten_all(&self.algebra, &self.space)
    }

    pub fn contains(&self, m: &Matrix) -> Result<bool, DerivationError> {
        check_shape(&self.algebra, m)?;
        Ok(self.space.contains(&m.flatten())?)
    }

    /// `Ann_L(D)`: the common kernel. The zero set annihilates all of `L`.
    pub fn annihilator(&self) -> Subspace {
        let n = self.algebra.dim();
        let stacked = self
            .matrices()
            .iter()
            .try_fold(Matrix::zeros(self.algebra.field(), 0, n), |acc, m| {
                acc.vstack(m)
            })
            .expect("n x n blocks");
        kernel(&stacked)
    }

    /// `A_L(D) = Ann_L(D) ∩ ζ^l(L)`; requires `Ad^l(L) ⊆ D`.
    pub fn d_center(&self) -> Result<Subspace, DerivationError> {
        if !self.contains_adl {
            return Err(DerivationError::MissingAdl);
        }
        let centers = self.algebra.centers();
        let dc = self.annihilator().intersect(&centers.left)?;
        if !dc.is_subspace_of(&centers.center)? {
            return Err(DerivationError::Invariant("D-center not inside the center"));
        }
        Ok(dc)
    }

    /// `[L, D]`: the sum of the images of the basis derivations.
    pub fn d_derived(&self) -> Subspace {
        let n = self.algebra.dim();
        let cols: Vec<Vector> = self
            .matrices()
            .iter()
            .flat_map(|m| (0..n).map(|c| m.column(c)).collect::<Vec<_>>())
            .collect();
        let m = Matrix::from_columns(self.algebra.field(), n, &cols).expect("columns of length n");
        column_space(&m)
    }

    /// Sum of `α(u)` over the basis derivations `α`.
    pub fn image_of(&self, u: &Subspace) -> Result<Subspace, DerivationError> {
        self.matrices().iter().try_fold(
            Subspace::zero(self.algebra.field(), self.algebra.dim()),
            |acc, m| Ok(acc.sum(&u.image(m)?)?),
        )
    }

    pub fn leaves_invariant(&self, u: &Subspace) -> Result<bool, DerivationError> {
        Ok(self.image_of(u)?.is_subspace_of(u)?)
    }

    /// Derivations induced on `L / z`. `z` must be an ideal and D-invariant.
    pub fn induced(&self, z: &Subspace) -> Result<InducedSet, DerivationError> {
        let (quotient, map) = self.algebra.quotient(z)?;
        if !self.leaves_invariant(z)? {
            return Err(DerivationError::NotInvariant);
        }
        let project = |m: &Matrix| -> Result<Matrix, DerivationError> {
            Ok(map.proj.mul(m)?.mul(&map.section)?)
        };
        let images = self
            .matrices()
            .iter()
            .map(project)
            .collect::<Result<Vec<_>, _>>()?;
        let quotient = Arc::new(quotient);
        let set = DerivationSet::from_matrices(quotient.clone(), &images)?;

        let adl_images = ad_left(&self.algebra)
            .generators
            .iter()
            .map(project)
            .collect::<Result<Vec<_>, _>>()?;
        let q = quotient.dim();
        let projected_adl = Subspace::span(
            quotient.field(),
            q * q,
            adl_images.iter().map(Matrix::flatten).collect(),
        )?;
        if projected_adl != *set.adl_space() {
            return Err(DerivationError::Invariant(
                "image of Ad^l(L) differs from Ad^l of the quotient",
            ));
        }
        if self.contains_adl && !set.contains_adl {
            return Err(DerivationError::Invariant("induced set lost Ad^l"));
        }
        Ok(InducedSet {
            quotient,
            map,
            set,
            images,
        })
    }
}

/// The image `η(D)` of a derivation set in `Der(L / z)`.
#[derive(Debug, Clone)]
pub struct InducedSet {
    pub quotient: Arc<LeibnizAlgebra>,
    pub map: QuotientMap,
    pub set: DerivationSet,
    /// `proj · α · section` for each basis derivation `α`, in basis order.
    pub images: Vec<Matrix>,
}

fn unflatten_all(a: &LeibnizAlgebra, space: &Subspace) -> Vec<Matrix> {
    space
        .basis_vectors()
        .iter()
        .map(|v| Matrix::unflatten(a.field(), a.dim(), v).expect("length n^2"))
        .collect()
}

fn commutators(mats: &[Matrix]) -> Result<Vec<Matrix>, LinalgError> {
    let mut out = Vec::new();
    for i in 0..mats.len() {
        for j in i + 1..mats.len() {
            out.push(mats[i].commutator(&mats[j])?);
        }
    }
    Ok(out)
}

/// `Der(L)`, solved as the kernel of [`derivation_system`].
pub fn derivation_algebra(a: &Arc<LeibnizAlgebra>) -> DerivationSet {
    let space = kernel(&derivation_system(a));
    let set = DerivationSet::from_space(a.clone(), space).expect("kernel elements are derivations");
    debug_assert!(set.contains_adl && set.closed);
    set
}

/// Smallest commutator-closed subspace containing `generators` and `Ad^l(L)`.
pub fn lie_closure(
    a: &Arc<LeibnizAlgebra>,
    generators: &[Matrix],
) -> Result<DerivationSet, DerivationError> {
    for (index, g) in generators.iter().enumerate() {
        let pairs = derivation_violations(a, g)?;
        if !pairs.is_empty() {
            return Err(DerivationError::NotDerivation { index, pairs });
        }
    }
    let n = a.dim();
    let mut vectors: Vec<Vector> = generators.iter().map(Matrix::flatten).collect();
    vectors.extend(ad_left(a).space.basis_vectors());
    let mut space = Subspace::span(a.field(), n * n, vectors)?;
    // Dimension grows strictly each round and is capped by n^2.
    loop {
        let mats = unflatten_all(a, &space);
        let extra: Vec<Vector> = commutators(&mats)?.iter().map(Matrix::flatten).collect();
        let next = space.sum(&Subspace::span(a.field(), n * n, extra)?)?;
        if next.dim() == space.dim() {
            break;
        }
        space = next;
    }
    let set = DerivationSet::from_space(a.clone(), space)?;
    if !(set.contains_adl && set.closed) {
        return Err(DerivationError::Invariant(
            "closure is not a subalgebra containing Ad^l",
        ));
    }
    Ok(set)
}

/// `Ad^l(L)` as a derivation set.
pub fn adl_set(a: &Arc<LeibnizAlgebra>) -> DerivationSet {
    lie_closure(a, &[]).expect("Ad^l(L) is an ideal of Der(L)")
}
