//! Left Leibniz algebras given by structure constants.
//!
//! A [`StructureConstants`] table is raw, unchecked data. A [`LeibnizAlgebra`]
//! can only be obtained by validating a table, so every algebra value in the
//! crate satisfies `[[x,y],z] = [x,[y,z]] - [y,[x,z]]`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::field::{FieldSpec, Scalar};
use crate::linalg::{
    axpy, is_zero_vector, kernel, unit_vector, zero_vector, LinalgError, Matrix, QuotientMap,
    Subspace, Vector,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("left Leibniz identity fails on {} basis triple(s), first at {}", .0.len(), .0[0])]
    NotLeibniz(Vec<LeibnizViolation>),
    #[error("subspace is not a two-sided ideal")]
    NotIdeal,
    #[error("family `{family}` does not exist in dimension {dim}")]
    InvalidFamily { family: CatalogFamily, dim: usize },
    #[error("unknown catalog family `{0}`")]
    UnknownFamily(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// One failure of the Leibniz identity on basis elements (0-based indices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeibnizViolation {
    pub triple: (usize, usize, usize),
    /// `[[e_i, e_j], e_k]`
    pub lhs: Vector,
    /// `[e_i, [e_j, e_k]] - [e_j, [e_i, e_k]]`
    pub rhs: Vector,
}

impl fmt::Display for LeibnizViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, j, k) = self.triple;
        let show = |v: &Vector| {
            v.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        };
        write!(
            f,
            "({}, {}, {}): lhs ({}) != rhs ({})",
            i + 1,
            j + 1,
            k + 1,
            show(&self.lhs),
            show(&self.rhs)
        )
    }
}

/// `n^3` constants with `[e_i, e_j] = sum_k c[i][j][k] e_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StructureConstants {
    field: FieldSpec,
    dim: usize,
    c: Vec<Scalar>,
}

impl StructureConstants {
    pub fn zero(field: FieldSpec, dim: usize) -> Self {
        StructureConstants {
            field,
            dim,
            c: vec![Scalar::zero(field); dim * dim * dim],
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dim + j) * self.dim + k
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.c[self.idx(i, j, k)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, x: Scalar) {
        assert_eq!(x.field(), self.field, "constant over the wrong field");
        let idx = self.idx(i, j, k);
        self.c[idx] = x;
    }

    /// Sets `[e_i, e_j]` to `v`.
    pub fn set_bracket(&mut self, i: usize, j: usize, v: &[Scalar]) {
        assert_eq!(v.len(), self.dim);
        for (k, x) in v.iter().enumerate() {
            self.set(i, j, k, x.clone());
        }
    }

    /// `[e_i, e_j]` as a coordinate slice.
    pub fn basis_bracket(&self, i: usize, j: usize) -> &[Scalar] {
        let start = self.idx(i, j, 0);
        &self.c[start..start + self.dim]
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let mut out = zero_vector(self.field, self.dim);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                axpy(&mut out, &(xi * yj), self.basis_bracket(i, j));
            }
        }
        out
    }

    /// Checks the left Leibniz identity on all `n^3` basis triples and returns
    /// every violation found.
    pub fn validate_leibniz(&self) -> Vec<LeibnizViolation> {
        let n = self.dim;
        let mut violations = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let eij = self.basis_bracket(i, j).to_vec();
                for k in 0..n {
                    let ek = unit_vector(self.field, n, k);
                    let lhs = self.bracket(&eij, &ek);
                    let a = self.bracket(&unit_vector(self.field, n, i), self.basis_bracket(j, k));
                    let b = self.bracket(&unit_vector(self.field, n, j), self.basis_bracket(i, k));
                    let rhs: Vector = a.iter().zip(&b).map(|(x, y)| x - y).collect();
                    if lhs != rhs {
                        violations.push(LeibnizViolation {
                            triple: (i, j, k),
                            lhs,
                            rhs,
                        });
                    }
                }
            }
        }
        violations
    }
}

/// A validated finite-dimensional left Leibniz algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LeibnizAlgebra {
    table: StructureConstants,
    lie: bool,
}

/// Left, right and two-sided centers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Centers {
    pub left: Subspace,
    pub right: Subspace,
    pub center: Subspace,
}

impl LeibnizAlgebra {
    pub fn new(table: StructureConstants) -> Result<Self, AlgebraError> {
        let violations = table.validate_leibniz();
        if !violations.is_empty() {
            return Err(AlgebraError::NotLeibniz(violations));
        }
        let lie = polarized_lie_condition(&table);
        Ok(LeibnizAlgebra { table, lie })
    }

    pub fn abelian(field: FieldSpec, dim: usize) -> Self {
        LeibnizAlgebra {
            table: StructureConstants::zero(field, dim),
            lie: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.table.dim
    }

    pub fn field(&self) -> FieldSpec {
        self.table.field
    }

    pub fn constants(&self) -> &StructureConstants {
        &self.table
    }

    fn check_vector(&self, x: &[Scalar]) -> Result<(), LinalgError> {
        if x.len() != self.dim() {
            return Err(LinalgError::Dimension {
                expected: self.dim(),
                found: x.len(),
            });
        }
        match x.iter().find(|s| s.field() != self.field()) {
            Some(s) => Err(LinalgError::Field(self.field(), s.field())),
            None => Ok(()),
        }
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vector, AlgebraError> {
        self.check_vector(x)?;
        self.check_vector(y)?;
        Ok(self.table.bracket(x, y))
    }

    pub fn basis_bracket(&self, i: usize, j: usize) -> &[Scalar] {
        self.table.basis_bracket(i, j)
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        unit_vector(self.field(), self.dim(), i)
    }

    /// `[x, x] = 0` for all `x`, tested in polarized form so that it is
    /// correct in characteristic 2.
    pub fn is_lie(&self) -> bool {
        self.lie
    }

    /// Matrix of `l_x : y -> [x, y]`.
    pub fn left_multiplication(&self, x: &[Scalar]) -> Result<Matrix, AlgebraError> {
        self.check_vector(x)?;
        let n = self.dim();
        let cols: Vec<Vector> = (0..n)
            .map(|c| self.table.bracket(x, &self.basis_vector(c)))
            .collect();
        Ok(Matrix::from_columns(self.field(), n, &cols)?)
    }

    pub fn centers(&self) -> Centers {
        let n = self.dim();
        // left: sum_i x_i c[i][j][k] = 0 for all (j, k); right: sum_i x_i c[j][i][k] = 0.
        let mut left_sys = Matrix::zeros(self.field(), n * n, n);
        let mut right_sys = Matrix::zeros(self.field(), n * n, n);
        for j in 0..n {
            for k in 0..n {
                for i in 0..n {
                    left_sys.set(j * n + k, i, self.table.get(i, j, k).clone());
                    right_sys.set(j * n + k, i, self.table.get(j, i, k).clone());
                }
            }
        }
        let left = kernel(&left_sys);
        let right = kernel(&right_sys);
        let center = left.intersect(&right).expect("same ambient");
        Centers {
            left,
            right,
            center,
        }
    }

    /// `[L, L]`: the span of all basis brackets.
    pub fn derived_subalgebra(&self) -> Subspace {
        let n = self.dim();
        let rows = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| self.basis_bracket(i, j).to_vec())
            .collect();
        Subspace::span(self.field(), n, rows).expect("brackets have length n")
    }

    fn check_subspace(&self, u: &Subspace) -> Result<(), AlgebraError> {
        if u.ambient() != self.dim() {
            return Err(LinalgError::Dimension {
                expected: self.dim(),
                found: u.ambient(),
            }
            .into());
        }
        if u.field() != self.field() {
            return Err(LinalgError::Field(self.field(), u.field()).into());
        }
        Ok(())
    }

    /// Two-sided ideal test: `[e_j, u] ⊆ u` and `[u, e_j] ⊆ u` for every `j`.
    pub fn is_ideal(&self, u: &Subspace) -> Result<bool, AlgebraError> {
        self.check_subspace(u)?;
        for x in u.basis_vectors() {
            for j in 0..self.dim() {
                let ej = self.basis_vector(j);
                if !u.contains(&self.table.bracket(&ej, &x))?
                    || !u.contains(&self.table.bracket(&x, &ej))?
                {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `L / z` with basis given by the non-pivot coordinates of `z`.
    pub fn quotient(&self, z: &Subspace) -> Result<(LeibnizAlgebra, QuotientMap), AlgebraError> {
        if !self.is_ideal(z)? {
            return Err(AlgebraError::NotIdeal);
        }
        let qmap = z.quotient_map();
        let q = qmap.qdim;
        let lifts: Vec<Vector> = (0..q).map(|a| qmap.section.column(a)).collect();
        let mut table = StructureConstants::zero(self.field(), q);
        for a in 0..q {
            for b in 0..q {
                let br = self.table.bracket(&lifts[a], &lifts[b]);
                table.set_bracket(a, b, &qmap.proj.mul_vec(&br)?);
            }
        }
        // Well defined because z is an ideal; validation is a cheap recheck.
        let algebra = LeibnizAlgebra::new(table)?;
        Ok((algebra, qmap))
    }

    pub fn direct_sum(&self, other: &LeibnizAlgebra) -> Result<LeibnizAlgebra, AlgebraError> {
        if self.field() != other.field() {
            return Err(LinalgError::Field(self.field(), other.field()).into());
        }
        let (na, nb) = (self.dim(), other.dim());
        let mut table = StructureConstants::zero(self.field(), na + nb);
        for (offset, part) in [(0, self), (na, other)] {
            let m = part.dim();
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        table.set(
                            offset + i,
                            offset + j,
                            offset + k,
                            part.table.get(i, j, k).clone(),
                        );
                    }
                }
            }
        }
        LeibnizAlgebra::new(table)
    }

    /// Structure constants in the basis `f_j = sum_i p[i][j] e_i`.
    pub fn change_basis(&self, p: &Matrix) -> Result<LeibnizAlgebra, AlgebraError> {
        let n = self.dim();
        if p.rows() != n || p.cols() != n {
            return Err(LinalgError::Dimension {
                expected: n,
                found: p.rows().max(p.cols()),
            }
            .into());
        }
        let p_inv = p.inverse()?;
        let cols: Vec<Vector> = (0..n).map(|j| p.column(j)).collect();
        let mut table = StructureConstants::zero(self.field(), n);
        for a in 0..n {
            for b in 0..n {
                let v = self.table.bracket(&cols[a], &cols[b]);
                table.set_bracket(a, b, &p_inv.mul_vec(&v)?);
            }
        }
        LeibnizAlgebra::new(table)
    }
}

fn polarized_lie_condition(t: &StructureConstants) -> bool {
    let n = t.dim;
    for i in 0..n {
        if !is_zero_vector(t.basis_bracket(i, i)) {
            return false;
        }
        for j in i + 1..n {
            for k in 0..n {
                if !(t.get(i, j, k) + t.get(j, i, k)).is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

/// Fixture families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CatalogFamily {
    /// All brackets zero.
    Abelian,
    /// `[e_1, e_i] = e_{i+1}`; non-Lie since `[e_1, e_1] = e_2`.
    CyclicLeibniz,
    /// `[e_1, e_2] = e_3 = -[e_2, e_1]`.
    Heisenberg,
    /// `[e_1, e_2] = e_2 = -[e_2, e_1]`.
    Nonabelian2,
}

impl CatalogFamily {
    pub const ALL: [CatalogFamily; 4] = [
        CatalogFamily::Abelian,
        CatalogFamily::CyclicLeibniz,
        CatalogFamily::Heisenberg,
        CatalogFamily::Nonabelian2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CatalogFamily::Abelian => "abelian",
            CatalogFamily::CyclicLeibniz => "cyclic_leibniz",
            CatalogFamily::Heisenberg => "heisenberg",
            CatalogFamily::Nonabelian2 => "nonabelian2",
        }
    }

    /// Dimension forced by the family, if any.
    pub fn fixed_dim(self) -> Option<usize> {
        match self {
            CatalogFamily::Heisenberg => Some(3),
            CatalogFamily::Nonabelian2 => Some(2),
            _ => None,
        }
    }

    pub fn supports_dim(self, dim: usize) -> bool {
        match self {
            CatalogFamily::Abelian => true,
            CatalogFamily::CyclicLeibniz => dim >= 2,
            CatalogFamily::Heisenberg => dim == 3,
            CatalogFamily::Nonabelian2 => dim == 2,
        }
    }
}

impl fmt::Display for CatalogFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CatalogFamily {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CatalogFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| AlgebraError::UnknownFamily(s.to_string()))
    }
}

pub fn catalog(
    family: CatalogFamily,
    dim: usize,
    field: FieldSpec,
) -> Result<LeibnizAlgebra, AlgebraError> {
    if !family.supports_dim(dim) {
        return Err(AlgebraError::InvalidFamily { family, dim });
    }
    let mut t = StructureConstants::zero(field, dim);
    let one = Scalar::one(field);
    match family {
        CatalogFamily::Abelian => {}
        CatalogFamily::CyclicLeibniz => {
            for i in 0..dim - 1 {
                t.set(0, i, i + 1, one.clone());
            }
        }
        CatalogFamily::Heisenberg => {
            t.set(0, 1, 2, one.clone());
            t.set(1, 0, 2, -&one);
        }
        CatalogFamily::Nonabelian2 => {
            t.set(0, 1, 1, one.clone());
            t.set(1, 0, 1, -&one);
        }
    }
    LeibnizAlgebra::new(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rational;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| Scalar::from_i64(Q, x)).collect()
    }

    fn span(n: usize, rows: &[&[i64]]) -> Subspace {
        Subspace::span(Q, n, rows.iter().map(|r| v(r)).collect()).unwrap()
    }

    fn a1() -> LeibnizAlgebra {
        catalog(CatalogFamily::CyclicLeibniz, 2, Q).unwrap()
    }

    fn a2() -> LeibnizAlgebra {
        catalog(CatalogFamily::Heisenberg, 3, Q).unwrap()
    }

    #[test]
    fn bracket_examples() {
        let ab = LeibnizAlgebra::abelian(Q, 3);
        assert_eq!(
            ab.bracket(&v(&[1, 2, 3]), &v(&[4, 5, 6])).unwrap(),
            v(&[0, 0, 0])
        );
        assert_eq!(a1().bracket(&v(&[1, 0]), &v(&[1, 0])).unwrap(), v(&[0, 1]));
        assert_eq!(a1().bracket(&v(&[1, 1]), &v(&[1, 0])).unwrap(), v(&[0, 1]));
        assert!(a1().bracket(&v(&[1]), &v(&[1, 0])).is_err());
        assert!(a1()
            .bracket(
                &[
                    Scalar::one(FieldSpec::Prime(3)),
                    Scalar::one(FieldSpec::Prime(3))
                ],
                &v(&[1, 0])
            )
            .is_err());
    }

    #[test]
    fn leibniz_validation() {
        assert!(StructureConstants::zero(Q, 4).validate_leibniz().is_empty());
        assert!(a1().constants().validate_leibniz().is_empty());
        let mut t = StructureConstants::zero(Q, 2);
        t.set(0, 0, 0, Scalar::one(Q));
        let viol = t.validate_leibniz();
        assert!(viol.iter().any(|x| x.triple == (0, 0, 0)));
        let at = viol.iter().find(|x| x.triple == (0, 0, 0)).unwrap();
        assert_eq!(at.lhs, v(&[1, 0]));
        assert_eq!(at.rhs, v(&[0, 0]));
        assert!(matches!(
            LeibnizAlgebra::new(t),
            Err(AlgebraError::NotLeibniz(_))
        ));
    }

    #[test]
    fn lie_detection() {
        assert!(a2().is_lie());
        assert!(!a1().is_lie());
        assert!(LeibnizAlgebra::abelian(Q, 2).is_lie());
        // Heisenberg over F_2: antisymmetric and [e_i, e_i] = 0, so Lie.
        assert!(catalog(CatalogFamily::Heisenberg, 3, FieldSpec::Prime(2))
            .unwrap()
            .is_lie());
        // Over F_2, [e1,e2] = [e2,e1] = e3 with [e_i,e_i] = 0 is Lie; a diagonal
        // bracket is not, even though the table is "antisymmetric" mod 2.
        let mut t = StructureConstants::zero(FieldSpec::Prime(2), 2);
        t.set(0, 0, 1, Scalar::one(FieldSpec::Prime(2)));
        assert!(!LeibnizAlgebra::new(t).unwrap().is_lie());
    }

    #[test]
    fn centers_examples() {
        let c = LeibnizAlgebra::abelian(Q, 3).centers();
        assert!(c.left.is_full() && c.right.is_full() && c.center.is_full());
        let c = a1().centers();
        let e2 = span(2, &[&[0, 1]]);
        assert_eq!((c.left, c.right, c.center), (e2.clone(), e2.clone(), e2));
        let c = a2().centers();
        let e3 = span(3, &[&[0, 0, 1]]);
        assert_eq!((c.left, c.right, c.center), (e3.clone(), e3.clone(), e3));
        let c = catalog(CatalogFamily::Nonabelian2, 2, Q).unwrap().centers();
        assert!(c.center.is_zero());
    }

    #[test]
    fn derived_examples() {
        assert!(LeibnizAlgebra::abelian(Q, 3).derived_subalgebra().is_zero());
        assert_eq!(a1().derived_subalgebra(), span(2, &[&[0, 1]]));
        assert_eq!(a2().derived_subalgebra(), span(3, &[&[0, 0, 1]]));
    }

    #[test]
    fn ideal_examples() {
        let a = a2();
        assert!(a.is_ideal(&Subspace::zero(Q, 3)).unwrap());
        assert!(a.is_ideal(&Subspace::full(Q, 3)).unwrap());
        assert!(!a.is_ideal(&span(3, &[&[1, 0, 0]])).unwrap());
        assert!(a.is_ideal(&Subspace::zero(Q, 2)).is_err());
    }

    #[test]
    fn quotient_examples() {
        let a = a2();
        let (q, _) = a.quotient(&Subspace::zero(Q, 3)).unwrap();
        assert_eq!(q, a);
        let (q, _) = a.quotient(&Subspace::full(Q, 3)).unwrap();
        assert_eq!(q.dim(), 0);
        let (q, _) = a1().quotient(&span(2, &[&[0, 1]])).unwrap();
        assert_eq!(q, LeibnizAlgebra::abelian(Q, 1));
        assert_eq!(
            a.quotient(&span(3, &[&[1, 0, 0]])),
            Err(AlgebraError::NotIdeal)
        );
    }

    #[test]
    fn catalog_examples() {
        let c = a1();
        assert!(!c.is_lie());
        assert_eq!(c.basis_bracket(0, 0), &v(&[0, 1])[..]);
        assert_eq!(a2().centers().center.dim(), 1);
        assert!(catalog(CatalogFamily::Abelian, 3, Q)
            .unwrap()
            .centers()
            .center
            .is_full());
        assert!(catalog(CatalogFamily::CyclicLeibniz, 5, Q).is_ok());
        assert!(matches!(
            catalog(CatalogFamily::Heisenberg, 4, Q),
            Err(AlgebraError::InvalidFamily { .. })
        ));
        assert!(catalog(CatalogFamily::CyclicLeibniz, 1, Q).is_err());
        assert!("nonabelian2".parse::<CatalogFamily>().is_ok());
        assert!("sl2".parse::<CatalogFamily>().is_err());
    }

    #[test]
    fn direct_sum_examples() {
        let ab1 = LeibnizAlgebra::abelian(Q, 1);
        assert_eq!(ab1.direct_sum(&ab1).unwrap(), LeibnizAlgebra::abelian(Q, 2));
        let s = a1().direct_sum(&ab1).unwrap();
        assert_eq!(s.dim(), 3);
        assert_eq!(s.centers().center.dim(), 2);
        assert_eq!(
            a2().direct_sum(&LeibnizAlgebra::abelian(Q, 0)).unwrap(),
            a2()
        );
        assert!(a2()
            .direct_sum(&LeibnizAlgebra::abelian(FieldSpec::Prime(2), 1))
            .is_err());
    }

    #[test]
    fn change_basis_examples() {
        let a = a1();
        assert_eq!(a.change_basis(&Matrix::identity(Q, 2)).unwrap(), a);
        let swap = Matrix::from_i64(Q, &[&[0, 1], &[1, 0]]);
        let b = a.change_basis(&swap).unwrap();
        // f1 = e2, f2 = e1: [f2, f2] = [e1, e1] = e2 = f1
        assert_eq!(b.basis_bracket(1, 1), &v(&[1, 0])[..]);
        assert_eq!(b.basis_bracket(0, 0), &v(&[0, 0])[..]);
        assert_eq!(b.centers().center.dim(), 1);
        assert!(matches!(
            a.change_basis(&Matrix::from_i64(Q, &[&[1, 1], &[1, 1]])),
            Err(AlgebraError::Linalg(LinalgError::Singular))
        ));
    }

    #[test]
    fn left_multiplication_matches_bracket() {
        let a = a2();
        let x = v(&[2, -1, 5]);
        let l = a.left_multiplication(&x).unwrap();
        for c in 0..3 {
            assert_eq!(l.column(c), a.bracket(&x, &a.basis_vector(c)).unwrap());
        }
    }
}
