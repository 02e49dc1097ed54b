//! Brute-force oracles over small prime fields, written against plain
//! integer arithmetic so they share no code with the library's algorithms.
#![allow(dead_code)]

use leibniz_core::algebra::StructureConstants;
use leibniz_core::field::{FieldSpec, Scalar};
use leibniz_core::linalg::{Matrix, Subspace};
use rand::Rng;
use std::collections::BTreeSet;

pub type Table = Vec<u32>; // c[(i*n+j)*n+k]

pub fn residue(x: &Scalar) -> u32 {
    match x {
        Scalar::Prime { value, .. } => *value,
        Scalar::Rational(_) => panic!("oracles run over F_p"),
    }
}

pub fn bracket(c: &Table, n: usize, p: u32, x: &[u32], y: &[u32]) -> Vec<u32> {
    let mut out = vec![0u32; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                out[k] = (out[k] + x[i] * y[j] % p * c[(i * n + j) * n + k]) % p;
            }
        }
    }
    out
}

pub fn unit(n: usize, i: usize) -> Vec<u32> {
    (0..n).map(|k| u32::from(k == i)).collect()
}

pub fn add(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| (x + y) % p).collect()
}

pub fn sub(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| (x + p - y) % p).collect()
}

pub fn is_leibniz(c: &Table, n: usize, p: u32) -> bool {
    (0..n).all(|i| {
        (0..n).all(|j| {
            (0..n).all(|k| {
                let (x, y, z) = (unit(n, i), unit(n, j), unit(n, k));
                let lhs = bracket(c, n, p, &bracket(c, n, p, &x, &y), &z);
                let rhs = sub(
                    p,
                    &bracket(c, n, p, &x, &bracket(c, n, p, &y, &z)),
                    &bracket(c, n, p, &y, &bracket(c, n, p, &x, &z)),
                );
                lhs == rhs
            })
        })
    })
}

/// `m` in column convention: `m[r][c]` is the e_r-coefficient of m(e_c).
pub fn apply(m: &[Vec<u32>], p: u32, x: &[u32]) -> Vec<u32> {
    (0..m.len())
        .map(|r| (0..x.len()).fold(0, |acc, c| (acc + m[r][c] * x[c]) % p))
        .collect()
}

pub fn is_derivation(c: &Table, n: usize, p: u32, m: &[Vec<u32>]) -> bool {
    (0..n).all(|i| {
        (0..n).all(|j| {
            let (x, y) = (unit(n, i), unit(n, j));
            let lhs = apply(m, p, &bracket(c, n, p, &x, &y));
            let rhs = add(
                p,
                &bracket(c, n, p, &apply(m, p, &x), &y),
                &bracket(c, n, p, &x, &apply(m, p, &y)),
            );
            lhs == rhs
        })
    })
}

/// All vectors of `F_p^len`, in lexicographic order.
pub fn all_vectors(p: u32, len: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..p).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

pub fn to_library(c: &Table, n: usize, p: u32) -> StructureConstants {
    let f = FieldSpec::Prime(p);
    let mut t = StructureConstants::zero(f, n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                t.set(i, j, k, Scalar::from_i64(f, c[(i * n + j) * n + k] as i64));
            }
        }
    }
    t
}

/// Every element of a subspace, by summing all combinations of its basis.
pub fn elements(s: &Subspace, p: u32) -> BTreeSet<Vec<u32>> {
    let basis: Vec<Vec<u32>> = s
        .basis_vectors()
        .iter()
        .map(|v| v.iter().map(residue).collect())
        .collect();
    all_vectors(p, basis.len())
        .into_iter()
        .map(|coeffs| {
            coeffs
                .iter()
                .zip(&basis)
                .fold(vec![0; s.ambient()], |acc, (a, b)| {
                    acc.iter().zip(b).map(|(x, y)| (x + a * y) % p).collect()
                })
        })
        .collect()
}

pub fn span_set(gens: &[Vec<u32>], p: u32, ambient: usize) -> BTreeSet<Vec<u32>> {
    all_vectors(p, gens.len())
        .into_iter()
        .map(|coeffs| {
            coeffs
                .iter()
                .zip(gens)
                .fold(vec![0; ambient], |acc, (a, b)| {
                    acc.iter().zip(b).map(|(x, y)| (x + a * y) % p).collect()
                })
        })
        .collect()
}

pub fn lib_span(gens: &[Vec<u32>], p: u32, ambient: usize) -> Subspace {
    let f = FieldSpec::Prime(p);
    let vs = gens
        .iter()
        .map(|g| g.iter().map(|&x| Scalar::from_i64(f, x as i64)).collect())
        .collect();
    Subspace::span(f, ambient, vs).unwrap()
}

pub fn random_gens<R: Rng>(rng: &mut R, p: u32, ambient: usize) -> Vec<Vec<u32>> {
    let count = rng.random_range(0..=ambient);
    (0..count)
        .map(|_| (0..ambient).map(|_| rng.random_range(0..p)).collect())
        .collect()
}

pub fn lib_matrix(m: &[Vec<u32>], p: u32, cols: usize) -> Matrix {
    let f = FieldSpec::Prime(p);
    let rows = m
        .iter()
        .map(|r| r.iter().map(|&x| Scalar::from_i64(f, x as i64)).collect())
        .collect();
    Matrix::from_rows(f, cols, rows).unwrap()
}

/// Number of linear maps `F_p^n -> F_p^n` (column convention) satisfying the derivation law.
pub fn count_derivations(c: &Table, n: usize, p: u32) -> usize {
    all_vectors(p, n * n)
        .iter()
        .filter(|flat| {
            let m: Vec<Vec<u32>> = flat.chunks(n).map(<[u32]>::to_vec).collect();
            is_derivation(c, n, p, &m)
        })
        .count()
}

/// Sizes of the left center, right center and center, by enumerating `L`.
pub fn count_centers(c: &Table, n: usize, p: u32) -> [usize; 3] {
    let units: Vec<Vec<u32>> = (0..n).map(|i| unit(n, i)).collect();
    let zero = vec![0; n];
    let mut out = [0; 3];
    for x in all_vectors(p, n) {
        let left = units.iter().all(|y| bracket(c, n, p, &x, y) == zero);
        let right = units.iter().all(|y| bracket(c, n, p, y, &x) == zero);
        out[0] += usize::from(left);
        out[1] += usize::from(right);
        out[2] += usize::from(left && right);
    }
    out
}

/// Log base `p` of an exact power `q = p^k`.
pub fn log_p(q: usize, p: u32) -> usize {
    let (mut q, mut k) = (q, 0);
    while q > 1 {
        assert_eq!(q % p as usize, 0, "not a power of p");
        q /= p as usize;
        k += 1;
    }
    k
}
