//! Text formats for algebras and derivation lists.
//!
//! Algebra file:
//!
//! ```text
//! # comment
//! field rational            (or: field prime <p>)
//! dim <n>
//! bracket <i> <j> : <scalar>*e<k> [+ <scalar>*e<k>]...
//! ```
//!
//! Derivation file: `derivations <count>`, then per matrix a `matrix` line
//! followed by `n` rows of `n` scalars; row `r`, column `c` is the
//! `e_r`-coefficient of the image of `e_c`.
//!
//! Indices are 1-based; unspecified brackets are zero.

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{AlgebraError, LeibnizAlgebra, LeibnizViolation, StructureConstants};
use crate::derivations::{derivation_violations, lie_closure, DerivationError, DerivationSet};
use crate::field::{FieldError, FieldSpec, Scalar};
use crate::linalg::{is_zero_vector, zero_vector, Matrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Scalar { line: usize, source: FieldError },
    #[error("line {line}: index {index} out of range 1..={dim}")]
    IndexOutOfRange {
        line: usize,
        index: usize,
        dim: usize,
    },
    #[error("line {line}: duplicate bracket ({i}, {j})")]
    DuplicateBracket { line: usize, i: usize, j: usize },
    #[error("not a left Leibniz algebra; violating triples: {}", render_violations(.0))]
    NotLeibniz(Vec<LeibnizViolation>),
    #[error("matrix {} is not a derivation; failing basis pairs: {}", .index + 1, render_pairs(.pairs))]
    NotDerivation {
        index: usize,
        pairs: Vec<(usize, usize)>,
    },
    #[error(transparent)]
    Derivation(#[from] DerivationError),
}

impl FormatError {
    /// True for well-formed input that fails a mathematical check (Leibniz
    /// identity, derivation law), as opposed to a syntax error.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            FormatError::NotLeibniz(_) | FormatError::NotDerivation { .. }
        )
    }
}

fn render_violations(v: &[LeibnizViolation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

fn render_pairs(p: &[(usize, usize)]) -> String {
    p.iter()
        .map(|(i, j)| format!("({}, {})", i + 1, j + 1))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Non-empty, comment-stripped lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(no, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        (!tokens.is_empty()).then_some((no + 1, tokens))
    })
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_index(line: usize, token: &str, dim: usize) -> Result<usize, FormatError> {
    let index: usize = token
        .parse()
        .map_err(|_| syntax(line, format!("expected an index, found `{token}`")))?;
    if index == 0 || index > dim {
        return Err(FormatError::IndexOutOfRange { line, index, dim });
    }
    Ok(index - 1)
}

fn parse_scalar(line: usize, token: &str, field: FieldSpec) -> Result<Scalar, FormatError> {
    Scalar::parse(token, field).map_err(|source| FormatError::Scalar { line, source })
}

fn parse_header<'a>(
    lines: &mut impl Iterator<Item = (usize, Vec<&'a str>)>,
) -> Result<(FieldSpec, usize), FormatError> {
    let (line, tokens) = lines
        .next()
        .ok_or_else(|| syntax(1, "missing `field` line"))?;
    let field = match tokens.as_slice() {
        ["field", "rational"] => FieldSpec::Rational,
        ["field", "prime", p] => {
            let p: u64 = p
                .parse()
                .map_err(|_| syntax(line, format!("expected a prime, found `{p}`")))?;
            FieldSpec::prime(p).map_err(|source| FormatError::Scalar { line, source })?
        }
        _ => {
            return Err(syntax(
                line,
                "expected `field rational` or `field prime <p>`",
            ))
        }
    };
    let (line, tokens) = lines
        .next()
        .ok_or_else(|| syntax(line + 1, "missing `dim` line"))?;
    let dim = match tokens.as_slice() {
        ["dim", n] => n
            .parse()
            .map_err(|_| syntax(line, format!("expected a dimension, found `{n}`")))?,
        _ => return Err(syntax(line, "expected `dim <n>`")),
    };
    Ok((field, dim))
}

/// Parses and validates an algebra file.
pub fn parse_algebra_file(text: &str) -> Result<LeibnizAlgebra, FormatError> {
    let mut lines = content_lines(text);
    let (field, dim) = parse_header(&mut lines)?;
    let mut table = StructureConstants::zero(field, dim);
    let mut seen = vec![false; dim * dim];
    for (line, tokens) in lines {
        if tokens[0] != "bracket" {
            return Err(syntax(line, format!("unexpected `{}`", tokens[0])));
        }
        if tokens.len() < 4 || tokens[3] != ":" {
            return Err(syntax(line, "expected `bracket <i> <j> : <terms>`"));
        }
        let i = parse_index(line, tokens[1], dim)?;
        let j = parse_index(line, tokens[2], dim)?;
        if std::mem::replace(&mut seen[i * dim + j], true) {
            return Err(FormatError::DuplicateBracket {
                line,
                i: i + 1,
                j: j + 1,
            });
        }
        let rhs = tokens[4..].join(" ");
        let mut value = zero_vector(field, dim);
        for term in rhs.split('+').map(str::trim) {
            let (coeff, basis) = term
                .split_once('*')
                .ok_or_else(|| syntax(line, format!("expected `<scalar>*e<k>`, found `{term}`")))?;
            let k = basis
                .strip_prefix('e')
                .ok_or_else(|| syntax(line, format!("expected `e<k>`, found `{basis}`")))?;
            let k = parse_index(line, k, dim)?;
            let c = parse_scalar(line, coeff, field)?;
            value[k] = &value[k] + &c;
        }
        table.set_bracket(i, j, &value);
    }
    LeibnizAlgebra::new(table).map_err(|e| match e {
        AlgebraError::NotLeibniz(v) => FormatError::NotLeibniz(v),
        other => unreachable!("validation only fails with NotLeibniz: {other}"),
    })
}

/// Renders an algebra in the file format; nonzero brackets only, in
/// `(i, j)` order, terms in `k` order.
pub fn render_algebra(a: &LeibnizAlgebra) -> String {
    let mut out = format!("{}\ndim {}\n", a.field().file_line(), a.dim());
    let n = a.dim();
    for i in 0..n {
        for j in 0..n {
            let v = a.basis_bracket(i, j);
            if is_zero_vector(v) {
                continue;
            }
            let terms: Vec<String> = v
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(k, x)| format!("{x}*e{}", k + 1))
                .collect();
            out.push_str(&format!(
                "bracket {} {} : {}\n",
                i + 1,
                j + 1,
                terms.join(" + ")
            ));
        }
    }
    out
}

/// Parses the matrices of a derivation file without checking the derivation law.
pub fn parse_derivation_matrices(
    text: &str,
    dim: usize,
    field: FieldSpec,
) -> Result<Vec<Matrix>, FormatError> {
    let mut lines = content_lines(text);
    let (line, tokens) = lines
        .next()
        .ok_or_else(|| syntax(1, "missing `derivations` line"))?;
    let count: usize = match tokens.as_slice() {
        ["derivations", c] => c
            .parse()
            .map_err(|_| syntax(line, format!("expected a count, found `{c}`")))?,
        _ => return Err(syntax(line, "expected `derivations <count>`")),
    };
    let mut mats = Vec::with_capacity(count);
    let mut last = line;
    for m in 0..count {
        let (line, tokens) = lines
            .next()
            .ok_or_else(|| syntax(last + 1, format!("missing matrix {}", m + 1)))?;
        if tokens.as_slice() != ["matrix"] {
            return Err(syntax(line, "expected `matrix`"));
        }
        last = line;
        let mut rows = Vec::with_capacity(dim);
        for _ in 0..dim {
            let (line, tokens) = lines
                .next()
                .ok_or_else(|| syntax(last + 1, format!("matrix {} has too few rows", m + 1)))?;
            if tokens.len() != dim {
                return Err(syntax(
                    line,
                    format!("expected {dim} entries, found {}", tokens.len()),
                ));
            }
            rows.push(
                tokens
                    .iter()
                    .map(|t| parse_scalar(line, t, field))
                    .collect::<Result<Vec<_>, _>>()?,
            );
            last = line;
        }
        mats.push(Matrix::from_rows(field, dim, rows).expect("rows checked"));
    }
    if let Some((line, _)) = lines.next() {
        return Err(syntax(line, "trailing content after the last matrix"));
    }
    Ok(mats)
}

/// Parses a derivation file against its algebra and returns the Lie closure
/// of the listed derivations together with `Ad^l(L)`.
pub fn parse_derivation_file(
    text: &str,
    a: &Arc<LeibnizAlgebra>,
) -> Result<DerivationSet, FormatError> {
    let mats = parse_derivation_matrices(text, a.dim(), a.field())?;
    for (index, m) in mats.iter().enumerate() {
        let pairs = derivation_violations(a, m)?;
        if !pairs.is_empty() {
            return Err(FormatError::NotDerivation { index, pairs });
        }
    }
    Ok(lie_closure(a, &mats)?)
}

pub fn render_derivations(mats: &[Matrix]) -> String {
    let mut out = format!("derivations {}\n", mats.len());
    for m in mats {
        out.push_str("matrix\n");
        out.push_str(&m.to_string());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{catalog, CatalogFamily};

    const Q: FieldSpec = FieldSpec::Rational;

    #[test]
    fn parses_a1() {
        let a = parse_algebra_file("field rational\ndim 2\nbracket 1 1 : 1*e2\n").unwrap();
        assert_eq!(a, catalog(CatalogFamily::CyclicLeibniz, 2, Q).unwrap());
    }

    #[test]
    fn parses_abelian_over_f5() {
        let a = parse_algebra_file("field prime 5\ndim 1\n").unwrap();
        assert_eq!(a, LeibnizAlgebra::abelian(FieldSpec::Prime(5), 1));
    }

    #[test]
    fn comments_and_multi_terms() {
        let text = "# Heisenberg\nfield rational   # over Q\n\ndim 3\nbracket 1 2 : 1*e3\nbracket 2 1 : -1*e3 + 0*e1\n";
        let a = parse_algebra_file(text).unwrap();
        assert_eq!(a, catalog(CatalogFamily::Heisenberg, 3, Q).unwrap());
        let b = parse_algebra_file("field rational\ndim 2\nbracket 1 1 : 1/2*e2+1/2*e2\n").unwrap();
        assert_eq!(b, catalog(CatalogFamily::CyclicLeibniz, 2, Q).unwrap());
    }

    #[test]
    fn leibniz_violation_is_reported() {
        let err = parse_algebra_file("field rational\ndim 2\nbracket 1 1 : 1*e1\n").unwrap_err();
        match &err {
            FormatError::NotLeibniz(v) => assert!(v.iter().any(|x| x.triple == (0, 0, 0))),
            other => panic!("unexpected {other:?}"),
        }
        assert!(err.is_validation());
        assert!(err.to_string().contains("(1, 1, 1)"));
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let cases = [
            ("", 1),
            ("field real\ndim 2\n", 1),
            ("field rational\nsize 2\n", 2),
            ("field rational\ndim 2\nbracket 1 1 1*e2\n", 3),
            ("field rational\ndim 2\n\nbracket 1 1 : e2\n", 4),
            ("field rational\ndim 2\nbracket 1 1 : 1*x2\n", 3),
            ("field rational\ndim 2\nfoo\n", 3),
        ];
        for (text, line) in cases {
            match parse_algebra_file(text).unwrap_err() {
                FormatError::Syntax { line: l, .. } => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: unexpected {other:?}"),
            }
        }
        assert!(matches!(
            parse_algebra_file("field rational\ndim 2\nbracket 1 3 : 1*e2\n"),
            Err(FormatError::IndexOutOfRange {
                line: 3,
                index: 3,
                dim: 2
            })
        ));
        assert!(matches!(
            parse_algebra_file("field rational\ndim 2\nbracket 1 1 : 1*e3\n"),
            Err(FormatError::IndexOutOfRange { index: 3, .. })
        ));
        assert!(matches!(
            parse_algebra_file("field rational\ndim 2\nbracket 1 1 : 1*e2\nbracket 1 1 : 0*e2\n"),
            Err(FormatError::DuplicateBracket {
                line: 4,
                i: 1,
                j: 1
            })
        ));
        assert!(matches!(
            parse_algebra_file("field prime 5\ndim 2\nbracket 1 1 : 1/2*e2\n"),
            Err(FormatError::Scalar { line: 3, .. })
        ));
        assert!(matches!(
            parse_algebra_file("field prime 6\ndim 2\n"),
            Err(FormatError::Scalar { line: 1, .. })
        ));
    }

    #[test]
    fn render_then_parse() {
        for f in CatalogFamily::ALL {
            let dim = f.fixed_dim().unwrap_or(4);
            for field in [Q, FieldSpec::Prime(3)] {
                let a = catalog(f, dim, field).unwrap();
                assert_eq!(parse_algebra_file(&render_algebra(&a)).unwrap(), a);
            }
        }
        let h = catalog(CatalogFamily::Heisenberg, 3, Q).unwrap();
        assert_eq!(
            render_algebra(&h),
            "field rational\ndim 3\nbracket 1 2 : 1*e3\nbracket 2 1 : -1*e3\n"
        );
    }

    fn a1() -> Arc<LeibnizAlgebra> {
        Arc::new(catalog(CatalogFamily::CyclicLeibniz, 2, Q).unwrap())
    }

    #[test]
    fn derivation_file_examples() {
        let d = parse_derivation_file("derivations 0\n", &a1()).unwrap();
        assert_eq!(d.space(), &crate::derivations::ad_left(&a1()).space);

        let d = parse_derivation_file("derivations 1\nmatrix\n1 0\n0 2\n", &a1()).unwrap();
        assert_eq!(d.dim(), 2);
        assert_eq!(d.k().unwrap(), 1);

        // e2 -> e1 is not a derivation
        let err = parse_derivation_file("derivations 1\nmatrix\n0 1\n0 0\n", &a1()).unwrap_err();
        match &err {
            FormatError::NotDerivation { index: 0, pairs } => assert!(pairs.contains(&(0, 0))),
            other => panic!("unexpected {other:?}"),
        }
        assert!(err.is_validation());
        assert!(err.to_string().contains("(1, 1)"));
    }

    #[test]
    fn derivation_file_syntax() {
        let a = a1();
        for text in [
            "",
            "derivations x\n",
            "derivations 1\n",
            "derivations 1\nmatrix\n1 0\n",
            "derivations 1\nmatrix\n1 0 0\n0 2\n",
            "derivations 1\nmat\n1 0\n0 2\n",
            "derivations 1\nmatrix\n1 0\n0 2\nmatrix\n",
        ] {
            let err = parse_derivation_file(text, &a).unwrap_err();
            assert!(
                matches!(err, FormatError::Syntax { .. }),
                "{text:?}: {err:?}"
            );
        }
    }

    #[test]
    fn derivations_roundtrip() {
        let mats = vec![
            Matrix::from_i64(Q, &[&[1, 0], &[0, 2]]),
            Matrix::from_i64(Q, &[&[0, 0], &[1, 0]]),
        ];
        let text = render_derivations(&mats);
        assert_eq!(parse_derivation_matrices(&text, 2, Q).unwrap(), mats);
    }
}
