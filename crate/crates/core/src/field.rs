//! Exact scalars: arbitrary-precision rationals and prime fields `F_p`.
//!
//! A [`Scalar`] always carries enough information to know its field, and its
//! representation is canonical, so derived `PartialEq` is field equality.
//! Rationals stay in `i64` fractions while they fit and switch to big
//! integers only on overflow.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedMul, One, ToPrimitive, Zero};
use thiserror::Error;

/// Largest admissible characteristic (exclusive). Residues fit in `u32` and
/// products in `u64`.
pub const MAX_PRIME: u32 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("malformed scalar `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("denominator not allowed over a prime field: `{0}`")]
    DenominatorInPrimeField(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    Mismatch(FieldSpec, FieldSpec),
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("unknown field `{0}` (expected `rational`, `prime:<p>` or `F<p>`)")]
    UnknownField(String),
    #[error("operation `{0:?}` takes {1} operand(s)")]
    Arity(ArithOp, usize),
}

/// The two kinds of field supported: `Q` and `F_p` for a prime `p < 2^31`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rational,
    Prime(u32),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if p >= MAX_PRIME as u64 || !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldSpec::Prime(p as u32))
    }

    /// The characteristic; 0 for the rationals.
    pub fn characteristic(self) -> u32 {
        match self {
            FieldSpec::Rational => 0,
            FieldSpec::Prime(p) => p,
        }
    }

    /// Line used by the algebra file format: `field rational` / `field prime 5`.
    pub fn file_line(self) -> String {
        match self {
            FieldSpec::Rational => "field rational".to_string(),
            FieldSpec::Prime(p) => format!("field prime {p}"),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "rational"),
            FieldSpec::Prime(p) => write!(f, "prime:{p}"),
        }
    }
}

/// Accepts `rational`, `Q`, `prime:<p>`, `prime <p>` and `F<p>` (case-insensitive).
impl FromStr for FieldSpec {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase();
        if t == "rational" || t == "q" {
            return Ok(FieldSpec::Rational);
        }
        let digits = t
            .strip_prefix("prime:")
            .or_else(|| t.strip_prefix("prime "))
            .or_else(|| t.strip_prefix('f'))
            .map(str::trim);
        match digits.and_then(|d| d.parse::<u64>().ok()) {
            Some(p) => FieldSpec::prime(p),
            None => Err(FieldError::UnknownField(s.to_string())),
        }
    }
}

/// An exact rational number.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rational(Repr);

// Small whenever numerator and denominator fit in i64 (numerator never
// i64::MIN, so negation cannot overflow).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small(Ratio<i64>),
    Big(BigRational),
}

impl Rational {
    fn small(r: Ratio<i64>) -> Self {
        if *r.numer() == i64::MIN {
            return Rational(Repr::Big(Self::widen(&r)));
        }
        Rational(Repr::Small(r))
    }

    fn big(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN => Rational(Repr::Small(Ratio::new_raw(n, d))),
            _ => Rational(Repr::Big(r)),
        }
    }

    fn widen(r: &Ratio<i64>) -> BigRational {
        BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(r) => Self::widen(r),
            Repr::Big(r) => r.clone(),
        }
    }

    pub fn from_integer(v: i64) -> Self {
        Self::small(Ratio::from_integer(v))
    }

    /// `num/den` in lowest terms. `den` must be nonzero.
    pub fn from_big(num: BigInt, den: BigInt) -> Self {
        Self::big(BigRational::new(num, den))
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_zero(),
            Repr::Big(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_one(),
            Repr::Big(r) => r.is_one(),
        }
    }

    fn add(&self, other: &Rational) -> Rational {
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &other.0) {
            if let Some(c) = a.checked_add(b) {
                return Self::small(c);
            }
        }
        Self::big(self.to_big() + other.to_big())
    }

    fn mul(&self, other: &Rational) -> Rational {
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &other.0) {
            if let Some(c) = a.checked_mul(b) {
                return Self::small(c);
            }
        }
        Self::big(self.to_big() * other.to_big())
    }

    fn neg(&self) -> Rational {
        match &self.0 {
            Repr::Small(r) => Rational(Repr::Small(-r)),
            Repr::Big(r) => Self::big(-r),
        }
    }

    /// Panics on zero.
    fn recip(&self) -> Rational {
        match &self.0 {
            Repr::Small(r) => Rational(Repr::Small(r.recip())),
            Repr::Big(r) => Self::big(r.recip()),
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(r) => write!(f, "{r}"),
            Repr::Big(r) => write!(f, "{r}"),
        }
    }
}

/// An element of a [`FieldSpec`] in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(Rational),
    Prime { value: u32, p: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

impl Scalar {
    pub fn zero(field: FieldSpec) -> Self {
        match field {
            FieldSpec::Rational => Scalar::Rational(Rational::from_integer(0)),
            FieldSpec::Prime(p) => Scalar::Prime { value: 0, p },
        }
    }

    pub fn one(field: FieldSpec) -> Self {
        Scalar::from_i64(field, 1)
    }

    pub fn from_i64(field: FieldSpec, v: i64) -> Self {
        match field {
            FieldSpec::Rational => Scalar::Rational(Rational::from_integer(v)),
            FieldSpec::Prime(p) => Scalar::Prime {
                value: v.rem_euclid(p as i64) as u32,
                p,
            },
        }
    }

    /// `num/den` over the given field. Panics if `den` is zero, or is divisible by `p`.
    pub fn from_ratio(field: FieldSpec, num: i64, den: i64) -> Self {
        Scalar::from_i64(field, num)
            .checked_div(&Scalar::from_i64(field, den))
            .expect("nonzero denominator")
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rational,
            Scalar::Prime { p, .. } => FieldSpec::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Prime { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Prime { value, .. } => *value == 1,
        }
    }

    /// Parses `[-]digits[/digits]` over the rationals, or `[-]digits` over `F_p`
    /// (reduced modulo `p`).
    pub fn parse(text: &str, field: FieldSpec) -> Result<Self, FieldError> {
        let malformed = || FieldError::Malformed(text.to_string());
        let (neg, body) = match text.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, text),
        };
        let (num, den) = match body.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (body, None),
        };
        let is_digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
        if !is_digits(num) || den.is_some_and(|d| !is_digits(d)) {
            return Err(malformed());
        }
        match field {
            FieldSpec::Rational => {
                let mut n: BigInt = num.parse().map_err(|_| malformed())?;
                if neg {
                    n = -n;
                }
                let d: BigInt = match den {
                    Some(d) => d.parse().map_err(|_| malformed())?,
                    None => BigInt::one(),
                };
                if d.is_zero() {
                    return Err(FieldError::ZeroDenominator(text.to_string()));
                }
                Ok(Scalar::Rational(Rational::from_big(n, d)))
            }
            FieldSpec::Prime(p) => {
                if den.is_some() {
                    return Err(FieldError::DenominatorInPrimeField(text.to_string()));
                }
                // Reduce digit by digit so arbitrarily long literals are accepted.
                let mut r = 0u64;
                for b in num.bytes() {
                    r = (r * 10 + (b - b'0') as u64) % p as u64;
                }
                if neg {
                    r = (p as u64 - r) % p as u64;
                }
                Ok(Scalar::Prime { value: r as u32, p })
            }
        }
    }

    fn check_same(&self, other: &Scalar) -> Result<(), FieldError> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(FieldError::Mismatch(self.field(), other.field()))
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.check_same(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a.add(b)),
            (Scalar::Prime { value: a, p }, Scalar::Prime { value: b, .. }) => Scalar::Prime {
                value: ((*a as u64 + *b as u64) % *p as u64) as u32,
                p: *p,
            },
            _ => unreachable!(),
        })
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.check_same(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a.mul(b)),
            (Scalar::Prime { value: a, p }, Scalar::Prime { value: b, .. }) => Scalar::Prime {
                value: ((*a as u64 * *b as u64) % *p as u64) as u32,
                p: *p,
            },
            _ => unreachable!(),
        })
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.check_same(other)?;
        self.checked_mul(&other.inv()?)
    }

    fn neg_ref(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(a.neg()),
            Scalar::Prime { value, p } => Scalar::Prime {
                value: (*p - *value) % *p,
                p: *p,
            },
        }
    }

    pub fn inv(&self) -> Result<Scalar, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(a) => Scalar::Rational(a.recip()),
            Scalar::Prime { value, p } => Scalar::Prime {
                value: mod_pow(*value as u64, *p as u64 - 2, *p as u64) as u32,
                p: *p,
            },
        })
    }
}

/// Field operations by tag: `b` must be present for binary operations and
/// absent for `Neg` / `Inv`.
pub fn scalar_arith(op: ArithOp, a: &Scalar, b: Option<&Scalar>) -> Result<Scalar, FieldError> {
    match (op, b) {
        (ArithOp::Neg, None) => Ok(a.neg_ref()),
        (ArithOp::Inv, None) => a.inv(),
        (ArithOp::Add, Some(b)) => a.checked_add(b),
        (ArithOp::Sub, Some(b)) => a.checked_sub(b),
        (ArithOp::Mul, Some(b)) => a.checked_mul(b),
        (ArithOp::Div, Some(b)) => a.checked_div(b),
        (ArithOp::Neg | ArithOp::Inv, Some(_)) => Err(FieldError::Arity(op, 1)),
        (_, None) => Err(FieldError::Arity(op, 2)),
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Prime { value, .. } => write!(f, "{value}"),
        }
    }
}

// Operator impls panic on field mismatch; the matrix layer guarantees a
// single field per container, so a mismatch there is a bug.
impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        self.checked_add(rhs).expect("scalar field mismatch")
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self.checked_sub(rhs).expect("scalar field mismatch")
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        self.checked_mul(rhs).expect("scalar field mismatch")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Q: FieldSpec = FieldSpec::Rational;
    const F5: FieldSpec = FieldSpec::Prime(5);

    #[test]
    fn parse_normalizes() {
        assert_eq!(
            Scalar::parse("3/6", Q).unwrap(),
            Scalar::from_ratio(Q, 1, 2)
        );
        assert_eq!(Scalar::parse("7", F5).unwrap(), Scalar::from_i64(F5, 2));
        assert_eq!(
            Scalar::parse("-2/4", Q).unwrap(),
            Scalar::from_ratio(Q, -1, 2)
        );
        assert_eq!(Scalar::parse("-2/4", Q).unwrap().to_string(), "-1/2");
        assert_eq!(Scalar::parse("0/7", Q).unwrap().to_string(), "0");
        assert_eq!(Scalar::parse("-1", F5).unwrap().to_string(), "4");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            Scalar::parse("", Q),
            Err(FieldError::Malformed(_))
        ));
        assert!(matches!(
            Scalar::parse("1/", Q),
            Err(FieldError::Malformed(_))
        ));
        assert!(matches!(
            Scalar::parse("1.5", Q),
            Err(FieldError::Malformed(_))
        ));
        assert!(matches!(
            Scalar::parse("--1", Q),
            Err(FieldError::Malformed(_))
        ));
        assert!(matches!(
            Scalar::parse("1/-2", Q),
            Err(FieldError::Malformed(_))
        ));
        assert!(matches!(
            Scalar::parse("3/0", Q),
            Err(FieldError::ZeroDenominator(_))
        ));
        assert!(matches!(
            Scalar::parse("1/2", F5),
            Err(FieldError::DenominatorInPrimeField(_))
        ));
    }

    #[test]
    fn arith_examples() {
        let half = Scalar::from_ratio(Q, 1, 2);
        let third = Scalar::from_ratio(Q, 1, 3);
        assert_eq!(
            scalar_arith(ArithOp::Add, &half, Some(&third)).unwrap(),
            Scalar::from_ratio(Q, 5, 6)
        );
        assert_eq!(
            scalar_arith(ArithOp::Inv, &Scalar::from_i64(F5, 2), None).unwrap(),
            Scalar::from_i64(F5, 3)
        );
        let x = Scalar::from_ratio(Q, -7, 3);
        assert!(scalar_arith(ArithOp::Mul, &Scalar::zero(Q), Some(&x))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn arith_errors() {
        assert_eq!(Scalar::zero(Q).inv(), Err(FieldError::DivisionByZero));
        assert_eq!(
            scalar_arith(ArithOp::Div, &Scalar::one(F5), Some(&Scalar::zero(F5))),
            Err(FieldError::DivisionByZero)
        );
        assert!(matches!(
            scalar_arith(ArithOp::Add, &Scalar::one(Q), Some(&Scalar::one(F5))),
            Err(FieldError::Mismatch(_, _))
        ));
        assert!(matches!(
            scalar_arith(ArithOp::Add, &Scalar::one(Q), None),
            Err(FieldError::Arity(ArithOp::Add, 2))
        ));
    }

    #[test]
    fn field_spec_parsing() {
        assert_eq!("rational".parse::<FieldSpec>().unwrap(), Q);
        assert_eq!("F5".parse::<FieldSpec>().unwrap(), F5);
        assert_eq!("prime:7".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(7));
        assert_eq!("prime 2".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(2));
        assert_eq!("F4".parse::<FieldSpec>(), Err(FieldError::NotPrime(4)));
        assert!(FieldSpec::prime(1).is_err());
        assert!(FieldSpec::prime(2147483659).is_err());
        assert!(FieldSpec::prime(2147483647).is_ok());
        assert!("reals".parse::<FieldSpec>().is_err());
    }

    fn arb_field() -> impl Strategy<Value = FieldSpec> {
        prop_oneof![
            Just(Q),
            Just(FieldSpec::Prime(2)),
            Just(FieldSpec::Prime(3)),
            Just(F5),
            Just(FieldSpec::Prime(2147483647)),
        ]
    }

    fn arb_scalar(field: FieldSpec) -> impl Strategy<Value = Scalar> {
        (-1000i64..1000, 1i64..50).prop_map(move |(n, d)| match field {
            FieldSpec::Rational => Scalar::from_ratio(field, n, d),
            FieldSpec::Prime(_) => Scalar::from_i64(field, n * d),
        })
    }

    fn arb_triple() -> impl Strategy<Value = (Scalar, Scalar, Scalar)> {
        arb_field().prop_flat_map(|f| (arb_scalar(f), arb_scalar(f), arb_scalar(f)))
    }

    #[test]
    fn overflow_switches_representation() {
        let big = Scalar::from_i64(Q, i64::MAX);
        let sq = &big * &big;
        assert_eq!(sq.to_string(), "85070591730234615847396907784232501249");
        let back = (&sq * &big.inv().unwrap()).checked_sub(&big).unwrap();
        assert!(back.is_zero());
        assert_eq!(back, Scalar::zero(Q));
        let min = Scalar::from_i64(Q, i64::MIN);
        assert_eq!((-&min).to_string(), "9223372036854775808");
        assert_eq!(
            &min + &Scalar::zero(Q),
            Scalar::parse("-9223372036854775808", Q).unwrap()
        );
        assert_eq!(
            Scalar::from_ratio(Q, 1, i64::MIN + 1).inv().unwrap(),
            Scalar::from_i64(Q, i64::MIN + 1)
        );
    }

    proptest! {
        #[test]
        fn field_axioms((a, b, c) in arb_triple()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn rational_ops_match_bigrational(n1 in any::<i64>(), d1 in 1i64.., n2 in any::<i64>(), d2 in 1i64..) {
            let big = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
            let (x, y) = (Scalar::from_ratio(Q, n1, d1), Scalar::from_ratio(Q, n2, d2));
            prop_assert_eq!((&x + &y).to_string(), (big(n1, d1) + big(n2, d2)).to_string());
            prop_assert_eq!((&x * &y).to_string(), (big(n1, d1) * big(n2, d2)).to_string());
            prop_assert_eq!((&x - &y).to_string(), (big(n1, d1) - big(n2, d2)).to_string());
            let z = &(&x * &y) - &(&y * &x);
            prop_assert_eq!(z, Scalar::zero(Q));
        }

        #[test]
        fn parse_format_roundtrip((a, _, _) in arb_triple()) {
            let text = a.to_string();
            let back = Scalar::parse(&text, a.field()).unwrap();
            prop_assert_eq!(&back, &a);
            prop_assert_eq!(back.to_string(), text);
        }
    }
}
