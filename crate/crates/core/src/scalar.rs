//! Exact arithmetic in the real field Q(sqrt2, sqrt3).
//!
//! Every matrix entry, structure constant and basis-change coefficient in this
//! crate lives in this field, so all algebraic validation can be done with
//! zero tolerance. An element is stored as `a + b*sqrt2 + c*sqrt3 + d*sqrt6`
//! with arbitrary-precision rational coordinates.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("division by zero in Q(sqrt2, sqrt3)")]
    DivisionByZero,
    #[error("cannot parse field scalar from {0:?}")]
    Parse(String),
}

/// An element of Q(sqrt2, sqrt3), kept in canonical form (rationals reduced,
/// denominators positive — `BigRational` maintains this invariant).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FieldScalar {
    /// rational part
    pub a: Rational,
    /// coefficient of sqrt2
    pub b: Rational,
    /// coefficient of sqrt3
    pub c: Rational,
    /// coefficient of sqrt6
    pub d: Rational,
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

impl FieldScalar {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        Self { a, b, c, d }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat(n, 1))
    }

    pub fn from_rational(a: Rational) -> Self {
        Self { a, ..Self::default() }
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(rat(num, den))
    }

    pub fn sqrt2() -> Self {
        Self { b: Rational::one(), ..Self::default() }
    }

    pub fn sqrt3() -> Self {
        Self { c: Rational::one(), ..Self::default() }
    }

    pub fn sqrt6() -> Self {
        Self { d: Rational::one(), ..Self::default() }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    /// True when the element lies in Q (no radical part).
    pub fn is_rational(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    /// Galois conjugation sqrt2 -> -sqrt2.
    fn conj2(&self) -> Self {
        Self { a: self.a.clone(), b: -self.b.clone(), c: self.c.clone(), d: -self.d.clone() }
    }

    /// Galois conjugation sqrt3 -> -sqrt3.
    fn conj3(&self) -> Self {
        Self { a: self.a.clone(), b: self.b.clone(), c: -self.c.clone(), d: -self.d.clone() }
    }

    /// Exact multiplicative inverse.
    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        // x * conj2(x) is fixed by conj2, hence lies in Q(sqrt3);
        // multiplying by its conj3 lands in Q.
        let y = self.clone() * self.conj2();
        let z = y.clone() * y.conj3();
        debug_assert!(z.is_rational());
        let num = self.conj2() * y.conj3();
        let inv_z = z.a.recip();
        Ok(num.scaled(&inv_z))
    }

    /// Multiply by a rational scalar.
    pub fn scaled(&self, r: &Rational) -> Self {
        Self {
            a: &self.a * r,
            b: &self.b * r,
            c: &self.c * r,
            d: &self.d * r,
        }
    }

    pub fn to_f64(&self) -> f64 {
        const SQRT2: f64 = std::f64::consts::SQRT_2;
        const SQRT3: f64 = 1.732_050_807_568_877_3;
        const SQRT6: f64 = 2.449_489_742_783_178;
        rational_to_f64(&self.a)
            + rational_to_f64(&self.b) * SQRT2
            + rational_to_f64(&self.c) * SQRT3
            + rational_to_f64(&self.d) * SQRT6
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().expect("rational out of f64 range")
}

impl Add for FieldScalar {
    type Output = FieldScalar;
    fn add(self, rhs: FieldScalar) -> FieldScalar {
        FieldScalar { a: self.a + rhs.a, b: self.b + rhs.b, c: self.c + rhs.c, d: self.d + rhs.d }
    }
}

impl AddAssign<&FieldScalar> for FieldScalar {
    fn add_assign(&mut self, rhs: &FieldScalar) {
        self.a += &rhs.a;
        self.b += &rhs.b;
        self.c += &rhs.c;
        self.d += &rhs.d;
    }
}

impl Sub for FieldScalar {
    type Output = FieldScalar;
    fn sub(self, rhs: FieldScalar) -> FieldScalar {
        FieldScalar { a: self.a - rhs.a, b: self.b - rhs.b, c: self.c - rhs.c, d: self.d - rhs.d }
    }
}

impl SubAssign<&FieldScalar> for FieldScalar {
    fn sub_assign(&mut self, rhs: &FieldScalar) {
        self.a -= &rhs.a;
        self.b -= &rhs.b;
        self.c -= &rhs.c;
        self.d -= &rhs.d;
    }
}

impl Neg for FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        FieldScalar { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }
}

impl Mul for FieldScalar {
    type Output = FieldScalar;
    fn mul(self, rhs: FieldScalar) -> FieldScalar {
        &self * &rhs
    }
}

impl Mul for &FieldScalar {
    type Output = FieldScalar;
    // (a1 + b1 s2 + c1 s3 + d1 s6)(a2 + b2 s2 + c2 s3 + d2 s6) with
    // s2^2 = 2, s3^2 = 3, s2 s3 = s6, s6^2 = 6, s2 s6 = 2 s3, s3 s6 = 3 s2
    fn mul(self, rhs: &FieldScalar) -> FieldScalar {
        let (a1, b1, c1, d1) = (&self.a, &self.b, &self.c, &self.d);
        let (a2, b2, c2, d2) = (&rhs.a, &rhs.b, &rhs.c, &rhs.d);
        FieldScalar {
            a: a1 * a2 + b1 * b2 * rat(2, 1) + c1 * c2 * rat(3, 1) + d1 * d2 * rat(6, 1),
            b: a1 * b2 + b1 * a2 + (c1 * d2 + d1 * c2) * rat(3, 1),
            c: a1 * c2 + c1 * a2 + (b1 * d2 + d1 * b2) * rat(2, 1),
            d: a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
        }
    }
}

impl MulAssign<&FieldScalar> for FieldScalar {
    fn mul_assign(&mut self, rhs: &FieldScalar) {
        *self = &*self * rhs;
    }
}

/// Canonical textual form, e.g. `1/2 - 3*sqrt2 + sqrt6`. Zero is `0`.
impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (coef, radical) in [(&self.a, ""), (&self.b, "sqrt2"), (&self.c, "sqrt3"), (&self.d, "sqrt6")] {
            if coef.is_zero() {
                continue;
            }
            let mag = coef.abs();
            if wrote {
                write!(f, " {} ", if coef.is_negative() { "-" } else { "+" })?;
            } else if coef.is_negative() {
                write!(f, "-")?;
            }
            if radical.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{radical}")?;
            } else {
                write!(f, "{mag}*{radical}")?;
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl FromStr for FieldScalar {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, FieldError> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(FieldError::Parse(s.to_string()));
        }
        let mut out = FieldScalar::zero();
        // split into signed terms
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = compact.starts_with('-');
        for (i, ch) in compact.char_indices() {
            if i == 0 && (ch == '-' || ch == '+') {
                continue;
            }
            if (ch == '+' || ch == '-') && !cur.ends_with('/') {
                terms.push((neg, std::mem::take(&mut cur)));
                neg = ch == '-';
            } else {
                cur.push(ch);
            }
        }
        terms.push((neg, cur));
        for (neg, term) in terms {
            if term.is_empty() {
                return Err(FieldError::Parse(s.to_string()));
            }
            let (coef_str, radical) = if let Some(pos) = term.find("sqrt") {
                let coef = term[..pos].trim_end_matches('*');
                (if coef.is_empty() { "1" } else { coef }, &term[pos..])
            } else {
                (term.as_str(), "")
            };
            let mut coef: Rational =
                coef_str.parse().map_err(|_| FieldError::Parse(s.to_string()))?;
            if neg {
                coef = -coef;
            }
            match radical {
                "" => out.a += coef,
                "sqrt2" => out.b += coef,
                "sqrt3" => out.c += coef,
                "sqrt6" => out.d += coef,
                _ => return Err(FieldError::Parse(s.to_string())),
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldScalar({self})")
    }
}

/// Fixture wire format: a JSON array of four rationals `["a", "b", "c", "d"]`.
impl Serialize for FieldScalar {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        [
            self.a.to_string(),
            self.b.to_string(),
            self.c.to_string(),
            self.d.to_string(),
        ]
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for FieldScalar {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let parts: [String; 4] = Deserialize::deserialize(de)?;
        let parse = |s: &String| -> Result<Rational, D::Error> {
            s.parse().map_err(|_| D::Error::custom(format!("bad rational {s:?}")))
        };
        Ok(FieldScalar {
            a: parse(&parts[0])?,
            b: parse(&parts[1])?,
            c: parse(&parts[2])?,
            d: parse(&parts[3])?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fs(a: (i64, i64), b: (i64, i64), c: (i64, i64), d: (i64, i64)) -> FieldScalar {
        FieldScalar::new(rat(a.0, a.1), rat(b.0, b.1), rat(c.0, c.1), rat(d.0, d.1))
    }

    #[test]
    fn sqrt2_times_sqrt3_is_sqrt6() {
        assert_eq!(FieldScalar::sqrt2() * FieldScalar::sqrt3(), FieldScalar::sqrt6());
    }

    #[test]
    fn sqrt2_squared_is_two() {
        assert_eq!(FieldScalar::sqrt2() * FieldScalar::sqrt2(), FieldScalar::from_int(2));
    }

    #[test]
    fn product_of_conjugate_pair() {
        // (1/2 + sqrt6/4)(1/2 - sqrt6/4) = 1/4 - 6/16 = -1/8
        let x = fs((1, 2), (0, 1), (0, 1), (1, 4));
        let y = fs((1, 2), (0, 1), (0, 1), (-1, 4));
        assert_eq!(x * y, FieldScalar::ratio(-1, 8));
    }

    #[test]
    fn inverse_of_one() {
        assert_eq!(FieldScalar::one().inv().unwrap(), FieldScalar::one());
    }

    #[test]
    fn inverse_of_sqrt2() {
        // 1/sqrt2 = sqrt2/2
        let inv = FieldScalar::sqrt2().inv().unwrap();
        assert_eq!(inv, fs((0, 1), (1, 2), (0, 1), (0, 1)));
    }

    #[test]
    fn inverse_of_one_plus_sqrt2() {
        // (1+sqrt2)(-1+sqrt2) = 1
        let x = fs((1, 1), (1, 1), (0, 1), (0, 1));
        assert_eq!(x.inv().unwrap(), fs((-1, 1), (1, 1), (0, 1), (0, 1)));
    }

    #[test]
    fn zero_has_no_inverse() {
        assert_eq!(FieldScalar::zero().inv(), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn to_f64_is_multiplicative() {
        let x = fs((1, 3), (2, 1), (-1, 2), (0, 1));
        let y = fs((-2, 7), (1, 5), (1, 1), (3, 4));
        let lhs = (&x * &y).to_f64();
        let rhs = x.to_f64() * y.to_f64();
        assert!((lhs - rhs).abs() <= 1e-14 * rhs.abs().max(1.0));
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-20i64..=20, 1i64..=6).prop_map(|(n, d)| rat(n, d))
    }

    prop_compose! {
        fn arb_scalar()(a in arb_rational(), b in arb_rational(),
                        c in arb_rational(), d in arb_rational()) -> FieldScalar {
            FieldScalar::new(a, b, c, d)
        }
    }

    proptest! {
        #[test]
        fn field_axioms(x in arb_scalar(), y in arb_scalar(), z in arb_scalar()) {
            // associativity and commutativity of *
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &y, &y * &x);
            // distributivity
            let lhs = &x * &(y.clone() + z.clone());
            let rhs = (&x * &y) + (&x * &z);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn inverses_multiply_to_one(x in arb_scalar()) {
            if !x.is_zero() {
                prop_assert_eq!(&x * &x.inv().unwrap(), FieldScalar::one());
            }
        }

        #[test]
        fn display_parse_round_trip(x in arb_scalar()) {
            let shown = x.to_string();
            let back: FieldScalar = shown.parse().unwrap();
            prop_assert_eq!(back, x);
        }

        #[test]
        fn serde_round_trip(x in arb_scalar()) {
            let json = serde_json::to_string(&x).unwrap();
            let back: FieldScalar = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(back, x);
        }
    }
}
