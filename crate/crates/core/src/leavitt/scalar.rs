use std::fmt::{self, Debug};
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::Value;

/// Exact complex number with arbitrary-precision rational parts.
pub type RationalComplex = Complex<BigRational>;

/// Coefficient field of an [`Element`](super::Element).
///
/// [`RationalComplex`] gives exact symbolic arithmetic; [`Complex64`] is the
/// floating mode handed to representations.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    /// `n/d` as a real scalar.
    fn ratio(n: i64, d: i64) -> Self;
    fn i() -> Self;
    /// Exact zero, or below `1e-14` in absolute value in floating mode.
    fn is_negligible(&self) -> bool;
    fn conj(&self) -> Self;
    fn to_c64(&self) -> Complex64;
    /// `|z| = 1`, exactly or within `1e-12`.
    fn is_unimodular(&self) -> bool;
    fn to_json(&self) -> (Value, Value);
    fn from_json(re: &Value, im: &Value) -> Result<Self, String>;

    fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn ratio(n: i64, d: i64) -> Self {
        Complex64::new(n as f64 / d as f64, 0.0)
    }
    fn i() -> Self {
        Complex64::new(0.0, 1.0)
    }
    fn is_negligible(&self) -> bool {
        self.norm() < 1e-14
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn is_unimodular(&self) -> bool {
        (self.norm() - 1.0).abs() <= 1e-12
    }
    fn to_json(&self) -> (Value, Value) {
        (Value::from(self.re), Value::from(self.im))
    }
    fn from_json(re: &Value, im: &Value) -> Result<Self, String> {
        Ok(Complex64::new(json_f64(re)?, json_f64(im)?))
    }
}

fn json_f64(v: &Value) -> Result<f64, String> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| format!("not a float: {n}")),
        Value::String(s) => parse_rational(s)?
            .to_f64()
            .ok_or_else(|| format!("rational out of range: {s}")),
        other => Err(format!("expected a number, found {other}")),
    }
}

fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    if let Ok(r) = BigRational::from_str(s) {
        return Ok(r);
    }
    BigInt::from_str(s)
        .map(BigRational::from_integer)
        .map_err(|_| format!("not a rational: `{s}`"))
}

impl Scalar for RationalComplex {
    const EXACT: bool = true;

    fn zero() -> Self {
        Complex::new(BigRational::zero(), BigRational::zero())
    }
    fn one() -> Self {
        Complex::new(BigRational::one(), BigRational::zero())
    }
    fn from_i64(n: i64) -> Self {
        Complex::new(BigRational::from_integer(n.into()), BigRational::zero())
    }
    fn ratio(n: i64, d: i64) -> Self {
        Complex::new(BigRational::new(n.into(), d.into()), BigRational::zero())
    }
    fn i() -> Self {
        Complex::new(BigRational::zero(), BigRational::one())
    }
    fn is_negligible(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
    fn is_unimodular(&self) -> bool {
        (&self.re * &self.re + &self.im * &self.im).is_one()
    }
    fn to_json(&self) -> (Value, Value) {
        (Value::from(self.re.to_string()), Value::from(self.im.to_string()))
    }
    fn from_json(re: &Value, im: &Value) -> Result<Self, String> {
        let part = |v: &Value| match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) => match n.as_i64() {
                Some(i) => Ok(BigRational::from_integer(i.into())),
                None => Err(format!("exact mode needs rational strings, found {n}")),
            },
            other => Err(format!("expected a rational string, found {other}")),
        };
        Ok(Complex::new(part(re)?, part(im)?))
    }
}

/// Exact rational image of a double (every finite double is a dyadic rational).
pub fn rational_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

pub fn rational_complex(re: (i64, i64), im: (i64, i64)) -> RationalComplex {
    Complex::new(
        BigRational::new(re.0.into(), re.1.into()),
        BigRational::new(im.0.into(), im.1.into()),
    )
}

/// Compact display: `3`, `-1/2`, `i`, `(1/2+3i)`.
pub struct ScalarDisplay<'a, C: Scalar>(pub &'a C);

impl<C: Scalar> fmt::Display for ScalarDisplay<'_, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.0.to_json();
        let text = |v: Value| match v {
            Value::String(s) => s,
            other => other.to_string(),
        };
        let zero = |v: &Value| match v {
            Value::String(s) => s == "0",
            Value::Number(n) => n.as_f64() == Some(0.0),
            _ => false,
        };
        let imag = |v: Value| match text(v).as_str() {
            "1" => "i".to_string(),
            "-1" => "-i".to_string(),
            t => format!("{t}i"),
        };
        match (zero(&re), zero(&im)) {
            (_, true) => write!(f, "{}", text(re)),
            (true, false) => write!(f, "{}", imag(im)),
            (false, false) => {
                let im_text = imag(im);
                if im_text.starts_with('-') {
                    write!(f, "({}{})", text(re), im_text)
                } else {
                    write!(f, "({}+{})", text(re), im_text)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_json_round_trip() {
        let z = rational_complex((1, 2), (-3, 4));
        let (re, im) = z.to_json();
        assert_eq!(re, Value::from("1/2"));
        assert_eq!(RationalComplex::from_json(&re, &im).unwrap(), z);
        assert!(RationalComplex::from_json(&Value::from(0.5), &Value::from(0)).is_err());
    }

    #[test]
    fn unimodular_checks() {
        assert!(rational_complex((3, 5), (4, 5)).is_unimodular());
        assert!(!rational_complex((1, 1), (1, 1)).is_unimodular());
        assert!(Complex64::from_polar(1.0, 0.7).is_unimodular());
        assert!(!Complex64::new(1.1, 0.0).is_unimodular());
    }

    #[test]
    fn display() {
        assert_eq!(ScalarDisplay(&RationalComplex::from_i64(-2)).to_string(), "-2");
        assert_eq!(ScalarDisplay(&RationalComplex::i()).to_string(), "i");
        assert_eq!(ScalarDisplay(&rational_complex((1, 2), (-1, 1))).to_string(), "(1/2-i)");
    }
}
