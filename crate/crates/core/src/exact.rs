//! Exact rational multiples of `log 2`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A value `r · log 2` with `r` an exact rational.
///
/// Every leading-coefficient limit in this crate has this form, so limits are
/// compared and reported without rounding.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Log2Multiple(pub BigRational);

impl Log2Multiple {
    pub fn new(num: i64, den: i64) -> Self {
        Log2Multiple(BigRational::new(num.into(), den.into()))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Log2Multiple(r)
    }

    pub fn zero() -> Self {
        Log2Multiple(BigRational::zero())
    }

    pub fn coefficient(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Floating-point value `r · ln 2`.
    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.0) * std::f64::consts::LN_2
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

/// `num/den` as a BigRational.
pub(crate) fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

impl fmt::Display for Log2Multiple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{} × log 2", self.0.numer(), self.0.denom())
    }
}

impl Add for Log2Multiple {
    type Output = Log2Multiple;
    fn add(self, rhs: Self) -> Self {
        Log2Multiple(self.0 + rhs.0)
    }
}

impl Sub for Log2Multiple {
    type Output = Log2Multiple;
    fn sub(self, rhs: Self) -> Self {
        Log2Multiple(self.0 - rhs.0)
    }
}

impl Neg for Log2Multiple {
    type Output = Log2Multiple;
    fn neg(self) -> Self {
        Log2Multiple(-self.0)
    }
}

// JSON form: {"num": n, "den": d}. Integers that do not fit in i64 are
// written as decimal strings.
#[derive(Serialize, Deserialize)]
struct RationalRepr {
    num: serde_json::Value,
    den: serde_json::Value,
}

fn int_to_json(x: &BigInt) -> serde_json::Value {
    match x.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::String(x.to_string()),
    }
}

fn json_to_int(v: &serde_json::Value) -> Option<BigInt> {
    match v {
        serde_json::Value::Number(n) => n.as_i64().map(BigInt::from),
        serde_json::Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

impl Serialize for Log2Multiple {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RationalRepr { num: int_to_json(self.0.numer()), den: int_to_json(self.0.denom()) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Log2Multiple {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = RationalRepr::deserialize(d)?;
        let num = json_to_int(&repr.num).ok_or_else(|| D::Error::custom("bad numerator"))?;
        let den = json_to_int(&repr.den).ok_or_else(|| D::Error::custom("bad denominator"))?;
        if den.is_zero() {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(Log2Multiple(BigRational::new(num, den)))
    }
}

/// Sum of `1/λ` over a list, exactly.
pub(crate) fn sum_reciprocals(values: impl IntoIterator<Item = u64>) -> BigRational {
    values.into_iter().fold(BigRational::zero(), |acc, v| acc + BigRational::new(BigInt::one(), BigInt::from(v)))
}
