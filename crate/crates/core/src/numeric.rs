//! Small numerical helpers: compensated summation and integer arithmetic.

use std::f64::consts::PI;
use std::iter::Sum;

/// Neumaier (improved Kahan) running sum.
///
/// Partial sums over disjoint chunks can be merged with [`merge`] without
/// losing the compensation, so chunked and sequential reductions agree to
/// roughly one ulp of the total.
///
/// [`merge`]: CompensatedSum::merge
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.add(other.compensation);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl Sum<f64> for CompensatedSum {
    fn sum<I: Iterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated sum of an iterator of floats.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().sum::<CompensatedSum>().value()
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

/// Extended Euclid: returns `(g, x, y)` with `a x + b y = g = gcd(a, b) ≥ 0`.
pub fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a as i128, b as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (old_r, old_s, old_t) = (-old_r, -old_s, -old_t);
    }
    (old_r as i64, old_s as i64, old_t as i64)
}

/// `|2 sin(π · num / den)|`, with the numerator reduced modulo `2 den`
/// in integer arithmetic before going to floating point.
pub fn abs_two_sin_pi_frac(num: i64, den: i64) -> f64 {
    debug_assert!(den > 0);
    let period = 2 * den as i128;
    let r = (num as i128).rem_euclid(period);
    (2.0 * (PI * r as f64 / den as f64).sin()).abs()
}

/// `log|2 sin(π · num / den)|`.
pub fn log_abs_two_sin_pi_frac(num: i64, den: i64) -> f64 {
    abs_two_sin_pi_frac(num, den).ln()
}
