//! `SL(2, C)` matrices, conjugacy-class descriptors and symmetric powers.
//!
//! `σ_n` acts on the space `V_n` of homogeneous polynomials of degree `n − 1`
//! in `z₁, z₂` by `(A · p)(z) = p(A⁻¹ z)`. Matrices are written in the
//! monomial basis `z₁^{n−1}, z₁^{n−2} z₂, …, z₂^{n−1}`. With this convention
//! `σ_2(A)` is the inverse transpose of `A`, not `A` itself; only spectra are
//! used downstream.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Mul;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::{CMatrix, Error, Result, C64};

const UNIMODULAR_TOL: f64 = 1e-12;

/// A 2×2 complex matrix of determinant one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    entries: [[C64; 2]; 2],
}

impl Mat2 {
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Result<Self> {
        let det = a * d - b * c;
        if (det - C64::new(1.0, 0.0)).norm() > UNIMODULAR_TOL {
            return Err(Error::NotUnimodular { re: det.re, im: det.im });
        }
        Ok(Mat2 { entries: [[a, b], [c, d]] })
    }

    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Self::diagonal(C64::new(1.0, 0.0)).expect("identity is unimodular")
    }

    /// `diag(z, z⁻¹)`.
    pub fn diagonal(z: C64) -> Result<Self> {
        if z.norm() == 0.0 {
            return Err(Error::InvalidArgument("diagonal entry must be nonzero".into()));
        }
        Self::new(z, C64::zero(), C64::zero(), z.inv())
    }

    /// `diag(e^{iπt}, e^{−iπt})`.
    pub fn rotation(turns_of_pi: f64) -> Self {
        let z = C64::from_polar(1.0, PI * turns_of_pi);
        Mat2 { entries: [[z, C64::zero()], [C64::zero(), z.conj()]] }
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.entries[i][j]
    }

    pub fn det(&self) -> C64 {
        let [[a, b], [c, d]] = self.entries;
        a * d - b * c
    }

    pub fn trace(&self) -> C64 {
        self.entries[0][0] + self.entries[1][1]
    }

    /// Inverse of a unimodular matrix: `[[d, −b], [−c, a]]`.
    pub fn inverse(&self) -> Self {
        let [[a, b], [c, d]] = self.entries;
        Mat2 { entries: [[d, -b], [-c, a]] }
    }

    /// The eigenvalue pair `(a, a⁻¹)`, from the trace.
    pub fn eigenvalues(&self) -> (C64, C64) {
        let t = self.trace();
        let disc = (t * t - C64::new(4.0, 0.0)).sqrt();
        let a = (t + disc) * 0.5;
        let b = (t - disc) * 0.5;
        (a, b)
    }

    pub fn to_matrix(&self) -> CMatrix {
        CMatrix::from_fn(2, 2, |i, j| self.entries[i][j])
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let mut out = [[C64::zero(); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = self.entries[i][0] * rhs.entries[0][j] + self.entries[i][1] * rhs.entries[1][j];
            }
        }
        Mat2 { entries: out }
    }
}

/// The matrix `σ_n(A)` of size `n × n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymPowerMatrix {
    n: usize,
    entries: CMatrix,
}

impl SymPowerMatrix {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_matrix(self) -> CMatrix {
        self.entries
    }

    /// Wraps an arbitrary square matrix. Used for perturbation experiments
    /// and for `−I`, `I` etc.; no unimodularity check is made.
    pub fn from_matrix(entries: CMatrix) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() == 0 {
            return Err(Error::InvalidArgument("matrix must be square and nonempty".into()));
        }
        Ok(SymPowerMatrix { n: entries.nrows(), entries })
    }

    pub fn identity(n: usize) -> Self {
        SymPowerMatrix { n, entries: CMatrix::identity(n, n) }
    }

    pub fn det(&self) -> C64 {
        self.entries.clone().determinant()
    }
}

fn binomial_row(m: usize) -> Vec<f64> {
    let mut row = vec![1.0f64; m + 1];
    for k in 1..m {
        row[k] = row[k - 1] * (m - k + 1) as f64 / k as f64;
    }
    row
}

/// Coefficients of `(x z₁ + y z₂)^m` as a vector indexed by the power of `z₂`.
fn linear_form_power(x: C64, y: C64, m: usize) -> Vec<C64> {
    let binom = binomial_row(m);
    let mut x_pows = vec![C64::new(1.0, 0.0); m + 1];
    let mut y_pows = vec![C64::new(1.0, 0.0); m + 1];
    for k in 1..=m {
        x_pows[k] = x_pows[k - 1] * x;
        y_pows[k] = y_pows[k - 1] * y;
    }
    (0..=m).map(|j| x_pows[m - j] * y_pows[j] * binom[j]).collect()
}

/// `σ_n(A)` in the monomial basis, obtained by expanding `p(A⁻¹ z)`.
pub fn sym_power(a: &Mat2, n: usize) -> Result<SymPowerMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("symmetric power dimension must be ≥ 1".into()));
    }
    let det = a.det();
    if (det - C64::new(1.0, 0.0)).norm() > UNIMODULAR_TOL {
        return Err(Error::NotUnimodular { re: det.re, im: det.im });
    }
    let inv = a.inverse();
    // A⁻¹ (z₁, z₂) = (d z₁ − b z₂, −c z₁ + a z₂).
    let (u1, u2) = (inv.entry(0, 0), inv.entry(0, 1));
    let (w1, w2) = (inv.entry(1, 0), inv.entry(1, 1));
    let deg = n - 1;
    let mut m = CMatrix::zeros(n, n);
    for k in 0..n {
        // Basis vector z₁^{deg−k} z₂^k maps to (u·z)^{deg−k} (w·z)^k.
        let left = linear_form_power(u1, u2, deg - k);
        let right = linear_form_power(w1, w2, k);
        for (i, l) in left.iter().enumerate() {
            for (j, r) in right.iter().enumerate() {
                m[(i + j, k)] += l * r;
            }
        }
    }
    Ok(SymPowerMatrix { n, entries: m })
}

/// Weights of `σ_n`: `−n+1, −n+3, …, n−1`.
pub fn weights(n: usize) -> Vec<i64> {
    let n = n as i64;
    (0..n).map(|k| -n + 1 + 2 * k).collect()
}

/// A root of unity `e^{iπt}` with `t` rational, stored reduced into `[0, 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PiAngle(Ratio<i64>);

impl PiAngle {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidArgument("angle denominator is zero".into()));
        }
        let r = Ratio::new(num, den);
        let two = Ratio::from_integer(2);
        let reduced = r - (r / two).floor() * two;
        Ok(PiAngle(reduced))
    }

    /// The fraction `t` in `e^{iπt}`.
    pub fn turns(&self) -> Ratio<i64> {
        self.0
    }

    /// Multiplicative order of `e^{iπ p/q}`: `2q / gcd(2, p)`.
    pub fn order(&self) -> u64 {
        let p = *self.0.numer();
        let q = *self.0.denom();
        (2 * q / p.gcd(&2)) as u64
    }

    pub fn value(&self) -> C64 {
        let t = *self.0.numer() as f64 / *self.0.denom() as f64;
        C64::from_polar(1.0, PI * t)
    }

    /// True iff `e^{iπ t w} = 1`.
    pub fn power_is_one(&self, w: i64) -> bool {
        let p = *self.0.numer() as i128;
        let q = *self.0.denom() as i128;
        (p * w as i128).rem_euclid(2 * q) == 0
    }
}

/// Eigenvalue data of a diagonalisable class `diag(z, z⁻¹)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HypEigenvalue {
    /// `z = e^{iπt}`, `t` rational.
    RootOfUnity(PiAngle),
    /// A real `z ∉ {0, ±1}`; such classes have infinite order.
    Real(f64),
}

/// Conjugacy-class normal forms of an element of `SL(2, C)` lying in one of
/// the maximal abelian subgroups `Hyp` (diagonal) or `Para` (unipotent up to
/// sign, nontrivial).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConjClassDescriptor {
    Hyp(HypEigenvalue),
    /// Parabolic `[[±1, 1], [0, ±1]]`; the field is the trace, `+2` or `−2`.
    Para(i8),
}

impl ConjClassDescriptor {
    /// Class of `diag(e^{iπ num/den}, e^{−iπ num/den})`.
    pub fn root_of_unity(num: i64, den: i64) -> Result<Self> {
        Ok(ConjClassDescriptor::Hyp(HypEigenvalue::RootOfUnity(PiAngle::new(num, den)?)))
    }

    /// Class with primitive eigenvalue `e^{2πi/order}`.
    pub fn of_order(order: u64) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidClass("order must be positive".into()));
        }
        Self::root_of_unity(2, order as i64)
    }

    /// Class of `diag(z, 1/z)` for real `z`. `z = ±1` is normalised to the
    /// root-of-unity form.
    pub fn real(z: f64) -> Result<Self> {
        if z == 0.0 || !z.is_finite() {
            return Err(Error::InvalidClass("real eigenvalue must be finite and nonzero".into()));
        }
        if z == 1.0 {
            return Self::root_of_unity(0, 1);
        }
        if z == -1.0 {
            return Self::root_of_unity(1, 1);
        }
        Ok(ConjClassDescriptor::Hyp(HypEigenvalue::Real(z)))
    }

    pub fn parabolic(trace: i8) -> Result<Self> {
        match trace {
            2 | -2 => Ok(ConjClassDescriptor::Para(trace)),
            _ => Err(Error::InvalidClass(format!("parabolic trace must be ±2, got {trace}"))),
        }
    }

    /// Finite order, when it exists.
    pub fn order(&self) -> Option<u64> {
        match self {
            ConjClassDescriptor::Hyp(HypEigenvalue::RootOfUnity(a)) => Some(a.order()),
            _ => None,
        }
    }

    pub fn is_odd_order(&self) -> bool {
        self.order().is_some_and(|k| k % 2 == 1)
    }

    /// `±I`.
    pub fn is_central(&self) -> bool {
        matches!(self.order(), Some(1) | Some(2))
    }

    pub fn is_hyperbolic(&self) -> bool {
        matches!(self, ConjClassDescriptor::Hyp(_))
    }

    /// A representative matrix: `diag(z, z⁻¹)` or `[[±1, 1], [0, ±1]]`.
    pub fn normal_form(&self) -> Mat2 {
        match *self {
            ConjClassDescriptor::Hyp(HypEigenvalue::RootOfUnity(a)) => {
                let z = a.value();
                Mat2 { entries: [[z, C64::zero()], [C64::zero(), z.conj()]] }
            }
            ConjClassDescriptor::Hyp(HypEigenvalue::Real(z)) => Mat2::diagonal(C64::new(z, 0.0)).expect("nonzero real"),
            ConjClassDescriptor::Para(t) => {
                let s = C64::new(f64::from(t.signum()), 0.0);
                Mat2 { entries: [[s, C64::new(1.0, 0.0)], [C64::zero(), s]] }
            }
        }
    }
}

impl fmt::Display for ConjClassDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConjClassDescriptor::Hyp(HypEigenvalue::RootOfUnity(a)) => {
                write!(f, "Hyp(e^(iπ·{}), order {})", a.turns(), a.order())
            }
            ConjClassDescriptor::Hyp(HypEigenvalue::Real(z)) => write!(f, "Hyp({z})"),
            ConjClassDescriptor::Para(t) => write!(f, "Para(trace {t})"),
        }
    }
}

/// Whether `σ_n` of a matrix in the class has eigenvalue 1.
///
/// For even `n` this is false exactly when the class is neither of odd order
/// nor parabolic of trace `+2`. For odd `n` the zero weight makes it always
/// true.
pub fn has_eigenvalue_one(desc: &ConjClassDescriptor, n: usize) -> bool {
    if n % 2 == 1 {
        return true;
    }
    match desc {
        ConjClassDescriptor::Hyp(HypEigenvalue::RootOfUnity(a)) => weights(n).into_iter().any(|w| a.power_is_one(w)),
        // z^w = 1 with w odd forces z = 1, which is normalised away.
        ConjClassDescriptor::Hyp(HypEigenvalue::Real(_)) => false,
        ConjClassDescriptor::Para(t) => t.is_positive(),
    }
}
