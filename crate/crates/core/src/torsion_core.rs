//! Torsion of based acyclic chain complexes over `C`.
//!
//! For `C_n → … → C_0` with boundaries `∂_i: C_i → C_{i−1}` and standard
//! bases `c^i`, a lift basis `B̃_i ⊂ C_i` is a set of standard basis vectors
//! whose images under `∂_i` span `im ∂_i`. For an acyclic complex
//! `∂_{i+1}(B̃_{i+1}) ∪ B̃_i` is a basis of `C_i` and
//!
//! ```text
//! log|Tor| = Σ_i (−1)^{i+1} log|det[∂_{i+1}(B̃_{i+1}) ∪ B̃_i / c^i]|.
//! ```
//!
//! The value does not depend on which lifts are chosen; the two
//! [`LiftStrategy`] variants exist so this can be checked.
//! Only `|Tor|` is computed, signs are dropped.

use nalgebra::SVD;

use crate::{CMatrix, Error, Result, C64};

/// Singular values below this fraction of the largest one count as zero.
pub const RANK_TOL: f64 = 1e-9;
const CHAIN_TOL: f64 = 1e-10;
const COMPAT_TOL: f64 = 1e-9;
/// Agreement required by [`check_multiplicativity`], in `log|Tor|`.
pub const MULTIPLICATIVITY_TOL: f64 = 1e-7;

/// A finite chain complex of complex vector spaces with standard bases.
#[derive(Debug, Clone, PartialEq)]
pub struct BasedChainComplex {
    dims: Vec<usize>,
    /// `boundaries[k]` is `∂_{k+1}: C_{k+1} → C_k`, a `dims[k] × dims[k+1]` matrix.
    boundaries: Vec<CMatrix>,
}

/// `log|Tor|`, or undefined for a non-acyclic complex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorsionValue {
    pub log_abs: f64,
    pub defined: bool,
}

impl TorsionValue {
    pub fn undefined() -> Self {
        TorsionValue { log_abs: f64::NAN, defined: false }
    }

    pub fn value(&self) -> Option<f64> {
        self.defined.then_some(self.log_abs)
    }
}

/// How lift bases `B̃_i` are picked among the standard basis vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LiftStrategy {
    /// Greedy column pivoting on residual norm (Gram–Schmidt with pivoting).
    #[default]
    ColumnPivoted,
    /// First independent columns, scanning left to right.
    FirstIndependent,
}

fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Numerical rank: singular values above `RANK_TOL · σ_max`.
pub fn numerical_rank(m: &CMatrix) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = SVD::new(m.clone(), false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0f64, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > RANK_TOL * max).count()
}

/// `log|det m|` via LU, without forming the determinant itself.
pub fn log_abs_det(m: &CMatrix) -> f64 {
    assert_eq!(m.nrows(), m.ncols(), "determinant of a non-square matrix");
    if m.nrows() == 0 {
        return 0.0;
    }
    let lu = m.clone().lu();
    let u = lu.u();
    (0..u.nrows()).map(|i| u[(i, i)].norm().ln()).sum()
}

impl BasedChainComplex {
    /// Builds `C_0 ← C_1 ← … ← C_top` from module dimensions and the list
    /// `[∂_1, ∂_2, …]`. Shapes and `∂∂ = 0` are checked.
    pub fn new(dims: Vec<usize>, boundaries: Vec<CMatrix>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidComplex("no chain modules".into()));
        }
        if boundaries.len() + 1 != dims.len() {
            return Err(Error::InvalidComplex(format!(
                "{} modules need {} boundary maps, got {}",
                dims.len(),
                dims.len() - 1,
                boundaries.len()
            )));
        }
        for (k, b) in boundaries.iter().enumerate() {
            if b.nrows() != dims[k] || b.ncols() != dims[k + 1] {
                return Err(Error::InvalidComplex(format!(
                    "∂_{} has shape {}×{}, expected {}×{}",
                    k + 1,
                    b.nrows(),
                    b.ncols(),
                    dims[k],
                    dims[k + 1]
                )));
            }
        }
        for k in 1..boundaries.len() {
            let (lower, upper) = (&boundaries[k - 1], &boundaries[k]);
            let comp = lower * upper;
            let dev = comp.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let scale = 1.0f64.max(frobenius(lower) * frobenius(upper));
            if dev > CHAIN_TOL * scale {
                return Err(Error::InvalidComplex(format!("∂_{}∘∂_{} ≠ 0 (max entry {dev:e})", k, k + 1)));
            }
        }
        Ok(BasedChainComplex { dims, boundaries })
    }

    /// Two-term complex `C_1 → C_0` with boundary `m`.
    pub fn two_term(m: CMatrix) -> Result<Self> {
        Self::new(vec![m.nrows(), m.ncols()], vec![m])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Highest degree `n` with a module `C_n`.
    pub fn top_degree(&self) -> usize {
        self.dims.len() - 1
    }

    /// `∂_i: C_i → C_{i−1}` for `1 ≤ i ≤ top`.
    pub fn boundary(&self, i: usize) -> &CMatrix {
        &self.boundaries[i - 1]
    }

    pub fn boundaries(&self) -> &[CMatrix] {
        &self.boundaries
    }

    fn rank_of(&self, i: usize) -> usize {
        if i == 0 || i > self.top_degree() {
            0
        } else {
            numerical_rank(self.boundary(i))
        }
    }

    /// Shifted complex `C[1]`, with `C[1]_i = C_{i−1}` and a zero module in
    /// degree 0.
    pub fn shift(&self) -> Self {
        let mut dims = vec![0];
        dims.extend_from_slice(&self.dims);
        let mut boundaries = vec![CMatrix::zeros(0, self.dims[0])];
        boundaries.extend(self.boundaries.iter().cloned());
        BasedChainComplex { dims, boundaries }
    }

    /// Block direct sum, padding the shorter complex with zero modules.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let len = self.dims.len().max(other.dims.len());
        let dim_at = |c: &Self, k: usize| c.dims.get(k).copied().unwrap_or(0);
        let dims: Vec<usize> = (0..len).map(|k| dim_at(self, k) + dim_at(other, k)).collect();
        let boundaries = (0..len - 1)
            .map(|k| {
                let mut m = CMatrix::zeros(dims[k], dims[k + 1]);
                if let Some(b) = self.boundaries.get(k) {
                    m.view_mut((0, 0), (b.nrows(), b.ncols())).copy_from(b);
                }
                if let Some(b) = other.boundaries.get(k) {
                    let (r0, c0) = (dim_at(self, k), dim_at(self, k + 1));
                    m.view_mut((r0, c0), (b.nrows(), b.ncols())).copy_from(b);
                }
                m
            })
            .collect();
        BasedChainComplex { dims, boundaries }
    }
}

/// True iff `rank ∂_i + rank ∂_{i+1} = dim C_i` in every degree.
pub fn is_acyclic(c: &BasedChainComplex) -> bool {
    (0..=c.top_degree()).all(|i| c.rank_of(i) + c.rank_of(i + 1) == c.dims[i])
}

/// Indices of `rank` columns of `m` whose span is the column space.
fn select_columns(m: &CMatrix, rank: usize, strategy: LiftStrategy) -> Vec<usize> {
    if rank == 0 {
        return Vec::new();
    }
    let mut residual = m.clone();
    let col_norm = |r: &CMatrix, j: usize| r.column(j).norm();
    let original: Vec<f64> = (0..m.ncols()).map(|j| col_norm(m, j)).collect();
    let mut chosen = Vec::with_capacity(rank);
    let mut available: Vec<bool> = vec![true; m.ncols()];
    while chosen.len() < rank {
        let pick = match strategy {
            LiftStrategy::ColumnPivoted => (0..m.ncols())
                .filter(|&j| available[j])
                .max_by(|&a, &b| col_norm(&residual, a).total_cmp(&col_norm(&residual, b))),
            LiftStrategy::FirstIndependent => (0..m.ncols())
                .find(|&j| available[j] && col_norm(&residual, j) > 1e-7 * original[j].max(f64::MIN_POSITIVE)),
        };
        let Some(j) = pick else { break };
        available[j] = false;
        let norm = col_norm(&residual, j);
        if norm == 0.0 {
            break;
        }
        let q = residual.column(j) / C64::new(norm, 0.0);
        for (k, _) in available.iter().enumerate().filter(|(_, &free)| free) {
            let proj = q.dotc(&residual.column(k));
            let update = &q * proj;
            let mut col = residual.column_mut(k);
            col -= update;
        }
        chosen.push(j);
    }
    chosen.sort_unstable();
    chosen
}

/// `log|Tor|` with the default lift strategy.
pub fn torsion(c: &BasedChainComplex) -> TorsionValue {
    torsion_with(c, LiftStrategy::default())
}

/// `log|Tor|` choosing lift bases with `strategy`.
pub fn torsion_with(c: &BasedChainComplex, strategy: LiftStrategy) -> TorsionValue {
    let top = c.top_degree();
    let ranks: Vec<usize> = (0..=top + 1).map(|i| c.rank_of(i)).collect();
    if (0..=top).any(|i| ranks[i] + ranks[i + 1] != c.dims[i]) {
        return TorsionValue::undefined();
    }
    // lifts[i] ⊂ basis of C_i, for i ≥ 1.
    let lifts: Vec<Vec<usize>> = (0..=top)
        .map(|i| if i == 0 { Vec::new() } else { select_columns(c.boundary(i), ranks[i], strategy) })
        .collect();
    let mut log_abs = 0.0;
    for i in 0..=top {
        let n = c.dims[i];
        if n == 0 {
            continue;
        }
        let mut basis = CMatrix::zeros(n, n);
        let mut col = 0;
        if i < top {
            let b = c.boundary(i + 1);
            for &j in &lifts[i + 1] {
                basis.set_column(col, &b.column(j));
                col += 1;
            }
        }
        for &j in &lifts[i] {
            basis[(j, col)] = C64::new(1.0, 0.0);
            col += 1;
        }
        if col != n {
            return TorsionValue::undefined();
        }
        let sign = if i % 2 == 0 { -1.0 } else { 1.0 };
        log_abs += sign * log_abs_det(&basis);
    }
    TorsionValue { log_abs, defined: log_abs.is_finite() }
}

/// A short exact sequence `0 → C′ → C → C″ → 0` given by degreewise
/// inclusion and projection matrices.
#[derive(Debug, Clone)]
pub struct ShortExactSequence {
    pub sub: BasedChainComplex,
    pub total: BasedChainComplex,
    pub quotient: BasedChainComplex,
    pub inclusion: Vec<CMatrix>,
    pub projection: Vec<CMatrix>,
}

/// Outcome of a multiplicativity check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiplicativityReport {
    pub log_total: f64,
    pub log_sub: f64,
    pub log_quotient: f64,
    pub holds: bool,
}

impl MultiplicativityReport {
    pub fn deviation(&self) -> f64 {
        (self.log_total - self.log_sub - self.log_quotient).abs()
    }
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn boundary_or_zero(c: &BasedChainComplex, i: usize) -> CMatrix {
    if i == 0 || i > c.top_degree() {
        let rows = if i == 0 { 0 } else { c.dims.get(i - 1).copied().unwrap_or(0) };
        CMatrix::zeros(rows, c.dims.get(i).copied().unwrap_or(0))
    } else {
        c.boundary(i).clone()
    }
}

/// Validates exactness, chain-map and basis-compatibility conditions, then
/// compares `|Tor(C)|` with `|Tor(C′)| · |Tor(C″)|`.
///
/// Compatibility means `|det[i(c′) ∪ s(c″) / c]| = 1` for a section `s` of
/// the projection; the determinant does not depend on the section.
pub fn check_multiplicativity(seq: &ShortExactSequence) -> Result<MultiplicativityReport> {
    let (sub, total, quot) = (&seq.sub, &seq.total, &seq.quotient);
    let levels = total.dims.len();
    if sub.dims.len() != levels || quot.dims.len() != levels {
        return Err(Error::NotExact("complexes have different lengths".into()));
    }
    if seq.inclusion.len() != levels || seq.projection.len() != levels {
        return Err(Error::NotExact("need one inclusion and one projection per degree".into()));
    }
    for k in 0..levels {
        let (inc, proj) = (&seq.inclusion[k], &seq.projection[k]);
        let (d_sub, d_tot, d_quot) = (sub.dims[k], total.dims[k], quot.dims[k]);
        if inc.shape() != (d_tot, d_sub) || proj.shape() != (d_quot, d_tot) {
            return Err(Error::NotExact(format!("degree {k}: map shapes do not match module dimensions")));
        }
        if d_sub + d_quot != d_tot {
            return Err(Error::NotExact(format!("degree {k}: dim C′ + dim C″ ≠ dim C")));
        }
        let scale = 1.0f64.max(frobenius(inc) * frobenius(proj));
        if max_abs(&(proj * inc)) > CHAIN_TOL * scale {
            return Err(Error::NotExact(format!("degree {k}: projection ∘ inclusion ≠ 0")));
        }
        if numerical_rank(inc) != d_sub {
            return Err(Error::NotExact(format!("degree {k}: inclusion is not injective")));
        }
        if numerical_rank(proj) != d_quot {
            return Err(Error::NotExact(format!("degree {k}: projection is not surjective")));
        }
        if k >= 1 {
            let lhs = boundary_or_zero(total, k) * inc;
            let rhs = &seq.inclusion[k - 1] * boundary_or_zero(sub, k);
            let scale = 1.0f64.max(frobenius(&lhs));
            if max_abs(&(lhs - rhs)) > CHAIN_TOL * scale {
                return Err(Error::NotExact(format!("degree {k}: inclusion is not a chain map")));
            }
            let lhs = &seq.projection[k - 1] * boundary_or_zero(total, k);
            let rhs = boundary_or_zero(quot, k) * proj;
            let scale = 1.0f64.max(frobenius(&lhs));
            if max_abs(&(lhs - rhs)) > CHAIN_TOL * scale {
                return Err(Error::NotExact(format!("degree {k}: projection is not a chain map")));
            }
        }
        if d_tot > 0 {
            // Section s = pᴴ (p pᴴ)⁻¹.
            let ph = proj.adjoint();
            let gram = proj * &ph;
            let section = if d_quot == 0 {
                CMatrix::zeros(d_tot, 0)
            } else {
                let inv = gram
                    .try_inverse()
                    .ok_or_else(|| Error::NotExact(format!("degree {k}: projection Gram matrix singular")))?;
                &ph * inv
            };
            let mut basis = CMatrix::zeros(d_tot, d_tot);
            basis.view_mut((0, 0), (d_tot, d_sub)).copy_from(inc);
            basis.view_mut((0, d_sub), (d_tot, d_quot)).copy_from(&section);
            let log_det = log_abs_det(&basis);
            if log_det.abs() > COMPAT_TOL {
                return Err(Error::NotExact(format!(
                    "degree {k}: bases are not compatible, |[c̄ ∪ c̿ / c]| = {}",
                    log_det.exp()
                )));
            }
        }
    }
    let acyclic = [is_acyclic(sub), is_acyclic(total), is_acyclic(quot)];
    if acyclic.iter().filter(|&&a| a).count() < 2 {
        return Err(Error::NotAcyclic("fewer than two of C′, C, C″ are acyclic".into()));
    }
    let (t_sub, t_tot, t_quot) = (torsion(sub), torsion(total), torsion(quot));
    let (Some(log_sub), Some(log_total), Some(log_quotient)) = (t_sub.value(), t_tot.value(), t_quot.value()) else {
        return Err(Error::NotAcyclic("torsion undefined on one of the complexes".into()));
    };
    let holds = (log_total - log_sub - log_quotient).abs() <= MULTIPLICATIVITY_TOL;
    Ok(MultiplicativityReport { log_total, log_sub, log_quotient, holds })
}

/// The split sequence `0 → C′ → C′ ⊕ C″ → C″ → 0`.
pub fn split_sequence(sub: &BasedChainComplex, quotient: &BasedChainComplex) -> Result<ShortExactSequence> {
    if sub.dims.len() != quotient.dims.len() {
        return Err(Error::NotExact("complexes have different lengths".into()));
    }
    let total = sub.direct_sum(quotient);
    let inclusion = (0..total.dims.len())
        .map(|k| {
            let (a, b) = (sub.dims[k], quotient.dims[k]);
            CMatrix::from_fn(a + b, a, |i, j| if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
        })
        .collect();
    let projection = (0..total.dims.len())
        .map(|k| {
            let (a, b) = (sub.dims[k], quotient.dims[k]);
            CMatrix::from_fn(b, a + b, |i, j| if j == a + i { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
        })
        .collect();
    Ok(ShortExactSequence { sub: sub.clone(), total, quotient: quotient.clone(), inclusion, projection })
}
