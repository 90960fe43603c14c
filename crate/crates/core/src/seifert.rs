//! Seifert fibered spaces over orientable bases, with representations
//! sending the regular fiber `h` to `−I`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;

use crate::exact::{rat, Log2Multiple};
use crate::model_complexes::{circle_log_torsion, circle_log_torsion_sequence, CircleRep};
use crate::numeric::{gcd, log_abs_two_sin_pi_frac, CompensatedSum};
use crate::surgery_brieskorn::AsymptoticProfile;
use crate::{Error, Result};

/// An exceptional fiber of type `(α, β)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fiber {
    pub alpha: i64,
    pub beta: i64,
}

impl Fiber {
    pub fn new(alpha: i64, beta: i64) -> Result<Self> {
        if alpha < 2 {
            return Err(Error::InvalidSeifertIndex(format!("α must be ≥ 2, got {alpha}")));
        }
        if gcd(alpha, beta) != 1 {
            return Err(Error::InvalidSeifertIndex(format!("({alpha}, {beta}) are not coprime")));
        }
        Ok(Fiber { alpha, beta })
    }
}

/// Seifert invariants `{b, (o, g); (α_1, β_1), …, (α_m, β_m)}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "IndexRepr", into = "IndexRepr")]
pub struct SeifertIndex {
    b: i64,
    g: u32,
    fibers: Vec<Fiber>,
}

#[derive(Serialize, Deserialize)]
struct IndexRepr {
    b: i64,
    g: i64,
    fibers: Vec<[i64; 2]>,
}

impl TryFrom<IndexRepr> for SeifertIndex {
    type Error = Error;
    fn try_from(r: IndexRepr) -> Result<Self> {
        let g =
            u32::try_from(r.g).map_err(|_| Error::InvalidSeifertIndex(format!("genus must be ≥ 0, got {}", r.g)))?;
        let fibers = r.fibers.iter().map(|&[a, b]| Fiber::new(a, b)).collect::<Result<_>>()?;
        SeifertIndex::new(r.b, g, fibers)
    }
}

impl From<SeifertIndex> for IndexRepr {
    fn from(s: SeifertIndex) -> Self {
        IndexRepr { b: s.b, g: i64::from(s.g), fibers: s.fibers.iter().map(|f| [f.alpha, f.beta]).collect() }
    }
}

impl SeifertIndex {
    pub fn new(b: i64, g: u32, fibers: Vec<Fiber>) -> Result<Self> {
        for f in &fibers {
            Fiber::new(f.alpha, f.beta)?;
        }
        Ok(SeifertIndex { b, g, fibers })
    }

    /// Genus-0 index from `(α, β)` pairs.
    pub fn from_pairs(b: i64, pairs: &[(i64, i64)]) -> Result<Self> {
        let fibers = pairs.iter().map(|&(a, beta)| Fiber::new(a, beta)).collect::<Result<_>>()?;
        Self::new(b, 0, fibers)
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn genus(&self) -> u32 {
        self.g
    }

    pub fn fibers(&self) -> &[Fiber] {
        &self.fibers
    }

    pub fn alphas(&self) -> Vec<i64> {
        self.fibers.iter().map(|f| f.alpha).collect()
    }

    /// Number of exceptional fibers `m`.
    pub fn len(&self) -> usize {
        self.fibers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fibers.is_empty()
    }

    /// Accepts either the JSON document or the text form.
    pub fn parse_any(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        if trimmed.starts_with('{') {
            serde_json::from_str(trimmed).map_err(|e| {
                let msg = e.to_string();
                if msg.contains("invalid Seifert index") {
                    Error::InvalidSeifertIndex(msg)
                } else {
                    Error::parse("seifert", msg)
                }
            })
        } else {
            trimmed.parse()
        }
    }

    /// `b + Σ β_j/α_j`.
    fn euler_number(&self) -> BigRational {
        self.fibers.iter().fold(BigRational::from_integer(self.b.into()), |acc, f| acc + rat(f.beta, f.alpha))
    }

    fn alpha_product(&self) -> BigInt {
        self.fibers.iter().fold(BigInt::one(), |acc, f| acc * f.alpha)
    }
}

fn parse_int<T: FromStr>(field: &str, s: &str) -> Result<T> {
    s.trim().parse().map_err(|_| Error::parse(field, format!("expected an integer, got {:?}", s.trim())))
}

impl FromStr for SeifertIndex {
    type Err = Error;

    /// Parses `"b; g; α1/β1, α2/β2, …"`. The fiber list may be empty.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(';').collect();
        if !(2..=3).contains(&parts.len()) {
            return Err(Error::parse("seifert", "expected \"b; g; a1/b1, a2/b2, ...\""));
        }
        let b: i64 = parse_int("b", parts[0])?;
        let g: i64 = parse_int("g", parts[1])?;
        let g = u32::try_from(g).map_err(|_| Error::parse("g", format!("genus must be ≥ 0, got {g}")))?;
        let mut fibers = Vec::new();
        if let Some(list) = parts.get(2).map(|p| p.trim()).filter(|p| !p.is_empty()) {
            for (j, item) in list.split(',').enumerate() {
                let field = format!("fibers[{j}]");
                let (a, beta) = item
                    .split_once('/')
                    .ok_or_else(|| Error::parse(&field, format!("expected α/β, got {:?}", item.trim())))?;
                fibers.push(Fiber::new(parse_int(&field, a)?, parse_int(&field, beta)?)?);
            }
        }
        SeifertIndex::new(b, g, fibers)
    }
}

impl fmt::Display for SeifertIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}; {};", self.b, self.g)?;
        for (j, fib) in self.fibers.iter().enumerate() {
            let sep = if j == 0 { " " } else { ", " };
            write!(f, "{sep}{}/{}", fib.alpha, fib.beta)?;
        }
        Ok(())
    }
}

/// A genus-0 index with `b = 0` and `|H_1| = 1` for pairwise coprime
/// multiplicities: solves `Σ β_j Π_{i≠j} α_i = 1` with `0 ≤ β_j < α_j` for
/// all but the last fiber.
pub fn homology_sphere(alphas: &[i64]) -> Result<SeifertIndex> {
    if alphas.iter().any(|&a| a < 2) {
        return Err(Error::InvalidSeifertIndex("multiplicities must be ≥ 2".into()));
    }
    for i in 0..alphas.len() {
        for j in i + 1..alphas.len() {
            if gcd(alphas[i], alphas[j]) != 1 {
                return Err(Error::NotHomologySphere(format!(
                    "multiplicities {} and {} are not coprime",
                    alphas[i], alphas[j]
                )));
            }
        }
    }
    if alphas.len() < 2 {
        return Err(Error::NotHomologySphere("need at least two exceptional fibers".into()));
    }
    let total: i128 = alphas.iter().map(|&a| i128::from(a)).product();
    let cofactors: Vec<i128> = alphas.iter().map(|&a| total / i128::from(a)).collect();
    // β_j ≡ (Π_{i≠j} α_i)⁻¹ mod α_j for j < m, then the last one absorbs the rest.
    let mut betas = Vec::with_capacity(alphas.len());
    let mut acc: i128 = 0;
    for (j, &a) in alphas.iter().enumerate().take(alphas.len() - 1) {
        let residue = (cofactors[j] % i128::from(a)) as i64;
        let (_, inv, _) = crate::numeric::extended_gcd(residue, a);
        let beta = inv.rem_euclid(a);
        acc += i128::from(beta) * cofactors[j];
        betas.push(beta);
    }
    let last = alphas.len() - 1;
    let rest = 1 - acc;
    if rest % cofactors[last] != 0 {
        return Err(Error::NotHomologySphere("no integral solution".into()));
    }
    let beta_last = i64::try_from(rest / cofactors[last]).map_err(|_| Error::InvalidArgument("β overflows".into()))?;
    betas.push(beta_last);
    let pairs: Vec<(i64, i64)> = alphas.iter().copied().zip(betas).collect();
    SeifertIndex::from_pairs(0, &pairs)
}

/// `|H_1|`, or 0 when `H_1` is infinite.
pub fn h1_order(index: &SeifertIndex) -> BigRational {
    if index.g > 0 {
        return BigRational::zero();
    }
    (BigRational::from_integer(index.alpha_product()) * index.euler_number()).abs()
}

/// Rank of the free part of `H_1`: `2g`, plus one when `b + Σ β_j/α_j = 0`.
pub fn free_rank(index: &SeifertIndex) -> u64 {
    2 * u64::from(index.g) + u64::from(index.euler_number().is_zero())
}

pub fn is_homology_sphere(index: &SeifertIndex) -> bool {
    h1_order(index).is_one()
}

/// `χ = 2 − 2g − Σ (α_j − 1)/α_j`.
pub fn orbifold_euler_char(index: &SeifertIndex) -> BigRational {
    index
        .fibers
        .iter()
        .fold(BigRational::from_integer((2 - 2 * i64::from(index.g)).into()), |acc, f| acc - rat(f.alpha - 1, f.alpha))
}

/// `ℓ = q^μ h^ν` with `αν − βμ = −1` and `0 < μ < α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberDecomposition {
    pub mu: i64,
    pub nu: i64,
}

/// For `α = 1` the range `0 < μ < 1` is empty and `(μ, ν) = (0, −1)` is used.
pub fn fiber_decomposition(alpha: i64, beta: i64) -> Result<FiberDecomposition> {
    if alpha < 1 {
        return Err(Error::InvalidArgument(format!("α must be ≥ 1, got {alpha}")));
    }
    if gcd(alpha, beta) != 1 {
        return Err(Error::InvalidArgument(format!("({alpha}, {beta}) are not coprime")));
    }
    if alpha == 1 {
        return Ok(FiberDecomposition { mu: 0, nu: -1 });
    }
    let (_, inv, _) = crate::numeric::extended_gcd(beta.rem_euclid(alpha), alpha);
    let mu = inv.rem_euclid(alpha);
    let num = i128::from(beta) * i128::from(mu) - 1;
    let nu = i64::try_from(num / i128::from(alpha)).map_err(|_| Error::InvalidArgument("ν overflows".into()))?;
    Ok(FiberDecomposition { mu, nu })
}

/// Half-order `λ = α / (α, ξ)` of `ρ(ℓ)` when `ρ(q)` has eigenvalues
/// `e^{±iπξ/α}`.
pub fn lambda_of(alpha: i64, beta: i64, xi: i64) -> Result<u64> {
    if alpha < 1 || !(0..=alpha).contains(&xi) {
        return Err(Error::InvalidArgument(format!("need 0 ≤ ξ ≤ α, got ξ = {xi}, α = {alpha}")));
    }
    if gcd(alpha, beta) != 1 {
        return Err(Error::InvalidArgument(format!("({alpha}, {beta}) are not coprime")));
    }
    Ok((alpha / gcd(alpha, xi)) as u64)
}

/// `η = μξ − αν`, the exponent of `ρ(ℓ)`, reduced into `(0, 2α)`.
pub fn eta_of(alpha: i64, beta: i64, xi: i64) -> Result<i64> {
    let FiberDecomposition { mu, nu } = fiber_decomposition(alpha, beta)?;
    if (xi - beta).rem_euclid(2) != 0 {
        return Err(Error::InvalidArgument(format!("ξ = {xi} and β = {beta} have different parity")));
    }
    let eta = i128::from(mu) * i128::from(xi) - i128::from(alpha) * i128::from(nu);
    Ok(eta.rem_euclid(2 * i128::from(alpha)) as i64)
}

/// A representation with `ρ(h) = −I`, recorded by the exponents `η_j` of
/// the exceptional fiber cores: `ρ(ℓ_j) ~ diag(e^{iπη_j/α_j}, e^{−iπη_j/α_j})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeifertRep {
    etas: Vec<i64>,
    lambdas: Vec<u64>,
}

impl SeifertRep {
    pub fn new(index: &SeifertIndex, etas: &[i64]) -> Result<Self> {
        if etas.len() != index.len() {
            return Err(Error::InvalidArgument(format!("expected {} exponents, got {}", index.len(), etas.len())));
        }
        let mut norm = Vec::with_capacity(etas.len());
        let mut lambdas = Vec::with_capacity(etas.len());
        for (f, &eta) in index.fibers.iter().zip(etas) {
            if eta.rem_euclid(2) != 1 {
                return Err(Error::InvalidArgument(format!("η = {eta} must be odd")));
            }
            norm.push(eta.rem_euclid(2 * f.alpha));
            lambdas.push((f.alpha / gcd(f.alpha, eta)) as u64);
        }
        Ok(SeifertRep { etas: norm, lambdas })
    }

    /// From the rotation numbers `ξ_j` of `ρ(q_j)`.
    pub fn from_xi(index: &SeifertIndex, xis: &[i64]) -> Result<Self> {
        if xis.len() != index.len() {
            return Err(Error::InvalidArgument(format!("expected {} values of ξ, got {}", index.len(), xis.len())));
        }
        let etas = index
            .fibers
            .iter()
            .zip(xis)
            .map(|(f, &xi)| {
                if !(0..=f.alpha).contains(&xi) {
                    return Err(Error::InvalidArgument(format!("need 0 ≤ ξ ≤ {}, got {xi}", f.alpha)));
                }
                eta_of(f.alpha, f.beta, xi)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(index, &etas)
    }

    pub fn etas(&self) -> &[i64] {
        &self.etas
    }

    pub fn lambdas(&self) -> &[u64] {
        &self.lambdas
    }

    /// Circle representations of the filling cores, `S_0` first.
    pub fn circle_reps(&self, index: &SeifertIndex) -> Result<Vec<CircleRep>> {
        let mut out = vec![CircleRep::new(1, 1)?];
        for (f, &eta) in index.fibers.iter().zip(&self.etas) {
            out.push(CircleRep::from_angle(eta, f.alpha)?);
        }
        Ok(out)
    }

    /// `Σ_j λ_j · max_k |log|2 sin(π(2k−1)η_j/(2α_j))||`, bounding
    /// `N · |log|Tor|/(2N) − limit|`.
    pub fn convergence_constant(&self, index: &SeifertIndex) -> Result<f64> {
        Ok(self.circle_reps(index)?.iter().map(crate::model_complexes::convergence_constant).sum())
    }
}

/// `log|Tor(Σ_* × S¹; ρ_{2N})| = −2N(1 − 2g − m) log 2`.
pub fn trivial_bundle_log_torsion(g: u32, m: usize, n: u64) -> f64 {
    let exponent = 1 - 2 * i64::from(g) - m as i64;
    -2.0 * n as f64 * exponent as f64 * LN_2
}

/// `log|Tor(M; ρ_{2N})| = −2N(2 − 2g − m) log 2 − 2 Σ_j Σ_k log|2 sin(π(2k−1)η_j/(2α_j))|`.
pub fn seifert_log_torsion(index: &SeifertIndex, rep: &SeifertRep, n: u64) -> Result<f64> {
    if rep.etas.len() != index.len() {
        return Err(Error::InvalidArgument("representation does not match the index".into()));
    }
    let exponent = 2 - 2 * i64::from(index.g) - index.len() as i64;
    let mut total = CompensatedSum::new();
    total.add(-2.0 * n as f64 * exponent as f64 * LN_2);
    for (f, &eta) in index.fibers.iter().zip(&rep.etas) {
        for k in 1..=n as i64 {
            total.add(-2.0 * log_abs_two_sin_pi_frac((2 * k - 1) * eta, 2 * f.alpha));
        }
    }
    Ok(total.value())
}

/// `seifert_log_torsion(index, rep, N)` for `N = 1, …, n_max`.
pub fn seifert_log_torsion_sequence(index: &SeifertIndex, rep: &SeifertRep, n_max: u64) -> Result<Vec<f64>> {
    if rep.etas.len() != index.len() {
        return Err(Error::InvalidArgument("representation does not match the index".into()));
    }
    let exponent = (2 - 2 * i64::from(index.g) - index.len() as i64) as f64;
    let per_fiber: Vec<Vec<f64>> = index
        .fibers
        .iter()
        .zip(&rep.etas)
        .map(|(f, &eta)| CircleRep::from_angle(eta, f.alpha).map(|c| circle_log_torsion_sequence(&c, n_max)))
        .collect::<Result<_>>()?;
    Ok((0..n_max as usize)
        .map(|i| {
            let n = (i + 1) as f64;
            let mut total = CompensatedSum::new();
            total.add(-2.0 * n * exponent * LN_2);
            for seq in &per_fiber {
                total.add(seq[i]);
            }
            total.value()
        })
        .collect())
}

/// The same value assembled from the trivial bundle and the `m + 1`
/// solid tori.
pub fn assembled_log_torsion(index: &SeifertIndex, rep: &SeifertRep, n: u64) -> Result<f64> {
    let mut total = CompensatedSum::new();
    total.add(trivial_bundle_log_torsion(index.g, index.len(), n));
    for circle in rep.circle_reps(index)? {
        total.add(circle_log_torsion(&circle, n));
    }
    Ok(total.value())
}

fn check_lambdas(index: &SeifertIndex, lambdas: &[u64]) -> Result<()> {
    if lambdas.len() != index.len() {
        return Err(Error::InvalidArgument(format!("expected {} values of λ, got {}", index.len(), lambdas.len())));
    }
    for (f, &l) in index.fibers.iter().zip(lambdas) {
        if l == 0 || !(f.alpha as u64).is_multiple_of(l) {
            return Err(Error::InvalidArgument(format!("λ = {l} does not divide α = {}", f.alpha)));
        }
    }
    Ok(())
}

/// `−(2 − 2g − Σ (λ_j − 1)/λ_j)`, in units of `log 2`.
pub fn seifert_limit_exact(index: &SeifertIndex, lambdas: &[u64]) -> Result<Log2Multiple> {
    check_lambdas(index, lambdas)?;
    let inner = lambdas.iter().fold(BigRational::from_integer((2 - 2 * i64::from(index.g)).into()), |acc, &l| {
        acc - rat(l as i64 - 1, l as i64)
    });
    Ok(Log2Multiple::from_rational(-inner))
}

/// `−χ − Σ (1/λ_j − 1/α_j)`, in units of `log 2`.
pub fn seifert_limit_chi_form(index: &SeifertIndex, lambdas: &[u64]) -> Result<Log2Multiple> {
    check_lambdas(index, lambdas)?;
    let correction = index
        .fibers
        .iter()
        .zip(lambdas)
        .fold(BigRational::zero(), |acc, (f, &l)| acc + rat(1, l as i64) - rat(1, f.alpha));
    Ok(Log2Multiple::from_rational(-orbifold_euler_char(index) - correction))
}

/// Limits of `log|Tor|/(2N)²` (always 0) and `log|Tor|/(2N)`.
pub fn seifert_limits(index: &SeifertIndex, lambdas: &[u64]) -> Result<AsymptoticProfile> {
    Ok(AsymptoticProfile { limit_sq: 0.0, limit_lin: seifert_limit_exact(index, lambdas)?.to_f64() })
}

/// The largest possible limit, `−χ log 2`.
pub fn max_limit(index: &SeifertIndex) -> Log2Multiple {
    Log2Multiple::from_rational(-orbifold_euler_char(index))
}
