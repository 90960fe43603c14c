//! Dehn filling of torus boundary components, torus-knot exteriors and the
//! Brieskorn homology spheres obtained by `1/n` surgery on them.

use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};

use crate::exact::{rat, sum_reciprocals, Log2Multiple};
use crate::model_complexes::{circle_log_torsion, circle_log_torsion_sequence, CircleRep};
use crate::numeric::{gcd, log_abs_two_sin_pi_frac, CompensatedSum};
use crate::{Error, Result};

/// A filling slope `α/β` on a boundary torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FillingSlope {
    pub alpha: i64,
    pub beta: i64,
}

impl FillingSlope {
    pub fn new(alpha: i64, beta: i64) -> Result<Self> {
        if alpha == 0 && beta == 0 {
            return Err(Error::InvalidArgument("slope 0/0".into()));
        }
        if gcd(alpha, beta) != 1 {
            return Err(Error::InvalidArgument(format!("slope {alpha}/{beta} is not primitive")));
        }
        Ok(FillingSlope { alpha, beta })
    }
}

/// Exterior of the `(p, q)` torus knot together with the surgery
/// coefficient `1/n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorusKnotExterior {
    p: i64,
    q: i64,
    n: i64,
}

impl TorusKnotExterior {
    pub fn new(p: i64, q: i64, n: i64) -> Result<Self> {
        if p < 2 || q < 2 {
            return Err(Error::InvalidArgument(format!("p and q must be ≥ 2, got ({p}, {q})")));
        }
        if gcd(p, q) != 1 {
            return Err(Error::InvalidArgument(format!("p = {p} and q = {q} are not coprime")));
        }
        p.checked_mul(q)
            .and_then(|pq| pq.checked_mul(n))
            .and_then(|x| x.checked_add(1))
            .ok_or_else(|| Error::InvalidArgument("pqn + 1 overflows".into()))?;
        Ok(TorusKnotExterior { p, q, n })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    /// Third Brieskorn index `r = |pqn + 1|`.
    pub fn r(&self) -> i64 {
        (self.p * self.q * self.n + 1).abs()
    }
}

/// Parameters of an irreducible representation of the surgered manifold:
/// the traces of the two torus-knot generators and of the meridian are
/// `2cos(πa/p)`, `2cos(πb/q)` and `2cos(πc/r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct JohnsonTriple {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl JohnsonTriple {
    /// Checks the range and parity constraints for `tk`.
    pub fn new(tk: &TorusKnotExterior, a: i64, b: i64, c: i64) -> Result<Self> {
        let t = JohnsonTriple { a, b, c };
        if !t.is_valid_for(tk) {
            return Err(Error::InvalidArgument(format!(
                "({a}, {b}, {c}) is not a valid triple for (p, q, n) = ({}, {}, {})",
                tk.p, tk.q, tk.n
            )));
        }
        Ok(t)
    }

    pub fn is_valid_for(&self, tk: &TorusKnotExterior) -> bool {
        let JohnsonTriple { a, b, c } = *self;
        0 < a
            && a < tk.p
            && 0 < b
            && b < tk.q
            && (a - b).rem_euclid(2) == 0
            && 0 < c
            && c < tk.r()
            && (c - tk.n * a).rem_euclid(2) == 0
    }

    /// `a ≡ b ≡ 1` and `c ≡ n (mod 2)`.
    pub fn is_acyclic(&self, tk: &TorusKnotExterior) -> bool {
        self.a.rem_euclid(2) == 1 && self.b.rem_euclid(2) == 1 && (self.c - tk.n).rem_euclid(2) == 0
    }
}

/// A triple together with its acyclicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedTriple {
    #[serde(flatten)]
    pub triple: JohnsonTriple,
    pub acyclic: bool,
}

/// Limits of `log|Tor|/(2N)²` and `log|Tor|/(2N)` as `N → ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticProfile {
    pub limit_sq: f64,
    pub limit_lin: f64,
}

/// `log|Tor(M ∪ solid tori)| = log|Tor(M)| + Σ_j log|Tor(S¹; ρ_j)|`; the
/// boundary tori contribute nothing.
pub fn surgered_log_torsion(logtor_m: f64, circle_reps: &[CircleRep], n: u64) -> f64 {
    let mut total = CompensatedSum::new();
    total.add(logtor_m);
    for rep in circle_reps {
        total.add(circle_log_torsion(rep, n));
    }
    total.value()
}

/// Shifts the linear limit by `−log 2 · Σ 1/λ_j`.
pub fn surgery_limits(profile: &AsymptoticProfile, lambdas: &[u64]) -> Result<AsymptoticProfile> {
    if lambdas.contains(&0) {
        return Err(Error::InvalidArgument("λ must be ≥ 1".into()));
    }
    let shift: f64 = lambdas.iter().map(|&l| 1.0 / l as f64).sum::<CompensatedSum>().value();
    Ok(AsymptoticProfile { limit_sq: profile.limit_sq, limit_lin: profile.limit_lin - LN_2 * shift })
}

/// [`surgery_limits`] on the linear limit, exactly.
pub fn surgery_limits_exact(limit_lin: &Log2Multiple, lambdas: &[u64]) -> Result<Log2Multiple> {
    if lambdas.contains(&0) {
        return Err(Error::InvalidArgument("λ must be ≥ 1".into()));
    }
    Ok(limit_lin.clone() - Log2Multiple::from_rational(sum_reciprocals(lambdas.iter().copied())))
}

/// All triples for `tk` in lexicographic order, tagged by acyclicity.
pub fn johnson_classify(tk: &TorusKnotExterior) -> Vec<TaggedTriple> {
    let r = tk.r();
    let mut out = Vec::new();
    for a in 1..tk.p {
        for b in (1..tk.q).filter(|b| (a - b).rem_euclid(2) == 0) {
            for c in (1..r).filter(|c| (c - tk.n * a).rem_euclid(2) == 0) {
                let triple = JohnsonTriple { a, b, c };
                out.push(TaggedTriple { triple, acyclic: triple.is_acyclic(tk) });
            }
        }
    }
    out
}

fn require_acyclic(tk: &TorusKnotExterior, triple: &JohnsonTriple) -> Result<()> {
    if !triple.is_valid_for(tk) {
        return Err(Error::InvalidArgument(format!(
            "({}, {}, {}) is not a valid triple",
            triple.a, triple.b, triple.c
        )));
    }
    if !triple.is_acyclic(tk) {
        return Err(Error::NotAcyclic(format!("triple ({}, {}, {}) is not acyclic", triple.a, triple.b, triple.c)));
    }
    Ok(())
}

/// `Tor = 2⁻⁴ sin⁻²(πa/2p) sin⁻²(πb/2q) sin⁻²(π(cpq − r)/2r)` for the
/// two-dimensional representation itself.
pub fn brieskorn_torsion(tk: &TorusKnotExterior, triple: &JohnsonTriple) -> Result<f64> {
    require_acyclic(tk, triple)?;
    let (p, q, r) = (tk.p as f64, tk.q as f64, tk.r() as f64);
    let eta = (triple.c * tk.p * tk.q - tk.r()) as f64;
    let sa = (PI * triple.a as f64 / (2.0 * p)).sin();
    let sb = (PI * triple.b as f64 / (2.0 * q)).sin();
    let sc = (PI * eta / (2.0 * r)).sin();
    Ok(1.0 / (16.0 * sa * sa * sb * sb * sc * sc))
}

/// The representation of the filling core `ℓ`, with eigenvalues
/// `e^{±iπ(cpq − r)/r}` reduced to lowest terms, so `λ = r/(c, r)`.
pub fn filling_circle_rep(tk: &TorusKnotExterior, triple: &JohnsonTriple) -> Result<CircleRep> {
    require_acyclic(tk, triple)?;
    CircleRep::from_angle(triple.c * tk.p * tk.q - tk.r(), tk.r())
}

fn require_odd(p: i64, q: i64, a: i64, b: i64) -> Result<()> {
    if p < 2 || q < 2 {
        return Err(Error::InvalidArgument("p and q must be ≥ 2".into()));
    }
    if a.rem_euclid(2) != 1 || b.rem_euclid(2) != 1 {
        return Err(Error::NotAcyclic(format!("a = {a} and b = {b} must both be odd")));
    }
    Ok(())
}

/// `log|Tor(M; ρ_{2N})| = 2N log 2 − Σ_{k=1}^{N} [log(4 sin² π(2k−1)a/2p) + log(4 sin² π(2k−1)b/2q)]`
/// for the `(p, q)` torus-knot exterior.
pub fn torusknot_higher_log_torsion(p: i64, q: i64, a: i64, b: i64, n: u64) -> Result<f64> {
    require_odd(p, q, a, b)?;
    let mut total = CompensatedSum::new();
    total.add(2.0 * n as f64 * LN_2);
    for k in 1..=n as i64 {
        let odd = 2 * k - 1;
        let term_a = log_abs_two_sin_pi_frac(odd * a, 2 * p);
        let term_b = log_abs_two_sin_pi_frac(odd * b, 2 * q);
        if !term_a.is_finite() || !term_b.is_finite() {
            return Err(Error::NotAcyclic(format!("vanishing sine at k = {k}")));
        }
        total.add(-2.0 * term_a);
        total.add(-2.0 * term_b);
    }
    Ok(total.value())
}

/// `torusknot_higher_log_torsion` for `N = 1, …, n_max`.
pub fn torusknot_higher_log_torsion_sequence(p: i64, q: i64, a: i64, b: i64, n_max: u64) -> Result<Vec<f64>> {
    require_odd(p, q, a, b)?;
    let seq_a = circle_log_torsion_sequence(&CircleRep::from_angle(a, p)?, n_max);
    let seq_b = circle_log_torsion_sequence(&CircleRep::from_angle(b, q)?, n_max);
    Ok((0..n_max as usize)
        .map(|i| {
            let mut total = CompensatedSum::new();
            total.add(2.0 * (i + 1) as f64 * LN_2);
            total.add(seq_a[i]);
            total.add(seq_b[i]);
            total.value()
        })
        .collect())
}

/// `brieskorn_higher_log_torsion` for `N = 1, …, n_max`.
pub fn brieskorn_higher_log_torsion_sequence(
    tk: &TorusKnotExterior,
    triple: &JohnsonTriple,
    n_max: u64,
) -> Result<Vec<f64>> {
    let filling = circle_log_torsion_sequence(&filling_circle_rep(tk, triple)?, n_max);
    let exterior = torusknot_higher_log_torsion_sequence(tk.p, tk.q, triple.a, triple.b, n_max)?;
    Ok(exterior.iter().zip(&filling).map(|(x, y)| x + y).collect())
}

/// `(1 − 1/p′ − 1/q′)` with `p′ = p/(a, p)`, `q′ = q/(b, q)`.
pub fn torusknot_limit_exact(p: i64, q: i64, a: i64, b: i64) -> Result<Log2Multiple> {
    require_odd(p, q, a, b)?;
    let p_red = p / gcd(a, p);
    let q_red = q / gcd(b, q);
    Ok(Log2Multiple::from_rational(rat(1, 1) - rat(1, p_red) - rat(1, q_red)))
}

/// Asymptotic profile of the torus-knot exterior; the quadratic limit vanishes.
pub fn torusknot_profile(p: i64, q: i64, a: i64, b: i64) -> Result<AsymptoticProfile> {
    Ok(AsymptoticProfile { limit_sq: 0.0, limit_lin: torusknot_limit_exact(p, q, a, b)?.to_f64() })
}

/// `log|Tor(M(1/n); ρ_{2N})|` assembled from the exterior and the filling.
pub fn brieskorn_higher_log_torsion(tk: &TorusKnotExterior, triple: &JohnsonTriple, n: u64) -> Result<f64> {
    let rep = filling_circle_rep(tk, triple)?;
    let exterior = torusknot_higher_log_torsion(tk.p, tk.q, triple.a, triple.b, n)?;
    Ok(surgered_log_torsion(exterior, &[rep], n))
}

/// `(1 − 1/p′ − 1/q′ − 1/r′)` with `r′ = r/(c, r)`.
pub fn brieskorn_leading_limit_exact(tk: &TorusKnotExterior, triple: &JohnsonTriple) -> Result<Log2Multiple> {
    let rep = filling_circle_rep(tk, triple)?;
    let exterior = torusknot_limit_exact(tk.p, tk.q, triple.a, triple.b)?;
    surgery_limits_exact(&exterior, &[rep.lambda() as u64])
}

/// `lim log|Tor(M(1/n); ρ_{2N})| / (2N) = (1 − 1/p′ − 1/q′ − 1/r′) log 2`.
pub fn brieskorn_leading_limit(tk: &TorusKnotExterior, triple: &JohnsonTriple) -> Result<f64> {
    Ok(brieskorn_leading_limit_exact(tk, triple)?.to_f64())
}

/// The largest possible leading coefficient, `(1 − 1/p − 1/q − 1/r)`.
pub fn brieskorn_max_limit_exact(tk: &TorusKnotExterior) -> Log2Multiple {
    Log2Multiple::from_rational(rat(1, 1) - rat(1, tk.p) - rat(1, tk.q) - rat(1, tk.r()))
}
