//! Components of the irreducible SU(2) character variety of a Seifert
//! fibered homology sphere with `b = 0`, restricted to `ρ(h) = −I`.
//!
//! A component is labelled by rotation numbers `ξ_j`, the eigenvalues of
//! `ρ(q_j)` being `e^{±iπξ_j/α_j}`. The tuple must satisfy `ξ_j ≡ β_j (mod 2)`
//! and the product relation `q_1 ⋯ q_m = 1` must be solvable by an
//! irreducible representation, which is decided by folding the intervals of
//! achievable rotation angles.

use std::fmt;
use std::io::{BufRead, Write};

use num_rational::Ratio;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exact::Log2Multiple;
use crate::seifert::{h1_order, is_homology_sphere, lambda_of, max_limit, seifert_limit_exact, SeifertIndex};
use crate::{Error, Result};

/// Largest ξ lattice that [`enumerate_components`] is willing to scan.
pub const MAX_SEARCH: u128 = 200_000_000;

/// Rotation numbers `(ξ_1, …, ξ_m)` with `0 ≤ ξ_j ≤ α_j` and
/// `ξ_j ≡ β_j (mod 2)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct XiTuple(Vec<i64>);

impl XiTuple {
    pub fn new(index: &SeifertIndex, xi: Vec<i64>) -> Result<Self> {
        if xi.len() != index.len() {
            return Err(Error::InvalidArgument(format!("expected {} values of ξ, got {}", index.len(), xi.len())));
        }
        for (f, &x) in index.fibers().iter().zip(&xi) {
            if !(0..=f.alpha).contains(&x) {
                return Err(Error::InvalidArgument(format!("ξ = {x} outside [0, {}]", f.alpha)));
            }
            if (x - f.beta).rem_euclid(2) != 0 {
                return Err(Error::InvalidArgument(format!("ξ = {x} and β = {} have different parity", f.beta)));
            }
        }
        Ok(XiTuple(xi))
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    /// Number of `ξ_j ∉ {0, α_j}`.
    pub fn noncentral_count(&self, index: &SeifertIndex) -> usize {
        index.fibers().iter().zip(&self.0).filter(|(f, &x)| x != 0 && x != f.alpha).count()
    }

    pub fn lambdas(&self, index: &SeifertIndex) -> Result<Vec<u64>> {
        index.fibers().iter().zip(&self.0).map(|(f, &x)| lambda_of(f.alpha, f.beta, x)).collect()
    }
}

impl fmt::Display for XiTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A component with its dimension, the half-orders `λ_j` and the limit of
/// `log|Tor|/(2N)` in units of `log 2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub xi: XiTuple,
    pub dim: u32,
    pub lambdas: Vec<u64>,
    pub limit: Log2Multiple,
}

/// A closed interval of rotation angles, as fractions of `π`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AngleInterval {
    pub lo: Ratio<i64>,
    pub hi: Ratio<i64>,
}

impl AngleInterval {
    pub fn point(theta: Ratio<i64>) -> Self {
        AngleInterval { lo: theta, hi: theta }
    }

    /// Angles of `x · y` with `x` in `self` and `y` of angle `c`; also
    /// returns the unclamped lower end, negative exactly when `c` lies in
    /// the interior.
    fn combine(&self, c: Ratio<i64>) -> (AngleInterval, Ratio<i64>) {
        let one = Ratio::one();
        let two = Ratio::from_integer(2);
        let raw = (self.lo - c).max(c - self.hi);
        let lo = raw.max(Ratio::zero());
        let hi = one.min(self.hi + c).min(two - self.lo - c);
        (AngleInterval { lo, hi }, raw)
    }
}

fn check_angle(theta: Ratio<i64>) -> Result<()> {
    if theta < Ratio::zero() || theta > Ratio::one() {
        return Err(Error::InvalidArgument(format!("angle {theta}π outside [0, π]")));
    }
    Ok(())
}

/// Rotation angles achievable by a product of SU(2) elements with the given
/// class angles, folded left to right.
pub fn achievable_interval(angles: &[Ratio<i64>]) -> Result<AngleInterval> {
    let Some((&first, rest)) = angles.split_first() else {
        return Ok(AngleInterval::point(Ratio::zero()));
    };
    check_angle(first)?;
    let mut acc = AngleInterval::point(first);
    for &c in rest {
        check_angle(c)?;
        acc = acc.combine(c).0;
    }
    Ok(acc)
}

/// Whether `x_1 ⋯ x_m = 1` has a solution with the given class angles that
/// is not forced onto an interval endpoint. Central classes are folded
/// first; the last noncentral angle must lie strictly inside the interval
/// achieved by all the others.
pub fn closes_strictly(angles: &[Ratio<i64>]) -> Result<bool> {
    for &a in angles {
        check_angle(a)?;
    }
    let (central, noncentral): (Vec<_>, Vec<_>) = angles.iter().partition(|&&a| a.is_zero() || a.is_one());
    let ordered: Vec<Ratio<i64>> = central.into_iter().chain(noncentral).copied().collect();
    let Some((&last, init)) = ordered.split_last() else {
        return Ok(false);
    };
    if init.is_empty() {
        return Ok(false);
    }
    let acc = achievable_interval(init)?;
    Ok(acc.combine(last).1 < Ratio::zero())
}

fn require_enumerable(index: &SeifertIndex) -> Result<()> {
    if index.genus() != 0 {
        return Err(Error::Unsupported("only genus-0 bases are supported".into()));
    }
    if !is_homology_sphere(index) {
        return Err(Error::NotHomologySphere(format!("{index} has |H_1| = {}", h1_order(index))));
    }
    if index.b() != 0 {
        return Err(Error::Unsupported(format!("{index} has b ≠ 0; pass an index with b = 0")));
    }
    Ok(())
}

fn angle_of(xi: i64, alpha: i64) -> Ratio<i64> {
    Ratio::new(xi, alpha)
}

/// Builds the component record for an admissible tuple.
pub fn component_of(index: &SeifertIndex, xi: XiTuple) -> Result<Component> {
    let n = xi.noncentral_count(index);
    if n < 3 {
        return Err(Error::InvalidArgument(format!("{xi} has fewer than three noncentral classes")));
    }
    let lambdas = xi.lambdas(index)?;
    let limit = seifert_limit_exact(index, &lambdas)?;
    Ok(Component { xi, dim: 2 * (n as u32 - 3), lambdas, limit })
}

/// All components, sorted lexicographically by `ξ`.
pub fn enumerate_components(index: &SeifertIndex) -> Result<Vec<Component>> {
    require_enumerable(index)?;
    let choices: Vec<Vec<i64>> =
        index.fibers().iter().map(|f| (0..=f.alpha).filter(|x| (x - f.beta).rem_euclid(2) == 0).collect()).collect();
    let size: u128 = choices.iter().map(|c| c.len() as u128).product();
    if size > MAX_SEARCH {
        return Err(Error::InvalidArgument(format!("search space of {size} tuples is too large")));
    }
    let alphas = index.alphas();
    let Some((head, tail)) = choices.split_first() else {
        return Ok(Vec::new());
    };
    let mut found: Vec<Vec<i64>> = head
        .par_iter()
        .flat_map_iter(|&x0| {
            let mut local = Vec::new();
            let mut xi = vec![x0];
            scan(tail, &alphas, &mut xi, &mut local);
            local
        })
        .collect();
    found.sort();
    found.into_iter().map(|xi| component_of(index, XiTuple(xi))).collect()
}

fn scan(rest: &[Vec<i64>], alphas: &[i64], xi: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    match rest.split_first() {
        None => {
            let noncentral = xi.iter().zip(alphas).filter(|(&x, &a)| x != 0 && x != a).count();
            if noncentral < 3 {
                return;
            }
            let angles: Vec<Ratio<i64>> = xi.iter().zip(alphas).map(|(&x, &a)| angle_of(x, a)).collect();
            if closes_strictly(&angles).unwrap_or(false) {
                out.push(xi.clone());
            }
        }
        Some((head, tail)) => {
            for &x in head {
                xi.push(x);
                scan(tail, alphas, xi, out);
                xi.pop();
            }
        }
    }
}

/// Limit of `log|Tor|/(2N)` on a component, in units of `log 2`.
pub fn component_limit(index: &SeifertIndex, xi: &XiTuple) -> Result<Log2Multiple> {
    seifert_limit_exact(index, &xi.lambdas(index)?)
}

/// The components on which the limit is largest and smallest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extremes {
    pub max_value: Log2Multiple,
    pub min_value: Log2Multiple,
    pub max_components: Vec<Component>,
    pub min_components: Vec<Component>,
    /// `−χ`, the largest value the limit can take.
    pub chi_bound: Log2Multiple,
    /// When every `α_j` is prime: whether the maximum is `−χ log 2`, is
    /// attained exactly on the top-dimensional components, and the minimum
    /// lies on 0-dimensional ones.
    pub prime_check: Option<bool>,
}

fn is_prime(n: i64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Partitions the components by limit value.
pub fn classify_extremes(index: &SeifertIndex) -> Result<Extremes> {
    let components = enumerate_components(index)?;
    classify_components(index, &components)
}

/// [`classify_extremes`] on an already enumerated list.
pub fn classify_components(index: &SeifertIndex, components: &[Component]) -> Result<Extremes> {
    let max_value = components
        .iter()
        .map(|c| &c.limit)
        .max_by(|a, b| a.coefficient().cmp(b.coefficient()))
        .ok_or_else(|| Error::InvalidArgument(format!("{index} has no irreducible components")))?
        .clone();
    let min_value = components
        .iter()
        .map(|c| &c.limit)
        .min_by(|a, b| a.coefficient().cmp(b.coefficient()))
        .expect("nonempty")
        .clone();
    let pick = |v: &Log2Multiple| components.iter().filter(|c| &c.limit == v).cloned().collect::<Vec<_>>();
    let max_components = pick(&max_value);
    let min_components = pick(&min_value);
    let chi_bound = max_limit(index);
    let prime_check = index.alphas().iter().all(|&a| is_prime(a)).then(|| {
        let top = 2 * (index.len() as u32).saturating_sub(3);
        let top_components: Vec<&Component> = components.iter().filter(|c| c.dim == top).collect();
        max_value == chi_bound
            && max_components.len() == top_components.len()
            && max_components.iter().all(|c| c.dim == top)
            && min_components.iter().all(|c| c.dim == 0)
    });
    Ok(Extremes { max_value, min_value, max_components, min_components, chi_bound, prime_check })
}

/// A catalog of components for one index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalog {
    pub seifert: SeifertIndex,
    pub components: Vec<Component>,
}

impl Catalog {
    pub fn build(index: &SeifertIndex) -> Result<Self> {
        Ok(Catalog { seifert: index.clone(), components: enumerate_components(index)? })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("catalog serializes") + "\n"
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::parse("catalog", e.to_string()))
    }

    pub const CSV_HEADER: &'static str = "xi,dim,lambdas,limit_num,limit_den";

    /// One row per component; tuples are space separated inside a field.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "{}", Self::CSV_HEADER)?;
        for c in &self.components {
            let join = |v: &mut dyn Iterator<Item = String>| v.collect::<Vec<_>>().join(" ");
            writeln!(
                out,
                "{},{},{},{},{}",
                join(&mut c.xi.values().iter().map(|x| x.to_string())),
                c.dim,
                join(&mut c.lambdas.iter().map(|x| x.to_string())),
                c.limit.numer(),
                c.limit.denom()
            )?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("write to memory");
        String::from_utf8(buf).expect("ASCII output")
    }

    /// Reads the rows written by [`Catalog::write_csv`].
    pub fn components_from_csv<R: BufRead>(index: &SeifertIndex, input: R) -> Result<Vec<Component>> {
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::parse("csv", "empty input"))?
            .map_err(|e| Error::parse("csv", e.to_string()))?;
        if header.trim_end() != Self::CSV_HEADER {
            return Err(Error::parse("csv", format!("unexpected header {header:?}")));
        }
        let mut out = Vec::new();
        for (row, line) in lines.enumerate() {
            let line = line.map_err(|e| Error::parse("csv", e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let field = |name: &str| format!("row {}: {name}", row + 1);
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 5 {
                return Err(Error::parse(&field("columns"), format!("expected 5 columns, got {}", cols.len())));
            }
            let ints = |name: &str, s: &str| -> Result<Vec<i64>> {
                s.split_whitespace()
                    .map(|t| t.parse().map_err(|_| Error::parse(&field(name), format!("bad integer {t:?}"))))
                    .collect()
            };
            let xi = XiTuple::new(index, ints("xi", cols[0])?)?;
            let dim = cols[1].trim().parse().map_err(|_| Error::parse(&field("dim"), cols[1]))?;
            let lambdas = ints("lambdas", cols[2])?.into_iter().map(|x| x as u64).collect();
            let num: i64 = cols[3].trim().parse().map_err(|_| Error::parse(&field("limit_num"), cols[3]))?;
            let den: i64 = cols[4].trim().parse().map_err(|_| Error::parse(&field("limit_den"), cols[4]))?;
            if den == 0 {
                return Err(Error::parse(&field("limit_den"), "zero denominator"));
            }
            out.push(Component { xi, dim, lambdas, limit: Log2Multiple::new(num, den) });
        }
        Ok(out)
    }
}
