//! Twisted chain complexes of the circle and the torus with coefficients in
//! `V_n`, and the closed-form circle torsion.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exact::{rat, Log2Multiple};
use crate::numeric::{gcd, log_abs_two_sin_pi_frac, CompensatedSum};
use crate::sl2_rep::{sym_power, ConjClassDescriptor, HypEigenvalue, SymPowerMatrix};
use crate::torsion_core::BasedChainComplex;
use crate::{CMatrix, Error, Result};

const COMMUTE_TOL: f64 = 1e-10;
const PARALLEL_THRESHOLD: u64 = 1 << 16;

/// A circle representation sending the generator to a class with eigenvalues
/// `e^{±iπη/λ}`, of even order `2λ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CircleRep {
    eta: i64,
    lambda: i64,
}

impl CircleRep {
    /// Validates `η` odd and coprime to `λ ≥ 1`, then reduces `η` into `(0, 2λ)`.
    pub fn new(eta: i64, lambda: i64) -> Result<Self> {
        if lambda < 1 {
            return Err(Error::InvalidCircleRep(format!("λ must be ≥ 1, got {lambda}")));
        }
        if eta.rem_euclid(2) != 1 {
            return Err(Error::InvalidCircleRep(format!("η must be odd, got {eta}")));
        }
        if gcd(eta, lambda) != 1 {
            return Err(Error::InvalidCircleRep(format!("η = {eta} and λ = {lambda} are not coprime")));
        }
        Ok(CircleRep { eta: eta.rem_euclid(2 * lambda), lambda })
    }

    /// The class `e^{±iπ num/den}` in lowest terms. Fails when the reduced
    /// numerator is even, i.e. when the order is odd.
    pub fn from_angle(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidCircleRep("zero denominator".into()));
        }
        let g = gcd(num, den);
        let (mut eta, mut lambda) = (num / g, den / g);
        if lambda < 0 {
            eta = -eta;
            lambda = -lambda;
        }
        if eta.rem_euclid(2) == 0 {
            return Err(Error::NotAcyclic(format!(
                "e^(iπ·{num}/{den}) has odd order, twisted circle complexes are not acyclic"
            )));
        }
        Self::new(eta, lambda)
    }

    /// Converts a class descriptor. Only finite even-order diagonal classes
    /// have a closed-form torsion.
    pub fn from_descriptor(desc: &ConjClassDescriptor) -> Result<Self> {
        match desc {
            ConjClassDescriptor::Hyp(HypEigenvalue::RootOfUnity(angle)) => {
                let t = angle.turns();
                Self::from_angle(*t.numer(), *t.denom())
            }
            ConjClassDescriptor::Hyp(HypEigenvalue::Real(_)) => {
                Err(Error::Unsupported("circle torsion for classes of infinite order".into()))
            }
            ConjClassDescriptor::Para(2) => {
                Err(Error::NotAcyclic("parabolic class of trace 2 has eigenvalue 1".into()))
            }
            ConjClassDescriptor::Para(_) => {
                Err(Error::Unsupported("circle torsion for parabolic classes of trace −2".into()))
            }
        }
    }

    pub fn eta(&self) -> i64 {
        self.eta
    }

    pub fn lambda(&self) -> i64 {
        self.lambda
    }

    /// Order `2λ` of the image of the generator.
    pub fn order(&self) -> u64 {
        2 * self.lambda as u64
    }

    pub fn descriptor(&self) -> ConjClassDescriptor {
        ConjClassDescriptor::root_of_unity(self.eta, self.lambda).expect("λ ≥ 1")
    }

    /// `σ_n` of the diagonal representative.
    pub fn sym_power(&self, n: usize) -> Result<SymPowerMatrix> {
        sym_power(&self.descriptor().normal_form(), n)
    }
}

/// A commuting pair of classes for the torus generators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusRep {
    pub q_desc: ConjClassDescriptor,
    pub h_desc: ConjClassDescriptor,
}

impl TorusRep {
    /// Requires both classes in the diagonal or both in the parabolic
    /// subgroup; `±I` is accepted alongside either.
    pub fn new(q_desc: ConjClassDescriptor, h_desc: ConjClassDescriptor) -> Result<Self> {
        let compatible = q_desc.is_central() || h_desc.is_central() || q_desc.is_hyperbolic() == h_desc.is_hyperbolic();
        if !compatible {
            return Err(Error::InvalidClass(format!("{q_desc} and {h_desc} do not lie in a common abelian subgroup")));
        }
        Ok(TorusRep { q_desc, h_desc })
    }

    /// `(σ_n(Q), σ_n(H))` for the normal-form representatives.
    pub fn sym_powers(&self, n: usize) -> Result<(SymPowerMatrix, SymPowerMatrix)> {
        let q = sym_power(&self.q_desc.normal_form(), n)?;
        let h = sym_power(&self.h_desc.normal_form(), n)?;
        Ok((q, h))
    }
}

/// `V_n →(L − I)→ V_n`.
pub fn circle_complex(l: &SymPowerMatrix) -> BasedChainComplex {
    let n = l.dim();
    let boundary = l.matrix() - CMatrix::identity(n, n);
    BasedChainComplex::two_term(boundary).expect("square boundary")
}

/// `V_n → V_n ⊕ V_n → V_n` with `∂_2 = (I − H; Q − I)` and
/// `∂_1 = (Q − I, H − I)`.
pub fn torus_complex(q: &SymPowerMatrix, h: &SymPowerMatrix) -> Result<BasedChainComplex> {
    let n = q.dim();
    if h.dim() != n {
        return Err(Error::InvalidArgument("Q and H have different sizes".into()));
    }
    let (qm, hm) = (q.matrix(), h.matrix());
    let comm = qm * hm - hm * qm;
    let dev = comm.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let scale = 1.0f64.max(qm.norm() * hm.norm());
    if dev > COMMUTE_TOL * scale {
        return Err(Error::NotCommuting(dev));
    }
    let id = CMatrix::identity(n, n);
    let q_minus = qm - &id;
    let h_minus = hm - &id;
    let mut d2 = CMatrix::zeros(2 * n, n);
    d2.view_mut((0, 0), (n, n)).copy_from(&(-&h_minus));
    d2.view_mut((n, 0), (n, n)).copy_from(&q_minus);
    let mut d1 = CMatrix::zeros(n, 2 * n);
    d1.view_mut((0, 0), (n, n)).copy_from(&q_minus);
    d1.view_mut((0, n), (n, n)).copy_from(&h_minus);
    BasedChainComplex::new(vec![n, 2 * n, n], vec![d1, d2])
}

/// Whether the circle complex is acyclic for every even dimension `2N`.
pub fn circle_acyclic_all_n(desc: &ConjClassDescriptor) -> bool {
    !(desc.is_odd_order() || matches!(desc, ConjClassDescriptor::Para(2)))
}

/// Whether the torus complex is acyclic for every even dimension `2N`.
pub fn torus_acyclic_all_n(rep: &TorusRep) -> bool {
    circle_acyclic_all_n(&rep.q_desc) || circle_acyclic_all_n(&rep.h_desc)
}

fn sine_term(rep: &CircleRep, k: u64) -> f64 {
    let odd = 2 * k as i64 - 1;
    log_abs_two_sin_pi_frac(odd * rep.eta, 2 * rep.lambda)
}

fn log_sine_sum(rep: &CircleRep, n: u64) -> f64 {
    if n <= PARALLEL_THRESHOLD {
        return (1..=n).map(|k| sine_term(rep, k)).sum::<CompensatedSum>().value();
    }
    let chunk = PARALLEL_THRESHOLD;
    let chunks = n.div_ceil(chunk);
    let partials: Vec<CompensatedSum> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * chunk + 1;
            let hi = ((c + 1) * chunk).min(n);
            (lo..=hi).map(|k| sine_term(rep, k)).sum::<CompensatedSum>()
        })
        .collect();
    let mut total = CompensatedSum::new();
    for p in &partials {
        total.merge(p);
    }
    total.value()
}

/// `log|Tor(S¹; ρ_{2N})| = −2 Σ_{k=1}^{N} log|2 sin(π(2k−1)η/(2λ))|`.
pub fn circle_log_torsion(rep: &CircleRep, n: u64) -> f64 {
    -2.0 * log_sine_sum(rep, n)
}

/// `circle_log_torsion(rep, N)` for `N = 1, …, n_max`, by running sums.
pub fn circle_log_torsion_sequence(rep: &CircleRep, n_max: u64) -> Vec<f64> {
    let mut acc = CompensatedSum::new();
    (1..=n_max)
        .map(|k| {
            acc.add(sine_term(rep, k));
            -2.0 * acc.value()
        })
        .collect()
}

/// `lim log|Tor(S¹; ρ_{2N})| / (2N) = −log 2 / λ`.
pub fn circle_limit(lambda: u64) -> f64 {
    -std::f64::consts::LN_2 / lambda as f64
}

/// [`circle_limit`] as an exact multiple of `log 2`.
pub fn circle_limit_exact(lambda: u64) -> Log2Multiple {
    Log2Multiple::from_rational(-rat(1, lambda as i64))
}

/// Cesàro limit of a periodic non-negative sequence given by one period.
pub fn periodic_average(values: &[f64], period: usize) -> Result<f64> {
    if period == 0 || values.len() != period {
        return Err(Error::InvalidArgument(format!(
            "expected exactly one period of {period} values, got {}",
            values.len()
        )));
    }
    if let Some(bad) = values.iter().find(|v| v.is_nan() || **v < 0.0) {
        return Err(Error::InvalidArgument(format!("entries must be non-negative, got {bad}")));
    }
    Ok(values.iter().copied().sum::<CompensatedSum>().value() / period as f64)
}

/// `C` with `|log|Tor|/(2N) − limit| ≤ C / N` for every `N`:
/// `λ · max_k |log|2 sin(π(2k−1)η/(2λ))||`.
pub fn convergence_constant(rep: &CircleRep) -> f64 {
    let worst = (1..=rep.lambda as u64).map(|k| sine_term(rep, k).abs()).fold(0.0, f64::max);
    rep.lambda as f64 * worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sl2_rep::Mat2;
    use crate::torsion_core::{is_acyclic, torsion};
    use proptest::prelude::*;
    use std::f64::consts::{LN_2, PI};

    #[test]
    fn minus_identity_circle() {
        let l = SymPowerMatrix::from_matrix(-CMatrix::identity(2, 2)).unwrap();
        let c = circle_complex(&l);
        assert!(is_acyclic(&c));
        assert!((torsion(&c).log_abs + 2.0 * LN_2).abs() < 1e-14);
        assert!(!is_acyclic(&circle_complex(&SymPowerMatrix::identity(4))));
    }

    #[test]
    fn rotation_by_quarter_pi_is_acyclic() {
        let rot = Mat2::rotation(0.25);
        for n in 1..=20 {
            let c = circle_complex(&sym_power(&rot, 2 * n).unwrap());
            assert!(is_acyclic(&c), "N = {n}");
        }
    }

    #[test]
    fn circle_rep_normalisation() {
        let rep = CircleRep::new(-1, 3).unwrap();
        assert_eq!((rep.eta(), rep.lambda()), (5, 3));
        assert!(CircleRep::new(2, 3).is_err());
        assert!(CircleRep::new(3, 3).is_err());
        assert!(CircleRep::new(1, 0).is_err());
        assert_eq!(CircleRep::from_angle(6, 4).unwrap(), CircleRep::new(3, 2).unwrap());
        assert!(matches!(CircleRep::from_angle(2, 3), Err(Error::NotAcyclic(_))));
        let para = ConjClassDescriptor::parabolic(-2).unwrap();
        assert!(matches!(CircleRep::from_descriptor(&para), Err(Error::Unsupported(_))));
    }

    #[test]
    fn closed_form_examples() {
        let one = CircleRep::new(1, 1).unwrap();
        for n in [1, 5, 40] {
            assert!((circle_log_torsion(&one, n) + 2.0 * n as f64 * LN_2).abs() < 1e-12);
        }
        let half = CircleRep::new(1, 2).unwrap();
        assert!((circle_log_torsion(&half, 1) + LN_2).abs() < 1e-14);
        assert!((circle_limit(1) + LN_2).abs() < 1e-16);
        assert!((circle_limit(7) + LN_2 / 7.0).abs() < 1e-16);
        assert_eq!(circle_limit_exact(7), Log2Multiple::new(-1, 7));
    }

    #[test]
    fn oracle_equivalence() {
        for lambda in 1..=7i64 {
            for eta in (1..2 * lambda).step_by(2) {
                let Ok(rep) = CircleRep::new(eta, lambda) else { continue };
                for n in 1..=25u64 {
                    let l = rep.sym_power(2 * n as usize).unwrap();
                    let oracle = torsion(&circle_complex(&l));
                    assert!(oracle.defined);
                    let closed = circle_log_torsion(&rep, n);
                    assert!(
                        (oracle.log_abs - closed).abs() < 1e-7,
                        "η={eta} λ={lambda} N={n}: {} vs {closed}",
                        oracle.log_abs
                    );
                }
            }
        }
    }

    #[test]
    fn acyclicity_criteria() {
        let order2 = ConjClassDescriptor::of_order(2).unwrap();
        let order3 = ConjClassDescriptor::of_order(3).unwrap();
        let para_plus = ConjClassDescriptor::parabolic(2).unwrap();
        let para_minus = ConjClassDescriptor::parabolic(-2).unwrap();
        assert!(circle_acyclic_all_n(&order2));
        assert!(!circle_acyclic_all_n(&order3));
        assert!(!circle_acyclic_all_n(&para_plus));
        assert!(circle_acyclic_all_n(&para_minus));
        assert!(torus_acyclic_all_n(&TorusRep::new(order3, order2).unwrap()));
        let order5 = ConjClassDescriptor::of_order(5).unwrap();
        assert!(!torus_acyclic_all_n(&TorusRep::new(order3, order5).unwrap()));
        assert!(!torus_acyclic_all_n(&TorusRep::new(para_plus, para_plus).unwrap()));
        assert!(TorusRep::new(order3, para_plus).is_err());
    }

    #[test]
    fn circle_criterion_matches_rank_computation() {
        let classes = [
            ConjClassDescriptor::of_order(1).unwrap(),
            ConjClassDescriptor::of_order(2).unwrap(),
            ConjClassDescriptor::of_order(3).unwrap(),
            ConjClassDescriptor::of_order(4).unwrap(),
            ConjClassDescriptor::of_order(9).unwrap(),
            ConjClassDescriptor::of_order(10).unwrap(),
            ConjClassDescriptor::real(1.7).unwrap(),
            ConjClassDescriptor::parabolic(2).unwrap(),
            ConjClassDescriptor::parabolic(-2).unwrap(),
        ];
        for desc in classes {
            // Unipotent powers have binomial entries and σ_{2N}(L) − I loses
            // rank numerically past N ≈ 7.
            let max_n = if desc.is_hyperbolic() { 12 } else { 6 };
            let all = (1..=max_n).all(|n| {
                let l = sym_power(&desc.normal_form(), 2 * n).unwrap();
                is_acyclic(&circle_complex(&l))
            });
            assert_eq!(all, circle_acyclic_all_n(&desc), "{desc}");
        }
    }

    #[test]
    fn torus_complex_shapes_and_triviality() {
        let q = SymPowerMatrix::identity(3);
        let c = torus_complex(&q, &q).unwrap();
        assert_eq!(c.dims(), &[3, 6, 3]);
        assert!(!is_acyclic(&c));

        let minus = ConjClassDescriptor::of_order(2).unwrap();
        for q_order in [3u64, 5, 6, 7] {
            let rep = TorusRep::new(ConjClassDescriptor::of_order(q_order).unwrap(), minus).unwrap();
            for n in [2usize, 4, 8, 12] {
                let (qm, hm) = rep.sym_powers(n).unwrap();
                let t = torsion(&torus_complex(&qm, &hm).unwrap());
                assert!(t.defined);
                assert!(t.log_abs.abs() < 1e-7, "order {q_order}, n = {n}: {}", t.log_abs);
            }
        }
    }

    #[test]
    fn torus_rejects_non_commuting() {
        let a = sym_power(&Mat2::rotation(0.3), 2).unwrap();
        let b = sym_power(&Mat2::from_real(1.0, 1.0, 0.0, 1.0).unwrap(), 2).unwrap();
        assert!(matches!(torus_complex(&a, &b), Err(Error::NotCommuting(_))));
    }

    #[test]
    fn periodic_average_cases() {
        assert_eq!(periodic_average(&[3.0, 3.0, 3.0], 3).unwrap(), 3.0);
        assert_eq!(periodic_average(&[0.0, 2.0], 2).unwrap(), 1.0);
        assert!(periodic_average(&[1.0, -1.0], 2).is_err());
        assert!(periodic_average(&[1.0], 2).is_err());
        let once = periodic_average(&[0.5, 1.5, 4.0], 3).unwrap();
        let twice = periodic_average(&[0.5, 1.5, 4.0, 0.5, 1.5, 4.0], 6).unwrap();
        assert!((once - twice).abs() < 1e-15);
    }

    #[test]
    fn sequence_matches_pointwise() {
        let rep = CircleRep::new(3, 5).unwrap();
        let seq = circle_log_torsion_sequence(&rep, 200);
        for n in [1u64, 2, 17, 200] {
            assert!((seq[n as usize - 1] - circle_log_torsion(&rep, n)).abs() < 1e-11);
        }
    }

    #[test]
    fn parallel_sum_matches_serial() {
        let rep = CircleRep::new(5, 7).unwrap();
        let n = 3 * PARALLEL_THRESHOLD + 17;
        let serial: f64 = (1..=n).map(|k| sine_term(&rep, k)).sum::<CompensatedSum>().value();
        assert!((serial - log_sine_sum(&rep, n)).abs() < 1e-10);
    }

    proptest! {
        #[test]
        fn sine_product_identity(theta in 0.01f64..3.1, n in 1usize..=50) {
            let lhs = (2.0 * (n as f64 * theta).sin()).abs();
            prop_assume!(lhs > 1e-6);
            let rhs: f64 = (0..n).map(|k| (2.0 * (theta + k as f64 * PI / n as f64).sin()).abs()).product();
            prop_assert!((lhs - rhs).abs() <= 1e-9 * lhs.max(1.0));
        }

        #[test]
        fn convergence_bound(lambda in 1i64..=30, eta_seed in 0i64..60, n in 1u64..=3000) {
            let eta = 2 * (eta_seed % lambda) + 1;
            prop_assume!(gcd(eta, lambda) == 1);
            let rep = CircleRep::new(eta, lambda).unwrap();
            let err = (circle_log_torsion(&rep, n) / (2.0 * n as f64) - circle_limit(lambda as u64)).abs();
            prop_assert!(err <= convergence_constant(&rep) / n as f64 + 1e-12);
        }

        #[test]
        fn full_periods_hit_the_limit(lambda in 1i64..=40, eta_seed in 0i64..80, periods in 1u64..=20) {
            let eta = 2 * (eta_seed % lambda) + 1;
            prop_assume!(gcd(eta, lambda) == 1);
            let rep = CircleRep::new(eta, lambda).unwrap();
            let n = periods * lambda as u64;
            let avg = circle_log_torsion(&rep, n) / (2.0 * n as f64);
            prop_assert!((avg - circle_limit(lambda as u64)).abs() < 1e-10);
        }
    }
}
