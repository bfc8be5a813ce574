//! Gaussian counterparts on finite Hermite expansions: Ornstein–Uhlenbeck
//! semigroup, the Taylor representation of the variance with integral
//! remainder, inverse Poincaré and Talagrand-type bounds at every order.
//!
//! Gradients of order `k` are indexed by ordered tuples `(i_1, …, i_k)` and
//! `|·|` is the Euclidean norm over them. Tuples with the same counts `β`
//! give the same partial derivative, so sums run over count vectors weighted
//! by `k!/β!`.

mod expansion;
mod quadrature;

pub use expansion::{
    compositions, hermite_values, multi_factorial, total_degree, tuple_multiplicity,
    HermiteExpansion, MultiIndex, MAX_DEGREE, MAX_GAUSS_DIM,
};
pub use quadrature::{QuadratureRule, DEFAULT_ORDER, MAX_ORDER};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::inequality::{log_gain, InequalityReport, Term};
use crate::numeric::{self, binomial, factorial, CompensatedSum};

/// `|∫ ∇^k f dγ_n|²`, summed over ordered `k`-tuples.
pub fn grad_moment(f: &HermiteExpansion, k: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("gradient order must be >= 1".into()));
    }
    let mut acc = CompensatedSum::new();
    for beta in compositions(f.dim(), k) {
        let mean = f.partial_multi(&beta).mean();
        acc.add(tuple_multiplicity(&beta) * mean * mean);
    }
    Ok(acc.value())
}

/// `∫_0^∞ e^{-2t(1+d)} (1 - e^{-2t})^p dt`, by binomial expansion.
pub fn remainder_time_integral(p: u32, d: u32) -> f64 {
    numeric::sum((0..=p).map(|j| {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        sign * binomial(p, j) / (2.0 * f64::from(1 + d + j))
    }))
}

/// Both sides of the variance Taylor representation of order `p`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaylorReport {
    pub p: u32,
    pub variance: f64,
    /// `(1/k!) |∫ ∇^k f dγ|²` for `k = 1..=p`.
    pub moments: Vec<f64>,
    /// `(2/p!) ∫_0^∞ e^{-2t} (1 - e^{-2t})^p |P_t ∇^{p+1} f|² dt`.
    pub remainder: f64,
    pub rhs: f64,
    pub residual: f64,
    pub holds: bool,
}

/// Checks `Var(f) = Σ_{k≤p} (1/k!)|∫∇^k f|² + (2/p!) ∫ e^{-2t}(1-e^{-2t})^p |P_t ∇^{p+1} f|² dt`.
pub fn variance_taylor_check(f: &HermiteExpansion, p: u32) -> Result<TaylorReport> {
    if p == 0 || p > f.maxdeg() {
        return Err(Error::Parameter(format!(
            "order p must lie in 1..={}, got {p}",
            f.maxdeg()
        )));
    }
    let moments: Vec<f64> = (1..=p)
        .map(|k| grad_moment(f, k).map(|m| m / factorial(k)))
        .collect::<Result<_>>()?;
    let mut acc = CompensatedSum::new();
    for beta in compositions(f.dim(), p + 1) {
        let g = f.partial_multi(&beta);
        // |P_t g|² = Σ_γ g_γ² e^{-2t|γ|}
        let time_integral: f64 = g
            .iter()
            .map(|(gamma, c)| c * c * remainder_time_integral(p, total_degree(gamma)))
            .sum();
        acc.add(tuple_multiplicity(&beta) * time_integral);
    }
    let remainder = 2.0 / factorial(p) * acc.value();
    let rhs = numeric::sum(moments.iter().copied().chain([remainder]));
    let variance = f.variance();
    let residual = (variance - rhs).abs();
    Ok(TaylorReport {
        p,
        variance,
        moments,
        remainder,
        rhs,
        residual,
        holds: residual <= 1e-9,
    })
}

/// `a_k(t) = (2/k!) e^{-2t} (1 - e^{-2t})^k`.
pub fn a_k_closed_form(k: u32, t: f64) -> f64 {
    let e = (-2.0 * t).exp();
    2.0 / factorial(k) * e * (1.0 - e).powi(k as i32)
}

/// Agreement between the recursion `a_k(t) = a_0(t) ∫_0^t a_{k-1}`, its
/// closed form and the scalar coefficients `a_k = 1/k!`.
///
/// The scalar attached to order `k ≥ 1` is `∫_0^∞ a_{k-1}(t) dt` (so
/// `a_1 = ∫ a_0 = 1`); `a_0 = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientReport {
    pub kmax: u32,
    /// Max `|recursion - closed form|` over the grid and `k ≤ kmax`.
    pub recursion_residual: f64,
    /// Scalar coefficients `a_k` from the recursion, `k = 0..=kmax`.
    pub totals: Vec<f64>,
    /// Max `|total_k - 1/k!|`.
    pub total_residual: f64,
    pub holds: bool,
}

/// Runs the `a_k` recursion numerically from `a_0(t) = 2e^{-2t}` on a uniform
/// grid over `[0, 20]` with fourth-order cumulative integration.
pub fn a_k_coefficients_check(kmax: u32) -> Result<CoefficientReport> {
    if kmax > 10 {
        return Err(Error::Parameter(format!("kmax must be <= 10, got {kmax}")));
    }
    const HORIZON: f64 = 20.0;
    const STEPS: usize = 20_000;
    let h = HORIZON / STEPS as f64;
    let grid: Vec<f64> = (0..=STEPS).map(|j| j as f64 * h).collect();
    let a0: Vec<f64> = grid.iter().map(|&t| 2.0 * (-2.0 * t).exp()).collect();

    let mut current = a0.clone();
    let mut totals = vec![1.0];
    let mut recursion_residual: f64 = 0.0;
    for k in 0..kmax {
        if k > 0 {
            let cumulative = cumulative_integral(&current, h);
            current = a0.iter().zip(&cumulative).map(|(a, c)| a * c).collect();
        }
        for (t, v) in grid.iter().zip(&current) {
            recursion_residual = recursion_residual.max((v - a_k_closed_form(k, *t)).abs());
        }
        totals.push(*cumulative_integral(&current, h).last().unwrap());
    }
    if kmax == 0 {
        for (t, v) in grid.iter().zip(&a0) {
            recursion_residual = recursion_residual.max((v - a_k_closed_form(0, *t)).abs());
        }
    }
    let total_residual = totals
        .iter()
        .enumerate()
        .map(|(k, v)| (v - 1.0 / factorial(k as u32)).abs())
        .fold(0.0, f64::max);
    Ok(CoefficientReport {
        kmax,
        recursion_residual,
        totals,
        total_residual,
        holds: recursion_residual <= 1e-8 && total_residual <= 1e-8,
    })
}

/// `F_j = ∫_0^{t_j} f` on a uniform grid: cubic (4-point) rule per cell,
/// quadratic at the two boundary cells.
fn cumulative_integral(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let mut out = vec![0.0; n];
    let mut acc = CompensatedSum::new();
    for j in 0..n - 1 {
        let cell = if j == 0 {
            h * (5.0 * f[0] + 8.0 * f[1] - f[2]) / 12.0
        } else if j == n - 2 {
            h * (-f[j - 1] + 8.0 * f[j] + 5.0 * f[j + 1]) / 12.0
        } else {
            h * (-f[j - 1] + 13.0 * f[j] + 13.0 * f[j + 1] - f[j + 2]) / 24.0
        };
        acc.add(cell);
        out[j + 1] = acc.value();
    }
    out
}

/// `Var(f) ≥ |∫ ∇f dγ|²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InversePoincare {
    pub variance: f64,
    pub gradient_moment: f64,
    pub holds: bool,
    /// Equality case: `f` is affine.
    pub affine: bool,
}

pub fn inverse_poincare_check(f: &HermiteExpansion) -> Result<InversePoincare> {
    let variance = f.variance();
    let gradient_moment = grad_moment(f, 1)?;
    let affine = f.degree() <= 1;
    Ok(InversePoincare {
        variance,
        gradient_moment,
        holds: variance >= gradient_moment - 1e-12,
        affine,
    })
}

/// Talagrand-type bound of order `p`:
/// `Var(f) - Σ_{k≤p} (1/k!)|∫∇^k f|² ≤ C Σ_{(p+1)-tuples} ‖∂f‖₂² / [1 + log(‖∂f‖₂/‖∂f‖₁)]^{p+1}`.
///
/// `L²` norms come from coefficients, `L¹` norms from `rule`. Terms are
/// listed per count vector (index = sorted tuple), already multiplied by the
/// number of ordered tuples sharing it. `params.l1_quadrature_error`
/// estimates the largest `L¹` error: `|x|` has a kink, so the error decays
/// like `1/q` and is extrapolated from a second rule of order `q ± 8`.
pub fn gaussian_talagrand_report(
    f: &HermiteExpansion,
    p: u32,
    rule: &QuadratureRule,
) -> Result<InequalityReport> {
    if p == 0 {
        return Err(Error::Parameter("order p must be >= 1".into()));
    }
    if rule.exact_degree() < 2 * f.maxdeg() as usize {
        return Err(Error::Configuration(format!(
            "quadrature order {} integrates degree {} exactly, need {}",
            rule.order(),
            rule.exact_degree(),
            2 * f.maxdeg()
        )));
    }
    let q = rule.order();
    let q2 = if q + 8 <= MAX_ORDER { q + 8 } else { q - 8 };
    let check_rule = QuadratureRule::new(q2)?;
    let extrapolation = q2 as f64 / (q2 as f64 - q as f64).abs();
    let moments = numeric::sum(
        (1..=p)
            .map(|k| grad_moment(f, k).map(|m| m / factorial(k)))
            .collect::<Result<Vec<_>>>()?,
    );
    let lhs = f.variance() - moments;
    let mut terms = Vec::new();
    let mut quad_error: f64 = 0.0;
    for beta in compositions(f.dim(), p + 1) {
        let g = f.partial_multi(&beta);
        let l2 = g.energy().sqrt();
        let value = if l2 == 0.0 {
            0.0
        } else {
            let l1 = rule.lp_norm(&g, 1.0);
            let delta = (check_rule.lp_norm(&g, 1.0) - l1).abs();
            quad_error = quad_error.max(delta * extrapolation);
            tuple_multiplicity(&beta) * l2 * l2 / log_gain(l2, l1).powi(p as i32 + 1)
        };
        let index = beta
            .iter()
            .enumerate()
            .flat_map(|(axis, &b)| std::iter::repeat_n(axis + 1, b as usize))
            .collect();
        terms.push(Term { index, value });
    }
    let rhs = numeric::sum(terms.iter().map(|t| t.value));
    let mut report = InequalityReport::new("gaussian_talagrand", f.dim(), lhs, rhs, terms);
    report.params.insert("p".into(), f64::from(p));
    report
        .params
        .insert("quadrature_order".into(), rule.order() as f64);
    report.params.insert("l1_quadrature_error".into(), quad_error);
    Ok(report)
}

/// Max difference between the coefficient form of `P_t f` and the integral
/// form `∫ f(e^{-t} x + √(1 - e^{-2t}) y) dγ(y)` on a grid of points.
pub fn ou_integral_cross_check(f: &HermiteExpansion, t: f64, points: &[Vec<f64>]) -> Result<f64> {
    if f.dim() > 2 {
        return Err(Error::Capacity {
            what: "OU integral cross-check dimension",
            requested: f.dim(),
            limit: 2,
        });
    }
    let spectral = f.ou_semigroup(t)?;
    // Degree in y is at most maxdeg, so q = maxdeg + 1 nodes per axis are exact.
    let rule = QuadratureRule::new(f.maxdeg() as usize + 1)?;
    let (a, b) = ((-t).exp(), (1.0 - (-2.0 * t).exp()).sqrt());
    let mut worst: f64 = 0.0;
    for x in points {
        if x.len() != f.dim() {
            return Err(Error::DimensionMismatch {
                left: x.len(),
                right: f.dim(),
            });
        }
        let integral = rule.integrate(f.dim(), |y| {
            let z: Vec<f64> = x.iter().zip(y).map(|(xi, yi)| a * xi + b * yi).collect();
            f.evaluate(&z)
        });
        worst = worst.max((integral - spectral.evaluate(x)).abs());
    }
    Ok(worst)
}

/// `|∫ f (-L g) dγ - ∫ ∇f·∇g dγ|`, both computed from coefficients.
pub fn ou_integration_by_parts_residual(f: &HermiteExpansion, g: &HermiteExpansion) -> Result<f64> {
    let left = -f.inner(&g.generator())?;
    let mut right = CompensatedSum::new();
    for i in 1..=f.dim() {
        right.add(f.partial(i)?.inner(&g.partial(i)?)?);
    }
    Ok((left - right.value()).abs())
}

/// Nelson's hypercontractivity `‖P_t f‖_q ≤ ‖f‖_p`, `p = 1 + (q-1)e^{-2t}`,
/// on a one-dimensional expansion with norms by quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NelsonCheck {
    pub t: f64,
    pub q: f64,
    pub p: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// Change in `lhs` and `rhs` between quadrature orders 32 and 40.
    pub quadrature_error: f64,
    pub holds: bool,
}

pub fn nelson_check(f: &HermiteExpansion, t: f64, q: f64) -> Result<NelsonCheck> {
    if f.dim() != 1 {
        return Err(Error::Parameter("Nelson spot-check runs on n = 1".into()));
    }
    if !(q >= 1.0) {
        return Err(Error::Domain(format!("q must be >= 1, got {q}")));
    }
    let p = 1.0 + (q - 1.0) * (-2.0 * t).exp();
    let pt = f.ou_semigroup(t)?;
    let fine = QuadratureRule::new(MAX_ORDER)?;
    let coarse = QuadratureRule::new(32)?;
    let lhs = fine.lp_norm(&pt, q);
    let rhs = fine.lp_norm(f, p);
    let quadrature_error = (coarse.lp_norm(&pt, q) - lhs)
        .abs()
        .max((coarse.lp_norm(f, p) - rhs).abs());
    Ok(NelsonCheck {
        t,
        q,
        p,
        lhs,
        rhs,
        quadrature_error,
        holds: lhs <= rhs + quadrature_error + 1e-12,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expansion(n: usize, maxdeg: u32, terms: &[(&[u32], f64)]) -> HermiteExpansion {
        HermiteExpansion::from_coeffs(n, maxdeg, terms.iter().map(|(a, c)| (a.to_vec(), *c)))
            .unwrap()
    }

    fn x1() -> HermiteExpansion {
        expansion(2, 4, &[(&[1, 0], 1.0)])
    }

    fn x1x2() -> HermiteExpansion {
        expansion(2, 4, &[(&[1, 1], 1.0)])
    }

    /// x₁² = 1 + √2 h₂(x₁).
    fn x1_squared() -> HermiteExpansion {
        expansion(1, 4, &[(&[0], 1.0), (&[2], 2f64.sqrt())])
    }

    /// Sum over every ordered tuple, differentiating one coordinate at a time.
    fn grad_moment_by_tuples(f: &HermiteExpansion, k: u32) -> f64 {
        let n = f.dim();
        let mut total = 0.0;
        for code in 0..n.pow(k) {
            let mut g = f.clone();
            let mut c = code;
            for _ in 0..k {
                g = g.partial(c % n + 1).unwrap();
                c /= n;
            }
            total += g.mean() * g.mean();
        }
        total
    }

    #[test]
    fn grad_moment_examples() {
        assert_eq!(grad_moment(&x1(), 1).unwrap(), 1.0);
        assert_eq!(grad_moment(&x1x2(), 1).unwrap(), 0.0);
        assert!((grad_moment(&x1x2(), 2).unwrap() - 2.0).abs() < 1e-14);
        assert!((grad_moment(&x1_squared(), 2).unwrap() - 4.0).abs() < 1e-13);
        assert!(grad_moment(&x1(), 0).is_err());
    }

    #[test]
    fn grad_moment_matches_tuple_oracle_and_coefficient_identity() {
        for seed in 0..5 {
            let f = HermiteExpansion::random(3, 5, seed).unwrap();
            for k in 1..=4 {
                let got = grad_moment(&f, k).unwrap();
                let tuples = grad_moment_by_tuples(&f, k);
                assert!((got - tuples).abs() < 1e-10 * tuples.max(1.0));
                let identity = factorial(k) * f.degree_energy(k);
                assert!((got - identity).abs() < 1e-10 * identity.max(1.0));
            }
        }
    }

    #[test]
    fn remainder_integral_matches_beta_function() {
        // ∫ e^{-2t(1+d)} (1-e^{-2t})^p dt = ½ B(d+1, p+1) = ½ p! d! / (p+d+1)!
        for p in 0..=8 {
            for d in 0..=8 {
                let beta = 0.5 * factorial(p) * factorial(d) / factorial(p + d + 1);
                assert!((remainder_time_integral(p, d) - beta).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn taylor_worked_examples() {
        let r = variance_taylor_check(&x1(), 1).unwrap();
        assert_eq!((r.variance, r.moments[0], r.remainder), (1.0, 1.0, 0.0));

        let r = variance_taylor_check(&x1x2(), 1).unwrap();
        assert_eq!(r.moments, vec![0.0]);
        assert!((r.remainder - 1.0).abs() < 1e-14);
        assert!(r.holds);

        let r = variance_taylor_check(&x1_squared(), 2).unwrap();
        assert!((r.variance - 2.0).abs() < 1e-14);
        assert!(r.moments[0].abs() < 1e-14);
        assert!((r.moments[1] - 2.0).abs() < 1e-13);
        assert!(r.remainder.abs() < 1e-14);

        assert!(variance_taylor_check(&x1(), 0).is_err());
        assert!(variance_taylor_check(&x1(), 5).is_err());
    }

    #[test]
    fn taylor_random() {
        for seed in 0..10 {
            let f = HermiteExpansion::random(3, 5, seed).unwrap();
            for p in 1..=3 {
                let r = variance_taylor_check(&f, p).unwrap();
                assert!(r.residual <= 1e-9, "seed {seed} p {p}: {}", r.residual);
            }
        }
    }

    #[test]
    fn a_k_examples() {
        assert_eq!(a_k_closed_form(0, 0.3), 2.0 * (-0.6f64).exp());
        let r = a_k_coefficients_check(10).unwrap();
        assert!(r.holds, "{r:?}");
        assert!((r.totals[0] - 1.0).abs() < 1e-8);
        assert!((r.totals[1] - 1.0).abs() < 1e-8);
        assert!((r.totals[3] - 1.0 / 6.0).abs() < 1e-8);
        assert!(a_k_coefficients_check(11).is_err());
        // a_3(0.5) through one recursion step against the closed form a_2.
        let step = 2.0 * (-1.0f64).exp()
            * numeric::adaptive_simpson(|u| a_k_closed_form(2, u), 0.0, 0.5, 1e-14);
        assert!((step - a_k_closed_form(3, 0.5)).abs() < 1e-12);
    }

    #[test]
    fn inverse_poincare_examples() {
        let r = inverse_poincare_check(&x1()).unwrap();
        assert_eq!((r.variance, r.gradient_moment), (1.0, 1.0));
        assert!(r.holds && r.affine);
        let r = inverse_poincare_check(&x1x2()).unwrap();
        assert_eq!((r.variance, r.gradient_moment), (1.0, 0.0));
        assert!(r.holds && !r.affine);
        for seed in 0..20 {
            let f = HermiteExpansion::random(2, 4, seed).unwrap();
            assert!(inverse_poincare_check(&f).unwrap().holds);
        }
    }

    #[test]
    fn talagrand_examples() {
        let rule = QuadratureRule::new(DEFAULT_ORDER).unwrap();
        let r = gaussian_talagrand_report(&x1x2(), 1, &rule).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-14);
        assert!((r.rhs - 2.0).abs() < 1e-12);
        assert!((r.ratio.unwrap() - 0.5).abs() < 1e-12);

        let r = gaussian_talagrand_report(&x1(), 1, &rule).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.lhs, 0.0);

        // h₃(x₁): ∂³h₃ = √6.
        let h3 = expansion(1, 4, &[(&[3], 1.0)]);
        let r = gaussian_talagrand_report(&h3, 2, &rule).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-14);
        assert!((r.rhs - 6.0).abs() < 1e-10);

        let coarse = QuadratureRule::new(4).unwrap();
        assert!(matches!(
            gaussian_talagrand_report(&x1x2(), 1, &coarse),
            Err(Error::Configuration(_))
        ));
    }

    #[test]
    fn ou_integral_form_agrees() {
        let points: Vec<Vec<f64>> = [-1.5, 0.0, 0.4, 2.1]
            .iter()
            .flat_map(|&a| [-0.7, 0.9].iter().map(move |&b| vec![a, b]))
            .collect();
        for seed in 0..3 {
            let f = HermiteExpansion::random(2, 5, seed).unwrap();
            for t in [0.1, 0.5, 1.0, 2.0] {
                assert!(ou_integral_cross_check(&f, t, &points).unwrap() < 1e-10);
            }
        }
    }

    #[test]
    fn integration_by_parts() {
        let f = HermiteExpansion::random(3, 4, 1).unwrap();
        let g = HermiteExpansion::random(3, 4, 2).unwrap();
        assert!(ou_integration_by_parts_residual(&f, &g).unwrap() < 1e-12);
    }

    #[test]
    fn nelson_spot_check() {
        let f = expansion(1, 4, &[(&[0], 0.3), (&[1], 1.0), (&[2], -0.5), (&[3], 0.2)]);
        for t in [0.1, 0.5, 1.0] {
            for q in [2.0, 3.0, 4.0] {
                let r = nelson_check(&f, t, q).unwrap();
                assert!(r.holds, "{r:?}");
            }
        }
        assert!(nelson_check(&x1(), 0.5, 2.0).is_err());
    }

    #[test]
    fn semigroup_composition_and_decay() {
        let f = HermiteExpansion::random(3, 5, 4).unwrap();
        let a = f.ou_semigroup(0.3).unwrap().ou_semigroup(0.4).unwrap();
        let b = f.ou_semigroup(0.7).unwrap();
        assert!(a.max_coeff_diff(&b) < 1e-14);
        assert_eq!(b.mean(), f.mean());
        assert!(b.variance() <= (-1.4f64).exp() * f.variance() + 1e-15);
    }
}
