//! Left/right-hand sides of the cube inequalities, evaluated without their
//! universal constants.
//!
//! Every `log` is the natural logarithm. A term whose derivative vanishes
//! identically contributes 0. Constant inputs produce a report flagged
//! `degenerate` rather than an error.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cube::{self, BooleanFunction, RealCubeFunction};
use crate::error::{Error, Result};
use crate::numeric::{self, CompensatedSum};

/// Default `s0` for the order-2 inequality, strictly inside `(0, 1/128)`.
pub const DEFAULT_S0: f64 = 1.0 / 256.0;

/// Constant `C′` in the majorant of
/// `∫_1^2 (2-v)‖g‖_v² dv ≤ C′ ‖g‖₂² / [1 + log(‖g‖₂/‖g‖₁)]²`.
///
/// Calibrated on indicator-like `g` (|g| taking one or two nonzero levels):
/// the ratio increases towards 1 as the support shrinks and is 1/2 for
/// constant modulus.
pub const HYPERCONTRACTIVE_MAJORANT: f64 = 1.0;

/// One summand of a right-hand side. Coordinates are 1-based.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Term {
    pub index: Vec<usize>,
    pub value: f64,
}

/// Both sides of an inequality `lhs ≤ C · rhs` with the per-index breakdown
/// of `rhs`. `terms` is empty for single-quantity right-hand sides.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub name: String,
    pub n: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: Option<f64>,
    pub params: BTreeMap<String, f64>,
    pub terms: Vec<Term>,
    pub degenerate: bool,
}

impl InequalityReport {
    pub(crate) fn new(name: &str, n: usize, lhs: f64, rhs: f64, terms: Vec<Term>) -> Self {
        let degenerate = !(rhs > 0.0);
        let mut params = BTreeMap::new();
        params.insert("log_base".to_string(), std::f64::consts::E);
        Self {
            name: name.to_string(),
            n,
            lhs,
            rhs,
            ratio: (!degenerate).then(|| lhs / rhs),
            params,
            terms,
            degenerate,
        }
    }

    fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn param(&self, key: &str) -> Option<f64> {
        self.params.get(key).copied()
    }

    /// Ratio or 0 for degenerate reports.
    pub fn ratio_or_zero(&self) -> f64 {
        self.ratio.unwrap_or(0.0)
    }

    /// `|Σ terms - rhs|` (0 when there is no breakdown).
    pub fn terms_residual(&self) -> f64 {
        if self.terms.is_empty() {
            return 0.0;
        }
        (numeric::sum(self.terms.iter().map(|t| t.value)) - self.rhs).abs()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

/// `1 + log(‖g‖₂/‖g‖₁)`. Cauchy–Schwarz gives `‖g‖₁ ≤ ‖g‖₂`, so this is at
/// least 1; rounding below 1 is clamped.
pub fn log_gain(l2: f64, l1: f64) -> f64 {
    let d = 1.0 + (l2 / l1).ln();
    debug_assert!(d >= 1.0 - 1e-12, "log gain {d} below 1");
    d.max(1.0)
}

fn derivatives(f: &RealCubeFunction) -> Vec<RealCubeFunction> {
    (1..=f.dim())
        .map(|i| f.discrete_derivative(i).expect("coordinate in range"))
        .collect()
}

/// `Var(f) ≤ ¼ Σ_i ‖D_i f‖₂²`.
pub fn poincare_report(f: &RealCubeFunction) -> InequalityReport {
    let terms: Vec<Term> = derivatives(f)
        .iter()
        .enumerate()
        .map(|(b, d)| Term {
            index: vec![b + 1],
            value: 0.25 * d.lp_norm(2.0).unwrap().powi(2),
        })
        .collect();
    let rhs = numeric::sum(terms.iter().map(|t| t.value));
    InequalityReport::new("poincare", f.dim(), f.variance(), rhs, terms)
}

/// Talagrand's inequality at order 1:
/// `Var(f) ≤ C Σ_i ‖D_i f‖₂² / (1 + log(‖D_i f‖₂/‖D_i f‖₁))`.
pub fn talagrand1_report(f: &RealCubeFunction) -> InequalityReport {
    let terms: Vec<Term> = derivatives(f)
        .iter()
        .enumerate()
        .map(|(b, d)| {
            let l2 = d.lp_norm(2.0).unwrap();
            let value = if l2 == 0.0 {
                0.0
            } else {
                l2 * l2 / log_gain(l2, d.lp_norm(1.0).unwrap())
            };
            Term {
                index: vec![b + 1],
                value,
            }
        })
        .collect();
    let rhs = numeric::sum(terms.iter().map(|t| t.value));
    InequalityReport::new("talagrand1", f.dim(), f.variance(), rhs, terms)
}

fn check_s0(s0: f64) -> Result<()> {
    if s0 > 0.0 && s0 < 1.0 / 128.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "s0 must lie in the open interval (0, 1/128), got {s0}"
        )))
    }
}

/// `η(s0) = 2/(1 + e^{-2 s0}) - 1`, the exponent gain in `I_i^{1+η}`.
pub fn eta_from_s0(s0: f64) -> f64 {
    2.0 / (1.0 + (-2.0 * s0).exp()) - 1.0
}

/// The order-2 inequality:
/// `Var(f) ≤ C Σ_i ‖D_i f‖²_{1+e^{-2s0}} + C Σ_{i≠j} ‖D_ij f‖₂² / [1 + log(‖D_ij f‖₂/‖D_ij f‖₁)]²`.
pub fn talagrand2_report(f: &RealCubeFunction, s0: f64) -> Result<InequalityReport> {
    check_s0(s0)?;
    let n = f.dim();
    let p = 1.0 + (-2.0 * s0).exp();
    let mut terms = Vec::with_capacity(n * n);
    let mut first = CompensatedSum::new();
    for (b, d) in derivatives(f).iter().enumerate() {
        let value = d.lp_norm(p)?.powi(2);
        first.add(value);
        terms.push(Term {
            index: vec![b + 1],
            value,
        });
    }
    let mut second = CompensatedSum::new();
    for i in 1..=n {
        for j in (1..=n).filter(|&j| j != i) {
            let d = f.second_derivative(i, j)?;
            let l2 = d.lp_norm(2.0)?;
            let value = if l2 == 0.0 {
                0.0
            } else {
                l2 * l2 / log_gain(l2, d.lp_norm(1.0)?).powi(2)
            };
            second.add(value);
            terms.push(Term {
                index: vec![i, j],
                value,
            });
        }
    }
    let (first, second) = (first.value(), second.value());
    Ok(
        InequalityReport::new("talagrand2", n, f.variance(), first + second, terms)
            .with_param("s0", s0)
            .with_param("eta", eta_from_s0(s0))
            .with_param("first_sum", first)
            .with_param("second_sum", second),
    )
}

/// KKL: `max_i I_i(f) ≥ C Var(f) log(n)/n`; `ratio` is the constant attained.
pub fn kkl_report(f: &BooleanFunction) -> Result<InequalityReport> {
    let n = f.dim();
    if n < 2 {
        return Err(Error::Domain("KKL needs n >= 2".into()));
    }
    let lhs = (1..=n)
        .map(|i| f.influence(i))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let rhs = f.variance() * (n as f64).ln() / n as f64;
    Ok(InequalityReport::new("kkl", n, lhs, rhs, Vec::new()))
}

/// Which side of the influence alternative is larger.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// Some coordinate has `I_i ≳ (Var/n)^{1/(1+η)}`.
    Influence,
    /// Some pair `i ≠ j` has `I_(i,j) ≳ Var (log n / n)²`.
    Pair,
}

/// Constants attained by `f` in the two branches of the influence alternative.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlternativeReport {
    pub n: usize,
    pub s0: f64,
    pub eta: f64,
    pub variance: f64,
    pub max_influence: f64,
    /// 1-based coordinate attaining `max_influence`.
    pub argmax_influence: usize,
    pub max_pair_influence: f64,
    /// 1-based pair attaining `max_pair_influence`.
    pub argmax_pair: (usize, usize),
    /// `max_i I_i / (Var/n)^{1/(1+η)}`.
    pub c1: f64,
    /// `max_{i≠j} I_(i,j) / (Var (log n/n)²)`.
    pub c2: f64,
    pub branch: Option<Branch>,
    pub degenerate: bool,
}

pub fn corollary_alternative_report(f: &BooleanFunction, s0: f64) -> Result<AlternativeReport> {
    check_s0(s0)?;
    let n = f.dim();
    if n < 2 {
        return Err(Error::Domain("the alternative needs n >= 2".into()));
    }
    let eta = eta_from_s0(s0);
    let profile = f.influence_profile();
    let (argmax_influence, max_influence) = profile
        .first()
        .iter()
        .enumerate()
        .fold((1, f64::NEG_INFINITY), |best, (b, &v)| {
            if v > best.1 {
                (b + 1, v)
            } else {
                best
            }
        });
    let mut argmax_pair = (1, 2);
    let mut max_pair_influence = f64::NEG_INFINITY;
    for i in 1..=n {
        for j in (i + 1)..=n {
            let v = profile.pair(i, j)?;
            if v > max_pair_influence {
                max_pair_influence = v;
                argmax_pair = (i, j);
            }
        }
    }
    let variance = f.variance();
    let nf = n as f64;
    let degenerate = variance == 0.0;
    let (c1, c2) = if degenerate {
        (0.0, 0.0)
    } else {
        (
            max_influence / (variance / nf).powf(1.0 / (1.0 + eta)),
            max_pair_influence / (variance * (nf.ln() / nf).powi(2)),
        )
    };
    let branch = (!degenerate).then_some(if c2 > c1 { Branch::Pair } else { Branch::Influence });
    Ok(AlternativeReport {
        n,
        s0,
        eta,
        variance,
        max_influence,
        argmax_influence,
        max_pair_influence,
        argmax_pair,
        c1,
        c2,
        branch,
        degenerate,
    })
}

/// `‖D_ij f‖₁ ≤ ‖D_ij f‖₂² ≤ 2‖D_ij f‖₁` for Boolean `f` and `i ≠ j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormEquivalence {
    pub l1: f64,
    pub l2_squared: f64,
    pub twice_l1: f64,
    pub holds: bool,
}

pub fn norm_equivalence_check(f: &BooleanFunction, i: usize, j: usize) -> Result<NormEquivalence> {
    cube::coord_bit(f.dim(), i)?;
    cube::coord_bit(f.dim(), j)?;
    if i == j {
        return Err(Error::Precondition(
            "norm equivalence is stated for i != j".into(),
        ));
    }
    let d = f.to_real().second_derivative(i, j)?;
    let l1 = d.lp_norm(1.0)?;
    let l2_squared = d.lp_norm(2.0)?.powi(2);
    Ok(NormEquivalence {
        l1,
        l2_squared,
        twice_l1: 2.0 * l1,
        holds: l1 <= l2_squared + 1e-12 && l2_squared <= 2.0 * l1 + 1e-12,
    })
}

/// `∫_1^2 (2-v) ‖D_ij f‖_v² dv` against its closed-form majorant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HypercontractiveBound {
    pub integral: f64,
    pub majorant: f64,
    pub constant: f64,
    pub holds: bool,
    pub degenerate: bool,
}

pub fn hypercontractive_bound_check(
    f: &RealCubeFunction,
    i: usize,
    j: usize,
) -> Result<HypercontractiveBound> {
    cube::coord_bit(f.dim(), i)?;
    cube::coord_bit(f.dim(), j)?;
    if i == j {
        return Err(Error::Precondition(
            "the interpolation bound is stated for i != j".into(),
        ));
    }
    let d = f.second_derivative(i, j)?;
    let l2 = d.lp_norm(2.0)?;
    if l2 == 0.0 {
        return Ok(HypercontractiveBound {
            integral: 0.0,
            majorant: 0.0,
            constant: HYPERCONTRACTIVE_MAJORANT,
            holds: true,
            degenerate: true,
        });
    }
    let integral = norm_interpolation_integral(d.values());
    let majorant = HYPERCONTRACTIVE_MAJORANT * l2 * l2 / log_gain(l2, d.lp_norm(1.0)?).powi(2);
    Ok(HypercontractiveBound {
        integral,
        majorant,
        constant: HYPERCONTRACTIVE_MAJORANT,
        holds: integral <= majorant * (1.0 + 1e-9),
        degenerate: false,
    })
}

pub(crate) fn norm_interpolation_integral(values: &[f64]) -> f64 {
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    numeric::adaptive_simpson(
        |v| (2.0 - v) * cube::lp_norm_of(values, v).powi(2),
        1.0,
        2.0,
        1e-13 * scale * scale,
    )
}

/// Inequalities targeted by [`constant_search`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InequalityId {
    Poincare,
    Talagrand1,
    Talagrand2 { s0: f64 },
    Kkl,
}

impl InequalityId {
    pub fn name(&self) -> &'static str {
        match self {
            InequalityId::Poincare => "poincare",
            InequalityId::Talagrand1 => "talagrand1",
            InequalityId::Talagrand2 { .. } => "talagrand2",
            InequalityId::Kkl => "kkl",
        }
    }

    pub fn parse(name: &str, s0: f64) -> Result<Self> {
        match name {
            "poincare" => Ok(InequalityId::Poincare),
            "talagrand1" => Ok(InequalityId::Talagrand1),
            "talagrand2" => {
                check_s0(s0)?;
                Ok(InequalityId::Talagrand2 { s0 })
            }
            "kkl" => Ok(InequalityId::Kkl),
            other => Err(Error::Parameter(format!("unknown inequality {other:?}"))),
        }
    }

    /// Evaluates the report for a Boolean function.
    pub fn report(&self, f: &BooleanFunction) -> Result<InequalityReport> {
        match *self {
            InequalityId::Poincare => Ok(poincare_report(&f.to_real())),
            InequalityId::Talagrand1 => Ok(talagrand1_report(&f.to_real())),
            InequalityId::Talagrand2 { s0 } => talagrand2_report(&f.to_real(), s0),
            InequalityId::Kkl => kkl_report(f),
        }
    }
}

/// Result of an empirical search for the worst-case constant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchReport {
    pub inequality: String,
    pub n: usize,
    pub seed: u64,
    pub budget: u64,
    pub evaluations: u64,
    pub best_ratio: f64,
    /// Where the best function came from (a zoo label or `random`).
    pub best_origin: String,
    pub best_table: String,
    pub restarts: u64,
    pub improvements: u64,
    #[serde(skip)]
    pub best: BooleanFunction,
}

/// Maximizes `lhs/rhs` over Boolean functions on `n` coordinates.
///
/// Candidates are the standard families on `n` coordinates followed by random
/// tables (density uniform in `(0, 1)`), each refined by greedy single-bit
/// flips until a full pass brings no improvement. Every report evaluation
/// counts against `budget`. Deterministic given `seed`.
pub fn constant_search(
    inequality: InequalityId,
    n: usize,
    budget: u64,
    seed: u64,
) -> Result<SearchReport> {
    if budget == 0 {
        return Err(Error::Parameter("search budget must be at least 1".into()));
    }
    cube::check_dim(n)?;
    if matches!(inequality, InequalityId::Kkl) && n < 2 {
        return Err(Error::Domain("KKL search needs n >= 2".into()));
    }
    let mut rng = crate::zoo::rng(seed);
    let mut state = SearchState {
        inequality,
        budget,
        evaluations: 0,
        best_ratio: f64::NEG_INFINITY,
        best: BooleanFunction::zeros(n)?,
        best_origin: String::new(),
        improvements: 0,
    };

    let seeds: Vec<(String, BooleanFunction)> = crate::zoo::standard_zoo(n)?
        .into_iter()
        .filter(|e| e.function.dim() == n)
        .map(|e| (e.label, e.function))
        .collect();
    let mut restarts = 0u64;
    let mut seed_iter = seeds.into_iter();
    while state.evaluations < budget {
        let (origin, start) = match seed_iter.next() {
            Some(s) => s,
            None => {
                let p = 0.02 + 0.96 * crate::zoo::unit_f64(&mut rng);
                let s = rng_seed(&mut rng);
                ("random".to_string(), crate::zoo::random_boolean(n, p, s)?)
            }
        };
        restarts += 1;
        state.local_search(start, &origin, &mut rng)?;
    }
    Ok(SearchReport {
        inequality: inequality.name().to_string(),
        n,
        seed,
        budget,
        evaluations: state.evaluations,
        best_ratio: state.best_ratio.max(0.0),
        best_origin: state.best_origin,
        best_table: state.best.table_string(),
        restarts,
        improvements: state.improvements,
        best: state.best,
    })
}

fn rng_seed(rng: &mut impl rand_core::RngCore) -> u64 {
    rng.next_u64()
}

struct SearchState {
    inequality: InequalityId,
    budget: u64,
    evaluations: u64,
    best_ratio: f64,
    best: BooleanFunction,
    best_origin: String,
    improvements: u64,
}

impl SearchState {
    fn evaluate(&mut self, f: &BooleanFunction) -> Result<Option<f64>> {
        if self.evaluations >= self.budget {
            return Ok(None);
        }
        self.evaluations += 1;
        Ok(Some(self.inequality.report(f)?.ratio_or_zero()))
    }

    fn record(&mut self, f: &BooleanFunction, ratio: f64, origin: &str) {
        if ratio > self.best_ratio {
            self.best_ratio = ratio;
            self.best = f.clone();
            self.best_origin = origin.to_string();
            self.improvements += 1;
        }
    }

    fn local_search(
        &mut self,
        mut current: BooleanFunction,
        origin: &str,
        rng: &mut impl rand_core::RngCore,
    ) -> Result<()> {
        let Some(mut current_ratio) = self.evaluate(&current)? else {
            return Ok(());
        };
        self.record(&current, current_ratio, origin);
        let len = current.len();
        let mut order: Vec<usize> = (0..len).collect();
        loop {
            // Fisher–Yates with the search generator.
            for k in (1..len).rev() {
                let r = (rng.next_u64() % (k as u64 + 1)) as usize;
                order.swap(k, r);
            }
            let mut improved = false;
            for &x in &order {
                current.toggle(x);
                let Some(ratio) = self.evaluate(&current)? else {
                    return Ok(());
                };
                if ratio > current_ratio {
                    current_ratio = ratio;
                    improved = true;
                    self.record(&current, ratio, origin);
                } else {
                    current.toggle(x);
                }
            }
            if !improved {
                return Ok(());
            }
        }
    }
}
