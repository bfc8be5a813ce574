//! Verification batteries: exact identities on the cube, the inequality
//! suite over a function corpus, and the Gaussian checks. Each battery
//! reports case counts, the worst residual against its tolerance and a
//! reproduction hint for the first failing case.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand_core::RngCore;
use serde::Serialize;

use crate::cube::{BooleanFunction, RealCubeFunction};
use crate::error::{Error, Result};
use crate::gaussian::{self, HermiteExpansion, QuadratureRule};
use crate::inequality::{self, Branch, DEFAULT_S0};
use crate::spectral::{self, SemigroupMethod, INTEGRAL_MAX_DIM};
use crate::zoo::{self, ZooEntry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identities,
    Inequalities,
    Gaussian,
    All,
}

impl Suite {
    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Identities => "identities",
            Suite::Inequalities => "inequalities",
            Suite::Gaussian => "gaussian",
            Suite::All => "all",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identities" => Ok(Suite::Identities),
            "inequalities" => Ok(Suite::Inequalities),
            "gaussian" => Ok(Suite::Gaussian),
            "all" => Ok(Suite::All),
            other => Err(Error::Parameter(format!(
                "unknown suite {other:?} (expected identities, inequalities, gaussian or all)"
            ))),
        }
    }
}

/// Deliberate defects used to confirm that the batteries can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Flips one bit of the table handed to the enumeration oracle.
    CorruptTable,
}

impl fmt::Display for Fault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fault::CorruptTable => f.write_str("corrupt-table"),
        }
    }
}

impl FromStr for Fault {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "corrupt-table" => Ok(Fault::CorruptTable),
            other => Err(Error::Parameter(format!("unknown fault {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub suite: Suite,
    pub n_max: usize,
    pub seed: u64,
    pub fault: Option<Fault>,
}

impl VerifyConfig {
    pub fn new(suite: Suite, n_max: usize, seed: u64) -> Self {
        Self {
            suite,
            n_max,
            seed,
            fault: None,
        }
    }

    /// Command line reproducing this run.
    pub fn command(&self) -> String {
        let mut cmd = format!(
            "cube verify --suite {} --n-max {} --seed {}",
            self.suite, self.n_max, self.seed
        );
        if let Some(fault) = self.fault {
            cmd.push_str(&format!(" --inject-fault {fault}"));
        }
        cmd
    }
}

/// Result of one battery.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub suite: Suite,
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub worst_residual: f64,
    pub tolerance: f64,
    /// Measured quantities worth printing (constants, maxima).
    pub measured: BTreeMap<String, f64>,
    /// First failing case and how to reproduce it.
    pub failure: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifySummary {
    pub config: VerifyConfig,
    pub checks: Vec<CheckOutcome>,
    pub cases: usize,
    pub failures: usize,
    pub passed: bool,
}

impl VerifySummary {
    /// Human-readable summary, one line per battery.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{} {}/{}: {} cases, {} failures, worst residual {:.3e} (tol {:.1e})",
                if c.passed() { "PASS" } else { "FAIL" },
                c.suite,
                c.name,
                c.cases,
                c.failures,
                c.worst_residual,
                c.tolerance
            ));
            for (k, v) in &c.measured {
                out.push_str(&format!(", {k} = {v}"));
            }
            out.push('\n');
            if let Some(f) = &c.failure {
                out.push_str(&format!("  first failure: {f}\n"));
            }
        }
        out.push_str(&format!(
            "{}: {} checks, {} cases, {} failures\n",
            if self.passed { "ok" } else { "FAILED" },
            self.checks.len(),
            self.cases,
            self.failures
        ));
        if !self.passed {
            out.push_str(&format!("reproduce: {}\n", self.config.command()));
        }
        out
    }
}

struct Check {
    outcome: CheckOutcome,
    command: String,
}

impl Check {
    fn new(config: &VerifyConfig, suite: Suite, name: &str, tolerance: f64) -> Self {
        Self {
            outcome: CheckOutcome {
                suite,
                name: name.to_string(),
                cases: 0,
                failures: 0,
                worst_residual: 0.0,
                tolerance,
                measured: BTreeMap::new(),
                failure: None,
            },
            command: config.command(),
        }
    }

    /// Records a residual; NaN counts as a failure.
    fn residual(&mut self, case: impl FnOnce() -> String, r: f64) {
        self.outcome.cases += 1;
        if r.is_nan() || r > self.outcome.worst_residual {
            self.outcome.worst_residual = if r.is_nan() { f64::INFINITY } else { r };
        }
        if !(r <= self.outcome.tolerance) {
            self.fail(case);
        }
    }

    fn flag(&mut self, case: impl FnOnce() -> String, ok: bool) {
        self.outcome.cases += 1;
        if !ok {
            self.fail(case);
        }
    }

    fn fail(&mut self, case: impl FnOnce() -> String) {
        self.outcome.failures += 1;
        if self.outcome.failure.is_none() {
            self.outcome.failure = Some(format!("{} ({})", case(), self.command));
        }
    }

    fn max_measure(&mut self, key: &str, value: f64) {
        let slot = self
            .outcome
            .measured
            .entry(key.to_string())
            .or_insert(f64::NEG_INFINITY);
        *slot = slot.max(value);
    }

    fn min_measure(&mut self, key: &str, value: f64) {
        let slot = self
            .outcome
            .measured
            .entry(key.to_string())
            .or_insert(f64::INFINITY);
        *slot = slot.min(value);
    }

    fn error(&mut self, case: &str, e: Error) {
        self.outcome.cases += 1;
        self.fail(|| format!("{case}: {e}"));
    }

    fn finish(self) -> CheckOutcome {
        self.outcome
    }
}

/// Corpus for the inequality battery: the standard zoo up to `n_max` plus
/// ten random tables per dimension `2..=n_max` with random densities.
pub fn corpus(n_max: usize, seed: u64) -> Result<Vec<ZooEntry>> {
    let mut out = zoo::standard_zoo(n_max)?;
    let mut r = zoo::rng(seed);
    for n in 2..=n_max.min(crate::cube::MAX_DIM) {
        for j in 0..10 {
            let p = if j == 0 { 0.5 } else { 0.05 + 0.9 * zoo::unit_f64(&mut r) };
            let s = r.next_u64();
            out.push(ZooEntry {
                label: format!("random:p={p},seed={s} n={n}"),
                function: zoo::random_boolean(n, p, s)?,
            });
        }
    }
    Ok(out)
}

/// Runs the selected batteries.
pub fn run(config: &VerifyConfig) -> Result<VerifySummary> {
    if config.n_max < 2 {
        return Err(Error::Parameter(format!(
            "n-max must be >= 2, got {}",
            config.n_max
        )));
    }
    if config.n_max > crate::cube::MAX_DIM {
        return Err(Error::Capacity {
            what: "verification dimension",
            requested: config.n_max,
            limit: crate::cube::MAX_DIM,
        });
    }
    let mut checks = Vec::new();
    if config.suite.includes(Suite::Identities) {
        checks.extend(identities(config)?);
    }
    if config.suite.includes(Suite::Inequalities) {
        checks.extend(inequalities(config)?);
    }
    if config.suite.includes(Suite::Gaussian) {
        checks.extend(gaussian_suite(config)?);
    }
    let cases = checks.iter().map(|c| c.cases).sum();
    let failures = checks.iter().map(|c| c.failures).sum();
    Ok(VerifySummary {
        config: *config,
        checks,
        cases,
        failures,
        passed: failures == 0,
    })
}

fn random_reals(n_max: usize, per_dim: usize, seed: u64) -> Result<Vec<(String, RealCubeFunction)>> {
    let mut r = zoo::rng(seed);
    let mut out = Vec::new();
    for n in 1..=n_max {
        for _ in 0..per_dim {
            let s = r.next_u64();
            out.push((format!("random-real:n={n},seed={s}"), zoo::random_real(n, s)?));
        }
    }
    Ok(out)
}

fn identities(config: &VerifyConfig) -> Result<Vec<CheckOutcome>> {
    let suite = Suite::Identities;
    let n_id = config.n_max.min(INTEGRAL_MAX_DIM);
    let reals = random_reals(n_id, 4, config.seed)?;
    let mut out = Vec::new();

    let mut c = Check::new(config, suite, "transform-roundtrip-parseval", 1e-10);
    for (label, f) in &reals {
        let sp = spectral::fwht(f);
        match spectral::inverse_fwht(&sp).max_abs_diff(f) {
            Ok(r) => c.residual(|| label.clone(), r),
            Err(e) => c.error(label, e),
        }
        let energy: f64 = f.values().iter().map(|v| v * v).sum::<f64>() / f.len() as f64;
        c.residual(|| format!("{label} parseval"), (sp.energy() - energy).abs());
    }
    out.push(c.finish());

    let mut c = Check::new(config, suite, "semigroup-spectral-vs-integral", 1e-10);
    for (label, f) in reals.iter().filter(|(_, f)| f.dim() <= 8) {
        for t in [0.1, 0.5, 1.0, 2.0] {
            let diff = spectral::bonami_beckner(f, t, SemigroupMethod::Spectral).and_then(|a| {
                a.max_abs_diff(&spectral::bonami_beckner(f, t, SemigroupMethod::Integral)?)
            });
            match diff {
                Ok(r) => c.residual(|| format!("{label} t={t}"), r),
                Err(e) => c.error(label, e),
            }
        }
    }
    out.push(c.finish());

    let mut c = Check::new(config, suite, "semigroup-laws-and-commutation", 1e-10);
    for pair in reals.chunks(2).filter(|p| p.len() == 2 && p[0].1.dim() == p[1].1.dim()) {
        let (label, f) = &pair[0];
        let g = &pair[1].1;
        match spectral::check_semigroup_laws(f, g, 0.3, 0.7) {
            Ok(r) => c.residual(|| format!("{label} laws"), r.max()),
            Err(e) => c.error(label, e),
        }
        for i in 1..=f.dim() {
            match spectral::check_commutation(f, i, 0.4) {
                Ok(r) => c.residual(|| format!("{label} commutation i={i}"), r),
                Err(e) => c.error(label, e),
            }
        }
        let dir = spectral::dirichlet_form(f, g).and_then(|a| {
            Ok((a - spectral::dirichlet_form_from_derivatives(f, g)?).abs())
        });
        match dir {
            Ok(r) => c.residual(|| format!("{label} dirichlet form"), r),
            Err(e) => c.error(label, e),
        }
    }
    out.push(c.finish());

    // Zoo members share the table with the random reals for the constants.
    let mut members: Vec<(String, RealCubeFunction)> = zoo::standard_zoo(n_id)?
        .into_iter()
        .filter(|e| !e.function.is_constant())
        .map(|e| (e.label, e.function.to_real()))
        .collect();
    members.extend(reals.iter().cloned());

    let mut kappa = Check::new(config, suite, "variance-representation", 1e-8);
    let mut quad = Check::new(config, suite, "variance-representation-quadrature", 1e-6);
    let mut kappa2 = Check::new(config, suite, "tail-identity", 1e-8);
    for (label, f) in &members {
        match spectral::variance_representation_check(f) {
            Ok(r) => {
                if let Some(k) = r.kappa {
                    kappa.residual(|| label.clone(), (k - 0.5).abs());
                    kappa.max_measure("kappa_max", k);
                    kappa.min_measure("kappa_min", k);
                }
                if let Some(q) = r.quadrature {
                    quad.residual(|| label.clone(), (q - r.integral).abs());
                }
            }
            Err(e) => kappa.error(label, e),
        }
        for s in [0.0, 0.25, 1.0] {
            match spectral::tail_identity_check(f, s) {
                Ok(r) => {
                    if let Some(k) = r.kappa {
                        kappa2.residual(|| format!("{label} s={s}"), (k - 0.5).abs());
                        kappa2.max_measure("kappa2_max", k);
                        kappa2.min_measure("kappa2_min", k);
                    }
                }
                Err(e) => kappa2.error(label, e),
            }
        }
    }
    out.extend([kappa.finish(), quad.finish(), kappa2.finish()]);

    let mut c = Check::new(config, suite, "hypercontractivity", 1e-12);
    let n_hc = config.n_max.min(8);
    let mut r = zoo::rng(config.seed ^ 0x4859_5045);
    for _ in 0..100 {
        let s = r.next_u64();
        let f = zoo::random_real(n_hc, s)?;
        for t in [0.1, 0.5, 1.0] {
            for q in [2.0, 3.0, 4.0] {
                match spectral::hypercontractivity_check(&f, t, q) {
                    Ok(h) => c.residual(
                        || format!("random-real:n={n_hc},seed={s} t={t} q={q}"),
                        (h.lhs - h.rhs).max(0.0),
                    ),
                    Err(e) => c.error("hypercontractivity", e),
                }
            }
        }
        let centered = f.sub(&RealCubeFunction::constant(n_hc, f.mean())?)?;
        // Centering leaves a rounding-level mean; the decay check wants it exact.
        let centered = RealCubeFunction::new(
            n_hc,
            spectral::inverse_fwht(&{
                let mut sp = spectral::fwht(&centered).coefficients().to_vec();
                sp[0] = 0.0;
                spectral::FourierSpectrum::new(n_hc, sp)?
            })
            .into_values(),
        )?;
        match spectral::exponential_decay_check(&centered, 0.5) {
            Ok(b) => c.residual(|| format!("decay seed={s}"), (b.lhs - b.rhs).max(0.0)),
            Err(e) => c.error("exponential decay", e),
        }
    }
    out.push(c.finish());
    Ok(out)
}

/// Influence by direct enumeration over the table.
fn enumerated_influence(f: &BooleanFunction, i: usize) -> f64 {
    let bit = 1usize << (i - 1);
    let changed = (0..f.len()).filter(|&x| f.get(x) != f.get(x ^ bit)).count();
    changed as f64 / f.len() as f64
}

/// `½ E|D_ij f|` by direct enumeration.
fn enumerated_pair_influence(f: &BooleanFunction, i: usize, j: usize) -> f64 {
    let (bi, bj) = (1usize << (i - 1), 1usize << (j - 1));
    let v = |x: usize| f64::from(u8::from(f.get(x)));
    let total: f64 = (0..f.len())
        .map(|x| (v(x) - v(x ^ bi) - v(x ^ bj) + v(x ^ bi ^ bj)).abs())
        .sum();
    0.5 * total / f.len() as f64
}

fn inequalities(config: &VerifyConfig) -> Result<Vec<CheckOutcome>> {
    let suite = Suite::Inequalities;
    let n_enum = config.n_max.min(12);
    let items = corpus(n_enum, config.seed)?;
    let mut out = Vec::new();

    let mut c = Check::new(config, suite, "influence-vs-enumeration", 0.0);
    for (idx, e) in items.iter().enumerate() {
        let f = &e.function;
        let mut oracle = f.clone();
        if idx == 0 && config.fault == Some(Fault::CorruptTable) {
            oracle.toggle(0);
        }
        let profile = f.influence_profile();
        for i in 1..=f.dim() {
            let r = (profile.first()[i - 1] - enumerated_influence(&oracle, i)).abs();
            c.residual(|| format!("{} i={i}", e.label), r);
            for j in i + 1..=f.dim().min(8) {
                let r = (profile.pair(i, j)? - enumerated_pair_influence(&oracle, i, j)).abs();
                c.residual(|| format!("{} pair ({i},{j})", e.label), r);
            }
        }
    }
    out.push(c.finish());

    let mut poincare = Check::new(config, suite, "poincare", 1e-12);
    let mut tal = Check::new(config, suite, "talagrand-reports", 1e-12);
    let mut kkl = Check::new(config, suite, "kkl", 0.0);
    for e in &items {
        let f = e.function.to_real();
        let p = inequality::poincare_report(&f);
        poincare.residual(|| e.label.clone(), (p.ratio_or_zero() - 1.0).max(0.0));
        poincare.max_measure("max_ratio", p.ratio_or_zero());
        let t1 = inequality::talagrand1_report(&f);
        let t2 = inequality::talagrand2_report(&f, DEFAULT_S0)?;
        for (key, r) in [("talagrand1_max_ratio", &t1), ("talagrand2_max_ratio", &t2)] {
            let finite = r.degenerate || r.ratio.is_some_and(f64::is_finite);
            tal.flag(|| format!("{} {} ratio not finite", e.label, r.name), finite);
            tal.residual(|| format!("{} {} terms", e.label, r.name), r.terms_residual());
            tal.max_measure(key, r.ratio_or_zero());
        }
        if e.function.dim() >= 2 {
            let k = inequality::kkl_report(&e.function)?;
            let ok = e.function.is_constant() == k.degenerate
                && k.ratio.is_none_or(f64::is_finite);
            kkl.flag(|| format!("{} kkl", e.label), ok);
            kkl.max_measure("max_ratio", k.ratio_or_zero());
        }
    }
    out.extend([poincare.finish(), tal.finish(), kkl.finish()]);

    let mut c = Check::new(config, suite, "norm-comparison", 1e-12);
    if config.n_max >= 4 {
        for table in 0u64..1 << 16 {
            let f = BooleanFunction::from_words(4, vec![table])?;
            for i in 1..=4 {
                for j in i + 1..=4 {
                    let r = inequality::norm_equivalence_check(&f, i, j)?;
                    let excess = (r.l1 - r.l2_squared).max(r.l2_squared - r.twice_l1).max(0.0);
                    c.residual(|| format!("n=4 table={table:#06x} ({i},{j})"), excess);
                }
            }
        }
    }
    let mut r = zoo::rng(config.seed ^ 0x4e4f_524d);
    let n_rand = config.n_max.min(10);
    for _ in 0..200 {
        let s = r.next_u64();
        let f = zoo::random_boolean(n_rand, 0.5, s)?;
        for i in 1..=n_rand {
            for j in i + 1..=n_rand {
                let q = inequality::norm_equivalence_check(&f, i, j)?;
                let excess = (q.l1 - q.l2_squared).max(q.l2_squared - q.twice_l1).max(0.0);
                c.residual(|| format!("random:n={n_rand},seed={s} ({i},{j})"), excess);
            }
        }
    }
    out.push(c.finish());

    let mut c = Check::new(config, suite, "hypercontractive-majorant", 0.0);
    for e in items.iter().filter(|e| e.function.dim() >= 2).take(200) {
        let f = e.function.to_real();
        let n = f.dim();
        for (i, j) in [(1, 2), (1, n), (n - 1, n)] {
            if i == j {
                continue;
            }
            let b = inequality::hypercontractive_bound_check(&f, i, j)?;
            c.flag(|| format!("{} ({i},{j})", e.label), b.holds);
        }
    }
    out.push(c.finish());

    let mut c = Check::new(config, suite, "tribes-closed-form", 0.0);
    let km_max = config.n_max.min(20);
    for k in 1..=km_max {
        for m in 1..=km_max / k {
            let f = zoo::tribes(k, m)?;
            let closed = zoo::tribes_influence_closed_form(k, m);
            for i in [1, k * m] {
                let r = (f.influence(i)? - closed).abs();
                c.residual(|| format!("tribes:k={k},m={m} i={i}"), r);
            }
            let mean = (f.mean() - zoo::tribes_mean(k, m)).abs();
            c.residual(|| format!("tribes:k={k},m={m} mean"), mean);
        }
    }
    out.push(c.finish());

    let mut c = Check::new(config, suite, "alternative-pair-branch", 0.0);
    for k in 2..=n_enum {
        for m in 2..=n_enum / k {
            let f = zoo::tribes(k, m)?;
            let a = inequality::corollary_alternative_report(&f, DEFAULT_S0)?;
            c.flag(
                || format!("tribes:k={k},m={m} branch {:?}", a.branch),
                a.branch == Some(Branch::Pair) && a.c2 > 0.0,
            );
        }
    }
    out.push(c.finish());
    Ok(out)
}

fn gaussian_suite(config: &VerifyConfig) -> Result<Vec<CheckOutcome>> {
    let suite = Suite::Gaussian;
    let mut out = Vec::new();
    let mut r = zoo::rng(config.seed ^ 0x4741_5553);
    let expansions: Vec<(String, HermiteExpansion)> = (0..100)
        .map(|j| {
            let n = 1 + j % 3;
            let deg = 1 + (j / 3) as u32 % 5;
            let s = r.next_u64();
            HermiteExpansion::random(n, deg, s)
                .map(|f| (format!("hermite:n={n},maxdeg={deg},seed={s}"), f))
        })
        .collect::<Result<_>>()?;

    let mut c = Check::new(config, suite, "variance-taylor", 1e-9);
    for (label, f) in &expansions {
        for p in 1..=3.min(f.maxdeg()) {
            let t = gaussian::variance_taylor_check(f, p)?;
            c.residual(|| format!("{label} p={p}"), t.residual);
        }
    }
    let ex = worked_examples()?;
    for (label, f, p) in &ex {
        let t = gaussian::variance_taylor_check(f, *p)?;
        c.residual(|| format!("{label} p={p}"), t.residual);
    }
    out.push(c.finish());

    let mut c = Check::new(config, suite, "a_k-coefficients", 1e-8);
    let a = gaussian::a_k_coefficients_check(10)?;
    c.residual(|| "recursion vs closed form".into(), a.recursion_residual);
    c.residual(|| "a_k = 1/k!".into(), a.total_residual);
    out.push(c.finish());

    let mut c = Check::new(config, suite, "inverse-poincare", 1e-12);
    for (label, f) in &expansions {
        let ip = gaussian::inverse_poincare_check(f)?;
        c.residual(|| label.clone(), (ip.gradient_moment - ip.variance).max(0.0));
        c.flag(
            || format!("{label} equality case"),
            !ip.affine || (ip.variance - ip.gradient_moment).abs() <= 1e-12,
        );
    }
    out.push(c.finish());

    let mut c = Check::new(config, suite, "ou-semigroup", 1e-8);
    let points: Vec<Vec<f64>> = [-1.7, -0.3, 0.0, 0.8, 2.2]
        .iter()
        .flat_map(|&a| [-1.1, 0.5].map(move |b| (a, b)))
        .map(|(a, b)| vec![a, b])
        .collect();
    for (label, f) in expansions.iter().filter(|(_, f)| f.dim() <= 2) {
        let pts: Vec<Vec<f64>> = points.iter().map(|p| p[..f.dim()].to_vec()).collect();
        for t in [0.1, 0.5, 1.0, 2.0] {
            let d = gaussian::ou_integral_cross_check(f, t, &pts)?;
            c.residual(|| format!("{label} t={t}"), d);
        }
        let g = f.ou_semigroup(0.25)?;
        let laws = f
            .ou_semigroup(0.3)?
            .ou_semigroup(0.4)?
            .max_coeff_diff(&f.ou_semigroup(0.7)?)
            .max((g.mean() - f.mean()).abs())
            .max(gaussian::ou_integration_by_parts_residual(f, &g)?);
        c.residual(|| format!("{label} laws"), laws);
    }
    out.push(c.finish());

    let mut c = Check::new(config, suite, "nelson-hypercontractivity", 0.0);
    for (label, f) in expansions.iter().filter(|(_, f)| f.dim() == 1).take(10) {
        for t in [0.1, 0.5, 1.0] {
            for q in [2.0, 3.0, 4.0] {
                let h = gaussian::nelson_check(f, t, q)?;
                c.flag(|| format!("{label} t={t} q={q}"), h.holds);
            }
        }
    }
    out.push(c.finish());

    let mut c = Check::new(config, suite, "gaussian-talagrand", 1e-6);
    let rule = QuadratureRule::new(gaussian::DEFAULT_ORDER)?;
    let x1x2 = HermiteExpansion::from_coeffs(2, 2, [(vec![1, 1], 1.0)])?;
    let rep = gaussian::gaussian_talagrand_report(&x1x2, 1, &rule)?;
    c.residual(|| "x1*x2 lhs".into(), (rep.lhs - 1.0).abs());
    c.residual(|| "x1*x2 rhs".into(), (rep.rhs - 2.0).abs());
    for (label, f) in expansions.iter().take(30) {
        for p in 1..=2 {
            let rep = gaussian::gaussian_talagrand_report(f, p, &rule)?;
            let finite = rep.degenerate || rep.ratio.is_some_and(f64::is_finite);
            c.flag(|| format!("{label} p={p}"), finite);
            c.max_measure("max_ratio", rep.ratio_or_zero());
        }
    }
    out.push(c.finish());
    Ok(out)
}

fn worked_examples() -> Result<Vec<(String, HermiteExpansion, u32)>> {
    Ok(vec![
        (
            "x1".into(),
            HermiteExpansion::from_coeffs(2, 2, [(vec![1, 0], 1.0)])?,
            1,
        ),
        (
            "x1*x2".into(),
            HermiteExpansion::from_coeffs(2, 2, [(vec![1, 1], 1.0)])?,
            1,
        ),
        (
            "x1^2".into(),
            HermiteExpansion::from_coeffs(1, 2, [(vec![0], 1.0), (vec![2], 2f64.sqrt())])?,
            2,
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_runs_pass() {
        for suite in [Suite::Identities, Suite::Inequalities, Suite::Gaussian] {
            let s = run(&VerifyConfig::new(suite, 5, 3)).unwrap();
            assert!(s.passed, "{}", s.render());
        }
    }

    #[test]
    fn injected_fault_fails_with_reproduction() {
        let mut cfg = VerifyConfig::new(Suite::Inequalities, 4, 3);
        cfg.fault = Some(Fault::CorruptTable);
        let s = run(&cfg).unwrap();
        assert!(!s.passed);
        let text = s.render();
        assert!(text.contains("--inject-fault corrupt-table"), "{text}");
    }

    #[test]
    fn suite_names_roundtrip() {
        for s in ["identities", "inequalities", "gaussian", "all"] {
            assert_eq!(s.parse::<Suite>().unwrap().to_string(), s);
        }
        assert!("other".parse::<Suite>().is_err());
        assert!(run(&VerifyConfig::new(Suite::All, 1, 0)).is_err());
        assert!(matches!(
            run(&VerifyConfig::new(Suite::All, 25, 0)),
            Err(Error::Capacity { .. })
        ));
    }
}
