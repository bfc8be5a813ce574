//! Walsh–Fourier analysis and the Bonami–Beckner noise semigroup on the cube.
//!
//! With `D_i f = f∘τ_i - f`, every Walsh character is an eigenfunction:
//! `D_i χ_S = -2 χ_S` when `i ∈ S` and `0` otherwise, so `Q_t` acts on `f̂(S)`
//! by the multiplier `e^{-t|S|}`. The integral-kernel form of `Q_t` is kept as
//! an independent implementation for cross-checks.

use serde::Serialize;

use crate::cube::{self, RealCubeFunction};
use crate::error::{Error, Result};
use crate::numeric::{self, CompensatedSum};

/// Largest dimension accepted by the `O(4^n)` integral semigroup.
pub const INTEGRAL_MAX_DIM: usize = 10;

/// Walsh coefficients `f̂(S) = 2^-n Σ_x f(x) χ_S(x)`, indexed by subset mask.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSpectrum {
    n: usize,
    coeffs: Vec<f64>,
}

impl FourierSpectrum {
    pub fn new(n: usize, coeffs: Vec<f64>) -> Result<Self> {
        cube::check_dim(n)?;
        if coeffs.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                left: coeffs.len(),
                right: 1 << n,
            });
        }
        Ok(Self { n, coeffs })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coefficient(&self, mask: usize) -> f64 {
        self.coeffs[mask]
    }

    /// `Σ_S f̂(S)²`, equal to `‖f‖₂²`.
    pub fn energy(&self) -> f64 {
        numeric::sum(self.coeffs.iter().map(|c| c * c))
    }

    /// `Σ_{S≠∅} f̂(S)²`.
    pub fn variance(&self) -> f64 {
        numeric::sum(self.coeffs[1..].iter().map(|c| c * c))
    }

    /// Applies a multiplier depending only on `|S|`.
    pub fn map_by_degree(&self, weight: impl Fn(u32) -> f64) -> Self {
        let table: Vec<f64> = (0..=self.n as u32).map(&weight).collect();
        Self {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(s, c)| c * table[s.count_ones() as usize])
                .collect(),
        }
    }

    /// Sum over subsets of `weight(|S|) · f̂(S)²`.
    pub fn weighted_energy(&self, weight: impl Fn(u32) -> f64) -> f64 {
        let table: Vec<f64> = (0..=self.n as u32).map(&weight).collect();
        numeric::sum(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(s, c)| table[s.count_ones() as usize] * c * c),
        )
    }

    /// Text form: `n=<k>` then `<mask-hex> <coefficient>` per nonzero entry.
    pub fn to_text(&self) -> String {
        let mut s = format!("n={}\n", self.n);
        for (mask, c) in self.coeffs.iter().enumerate() {
            if *c != 0.0 {
                s.push_str(&format!("{mask:x} {c}\n"));
            }
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (hl, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, 1, "missing header line `n=<k>`"))?;
        let n = cube::parse_dim_token(header.trim(), hl + 1, 1)?;
        let mut coeffs = vec![0.0; 1 << n];
        for (ln, line) in lines {
            let mut parts = line.split_whitespace();
            let (Some(mask), Some(value), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::parse(
                    ln + 1,
                    1,
                    "expected `<mask-hex> <coefficient>`",
                ));
            };
            let col = line.find(mask).unwrap_or(0) + 1;
            let digits = mask.trim_start_matches("0x");
            let m = usize::from_str_radix(digits, 16)
                .map_err(|_| Error::parse(ln + 1, col, format!("invalid mask {mask:?}")))?;
            if m >= 1 << n {
                return Err(Error::parse(ln + 1, col, format!("mask {mask} out of range")));
            }
            let vcol = line.rfind(value).unwrap_or(0) + 1;
            let v: f64 = value
                .parse()
                .map_err(|_| Error::parse(ln + 1, vcol, format!("invalid coefficient {value:?}")))?;
            coeffs[m] = v;
        }
        Ok(Self { n, coeffs })
    }
}

/// Unnormalized in-place Walsh–Hadamard butterfly:
/// `out[s] = Σ_x data[x] (-1)^{|s ∧ x|}`.
pub fn walsh_hadamard_in_place(data: &mut [f64]) -> Result<()> {
    let len = data.len();
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::DimensionMismatch {
            left: len,
            right: len.next_power_of_two(),
        });
    }
    let mut h = 1;
    while h < len {
        for block in data.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
    Ok(())
}

// χ_S(x) = (-1)^{|S|} (-1)^{|S ∧ x|} under the bit encoding of points.
fn degree_sign(mask: usize) -> f64 {
    if mask.count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Forward Walsh–Fourier transform.
pub fn fwht(f: &RealCubeFunction) -> FourierSpectrum {
    let n = f.dim();
    let mut data = f.values().to_vec();
    walsh_hadamard_in_place(&mut data).expect("cube tables have power-of-two length");
    let scale = 1.0 / data.len() as f64;
    for (s, v) in data.iter_mut().enumerate() {
        *v *= scale * degree_sign(s);
    }
    FourierSpectrum { n, coeffs: data }
}

/// Inverse transform: `f(x) = Σ_S f̂(S) χ_S(x)`.
pub fn inverse_fwht(spectrum: &FourierSpectrum) -> RealCubeFunction {
    let mut data: Vec<f64> = spectrum
        .coeffs
        .iter()
        .enumerate()
        .map(|(s, c)| c * degree_sign(s))
        .collect();
    walsh_hadamard_in_place(&mut data).expect("spectra have power-of-two length");
    RealCubeFunction::from_raw(spectrum.n, data)
}

/// Which implementation of `Q_t` to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SemigroupMethod {
    /// Multiply `f̂(S)` by `e^{-t|S|}`; `O(n 2^n)`.
    Spectral,
    /// `Q_t f(x) = ∫ f(y) Π_i (1 + e^{-t} x_i y_i) dμ(y)`; `O(4^n)`.
    Integral,
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("semigroup time must be >= 0, got {t}")))
    }
}

/// The Bonami–Beckner semigroup `Q_t f`.
pub fn bonami_beckner(
    f: &RealCubeFunction,
    t: f64,
    method: SemigroupMethod,
) -> Result<RealCubeFunction> {
    check_time(t)?;
    match method {
        SemigroupMethod::Spectral => Ok(semigroup_spectral(f, t)),
        SemigroupMethod::Integral => semigroup_integral(f, t),
    }
}

fn semigroup_spectral(f: &RealCubeFunction, t: f64) -> RealCubeFunction {
    if t == 0.0 {
        return f.clone();
    }
    let damped = fwht(f).map_by_degree(|d| (-t * f64::from(d)).exp());
    inverse_fwht(&damped)
}

fn semigroup_integral(f: &RealCubeFunction, t: f64) -> Result<RealCubeFunction> {
    let n = f.dim();
    if n > INTEGRAL_MAX_DIM {
        return Err(Error::Capacity {
            what: "integral semigroup dimension",
            requested: n,
            limit: INTEGRAL_MAX_DIM,
        });
    }
    // The kernel Π(1 + ρ x_i y_i) only depends on the Hamming distance d(x, y):
    // (1 + ρ)^{n-d} (1 - ρ)^d.
    let rho = (-t).exp();
    let kernel: Vec<f64> = (0..=n as i32)
        .map(|d| (1.0 + rho).powi(n as i32 - d) * (1.0 - rho).powi(d))
        .collect();
    let len = f.len();
    let values = f.values();
    let out = (0..len)
        .map(|x| {
            let mut acc = CompensatedSum::new();
            for (y, &fy) in values.iter().enumerate() {
                acc.add(fy * kernel[(x ^ y).count_ones() as usize]);
            }
            acc.value() / len as f64
        })
        .collect();
    Ok(RealCubeFunction::from_raw(n, out))
}

fn inner(f: &RealCubeFunction, g: &RealCubeFunction) -> f64 {
    numeric::sum(f.values().iter().zip(g.values()).map(|(a, b)| a * b)) / f.len() as f64
}

/// Residuals of the semigroup laws on a pair of functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SemigroupResiduals {
    /// `max |Q_s Q_t f - Q_{s+t} f|`.
    pub composition: f64,
    /// `|∫ Q_t f dμ - ∫ f dμ|`.
    pub invariance: f64,
    /// `|∫ f Q_t g dμ - ∫ g Q_t f dμ|`.
    pub reversibility: f64,
}

impl SemigroupResiduals {
    pub fn max(&self) -> f64 {
        self.composition.max(self.invariance).max(self.reversibility)
    }
}

/// Measures how far `Q` is from being a Markov semigroup with reversible
/// invariant measure `μ^n` on the supplied `f`, `g`.
pub fn check_semigroup_laws(
    f: &RealCubeFunction,
    g: &RealCubeFunction,
    s: f64,
    t: f64,
) -> Result<SemigroupResiduals> {
    check_time(s)?;
    check_time(t)?;
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            left: f.dim(),
            right: g.dim(),
        });
    }
    let qt_f = semigroup_spectral(f, t);
    let composed = semigroup_spectral(&qt_f, s);
    let direct = semigroup_spectral(f, s + t);
    let qt_g = semigroup_spectral(g, t);
    Ok(SemigroupResiduals {
        composition: composed.max_abs_diff(&direct)?,
        invariance: (qt_f.mean() - f.mean()).abs(),
        reversibility: (inner(f, &qt_g) - inner(g, &qt_f)).abs(),
    })
}

/// `max_x |Q_t D_i f - D_i Q_t f|`.
pub fn check_commutation(f: &RealCubeFunction, i: usize, t: f64) -> Result<f64> {
    check_time(t)?;
    let left = semigroup_spectral(&f.discrete_derivative(i)?, t);
    let right = semigroup_spectral(f, t).discrete_derivative(i)?;
    left.max_abs_diff(&right)
}

/// Dirichlet form `E(f, g) = Σ_S |S| f̂(S) ĝ(S) = ∫ f (-L g) dμ`.
pub fn dirichlet_form(f: &RealCubeFunction, g: &RealCubeFunction) -> Result<f64> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            left: f.dim(),
            right: g.dim(),
        });
    }
    let (fh, gh) = (fwht(f), fwht(g));
    Ok(numeric::sum(
        fh.coeffs
            .iter()
            .zip(&gh.coeffs)
            .enumerate()
            .map(|(s, (a, b))| f64::from(s.count_ones()) * a * b),
    ))
}

/// `¼ Σ_i ∫ D_i f D_i g dμ`, the derivative form of the Dirichlet form.
pub fn dirichlet_form_from_derivatives(
    f: &RealCubeFunction,
    g: &RealCubeFunction,
) -> Result<f64> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            left: f.dim(),
            right: g.dim(),
        });
    }
    let mut acc = CompensatedSum::new();
    for i in 1..=f.dim() {
        acc.add(inner(&f.discrete_derivative(i)?, &g.discrete_derivative(i)?));
    }
    Ok(0.25 * acc.value())
}

/// Two sides of a one-sided inequality with its verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl BoundCheck {
    fn new(lhs: f64, rhs: f64, tol: f64) -> Self {
        Self {
            lhs,
            rhs,
            holds: lhs <= rhs + tol,
        }
    }
}

/// `‖Q_t g‖₂² ≤ e^{-2t} ‖g‖₂²` for centered `g`.
pub fn exponential_decay_check(g: &RealCubeFunction, t: f64) -> Result<BoundCheck> {
    check_time(t)?;
    let mean = g.mean();
    if mean.abs() > 1e-12 {
        return Err(Error::Precondition(format!(
            "input must be centered, mean is {mean:e}"
        )));
    }
    let lhs = semigroup_spectral(g, t).lp_norm(2.0)?.powi(2);
    let rhs = (-2.0 * t).exp() * g.lp_norm(2.0)?.powi(2);
    Ok(BoundCheck::new(lhs, rhs, 1e-12))
}

/// Hypercontractivity at `(t, q)`: `‖Q_t f‖_q ≤ ‖f‖_p`, `p = 1 + (q-1)e^{-2t}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HypercontractivityCheck {
    pub t: f64,
    pub q: f64,
    pub p: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

pub fn hypercontractivity_check(
    f: &RealCubeFunction,
    t: f64,
    q: f64,
) -> Result<HypercontractivityCheck> {
    check_time(t)?;
    if !(q >= 1.0) {
        return Err(Error::Domain(format!("q must be >= 1, got {q}")));
    }
    let p = 1.0 + (q - 1.0) * (-2.0 * t).exp();
    let lhs = semigroup_spectral(f, t).lp_norm(q)?;
    let rhs = f.lp_norm(p)?;
    Ok(HypercontractivityCheck {
        t,
        q,
        p,
        lhs,
        rhs,
        holds: lhs <= rhs + 1e-12,
    })
}

/// Outcome of an exact-identity check `lhs = κ · integral`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub name: &'static str,
    /// Left-hand quantity: `Var(f)` or `K(s)`.
    pub lhs: f64,
    /// Time integral in closed spectral form.
    pub integral: f64,
    /// The same integral by adaptive quadrature, when computed.
    pub quadrature: Option<f64>,
    /// Measured constant `lhs / integral`; `None` when degenerate.
    pub kappa: Option<f64>,
    pub degenerate: bool,
}

fn identity(name: &'static str, lhs: f64, integral: f64, quadrature: Option<f64>) -> IdentityReport {
    let degenerate = integral <= 1e-300;
    IdentityReport {
        name,
        lhs,
        integral,
        quadrature,
        kappa: (!degenerate).then(|| lhs / integral),
        degenerate,
    }
}

/// Variance representation: compares `Var(f)` with
/// `J = ∫_0^∞ Σ_i ‖Q_t D_i f‖₂² dt`.
///
/// `J` is evaluated from the spectra of the derivative tables,
/// `Σ_i Σ_S \hat{D_i f}(S)² / (2|S|)`, and cross-checked by adaptive Simpson
/// on the semigroup applied in physical space. The measured constant is
/// `κ = Var(f) / J = 1/2`.
pub fn variance_representation_check(f: &RealCubeFunction) -> Result<IdentityReport> {
    let derivs: Vec<RealCubeFunction> = (1..=f.dim())
        .map(|i| f.discrete_derivative(i))
        .collect::<Result<_>>()?;
    let spectra: Vec<FourierSpectrum> = derivs.iter().map(fwht).collect();
    let closed = numeric::sum(spectra.iter().map(|sp| {
        sp.weighted_energy(|d| if d == 0 { 0.0 } else { 1.0 / (2.0 * f64::from(d)) })
    }));
    let quad = time_integral_by_quadrature(&derivs, 0.0, |_| 1.0);
    Ok(identity("variance_representation", f.variance(), closed, Some(quad)))
}

/// Tail identity at time `s`: compares `K(s) = Σ_i ‖Q_s D_i f‖₂²` with
/// `T(s) = Σ_{i,j} ∫_s^∞ ‖Q_u D_ij f‖₂² du`; the measured constant is
/// `κ₂ = K(s) / T(s) = 1/2`.
pub fn tail_identity_check(f: &RealCubeFunction, s: f64) -> Result<IdentityReport> {
    check_time(s)?;
    let n = f.dim();
    let mut k_acc = CompensatedSum::new();
    for i in 1..=n {
        let sp = fwht(&f.discrete_derivative(i)?);
        k_acc.add(sp.weighted_energy(|d| (-2.0 * s * f64::from(d)).exp()));
    }
    let mut t_acc = CompensatedSum::new();
    for i in 1..=n {
        for j in 1..=n {
            let sp = fwht(&f.second_derivative(i, j)?);
            t_acc.add(sp.weighted_energy(|d| {
                if d == 0 {
                    0.0
                } else {
                    let d = f64::from(d);
                    (-2.0 * s * d).exp() / (2.0 * d)
                }
            }));
        }
    }
    Ok(identity("tail_identity", k_acc.value(), t_acc.value(), None))
}

/// `∫_s^∞ Σ_k ‖Q_u g_k‖₂² du` by adaptive Simpson after truncating where the
/// remaining tail is below `1e-12`. Each integrand evaluation applies the
/// semigroup and measures the norm in physical space.
fn time_integral_by_quadrature(
    functions: &[RealCubeFunction],
    s: f64,
    weight: impl Fn(f64) -> f64,
) -> f64 {
    let energy: f64 = functions
        .iter()
        .map(|g| g.lp_norm(2.0).map(|v| v * v).unwrap_or(0.0))
        .sum();
    if energy == 0.0 {
        return 0.0;
    }
    // Every component of a centered function decays at least like e^{-2u}.
    let horizon = s + 0.5 * (energy / 1e-12).ln().max(0.0) + 1.0;
    let integrand = |u: f64| {
        weight(u)
            * functions
                .iter()
                .map(|g| {
                    let q = semigroup_spectral(g, u);
                    let norm = q.lp_norm(2.0).unwrap_or(0.0);
                    norm * norm
                })
                .sum::<f64>()
    };
    // Splitting the range keeps the early, fast-decaying part well resolved.
    let mid = (s + 2.0).min(horizon);
    numeric::adaptive_simpson(&integrand, s, mid, 1e-11)
        + numeric::adaptive_simpson(&integrand, mid, horizon, 1e-11)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::BooleanFunction;

    fn dictator2() -> RealCubeFunction {
        BooleanFunction::parse("n=2\n0101").unwrap().to_real()
    }

    fn half_plus_half_char(n: usize, mask: usize) -> RealCubeFunction {
        let chi = RealCubeFunction::character(n, mask).unwrap();
        RealCubeFunction::from_fn(n, |x| 0.5 * (1.0 + chi.values()[x])).unwrap()
    }

    fn brute_coefficient(f: &RealCubeFunction, mask: usize) -> f64 {
        let chi = RealCubeFunction::character(f.dim(), mask).unwrap();
        f.values()
            .iter()
            .zip(chi.values())
            .map(|(a, b)| a * b)
            .sum::<f64>()
            / f.len() as f64
    }

    #[test]
    fn fwht_matches_definition() {
        let f = RealCubeFunction::from_fn(4, |x| ((x * 7 + 3) % 5) as f64 - 1.7).unwrap();
        let sp = fwht(&f);
        for s in 0..16 {
            assert!((sp.coefficient(s) - brute_coefficient(&f, s)).abs() < 1e-14);
        }
    }

    #[test]
    fn fwht_examples() {
        let sp = fwht(&dictator2());
        assert_eq!(sp.coefficients(), &[0.5, 0.5, 0.0, 0.0]);
        let one = RealCubeFunction::constant(3, 1.0).unwrap();
        let sp = fwht(&one);
        assert_eq!(sp.coefficient(0), 1.0);
        assert!(sp.coefficients()[1..].iter().all(|&c| c == 0.0));
    }

    #[test]
    fn raw_butterfly_rejects_bad_lengths() {
        assert!(walsh_hadamard_in_place(&mut [1.0, 2.0, 3.0]).is_err());
        assert!(walsh_hadamard_in_place(&mut []).is_err());
    }

    #[test]
    fn semigroup_on_degree_two() {
        let f = half_plus_half_char(3, 0b011);
        for t in [0.0, 0.3, 1.7] {
            let q = bonami_beckner(&f, t, SemigroupMethod::Spectral).unwrap();
            assert!((q.variance() - (-4.0 * t).exp() / 4.0).abs() < 1e-14);
        }
        let f = dictator2();
        assert_eq!(bonami_beckner(&f, 0.0, SemigroupMethod::Integral).unwrap(), f);
        assert!(bonami_beckner(&f, -1.0, SemigroupMethod::Spectral).is_err());
    }

    #[test]
    fn integral_capacity() {
        let f = RealCubeFunction::constant(11, 1.0).unwrap();
        assert!(matches!(
            bonami_beckner(&f, 1.0, SemigroupMethod::Integral),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn constants_are_fixed_points() {
        let one = RealCubeFunction::constant(5, 1.0).unwrap();
        for m in [SemigroupMethod::Spectral, SemigroupMethod::Integral] {
            let q = bonami_beckner(&one, 0.8, m).unwrap();
            assert!(q.max_abs_diff(&one).unwrap() < 1e-14);
        }
        let r = check_semigroup_laws(&one, &one, 0.2, 0.4).unwrap();
        assert!(r.max() < 1e-15);
        assert!(check_commutation(&one, 2, 0.5).unwrap() < 1e-15);
    }

    #[test]
    fn dirichlet_examples() {
        let f = half_plus_half_char(2, 0b01);
        assert!((dirichlet_form(&f, &f).unwrap() - 0.25).abs() < 1e-15);
        assert!((dirichlet_form_from_derivatives(&f, &f).unwrap() - 0.25).abs() < 1e-15);
        let c = RealCubeFunction::constant(2, 3.0).unwrap();
        assert_eq!(dirichlet_form(&c, &c).unwrap(), 0.0);
        let other = RealCubeFunction::constant(3, 3.0).unwrap();
        assert!(dirichlet_form(&c, &other).is_err());
    }

    #[test]
    fn decay_examples() {
        let chi1 = RealCubeFunction::character(2, 0b01).unwrap();
        let r = exponential_decay_check(&chi1, 1.0).unwrap();
        assert!((r.lhs - (-2.0f64).exp()).abs() < 1e-15);
        assert!((r.rhs - (-2.0f64).exp()).abs() < 1e-15);
        assert!(r.holds);
        let chi12 = RealCubeFunction::character(2, 0b11).unwrap();
        let r = exponential_decay_check(&chi12, 1.0).unwrap();
        assert!((r.lhs - (-4.0f64).exp()).abs() < 1e-15);
        assert!(r.lhs < r.rhs);
        assert!(matches!(
            exponential_decay_check(&dictator2(), 1.0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn hypercontractivity_eigenfunction() {
        let chi = RealCubeFunction::character(3, 0b001).unwrap();
        let t = 0.5 * 3f64.ln();
        let r = hypercontractivity_check(&chi, t, 2.0).unwrap();
        assert!((r.p - 4.0 / 3.0).abs() < 1e-15);
        assert!((r.lhs - 3f64.powf(-0.5)).abs() < 1e-14);
        assert!((r.rhs - 1.0).abs() < 1e-15);
        assert!(r.holds);
        let c = RealCubeFunction::constant(3, -2.0).unwrap();
        let r = hypercontractivity_check(&c, 0.7, 3.0).unwrap();
        assert!((r.lhs - 2.0).abs() < 1e-14 && (r.rhs - 2.0).abs() < 1e-14);
        assert!(hypercontractivity_check(&c, 0.7, 0.5).is_err());
    }

    #[test]
    fn variance_representation_examples() {
        let f = half_plus_half_char(2, 0b11);
        let r = variance_representation_check(&f).unwrap();
        assert!((r.lhs - 0.25).abs() < 1e-15);
        assert!((r.integral - 0.5).abs() < 1e-14);
        assert!((r.kappa.unwrap() - 0.5).abs() < 1e-12);
        assert!((r.quadrature.unwrap() - 0.5).abs() < 1e-8);

        let r = variance_representation_check(&dictator2()).unwrap();
        assert!((r.integral - 0.5).abs() < 1e-14);
        assert!((r.kappa.unwrap() - 0.5).abs() < 1e-12);

        let c = RealCubeFunction::constant(3, 1.0).unwrap();
        let r = variance_representation_check(&c).unwrap();
        assert!(r.degenerate && r.kappa.is_none());
    }

    #[test]
    fn tail_identity_examples() {
        let f = half_plus_half_char(2, 0b11);
        let r = tail_identity_check(&f, 0.0).unwrap();
        assert!((r.lhs - 2.0).abs() < 1e-14);
        assert!((r.integral - 4.0).abs() < 1e-14);
        assert!((r.kappa.unwrap() - 0.5).abs() < 1e-12);

        let r = tail_identity_check(&dictator2(), 0.3).unwrap();
        assert!((r.kappa.unwrap() - 0.5).abs() < 1e-12);

        let r = tail_identity_check(&f, 12.0).unwrap();
        assert!(r.lhs < 1e-19);
        assert!((r.kappa.unwrap() - 0.5).abs() < 1e-10);
        assert!(tail_identity_check(&f, -0.1).is_err());
    }

    #[test]
    fn spectrum_text_format() {
        let sp = fwht(&dictator2());
        let text = sp.to_text();
        assert_eq!(text, "n=2\n0 0.5\n1 0.5\n");
        assert_eq!(FourierSpectrum::parse(&text).unwrap(), sp);
        assert!(matches!(
            FourierSpectrum::parse("n=2\n7 0.5\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            FourierSpectrum::parse("n=2\n1 zz\n"),
            Err(Error::Parse { line: 2, column: 3, .. })
        ));
    }
}
