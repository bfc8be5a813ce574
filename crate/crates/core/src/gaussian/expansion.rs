use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::numeric;

/// Largest dimension of a Hermite expansion.
pub const MAX_GAUSS_DIM: usize = 6;
/// Largest total degree of a Hermite expansion.
pub const MAX_DEGREE: u32 = 8;

/// Multi-index `α = (α_1, …, α_n)`.
pub type MultiIndex = Vec<u32>;

pub fn total_degree(alpha: &[u32]) -> u32 {
    alpha.iter().sum()
}

/// `α! = Π α_i!`.
pub fn multi_factorial(alpha: &[u32]) -> f64 {
    alpha.iter().map(|&a| numeric::factorial(a)).product()
}

/// All multi-indices of length `n` with total degree exactly `k`, in
/// lexicographic order.
pub fn compositions(n: usize, k: u32) -> Vec<MultiIndex> {
    fn rec(n: usize, k: u32, prefix: &mut MultiIndex, out: &mut Vec<MultiIndex>) {
        if prefix.len() == n - 1 {
            prefix.push(k);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in (0..=k).rev() {
            prefix.push(a);
            rec(n, k - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, k, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

/// Number of ordered tuples `(i_1, …, i_k)` whose counts are `β`: `k!/β!`.
pub fn tuple_multiplicity(beta: &[u32]) -> f64 {
    numeric::factorial(total_degree(beta)) / multi_factorial(beta)
}

/// Orthonormal probabilists' Hermite values `h_0(x), …, h_d(x)` with
/// `h_k = He_k / √(k!)`.
pub fn hermite_values(x: f64, d: u32) -> Vec<f64> {
    let mut h = Vec::with_capacity(d as usize + 1);
    h.push(1.0);
    if d >= 1 {
        h.push(x);
    }
    for k in 1..d as usize {
        let next = (x * h[k] - (k as f64).sqrt() * h[k - 1]) / ((k + 1) as f64).sqrt();
        h.push(next);
    }
    h
}

/// A polynomial on `R^n` in the tensorized orthonormal Hermite basis
/// `h_α(x) = Π h_{α_i}(x_i)`, orthonormal in `L²(γ_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteExpansion {
    n: usize,
    maxdeg: u32,
    coeffs: BTreeMap<MultiIndex, f64>,
}

impl HermiteExpansion {
    /// The zero expansion.
    pub fn zero(n: usize, maxdeg: u32) -> Result<Self> {
        if n == 0 || n > MAX_GAUSS_DIM {
            return Err(Error::Capacity {
                what: "Hermite dimension",
                requested: n,
                limit: MAX_GAUSS_DIM,
            });
        }
        if maxdeg > MAX_DEGREE {
            return Err(Error::Capacity {
                what: "Hermite degree",
                requested: maxdeg as usize,
                limit: MAX_DEGREE as usize,
            });
        }
        Ok(Self {
            n,
            maxdeg,
            coeffs: BTreeMap::new(),
        })
    }

    pub fn from_coeffs<I>(n: usize, maxdeg: u32, coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, f64)>,
    {
        let mut out = Self::zero(n, maxdeg)?;
        for (alpha, c) in coeffs {
            out.set(alpha, c)?;
        }
        Ok(out)
    }

    /// Expansion with i.i.d. uniform `[-1, 1)` coefficients on every
    /// multi-index of degree at most `maxdeg`.
    pub fn random(n: usize, maxdeg: u32, seed: u64) -> Result<Self> {
        let mut out = Self::zero(n, maxdeg)?;
        let mut rng = crate::zoo::rng(seed);
        for d in 0..=maxdeg {
            for alpha in compositions(n, d) {
                let c = 2.0 * crate::zoo::unit_f64(&mut rng) - 1.0;
                out.coeffs.insert(alpha, c);
            }
        }
        Ok(out)
    }

    pub fn set(&mut self, alpha: MultiIndex, c: f64) -> Result<()> {
        if alpha.len() != self.n {
            return Err(Error::DimensionMismatch {
                left: alpha.len(),
                right: self.n,
            });
        }
        if total_degree(&alpha) > self.maxdeg {
            return Err(Error::Domain(format!(
                "multi-index {alpha:?} exceeds maxdeg {}",
                self.maxdeg
            )));
        }
        if !c.is_finite() {
            return Err(Error::Domain("non-finite coefficient".into()));
        }
        if c == 0.0 {
            self.coeffs.remove(&alpha);
        } else {
            self.coeffs.insert(alpha, c);
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn maxdeg(&self) -> u32 {
        self.maxdeg
    }

    pub fn coeff(&self, alpha: &[u32]) -> f64 {
        self.coeffs.get(alpha).copied().unwrap_or(0.0)
    }

    /// Nonzero coefficients in lexicographic multi-index order.
    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, f64)> {
        self.coeffs.iter().map(|(a, &c)| (a, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `∫ f dγ_n = c_0`.
    pub fn mean(&self) -> f64 {
        self.coeff(&vec![0; self.n])
    }

    /// `‖f‖₂² = Σ c_α²`.
    pub fn energy(&self) -> f64 {
        numeric::sum(self.coeffs.values().map(|c| c * c))
    }

    /// `Σ_{α≠0} c_α²`.
    pub fn variance(&self) -> f64 {
        numeric::sum(
            self.coeffs
                .iter()
                .filter(|(a, _)| total_degree(a) > 0)
                .map(|(_, c)| c * c),
        )
    }

    /// `Σ_{|α|=k} c_α²`.
    pub fn degree_energy(&self, k: u32) -> f64 {
        numeric::sum(
            self.coeffs
                .iter()
                .filter(|(a, _)| total_degree(a) == k)
                .map(|(_, c)| c * c),
        )
    }

    /// Highest total degree carrying a nonzero coefficient.
    pub fn degree(&self) -> u32 {
        self.coeffs.keys().map(|a| total_degree(a)).max().unwrap_or(0)
    }

    /// 0-based coordinates the expansion depends on.
    pub fn active_coordinates(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&i| self.coeffs.keys().any(|a| a[i] > 0))
            .collect()
    }

    /// `∂_i f` by the ladder rule `∂_i h_α = √α_i h_{α - e_i}`; `i` is 1-based.
    pub fn partial(&self, i: usize) -> Result<Self> {
        if i == 0 || i > self.n {
            return Err(Error::IndexOutOfRange { index: i, n: self.n });
        }
        let mut beta = vec![0; self.n];
        beta[i - 1] = 1;
        Ok(self.partial_multi(&beta))
    }

    /// `∂^β f = Π_i ∂_i^{β_i} f`: `h_α ↦ √(α!/(α-β)!) h_{α-β}` for `α ≥ β`.
    pub fn partial_multi(&self, beta: &[u32]) -> Self {
        debug_assert_eq!(beta.len(), self.n);
        let mut out = BTreeMap::new();
        for (alpha, &c) in &self.coeffs {
            if alpha.iter().zip(beta).any(|(a, b)| a < b) {
                continue;
            }
            let lowered: MultiIndex = alpha.iter().zip(beta).map(|(a, b)| a - b).collect();
            let factor = (multi_factorial(alpha) / multi_factorial(&lowered)).sqrt();
            *out.entry(lowered).or_insert(0.0) += factor * c;
        }
        Self {
            n: self.n,
            maxdeg: self.maxdeg,
            coeffs: out,
        }
    }

    /// Ornstein–Uhlenbeck semigroup: `c_α ↦ e^{-t|α|} c_α`.
    pub fn ou_semigroup(&self, t: f64) -> Result<Self> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::Domain(format!("semigroup time must be >= 0, got {t}")));
        }
        Ok(self.map_by_degree(|d| (-t * f64::from(d)).exp()))
    }

    /// Generator `L = Δ - x·∇`: `c_α ↦ -|α| c_α`.
    pub fn generator(&self) -> Self {
        self.map_by_degree(|d| -f64::from(d))
    }

    pub fn scale(&self, a: f64) -> Self {
        self.map_by_degree(|_| a)
    }

    fn map_by_degree(&self, weight: impl Fn(u32) -> f64) -> Self {
        Self {
            n: self.n,
            maxdeg: self.maxdeg,
            coeffs: self
                .coeffs
                .iter()
                .map(|(a, &c)| (a.clone(), c * weight(total_degree(a))))
                .filter(|(_, c)| *c != 0.0)
                .collect(),
        }
    }

    /// `∫ f g dγ_n = Σ c_α d_α`.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(numeric::sum(
            self.coeffs.iter().map(|(a, c)| c * other.coeff(a)),
        ))
    }

    /// Largest coefficient difference.
    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        self.coeffs
            .keys()
            .chain(other.coeffs.keys())
            .map(|a| (self.coeff(a) - other.coeff(a)).abs())
            .fold(0.0, f64::max)
    }

    /// Point evaluation.
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        let tables: Vec<Vec<f64>> = x.iter().map(|&xi| hermite_values(xi, self.maxdeg)).collect();
        self.evaluate_with(|axis, k| tables[axis][k as usize])
    }

    /// Evaluation with precomputed per-axis Hermite values.
    pub(crate) fn evaluate_with(&self, h: impl Fn(usize, u32) -> f64) -> f64 {
        self.coeffs
            .iter()
            .map(|(alpha, c)| {
                c * alpha
                    .iter()
                    .enumerate()
                    .filter(|(_, &a)| a > 0)
                    .map(|(axis, &a)| h(axis, a))
                    .product::<f64>()
            })
            .sum()
    }

    /// Text form: `n=<k> maxdeg=<d>` then `α_1 … α_n <coefficient>` lines.
    pub fn to_text(&self) -> String {
        let mut s = format!("n={} maxdeg={}\n", self.n, self.maxdeg);
        for (alpha, c) in &self.coeffs {
            for a in alpha {
                s.push_str(&format!("{a} "));
            }
            s.push_str(&format!("{c}\n"));
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
            .ok_or_else(|| Error::parse(1, 1, "missing header `n=<k> maxdeg=<d>`"))?;
        let mut n = None;
        let mut maxdeg = None;
        for token in header.split_whitespace() {
            let col = header.find(token).unwrap_or(0) + 1;
            if let Some(v) = token.strip_prefix("n=") {
                n = Some(v.parse::<usize>().map_err(|_| {
                    Error::parse(hl + 1, col + 2, format!("invalid dimension {v:?}"))
                })?);
            } else if let Some(v) = token.strip_prefix("maxdeg=") {
                maxdeg = Some(v.parse::<u32>().map_err(|_| {
                    Error::parse(hl + 1, col + 7, format!("invalid degree {v:?}"))
                })?);
            } else {
                return Err(Error::parse(hl + 1, col, format!("unexpected token {token:?}")));
            }
        }
        let (Some(n), Some(maxdeg)) = (n, maxdeg) else {
            return Err(Error::parse(hl + 1, 1, "header needs both n= and maxdeg="));
        };
        let mut out = Self::zero(n, maxdeg)?;
        for (ln, line) in lines {
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() != n + 1 {
                return Err(Error::parse(
                    ln + 1,
                    1,
                    format!("expected {n} indices and a coefficient, found {} fields", tokens.len()),
                ));
            }
            let mut alpha = Vec::with_capacity(n);
            let mut search_from = 0;
            for (k, token) in tokens.iter().enumerate() {
                let col = line[search_from..].find(token).unwrap_or(0) + search_from + 1;
                search_from = col - 1 + token.len();
                if k < n {
                    alpha.push(token.parse::<u32>().map_err(|_| {
                        Error::parse(ln + 1, col, format!("invalid index {token:?}"))
                    })?);
                } else {
                    let c: f64 = token.parse().map_err(|_| {
                        Error::parse(ln + 1, col, format!("invalid coefficient {token:?}"))
                    })?;
                    out.set(alpha.clone(), c).map_err(|e| Error::parse(ln + 1, 1, e.to_string()))?;
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x1(n: usize) -> HermiteExpansion {
        let mut a = vec![0; n];
        a[0] = 1;
        HermiteExpansion::from_coeffs(n, 4, [(a, 1.0)]).unwrap()
    }

    #[test]
    fn hermite_values_match_monomials() {
        let x = 0.7f64;
        let h = hermite_values(x, 4);
        assert!((h[2] - (x * x - 1.0) / 2f64.sqrt()).abs() < 1e-15);
        assert!((h[3] - (x.powi(3) - 3.0 * x) / 6f64.sqrt()).abs() < 1e-15);
        assert!((h[4] - (x.powi(4) - 6.0 * x * x + 3.0) / 24f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(3, 2).len(), 6);
        assert_eq!(compositions(1, 4), vec![vec![4]]);
        assert_eq!(tuple_multiplicity(&[1, 1]), 2.0);
        assert_eq!(tuple_multiplicity(&[2, 0, 1]), 3.0);
    }

    #[test]
    fn partial_examples() {
        let f = x1(2);
        let d1 = f.partial(1).unwrap();
        assert_eq!(d1.coeff(&[0, 0]), 1.0);
        assert!(f.partial(2).unwrap().is_zero());
        let x1x2 = HermiteExpansion::from_coeffs(2, 4, [(vec![1, 1], 1.0)]).unwrap();
        let d = x1x2.partial(1).unwrap();
        assert_eq!(d.coeff(&[0, 1]), 1.0);
        assert_eq!(d.iter().count(), 1);
        assert!(f.partial(3).is_err());
    }

    #[test]
    fn mixed_partials_commute() {
        let f = HermiteExpansion::random(3, 5, 11).unwrap();
        let a = f.partial(1).unwrap().partial(2).unwrap();
        let b = f.partial(2).unwrap().partial(1).unwrap();
        assert!(a.max_coeff_diff(&b) < 1e-12);
        assert!(a.max_coeff_diff(&f.partial_multi(&[1, 1, 0])) < 1e-12);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let f = HermiteExpansion::random(2, 5, 3).unwrap();
        let d = f.partial(2).unwrap();
        let x = [0.3, -0.8];
        let h = 1e-5;
        let fd = (f.evaluate(&[x[0], x[1] + h]) - f.evaluate(&[x[0], x[1] - h])) / (2.0 * h);
        assert!((fd - d.evaluate(&x)).abs() < 1e-6);
    }

    #[test]
    fn ou_on_linear_function() {
        let f = x1(2);
        let t = 0.9;
        let p = f.ou_semigroup(t).unwrap();
        assert!((p.coeff(&[1, 0]) - (-t).exp()).abs() < 1e-15);
        assert_eq!(f.ou_semigroup(0.0).unwrap(), f);
        assert!(f.ou_semigroup(-1.0).is_err());
        // ∇P_t f = e^{-t} P_t ∇f
        let g = HermiteExpansion::random(2, 5, 5).unwrap();
        for i in 1..=2 {
            let left = g.ou_semigroup(t).unwrap().partial(i).unwrap();
            let right = g.partial(i).unwrap().ou_semigroup(t).unwrap().scale((-t).exp());
            assert!(left.max_coeff_diff(&right) < 1e-14);
        }
    }

    #[test]
    fn caps() {
        assert!(matches!(
            HermiteExpansion::zero(7, 2),
            Err(Error::Capacity { .. })
        ));
        assert!(matches!(
            HermiteExpansion::zero(2, 9),
            Err(Error::Capacity { .. })
        ));
        let mut f = HermiteExpansion::zero(2, 2).unwrap();
        assert!(f.set(vec![2, 1], 1.0).is_err());
        assert!(f.set(vec![1], 1.0).is_err());
    }

    #[test]
    fn text_format() {
        let f = HermiteExpansion::from_coeffs(2, 3, [(vec![1, 1], 1.0), (vec![0, 2], -0.25)])
            .unwrap();
        let text = f.to_text();
        assert_eq!(text, "n=2 maxdeg=3\n0 2 -0.25\n1 1 1\n");
        assert_eq!(HermiteExpansion::parse(&text).unwrap(), f);
        assert!(matches!(
            HermiteExpansion::parse("n=2 maxdeg=3\n1 x 0.5\n"),
            Err(Error::Parse { line: 2, column: 3, .. })
        ));
        assert!(matches!(
            HermiteExpansion::parse("n=2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
