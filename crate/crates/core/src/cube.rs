//! Functions on the discrete cube `{-1, 1}^n` under the uniform measure.
//!
//! A point is encoded by an integer index in `[0, 2^n)`: bit `i - 1` set means
//! coordinate `x_i = +1`, clear means `x_i = -1`. Coordinates are 1-based
//! throughout the public API.
//!
//! Boolean functions are stored bit-packed (64 points per word) and only turn
//! into real tables through [`BooleanFunction::to_real`].

use std::fmt;

use crate::error::{Error, Result};
use crate::numeric::{self, CompensatedSum};

/// Largest dimension accepted for dense tables.
pub const MAX_DIM: usize = 24;

pub(crate) fn check_dim(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    if n > MAX_DIM {
        return Err(Error::Capacity {
            what: "cube dimension",
            requested: n,
            limit: MAX_DIM,
        });
    }
    Ok(())
}

/// Validates a 1-based coordinate and returns its bit position.
pub(crate) fn coord_bit(n: usize, i: usize) -> Result<usize> {
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    Ok(i - 1)
}

/// A vertex of the cube.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CubePoint {
    index: usize,
    n: usize,
}

impl CubePoint {
    pub fn new(index: usize, n: usize) -> Result<Self> {
        check_dim(n)?;
        if index >= 1 << n {
            return Err(Error::IndexOutOfRange {
                index,
                n: (1 << n) - 1,
            });
        }
        Ok(Self { index, n })
    }

    pub fn index(self) -> usize {
        self.index
    }

    pub fn dim(self) -> usize {
        self.n
    }

    /// Value `x_i` in `{-1, +1}`.
    pub fn coordinate(self, i: usize) -> Result<i8> {
        let bit = coord_bit(self.n, i)?;
        Ok(if self.index >> bit & 1 == 1 { 1 } else { -1 })
    }

    /// `τ_i x`: the point with coordinate `i` flipped.
    pub fn flip(self, i: usize) -> Result<Self> {
        let bit = coord_bit(self.n, i)?;
        Ok(Self {
            index: self.index ^ (1 << bit),
            n: self.n,
        })
    }
}

// Within a 64-bit word, mask of positions whose bit `b` (b < 6) is clear.
const LOW_MASKS: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0F0F_0F0F_0F0F_0F0F,
    0x00FF_00FF_00FF_00FF,
    0x0000_FFFF_0000_FFFF,
    0x0000_0000_FFFF_FFFF,
];

/// A function `C_n -> {0, 1}` stored as a packed truth table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    n: usize,
    words: Vec<u64>,
}

impl fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n <= 6 {
            write!(f, "BooleanFunction(n={}, {})", self.n, self.table_string())
        } else {
            write!(f, "BooleanFunction(n={}, weight={})", self.n, self.weight())
        }
    }
}

impl BooleanFunction {
    /// The constant-zero function.
    pub fn zeros(n: usize) -> Result<Self> {
        check_dim(n)?;
        let words = (1usize << n).div_ceil(64);
        Ok(Self {
            n,
            words: vec![0; words],
        })
    }

    pub fn from_fn<F: FnMut(usize) -> bool>(n: usize, mut f: F) -> Result<Self> {
        let mut out = Self::zeros(n)?;
        for x in 0..out.len() {
            if f(x) {
                out.words[x >> 6] |= 1 << (x & 63);
            }
        }
        Ok(out)
    }

    /// Builds a function from a packed table whose bit `x` is `f(x)`.
    pub fn from_words(n: usize, mut words: Vec<u64>) -> Result<Self> {
        check_dim(n)?;
        let expected = (1usize << n).div_ceil(64);
        if words.len() != expected {
            return Err(Error::DimensionMismatch {
                left: words.len(),
                right: expected,
            });
        }
        if n < 6 {
            words[0] &= (1u64 << (1 << n)) - 1;
        }
        Ok(Self { n, words })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Number of points, `2^n`.
    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, x: usize) -> bool {
        self.words[x >> 6] >> (x & 63) & 1 == 1
    }

    pub fn set(&mut self, x: usize, value: bool) {
        let mask = 1u64 << (x & 63);
        if value {
            self.words[x >> 6] |= mask;
        } else {
            self.words[x >> 6] &= !mask;
        }
    }

    pub fn toggle(&mut self, x: usize) {
        self.words[x >> 6] ^= 1u64 << (x & 63);
    }

    /// Number of points where `f = 1`.
    pub fn weight(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    pub fn mean(&self) -> f64 {
        self.weight() as f64 / self.len() as f64
    }

    /// `Var(f) = E f - (E f)^2` for a `{0, 1}`-valued function.
    pub fn variance(&self) -> f64 {
        let m = self.mean();
        m - m * m
    }

    pub fn is_constant(&self) -> bool {
        let w = self.weight();
        w == 0 || w == self.len() as u64
    }

    /// Explicit conversion to a real table with values in `{0.0, 1.0}`.
    pub fn to_real(&self) -> RealCubeFunction {
        RealCubeFunction {
            n: self.n,
            values: (0..self.len())
                .map(|x| if self.get(x) { 1.0 } else { 0.0 })
                .collect(),
        }
    }

    /// Packed table of `f ∘ τ_bit`.
    fn flipped_words(&self, bit: usize) -> Vec<u64> {
        if bit < 6 {
            let s = 1u32 << bit;
            let m = LOW_MASKS[bit];
            self.words
                .iter()
                .map(|&w| ((w >> s) & m) | ((w & m) << s))
                .collect()
        } else {
            let stride = 1usize << (bit - 6);
            (0..self.words.len())
                .map(|j| self.words[j ^ stride])
                .collect()
        }
    }

    /// `I_i(f) = P(f(X) != f(τ_i X))`.
    pub fn influence(&self, i: usize) -> Result<f64> {
        let bit = coord_bit(self.n, i)?;
        Ok(self.influence_bit(bit))
    }

    fn influence_bit(&self, bit: usize) -> f64 {
        let flipped = self.flipped_words(bit);
        let changed: u64 = self
            .words
            .iter()
            .zip(&flipped)
            .map(|(a, b)| u64::from((a ^ b).count_ones()))
            .sum();
        changed as f64 / self.len() as f64
    }

    /// `Σ_x |D_ij f(x)|`, computed with bit-sliced counters.
    fn second_derivative_l1_count(&self, bi: usize, bj: usize) -> u64 {
        let fi = self.flipped_words(bi);
        let fj = self.flipped_words(bj);
        let fij = if bi == bj {
            self.words.clone()
        } else {
            Self {
                n: self.n,
                words: fi.clone(),
            }
            .flipped_words(bj)
        };
        let mut total = 0u64;
        for k in 0..self.words.len() {
            let (a, b, c, d) = (self.words[k], fi[k], fj[k], fij[k]);
            // D_ij f = (a + d) - (b + c), each pair sum in {0, 1, 2}.
            let s_odd = a ^ d;
            let s_two = a & d;
            let t_odd = b ^ c;
            let t_two = b & c;
            let ones = s_odd ^ t_odd;
            let twos = (s_two & !(t_odd | t_two)) | (t_two & !(s_odd | s_two));
            total += u64::from(ones.count_ones()) + 2 * u64::from(twos.count_ones());
        }
        total
    }

    /// `I_(i,j)(f) = ½ ‖D_ij f‖₁`.
    pub fn pair_influence(&self, i: usize, j: usize) -> Result<f64> {
        let bi = coord_bit(self.n, i)?;
        let bj = coord_bit(self.n, j)?;
        Ok(0.5 * self.second_derivative_l1_count(bi, bj) as f64 / self.len() as f64)
    }

    /// All first-order and pair influences.
    pub fn influence_profile(&self) -> InfluenceProfile {
        let n = self.n;
        let first: Vec<f64> = (0..n).map(|b| self.influence_bit(b)).collect();
        let mut pair = vec![0.0; n * n];
        let scale = 0.5 / self.len() as f64;
        for a in 0..n {
            pair[a * n + a] = first[a];
            for b in a + 1..n {
                let v = self.second_derivative_l1_count(a, b) as f64 * scale;
                pair[a * n + b] = v;
                pair[b * n + a] = v;
            }
        }
        InfluenceProfile { n, first, pair }
    }

    /// Relabels coordinates: coordinate `i` of `self` becomes coordinate
    /// `perm[i - 1]` of the result (both 1-based).
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let bits = permutation_bits(self.n, perm)?;
        let mut out = Self::zeros(self.n)?;
        for y in 0..self.len() {
            if self.get(y) {
                out.set(relabel_index(y, &bits), true);
            }
        }
        Ok(out)
    }

    /// Truth table as a `0`/`1` string, position = point index.
    pub fn table_string(&self) -> String {
        (0..self.len())
            .map(|x| if self.get(x) { '1' } else { '0' })
            .collect()
    }

    /// Serializes to the two-line truth-table text format.
    pub fn to_text(&self) -> String {
        format!("n={}\n{}\n", self.n, self.table_string())
    }

    /// Parses the truth-table text format: `n=<k>` then `2^k` characters from `{0,1}`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let n = parse_header_line(&mut lines)?;
        let mut out = Self::zeros(n)?;
        let mut filled = 0usize;
        for (ln, line) in lines {
            for (col, ch) in line.char_indices() {
                match ch {
                    '0' | '1' => {
                        if filled >= out.len() {
                            return Err(Error::parse(
                                ln + 1,
                                col + 1,
                                format!("table longer than 2^{n} entries"),
                            ));
                        }
                        out.set(filled, ch == '1');
                        filled += 1;
                    }
                    c if c.is_whitespace() => {}
                    c => {
                        return Err(Error::parse(
                            ln + 1,
                            col + 1,
                            format!("unexpected character {c:?} in truth table"),
                        ))
                    }
                }
            }
        }
        if filled != out.len() {
            return Err(Error::parse(
                2,
                filled + 1,
                format!("truth table has {filled} entries, expected {}", out.len()),
            ));
        }
        Ok(out)
    }
}

fn permutation_bits(n: usize, perm: &[usize]) -> Result<Vec<usize>> {
    if perm.len() != n {
        return Err(Error::DimensionMismatch {
            left: perm.len(),
            right: n,
        });
    }
    let mut seen = vec![false; n];
    let mut bits = Vec::with_capacity(n);
    for &p in perm {
        let b = coord_bit(n, p)?;
        if seen[b] {
            return Err(Error::Domain(format!("{perm:?} is not a permutation")));
        }
        seen[b] = true;
        bits.push(b);
    }
    Ok(bits)
}

fn relabel_index(y: usize, bits: &[usize]) -> usize {
    bits.iter()
        .enumerate()
        .filter(|(b, _)| y >> b & 1 == 1)
        .fold(0, |x, (_, &target)| x | 1 << target)
}

fn parse_header_line<'a, I: Iterator<Item = (usize, &'a str)>>(lines: &mut I) -> Result<usize> {
    for (ln, line) in lines.by_ref() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        return parse_dim_token(trimmed, ln + 1, line.len() - line.trim_start().len() + 1);
    }
    Err(Error::parse(1, 1, "missing header line `n=<k>`"))
}

/// Parses `n=<k>` and checks the dimension cap.
pub(crate) fn parse_dim_token(token: &str, line: usize, column: usize) -> Result<usize> {
    let value = token
        .strip_prefix("n=")
        .ok_or_else(|| Error::parse(line, column, format!("expected `n=<k>`, found {token:?}")))?;
    let n: usize = value
        .parse()
        .map_err(|_| Error::parse(line, column + 2, format!("invalid dimension {value:?}")))?;
    check_dim(n)?;
    Ok(n)
}

/// A real-valued function on the cube.
#[derive(Debug, Clone, PartialEq)]
pub struct RealCubeFunction {
    n: usize,
    values: Vec<f64>,
}

impl RealCubeFunction {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        check_dim(n)?;
        if values.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                left: values.len(),
                right: 1 << n,
            });
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite value at index {pos}")));
        }
        Ok(Self { n, values })
    }

    pub fn from_fn<F: FnMut(usize) -> f64>(n: usize, f: F) -> Result<Self> {
        check_dim(n)?;
        Self::new(n, (0..1usize << n).map(f).collect())
    }

    pub fn constant(n: usize, c: f64) -> Result<Self> {
        Self::from_fn(n, |_| c)
    }

    /// Walsh character `χ_S(x) = Π_{i∈S} x_i`, `S` given as a bit mask.
    pub fn character(n: usize, mask: usize) -> Result<Self> {
        Self::from_fn(n, |x| {
            // bits of S where x_i = -1 flip the sign
            if (mask & !x).count_ones().is_multiple_of(2) {
                1.0
            } else {
                -1.0
            }
        })
    }

    /// Unchecked constructor for values produced by internal arithmetic.
    pub(crate) fn from_raw(n: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), 1 << n);
        Self { n, values }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scale(&self, a: f64) -> Self {
        Self::from_raw(self.n, self.values.iter().map(|v| a * v).collect())
    }

    pub fn mean(&self) -> f64 {
        numeric::sum(self.values.iter().copied()) / self.len() as f64
    }

    /// `∫ f² dμ - (∫ f dμ)²`, clamped at zero.
    pub fn variance(&self) -> f64 {
        let m = self.mean();
        let centered = numeric::sum(self.values.iter().map(|v| (v - m) * (v - m)));
        (centered / self.len() as f64).max(0.0)
    }

    pub fn is_constant(&self) -> bool {
        self.values.iter().all(|&v| v == self.values[0])
    }

    /// `(D_i f)(x) = f(τ_i x) - f(x)`.
    pub fn discrete_derivative(&self, i: usize) -> Result<Self> {
        let bit = coord_bit(self.n, i)?;
        let mask = 1usize << bit;
        Ok(Self::from_raw(
            self.n,
            (0..self.len())
                .map(|x| self.values[x ^ mask] - self.values[x])
                .collect(),
        ))
    }

    /// `D_i D_j f`. For `i != j` this is the four-term difference
    /// `f(x) - f(τ_i x) - f(τ_j x) + f(τ_ij x)`; for `i == j` it is `-2 D_i f`.
    pub fn second_derivative(&self, i: usize, j: usize) -> Result<Self> {
        self.discrete_derivative(j)?.discrete_derivative(i)
    }

    /// `‖g‖_p = (2^-n Σ |g|^p)^(1/p)` for `p ≥ 1`.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        if !(p >= 1.0) || p.is_nan() {
            return Err(Error::Domain(format!("p-norm requires p >= 1, got {p}")));
        }
        Ok(lp_norm_of(&self.values, p))
    }

    /// Pointwise sum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    fn zip_with(&self, other: &Self, op: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(Self::from_raw(
            self.n,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        ))
    }

    /// Largest pointwise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// Same relabeling convention as [`BooleanFunction::relabel`].
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let bits = permutation_bits(self.n, perm)?;
        let mut out = vec![0.0; self.len()];
        for (y, &v) in self.values.iter().enumerate() {
            out[relabel_index(y, &bits)] = v;
        }
        Ok(Self::from_raw(self.n, out))
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("n={}\n", self.n);
        for (k, v) in self.values.iter().enumerate() {
            if k > 0 {
                s.push(if k % 8 == 0 { '\n' } else { ' ' });
            }
            s.push_str(&v.to_string());
        }
        s.push('\n');
        s
    }

    /// Parses `n=<k>` followed by `2^k` whitespace-separated reals.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let n = parse_header_line(&mut lines)?;
        let mut values = Vec::with_capacity(1 << n);
        let mut last_line = 1;
        for (ln, line) in lines {
            last_line = ln + 1;
            let mut rest = line;
            let mut offset = 0;
            while let Some(start) = rest.find(|c: char| !c.is_whitespace()) {
                let tail = &rest[start..];
                let end = tail.find(char::is_whitespace).unwrap_or(tail.len());
                let token = &tail[..end];
                let col = offset + start + 1;
                let v: f64 = token.parse().map_err(|_| {
                    Error::parse(ln + 1, col, format!("invalid real {token:?}"))
                })?;
                if !v.is_finite() {
                    return Err(Error::parse(ln + 1, col, "non-finite value"));
                }
                if values.len() == 1 << n {
                    return Err(Error::parse(ln + 1, col, "too many values"));
                }
                values.push(v);
                offset += start + end;
                rest = &tail[end..];
            }
        }
        if values.len() != 1 << n {
            return Err(Error::parse(
                last_line,
                1,
                format!("expected {} values, found {}", 1usize << n, values.len()),
            ));
        }
        Ok(Self::from_raw(n, values))
    }
}

pub(crate) fn lp_norm_of(values: &[f64], p: f64) -> f64 {
    let mut acc = CompensatedSum::new();
    if p == 1.0 {
        values.iter().for_each(|v| acc.add(v.abs()));
        acc.value() / values.len() as f64
    } else if p == 2.0 {
        values.iter().for_each(|v| acc.add(v * v));
        (acc.value() / values.len() as f64).sqrt()
    } else {
        values.iter().for_each(|v| acc.add(v.abs().powf(p)));
        (acc.value() / values.len() as f64).powf(1.0 / p)
    }
}

/// First-order influences and the symmetric matrix of pair influences.
#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceProfile {
    n: usize,
    first: Vec<f64>,
    pair: Vec<f64>,
}

impl InfluenceProfile {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// `I_i` for `i = 1..=n`, stored 0-based.
    pub fn first(&self) -> &[f64] {
        &self.first
    }

    /// `I_(i,j)` with 1-based coordinates.
    pub fn pair(&self, i: usize, j: usize) -> Result<f64> {
        let a = coord_bit(self.n, i)?;
        let b = coord_bit(self.n, j)?;
        Ok(self.pair[a * self.n + b])
    }

    /// Row-major `n × n` pair matrix.
    pub fn pair_matrix(&self) -> Vec<Vec<f64>> {
        self.pair.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    pub fn max_influence(&self) -> f64 {
        self.first.iter().copied().fold(0.0, f64::max)
    }

    /// Largest `I_(i,j)` over `i != j` (0 when `n = 1`).
    pub fn max_pair_influence(&self) -> f64 {
        let n = self.n;
        (0..n)
            .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
            .map(|(a, b)| self.pair[a * n + b])
            .fold(0.0, f64::max)
    }
}
