//! Named Boolean function families and their closed-form quantities.
//!
//! Randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64`; a table entry is drawn as `(next_u64() >> 11) · 2^-53 < p`
//! in increasing point order, so tables are reproducible across platforms.

use std::fmt;
use std::str::FromStr;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::cube::{self, BooleanFunction, RealCubeFunction};
use crate::error::{Error, Result};

/// The generator behind every seeded routine in this crate.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform draw from `[0, 1)` with 53 bits of precision.
pub fn unit_f64(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// `f(x) = 1` iff `x_i = +1`.
pub fn dictator(n: usize, i: usize) -> Result<BooleanFunction> {
    cube::check_dim(n)?;
    let bit = cube::coord_bit(n, i)?;
    BooleanFunction::from_fn(n, |x| x >> bit & 1 == 1)
}

/// `f(x) = 1` iff `Π_{i∈S} x_i = -1`; `mask` bit `i-1` selects coordinate `i`.
pub fn parity(n: usize, mask: usize) -> Result<BooleanFunction> {
    cube::check_dim(n)?;
    if mask == 0 {
        return Err(Error::Domain("parity needs a nonempty subset".into()));
    }
    if mask >> n != 0 {
        return Err(Error::Domain(format!(
            "subset mask {mask:#x} uses coordinates beyond n={n}"
        )));
    }
    BooleanFunction::from_fn(n, |x| (mask & !x).count_ones() % 2 == 1)
}

/// `f(x) = 1` iff `Σ x_i > 0`, for odd `n`.
pub fn majority(n: usize) -> Result<BooleanFunction> {
    cube::check_dim(n)?;
    if n.is_multiple_of(2) {
        return Err(Error::Domain(format!("majority needs odd n, got {n}")));
    }
    BooleanFunction::from_fn(n, |x| 2 * x.count_ones() as usize > n)
}

/// Tribes on `n = k·m` coordinates: `f = 1` iff some block of `k` consecutive
/// coordinates is all `+1`.
pub fn tribes(k: usize, m: usize) -> Result<BooleanFunction> {
    tribes_padded(k, m, k.saturating_mul(m))
}

/// Tribes on the first `k·m` of `n` coordinates; the rest are dummies.
pub fn tribes_padded(k: usize, m: usize, n: usize) -> Result<BooleanFunction> {
    if k == 0 || m == 0 {
        return Err(Error::Domain("tribes needs k, m >= 1".into()));
    }
    let used = k.saturating_mul(m);
    if used > cube::MAX_DIM {
        return Err(Error::Capacity {
            what: "tribes dimension k*m",
            requested: used,
            limit: cube::MAX_DIM,
        });
    }
    if n < used {
        return Err(Error::Domain(format!(
            "tribes({k},{m}) needs n >= {used}, got {n}"
        )));
    }
    cube::check_dim(n)?;
    let block = (1usize << k) - 1;
    BooleanFunction::from_fn(n, |x| {
        (0..m).any(|b| {
            let mask = block << (b * k);
            x & mask == mask
        })
    })
}

/// `E[tribes(k, m)] = 1 - (1 - 2^-k)^m`.
pub fn tribes_mean(k: usize, m: usize) -> f64 {
    1.0 - (1.0 - 0.5f64.powi(k as i32)).powf(m as f64)
}

/// Block size `k` and block count `m` that make tribes closest to balanced.
///
/// Candidates are all `k ≥ 1` and `1 ≤ m ≤ ⌊n/k⌋` using at least half of the
/// coordinates (`2·k·m ≥ n`); the remaining coordinates are dummies. Ties go
/// to the smaller `k`, then the larger `m`.
pub fn tribes_auto_params(n: usize) -> Result<(usize, usize)> {
    if n < 4 {
        return Err(Error::Domain(format!("tribes-auto needs n >= 4, got {n}")));
    }
    let mut best = (f64::INFINITY, 0, 0);
    for k in 1..=n.min(63) {
        for m in (1..=n / k).rev() {
            if 2 * k * m < n {
                break;
            }
            let gap = (tribes_mean(k, m) - 0.5).abs();
            if gap < best.0 {
                best = (gap, k, m);
            }
        }
    }
    Ok((best.1, best.2))
}

/// Balanced tribes on `n` coordinates with unused coordinates as dummies.
pub fn tribes_auto(n: usize) -> Result<(BooleanFunction, usize, usize)> {
    let (k, m) = tribes_auto_params(n)?;
    Ok((tribes_padded(k, m, n)?, k, m))
}

/// Exact influence of any coordinate of `tribes(k, m)`:
/// `2^-(k-1) (1 - 2^-k)^(m-1)`.
pub fn tribes_influence_closed_form(k: usize, m: usize) -> f64 {
    0.5f64.powi(k as i32 - 1) * (1.0 - 0.5f64.powi(k as i32)).powf(m as f64 - 1.0)
}

/// I.i.d. Bernoulli(`p`) truth table.
pub fn random_boolean(n: usize, p: f64, seed: u64) -> Result<BooleanFunction> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("density must lie in [0, 1], got {p}")));
    }
    let mut r = rng(seed);
    BooleanFunction::from_fn(n, |_| unit_f64(&mut r) < p)
}

/// Real table with i.i.d. entries uniform on `[-1, 1)`.
pub fn random_real(n: usize, seed: u64) -> Result<RealCubeFunction> {
    let mut r = rng(seed);
    RealCubeFunction::from_fn(n, |_| 2.0 * unit_f64(&mut r) - 1.0)
}

/// A family specification as accepted on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Dictator { i: usize },
    Parity { mask: usize },
    Majority,
    Tribes { k: usize, m: usize },
    TribesAuto,
    Random { p: f64, seed: u64 },
}

impl Family {
    /// Whether building needs an explicit dimension.
    pub fn needs_dim(&self) -> bool {
        !matches!(self, Family::Tribes { .. })
    }

    /// Instantiates the family. `n` is required except for tribes, where it
    /// defaults to `k·m` and larger values add dummy coordinates.
    pub fn build(&self, n: Option<usize>) -> Result<BooleanFunction> {
        let need = |n: Option<usize>| {
            n.ok_or_else(|| Error::Parameter(format!("family `{self}` needs a dimension n")))
        };
        match *self {
            Family::Dictator { i } => dictator(need(n)?, i),
            Family::Parity { mask } => parity(need(n)?, mask),
            Family::Majority => majority(need(n)?),
            Family::Tribes { k, m } => tribes_padded(k, m, n.unwrap_or(k.saturating_mul(m))),
            Family::TribesAuto => tribes_auto(need(n)?).map(|(f, _, _)| f),
            Family::Random { p, seed } => random_boolean(need(n)?, p, seed),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Dictator { i } => write!(f, "dictator:i={i}"),
            Family::Parity { mask } => write!(f, "parity:S={mask:#x}"),
            Family::Majority => write!(f, "majority"),
            Family::Tribes { k, m } => write!(f, "tribes:k={k},m={m}"),
            Family::TribesAuto => write!(f, "tribes-auto"),
            Family::Random { p, seed } => write!(f, "random:p={p},seed={seed}"),
        }
    }
}

struct SpecArgs<'a> {
    pairs: Vec<(&'a str, &'a str, usize)>,
}

impl<'a> SpecArgs<'a> {
    fn parse(args: &'a str, offset: usize) -> Result<Self> {
        let mut pairs = Vec::new();
        let mut col = offset;
        for part in args.split(',') {
            let Some((key, value)) = part.split_once('=') else {
                return Err(Error::parse(1, col + 1, format!("expected key=value, found {part:?}")));
            };
            if value.is_empty() {
                return Err(Error::parse(
                    1,
                    col + key.len() + 2,
                    format!("missing value for `{key}`"),
                ));
            }
            pairs.push((key, value, col + key.len() + 2));
            col += part.len() + 1;
        }
        Ok(Self { pairs })
    }

    fn take<T: FromStr>(&mut self, key: &str, default: Option<T>) -> Result<T> {
        match self.pairs.iter().position(|(k, _, _)| *k == key) {
            Some(pos) => {
                let (_, value, col) = self.pairs.remove(pos);
                parse_value(value, col)
            }
            None => default.ok_or_else(|| Error::parse(1, 1, format!("missing parameter `{key}`"))),
        }
    }

    fn finish(self) -> Result<()> {
        match self.pairs.first() {
            Some((key, _, col)) => Err(Error::parse(
                1,
                col - key.len() - 1,
                format!("unknown parameter `{key}`"),
            )),
            None => Ok(()),
        }
    }
}

fn parse_value<T: FromStr>(value: &str, col: usize) -> Result<T> {
    let parsed = if let Some(hex) = value.strip_prefix("0x") {
        u64::from_str_radix(hex, 16)
            .ok()
            .and_then(|v| v.to_string().parse().ok())
    } else {
        value.parse().ok()
    };
    parsed.ok_or_else(|| Error::parse(1, col, format!("invalid value {value:?}")))
}

impl FromStr for Family {
    type Err = Error;

    /// Parses `dictator:i=1`, `parity:S=0x3`, `tribes:k=2,m=2`, `tribes-auto`,
    /// `majority`, `random:p=0.5,seed=7`.
    fn from_str(spec: &str) -> Result<Self> {
        let (name, args) = match spec.split_once(':') {
            Some((name, args)) => (name, Some(args)),
            None => (spec, None),
        };
        let offset = name.len() + 1;
        let mut args = match args {
            Some(a) => SpecArgs::parse(a, offset)?,
            None => SpecArgs { pairs: Vec::new() },
        };
        let family = match name {
            "dictator" => Family::Dictator {
                i: args.take("i", Some(1))?,
            },
            "parity" => Family::Parity {
                mask: args.take("S", None)?,
            },
            "majority" => Family::Majority,
            "tribes" => Family::Tribes {
                k: args.take("k", None)?,
                m: args.take("m", None)?,
            },
            "tribes-auto" => Family::TribesAuto,
            "random" => Family::Random {
                p: args.take("p", Some(0.5))?,
                seed: args.take("seed", Some(0))?,
            },
            other => {
                return Err(Error::parse(1, 1, format!("unknown family {other:?}")));
            }
        };
        args.finish()?;
        Ok(family)
    }
}

/// A labelled function from the standard zoo.
#[derive(Debug, Clone)]
pub struct ZooEntry {
    pub label: String,
    pub function: BooleanFunction,
}

/// Standard families with dimension at most `n_max`: dictators, parities,
/// odd majorities, every tribes(k, m) with `k·m ≤ n_max`, and balanced tribes.
pub fn standard_zoo(n_max: usize) -> Result<Vec<ZooEntry>> {
    let n_max = n_max.min(cube::MAX_DIM);
    let mut out = Vec::new();
    let mut push = |label: String, function: BooleanFunction| {
        out.push(ZooEntry { label, function });
    };
    for n in 1..=n_max {
        push(format!("dictator:i=1 n={n}"), dictator(n, 1)?);
        if n > 1 {
            push(format!("dictator:i={n} n={n}"), dictator(n, n)?);
            push(format!("parity:S={:#x} n={n}", (1usize << n) - 1), parity(n, (1 << n) - 1)?);
            push(format!("parity:S=0x3 n={n}"), parity(n, 0b11)?);
        }
        if n % 2 == 1 {
            push(format!("majority n={n}"), majority(n)?);
        }
        if n >= 4 {
            let (f, k, m) = tribes_auto(n)?;
            push(format!("tribes-auto n={n} (k={k},m={m})"), f);
        }
    }
    for k in 1..=n_max {
        for m in 1..=n_max / k {
            if k * m >= 2 {
                push(format!("tribes:k={k},m={m}"), tribes(k, m)?);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dictator_table() {
        let f = dictator(2, 1).unwrap();
        assert_eq!(f.table_string(), "0101");
        assert_eq!(f.influence(1).unwrap(), 1.0);
        assert_eq!(f.variance(), 0.25);
        assert!(dictator(2, 3).is_err());
    }

    #[test]
    fn parity_table_and_spectrum() {
        let f = parity(2, 0b11).unwrap();
        assert_eq!(f.table_string(), "0110");
        let g = parity(4, 0b0101).unwrap();
        assert_eq!(g.influence(1).unwrap(), 1.0);
        assert_eq!(g.influence(3).unwrap(), 1.0);
        assert_eq!(g.influence(2).unwrap(), 0.0);
        let sp = crate::spectral::fwht(&g.to_real());
        for (s, c) in sp.coefficients().iter().enumerate() {
            if s != 0 && s != 0b0101 {
                assert_eq!(*c, 0.0);
            }
        }
        assert!(parity(3, 0).is_err());
        assert!(parity(2, 0b100).is_err());
    }

    #[test]
    fn majority_three() {
        let f = majority(3).unwrap();
        let p = f.influence_profile();
        assert_eq!(p.first(), &[0.5, 0.5, 0.5]);
        assert_eq!(f.variance(), 0.25);
        assert!(majority(4).is_err());
    }

    #[test]
    fn tribes_two_by_two() {
        let f = tribes(2, 2).unwrap();
        assert_eq!(f.mean(), 7.0 / 16.0);
        assert_eq!(f.variance(), 63.0 / 256.0);
        for i in 1..=4 {
            assert_eq!(f.influence(i).unwrap(), 0.375);
        }
        assert_eq!(tribes_influence_closed_form(2, 2), 0.375);
        assert_eq!(tribes_mean(2, 2), 7.0 / 16.0);
    }

    #[test]
    fn tribes_degenerate_shapes() {
        // k = 1 is OR, m = 1 is AND.
        let or = tribes(1, 5).unwrap();
        assert_eq!(or.influence(3).unwrap(), 1.0 / 16.0);
        assert_eq!(tribes_influence_closed_form(1, 5), 1.0 / 16.0);
        let and = tribes(4, 1).unwrap();
        assert_eq!(and.influence(2).unwrap(), 1.0 / 8.0);
        assert_eq!(tribes_influence_closed_form(4, 1), 1.0 / 8.0);
        assert!(matches!(tribes(5, 5), Err(Error::Capacity { .. })));
    }

    #[test]
    fn tribes_auto_choice() {
        let (k, m) = tribes_auto_params(16).unwrap();
        assert!(k == 3 || k == 4);
        for cand in 1..=16 {
            assert!((tribes_mean(k, m) - 0.5).abs() <= (tribes_mean(cand, 16 / cand) - 0.5).abs());
        }
        for e in 6..=20 {
            let (k, m) = tribes_auto_params(1 << e).unwrap();
            assert!((tribes_mean(k, m) - 0.5).abs() <= 0.1, "n=2^{e}");
        }
        let (f, k, m) = tribes_auto(7).unwrap();
        assert_eq!((k, m), (2, 2));
        assert_eq!(f.influence(7).unwrap(), 0.0);
        assert!(tribes_auto_params(3).is_err());
    }

    #[test]
    fn random_tables_are_reproducible() {
        let a = random_boolean(10, 0.5, 7).unwrap();
        assert_eq!(a, random_boolean(10, 0.5, 7).unwrap());
        assert_ne!(a, random_boolean(10, 0.5, 8).unwrap());
        assert!((a.mean() - 0.5).abs() < 0.05);
        assert_eq!(random_boolean(6, 0.0, 1).unwrap().weight(), 0);
        assert_eq!(random_boolean(6, 1.0, 1).unwrap().weight(), 64);
        assert!(random_boolean(6, 1.5, 1).is_err());
    }

    #[test]
    fn family_specs() {
        assert_eq!("dictator:i=1".parse::<Family>().unwrap(), Family::Dictator { i: 1 });
        assert_eq!("parity:S=0x3".parse::<Family>().unwrap(), Family::Parity { mask: 3 });
        assert_eq!(
            "tribes:k=2,m=2".parse::<Family>().unwrap(),
            Family::Tribes { k: 2, m: 2 }
        );
        assert_eq!("tribes-auto".parse::<Family>().unwrap(), Family::TribesAuto);
        assert_eq!("majority".parse::<Family>().unwrap(), Family::Majority);
        assert_eq!(
            "random:p=0.5,seed=7".parse::<Family>().unwrap(),
            Family::Random { p: 0.5, seed: 7 }
        );
        for spec in ["dictator:i=1", "parity:S=0x3", "tribes:k=2,m=2", "random:p=0.5,seed=7"] {
            let f: Family = spec.parse().unwrap();
            assert_eq!(f.to_string(), spec);
        }
    }

    #[test]
    fn malformed_specs_report_columns() {
        let err = "tribes:k=".parse::<Family>().unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 1,
                column: 10,
                message: "missing value for `k`".into()
            }
        );
        assert!(matches!("tribes:k=2".parse::<Family>(), Err(Error::Parse { .. })));
        assert!(matches!("wombat".parse::<Family>(), Err(Error::Parse { .. })));
        assert!(matches!(
            "dictator:i=1,j=2".parse::<Family>(),
            Err(Error::Parse { column: 14, .. })
        ));
        assert!(matches!("dictator:i=x".parse::<Family>(), Err(Error::Parse { column: 12, .. })));
    }

    #[test]
    fn family_build() {
        let f = Family::Tribes { k: 2, m: 2 }.build(None).unwrap();
        assert_eq!(f.dim(), 4);
        assert!(Family::Majority.build(None).is_err());
        assert_eq!(Family::Majority.build(Some(5)).unwrap().dim(), 5);
    }

    #[test]
    fn zoo_is_nonempty_and_within_cap() {
        let zoo = standard_zoo(6).unwrap();
        assert!(zoo.len() > 20);
        assert!(zoo.iter().all(|e| e.function.dim() <= 6));
    }
}
