//! Plain-text defaults file: `key = value` per line, `#` starts a comment.
//! Keys are flag names without the leading dashes; flags always win.

use std::collections::BTreeMap;
use std::str::FromStr;

use cube_analysis::Error;

const KEYS: &[&str] = &[
    "family", "n", "n-min", "n-max", "step", "geometric", "s0", "metric", "budget", "seed",
    "format", "suite", "inequality",
];

#[derive(Debug, Clone)]
struct Entry {
    value: String,
    line: usize,
    column: usize,
}

#[derive(Debug, Default, Clone)]
pub struct Defaults {
    values: BTreeMap<String, Entry>,
}

impl Defaults {
    pub fn parse(text: &str) -> Result<Self, Error> {
        let mut values = BTreeMap::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                let col = raw.len() - raw.trim_start().len() + 1;
                return Err(parse_error(ln + 1, col, "expected key = value"));
            };
            let key_col = key.len() - key.trim_start().len() + 1;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(parse_error(ln + 1, key_col, &format!("unknown key `{key}`")));
            }
            let value_col = line.len() - value.trim_start().len() + 1;
            let entry = Entry {
                value: value.trim().to_string(),
                line: ln + 1,
                column: value_col,
            };
            values.insert(key.to_string(), entry);
        }
        Ok(Self { values })
    }

    /// `flag`, else the configured value, else `None`.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, Error> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.values.get(key) {
            None => Ok(None),
            Some(e) => e.value.parse().map(Some).map_err(|_| {
                let message = format!("invalid value {:?} for `{key}`", e.value);
                parse_error(e.line, e.column, &message)
            }),
        }
    }

    pub fn pick_or<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, Error> {
        Ok(self.pick(flag, key)?.unwrap_or(default))
    }
}

fn parse_error(line: usize, column: usize, message: &str) -> Error {
    Error::Parse {
        line,
        column,
        message: message.to_string(),
    }
}
