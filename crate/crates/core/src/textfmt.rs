//! `key = value` text blocks used by the kernel specs and run configs.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::num::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    /// 1-based source line.
    pub line: usize,
    pub key: String,
    pub value: String,
}

impl Entry {
    pub fn parse<V: FromStr>(&self) -> Result<V> {
        self.value.parse::<V>().map_err(|_| Error::Parse {
            line: self.line,
            message: format!("invalid value `{}` for `{}`", self.value, self.key),
        })
    }

    pub fn parse_usize(&self) -> Result<usize> {
        self.parse()
    }

    pub fn parse_scalar<T: Scalar>(&self) -> Result<T> {
        let v: f64 = self.parse()?;
        T::from_f64(v).ok_or_else(|| Error::Parse {
            line: self.line,
            message: format!("`{}` not representable", self.value),
        })
    }
}

/// Parse `key = value` lines. Blank lines and `#` comments are skipped.
/// Keys are lowercased and `-` is normalized to `_`.
pub fn parse_key_values(text: &str) -> Result<Vec<Entry>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: i + 1,
            message: format!("expected `key = value`, got `{line}`"),
        })?;
        out.push(Entry {
            line: i + 1,
            key: key.trim().to_ascii_lowercase().replace('-', "_"),
            value: value.trim().to_string(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_skips_comments() {
        let e = parse_key_values("# header\n\nDelta = 1e-6  # nugget\nscheme=sobol:231\n").unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e[0].key, "delta");
        assert_eq!(e[0].line, 3);
        assert_eq!(e[0].parse_scalar::<f64>().unwrap(), 1e-6);
        assert_eq!(e[1].value, "sobol:231");
    }

    #[test]
    fn reports_line_of_bad_entry() {
        let err = parse_key_values("a = 1\nnonsense\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }
}
