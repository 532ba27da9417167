//! `key = value` configuration files.
//!
//! ```text
//! # working precision M (p-adic digits)
//! precision = 12
//! residue_degree = 2
//! caveat_disk_exponent = 1
//! exclude_ap = p^2, 3*p^(3/2)
//! ```
//!
//! Blank lines and `#` comments are ignored; flags override file values.

use crate::engine::{EngineConfig, ExcludedAp};
use crate::error::{Error, Result};

use super::ap::parse_ap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub precision: u32,
    pub residue_degree: usize,
    pub engine: EngineConfig,
}

impl Default for Config {
    fn default() -> Self {
        Config { precision: 12, residue_degree: 2, engine: EngineConfig::default() }
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Config::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: String| Error::InvalidInput(format!("config line {}: {msg}", lineno + 1));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key = value, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let number = |v: &str| v.parse::<u64>().map_err(|_| bad(format!("`{v}` is not a number")));
            match key {
                "precision" => cfg.precision = number(value)? as u32,
                "residue_degree" => cfg.residue_degree = number(value)? as usize,
                "caveat_disk_exponent" => cfg.engine.caveat_disk_exponent = number(value)? as u32,
                "exclude_ap" => {
                    cfg.engine.excluded.clear();
                    for item in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                        let (coeff, twice_exponent) = parse_ap(item)?
                            .as_monomial()
                            .ok_or_else(|| bad(format!("`{item}` is not of the form c*p^e")))?;
                        cfg.engine.excluded.push(ExcludedAp { coeff, twice_exponent });
                    }
                }
                "strict" => cfg.engine.strict = matches!(value, "true" | "1" | "yes"),
                _ => return Err(bad(format!("unknown key `{key}`"))),
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_keys() {
        let cfg = Config::parse(
            "# sample\nprecision = 8\nresidue_degree=1\ncaveat_disk_exponent = 2\nexclude_ap = p^2, 3*p^(3/2)\n",
        )
        .unwrap();
        assert_eq!(cfg.precision, 8);
        assert_eq!(cfg.residue_degree, 1);
        assert_eq!(cfg.engine.caveat_disk_exponent, 2);
        assert_eq!(
            cfg.engine.excluded,
            vec![ExcludedAp { coeff: 1, twice_exponent: 4 }, ExcludedAp { coeff: 3, twice_exponent: 3 }]
        );
        assert!(Config::parse("nonsense = 1").is_err());
        assert!(Config::parse("precision").is_err());
        assert_eq!(Config::parse("").unwrap(), Config::default());
    }
}
