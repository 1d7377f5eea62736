//! Run configuration: a flat `key=value` file, overridden by flags.

use std::fmt;
use std::fs;
use std::path::Path;

use drinfeld_core::{DegreePolicy, Fq, LaurentRing, PolyA};

/// Errors in the configuration are usage errors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub q: u32,
    pub ram: u32,
    pub prec: i64,
    /// Starting degree bound for lattice sums.
    pub degree: u32,
    pub degree_ceiling: u32,
    /// Number of `u`-coefficients.
    pub m_u: i64,
    /// Level, as ascending coefficient indices.
    pub level: String,
    pub seed: u64,
    /// Stable digits requested from lattice exponentials.
    pub digits: i64,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            q: 2,
            ram: 2,
            prec: 80,
            degree: 2,
            degree_ceiling: 24,
            m_u: 12,
            level: "1".into(),
            seed: 0,
            digits: 40,
        }
    }
}

/// Keys accepted in files and `--set`.
pub const KEYS: [&str; 11] = [
    "q",
    "p",
    "e0",
    "ram",
    "prec",
    "D",
    "D_ceiling",
    "m_u",
    "N",
    "seed",
    "digits",
];

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, ConfigError> {
    v.trim()
        .parse()
        .map_err(|_| ConfigError(format!("bad value for {key}: {v:?}")))
}

impl RunConfig {
    /// Applies one `key=value` setting. `p` and `e0` set `q = p^e0`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key.trim() {
            "q" => self.q = num(key, value)?,
            "p" => {
                let p: u32 = num(key, value)?;
                self.q = p
                    .checked_pow(prime_power(self.q).1)
                    .ok_or_else(|| ConfigError("field too large".into()))?;
            }
            "e0" => {
                let e: u32 = num(key, value)?;
                self.q = prime_power(self.q)
                    .0
                    .checked_pow(e)
                    .ok_or_else(|| ConfigError("field too large".into()))?;
            }
            "ram" => self.ram = num(key, value)?,
            "prec" => self.prec = num(key, value)?,
            "D" => self.degree = num(key, value)?,
            "D_ceiling" => self.degree_ceiling = num(key, value)?,
            "m_u" => self.m_u = num(key, value)?,
            "N" => self.level = value.trim().to_string(),
            "seed" => self.seed = num(key, value)?,
            "digits" => self.digits = num(key, value)?,
            other => return Err(ConfigError(format!("unknown configuration key {other:?}"))),
        }
        Ok(())
    }

    /// Reads `key=value` lines; `#` starts a comment.
    pub fn load(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        self.apply_text(&text)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| ConfigError(format!("line {}: expected key=value", n + 1)))?;
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.field()?;
        if self.ram == 0 {
            return Err(ConfigError("ram must be positive".into()));
        }
        if self.prec <= 0 || self.digits <= 0 || self.m_u <= 0 {
            return Err(ConfigError("prec, digits and m_u must be positive".into()));
        }
        if self.degree == 0 || self.degree > self.degree_ceiling {
            return Err(ConfigError("need 0 < D <= D_ceiling".into()));
        }
        let n = self.level_poly()?;
        if n.is_zero() {
            return Err(ConfigError("level N must be nonzero".into()));
        }
        Ok(())
    }

    pub fn field(&self) -> Result<Fq, ConfigError> {
        Fq::new(self.q).map_err(|e| ConfigError(e.to_string()))
    }

    pub fn level_poly(&self) -> Result<PolyA, ConfigError> {
        PolyA::parse(&self.field()?, &self.level).map_err(|e| ConfigError(format!("N: {e}")))
    }

    pub fn laurent(&self) -> Result<LaurentRing, ConfigError> {
        Ok(LaurentRing::new(self.field()?, self.ram, self.prec))
    }

    pub fn policy(&self) -> DegreePolicy {
        DegreePolicy {
            start: self.degree,
            ceiling: self.degree_ceiling,
        }
    }

    /// `(key, value)` pairs in a fixed order, for output headers.
    pub fn pairs(&self) -> Vec<(&'static str, String)> {
        let (p, e0) = prime_power(self.q);
        vec![
            ("q", self.q.to_string()),
            ("p", p.to_string()),
            ("e0", e0.to_string()),
            ("ram", self.ram.to_string()),
            ("prec", self.prec.to_string()),
            ("D", self.degree.to_string()),
            ("D_ceiling", self.degree_ceiling.to_string()),
            ("m_u", self.m_u.to_string()),
            ("N", format!("[{}]", self.level)),
            ("seed", self.seed.to_string()),
            ("digits", self.digits.to_string()),
        ]
    }
}

/// `(p, e)` with `p` the smallest prime factor and `p^e <= n` maximal.
fn prime_power(n: u32) -> (u32, u32) {
    let p = (2..=n.max(2)).find(|d| n % d == 0).unwrap_or(2);
    let mut e = 1;
    while p.checked_pow(e + 1).is_some_and(|x| x <= n) {
        e += 1;
    }
    (p, e)
}
