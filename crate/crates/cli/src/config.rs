//! Session configuration files.
//!
//! ```json
//! {"N": 12, "group": {"free_rank": 0, "torsion": [12]}, "a": [4],
//!  "chi": {"free": [], "torsion_exp": [1]}}
//! ```
//! Free images may be cyclotomic expressions (`"2+z"`), integers, or the
//! `{"num", "den", "N"}` object form.

use std::path::Path;

use serde::Deserialize;

use hopfore::envelope::make_params;
use hopfore::hopfdata::HopfParams;
use hopfore::CycNum;

use crate::parse::parse_cyc;
use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(rename = "N")]
    pub n: u32,
    pub group: GroupConfig,
    pub a: Vec<i64>,
    pub chi: ChiConfig,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupConfig {
    pub free_rank: usize,
    #[serde(default)]
    pub torsion: Vec<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChiConfig {
    #[serde(default)]
    pub free: Vec<serde_json::Value>,
    #[serde(default, alias = "tor")]
    pub torsion_exp: Vec<i64>,
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn free_image(v: &serde_json::Value, n: u32) -> Result<CycNum, CliError> {
    match v {
        serde_json::Value::String(s) => parse_cyc(s, n).map_err(|e| config_err(format!("free image '{s}': {e}"))),
        serde_json::Value::Number(k) => k
            .as_i64()
            .map(|k| CycNum::from_int(n, k))
            .ok_or_else(|| config_err(format!("free image {k} is not an integer"))),
        serde_json::Value::Object(_) => {
            let c = CycNum::from_json(v).map_err(|e| config_err(e.to_string()))?;
            if c.order_n() != n {
                return Err(config_err("free image lives in a different cyclotomic field"));
            }
            Ok(c)
        }
        _ => Err(config_err("free images must be strings, integers or number objects")),
    }
}

impl ConfigFile {
    pub fn from_str(text: &str) -> Result<ConfigFile, CliError> {
        serde_json::from_str(text).map_err(|e| config_err(e.to_string()))
    }

    /// Validates the datum: χ(a) ≠ 1, torsion orders compatible with N, and
    /// s′ | lcm(2, N) when |χ| is finite.
    pub fn params(&self) -> Result<HopfParams, CliError> {
        if self.n == 0 {
            return Err(config_err("N must be positive"));
        }
        let free = self.chi.free.iter().map(|v| free_image(v, self.n)).collect::<Result<Vec<_>, _>>()?;
        make_params(self.n, self.group.free_rank, self.group.torsion.clone(), self.a.clone(), free, self.chi.torsion_exp.clone())
            .map_err(|e| config_err(e.to_string()))
    }
}

pub fn load_params(path: &Path) -> Result<HopfParams, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
    ConfigFile::from_str(&text)?.params()
}
