use crate::CliError;
use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subcommand {
    DpVerify,
    LearnPoint,
    CheckDrep,
    CheckPrep,
    Boost,
    Shrink,
    Extract,
    E3sat,
    Sanitize,
    Formulas,
}

impl Subcommand {
    pub const ALL: [Subcommand; 10] = [
        Subcommand::DpVerify,
        Subcommand::LearnPoint,
        Subcommand::CheckDrep,
        Subcommand::CheckPrep,
        Subcommand::Boost,
        Subcommand::Shrink,
        Subcommand::Extract,
        Subcommand::E3sat,
        Subcommand::Sanitize,
        Subcommand::Formulas,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Subcommand::DpVerify => "dp-verify",
            Subcommand::LearnPoint => "learn-point",
            Subcommand::CheckDrep => "check-drep",
            Subcommand::CheckPrep => "check-prep",
            Subcommand::Boost => "boost",
            Subcommand::Shrink => "shrink",
            Subcommand::Extract => "extract",
            Subcommand::E3sat => "e3sat",
            Subcommand::Sanitize => "sanitize",
            Subcommand::Formulas => "formulas",
        }
    }
}

impl fmt::Display for Subcommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Subcommand {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Subcommand::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Subcommand::ALL.iter().map(|c| c.name()).collect();
                CliError::Usage(format!(
                    "unknown subcommand `{s}` (expected one of {})",
                    names.join(", ")
                ))
            })
    }
}

/// Parameter keys accepted by `--param` and config files.
pub const PARAM_KEYS: [&str; 11] = [
    "alpha", "beta", "epsilon", "gamma", "d", "n", "m", "trials", "size", "k", "beta_hat",
];

/// Everything that determines a run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub subcommand: Subcommand,
    pub params: BTreeMap<String, f64>,
    pub master_seed: u64,
    pub jobs: usize,
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(subcommand: Subcommand) -> Self {
        Self {
            subcommand,
            params: BTreeMap::new(),
            master_seed: 0,
            jobs: 1,
            out: None,
        }
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }

    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs;
        self
    }

    /// Applies one `key=value` assignment. `seed`, `jobs` and `out` set the
    /// run options; every other key must be a known parameter.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let bad = |what: &str| CliError::Usage(format!("bad value `{value}` for `{key}`: {what}"));
        match key {
            "seed" => self.master_seed = value.parse().map_err(|_| bad("expected u64"))?,
            "jobs" => {
                self.jobs = value.parse().map_err(|_| bad("expected a positive integer"))?;
                if self.jobs == 0 {
                    return Err(bad("expected a positive integer"));
                }
            }
            "out" => self.out = Some(PathBuf::from(value)),
            k if PARAM_KEYS.contains(&k) => {
                let v: f64 = value.parse().map_err(|_| bad("expected a number"))?;
                if !v.is_finite() {
                    return Err(bad("expected a finite number"));
                }
                self.params.insert(k.to_string(), v);
            }
            _ => {
                return Err(CliError::Usage(format!(
                    "unknown key `{key}` (parameters: {})",
                    PARAM_KEYS.join(", ")
                )))
            }
        }
        Ok(())
    }

    pub fn set_assignment(&mut self, assignment: &str) -> Result<(), CliError> {
        let (k, v) = assignment
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("expected key=value, found `{assignment}`")))?;
        self.set(k.trim(), v.trim())
    }

    /// Reads `key=value` lines; blank lines and `#` comments are skipped.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        self.apply_text(&text)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<(), CliError> {
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            self.set_assignment(line)
                .map_err(|e| CliError::Usage(format!("config line {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn get(&self, key: &str, default: f64) -> f64 {
        self.params.get(key).copied().unwrap_or(default)
    }

    pub fn count(&self, key: &str, default: usize) -> Result<usize, CliError> {
        let v = self.get(key, default as f64);
        if v < 0.0 || v.fract() != 0.0 || v > u32::MAX as f64 {
            return Err(CliError::Usage(format!("`{key}` must be a non-negative integer, got {v}")));
        }
        Ok(v as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for c in Subcommand::ALL {
            assert_eq!(c.name().parse::<Subcommand>().unwrap(), c);
        }
        assert!("nope".parse::<Subcommand>().is_err());
    }

    #[test]
    fn file_then_flags() {
        let mut cfg = ExperimentConfig::new(Subcommand::Formulas);
        cfg.apply_text("# sweep\nalpha = 0.2\nseed=9\n\njobs=3\n").unwrap();
        cfg.set_assignment("alpha=0.1").unwrap();
        assert_eq!(cfg.get("alpha", 0.0), 0.1);
        assert_eq!(cfg.master_seed, 9);
        assert_eq!(cfg.jobs, 3);
        assert!(cfg.apply_text("colour=1").is_err());
        assert!(cfg.set_assignment("alpha").is_err());
        assert!(cfg.set("jobs", "0").is_err());
        assert!(cfg.set("beta", "nan").is_err());
    }

    #[test]
    fn counts_must_be_integers() {
        let cfg = ExperimentConfig::new(Subcommand::Boost).with_param("trials", 2.5);
        assert!(cfg.count("trials", 1).is_err());
        assert_eq!(cfg.count("m", 7).unwrap(), 7);
    }
}
