//! `key = value` configuration with `#` comments. Later sources override
//! earlier ones: defaults, then the config file, then command-line flags.

use std::path::{Path, PathBuf};

use morphtag::hmm::{Smoothing, DEFAULT_SENTENCE_CAP};
use morphtag::lexicon::DEFAULT_CANDIDATE_CAP;
use morphtag::tbl::LearnOptions;

use crate::CliError;

pub const KEYS: &[&str] = &[
    "dict",
    "conn",
    "projection",
    "model",
    "rules",
    "lambda_trans",
    "lambda_emit",
    "unk_mass",
    "unseen_count",
    "candidate_cap",
    "sentence_cap",
    "min_score",
    "max_rules",
    "max_iters",
    "tol",
    "split",
    "seed",
];

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub dict: Option<PathBuf>,
    pub conn: Option<PathBuf>,
    pub projection: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub rules: Option<PathBuf>,
    pub smoothing: Smoothing,
    pub candidate_cap: usize,
    pub sentence_cap: usize,
    pub learn: LearnOptions,
    pub max_iters: usize,
    pub tol: f64,
    pub split: (f64, f64, f64),
    pub seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            dict: None,
            conn: None,
            projection: None,
            model: None,
            rules: None,
            smoothing: Smoothing::default(),
            candidate_cap: DEFAULT_CANDIDATE_CAP,
            sentence_cap: DEFAULT_SENTENCE_CAP,
            learn: LearnOptions::default(),
            max_iters: 20,
            tol: 1e-6,
            split: (0.70, 0.15, 0.15),
            seed: 0,
        }
    }
}

/// Parses config text into ordered key/value pairs, rejecting unknown keys.
pub fn parse_pairs(text: &str, source: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::format(format!("{}:{}: expected key = value", source, i + 1))
        })?;
        let (k, v) = (k.trim(), v.trim());
        if !KEYS.contains(&k) {
            return Err(CliError::format(format!(
                "{}:{}: unknown key {:?}",
                source,
                i + 1,
                k
            )));
        }
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, String> {
    v.parse()
        .map_err(|_| format!("bad value {:?} for {}", v, key))
}

impl PipelineConfig {
    /// Builds a config from an optional file plus overrides (already
    /// validated key names). File problems are format errors, override
    /// problems usage errors.
    pub fn load(
        file: Option<&Path>,
        overrides: &[(String, String)],
    ) -> Result<PipelineConfig, CliError> {
        let mut cfg = PipelineConfig::default();
        if let Some(path) = file {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::usage(format!("cannot read config {}: {}", path.display(), e))
            })?;
            let source = path.display().to_string();
            for (k, v) in parse_pairs(&text, &source)? {
                cfg.set(&k, &v)
                    .map_err(|m| CliError::format(format!("{}: {}", source, m)))?;
            }
        }
        for (k, v) in overrides {
            cfg.set(k, v).map_err(CliError::usage)?;
        }
        cfg.check().map_err(CliError::usage)?;
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, v: &str) -> Result<(), String> {
        match key {
            "dict" => self.dict = Some(v.into()),
            "conn" => self.conn = Some(v.into()),
            "projection" => self.projection = Some(v.into()),
            "model" => self.model = Some(v.into()),
            "rules" => self.rules = Some(v.into()),
            "lambda_trans" => self.smoothing.lambda_trans = num(key, v)?,
            "lambda_emit" => self.smoothing.lambda_emit = num(key, v)?,
            "unk_mass" => self.smoothing.unk_mass = num(key, v)?,
            "unseen_count" => self.smoothing.unseen_count = num(key, v)?,
            "candidate_cap" => self.candidate_cap = num(key, v)?,
            "sentence_cap" => self.sentence_cap = num(key, v)?,
            "min_score" => self.learn.min_score = num(key, v)?,
            "max_rules" => self.learn.max_rules = num(key, v)?,
            "max_iters" => self.max_iters = num(key, v)?,
            "tol" => self.tol = num(key, v)?,
            "seed" => self.seed = num(key, v)?,
            "split" => {
                let parts: Vec<f64> = v
                    .split(',')
                    .map(|p| num::<f64>(key, p.trim()))
                    .collect::<Result<_, _>>()?;
                let [a, b, c] = parts[..] else {
                    return Err(format!("split needs three fractions, got {:?}", v));
                };
                self.split = (a, b, c);
            }
            _ => return Err(format!("unknown key {:?}", key)),
        }
        Ok(())
    }

    fn check(&self) -> Result<(), String> {
        self.smoothing.validate().map_err(|e| e.to_string())?;
        if self.candidate_cap == 0 || self.sentence_cap == 0 {
            return Err("caps must be at least 1".into());
        }
        if self.learn.min_score < 1 {
            return Err("min_score must be at least 1".into());
        }
        if self.max_iters == 0 {
            return Err("max_iters must be at least 1".into());
        }
        if !(self.tol > 0.0) {
            return Err("tol must be positive".into());
        }
        Ok(())
    }
}

/// Resolves a required path setting and checks that the file exists.
pub fn existing(value: &Option<PathBuf>, key: &str) -> Result<PathBuf, CliError> {
    let p = value.clone().ok_or_else(|| {
        CliError::usage(format!(
            "missing setting `{}` (config key or --{})",
            key, key
        ))
    })?;
    if !p.is_file() {
        return Err(CliError::usage(format!(
            "{} file {} does not exist",
            key,
            p.display()
        )));
    }
    Ok(p)
}

pub fn existing_path(p: &Path) -> Result<PathBuf, CliError> {
    if !p.is_file() {
        return Err(CliError::usage(format!(
            "file {} does not exist",
            p.display()
        )));
    }
    Ok(p.to_path_buf())
}

/// Parses `KEY=VALUE` overrides.
pub fn parse_override(s: &str) -> Result<(String, String), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected KEY=VALUE, got {:?}", s))?;
    let k = k.trim();
    if !KEYS.contains(&k) {
        return Err(format!(
            "unknown key {:?}; known keys: {}",
            k,
            KEYS.join(", ")
        ));
    }
    Ok((k.to_string(), v.trim().to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_overrides() {
        let pairs = parse_pairs(
            "# c\nseed = 4  # trailing\nsplit=0.8, 0.1,0.1\n\nmin_score = 3\n",
            "t",
        )
        .unwrap();
        let mut cfg = PipelineConfig::default();
        for (k, v) in &pairs {
            cfg.set(k, v).unwrap();
        }
        assert_eq!(cfg.seed, 4);
        assert_eq!(cfg.split, (0.8, 0.1, 0.1));
        assert_eq!(cfg.learn.min_score, 3);
        cfg.set("seed", "9").unwrap();
        assert_eq!(cfg.seed, 9);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_pairs("nope = 1\n", "t").is_err());
        assert!(parse_pairs("seed 1\n", "t").is_err());
        assert!(PipelineConfig::default().set("seed", "x").is_err());
        assert!(PipelineConfig::default().set("split", "0.5,0.5").is_err());
        assert!(parse_override("max_iters=0").is_ok());
        assert!(PipelineConfig::load(None, &[("max_iters".into(), "0".into())]).is_err());
    }
}
