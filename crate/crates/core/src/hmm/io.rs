//! Text model format.
//!
//! ```text
//! HMM-BIGRAM v1
//! CONFIG
//! lambda_trans<TAB>0.1
//! ...
//! TAGS
//! <tag>                             one per line, inventory order
//! TRANS
//! <prev><TAB><tag><TAB><prob>       prev may be <s>
//! EMIT
//! <tag><TAB><lemma>/<tag><TAB><prob>
//! UNK
//! <tag><TAB><prob>                  unseen-morpheme mass per tag
//! ```
//! Probabilities are written as `%.12e`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::hmm::{HmmModel, Smoothing, BOS};
use crate::tagset::Tag;

pub const MODEL_HEADER: &str = "HMM-BIGRAM v1";

/// C-style `%.12e`: twelve fraction digits, signed exponent of at least two digits.
pub(crate) fn fmt_prob(p: f64) -> String {
    let s = format!("{:.12e}", p);
    let (mantissa, exp) = s.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{}e{}{:02}", mantissa, sign, exp.abs())
}

impl HmmModel {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let sm = self.smoothing();
        out.push_str(MODEL_HEADER);
        out.push('\n');
        out.push_str("CONFIG\n");
        let _ = writeln!(out, "lambda_trans\t{}", sm.lambda_trans);
        let _ = writeln!(out, "lambda_emit\t{}", sm.lambda_emit);
        let _ = writeln!(out, "unk_mass\t{}", sm.unk_mass);
        let _ = writeln!(out, "unseen_count\t{}", sm.unseen_count);
        let open: Vec<&str> = self
            .open_class()
            .iter()
            .map(|&t| self.tags()[t].as_str())
            .collect();
        let _ = writeln!(out, "open_class\t{}", open.join(" "));
        out.push_str("TAGS\n");
        for t in self.tags() {
            let _ = writeln!(out, "{}", t);
        }
        out.push_str("TRANS\n");
        for prev in std::iter::once(None).chain((0..self.n_tags()).map(Some)) {
            let name = prev.map_or(BOS, |p| self.tags()[p].as_str());
            for t in 0..self.n_tags() {
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}",
                    name,
                    self.tags()[t],
                    fmt_prob(self.trans(prev, t))
                );
            }
        }
        out.push_str("EMIT\n");
        for t in 0..self.n_tags() {
            let tag = &self.tags()[t];
            for (lemma, p) in self.emission_row(t) {
                let _ = writeln!(out, "{}\t{}/{}\t{}", tag, lemma, tag, fmt_prob(*p));
            }
        }
        out.push_str("UNK\n");
        for t in 0..self.n_tags() {
            let _ = writeln!(out, "{}\t{}", self.tags()[t], fmt_prob(self.unk_mass(t)));
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<HmmModel> {
        let path = path.as_ref();
        HmmModel::parse(&fs::read_to_string(path)?, &path.display().to_string())
    }

    pub fn parse(text: &str, source_name: &str) -> Result<HmmModel> {
        const SECTIONS: [&str; 5] = ["CONFIG", "TAGS", "TRANS", "EMIT", "UNK"];
        let err = |line: usize, msg: String| Error::format(source_name, line, msg);
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim_end_matches('\r')));
        match lines.next() {
            Some((_, h)) if h == MODEL_HEADER => {}
            _ => return Err(err(1, format!("expected header {:?}", MODEL_HEADER))),
        }

        let mut section: Option<usize> = None;
        let mut config: HashMap<String, (usize, String)> = HashMap::new();
        let mut tags: Vec<Tag> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut trans: Vec<Vec<f64>> = Vec::new();
        let mut emit: Vec<BTreeMap<String, f64>> = Vec::new();
        let mut unk: Vec<Option<f64>> = Vec::new();

        let parse_p = |line: usize, s: &str| -> Result<f64> {
            s.trim()
                .parse::<f64>()
                .map_err(|_| err(line, format!("bad probability {:?}", s)))
        };

        for (lineno, line) in lines {
            if line.is_empty() {
                continue;
            }
            if let Some(k) = SECTIONS.iter().position(|s| *s == line) {
                let expected = section.map_or(0, |s| s + 1);
                if k != expected {
                    return Err(err(lineno, format!("section {} out of order", line)));
                }
                if k == 2 {
                    let n = tags.len();
                    trans = vec![vec![0.0; n]; n + 1];
                    emit = vec![BTreeMap::new(); n];
                    unk = vec![None; n];
                }
                section = Some(k);
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let tag_of = |name: &str| -> Result<usize> {
                index
                    .get(name)
                    .copied()
                    .ok_or_else(|| err(lineno, format!("unknown tag {:?}", name)))
            };
            match section {
                None => {
                    return Err(err(
                        lineno,
                        format!("unexpected line before CONFIG: {:?}", line),
                    ))
                }
                Some(0) => {
                    if fields.len() != 2 {
                        return Err(err(lineno, "expected <key>\\t<value>".into()));
                    }
                    config.insert(fields[0].to_string(), (lineno, fields[1].to_string()));
                }
                Some(1) => {
                    let tag = Tag::new(line).map_err(|e| err(lineno, e.to_string()))?;
                    if index.insert(line.to_string(), tags.len()).is_some() {
                        return Err(err(lineno, format!("duplicate tag {}", line)));
                    }
                    tags.push(tag);
                }
                Some(2) => {
                    if fields.len() != 3 {
                        return Err(err(lineno, "expected <prev>\\t<tag>\\t<prob>".into()));
                    }
                    let row = if fields[0] == BOS {
                        0
                    } else {
                        tag_of(fields[0])? + 1
                    };
                    let t = tag_of(fields[1])?;
                    trans[row][t] = parse_p(lineno, fields[2])?;
                }
                Some(3) => {
                    if fields.len() != 3 {
                        return Err(err(
                            lineno,
                            "expected <tag>\\t<lemma>/<tag>\\t<prob>".into(),
                        ));
                    }
                    let t = tag_of(fields[0])?;
                    let lemma = fields[1]
                        .strip_suffix(fields[0])
                        .and_then(|l| l.strip_suffix('/'))
                        .filter(|l| !l.is_empty())
                        .ok_or_else(|| {
                            err(
                                lineno,
                                format!(
                                    "morpheme key {:?} does not end in /{}",
                                    fields[1], fields[0]
                                ),
                            )
                        })?;
                    if emit[t]
                        .insert(lemma.to_string(), parse_p(lineno, fields[2])?)
                        .is_some()
                    {
                        return Err(err(lineno, "duplicate emission entry".into()));
                    }
                }
                Some(_) => {
                    if fields.len() != 2 {
                        return Err(err(lineno, "expected <tag>\\t<prob>".into()));
                    }
                    let t = tag_of(fields[0])?;
                    unk[t] = Some(parse_p(lineno, fields[1])?);
                }
            }
        }
        if section != Some(SECTIONS.len() - 1) {
            return Err(err(0, "missing sections".into()));
        }

        let get = |key: &str| -> Result<f64> {
            let (line, v) = config
                .get(key)
                .ok_or_else(|| err(0, format!("CONFIG lacks {}", key)))?;
            v.parse::<f64>()
                .map_err(|_| err(*line, format!("bad value for {}", key)))
        };
        let smoothing = Smoothing {
            lambda_trans: get("lambda_trans")?,
            lambda_emit: get("lambda_emit")?,
            unk_mass: get("unk_mass")?,
            unseen_count: get("unseen_count")?,
        };
        smoothing.validate().map_err(|e| err(0, e.to_string()))?;
        let open_class = match config.get("open_class") {
            None => Vec::new(),
            Some((line, v)) => v
                .split_whitespace()
                .map(|name| {
                    index
                        .get(name)
                        .copied()
                        .ok_or_else(|| err(*line, format!("unknown open-class tag {:?}", name)))
                })
                .collect::<Result<Vec<_>>>()?,
        };
        let unk = unk
            .into_iter()
            .enumerate()
            .map(|(t, u)| u.ok_or_else(|| err(0, format!("UNK lacks tag {}", tags[t]))))
            .collect::<Result<Vec<_>>>()?;
        HmmModel::from_parts(tags, trans, emit, unk, smoothing, open_class)
            .map_err(|e| err(0, e.to_string()))
    }
}
