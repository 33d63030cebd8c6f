//! Corpus files, splitting, evaluation and synthetic corpora.
//!
//! File format: one Eojeol per line as `<surface>\t<lemma>/<TAG>( + <lemma>/<TAG>)*`,
//! sentences separated by one blank line.

mod eval;
mod synth;

use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sentence::{TaggedEojeol, TaggedMorpheme, TaggedSentence};
use crate::tagset::Tag;

pub use eval::{evaluate, format_percent, table_header, table_row, EvalReport};
pub use synth::{generate_synthetic, Perturbation, StemGroup, SynthSpec, Synthetic};

fn parse_eojeol(
    line: &str,
    lineno: usize,
    source_name: &str,
    tagset: Option<&[Tag]>,
) -> Result<TaggedEojeol> {
    let err = |msg: String| Error::format(source_name, lineno, msg);
    let (surface, analysis) = line
        .split_once('\t')
        .ok_or_else(|| err("expected <surface><TAB><analysis>".into()))?;
    if surface.is_empty() || surface.chars().any(char::is_whitespace) {
        return Err(err(format!("bad Eojeol surface {:?}", surface)));
    }
    let mut morphemes = Vec::new();
    for part in analysis.split(" + ") {
        let (lemma, tag) = part
            .rsplit_once('/')
            .ok_or_else(|| err(format!("morpheme {:?} is not <lemma>/<TAG>", part)))?;
        if lemma.is_empty() || lemma.chars().any(char::is_whitespace) {
            return Err(err(format!("bad lemma in {:?}", part)));
        }
        let tag = Tag::new(tag).map_err(|_| err(format!("bad tag in {:?}", part)))?;
        if let Some(tags) = tagset {
            if !tags.contains(&tag) {
                return Err(err(format!("tag {} is not in the tagset", tag)));
            }
        }
        morphemes.push(TaggedMorpheme {
            lemma: lemma.to_string(),
            tag,
        });
    }
    Ok(TaggedEojeol {
        surface: surface.to_string(),
        morphemes,
    })
}

/// Parses corpus text. With `tagset`, every tag must belong to it.
pub fn parse_corpus(
    text: &str,
    source_name: &str,
    tagset: Option<&[Tag]>,
) -> Result<Vec<TaggedSentence>> {
    let mut sentences = Vec::new();
    let mut current = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            if !current.is_empty() {
                sentences.push(TaggedSentence::new(std::mem::take(&mut current)));
            }
            continue;
        }
        current.push(parse_eojeol(line, i + 1, source_name, tagset)?);
    }
    if !current.is_empty() {
        sentences.push(TaggedSentence::new(current));
    }
    Ok(sentences)
}

pub fn read_corpus(path: impl AsRef<Path>, tagset: Option<&[Tag]>) -> Result<Vec<TaggedSentence>> {
    let path = path.as_ref();
    parse_corpus(
        &fs::read_to_string(path)?,
        &path.display().to_string(),
        tagset,
    )
}

pub fn corpus_text(sentences: &[TaggedSentence]) -> String {
    let mut out = String::new();
    for (i, s) in sentences.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        for e in &s.eojeols {
            out.push_str(&e.surface);
            out.push('\t');
            for (k, m) in e.morphemes.iter().enumerate() {
                if k > 0 {
                    out.push_str(" + ");
                }
                out.push_str(&m.lemma);
                out.push('/');
                out.push_str(m.tag.as_str());
            }
            out.push('\n');
        }
    }
    out
}

pub fn write_corpus(path: impl AsRef<Path>, sentences: &[TaggedSentence]) -> Result<()> {
    fs::write(path, corpus_text(sentences))?;
    Ok(())
}

/// Shuffles sentence indices with a seeded generator and cuts them into
/// `(em, rules, test)` parts. The rules and test parts get
/// `round(fraction * n)` sentences, the EM part the rest. Every part must be
/// non-empty; indices inside a part keep corpus order.
pub fn split_indices(n: usize, fractions: (f64, f64, f64), seed: u64) -> Result<[Vec<usize>; 3]> {
    let (a, b, c) = fractions;
    if !(a > 0.0 && b > 0.0 && c > 0.0) || ((a + b + c) - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "split fractions must be positive and sum to 1, got ({}, {}, {})",
            a, b, c
        )));
    }
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "cannot split a corpus of {} sentences",
            n
        )));
    }
    let n_rules = (b * n as f64).round() as usize;
    let n_test = (c * n as f64).round() as usize;
    if n_rules == 0 || n_test == 0 || n_rules + n_test >= n {
        return Err(Error::InvalidArgument(format!(
            "fractions ({}, {}, {}) leave an empty part of {} sentences",
            a, b, c, n
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let n_em = n - n_rules - n_test;
    let mut parts = [
        order[..n_em].to_vec(),
        order[n_em..n_em + n_rules].to_vec(),
        order[n_em + n_rules..].to_vec(),
    ];
    for p in &mut parts {
        p.sort_unstable();
    }
    Ok(parts)
}

/// [`split_indices`] applied to a corpus.
pub fn split_corpus<T: Clone>(
    corpus: &[T],
    fractions: (f64, f64, f64),
    seed: u64,
) -> Result<[Vec<T>; 3]> {
    let parts = split_indices(corpus.len(), fractions, seed)?;
    Ok(parts.map(|p| p.into_iter().map(|i| corpus[i].clone()).collect()))
}
