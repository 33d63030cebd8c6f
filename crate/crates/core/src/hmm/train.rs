use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::hmm::{HmmModel, Smoothing};
use crate::sentence::TaggedSentence;
use crate::tagset::Tag;

/// Relative-frequency estimation from gold-tagged sentences.
///
/// Transitions use add-lambda over the tag inventory. Emissions use add-lambda
/// over the set of lemmas seen anywhere in the corpus, scaled to leave
/// `unk_mass` for unseen lemmas.
pub fn train_supervised(
    corpus: &[TaggedSentence],
    tags: &[Tag],
    smoothing: Smoothing,
) -> Result<HmmModel> {
    smoothing.validate()?;
    if corpus.is_empty() {
        return Err(Error::Training("empty training corpus".into()));
    }
    let n = tags.len();
    let index: std::collections::HashMap<&Tag, usize> =
        tags.iter().enumerate().map(|(i, t)| (t, i)).collect();

    let mut unknown = BTreeSet::new();
    let mut trans_counts = vec![vec![0.0f64; n]; n + 1];
    let mut emit_counts: Vec<BTreeMap<&str, f64>> = vec![BTreeMap::new(); n];
    let mut vocab = BTreeSet::new();
    for sentence in corpus {
        let mut prev_row = 0;
        for m in sentence.morphemes() {
            let Some(&t) = index.get(&m.tag) else {
                unknown.insert(m.tag.to_string());
                continue;
            };
            trans_counts[prev_row][t] += 1.0;
            *emit_counts[t].entry(m.lemma.as_str()).or_default() += 1.0;
            vocab.insert(m.lemma.as_str());
            prev_row = t + 1;
        }
    }
    if !unknown.is_empty() {
        return Err(Error::UnknownTags(unknown.into_iter().collect()));
    }

    let lt = smoothing.lambda_trans;
    let trans: Vec<Vec<f64>> = trans_counts
        .iter()
        .map(|row| {
            let total: f64 = row.iter().sum();
            row.iter()
                .map(|c| (c + lt) / (total + lt * n as f64))
                .collect()
        })
        .collect();

    let le = smoothing.lambda_emit;
    let v = vocab.len() as f64;
    let keep = 1.0 - smoothing.unk_mass;
    let emit: Vec<BTreeMap<String, f64>> = emit_counts
        .iter()
        .map(|counts| {
            let total: f64 = counts.values().sum();
            vocab
                .iter()
                .map(|&m| {
                    let c = counts.get(m).copied().unwrap_or(0.0);
                    (m.to_string(), keep * (c + le) / (total + le * v))
                })
                .collect()
        })
        .collect();

    HmmModel::from_parts(
        tags.to_vec(),
        trans,
        emit,
        vec![smoothing.unk_mass; n],
        smoothing,
        vec![],
    )
}
