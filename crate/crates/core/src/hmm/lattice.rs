//! Choosing among alternative segmentations of a sentence.
//!
//! Per Eojeol, analyzer candidates that share the same morpheme split (surface
//! and lemma sequence) are merged into one segmentation whose morphemes carry
//! the union of their candidate tags; the tag pairs seen adjacent inside those
//! candidates become structural constraints for Viterbi. Each sentence-level
//! combination of segmentations is decoded independently and the best-scoring
//! one is returned.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::hmm::{viterbi_linked, HmmModel, Observation};
use crate::lexicon::{LemmaTags, SentenceLattice};
use crate::sentence::{TaggedEojeol, TaggedMorpheme, TaggedSentence};
use crate::tagset::Tag;

pub const DEFAULT_SENTENCE_CAP: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeTagging {
    pub sentence: TaggedSentence,
    /// The sentence-candidate product exceeded the cap and only a prefix of it
    /// was decoded.
    pub truncated: bool,
    pub candidates_scored: usize,
    /// Morphemes whose lemma the model never saw in training.
    pub unseen_morphemes: usize,
}

#[derive(Debug)]
struct Segmentation {
    lemmas: Vec<String>,
    allowed: Vec<Vec<usize>>,
    // (position, left tag, right tag) pairs observed in some candidate.
    links: HashSet<(usize, usize, usize)>,
}

fn tag_id(model: &HmmModel, tag: &Tag) -> Result<usize> {
    model
        .tag_index(tag)
        .ok_or_else(|| Error::UnknownTags(vec![tag.to_string()]))
}

fn segmentations(model: &HmmModel, lattice: &SentenceLattice) -> Result<Vec<Vec<Segmentation>>> {
    let mut out = Vec::with_capacity(lattice.eojeols.len());
    for e in &lattice.eojeols {
        let mut groups: Vec<(Vec<(&str, &str)>, Segmentation)> = Vec::new();
        for cand in &e.candidates {
            let key: Vec<(&str, &str)> = cand
                .iter()
                .map(|m| (m.surface.as_str(), m.lemma.as_str()))
                .collect();
            let ids = cand
                .iter()
                .map(|m| tag_id(model, &m.tag))
                .collect::<Result<Vec<_>>>()?;
            let pos = match groups.iter().position(|(k, _)| *k == key) {
                Some(p) => p,
                None => {
                    groups.push((
                        key,
                        Segmentation {
                            lemmas: cand.iter().map(|m| m.lemma.clone()).collect(),
                            allowed: vec![Vec::new(); cand.len()],
                            links: HashSet::new(),
                        },
                    ));
                    groups.len() - 1
                }
            };
            let seg = &mut groups[pos].1;
            for (i, &t) in ids.iter().enumerate() {
                if !seg.allowed[i].contains(&t) {
                    seg.allowed[i].push(t);
                }
                if i + 1 < ids.len() {
                    seg.links.insert((i, t, ids[i + 1]));
                }
            }
        }
        if groups.is_empty() {
            return Err(Error::Decode(format!(
                "eojeol {:?} has no candidates",
                e.surface
            )));
        }
        out.push(groups.into_iter().map(|(_, s)| s).collect());
    }
    Ok(out)
}

/// Decodes every sentence-level segmentation (up to `cap` of them) and keeps
/// the highest log score; ties go to fewer morphemes, then to the
/// lexicographically smallest tag-index sequence, then to enumeration order.
pub fn tag_lattice(
    model: &HmmModel,
    lattice: &SentenceLattice,
    cap: usize,
) -> Result<LatticeTagging> {
    if lattice.eojeols.is_empty() {
        return Err(Error::Decode("empty lattice".into()));
    }
    if cap == 0 {
        return Err(Error::InvalidArgument(
            "sentence candidate cap must be at least 1".into(),
        ));
    }
    let segs = segmentations(model, lattice)?;
    let total = segs
        .iter()
        .fold(1usize, |acc, s| acc.saturating_mul(s.len()));
    let truncated = total > cap;
    let budget = total.min(cap);

    let mut choice = vec![0usize; segs.len()];
    let mut best: Option<(f64, usize, Vec<usize>, Vec<usize>)> = None;
    let mut scored = 0;
    for _ in 0..budget {
        let mut obs = Vec::new();
        // For each global position: (eojeol, position within the eojeol).
        let mut owner = Vec::new();
        for (e, &c) in choice.iter().enumerate() {
            let seg = &segs[e][c];
            for (i, lemma) in seg.lemmas.iter().enumerate() {
                obs.push(Observation::new(lemma.clone(), seg.allowed[i].clone()));
                owner.push((e, i));
            }
        }
        let link = |p: usize, a: usize, b: usize| {
            let (e, i) = owner[p];
            let (e2, _) = owner[p + 1];
            e != e2 || segs[e][choice[e]].links.contains(&(i, a, b))
        };
        match viterbi_linked(model, &obs, &link) {
            Ok(d) => {
                scored += 1;
                let better = match &best {
                    None => true,
                    Some((score, len, tags, _)) => {
                        d.score > *score
                            || d.score == *score
                                && (obs.len() < *len || obs.len() == *len && d.tags < *tags)
                    }
                };
                if better {
                    best = Some((d.score, obs.len(), d.tags, choice.clone()));
                }
            }
            Err(Error::Decode(_)) => {}
            Err(e) => return Err(e),
        }
        // Odometer, last Eojeol fastest.
        for e in (0..choice.len()).rev() {
            choice[e] += 1;
            if choice[e] < segs[e].len() {
                break;
            }
            choice[e] = 0;
        }
    }

    let Some((score, _, tags, choice)) = best else {
        return Err(Error::Decode(
            "no sentence candidate admits a tag sequence".into(),
        ));
    };
    let mut k = 0;
    let mut unseen = 0;
    let mut eojeols = Vec::with_capacity(segs.len());
    for (e, &c) in choice.iter().enumerate() {
        let seg = &segs[e][c];
        let morphemes = seg
            .lemmas
            .iter()
            .map(|lemma| {
                let t = tags[k];
                k += 1;
                if !model.knows(lemma) {
                    unseen += 1;
                }
                TaggedMorpheme {
                    lemma: lemma.clone(),
                    tag: model.tags()[t].clone(),
                }
            })
            .collect();
        eojeols.push(TaggedEojeol {
            surface: lattice.eojeols[e].surface.clone(),
            morphemes,
        });
    }
    Ok(LatticeTagging {
        sentence: TaggedSentence { eojeols, score },
        truncated,
        candidates_scored: scored,
        unseen_morphemes: unseen,
    })
}

/// Observations for a sentence whose segmentation is already known: each
/// lemma may take any of its dictionary tags (open-class tags if it has none).
pub fn observations_for(
    model: &HmmModel,
    sentence: &TaggedSentence,
    lemma_tags: &LemmaTags,
) -> Result<Vec<Observation>> {
    sentence
        .morphemes()
        .map(|m| {
            let allowed = lemma_tags
                .get(&m.lemma)
                .iter()
                .map(|t| tag_id(model, t))
                .collect::<Result<Vec<_>>>()?;
            Ok(Observation::new(m.lemma.clone(), allowed))
        })
        .collect()
}

/// Re-tags a sentence on its given segmentation. Used to produce the tagger's
/// output for hand-segmented text such as the rule-learning corpus.
pub fn tag_segmented(
    model: &HmmModel,
    sentence: &TaggedSentence,
    lemma_tags: &LemmaTags,
) -> Result<TaggedSentence> {
    let obs = observations_for(model, sentence, lemma_tags)?;
    let d = crate::hmm::viterbi(model, &obs)?;
    let mut out = sentence.clone();
    let mut k = 0;
    for e in &mut out.eojeols {
        for m in &mut e.morphemes {
            m.tag = model.tags()[d.tags[k]].clone();
            k += 1;
        }
    }
    out.score = d.score;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hmm::test_support::model;
    use crate::hmm::viterbi;
    use crate::lexicon::{EojeolAnalysis, Morpheme};
    use crate::tagset::TagPath;

    fn m(surface: &str, tag: &str) -> Morpheme {
        Morpheme {
            surface: surface.into(),
            lemma: surface.into(),
            tag_path: TagPath::parse(tag).unwrap(),
            tag: Tag::new(tag).unwrap(),
        }
    }

    fn toy() -> HmmModel {
        model(
            &["N", "J", "V"],
            vec![
                vec![0.6, 0.1, 0.3],
                vec![0.2, 0.5, 0.3],
                vec![0.4, 0.1, 0.5],
                vec![0.5, 0.25, 0.25],
            ],
            vec![
                vec![("a", 0.5), ("b", 0.2), ("ab", 0.1)],
                vec![("b", 0.6)],
                vec![("ab", 0.5), ("a", 0.1)],
            ],
            vec![0.2, 0.4, 0.4],
        )
    }

    #[test]
    fn single_candidate_equals_viterbi() {
        let lat = SentenceLattice {
            eojeols: vec![EojeolAnalysis {
                surface: "ab".into(),
                candidates: vec![vec![m("a", "N"), m("b", "J")]],
            }],
        };
        let model = toy();
        let got = tag_lattice(&model, &lat, 256).unwrap();
        let obs = vec![
            Observation::new("a", vec![0]),
            Observation::new("b", vec![1]),
        ];
        let d = viterbi(&model, &obs).unwrap();
        assert_eq!(got.sentence.score, d.score);
        assert!(!got.truncated);
    }

    #[test]
    fn picks_higher_scoring_segmentation() {
        let lat = SentenceLattice {
            eojeols: vec![EojeolAnalysis {
                surface: "ab".into(),
                candidates: vec![vec![m("ab", "V")], vec![m("a", "N"), m("b", "J")]],
            }],
        };
        let model = toy();
        // By hand: ab/V = 0.3 * 0.5 = 0.15 ; a/N b/J = 0.6 * 0.5 * 0.5 * 0.6 = 0.09.
        let got = tag_lattice(&model, &lat, 256).unwrap();
        assert_eq!(got.sentence.morpheme_count(), 1);
        assert!((got.sentence.score - 0.15f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn links_keep_only_attested_tag_pairs() {
        // Tags for "a" and "b" are each ambiguous, but only N-J and V-N occur.
        let lat = SentenceLattice {
            eojeols: vec![EojeolAnalysis {
                surface: "ab".into(),
                candidates: vec![
                    vec![m("a", "N"), m("b", "J")],
                    vec![m("a", "V"), m("b", "N")],
                ],
            }],
        };
        let model = toy();
        let got = tag_lattice(&model, &lat, 256).unwrap();
        let tags: Vec<&str> = got.sentence.tags().map(|t| t.as_str()).collect();
        assert!(tags == ["N", "J"] || tags == ["V", "N"], "{:?}", tags);
        let s_nj = (0.6f64 * 0.5 * 0.5 * 0.6).ln();
        let s_vn = (0.3f64 * 0.1 * 0.5 * 0.2).ln();
        assert!((got.sentence.score - s_nj.max(s_vn)).abs() < 1e-12);
    }

    #[test]
    fn truncation_is_flagged() {
        let e = EojeolAnalysis {
            surface: "ab".into(),
            candidates: vec![vec![m("ab", "V")], vec![m("a", "N"), m("b", "J")]],
        };
        let lat = SentenceLattice {
            eojeols: vec![e.clone(), e.clone(), e],
        };
        let got = tag_lattice(&toy(), &lat, 5).unwrap();
        assert!(got.truncated);
        assert_eq!(got.candidates_scored, 5);
        let full = tag_lattice(&toy(), &lat, 8).unwrap();
        assert!(!full.truncated);
    }

    #[test]
    fn unknown_projected_tag_is_an_error() {
        let lat = SentenceLattice {
            eojeols: vec![EojeolAnalysis {
                surface: "a".into(),
                candidates: vec![vec![m("a", "Q")]],
            }],
        };
        assert!(matches!(
            tag_lattice(&toy(), &lat, 8),
            Err(Error::UnknownTags(_))
        ));
    }
}
