//! Tagged sentences shared by the tagger, the rule learner and corpus I/O.

use crate::tagset::Tag;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TaggedMorpheme {
    pub lemma: String,
    pub tag: Tag,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TaggedEojeol {
    pub surface: String,
    pub morphemes: Vec<TaggedMorpheme>,
}

/// A sentence with one tag per morpheme. `score` is the tagger's log
/// probability; gold sentences carry 0.
#[derive(Debug, Clone, PartialEq)]
pub struct TaggedSentence {
    pub eojeols: Vec<TaggedEojeol>,
    pub score: f64,
}

impl TaggedSentence {
    pub fn new(eojeols: Vec<TaggedEojeol>) -> Self {
        TaggedSentence {
            eojeols,
            score: 0.0,
        }
    }

    pub fn morpheme_count(&self) -> usize {
        self.eojeols.iter().map(|e| e.morphemes.len()).sum()
    }

    pub fn morphemes(&self) -> impl Iterator<Item = &TaggedMorpheme> + '_ {
        self.eojeols.iter().flat_map(|e| e.morphemes.iter())
    }

    pub fn tags(&self) -> impl Iterator<Item = &Tag> + '_ {
        self.morphemes().map(|m| &m.tag)
    }

    /// Same Eojeol surfaces and the same lemma sequence inside each Eojeol.
    pub fn same_segmentation(&self, other: &TaggedSentence) -> bool {
        self.eojeols.len() == other.eojeols.len()
            && self.eojeols.iter().zip(&other.eojeols).all(|(a, b)| {
                a.surface == b.surface
                    && a.morphemes.len() == b.morphemes.len()
                    && a.morphemes
                        .iter()
                        .zip(&b.morphemes)
                        .all(|(x, y)| x.lemma == y.lemma)
            })
    }
}
