use crate::error::{Error, Result};
use crate::lexicon::LemmaTags;
use crate::sentence::TaggedSentence;

/// Morpheme-level tagging accuracy against gold. Counts are over gold
/// morphemes. A sentence whose segmentation differs from gold counts all its
/// gold morphemes as incorrect and is listed in `mismatched_sentences`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EvalReport {
    pub tagged_count: usize,
    pub incorrect_count: usize,
    /// Gold morphemes whose lemma has more than one dictionary tag.
    pub ambiguous_count: usize,
    pub ambiguous_incorrect: usize,
    pub mismatched_sentences: Vec<usize>,
}

impl EvalReport {
    pub fn correct_count(&self) -> usize {
        self.tagged_count - self.incorrect_count
    }

    /// `(tagged - incorrect) / tagged`; 1 on an empty corpus.
    pub fn accuracy(&self) -> f64 {
        ratio(self.correct_count(), self.tagged_count)
    }

    pub fn ambiguous_accuracy(&self) -> f64 {
        ratio(
            self.ambiguous_count - self.ambiguous_incorrect,
            self.ambiguous_count,
        )
    }

    pub fn ambiguity_rate(&self) -> f64 {
        ratio(self.ambiguous_count, self.tagged_count)
    }

    pub fn percent(&self) -> String {
        format_percent(self.correct_count(), self.tagged_count)
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        1.0
    } else {
        num as f64 / den as f64
    }
}

/// `100 * num / den` with one decimal, rounding halves up, computed in
/// integers so no binary rounding creeps in.
pub fn format_percent(num: usize, den: usize) -> String {
    if den == 0 {
        return "100.0".into();
    }
    let (num, den) = (num as u128, den as u128);
    let tenths = (2000 * num + den) / (2 * den);
    format!("{}.{}", tenths / 10, tenths % 10)
}

pub fn evaluate(
    system: &[TaggedSentence],
    gold: &[TaggedSentence],
    lemma_tags: &LemmaTags,
) -> Result<EvalReport> {
    if system.len() != gold.len() {
        return Err(Error::InvalidArgument(format!(
            "system output has {} sentences, gold has {}",
            system.len(),
            gold.len()
        )));
    }
    let mut r = EvalReport::default();
    for (i, (s, g)) in system.iter().zip(gold).enumerate() {
        let aligned = s.same_segmentation(g);
        if !aligned {
            r.mismatched_sentences.push(i);
        }
        let mut sys = s.morphemes();
        for gm in g.morphemes() {
            let ambiguous = lemma_tags.get(&gm.lemma).len() > 1;
            let wrong = !aligned || sys.next().map_or(true, |m| m.tag != gm.tag);
            r.tagged_count += 1;
            r.incorrect_count += wrong as usize;
            if ambiguous {
                r.ambiguous_count += 1;
                r.ambiguous_incorrect += wrong as usize;
            }
        }
    }
    Ok(r)
}

pub fn table_header() -> &'static str {
    "corpus | no. morph. | no. ambig. morph. | HMM alone | two-phase"
}

/// One results row: morpheme and ambiguity counts come from `two_phase`
/// (both reports are over the same gold corpus).
pub fn table_row(name: &str, hmm_alone: &EvalReport, two_phase: &EvalReport) -> String {
    format!(
        "{} | {} | {} | {} | {}",
        name,
        two_phase.tagged_count,
        two_phase.ambiguous_count,
        hmm_alone.percent(),
        two_phase.percent()
    )
}
