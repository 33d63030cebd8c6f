//! Shared inputs for the pipeline benchmarks, built from synthetic corpora.

use morphtag::corpus::{generate_synthetic, SynthSpec, Synthetic};
use morphtag::hmm::{observations_for, tag_segmented, train_supervised, Smoothing};
use morphtag::lexicon::LemmaTags;
use morphtag::{HmmModel, Observation, TaggedSentence};

pub struct Workload {
    pub synthetic: Synthetic,
    pub lemma_tags: LemmaTags,
    pub model: HmmModel,
}

impl Workload {
    pub fn new(sentences: usize) -> Workload {
        let spec = SynthSpec {
            sentences,
            ..SynthSpec::default()
        };
        let synthetic = generate_synthetic(&spec).expect("default spec is valid");
        let lemma_tags = synthetic.lexicon.lemma_tag_index(&synthetic.projection);
        let model = train_supervised(
            &synthetic.corpus,
            &synthetic.projection.labels(),
            Smoothing::default(),
        )
        .expect("synthetic corpus trains");
        Workload {
            synthetic,
            lemma_tags,
            model,
        }
    }

    /// Decoder input for the first sentence with at least `min_len` morphemes.
    pub fn observations(&self, min_len: usize) -> Vec<Observation> {
        let s = self
            .synthetic
            .corpus
            .iter()
            .find(|s| s.morpheme_count() >= min_len)
            .expect("long enough sentence");
        observations_for(&self.model, s, &self.lemma_tags).expect("known tags")
    }

    /// First-phase output for the whole corpus.
    pub fn first_tagged(&self) -> Vec<TaggedSentence> {
        self.synthetic
            .corpus
            .iter()
            .map(|s| tag_segmented(&self.model, s, &self.lemma_tags).expect("decodes"))
            .collect()
    }
}
