//! Two-phase part-of-speech disambiguation for agglutinative morphology.
//!
//! Eojeols are segmented into morphemes against a surface-form dictionary
//! ([`lexicon`]), tagged by a bigram HMM ([`hmm`]), and the tagger output is
//! post-corrected by transformation rules learned from its own errors
//! ([`tbl`]). [`corpus`] holds file formats, splitting, evaluation and a
//! synthetic corpus generator.

pub mod corpus;
pub mod error;
pub mod hmm;
pub mod lexicon;
pub mod sentence;
pub mod tagset;
pub mod tbl;

pub use error::{Error, Result, SegmentationFailure};
pub use hmm::{HmmModel, Observation, Smoothing};
pub use lexicon::{
    ConnectivityTable, EojeolAnalysis, LexEntry, Lexicon, Morpheme, SentenceLattice,
};
pub use sentence::{TaggedEojeol, TaggedMorpheme, TaggedSentence};
pub use tagset::{Tag, TagPath, TagsetProjection};
pub use tbl::{Rule, RuleList, RuleSchema};
