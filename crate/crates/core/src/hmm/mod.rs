//! Bigram HMM over morpheme tags.
//!
//! The tagger scores a tag sequence `t_1..t_n` for morphemes `m_1..m_n` as
//! `sum_i ln P(t_i | t_{i-1}) + ln P(m_i | t_i)` with `t_0` the sentence
//! boundary pseudo-tag. There is no end-of-sentence factor. Morphemes are keyed
//! by lemma, so inflected surfaces share statistics with their base form.

mod em;
mod io;
mod lattice;
mod train;
mod viterbi;

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::tagset::Tag;

pub use em::{baum_welch, forward_log_likelihood, EmRun};
pub use lattice::{
    observations_for, tag_lattice, tag_segmented, LatticeTagging, DEFAULT_SENTENCE_CAP,
};
pub use train::train_supervised;
pub use viterbi::{rescore, viterbi, viterbi_linked, Decoded};

/// Name of the boundary pseudo-tag in model files.
pub const BOS: &str = "<s>";

/// Rows must sum to one within this tolerance.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Smoothing {
    /// Add-lambda constant for transitions, over the tag inventory.
    pub lambda_trans: f64,
    /// Add-lambda constant for emissions, over the observed vocabulary.
    pub lambda_emit: f64,
    /// Emission mass per tag reserved for morphemes never seen with that tag.
    pub unk_mass: f64,
    /// Number of virtual unseen morphemes sharing `unk_mass` uniformly.
    pub unseen_count: f64,
}

impl Default for Smoothing {
    fn default() -> Self {
        Smoothing {
            lambda_trans: 0.1,
            lambda_emit: 0.1,
            unk_mass: 1e-4,
            unseen_count: 100.0,
        }
    }
}

impl Smoothing {
    pub fn validate(&self) -> Result<()> {
        let in_unit = |x: f64| x > 0.0 && x <= 1.0;
        if !in_unit(self.lambda_trans) || !in_unit(self.lambda_emit) {
            return Err(Error::InvalidArgument("lambdas must lie in (0, 1]".into()));
        }
        if !(self.unk_mass > 0.0 && self.unk_mass < 1.0) {
            return Err(Error::InvalidArgument("unk_mass must lie in (0, 1)".into()));
        }
        if !(self.unseen_count >= 1.0 && self.unseen_count.is_finite()) {
            return Err(Error::InvalidArgument("unseen_count must be >= 1".into()));
        }
        Ok(())
    }
}

/// One morpheme as the decoder sees it: its lemma key and the tag indices the
/// dictionary allows. An empty `allowed` list means the model's open-class tags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observation {
    pub key: String,
    pub allowed: Vec<usize>,
}

impl Observation {
    pub fn new(key: impl Into<String>, allowed: Vec<usize>) -> Self {
        Observation {
            key: key.into(),
            allowed,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HmmModel {
    tags: Vec<Tag>,
    index: HashMap<Tag, usize>,
    // (n + 1) x n, row 0 is the boundary tag, row i + 1 is tag i.
    trans: Vec<f64>,
    log_trans: Vec<f64>,
    emit: Vec<BTreeMap<String, f64>>,
    unk: Vec<f64>,
    smoothing: Smoothing,
    open_class: Vec<usize>,
}

impl HmmModel {
    /// Assembles a model from explicit tables and checks the normalization
    /// invariants. `trans` rows are indexed by `prev + 1` with row 0 for the
    /// boundary tag.
    pub fn from_parts(
        tags: Vec<Tag>,
        trans: Vec<Vec<f64>>,
        emit: Vec<BTreeMap<String, f64>>,
        unk: Vec<f64>,
        smoothing: Smoothing,
        open_class: Vec<usize>,
    ) -> Result<HmmModel> {
        let n = tags.len();
        if n == 0 {
            return Err(Error::Model("empty tag inventory".into()));
        }
        let mut index = HashMap::new();
        for (i, t) in tags.iter().enumerate() {
            if t.as_str() == BOS {
                return Err(Error::Model(format!(
                    "{} is reserved for the boundary tag",
                    BOS
                )));
            }
            if index.insert(t.clone(), i).is_some() {
                return Err(Error::Model(format!("duplicate tag {}", t)));
            }
        }
        if trans.len() != n + 1 || trans.iter().any(|r| r.len() != n) {
            return Err(Error::Model("transition table has wrong shape".into()));
        }
        if emit.len() != n || unk.len() != n {
            return Err(Error::Model("emission table has wrong shape".into()));
        }
        let mut open_class = open_class;
        open_class.sort_unstable();
        open_class.dedup();
        if open_class.iter().any(|&t| t >= n) {
            return Err(Error::Model("open-class tag index out of range".into()));
        }
        if open_class.is_empty() {
            open_class = (0..n).collect();
        }
        let flat: Vec<f64> = trans.into_iter().flatten().collect();
        let model = HmmModel {
            log_trans: flat.iter().map(|p| p.ln()).collect(),
            trans: flat,
            tags,
            index,
            emit,
            unk,
            smoothing,
            open_class,
        };
        model.validate()?;
        Ok(model)
    }

    /// Checks that every transition row sums to one and that every emission row
    /// plus its reserved unseen mass sums to one.
    pub fn validate(&self) -> Result<()> {
        let n = self.tags.len();
        for row in 0..=n {
            let slice = &self.trans[row * n..(row + 1) * n];
            if slice.iter().any(|p| !p.is_finite() || *p < 0.0) {
                return Err(Error::Model(format!(
                    "transition row {} has invalid probabilities",
                    self.row_name(row)
                )));
            }
            let sum: f64 = slice.iter().sum();
            if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
                return Err(Error::Model(format!(
                    "transition row {} sums to {}",
                    self.row_name(row),
                    sum
                )));
            }
        }
        for (t, row) in self.emit.iter().enumerate() {
            let unk = self.unk[t];
            if !(0.0..=1.0).contains(&unk) || row.values().any(|p| !p.is_finite() || *p < 0.0) {
                return Err(Error::Model(format!(
                    "emission row {} has invalid probabilities",
                    self.tags[t]
                )));
            }
            let sum: f64 = row.values().sum::<f64>() + unk;
            if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
                return Err(Error::Model(format!(
                    "emission row {} sums to {}",
                    self.tags[t], sum
                )));
            }
        }
        Ok(())
    }

    fn row_name(&self, row: usize) -> String {
        if row == 0 {
            BOS.to_string()
        } else {
            self.tags[row - 1].to_string()
        }
    }

    pub fn tags(&self) -> &[Tag] {
        &self.tags
    }

    pub fn n_tags(&self) -> usize {
        self.tags.len()
    }

    pub fn tag_index(&self, tag: &Tag) -> Option<usize> {
        self.index.get(tag).copied()
    }

    pub fn smoothing(&self) -> &Smoothing {
        &self.smoothing
    }

    pub fn open_class(&self) -> &[usize] {
        &self.open_class
    }

    /// Replaces the open-class tag list used for morphemes with no dictionary tags.
    pub fn with_open_class(mut self, open_class: Vec<usize>) -> Result<HmmModel> {
        let n = self.n_tags();
        let mut oc = open_class;
        oc.sort_unstable();
        oc.dedup();
        if oc.iter().any(|&t| t >= n) {
            return Err(Error::Model("open-class tag index out of range".into()));
        }
        self.open_class = if oc.is_empty() { (0..n).collect() } else { oc };
        Ok(self)
    }

    /// P(t | prev); `prev == None` is the sentence boundary.
    pub fn trans(&self, prev: Option<usize>, t: usize) -> f64 {
        self.trans[Self::row(prev) * self.tags.len() + t]
    }

    pub fn log_trans(&self, prev: Option<usize>, t: usize) -> f64 {
        self.log_trans[Self::row(prev) * self.tags.len() + t]
    }

    fn row(prev: Option<usize>) -> usize {
        prev.map_or(0, |p| p + 1)
    }

    /// P(lemma | t). Lemmas without an entry under `t` share the tag's
    /// reserved unseen mass.
    pub fn emit(&self, t: usize, lemma: &str) -> f64 {
        match self.emit[t].get(lemma) {
            Some(&p) => p,
            None => self.unk[t] / self.smoothing.unseen_count,
        }
    }

    pub fn log_emit(&self, t: usize, lemma: &str) -> f64 {
        self.emit(t, lemma).ln()
    }

    pub fn emission_row(&self, t: usize) -> &BTreeMap<String, f64> {
        &self.emit[t]
    }

    pub fn unk_mass(&self, t: usize) -> f64 {
        self.unk[t]
    }

    /// True if any tag has an emission entry for `lemma`.
    pub fn knows(&self, lemma: &str) -> bool {
        self.emit.iter().any(|row| row.contains_key(lemma))
    }

    /// The tag indices a decoder may assign to `obs`.
    pub fn allowed<'a>(&'a self, obs: &'a Observation) -> &'a [usize] {
        if obs.allowed.is_empty() {
            &self.open_class
        } else {
            &obs.allowed
        }
    }

    pub(crate) fn trans_row(&self, prev: Option<usize>) -> &[f64] {
        let n = self.tags.len();
        let r = Self::row(prev);
        &self.trans[r * n..(r + 1) * n]
    }
}
