//! Seeded synthetic corpora with controllable ambiguity and context-dependent
//! tag overrides that a bigram model cannot capture.
//!
//! Every Eojeol is a stem morpheme followed by zero or more functional
//! morphemes drawn from the stem tag's group. Tags follow a sparse random
//! first-order chain. Stem lemmas are three letters from one alphabet and
//! functional lemmas two letters from a disjoint one, so each Eojeol surface
//! has exactly one segmentation; ambiguity is purely in the tags.

use std::collections::{BTreeSet, HashSet};

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lexicon::{ConnectivityTable, LexEntry, Lexicon};
use crate::sentence::{TaggedEojeol, TaggedMorpheme, TaggedSentence};
use crate::tagset::{Tag, TagPath, TagsetProjection};
use crate::tbl::Probe;

const STEM_CONSONANTS: &str = "bdgkmnprst";
const FUNCTIONAL_CONSONANTS: &str = "chjlwyzfqv";
const VOWELS: &str = "aeiou";
const MAX_MORPHEMES_PER_EOJEOL: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct StemGroup {
    pub stem: Tag,
    /// Functional tags that may follow the stem, in the order they may chain.
    pub functional: Vec<Tag>,
}

/// Gold override: a morpheme tagged `from` is retagged `to` when `probe`,
/// read on the unperturbed sentence, yields `value`.
#[derive(Debug, Clone, PartialEq)]
pub struct Perturbation {
    pub from: Tag,
    pub to: Tag,
    pub probe: Probe,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub seed: u64,
    pub sentences: usize,
    pub min_eojeols: usize,
    pub max_eojeols: usize,
    pub groups: Vec<StemGroup>,
    /// Tags that only arise from perturbations.
    pub extra_tags: Vec<Tag>,
    pub stem_lemmas: usize,
    pub functional_lemmas: usize,
    /// Probability that a functional lemma is also enrolled under another
    /// functional tag with disjoint left contexts.
    pub ambiguity: f64,
    pub perturbations: Vec<Perturbation>,
}

fn tag(s: &str) -> Tag {
    Tag::new(s).expect("valid tag")
}

fn group(stem: &str, functional: &[&str]) -> StemGroup {
    StemGroup {
        stem: tag(stem),
        functional: functional.iter().map(|t| tag(t)).collect(),
    }
}

impl Default for SynthSpec {
    /// Every functional tag is retagged (particles to `jO`, endings to `mE`)
    /// when the Eojeol two positions ahead starts with a predicate, adverb or pronoun.
    fn default() -> Self {
        let mut perturbations = Vec::new();
        for (from, to) in [
            ("jC", "jO"),
            ("jS", "jO"),
            ("jJ", "jO"),
            ("e", "mE"),
            ("mC", "mE"),
            ("mT", "mE"),
        ] {
            for value in ["D", "H", "B", "T"] {
                perturbations.push(Perturbation {
                    from: tag(from),
                    to: tag(to),
                    probe: "N2FMT".parse().expect("probe"),
                    value: value.into(),
                });
            }
        }
        SynthSpec {
            seed: 1,
            sentences: 1500,
            min_eojeols: 3,
            max_eojeols: 9,
            groups: vec![
                group("MC", &["jC", "jS"]),
                group("MP", &["jC", "jJ"]),
                group("T", &["jS"]),
                group("D", &["e", "mC", "mT"]),
                group("H", &["e", "mT"]),
                group("B", &[]),
            ],
            extra_tags: vec![tag("jO"), tag("mE")],
            stem_lemmas: 30,
            functional_lemmas: 3,
            ambiguity: 0.5,
            perturbations,
        }
    }
}

impl SynthSpec {
    /// Same spec without perturbations.
    pub fn control(&self) -> SynthSpec {
        SynthSpec {
            perturbations: Vec::new(),
            ..self.clone()
        }
    }

    fn inventory(&self) -> (Vec<Tag>, Vec<Tag>) {
        let stems: Vec<Tag> = self.groups.iter().map(|g| g.stem.clone()).collect();
        let mut functional: Vec<Tag> = Vec::new();
        for t in self
            .groups
            .iter()
            .flat_map(|g| &g.functional)
            .chain(&self.extra_tags)
        {
            if !functional.contains(t) {
                functional.push(t.clone());
            }
        }
        (stems, functional)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if self.groups.is_empty() {
            return bad("at least one stem group is required".into());
        }
        if self.sentences == 0 || self.min_eojeols == 0 || self.min_eojeols > self.max_eojeols {
            return bad("sentence shape parameters are inconsistent".into());
        }
        if self.stem_lemmas == 0 || self.functional_lemmas == 0 {
            return bad("every tag needs at least one lemma".into());
        }
        if !(0.0..=1.0).contains(&self.ambiguity) {
            return bad(format!("ambiguity {} outside [0, 1]", self.ambiguity));
        }
        let (stems, functional) = self.inventory();
        let stem_set: HashSet<&Tag> = stems.iter().collect();
        if stem_set.len() != stems.len() || functional.iter().any(|t| stem_set.contains(t)) {
            return bad("stem tags must be distinct and not functional".into());
        }
        let stem_capacity = STEM_CONSONANTS.len() * VOWELS.len() * STEM_CONSONANTS.len();
        let functional_capacity = FUNCTIONAL_CONSONANTS.len() * VOWELS.len();
        if stems.len() * self.stem_lemmas > stem_capacity
            || functional.len() * self.functional_lemmas > functional_capacity
        {
            return bad("vocabulary exceeds the synthetic alphabet".into());
        }
        let known = |t: &Tag| stem_set.contains(t) || functional.contains(t);
        let mut unknown = Vec::new();
        for p in &self.perturbations {
            for t in [&p.from, &p.to] {
                if !known(t) {
                    unknown.push(t.to_string());
                }
            }
            if p.probe.reads_tag() && !Tag::new(p.value.as_str()).map_or(false, |t| known(&t)) {
                unknown.push(p.value.clone());
            }
        }
        if !unknown.is_empty() {
            return Err(Error::UnknownTags(unknown));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Synthetic {
    pub corpus: Vec<TaggedSentence>,
    pub lexicon: Lexicon,
    pub projection: TagsetProjection,
    /// Gold morphemes whose tag a perturbation changed.
    pub perturbed_sites: usize,
}

fn path_for(t: &Tag, is_stem: bool) -> TagPath {
    TagPath::from_segments([if is_stem { "stem" } else { "func" }, t.as_str()]).expect("valid path")
}

fn weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen::<f64>().powi(3) + 0.01).collect()
}

struct Chain {
    // Per tag (inventory index): probability of closing the Eojeol after it,
    // within-Eojeol successors with weights, and the next-Eojeol stem weights.
    end: Vec<f64>,
    succ: Vec<Vec<usize>>,
    succ_dist: Vec<Option<WeightedIndex<f64>>>,
    next_stem: Vec<WeightedIndex<f64>>,
    first_stem: WeightedIndex<f64>,
}

fn lemma_pool(rng: &mut ChaCha8Rng, consonants: &str, with_coda: bool) -> Vec<String> {
    let mut pool = Vec::new();
    for c in consonants.chars() {
        for v in VOWELS.chars() {
            if with_coda {
                for d in consonants.chars() {
                    pool.push(format!("{}{}{}", c, v, d));
                }
            } else {
                pool.push(format!("{}{}", c, v));
            }
        }
    }
    pool.shuffle(rng);
    pool
}

pub fn generate_synthetic(spec: &SynthSpec) -> Result<Synthetic> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (stems, functional) = spec.inventory();
    let n_stems = stems.len();
    let inventory: Vec<Tag> = stems.iter().chain(&functional).cloned().collect();
    let index = |t: &Tag| {
        inventory
            .iter()
            .position(|x| x == t)
            .expect("inventory tag")
    };
    let n = inventory.len();

    let mut succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let mut pred: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for g in &spec.groups {
        let chain: Vec<usize> = std::iter::once(index(&g.stem))
            .chain(g.functional.iter().map(index))
            .collect();
        for i in 0..chain.len() {
            for &j in &chain[i + 1..] {
                succ[chain[i]].insert(j);
                pred[j].insert(chain[i]);
            }
        }
    }
    let mut chain = Chain {
        end: Vec::with_capacity(n),
        succ: succ.iter().map(|s| s.iter().copied().collect()).collect(),
        succ_dist: Vec::with_capacity(n),
        next_stem: Vec::with_capacity(n),
        first_stem: WeightedIndex::new(weights(&mut rng, n_stems)).expect("weights"),
    };
    for t in 0..n {
        let has_succ = !chain.succ[t].is_empty();
        chain.end.push(match (has_succ, t < n_stems) {
            (false, _) => 1.0,
            (true, true) => rng.gen_range(0.02..0.1),
            (true, false) => rng.gen_range(0.4..0.8),
        });
        let w = weights(&mut rng, chain.succ[t].len());
        chain
            .succ_dist
            .push(has_succ.then(|| WeightedIndex::new(w).expect("weights")));
        chain
            .next_stem
            .push(WeightedIndex::new(weights(&mut rng, n_stems)).expect("weights"));
    }

    let stem_pool = lemma_pool(&mut rng, STEM_CONSONANTS, true);
    let func_pool = lemma_pool(&mut rng, FUNCTIONAL_CONSONANTS, false);
    let mut lemmas: Vec<Vec<String>> = vec![Vec::new(); n];
    let mut stem_iter = stem_pool.into_iter();
    let mut func_iter = func_pool.into_iter();
    let generated: HashSet<&Tag> = spec.groups.iter().flat_map(|g| &g.functional).collect();
    for (t, tg) in inventory.iter().enumerate() {
        if t < n_stems {
            lemmas[t] = stem_iter.by_ref().take(spec.stem_lemmas).collect();
        } else if generated.contains(tg) {
            lemmas[t] = func_iter.by_ref().take(spec.functional_lemmas).collect();
        }
    }
    for f in n_stems..n {
        let partners: Vec<usize> = (n_stems..n)
            .filter(|&g| g != f && !lemmas[g].is_empty() && pred[f].is_disjoint(&pred[g]))
            .collect();
        for k in 0..lemmas[f].len() {
            let roll: f64 = rng.gen();
            if partners.is_empty() || roll >= spec.ambiguity {
                continue;
            }
            let g = *partners.choose(&mut rng).expect("partner");
            let lemma = lemmas[f][k].clone();
            if !lemmas[g].contains(&lemma) {
                lemmas[g].push(lemma);
            }
        }
    }
    let lemma_dist: Vec<Option<WeightedIndex<f64>>> = lemmas
        .iter()
        .map(|ls| {
            (!ls.is_empty()).then(|| {
                WeightedIndex::new((0..ls.len()).map(|r| 1.0 / (r + 1) as f64)).expect("weights")
            })
        })
        .collect();

    let mut corpus = Vec::with_capacity(spec.sentences);
    for _ in 0..spec.sentences {
        let len = rng.gen_range(spec.min_eojeols..=spec.max_eojeols);
        let mut last: Option<usize> = None;
        let mut eojeols = Vec::with_capacity(len);
        for _ in 0..len {
            let mut t = match last {
                None => chain.first_stem.sample(&mut rng),
                Some(l) => chain.next_stem[l].sample(&mut rng),
            };
            let mut morphemes = Vec::new();
            loop {
                let dist = lemma_dist[t].as_ref().expect("generated tag has lemmas");
                morphemes.push(TaggedMorpheme {
                    lemma: lemmas[t][dist.sample(&mut rng)].clone(),
                    tag: inventory[t].clone(),
                });
                let close: f64 = rng.gen();
                if close < chain.end[t] || morphemes.len() == MAX_MORPHEMES_PER_EOJEOL {
                    break;
                }
                let d = chain.succ_dist[t].as_ref().expect("successors");
                t = chain.succ[t][d.sample(&mut rng)];
            }
            last = Some(t);
            eojeols.push(TaggedEojeol {
                surface: morphemes.iter().map(|m| m.lemma.as_str()).collect(),
                morphemes,
            });
        }
        corpus.push(TaggedSentence::new(eojeols));
    }

    let mut perturbed_sites = 0;
    for s in &mut corpus {
        let original = s.clone();
        for (e, eo) in s.eojeols.iter_mut().enumerate() {
            for (k, m) in eo.morphemes.iter_mut().enumerate() {
                let hit = spec.perturbations.iter().find(|p| {
                    m.tag == p.from && p.probe.read(&original, e, k) == Some(p.value.as_str())
                });
                if let Some(p) = hit {
                    m.tag = p.to.clone();
                    perturbed_sites += 1;
                }
            }
        }
    }

    let mut entries = Vec::new();
    let mut seen = HashSet::new();
    let mut enroll = |lemma: &str, t: usize| {
        if seen.insert((lemma.to_string(), t)) {
            entries.push(LexEntry {
                surface: lemma.to_string(),
                lemma: lemma.to_string(),
                tag_path: path_for(&inventory[t], t < n_stems),
            });
        }
    };
    for (t, ls) in lemmas.iter().enumerate() {
        for l in ls {
            enroll(l, t);
        }
    }
    for p in &spec.perturbations {
        for l in &lemmas[index(&p.from)] {
            enroll(l, index(&p.to));
        }
    }
    let connectivity = ConnectivityTable::restrict(vec![
        (TagPath::parse("stem")?, TagPath::parse("func")?),
        (TagPath::parse("func")?, TagPath::parse("func")?),
    ]);
    let lexicon = Lexicon::new(entries, connectivity)?;
    let projection = TagsetProjection::new(
        inventory
            .iter()
            .enumerate()
            .map(|(t, tg)| (path_for(tg, t < n_stems), tg.clone()))
            .collect(),
        inventory[0].clone(),
    )?;
    Ok(Synthetic {
        corpus,
        lexicon,
        projection,
        perturbed_sites,
    })
}
