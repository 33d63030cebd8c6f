//! Random instance generators and brute-force oracles shared by the property
//! and acceptance tests. Oracles only use the public table lookups
//! (`trans`, `emit`, dictionary entries); they never call the algorithms they
//! check.
#![allow(dead_code)]

use std::collections::BTreeMap;

use morphtag::hmm::{HmmModel, Observation, Smoothing};
use morphtag::lexicon::{ConnectivityTable, LexEntry, Lexicon};
use morphtag::sentence::{TaggedEojeol, TaggedMorpheme, TaggedSentence};
use morphtag::tagset::{Tag, TagPath, TagsetProjection};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn tag(s: &str) -> Tag {
    Tag::new(s).unwrap()
}

fn normalized(rng: &mut ChaCha8Rng, n: usize, mass: f64) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| mass * x / total).collect()
}

/// Random dense model over `tags`; each tag emits a random non-empty subset
/// of `vocab`.
pub fn random_model(
    rng: &mut ChaCha8Rng,
    tags: &[Tag],
    vocab: &[String],
    smoothing: Smoothing,
) -> HmmModel {
    let n = tags.len();
    let trans: Vec<Vec<f64>> = (0..=n).map(|_| normalized(rng, n, 1.0)).collect();
    let mut emit = Vec::with_capacity(n);
    let mut unk = Vec::with_capacity(n);
    for _ in 0..n {
        let k = rng.gen_range(1..=vocab.len());
        let keys: Vec<&String> = vocab.choose_multiple(rng, k).collect();
        let u = rng.gen_range(0.01..0.2);
        let probs = normalized(rng, keys.len(), 1.0 - u);
        emit.push(
            keys.into_iter()
                .cloned()
                .zip(probs)
                .collect::<BTreeMap<_, _>>(),
        );
        unk.push(u);
    }
    HmmModel::from_parts(tags.to_vec(), trans, emit, unk, smoothing, vec![]).unwrap()
}

pub fn tags(n: usize) -> Vec<Tag> {
    (0..n).map(|i| tag(&format!("T{}", i))).collect()
}

pub fn vocab(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("w{}", i)).collect()
}

/// Random lemma -> non-empty tag subset dictionary.
pub fn random_dictionary(
    rng: &mut ChaCha8Rng,
    vocab: &[String],
    n_tags: usize,
) -> BTreeMap<String, Vec<usize>> {
    vocab
        .iter()
        .map(|w| {
            let k = rng.gen_range(1..=n_tags);
            let mut set: Vec<usize> = (0..n_tags).collect();
            set.shuffle(rng);
            set.truncate(k);
            set.sort_unstable();
            (w.clone(), set)
        })
        .collect()
}

pub fn random_observations(
    rng: &mut ChaCha8Rng,
    dict: &BTreeMap<String, Vec<usize>>,
    len: usize,
) -> Vec<Observation> {
    let keys: Vec<&String> = dict.keys().collect();
    (0..len)
        .map(|_| {
            let k = keys[rng.gen_range(0..keys.len())];
            Observation::new(k.clone(), dict[k].clone())
        })
        .collect()
}

/// Log joint probability summed left to right from table lookups.
pub fn path_score(model: &HmmModel, obs: &[Observation], path: &[usize]) -> f64 {
    let mut s = 0.0;
    let mut prev = None;
    for (o, &t) in obs.iter().zip(path) {
        s += model.trans(prev, t).ln();
        s += model.emit(t, &o.key).ln();
        prev = Some(t);
    }
    s
}

/// Every tag sequence over the allowed sets (empty set = all tags).
pub fn all_paths(model: &HmmModel, obs: &[Observation]) -> Vec<Vec<usize>> {
    let sets = allowed_sets(model, obs);
    let mut out = vec![Vec::new()];
    for set in &sets {
        out = out
            .into_iter()
            .flat_map(|p| {
                set.iter().map(move |&t| {
                    let mut q = p.clone();
                    q.push(t);
                    q
                })
            })
            .collect();
    }
    out
}

pub struct BruteBest {
    pub path: Vec<usize>,
    pub score: f64,
    /// Paths scoring within 1e-9 of the best (the decoder may return any).
    pub near_ties: Vec<Vec<usize>>,
}

fn allowed_sets(model: &HmmModel, obs: &[Observation]) -> Vec<Vec<usize>> {
    obs.iter()
        .map(|o| {
            if o.allowed.is_empty() {
                (0..model.n_tags()).collect()
            } else {
                let mut a = o.allowed.clone();
                a.sort_unstable();
                a.dedup();
                a
            }
        })
        .collect()
}

/// Exhaustive depth-first enumeration of every allowed tag sequence, scoring
/// incrementally in the same left-to-right order as [`path_score`].
pub fn brute_force_best(model: &HmmModel, obs: &[Observation]) -> BruteBest {
    struct Search<'a> {
        model: &'a HmmModel,
        obs: &'a [Observation],
        sets: Vec<Vec<usize>>,
        path: Vec<usize>,
        best: BruteBest,
    }
    fn go(s: &mut Search, i: usize, score: f64) {
        if i == s.obs.len() {
            if score > s.best.score + 1e-9 {
                s.best.path = s.path.clone();
                s.best.score = score;
                s.best.near_ties = vec![s.path.clone()];
            } else if (score - s.best.score).abs() <= 1e-9 {
                if score > s.best.score {
                    s.best.path = s.path.clone();
                    s.best.score = score;
                }
                s.best.near_ties.push(s.path.clone());
            }
            return;
        }
        let prev = s.path.last().copied();
        for k in 0..s.sets[i].len() {
            let t = s.sets[i][k];
            let next = score + s.model.trans(prev, t).ln() + s.model.emit(t, &s.obs[i].key).ln();
            s.path.push(t);
            go(s, i + 1, next);
            s.path.pop();
        }
    }
    let mut s = Search {
        model,
        obs,
        sets: allowed_sets(model, obs),
        path: Vec::with_capacity(obs.len()),
        best: BruteBest {
            path: Vec::new(),
            score: f64::NEG_INFINITY,
            near_ties: Vec::new(),
        },
    };
    go(&mut s, 0, 0.0);
    s.best
}

/// Log-likelihood by summing the joint over all allowed paths.
pub fn brute_log_likelihood(model: &HmmModel, obs: &[Observation]) -> f64 {
    all_paths(model, obs)
        .iter()
        .map(|p| path_score(model, obs, p).exp())
        .sum::<f64>()
        .ln()
}

// ---------------------------------------------------------------------------
// Segmentation instances.

pub const SEG_TAGS: [&str; 4] = ["N", "V", "J", "E"];

/// Identity-style projection over paths `N`, `V`, `J`, `E` (with optional
/// subpaths), default `X`.
pub fn identity_projection() -> TagsetProjection {
    TagsetProjection::new(
        SEG_TAGS
            .iter()
            .map(|t| (TagPath::parse(t).unwrap(), tag(t)))
            .collect(),
        tag("X"),
    )
    .unwrap()
}

pub fn random_lexicon(
    rng: &mut ChaCha8Rng,
    max_entries: usize,
    alphabet: &[char],
    allow_all: bool,
) -> Lexicon {
    let n = rng.gen_range(1..=max_entries);
    let mut entries: Vec<LexEntry> = Vec::new();
    while entries.len() < n {
        let len = rng.gen_range(1..=3);
        let surface: String = (0..len).map(|_| *alphabet.choose(rng).unwrap()).collect();
        let lemma = if rng.gen_bool(0.2) {
            format!("{}'", surface)
        } else {
            surface.clone()
        };
        let path = TagPath::parse(SEG_TAGS.choose(rng).unwrap()).unwrap();
        let e = LexEntry {
            surface,
            lemma,
            tag_path: path,
        };
        if !entries.contains(&e) {
            entries.push(e);
        }
    }
    let conn = if allow_all {
        ConnectivityTable::allow_all()
    } else {
        let mut pairs = Vec::new();
        for l in SEG_TAGS {
            for r in SEG_TAGS {
                if rng.gen_bool(0.5) {
                    pairs.push((TagPath::parse(l).unwrap(), TagPath::parse(r).unwrap()));
                }
            }
        }
        ConnectivityTable::restrict(pairs)
    };
    Lexicon::new(entries, conn).unwrap()
}

fn path_prefix(prefix: &TagPath, path: &TagPath) -> bool {
    let (a, b) = (prefix.segments(), path.segments());
    a.len() <= b.len() && a.iter().zip(b).all(|(x, y)| x == y)
}

/// Independent connectivity check from the raw pair list.
pub fn connects(conn: &ConnectivityTable, left: &TagPath, right: &TagPath) -> bool {
    match conn.mode() {
        morphtag::lexicon::ConnectivityMode::AllowAll => true,
        morphtag::lexicon::ConnectivityMode::Restrict => conn
            .pairs()
            .iter()
            .any(|(l, r)| path_prefix(l, left) && path_prefix(r, right)),
    }
}

/// All legal covers of `eojeol` by dictionary entries, as
/// `surface|lemma|path` strings joined by `+`, sorted.
pub fn brute_force_covers(eojeol: &str, lex: &Lexicon) -> Vec<String> {
    let chars: Vec<char> = eojeol.chars().collect();
    let n = chars.len();
    let mut out = Vec::new();
    for mask in 0u32..(1 << (n - 1)) {
        let mut pieces = Vec::new();
        let mut start = 0;
        for i in 1..=n {
            if i == n || mask & (1 << (i - 1)) != 0 {
                pieces.push(chars[start..i].iter().collect::<String>());
                start = i;
            }
        }
        let mut partial: Vec<Vec<&LexEntry>> = vec![Vec::new()];
        for piece in &pieces {
            let options: Vec<&LexEntry> = lex
                .entries()
                .iter()
                .filter(|e| &e.surface == piece)
                .collect();
            partial = partial
                .into_iter()
                .flat_map(|p| {
                    options.iter().filter_map(move |&e| {
                        if let Some(last) = p.last() {
                            if !connects(lex.connectivity(), &last.tag_path, &e.tag_path) {
                                return None;
                            }
                        }
                        let mut q = p.clone();
                        q.push(e);
                        Some(q)
                    })
                })
                .collect();
        }
        for cover in partial {
            out.push(
                cover
                    .iter()
                    .map(|e| format!("{}|{}|{}", e.surface, e.lemma, e.tag_path))
                    .collect::<Vec<_>>()
                    .join("+"),
            );
        }
    }
    out.sort();
    out
}

pub fn random_word(rng: &mut ChaCha8Rng, alphabet: &[char], max_len: usize) -> String {
    let len = rng.gen_range(1..=max_len);
    (0..len).map(|_| *alphabet.choose(rng).unwrap()).collect()
}

// ---------------------------------------------------------------------------
// Tagged corpora.

pub fn sentence(spec: &str) -> TaggedSentence {
    TaggedSentence::new(
        spec.split_whitespace()
            .map(|e| {
                let morphemes: Vec<TaggedMorpheme> = e
                    .split('+')
                    .map(|m| {
                        let (l, t) = m.rsplit_once('/').unwrap();
                        TaggedMorpheme {
                            lemma: l.into(),
                            tag: tag(t),
                        }
                    })
                    .collect();
                TaggedEojeol {
                    surface: morphemes.iter().map(|m| m.lemma.as_str()).collect(),
                    morphemes,
                }
            })
            .collect(),
    )
}

/// Random gold corpus over tags `A..D` and lemmas `p..t`, and a corrupted
/// copy: a morpheme is retagged when the Eojeol two ahead starts with `A`
/// (systematic) or at random (noise).
pub fn random_perturbed_pair(
    rng: &mut ChaCha8Rng,
    sentences: usize,
) -> (Vec<TaggedSentence>, Vec<TaggedSentence>) {
    let tagset = ["A", "B", "C", "D"];
    let lemmas = ["p", "q", "r", "s", "t"];
    let mut gold = Vec::new();
    for _ in 0..sentences {
        let n_e = rng.gen_range(2..=8);
        let eojeols = (0..n_e)
            .map(|_| {
                let n_m = rng.gen_range(1..=3);
                let morphemes: Vec<TaggedMorpheme> = (0..n_m)
                    .map(|_| TaggedMorpheme {
                        lemma: lemmas.choose(rng).unwrap().to_string(),
                        tag: tag(tagset.choose(rng).unwrap()),
                    })
                    .collect();
                TaggedEojeol {
                    surface: morphemes.iter().map(|m| m.lemma.as_str()).collect(),
                    morphemes,
                }
            })
            .collect();
        gold.push(TaggedSentence::new(eojeols));
    }
    let mut current = gold.clone();
    for (s, g) in current.iter_mut().zip(&gold) {
        for e in 0..s.eojeols.len() {
            let trigger = g
                .eojeols
                .get(e + 2)
                .map_or(false, |x| x.morphemes[0].tag.as_str() == "A");
            for m in &mut s.eojeols[e].morphemes {
                if (trigger && m.lemma == "p") || rng.gen_bool(0.1) {
                    m.tag = tag(tagset.choose(rng).unwrap());
                }
            }
        }
    }
    (current, gold)
}

pub fn accuracy(system: &[TaggedSentence], gold: &[TaggedSentence]) -> f64 {
    let mut total = 0;
    let mut right = 0;
    for (s, g) in system.iter().zip(gold) {
        for (a, b) in s.morphemes().zip(g.morphemes()) {
            total += 1;
            right += (a.tag == b.tag) as usize;
        }
    }
    right as f64 / total as f64
}
