use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::sentence::TaggedSentence;
use crate::tagset::Tag;
use crate::tbl::apply::{apply_rule, fires_with};
use crate::tbl::{Probe, Rule, RuleList, RuleSchema};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LearnOptions {
    /// Stop when the best rule's net correction count falls below this.
    pub min_score: i64,
    pub max_rules: usize,
    /// Skip candidates whose correction upper bound cannot beat the current
    /// best. Does not change the result.
    pub prune: bool,
}

impl Default for LearnOptions {
    fn default() -> Self {
        LearnOptions {
            min_score: 2,
            max_rules: 1000,
            prune: true,
        }
    }
}

/// Outcome of applying a rule: `good` wrong tags made right, `bad` right tags
/// made wrong.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RuleScore {
    pub good: usize,
    pub bad: usize,
}

impl RuleScore {
    pub fn net(&self) -> i64 {
        self.good as i64 - self.bad as i64
    }
}

fn check_parallel(current: &[TaggedSentence], gold: &[TaggedSentence]) -> Result<()> {
    if current.len() != gold.len() {
        return Err(Error::InvalidArgument(format!(
            "tagged corpus has {} sentences, gold has {}",
            current.len(),
            gold.len()
        )));
    }
    for (i, (c, g)) in current.iter().zip(gold).enumerate() {
        if !c.same_segmentation(g) {
            return Err(Error::InvalidArgument(format!(
                "sentence {} is segmented differently in the tagged and gold corpora",
                i
            )));
        }
    }
    Ok(())
}

fn gold_tag<'a>(gold: &'a [TaggedSentence], (s, e, k): (usize, usize, usize)) -> &'a Tag {
    &gold[s].eojeols[e].morphemes[k].tag
}

fn tally(score: &mut RuleScore, rule: &Rule, gold: &Tag) {
    if *gold == rule.to {
        score.good += 1;
    } else if *gold == rule.from {
        score.bad += 1;
    }
}

/// Net effect of applying `rule` in place, left to right, to `current`.
pub fn score_rule(
    rule: &Rule,
    current: &[TaggedSentence],
    gold: &[TaggedSentence],
) -> Result<RuleScore> {
    check_parallel(current, gold)?;
    let mut score = RuleScore::default();
    for (si, s) in current.iter().enumerate() {
        let mut work = s.clone();
        let before = work.clone();
        apply_rule(rule, &mut work);
        for (e, (a, b)) in before.eojeols.iter().zip(&work.eojeols).enumerate() {
            for (k, (x, y)) in a.morphemes.iter().zip(&b.morphemes).enumerate() {
                if x.tag != y.tag {
                    tally(&mut score, rule, gold_tag(gold, (si, e, k)));
                }
            }
        }
    }
    Ok(score)
}

type Pos = (usize, usize, usize);

/// Score of `rule` against the positions holding its lemma and source tag,
/// given in scan order.
fn realized(
    rule: &Rule,
    state: &[TaggedSentence],
    gold: &[TaggedSentence],
    positions: &[Pos],
) -> RuleScore {
    let mut score = RuleScore::default();
    let mut changed: Vec<(usize, usize)> = Vec::new();
    let mut current_sentence = usize::MAX;
    for &(si, e, k) in positions {
        if si != current_sentence {
            current_sentence = si;
            changed.clear();
        }
        let s = &state[si];
        let tag_is = |e2: usize, k2: usize, label: &str| {
            if changed.contains(&(e2, k2)) {
                rule.to.as_str() == label
            } else {
                s.eojeols[e2].morphemes[k2].tag.as_str() == label
            }
        };
        if fires_with(rule, s, e, k, &tag_is) {
            changed.push((e, k));
            tally(&mut score, rule, gold_tag(gold, (si, e, k)));
        }
    }
    score
}

fn instantiate(
    schema: &RuleSchema,
    s: &TaggedSentence,
    e: usize,
    k: usize,
) -> Option<Vec<(Probe, String)>> {
    schema
        .probes()
        .iter()
        .map(|p| p.read(s, e, k).map(|v| (*p, v.to_string())))
        .collect()
}

/// Greedy transformation learning. `current` is the tagger's output on the
/// same segmentation as `gold`. Each round instantiates every schema at every
/// remaining error, picks the candidate with the highest net correction count
/// (ties: more corrections, then smaller rule text), applies it, and repeats.
pub fn learn_rules(
    current: &[TaggedSentence],
    gold: &[TaggedSentence],
    schemas: &[RuleSchema],
    opts: &LearnOptions,
) -> Result<RuleList> {
    check_parallel(current, gold)?;
    if opts.min_score < 1 {
        return Err(Error::InvalidArgument(
            "min_score must be at least 1".into(),
        ));
    }
    if schemas.is_empty() {
        return Err(Error::InvalidArgument("no rule schemas given".into()));
    }
    let mut state: Vec<TaggedSentence> = current.to_vec();
    let mut rules = Vec::new();

    while rules.len() < opts.max_rules {
        let mut by_key: HashMap<(&str, &str), Vec<Pos>> = HashMap::new();
        let mut bound: HashMap<(&str, &str, &str), usize> = HashMap::new();
        let mut candidates: HashSet<Rule> = HashSet::new();
        for (si, s) in state.iter().enumerate() {
            for (e, eo) in s.eojeols.iter().enumerate() {
                for (k, m) in eo.morphemes.iter().enumerate() {
                    by_key
                        .entry((&m.lemma, m.tag.as_str()))
                        .or_default()
                        .push((si, e, k));
                    let g = gold_tag(gold, (si, e, k));
                    if *g == m.tag {
                        continue;
                    }
                    *bound
                        .entry((&m.lemma, m.tag.as_str(), g.as_str()))
                        .or_default() += 1;
                    for schema in schemas {
                        if let Some(conditions) = instantiate(schema, s, e, k) {
                            candidates.insert(Rule {
                                lexeme: m.lemma.clone(),
                                from: m.tag.clone(),
                                conditions,
                                to: g.clone(),
                                effectiveness: 0,
                            });
                        }
                    }
                }
            }
        }
        if candidates.is_empty() {
            break;
        }
        let mut ranked: Vec<(usize, String, Rule)> = candidates
            .into_iter()
            .map(|r| {
                let b = bound[&(r.lexeme.as_str(), r.from.as_str(), r.to.as_str())];
                (b, r.body(), r)
            })
            .collect();
        ranked.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));

        let mut best: Option<(RuleScore, &String, &Rule)> = None;
        for (b, body, rule) in &ranked {
            if let Some((bs, _, _)) = &best {
                if opts.prune && (*b as i64) < bs.net() {
                    break;
                }
            }
            let positions = &by_key[&(rule.lexeme.as_str(), rule.from.as_str())];
            let sc = realized(rule, &state, gold, positions);
            let better = match &best {
                None => true,
                Some((bs, bbody, _)) => {
                    (sc.net(), sc.good) > (bs.net(), bs.good)
                        || (sc.net(), sc.good) == (bs.net(), bs.good) && body < *bbody
                }
            };
            if better {
                best = Some((sc, body, rule));
            }
        }
        let (score, _, rule) = best.expect("at least one candidate");
        if score.net() < opts.min_score {
            break;
        }
        let mut rule = rule.clone();
        rule.effectiveness = score.net();
        for s in state.iter_mut() {
            apply_rule(&rule, s);
        }
        rules.push(rule);
    }
    Ok(RuleList { rules })
}
