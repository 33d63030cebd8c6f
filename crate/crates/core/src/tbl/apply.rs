use crate::sentence::TaggedSentence;
use crate::tbl::{Anchor, Feature, Probe, Rule, RuleList};

/// Position `(eojeol, morpheme)` read by `probe` from the morpheme at `(e, k)`.
pub(crate) fn locate(
    probe: &Probe,
    s: &TaggedSentence,
    e: usize,
    k: usize,
) -> Option<(usize, usize)> {
    match *probe {
        Probe::Eojeol { offset, anchor, .. } => {
            let target = usize::try_from(e as isize + offset as isize).ok()?;
            let n = s.eojeols.get(target)?.morphemes.len();
            if n == 0 {
                return None;
            }
            Some((target, if anchor == Anchor::First { 0 } else { n - 1 }))
        }
        Probe::Within { next } => {
            let k2 = if next { k + 1 } else { k.checked_sub(1)? };
            (k2 < s.eojeols[e].morphemes.len()).then_some((e, k2))
        }
    }
}

/// Whether `rule` fires at `(e, k)`. Tags are compared through
/// `tag_is(e, k, label)` so callers can overlay pending changes.
pub(crate) fn fires_with(
    rule: &Rule,
    s: &TaggedSentence,
    e: usize,
    k: usize,
    tag_is: &dyn Fn(usize, usize, &str) -> bool,
) -> bool {
    if s.eojeols[e].morphemes[k].lemma != rule.lexeme || !tag_is(e, k, rule.from.as_str()) {
        return false;
    }
    rule.conditions
        .iter()
        .all(|(p, v)| match locate(p, s, e, k) {
            None => false,
            Some((e2, k2)) => match p {
                Probe::Eojeol {
                    feature: Feature::Lexeme,
                    ..
                } => s.eojeols[e2].morphemes[k2].lemma == *v,
                _ => tag_is(e2, k2, v),
            },
        })
}

pub fn fires(rule: &Rule, s: &TaggedSentence, e: usize, k: usize) -> bool {
    fires_with(rule, s, e, k, &|e2, k2, label| {
        s.eojeols[e2].morphemes[k2].tag.as_str() == label
    })
}

/// Applies one rule left to right in place; later matches see earlier
/// rewrites. Returns the number of morphemes changed.
pub fn apply_rule(rule: &Rule, s: &mut TaggedSentence) -> usize {
    let mut changed = 0;
    for e in 0..s.eojeols.len() {
        for k in 0..s.eojeols[e].morphemes.len() {
            if fires(rule, s, e, k) {
                s.eojeols[e].morphemes[k].tag = rule.to.clone();
                changed += 1;
            }
        }
    }
    changed
}

/// Applies every rule in order to every sentence.
pub fn apply_rules(rules: &RuleList, sentences: &mut [TaggedSentence]) -> usize {
    let mut changed = 0;
    for rule in &rules.rules {
        for s in sentences.iter_mut() {
            changed += apply_rule(rule, s);
        }
    }
    changed
}
