use crate::error::{Error, Result};
use crate::hmm::{HmmModel, Observation};

#[derive(Debug, Clone, PartialEq)]
pub struct Decoded {
    /// Tag index per observation.
    pub tags: Vec<usize>,
    /// Joint log probability of the observations and `tags`.
    pub score: f64,
}

/// Best tag sequence under the bigram model, restricted to each observation's
/// allowed tags. Among equal scores the sequence with the lowest tag index at
/// the latest differing position wins.
pub fn viterbi(model: &HmmModel, obs: &[Observation]) -> Result<Decoded> {
    viterbi_linked(model, obs, &|_, _, _| true)
}

/// [`viterbi`] with an extra structural constraint: `link(i, a, b)` says
/// whether tag `a` at position `i` may be followed by tag `b` at `i + 1`.
pub fn viterbi_linked(
    model: &HmmModel,
    obs: &[Observation],
    link: &dyn Fn(usize, usize, usize) -> bool,
) -> Result<Decoded> {
    if obs.is_empty() {
        return Err(Error::Decode("empty morpheme sequence".into()));
    }
    let states: Vec<Vec<usize>> = obs
        .iter()
        .map(|o| {
            let mut s = model.allowed(o).to_vec();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();
    if let Some(t) = states.iter().flatten().find(|&&t| t >= model.n_tags()) {
        return Err(Error::Decode(format!("tag index {} out of range", t)));
    }

    let mut delta: Vec<Vec<f64>> = Vec::with_capacity(obs.len());
    let mut back: Vec<Vec<usize>> = Vec::with_capacity(obs.len());
    delta.push(
        states[0]
            .iter()
            .map(|&t| model.log_trans(None, t) + model.log_emit(t, &obs[0].key))
            .collect(),
    );
    back.push(vec![0; states[0].len()]);

    for i in 1..obs.len() {
        let prev_states = &states[i - 1];
        let prev_delta = &delta[i - 1];
        let mut row = Vec::with_capacity(states[i].len());
        let mut bp = Vec::with_capacity(states[i].len());
        for &t in &states[i] {
            let mut best = f64::NEG_INFINITY;
            let mut arg = usize::MAX;
            for (k, &s) in prev_states.iter().enumerate() {
                if prev_delta[k] == f64::NEG_INFINITY || !link(i - 1, s, t) {
                    continue;
                }
                let v = prev_delta[k] + model.log_trans(Some(s), t);
                if v > best || arg == usize::MAX && v == best {
                    best = v;
                    arg = k;
                }
            }
            if arg == usize::MAX {
                row.push(f64::NEG_INFINITY);
                bp.push(0);
            } else {
                row.push(best + model.log_emit(t, &obs[i].key));
                bp.push(arg);
            }
        }
        delta.push(row);
        back.push(bp);
    }

    let last = delta.last().unwrap();
    let mut best = f64::NEG_INFINITY;
    let mut arg = None;
    for (k, &v) in last.iter().enumerate() {
        if v > best {
            best = v;
            arg = Some(k);
        }
    }
    let Some(mut k) = arg else {
        return Err(Error::Decode(
            "every tag sequence is structurally forbidden".into(),
        ));
    };
    let mut tags = vec![0; obs.len()];
    for i in (0..obs.len()).rev() {
        tags[i] = states[i][k];
        k = back[i][k];
    }
    Ok(Decoded { tags, score: best })
}

/// Log score of a given tag sequence, summed left to right.
pub fn rescore(model: &HmmModel, obs: &[Observation], tags: &[usize]) -> f64 {
    let mut score = 0.0;
    let mut prev = None;
    for (o, &t) in obs.iter().zip(tags) {
        score += model.log_trans(prev, t);
        score += model.log_emit(t, &o.key);
        prev = Some(t);
    }
    score
}
