//! Baum-Welch re-estimation on morphologically analyzed, untagged text.
//!
//! The E-step runs scaled forward-backward restricted to each morpheme's
//! dictionary tags. The M-step applies the same add-lambda smoothing as
//! supervised training, row by row; a smoothed row is only adopted when it does
//! not lower that row's expected complete-data log-likelihood, otherwise the
//! previous row is kept. This keeps the corpus likelihood non-decreasing.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::hmm::{HmmModel, Observation};

#[derive(Debug, Clone)]
pub struct EmRun {
    pub model: HmmModel,
    /// Corpus log-likelihood under the model entering each iteration.
    pub log_likelihoods: Vec<f64>,
}

struct Expected {
    trans: Vec<Vec<f64>>,
    emit: Vec<HashMap<String, f64>>,
    log_likelihood: f64,
}

struct Scaled {
    alpha: Vec<Vec<f64>>,
    scale: Vec<f64>,
}

fn states(model: &HmmModel, obs: &[Observation]) -> Vec<Vec<usize>> {
    obs.iter()
        .map(|o| {
            let mut s = model.allowed(o).to_vec();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect()
}

fn forward(model: &HmmModel, obs: &[Observation], st: &[Vec<usize>]) -> Option<Scaled> {
    let mut alpha = Vec::with_capacity(obs.len());
    let mut scale = Vec::with_capacity(obs.len());
    for i in 0..obs.len() {
        let mut row: Vec<f64> = st[i]
            .iter()
            .map(|&t| {
                let into = if i == 0 {
                    model.trans(None, t)
                } else {
                    st[i - 1]
                        .iter()
                        .zip(&alpha[i - 1] as &Vec<f64>)
                        .map(|(&s, a)| a * model.trans(Some(s), t))
                        .sum()
                };
                into * model.emit(t, &obs[i].key)
            })
            .collect();
        let c: f64 = row.iter().sum();
        if !(c > 0.0) {
            return None;
        }
        row.iter_mut().for_each(|a| *a /= c);
        alpha.push(row);
        scale.push(c);
    }
    Some(Scaled { alpha, scale })
}

/// Log-likelihood of one observation sequence (sum of log scaling factors).
pub fn forward_log_likelihood(model: &HmmModel, obs: &[Observation]) -> Result<f64> {
    let st = states(model, obs);
    forward(model, obs, &st)
        .map(|f| f.scale.iter().map(|c| c.ln()).sum())
        .ok_or_else(|| Error::Training("sequence admits no tag sequence".into()))
}

fn e_step(model: &HmmModel, corpus: &[Vec<Observation>]) -> Result<Expected> {
    let n = model.n_tags();
    let mut ex = Expected {
        trans: vec![vec![0.0; n]; n + 1],
        emit: vec![HashMap::new(); n],
        log_likelihood: 0.0,
    };
    for (si, obs) in corpus.iter().enumerate() {
        if obs.is_empty() {
            continue;
        }
        let st = states(model, obs);
        let Scaled { alpha, scale } = forward(model, obs, &st).ok_or_else(|| {
            Error::Training(format!("sentence {} admits no legal tag sequence", si))
        })?;
        let len = obs.len();
        let mut beta: Vec<Vec<f64>> = vec![Vec::new(); len];
        beta[len - 1] = vec![1.0; st[len - 1].len()];
        for i in (0..len - 1).rev() {
            let next = &st[i + 1];
            let weights: Vec<f64> = next
                .iter()
                .zip(&beta[i + 1])
                .map(|(&t, b)| model.emit(t, &obs[i + 1].key) * b / scale[i + 1])
                .collect();
            beta[i] = st[i]
                .iter()
                .map(|&s| {
                    next.iter()
                        .zip(&weights)
                        .map(|(&t, w)| model.trans(Some(s), t) * w)
                        .sum()
                })
                .collect();
        }
        for i in 0..len {
            for (k, &t) in st[i].iter().enumerate() {
                let gamma = alpha[i][k] * beta[i][k];
                *ex.emit[t].entry(obs[i].key.clone()).or_default() += gamma;
                if i == 0 {
                    ex.trans[0][t] += gamma;
                }
            }
            if i > 0 {
                for (k, &t) in st[i].iter().enumerate() {
                    let w = model.emit(t, &obs[i].key) * beta[i][k] / scale[i];
                    for (j, &s) in st[i - 1].iter().enumerate() {
                        ex.trans[s + 1][t] += alpha[i - 1][j] * model.trans(Some(s), t) * w;
                    }
                }
            }
        }
        ex.log_likelihood += scale.iter().map(|c| c.ln()).sum::<f64>();
    }
    Ok(ex)
}

fn expected_ll<'a>(counts: impl Iterator<Item = (f64, f64)> + 'a) -> f64 {
    counts
        .filter(|(c, _)| *c > 0.0)
        .map(|(c, p)| c * p.ln())
        .sum()
}

fn m_step(model: &HmmModel, ex: &Expected, support: &[BTreeSet<String>]) -> Result<HmmModel> {
    let n = model.n_tags();
    let sm = *model.smoothing();
    let mut trans = Vec::with_capacity(n + 1);
    for (row, counts) in ex.trans.iter().enumerate() {
        let prev = row.checked_sub(1);
        let old = model.trans_row(prev);
        let total: f64 = counts.iter().sum();
        let new: Vec<f64> = counts
            .iter()
            .map(|c| (c + sm.lambda_trans) / (total + sm.lambda_trans * n as f64))
            .collect();
        let q_new = expected_ll(counts.iter().copied().zip(new.iter().copied()));
        let q_old = expected_ll(counts.iter().copied().zip(old.iter().copied()));
        trans.push(if q_new >= q_old { new } else { old.to_vec() });
    }

    let mut emit = Vec::with_capacity(n);
    let mut unk = Vec::with_capacity(n);
    for t in 0..n {
        let counts = &ex.emit[t];
        let keys = &support[t];
        let (new_row, new_unk): (BTreeMap<String, f64>, f64) = if keys.is_empty() {
            (BTreeMap::new(), 1.0)
        } else {
            let total: f64 = keys
                .iter()
                .map(|k| counts.get(k).copied().unwrap_or(0.0))
                .sum();
            let keep = 1.0 - sm.unk_mass;
            let denom = total + sm.lambda_emit * keys.len() as f64;
            let row = keys
                .iter()
                .map(|k| {
                    let c = counts.get(k).copied().unwrap_or(0.0);
                    (k.clone(), keep * (c + sm.lambda_emit) / denom)
                })
                .collect();
            (row, sm.unk_mass)
        };
        let new_p = |k: &str| match new_row.get(k) {
            Some(&p) => p,
            None => new_unk / sm.unseen_count,
        };
        let mut q_new = 0.0;
        let mut q_old = 0.0;
        let mut ordered: Vec<(&String, &f64)> = counts.iter().collect();
        ordered.sort_by(|a, b| a.0.cmp(b.0));
        for (k, &c) in ordered {
            if c > 0.0 {
                q_new += c * new_p(k).ln();
                q_old += c * model.emit(t, k).ln();
            }
        }
        if q_new >= q_old {
            emit.push(new_row);
            unk.push(new_unk);
        } else {
            emit.push(model.emission_row(t).clone());
            unk.push(model.unk_mass(t));
        }
    }
    HmmModel::from_parts(
        model.tags().to_vec(),
        trans,
        emit,
        unk,
        sm,
        model.open_class().to_vec(),
    )
    .map_err(|e| Error::Training(format!("M-step broke normalization: {}", e)))
}

/// Runs at most `max_iters` EM iterations, stopping early once the corpus
/// log-likelihood improves by less than `tol`.
pub fn baum_welch(
    init: &HmmModel,
    corpus: &[Vec<Observation>],
    max_iters: usize,
    tol: f64,
) -> Result<EmRun> {
    if max_iters == 0 {
        return Err(Error::InvalidArgument(
            "max_iters must be at least 1".into(),
        ));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tol must be positive".into()));
    }
    let n = init.n_tags();
    let mut support = vec![BTreeSet::new(); n];
    for (si, obs) in corpus.iter().enumerate() {
        for o in obs {
            if o.allowed.iter().any(|&t| t >= n) {
                return Err(Error::Training(format!(
                    "sentence {} has a tag index out of range",
                    si
                )));
            }
            for &t in init.allowed(o) {
                support[t].insert(o.key.clone());
            }
        }
    }

    let mut model = init.clone();
    let mut lls = Vec::new();
    for it in 0..max_iters {
        let ex = e_step(&model, corpus)?;
        let ll = ex.log_likelihood;
        let converged = it > 0 && ll - lls[it - 1] < tol;
        lls.push(ll);
        if converged {
            break;
        }
        model = m_step(&model, &ex, &support)?;
    }
    Ok(EmRun {
        model,
        log_likelihoods: lls,
    })
}
