//! Dictionary-driven segmentation of Eojeols into candidate morpheme sequences.
//!
//! The Eojeol is scanned left to right; every dictionary surface starting at
//! each character offset becomes an edge. A backward pass marks the edges from
//! which a connectivity-legal path reaches the end of the Eojeol and records the
//! fewest/most morphemes such a completion needs. Complete covers are then
//! produced by morpheme count, fewest first, which lets a candidate cap stop the
//! enumeration early without changing which candidates are kept.

use crate::error::{Error, Result, SegmentationFailure};
use crate::lexicon::{EojeolAnalysis, LexEntry, Lexicon, Morpheme, SentenceLattice};
use crate::tagset::TagsetProjection;

/// Splits raw text into Eojeols on Unicode whitespace.
pub fn tokenize(text: &str) -> Vec<&str> {
    text.split_whitespace().collect()
}

struct Edge {
    start: usize,
    end: usize,
    entry: usize,
}

struct Graph<'a> {
    lex: &'a Lexicon,
    n: usize,
    edges: Vec<Edge>,
    from: Vec<Vec<usize>>,
    // For each edge: can a legal path continue from it to the end, and with how
    // many morphemes (counting the edge itself) at least / at most.
    finishes: Vec<bool>,
    min_rest: Vec<usize>,
    max_rest: Vec<usize>,
}

impl<'a> Graph<'a> {
    fn build(lex: &'a Lexicon, chars: &[char]) -> Graph<'a> {
        let n = chars.len();
        let mut edges = Vec::new();
        let mut from = vec![Vec::new(); n + 1];
        for start in 0..n {
            for (end, entries) in lex.trie().prefixes_at(chars, start) {
                for &entry in entries {
                    from[start].push(edges.len());
                    edges.push(Edge { start, end, entry });
                }
            }
        }
        let mut g = Graph {
            lex,
            n,
            finishes: vec![false; edges.len()],
            min_rest: vec![usize::MAX; edges.len()],
            max_rest: vec![0; edges.len()],
            edges,
            from,
        };
        g.backward();
        g
    }

    fn entry(&self, edge: usize) -> &LexEntry {
        &self.lex.entries()[self.edges[edge].entry]
    }

    fn connects(&self, left: usize, right: usize) -> bool {
        self.lex
            .connectivity()
            .allows(&self.entry(left).tag_path, &self.entry(right).tag_path)
    }

    fn backward(&mut self) {
        for start in (0..self.n).rev() {
            for k in 0..self.from[start].len() {
                let e = self.from[start][k];
                let end = self.edges[e].end;
                if end == self.n {
                    self.finishes[e] = true;
                    self.min_rest[e] = 1;
                    self.max_rest[e] = 1;
                    continue;
                }
                for &next in &self.from[end] {
                    if self.finishes[next] && self.connects(e, next) {
                        self.finishes[e] = true;
                        self.min_rest[e] = self.min_rest[e].min(self.min_rest[next] + 1);
                        self.max_rest[e] = self.max_rest[e].max(self.max_rest[next] + 1);
                    }
                }
            }
        }
    }

    /// Furthest offset reached by any legal partial cover starting at 0.
    fn matched_prefix(&self) -> usize {
        let mut reached = vec![false; self.edges.len()];
        let mut best = 0;
        for start in 0..self.n {
            for &e in &self.from[start] {
                let ok = start == 0
                    || (0..self.edges.len())
                        .any(|p| reached[p] && self.edges[p].end == start && self.connects(p, e));
                if ok {
                    reached[e] = true;
                    best = best.max(self.edges[e].end);
                }
            }
        }
        best
    }

    fn starts(&self) -> impl Iterator<Item = usize> + '_ {
        self.from[0].iter().copied().filter(|&e| self.finishes[e])
    }

    /// Appends every legal cover of exactly `count` morphemes to `out`.
    fn covers_of_len(&self, count: usize, out: &mut Vec<Vec<usize>>) {
        let mut path = Vec::with_capacity(count);
        for e in self.starts() {
            self.extend(e, count, &mut path, out);
        }
    }

    fn extend(&self, e: usize, remaining: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining < self.min_rest[e] || remaining > self.max_rest[e] {
            return;
        }
        path.push(e);
        let end = self.edges[e].end;
        if end == self.n {
            if remaining == 1 {
                out.push(path.clone());
            }
        } else {
            for &next in &self.from[end] {
                if self.finishes[next] && self.connects(e, next) {
                    self.extend(next, remaining - 1, path, out);
                }
            }
        }
        path.pop();
    }

    fn morphemes(&self, cover: &[usize], chars: &[char], proj: &TagsetProjection) -> Vec<Morpheme> {
        cover
            .iter()
            .map(|&e| {
                let edge = &self.edges[e];
                let entry = self.entry(e);
                debug_assert_eq!(
                    chars[edge.start..edge.end].iter().collect::<String>(),
                    entry.surface
                );
                Morpheme {
                    surface: entry.surface.clone(),
                    lemma: entry.lemma.clone(),
                    tag_path: entry.tag_path.clone(),
                    tag: proj.project(&entry.tag_path),
                }
            })
            .collect()
    }
}

fn sort_key(candidate: &[Morpheme]) -> (String, String) {
    let tags: Vec<&str> = candidate.iter().map(|m| m.tag.as_str()).collect();
    let full: Vec<String> = candidate
        .iter()
        .map(|m| format!("{}/{}/{}", m.surface, m.lemma, m.tag_path))
        .collect();
    (tags.join(" "), full.join(" "))
}

fn run(
    eojeol: &str,
    lex: &Lexicon,
    proj: &TagsetProjection,
    cap: Option<usize>,
) -> Result<EojeolAnalysis> {
    if eojeol.is_empty() {
        return Err(Error::InvalidArgument("empty eojeol".into()));
    }
    if cap == Some(0) {
        return Err(Error::InvalidArgument(
            "candidate cap must be at least 1".into(),
        ));
    }
    let chars: Vec<char> = eojeol.chars().collect();
    let graph = Graph::build(lex, &chars);
    let Some(min_len) = graph.starts().map(|e| graph.min_rest[e]).min() else {
        return Err(Error::Segmentation(SegmentationFailure {
            eojeol: eojeol.to_string(),
            eojeol_index: None,
            matched_chars: graph.matched_prefix(),
        }));
    };
    let max_len = graph
        .starts()
        .map(|e| graph.max_rest[e])
        .max()
        .unwrap_or(min_len);

    let mut candidates = Vec::new();
    for count in min_len..=max_len {
        let mut covers = Vec::new();
        graph.covers_of_len(count, &mut covers);
        let mut level: Vec<(String, String, Vec<Morpheme>)> = covers
            .iter()
            .map(|c| {
                let ms = graph.morphemes(c, &chars, proj);
                let (a, b) = sort_key(&ms);
                (a, b, ms)
            })
            .collect();
        level.sort_by(|x, y| (&x.0, &x.1).cmp(&(&y.0, &y.1)));
        for (_, _, ms) in level {
            if cap.is_some_and(|c| candidates.len() >= c) {
                break;
            }
            candidates.push(ms);
        }
        if cap.is_some_and(|c| candidates.len() >= c) {
            break;
        }
    }
    Ok(EojeolAnalysis {
        surface: eojeol.to_string(),
        candidates,
    })
}

/// Segments one Eojeol, keeping at most `cap` candidates: fewest morphemes
/// first, ties ordered by the tag sequence and then the full serialization.
pub fn segment(
    eojeol: &str,
    lex: &Lexicon,
    proj: &TagsetProjection,
    cap: usize,
) -> Result<EojeolAnalysis> {
    run(eojeol, lex, proj, Some(cap))
}

/// Like [`segment`] without a cap: every legal cover, in the same order.
pub fn segment_all(eojeol: &str, lex: &Lexicon, proj: &TagsetProjection) -> Result<EojeolAnalysis> {
    run(eojeol, lex, proj, None)
}

pub fn analyze_sentence<S: AsRef<str>>(
    eojeols: &[S],
    lex: &Lexicon,
    proj: &TagsetProjection,
    cap: usize,
) -> Result<SentenceLattice> {
    if eojeols.is_empty() {
        return Err(Error::InvalidArgument("empty sentence".into()));
    }
    let mut out = Vec::with_capacity(eojeols.len());
    for (i, e) in eojeols.iter().enumerate() {
        match segment(e.as_ref(), lex, proj, cap) {
            Ok(a) => out.push(a),
            Err(Error::Segmentation(mut f)) => {
                f.eojeol_index = Some(i);
                return Err(Error::Segmentation(f));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(SentenceLattice { eojeols: out })
}
