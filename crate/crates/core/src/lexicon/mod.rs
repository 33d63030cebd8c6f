//! Surface-form dictionary, morpheme connectivity and Eojeol segmentation.

mod segment;
mod trie;

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::tagset::{Tag, TagPath, TagsetProjection};

pub use segment::{analyze_sentence, segment, segment_all, tokenize};
use trie::Trie;

pub const DEFAULT_CANDIDATE_CAP: usize = 32;

/// One dictionary header. Inflected forms are enrolled under their own
/// surface and point back to the uninflected lemma.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LexEntry {
    pub surface: String,
    pub lemma: String,
    pub tag_path: TagPath,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConnectivityMode {
    /// Only listed pairs may be adjacent.
    Restrict,
    /// Every pair may be adjacent; the table carries no pairs.
    AllowAll,
}

/// Pairwise morphotactic constraints over tag-path prefixes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectivityTable {
    mode: ConnectivityMode,
    pairs: Vec<(TagPath, TagPath)>,
}

impl ConnectivityTable {
    pub fn allow_all() -> Self {
        ConnectivityTable {
            mode: ConnectivityMode::AllowAll,
            pairs: Vec::new(),
        }
    }

    pub fn restrict(pairs: Vec<(TagPath, TagPath)>) -> Self {
        ConnectivityTable {
            mode: ConnectivityMode::Restrict,
            pairs,
        }
    }

    pub fn mode(&self) -> ConnectivityMode {
        self.mode
    }

    pub fn pairs(&self) -> &[(TagPath, TagPath)] {
        &self.pairs
    }

    /// May a morpheme tagged `left` be immediately followed by one tagged `right`?
    pub fn allows(&self, left: &TagPath, right: &TagPath) -> bool {
        match self.mode {
            ConnectivityMode::AllowAll => true,
            ConnectivityMode::Restrict => self
                .pairs
                .iter()
                .any(|(l, r)| l.is_prefix_of(left) && r.is_prefix_of(right)),
        }
    }

    pub fn parse(text: &str, source_name: &str) -> Result<ConnectivityTable> {
        let mut lines = text.lines().enumerate();
        let mode = match lines.next() {
            Some((_, l)) => match l.trim_end_matches('\r').trim() {
                "MODE=restrict" => ConnectivityMode::Restrict,
                "MODE=allow-all" => ConnectivityMode::AllowAll,
                other => {
                    return Err(Error::format(
                        source_name,
                        1,
                        format!("expected MODE=restrict or MODE=allow-all, got {:?}", other),
                    ))
                }
            },
            None => return Err(Error::format(source_name, 1, "missing MODE header")),
        };
        let mut pairs = Vec::new();
        let mut seen = HashSet::new();
        for (i, raw) in lines {
            let lineno = i + 1;
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            if mode == ConnectivityMode::AllowAll {
                return Err(Error::format(
                    source_name,
                    lineno,
                    "MODE=allow-all tables must not list pairs",
                ));
            }
            let (l, r) = line
                .split_once('\t')
                .ok_or_else(|| Error::format(source_name, lineno, "expected <left>\\t<right>"))?;
            let l =
                TagPath::parse(l).map_err(|e| Error::format(source_name, lineno, e.to_string()))?;
            let r =
                TagPath::parse(r).map_err(|e| Error::format(source_name, lineno, e.to_string()))?;
            if !seen.insert((l.clone(), r.clone())) {
                return Err(Error::format(source_name, lineno, "duplicate pair"));
            }
            pairs.push((l, r));
        }
        Ok(ConnectivityTable { mode, pairs })
    }

    pub fn to_text(&self) -> String {
        let mut out = match self.mode {
            ConnectivityMode::Restrict => "MODE=restrict\n".to_string(),
            ConnectivityMode::AllowAll => "MODE=allow-all\n".to_string(),
        };
        for (l, r) in &self.pairs {
            out.push_str(&format!("{}\t{}\n", l, r));
        }
        out
    }
}

/// Dictionary entries indexed by surface (trie) and by lemma, together with
/// the connectivity table used to validate segmentations.
#[derive(Debug, Clone)]
pub struct Lexicon {
    entries: Vec<LexEntry>,
    trie: Trie,
    connectivity: ConnectivityTable,
}

impl Lexicon {
    pub fn new(entries: Vec<LexEntry>, connectivity: ConnectivityTable) -> Result<Lexicon> {
        let mut seen = HashSet::new();
        let mut trie = Trie::default();
        for (i, e) in entries.iter().enumerate() {
            check_field(&e.surface).map_err(Error::InvalidArgument)?;
            check_field(&e.lemma).map_err(Error::InvalidArgument)?;
            if !seen.insert(e) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate lexicon entry {}\t{}\t{}",
                    e.surface, e.lemma, e.tag_path
                )));
            }
            trie.insert(&e.surface, i);
        }
        Ok(Lexicon {
            entries,
            trie,
            connectivity,
        })
    }

    pub fn load(dict_file: impl AsRef<Path>, conn_file: impl AsRef<Path>) -> Result<Lexicon> {
        let dict_path = dict_file.as_ref();
        let conn_path = conn_file.as_ref();
        let entries = parse_dictionary(
            &fs::read_to_string(dict_path)?,
            &dict_path.display().to_string(),
        )?;
        let conn = ConnectivityTable::parse(
            &fs::read_to_string(conn_path)?,
            &conn_path.display().to_string(),
        )?;
        Lexicon::new(entries, conn)
    }

    pub fn entries(&self) -> &[LexEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn connectivity(&self) -> &ConnectivityTable {
        &self.connectivity
    }

    /// All entries whose surface is exactly `surface`, in load order.
    pub fn lookup(&self, surface: &str) -> impl Iterator<Item = &LexEntry> + '_ {
        self.trie
            .get(surface)
            .iter()
            .map(move |&i| &self.entries[i])
    }

    /// Distinct projected tags of every entry carrying `lemma`, in entry order.
    pub fn lemma_tags(&self, lemma: &str, proj: &TagsetProjection) -> Vec<Tag> {
        let mut out: Vec<Tag> = Vec::new();
        for e in self.entries.iter().filter(|e| e.lemma == lemma) {
            let t = proj.project(&e.tag_path);
            if !out.contains(&t) {
                out.push(t);
            }
        }
        out
    }

    /// Index from lemma to its distinct projected tags; avoids the linear scan
    /// in [`Lexicon::lemma_tags`] when many lookups are needed.
    pub fn lemma_tag_index(&self, proj: &TagsetProjection) -> LemmaTags {
        let mut map: std::collections::HashMap<String, Vec<Tag>> = Default::default();
        for e in &self.entries {
            let t = proj.project(&e.tag_path);
            let tags = map.entry(e.lemma.clone()).or_default();
            if !tags.contains(&t) {
                tags.push(t);
            }
        }
        LemmaTags { map }
    }

    pub(crate) fn trie(&self) -> &Trie {
        &self.trie
    }

    pub fn dictionary_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&format!("{}\t{}\t{}\n", e.surface, e.lemma, e.tag_path));
        }
        out
    }

    pub fn write_files(
        &self,
        dict_file: impl AsRef<Path>,
        conn_file: impl AsRef<Path>,
    ) -> Result<()> {
        fs::write(dict_file, self.dictionary_text())?;
        fs::write(conn_file, self.connectivity.to_text())?;
        Ok(())
    }
}

#[derive(Debug, Clone, Default)]
pub struct LemmaTags {
    map: std::collections::HashMap<String, Vec<Tag>>,
}

impl LemmaTags {
    pub fn get(&self, lemma: &str) -> &[Tag] {
        self.map.get(lemma).map(Vec::as_slice).unwrap_or(&[])
    }
}

fn check_field(s: &str) -> std::result::Result<(), String> {
    if s.is_empty() || s.chars().any(char::is_whitespace) {
        Err(format!(
            "field {:?} must be non-empty without whitespace",
            s
        ))
    } else {
        Ok(())
    }
}

pub fn parse_dictionary(text: &str, source_name: &str) -> Result<Vec<LexEntry>> {
    let mut entries = Vec::new();
    let mut seen = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(Error::format(
                source_name,
                lineno,
                format!("expected 3 tab-separated fields, found {}", fields.len()),
            ));
        }
        check_field(fields[0]).map_err(|m| Error::format(source_name, lineno, m))?;
        check_field(fields[1]).map_err(|m| Error::format(source_name, lineno, m))?;
        let tag_path = TagPath::parse(fields[2])
            .map_err(|e| Error::format(source_name, lineno, e.to_string()))?;
        let entry = LexEntry {
            surface: fields[0].to_string(),
            lemma: fields[1].to_string(),
            tag_path,
        };
        if !seen.insert(entry.clone()) {
            return Err(Error::format(source_name, lineno, "duplicate entry"));
        }
        entries.push(entry);
    }
    Ok(entries)
}

/// A dictionary morpheme placed in a segmentation, with its projected tag.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Morpheme {
    pub surface: String,
    pub lemma: String,
    pub tag_path: TagPath,
    pub tag: Tag,
}

impl fmt::Display for Morpheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{}", self.surface, self.lemma, self.tag)
    }
}

/// Alternative segmentations of one Eojeol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EojeolAnalysis {
    pub surface: String,
    pub candidates: Vec<Vec<Morpheme>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SentenceLattice {
    pub eojeols: Vec<EojeolAnalysis>,
}

impl SentenceLattice {
    /// Size of the cross product of per-Eojeol candidates.
    pub fn sentence_candidates(&self) -> usize {
        self.eojeols
            .iter()
            .fold(1usize, |acc, e| acc.saturating_mul(e.candidates.len()))
    }

    /// Human-readable dump: one Eojeol header, then one candidate per line.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, e) in self.eojeols.iter().enumerate() {
            out.push_str(&format!(
                "[{}] {}\t{} candidate(s)\n",
                i,
                e.surface,
                e.candidates.len()
            ));
            for c in &e.candidates {
                let parts: Vec<String> = c
                    .iter()
                    .map(|m| format!("{}({})/{}", m.surface, m.lemma, m.tag))
                    .collect();
                out.push('\t');
                out.push_str(&parts.join(" + "));
                out.push('\n');
            }
        }
        out
    }
}
