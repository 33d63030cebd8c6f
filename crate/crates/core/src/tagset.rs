//! Hierarchical POS symbols and their projection onto short application tags.
//!
//! A [`TagPath`] names a node in the category hierarchy, e.g.
//! `nominal:noun:proper-noun:person-name:no-final-consonant`. A
//! [`TagsetProjection`] maps paths onto a compact tag-set by prefix rules, so
//! the same dictionary can serve applications that need coarser or finer tags.

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

pub const PATH_SEPARATOR: char = ':';

/// A path in the POS symbol hierarchy. Always has at least one segment.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TagPath {
    segments: Vec<String>,
}

impl TagPath {
    /// Parses `a:b:c`. Whitespace around the whole text and around each
    /// segment is dropped.
    pub fn parse(text: &str) -> Result<TagPath> {
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Err(Error::TagPath {
                text: text.to_string(),
                position: 0,
                msg: "empty tag path".into(),
            });
        }
        let mut segments = Vec::new();
        for (i, seg) in trimmed.split(PATH_SEPARATOR).enumerate() {
            let seg = seg.trim();
            if seg.is_empty() {
                return Err(Error::TagPath {
                    text: text.to_string(),
                    position: i,
                    msg: "empty segment".into(),
                });
            }
            segments.push(seg.to_string());
        }
        Ok(TagPath { segments })
    }

    pub fn from_segments<I, S>(segments: I) -> Result<TagPath>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let segments: Vec<String> = segments.into_iter().map(Into::into).collect();
        if segments.is_empty() {
            return Err(Error::TagPath {
                text: String::new(),
                position: 0,
                msg: "empty tag path".into(),
            });
        }
        for (i, s) in segments.iter().enumerate() {
            if s.is_empty() || s.contains(PATH_SEPARATOR) {
                return Err(Error::TagPath {
                    text: segments.join(":"),
                    position: i,
                    msg: "segment is empty or contains ':'".into(),
                });
            }
        }
        Ok(TagPath { segments })
    }

    pub fn segments(&self) -> &[String] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// True when `self` is a (non-strict) prefix of `other`.
    pub fn is_prefix_of(&self, other: &TagPath) -> bool {
        self.segments.len() <= other.segments.len()
            && self
                .segments
                .iter()
                .zip(&other.segments)
                .all(|(a, b)| a == b)
    }
}

impl fmt::Display for TagPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.segments.iter().enumerate() {
            if i > 0 {
                f.write_str(":")?;
            }
            f.write_str(s)?;
        }
        Ok(())
    }
}

impl FromStr for TagPath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TagPath::parse(s)
    }
}

/// A short application tag such as `MC` or `jC`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tag(String);

impl Tag {
    pub fn new(label: impl Into<String>) -> Result<Tag> {
        let label = label.into();
        if !is_valid_label(&label) {
            return Err(Error::InvalidArgument(format!(
                "tag label {:?} must be non-empty without whitespace",
                label
            )));
        }
        Ok(Tag(label))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Tag {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_valid_label(label: &str) -> bool {
    !label.is_empty() && !label.chars().any(char::is_whitespace)
}

/// Ordered prefix rules mapping tag paths to short tags. The first rule whose
/// prefix matches wins; unmatched paths get the default label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagsetProjection {
    rules: Vec<(TagPath, Tag)>,
    default_label: Tag,
}

impl TagsetProjection {
    pub fn new(rules: Vec<(TagPath, Tag)>, default_label: Tag) -> Result<TagsetProjection> {
        let mut seen = HashSet::new();
        for (prefix, _) in &rules {
            if !seen.insert(prefix) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate projection prefix {}",
                    prefix
                )));
            }
        }
        Ok(TagsetProjection {
            rules,
            default_label,
        })
    }

    pub fn rules(&self) -> &[(TagPath, Tag)] {
        &self.rules
    }

    pub fn default_label(&self) -> &Tag {
        &self.default_label
    }

    pub fn project(&self, path: &TagPath) -> Tag {
        self.rules
            .iter()
            .find(|(prefix, _)| prefix.is_prefix_of(path))
            .map(|(_, label)| label.clone())
            .unwrap_or_else(|| self.default_label.clone())
    }

    /// Distinct labels in rule order, followed by the default label if no
    /// rule already produces it.
    pub fn labels(&self) -> Vec<Tag> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (_, label) in &self.rules {
            if seen.insert(label) {
                out.push(label.clone());
            }
        }
        if !seen.contains(&self.default_label) {
            out.push(self.default_label.clone());
        }
        out
    }

    pub fn parse(text: &str, source_name: &str) -> Result<TagsetProjection> {
        let mut rules = Vec::new();
        let mut default_label: Option<Tag> = None;
        let mut seen = HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (left, label) = line
                .split_once('\t')
                .ok_or_else(|| Error::format(source_name, lineno, "expected <prefix>\\t<label>"))?;
            let label = label.trim();
            if !is_valid_label(label) {
                return Err(Error::format(
                    source_name,
                    lineno,
                    format!("invalid label {:?}", label),
                ));
            }
            let label = Tag(label.to_string());
            if left.trim() == "DEFAULT" {
                if default_label.is_some() {
                    return Err(Error::format(source_name, lineno, "DEFAULT given twice"));
                }
                default_label = Some(label);
                continue;
            }
            let prefix = TagPath::parse(left)
                .map_err(|e| Error::format(source_name, lineno, e.to_string()))?;
            if !seen.insert(prefix.clone()) {
                return Err(Error::format(
                    source_name,
                    lineno,
                    format!("duplicate prefix {}", prefix),
                ));
            }
            rules.push((prefix, label));
        }
        let default_label =
            default_label.ok_or_else(|| Error::format(source_name, 0, "missing DEFAULT line"))?;
        Ok(TagsetProjection {
            rules,
            default_label,
        })
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<TagsetProjection> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)?;
        TagsetProjection::parse(&text, &path.display().to_string())
    }

    /// Canonical text form: the DEFAULT line first, then the rules in order.
    pub fn to_text(&self) -> String {
        let mut out = format!("DEFAULT\t{}\n", self.default_label);
        for (prefix, label) in &self.rules {
            out.push_str(&format!("{}\t{}\n", prefix, label));
        }
        out
    }

    pub fn write_file(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_text())?;
        Ok(())
    }
}
