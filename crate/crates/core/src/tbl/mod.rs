//! Transformation-based error correction of tagger output.
//!
//! A rule rewrites the tag of one morpheme (matched by lemma and current tag)
//! when context conditions hold. Contexts are probes relative to the
//! morpheme's Eojeol: the first or last morpheme of an Eojeol up to three
//! positions away, or the neighbouring morpheme inside the same Eojeol.
//!
//! Probe mnemonics: `{P|N}{1|2|3}{F|L}M{T|O}` reads "previous/next, distance,
//! first/last morpheme, Tag/lexical fOrm"; `W{P|N}MT` is the previous/next
//! morpheme's tag within the current Eojeol.

mod apply;
mod learn;

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::sentence::TaggedSentence;
use crate::tagset::{is_valid_label, Tag};

pub use apply::{apply_rule, apply_rules, fires};
pub use learn::{learn_rules, score_rule, LearnOptions, RuleScore};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Anchor {
    First,
    Last,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Feature {
    Tag,
    Lexeme,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Probe {
    /// A morpheme of the Eojeol `offset` positions away (never 0).
    Eojeol {
        offset: i8,
        anchor: Anchor,
        feature: Feature,
    },
    /// The tag of the previous (`next == false`) or next morpheme inside the
    /// current Eojeol.
    Within { next: bool },
}

impl Probe {
    pub fn eojeol(offset: i8, anchor: Anchor, feature: Feature) -> Result<Probe> {
        if offset == 0 || !(-3..=3).contains(&offset) {
            return Err(Error::InvalidArgument(format!(
                "probe offset {} out of range",
                offset
            )));
        }
        Ok(Probe::Eojeol {
            offset,
            anchor,
            feature,
        })
    }

    /// Value of this probe for the morpheme at `(eojeol, morpheme)`, or `None`
    /// when the probed position lies outside the sentence or Eojeol.
    pub fn read<'a>(
        &self,
        s: &'a TaggedSentence,
        eojeol: usize,
        morpheme: usize,
    ) -> Option<&'a str> {
        match *self {
            Probe::Eojeol {
                offset,
                anchor,
                feature,
            } => {
                let target = eojeol as isize + offset as isize;
                let e = s.eojeols.get(usize::try_from(target).ok()?)?;
                let m = match anchor {
                    Anchor::First => e.morphemes.first()?,
                    Anchor::Last => e.morphemes.last()?,
                };
                Some(match feature {
                    Feature::Tag => m.tag.as_str(),
                    Feature::Lexeme => m.lemma.as_str(),
                })
            }
            Probe::Within { next } => {
                let ms = &s.eojeols[eojeol].morphemes;
                let k = if next {
                    morpheme + 1
                } else {
                    morpheme.checked_sub(1)?
                };
                ms.get(k).map(|m| m.tag.as_str())
            }
        }
    }

    pub fn reads_tag(&self) -> bool {
        !matches!(
            self,
            Probe::Eojeol {
                feature: Feature::Lexeme,
                ..
            }
        )
    }
}

impl fmt::Display for Probe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Probe::Eojeol {
                offset,
                anchor,
                feature,
            } => write!(
                f,
                "{}{}{}M{}",
                if offset < 0 { 'P' } else { 'N' },
                offset.unsigned_abs(),
                if anchor == Anchor::First { 'F' } else { 'L' },
                if feature == Feature::Tag { 'T' } else { 'O' },
            ),
            Probe::Within { next } => write!(f, "W{}MT", if next { 'N' } else { 'P' }),
        }
    }
}

impl FromStr for Probe {
    type Err = Error;

    fn from_str(s: &str) -> Result<Probe> {
        let bad = || Error::InvalidArgument(format!("unknown probe {:?}", s));
        let b = s.as_bytes();
        match b {
            [b'W', dir @ (b'P' | b'N'), b'M', b'T'] => Ok(Probe::Within { next: *dir == b'N' }),
            [dir @ (b'P' | b'N'), d @ b'1'..=b'3', a @ (b'F' | b'L'), b'M', f @ (b'T' | b'O')] => {
                let dist = (d - b'0') as i8;
                Probe::eojeol(
                    if *dir == b'P' { -dist } else { dist },
                    if *a == b'F' {
                        Anchor::First
                    } else {
                        Anchor::Last
                    },
                    if *f == b'T' {
                        Feature::Tag
                    } else {
                        Feature::Lexeme
                    },
                )
            }
            _ => Err(bad()),
        }
    }
}

/// One or two probes whose values a rule conditions on.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RuleSchema {
    probes: Vec<Probe>,
}

impl RuleSchema {
    pub fn new(probes: Vec<Probe>) -> Result<RuleSchema> {
        if probes.is_empty() || probes.len() > 2 {
            return Err(Error::InvalidArgument(
                "a schema has one or two probes".into(),
            ));
        }
        if probes.len() == 2 && probes[0] == probes[1] {
            return Err(Error::InvalidArgument("duplicate probe in schema".into()));
        }
        Ok(RuleSchema { probes })
    }

    pub fn probes(&self) -> &[Probe] {
        &self.probes
    }
}

impl fmt::Display for RuleSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.probes.iter().enumerate() {
            if i > 0 {
                f.write_str("&")?;
            }
            write!(f, "{}", p)?;
        }
        Ok(())
    }
}

/// The named schemas whose pairwise conjunctions are also generated.
pub const CORE_SCHEMAS: [&str; 7] = [
    "N1FMT", "P1LMT", "N2FMT", "N3FMT", "P1LMO", "P1FMO", "N1FMO",
];

/// Number of schemas returned by [`enumerate_schemas`]: 12 Eojeol tag probes,
/// 2 within-Eojeol tag probes, 4 lexical probes at distance one, and every
/// pair of the seven core schemas.
pub const SCHEMA_COUNT: usize = 12 + 2 + 4 + CORE_SCHEMAS.len() * (CORE_SCHEMAS.len() - 1) / 2;

/// The fixed schema family, in a deterministic order: single probes first,
/// then two-probe conjunctions of [`CORE_SCHEMAS`].
pub fn enumerate_schemas() -> Vec<RuleSchema> {
    let mut out = Vec::with_capacity(SCHEMA_COUNT);
    for offset in [-3i8, -2, -1, 1, 2, 3] {
        for anchor in [Anchor::First, Anchor::Last] {
            out.push(Probe::Eojeol {
                offset,
                anchor,
                feature: Feature::Tag,
            });
        }
    }
    out.push(Probe::Within { next: false });
    out.push(Probe::Within { next: true });
    for offset in [-1i8, 1] {
        for anchor in [Anchor::First, Anchor::Last] {
            out.push(Probe::Eojeol {
                offset,
                anchor,
                feature: Feature::Lexeme,
            });
        }
    }
    let mut schemas: Vec<RuleSchema> = out
        .into_iter()
        .map(|p| RuleSchema { probes: vec![p] })
        .collect();
    let core: Vec<Probe> = CORE_SCHEMAS
        .iter()
        .map(|s| s.parse().expect("core probe"))
        .collect();
    for i in 0..core.len() {
        for j in i + 1..core.len() {
            schemas.push(RuleSchema {
                probes: vec![core[i], core[j]],
            });
        }
    }
    schemas
}

/// `lexeme/from | cond [& cond] -> to`, with the net number of corrections it
/// made when learned.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub lexeme: String,
    pub from: Tag,
    pub conditions: Vec<(Probe, String)>,
    pub to: Tag,
    pub effectiveness: i64,
}

impl Rule {
    /// The rule text without the score comment.
    pub fn body(&self) -> String {
        let conds: Vec<String> = self
            .conditions
            .iter()
            .map(|(p, v)| format!("{}={}", p, v))
            .collect();
        format!(
            "{}/{} | {} -> {}",
            self.lexeme,
            self.from,
            conds.join(" & "),
            self.to
        )
    }

    pub fn parse(line: &str) -> Result<Rule> {
        let bad = |msg: &str| Error::InvalidArgument(format!("{}: {:?}", msg, line));
        let (body, score) = line
            .rsplit_once(" # score=")
            .ok_or_else(|| bad("missing score"))?;
        let effectiveness = score.trim().parse::<i64>().map_err(|_| bad("bad score"))?;
        let (lhs, to) = body.rsplit_once(" -> ").ok_or_else(|| bad("missing ->"))?;
        let (current, conds) = lhs.split_once(" | ").ok_or_else(|| bad("missing |"))?;
        let (lexeme, from) = current
            .rsplit_once('/')
            .ok_or_else(|| bad("expected lexeme/tag"))?;
        if lexeme.is_empty() || lexeme.chars().any(char::is_whitespace) {
            return Err(bad("bad lexeme"));
        }
        let mut conditions = Vec::new();
        for c in conds.split(" & ") {
            let (p, v) = c.split_once('=').ok_or_else(|| bad("condition lacks ="))?;
            if !is_valid_label(v) {
                return Err(bad("bad condition value"));
            }
            conditions.push((p.parse::<Probe>()?, v.to_string()));
        }
        RuleSchema::new(conditions.iter().map(|(p, _)| *p).collect())?;
        let from = Tag::new(from)?;
        let to = Tag::new(to.trim())?;
        if from == to {
            return Err(bad("rule does not change the tag"));
        }
        Ok(Rule {
            lexeme: lexeme.to_string(),
            from,
            conditions,
            to,
            effectiveness,
        })
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} # score={}", self.body(), self.effectiveness)
    }
}

/// Rules in learned application order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RuleList {
    pub rules: Vec<Rule>,
}

impl RuleList {
    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn to_text(&self) -> String {
        self.rules.iter().map(|r| format!("{}\n", r)).collect()
    }

    pub fn parse(text: &str, source_name: &str) -> Result<RuleList> {
        let mut rules = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            rules.push(
                Rule::parse(line).map_err(|e| Error::format(source_name, i + 1, e.to_string()))?,
            );
        }
        Ok(RuleList { rules })
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<RuleList> {
        let path = path.as_ref();
        RuleList::parse(&fs::read_to_string(path)?, &path.display().to_string())
    }

    pub fn write_file(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_text())?;
        Ok(())
    }
}
