use std::fs;
use std::io::Write;
use std::path::Path;

use morphtag::corpus::{
    corpus_text, evaluate, generate_synthetic, read_corpus, split_corpus, table_header, table_row,
    write_corpus, SynthSpec,
};
use morphtag::hmm::{baum_welch, observations_for, tag_lattice, tag_segmented, train_supervised};
use morphtag::lexicon::{analyze_sentence, tokenize, LemmaTags};
use morphtag::tbl::{apply_rules, enumerate_schemas, learn_rules as learn, RuleList};
use morphtag::{HmmModel, Lexicon, TaggedSentence, TagsetProjection};

use crate::config::{existing, existing_path, PipelineConfig};
use crate::{
    AnalyzeArgs, CliError, EvalArgs, InputFormat, LearnArgs, SplitArgs, SynthArgs, TagArgs,
    TrainArgs, TrainMode,
};

type Out<'a> = &'a mut dyn Write;

fn io(e: std::io::Error) -> CliError {
    CliError::format(format!("I/O error: {}", e))
}

fn projection(cfg: &PipelineConfig) -> Result<TagsetProjection, CliError> {
    Ok(TagsetProjection::from_file(existing(
        &cfg.projection,
        "projection",
    )?)?)
}

fn lexicon(cfg: &PipelineConfig) -> Result<(Lexicon, TagsetProjection), CliError> {
    let dict = existing(&cfg.dict, "dict")?;
    let conn = existing(&cfg.conn, "conn")?;
    let proj = projection(cfg)?;
    Ok((Lexicon::load(dict, conn)?, proj))
}

fn lemma_tags(cfg: &PipelineConfig) -> Result<LemmaTags, CliError> {
    let (lex, proj) = lexicon(cfg)?;
    Ok(lex.lemma_tag_index(&proj))
}

fn model(cfg: &PipelineConfig) -> Result<HmmModel, CliError> {
    Ok(HmmModel::load(existing(&cfg.model, "model")?)?)
}

fn corpus(path: &Path) -> Result<Vec<TaggedSentence>, CliError> {
    Ok(read_corpus(existing_path(path)?, None)?)
}

fn raw_sentences(path: &Path) -> Result<Vec<Vec<String>>, CliError> {
    let text = fs::read_to_string(existing_path(path)?).map_err(io)?;
    Ok(text
        .lines()
        .map(|l| {
            tokenize(l)
                .into_iter()
                .map(String::from)
                .collect::<Vec<_>>()
        })
        .filter(|t| !t.is_empty())
        .collect())
}

pub fn analyze(cfg: &PipelineConfig, a: &AnalyzeArgs, out: Out) -> Result<(), CliError> {
    let (lex, proj) = lexicon(cfg)?;
    for (i, tokens) in raw_sentences(&a.input)?.iter().enumerate() {
        let lattice = analyze_sentence(tokens, &lex, &proj, cfg.candidate_cap).map_err(|e| {
            let mut err = CliError::from(e);
            err.msg = format!("sentence {}: {}", i + 1, err.msg);
            err
        })?;
        writeln!(out, "# sentence {}", i + 1).map_err(io)?;
        write!(out, "{}", lattice.dump()).map_err(io)?;
    }
    Ok(())
}

pub fn train(cfg: &PipelineConfig, a: &TrainArgs, out: Out) -> Result<(), CliError> {
    let need = |p: &Option<std::path::PathBuf>, flag: &str| {
        p.clone()
            .ok_or_else(|| CliError::usage(format!("--mode {:?} needs --{}", a.mode, flag)))
    };
    let supervised = || -> Result<HmmModel, CliError> {
        let tagged = corpus(&need(&a.corpus, "corpus")?)?;
        Ok(train_supervised(
            &tagged,
            &projection(cfg)?.labels(),
            cfg.smoothing,
        )?)
    };
    let model = match a.mode {
        TrainMode::Supervised => supervised()?,
        TrainMode::Em | TrainMode::BootstrapThenEm => {
            let init = if a.mode == TrainMode::Em {
                match &a.init {
                    Some(p) => HmmModel::load(existing_path(p)?)?,
                    None => model(cfg)?,
                }
            } else {
                supervised()?
            };
            let untagged = corpus(&need(&a.untagged, "untagged")?)?;
            let idx = lemma_tags(cfg)?;
            let obs = untagged
                .iter()
                .map(|s| observations_for(&init, s, &idx))
                .collect::<Result<Vec<_>, _>>()?;
            let run = baum_welch(&init, &obs, cfg.max_iters, cfg.tol)?;
            for ll in &run.log_likelihoods {
                writeln!(out, "{:.10}", ll).map_err(io)?;
            }
            run.model
        }
    };
    model.save(&a.out)?;
    Ok(())
}

fn rules_path(
    cfg: &PipelineConfig,
    flag: &Option<std::path::PathBuf>,
) -> Result<std::path::PathBuf, CliError> {
    match flag {
        Some(p) => existing_path(p),
        None => existing(&cfg.rules, "rules"),
    }
}

pub fn tag(cfg: &PipelineConfig, a: &TagArgs, out: Out) -> Result<(), CliError> {
    let model = model(cfg)?;
    let rules = match &a.rules {
        Some(p) => Some(RuleList::from_file(rules_path(cfg, p)?)?),
        None => None,
    };
    let mut tagged = Vec::new();
    match a.input_format {
        InputFormat::Raw => {
            let (lex, proj) = lexicon(cfg)?;
            for (i, tokens) in raw_sentences(&a.input)?.iter().enumerate() {
                let with_line = |e: morphtag::Error| {
                    let mut err = CliError::from(e);
                    err.msg = format!("sentence {}: {}", i + 1, err.msg);
                    err
                };
                let lattice =
                    analyze_sentence(tokens, &lex, &proj, cfg.candidate_cap).map_err(with_line)?;
                tagged.push(
                    tag_lattice(&model, &lattice, cfg.sentence_cap)
                        .map_err(with_line)?
                        .sentence,
                );
            }
        }
        InputFormat::Corpus => {
            let idx = lemma_tags(cfg)?;
            for s in corpus(&a.input)? {
                tagged.push(tag_segmented(&model, &s, &idx)?);
            }
        }
    }
    if let Some(r) = &rules {
        apply_rules(r, &mut tagged);
    }
    match &a.out {
        Some(p) => write_corpus(p, &tagged)?,
        None => out.write_all(corpus_text(&tagged).as_bytes()).map_err(io)?,
    }
    Ok(())
}

pub fn learn_rules(cfg: &PipelineConfig, a: &LearnArgs, out: Out) -> Result<(), CliError> {
    let gold = corpus(&a.gold)?;
    let current = match &a.current {
        Some(p) => corpus(p)?,
        None => {
            let model = model(cfg)?;
            let idx = lemma_tags(cfg)?;
            gold.iter()
                .map(|s| tag_segmented(&model, s, &idx))
                .collect::<Result<Vec<_>, _>>()?
        }
    };
    let target = a
        .out
        .clone()
        .or_else(|| cfg.rules.clone())
        .ok_or_else(|| CliError::usage("learn-rules needs --out or a `rules` setting"))?;
    let rules = learn(&current, &gold, &enumerate_schemas(), &cfg.learn)?;
    rules.write_file(&target)?;
    writeln!(out, "learned {} rules", rules.len()).map_err(io)?;
    Ok(())
}

pub fn eval(cfg: &PipelineConfig, a: &EvalArgs, out: Out) -> Result<(), CliError> {
    let idx = lemma_tags(cfg)?;
    let gold = corpus(&a.gold)?;
    let hmm = evaluate(&corpus(&a.hmm)?, &gold, &idx)?;
    let two = match &a.two_phase {
        Some(p) => evaluate(&corpus(p)?, &gold, &idx)?,
        None => hmm.clone(),
    };
    for (label, r) in [("HMM", &hmm), ("two-phase", &two)] {
        if !r.mismatched_sentences.is_empty() {
            eprintln!(
                "warning: {} output differs from gold segmentation in {} sentence(s)",
                label,
                r.mismatched_sentences.len()
            );
        }
    }
    writeln!(out, "{}", table_header()).map_err(io)?;
    writeln!(out, "{}", table_row(&a.name, &hmm, &two)).map_err(io)?;
    Ok(())
}

pub fn synth(cfg: &PipelineConfig, a: &SynthArgs, out: Out) -> Result<(), CliError> {
    let mut spec = SynthSpec {
        seed: cfg.seed,
        ..SynthSpec::default()
    };
    if let Some(n) = a.sentences {
        spec.sentences = n;
    }
    if a.control {
        spec = spec.control();
    }
    let syn = generate_synthetic(&spec)?;
    fs::create_dir_all(&a.out_dir).map_err(io)?;
    let dir = &a.out_dir;
    write_corpus(dir.join("corpus.txt"), &syn.corpus)?;
    syn.lexicon
        .write_files(dir.join("dict.txt"), dir.join("conn.txt"))?;
    syn.projection.write_file(dir.join("projection.txt"))?;
    let mut raw = String::new();
    for s in &syn.corpus {
        let surfaces: Vec<&str> = s.eojeols.iter().map(|e| e.surface.as_str()).collect();
        raw.push_str(&surfaces.join(" "));
        raw.push('\n');
    }
    fs::write(dir.join("text.txt"), raw).map_err(io)?;
    let morphemes: usize = syn.corpus.iter().map(|s| s.morpheme_count()).sum();
    writeln!(
        out,
        "sentences {}\nmorphemes {}\nperturbed {}",
        syn.corpus.len(),
        morphemes,
        syn.perturbed_sites
    )
    .map_err(io)?;
    Ok(())
}

pub fn split(cfg: &PipelineConfig, a: &SplitArgs, out: Out) -> Result<(), CliError> {
    let sentences = corpus(&a.corpus)?;
    let parts = split_corpus(&sentences, cfg.split, cfg.seed)?;
    fs::create_dir_all(&a.out_dir).map_err(io)?;
    for (name, part) in ["em", "rules", "test"].iter().zip(&parts) {
        write_corpus(a.out_dir.join(format!("{}.txt", name)), part)?;
        writeln!(out, "{} {}", name, part.len()).map_err(io)?;
    }
    Ok(())
}
