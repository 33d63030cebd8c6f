use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use morphtag::corpus::{read_corpus, table_header};
use morphtag::lexicon::{analyze_sentence, tokenize, DEFAULT_CANDIDATE_CAP};
use morphtag::{Lexicon, TagsetProjection};
use tempfile::TempDir;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures")
}

fn morphtag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_morphtag"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Config pointing at the fixture lexicon and projection.
fn fixture_config(dir: &TempDir) -> PathBuf {
    let f = fixtures();
    let cfg = dir.path().join("pipeline.conf");
    fs::write(
        &cfg,
        format!(
            "# fixture pipeline\ndict = {}\nconn = {}\nprojection = {}\nmodel = {}\n",
            s(&f.join("dict.txt")),
            s(&f.join("conn.txt")),
            s(&f.join("projection.txt")),
            s(&f.join("model.txt")),
        ),
    )
    .unwrap();
    cfg
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(code(&morphtag(&["--help"])), 0);
    assert_eq!(code(&morphtag(&["--version"])), 0);
    assert_eq!(code(&morphtag(&["frobnicate"])), 1);
    assert_eq!(code(&morphtag(&["tag"])), 1);
    assert_eq!(
        code(&morphtag(&[
            "--set",
            "nonsense=1",
            "split",
            "--corpus",
            "x",
            "--out-dir",
            "y"
        ])),
        1
    );
}

#[test]
fn analyze_matches_library() {
    let dir = TempDir::new().unwrap();
    let cfg = fixture_config(&dir);
    let text = "나는 학교에 가다\n\n밥을 먹었다\n";
    let input = dir.path().join("in.txt");
    fs::write(&input, text).unwrap();
    let o = morphtag(&["--config", s(&cfg), "analyze", "--input", s(&input)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));

    let f = fixtures();
    let lex = Lexicon::load(f.join("dict.txt"), f.join("conn.txt")).unwrap();
    let proj = TagsetProjection::from_file(f.join("projection.txt")).unwrap();
    let mut want = String::new();
    for (i, line) in text.lines().filter(|l| !l.trim().is_empty()).enumerate() {
        let lattice =
            analyze_sentence(&tokenize(line), &lex, &proj, DEFAULT_CANDIDATE_CAP).unwrap();
        assert!(lattice.eojeols.iter().all(|e| !e.candidates.is_empty()));
        want.push_str(&format!("# sentence {}\n{}", i + 1, lattice.dump()));
    }
    assert_eq!(stdout(&o), want);
}

#[test]
fn unknown_eojeol_exits_with_segmentation_code() {
    let dir = TempDir::new().unwrap();
    let cfg = fixture_config(&dir);
    let input = dir.path().join("in.txt");
    fs::write(&input, "나는 컴퓨터\n").unwrap();
    let o = morphtag(&["--config", s(&cfg), "analyze", "--input", s(&input)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("컴퓨터"));
    let o = morphtag(&["--config", s(&cfg), "tag", "--input", s(&input)]);
    assert_eq!(code(&o), 2);
}

#[test]
fn supervised_training_reproduces_fixture_model() {
    let dir = TempDir::new().unwrap();
    let cfg = fixture_config(&dir);
    let out = dir.path().join("m.txt");
    let corpus = fixtures().join("corpus.txt");
    let o = morphtag(&[
        "--config",
        s(&cfg),
        "train",
        "--mode",
        "supervised",
        "--corpus",
        s(&corpus),
        "--out",
        s(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        fs::read_to_string(out).unwrap(),
        fs::read_to_string(fixtures().join("model.txt")).unwrap()
    );
}

#[test]
fn em_training_prints_likelihoods_and_checks_iterations() {
    let dir = TempDir::new().unwrap();
    let cfg = fixture_config(&dir);
    let out = dir.path().join("m.txt");
    let corpus = fixtures().join("corpus.txt");
    let o = morphtag(&[
        "--config",
        s(&cfg),
        "--set",
        "max_iters=4",
        "--set",
        "tol=1e-300",
        "train",
        "--mode",
        "bootstrap-then-em",
        "--corpus",
        s(&corpus),
        "--untagged",
        s(&corpus),
        "--out",
        s(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let lls: Vec<f64> = stdout(&o).lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(lls.len(), 4);
    assert!(lls.windows(2).all(|w| w[1] >= w[0] - 1e-9), "{:?}", lls);
    assert!(morphtag::HmmModel::load(&out).is_ok());

    let o = morphtag(&[
        "--config",
        s(&cfg),
        "--set",
        "max_iters=0",
        "train",
        "--mode",
        "em",
        "--untagged",
        s(&corpus),
        "--out",
        s(&out),
    ]);
    assert_eq!(code(&o), 1);
    let o = morphtag(&[
        "--config",
        s(&cfg),
        "train",
        "--mode",
        "em",
        "--out",
        s(&out),
    ]);
    assert_eq!(code(&o), 1);
}

#[test]
fn malformed_files_exit_with_format_code() {
    let dir = TempDir::new().unwrap();
    let cfg = fixture_config(&dir);
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "HMM-BIGRAM v1\nnonsense\n").unwrap();
    let input = dir.path().join("in.txt");
    fs::write(&input, "나는\n").unwrap();
    let o = morphtag(&[
        "--config",
        s(&cfg),
        "--model",
        s(&bad),
        "tag",
        "--input",
        s(&input),
    ]);
    assert_eq!(code(&o), 4);
    let o = morphtag(&[
        "--config",
        s(&cfg),
        "tag",
        "--input",
        s(&input),
        "--rules",
        s(&bad),
    ]);
    assert_eq!(code(&o), 4);
    fs::write(&bad, "seed 3\n").unwrap();
    let o = morphtag(&["--config", s(&bad), "tag", "--input", s(&input)]);
    assert_eq!(code(&o), 4);
}

#[test]
fn empty_rules_change_nothing_and_output_parses() {
    let dir = TempDir::new().unwrap();
    let cfg = fixture_config(&dir);
    let input = dir.path().join("in.txt");
    fs::write(&input, "나는 학교에 가다\n밥을 먹었다\n").unwrap();
    let empty = dir.path().join("empty.rules");
    fs::write(&empty, "").unwrap();
    let plain = morphtag(&["--config", s(&cfg), "tag", "--input", s(&input)]);
    let ruled = morphtag(&[
        "--config",
        s(&cfg),
        "tag",
        "--input",
        s(&input),
        "--rules",
        s(&empty),
    ]);
    assert_eq!(
        code(&plain),
        0,
        "{}",
        String::from_utf8_lossy(&plain.stderr)
    );
    assert_eq!(stdout(&plain), stdout(&ruled));
    let out = dir.path().join("tagged.txt");
    fs::write(&out, stdout(&plain)).unwrap();
    let tagged = read_corpus(&out, None).unwrap();
    assert_eq!(tagged.len(), 2);
    assert_eq!(tagged[0].eojeols[0].surface, "나는");
}

#[test]
fn learning_on_identical_corpora_gives_empty_rules() {
    let dir = TempDir::new().unwrap();
    let cfg = fixture_config(&dir);
    let corpus = fixtures().join("corpus.txt");
    let out = dir.path().join("r.txt");
    let o = morphtag(&[
        "--config",
        s(&cfg),
        "learn-rules",
        "--gold",
        s(&corpus),
        "--current",
        s(&corpus),
        "--out",
        s(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(fs::read_to_string(out).unwrap(), "");
    assert_eq!(stdout(&o), "learned 0 rules\n");
}

#[test]
fn eval_prints_header_and_row() {
    let dir = TempDir::new().unwrap();
    let cfg = fixture_config(&dir);
    let corpus = fixtures().join("corpus.txt");
    let o = morphtag(&[
        "--config",
        s(&cfg),
        "eval",
        "--gold",
        s(&corpus),
        "--hmm",
        s(&corpus),
        "--name",
        "toy",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    // 14 morphemes; 가 (two dictionary tags) occurs twice.
    assert_eq!(
        stdout(&o),
        format!("{}\ntoy | 14 | 2 | 100.0 | 100.0\n", table_header())
    );
}

fn synth_pipeline(dir: &Path) -> (String, String) {
    let data = dir.join("data");
    let o = morphtag(&[
        "--seed",
        "3",
        "synth",
        "--out-dir",
        s(&data),
        "--sentences",
        "400",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let cfg = dir.join("c.conf");
    fs::write(
        &cfg,
        format!(
            "dict = {}\nconn = {}\nprojection = {}\nmodel = {}\nrules = {}\nseed = 5\n",
            s(&data.join("dict.txt")),
            s(&data.join("conn.txt")),
            s(&data.join("projection.txt")),
            s(&dir.join("m.txt")),
            s(&dir.join("r.txt")),
        ),
    )
    .unwrap();
    let c = s(&cfg);
    let parts = dir.join("parts");
    let run = |args: &[&str]| {
        let mut full = vec!["--config", c];
        full.extend_from_slice(args);
        let o = morphtag(&full);
        assert_eq!(
            code(&o),
            0,
            "{:?}: {}",
            args,
            String::from_utf8_lossy(&o.stderr)
        );
        stdout(&o)
    };
    let split = run(&[
        "split",
        "--corpus",
        s(&data.join("corpus.txt")),
        "--out-dir",
        s(&parts),
    ]);
    assert_eq!(split, "em 280\nrules 60\ntest 60\n");
    run(&[
        "train",
        "--mode",
        "supervised",
        "--corpus",
        s(&parts.join("em.txt")),
        "--out",
        s(&dir.join("m.txt")),
    ]);
    run(&["learn-rules", "--gold", s(&parts.join("rules.txt"))]);
    let test = s(&parts.join("test.txt")).to_string();
    let hmm = dir.join("hmm.txt");
    let two = dir.join("two.txt");
    run(&[
        "tag",
        "--input",
        &test,
        "--input-format",
        "corpus",
        "--out",
        s(&hmm),
    ]);
    run(&[
        "tag",
        "--input",
        &test,
        "--input-format",
        "corpus",
        "--rules",
        "--out",
        s(&two),
    ]);
    let row = run(&[
        "eval",
        "--gold",
        &test,
        "--hmm",
        s(&hmm),
        "--two-phase",
        s(&two),
    ]);
    (row, fs::read_to_string(dir.join("r.txt")).unwrap())
}

#[test]
fn synthetic_pipeline_improves_and_is_reproducible() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let (row_a, rules_a) = synth_pipeline(a.path());
    let (row_b, rules_b) = synth_pipeline(b.path());
    assert_eq!(row_a, row_b);
    assert_eq!(rules_a, rules_b);
    for f in [
        "corpus.txt",
        "dict.txt",
        "conn.txt",
        "projection.txt",
        "text.txt",
    ] {
        assert_eq!(
            fs::read(a.path().join("data").join(f)).unwrap(),
            fs::read(b.path().join("data").join(f)).unwrap()
        );
    }
    let row = row_a.lines().nth(1).unwrap();
    let cols: Vec<&str> = row.split(" | ").collect();
    let hmm: f64 = cols[3].parse().unwrap();
    let two: f64 = cols[4].parse().unwrap();
    assert!(two > hmm, "{}", row);
}

#[test]
fn raw_text_tagging_uses_the_lexicon() {
    let dir = TempDir::new().unwrap();
    let data = dir.path().join("data");
    assert_eq!(
        code(&morphtag(&[
            "synth",
            "--out-dir",
            s(&data),
            "--sentences",
            "60"
        ])),
        0
    );
    let dict = data.join("dict.txt");
    let conn = data.join("conn.txt");
    let proj = data.join("projection.txt");
    let model = dir.path().join("m.txt");
    let common = [
        "--dict",
        s(&dict),
        "--conn",
        s(&conn),
        "--projection",
        s(&proj),
        "--model",
        s(&model),
    ];
    let corpus = data.join("corpus.txt");
    let text = data.join("text.txt");
    let mut args = common.to_vec();
    args.extend([
        "train",
        "--mode",
        "supervised",
        "--corpus",
        s(&corpus),
        "--out",
        s(&model),
    ]);
    assert_eq!(code(&morphtag(&args)), 0);
    let mut args = common.to_vec();
    args.extend(["tag", "--input", s(&text)]);
    let o = morphtag(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let out = dir.path().join("t.txt");
    fs::write(&out, stdout(&o)).unwrap();
    let tagged = read_corpus(&out, None).unwrap();
    let gold = read_corpus(data.join("corpus.txt"), None).unwrap();
    assert_eq!(tagged.len(), gold.len());
    assert!(tagged
        .iter()
        .zip(&gold)
        .all(|(t, g)| t.same_segmentation(g)));
}
