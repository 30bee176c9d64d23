//! End-to-end pipeline behavior over small fixtures.

mod common;

use common::*;
use std::fs::File;
use std::path::Path;
use textdrift_cli::commands::{analyze, compare, regenerate, stats};
use textdrift_cli::config::load_and_resolve;
use textdrift_cli::CliError;
use textdrift_core::corpus::{Domain, Source};
use textdrift_core::syntax::{write_samples_csv, MetricKind, MetricSample};

fn small_corpus() -> Vec<FixtureArticle> {
    vec![
        FixtureArticle {
            id: "a1".into(),
            title: Some("First".into()),
            text: raw_text(150),
            sentences: vec![
                FixtureSentence::plain(5, true),
                FixtureSentence::plain(2, true),  // removed: under length
                FixtureSentence::plain(8, false), // removed: no verb
                FixtureSentence::plain(6, true),
            ],
        },
        FixtureArticle {
            id: "a2".into(),
            title: Some("Second".into()),
            text: raw_text(40), // below the readability gate
            sentences: vec![FixtureSentence::plain(4, true), FixtureSentence::failed()],
        },
        FixtureArticle {
            id: "a3".into(),
            title: Some("Third".into()),
            text: raw_text(120),
            sentences: vec![FixtureSentence::plain(3, true), FixtureSentence::plain(500, true)],
        },
    ]
}

#[test]
fn analyze_writes_all_outputs_and_reconciles() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let (articles, parses) = write_fixture_corpus(
        dir.path(),
        "wiki_human",
        "wikipedia",
        "human",
        None,
        &small_corpus(),
    );
    let familiar = write_familiar_list(dir.path());
    let config = write_config(
        dir.path(),
        &out,
        &[("wikipedia", "human", &articles, Some(&parses))],
        Some(&familiar),
        "",
    );
    let cfg = load_and_resolve(&common_args(config)).unwrap();
    analyze::cmd_analyze(&cfg).unwrap();

    for name in [
        "readability_wikipedia_human.csv",
        "samples_wikipedia_human.csv",
        "samples_wikipedia_human.jsonl",
        "cleaned_wikipedia_human.jsonl",
        "cleaned_wikipedia_human.parses.jsonl",
        "manifest_wikipedia_human.json",
        "run_log.txt",
    ] {
        assert!(out.join(name).exists(), "missing output {name}");
    }

    // The run log reconciles every article exactly once.
    let log = std::fs::read_to_string(out.join("run_log.txt")).unwrap();
    for id in ["a1", "a2", "a3"] {
        assert_eq!(
            log.matches(&format!("article {id}:")).count(),
            1,
            "article {id} not reconciled:\n{log}"
        );
    }
    assert!(log.contains("readability_scored=2"));
    assert!(log.contains("readability_skipped=1"));
    // a1's two filtered sentences and the boundary checks on a3.
    assert!(log.contains("removed_length=1"));
    assert!(log.contains("removed_pos=1"));
    // a2 has a failed sentence: its aggregates are excluded.
    assert!(log.contains("article a2: readability=skipped(short_or_empty) sentences_kept=2 depth=excluded(sentence_failure) yngve=excluded(sentence_failure)"));

    // Boundary sentences of exactly 3 and 500 words survive cleaning.
    let samples = textdrift_core::syntax::read_samples_csv(&out.join("samples_wikipedia_human.csv")).unwrap();
    let a3_lengths: Vec<f64> = samples
        .iter()
        .filter(|s| s.article_id == "a3" && s.metric == MetricKind::SentLength)
        .map(|s| s.value)
        .collect();
    assert_eq!(a3_lengths, vec![3.0, 500.0]);

    // Readability samples are article-scope fk_grade values.
    let fk_count = samples
        .iter()
        .filter(|s| s.metric == MetricKind::FkGrade)
        .count();
    assert_eq!(fk_count, 2);
}

#[test]
fn verbless_corpus_keeps_readability_but_no_syntax_samples() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let articles = vec![FixtureArticle {
        id: "v1".into(),
        title: None,
        text: raw_text(130),
        sentences: vec![
            FixtureSentence::plain(6, false),
            FixtureSentence::plain(7, false),
        ],
    }];
    let (articles, parses) = write_fixture_corpus(
        dir.path(),
        "wiki_human",
        "wikipedia",
        "human",
        None,
        &articles,
    );
    let familiar = write_familiar_list(dir.path());
    let config = write_config(
        dir.path(),
        &out,
        &[("wikipedia", "human", &articles, Some(&parses))],
        Some(&familiar),
        "",
    );
    let cfg = load_and_resolve(&common_args(config)).unwrap();
    analyze::cmd_analyze(&cfg).unwrap();

    let samples =
        textdrift_core::syntax::read_samples_csv(&out.join("samples_wikipedia_human.csv")).unwrap();
    assert!(
        samples.iter().all(|s| s.metric == MetricKind::FkGrade),
        "only readability samples expected, got {samples:?}"
    );
    assert_eq!(samples.len(), 1);
    let readability = std::fs::read_to_string(out.join("readability_wikipedia_human.csv")).unwrap();
    assert!(readability.contains("v1"));
}

#[test]
fn no_clean_flag_is_a_passthrough_ablation() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let (articles, parses) = write_fixture_corpus(
        dir.path(),
        "wiki_human",
        "wikipedia",
        "human",
        None,
        &small_corpus(),
    );
    let familiar = write_familiar_list(dir.path());
    let config = write_config(
        dir.path(),
        &out,
        &[("wikipedia", "human", &articles, Some(&parses))],
        Some(&familiar),
        "",
    );
    let mut args = common_args(config);
    args.no_clean = true;
    let cfg = load_and_resolve(&args).unwrap();
    analyze::cmd_analyze(&cfg).unwrap();

    let samples =
        textdrift_core::syntax::read_samples_csv(&out.join("samples_wikipedia_human.csv")).unwrap();
    // All 7 parsed sentences survive (one more sentence is parse_failed).
    let lengths = samples
        .iter()
        .filter(|s| s.metric == MetricKind::SentLength)
        .count();
    assert_eq!(lengths, 7);
    let manifest = std::fs::read_to_string(out.join("manifest_wikipedia_human.json")).unwrap();
    assert!(manifest.contains("\"cleaning_applied\": false"));
}

fn write_synthetic_cell(path: &Path, domain: Domain, source: Source, values: &[f64]) {
    let samples: Vec<MetricSample> = values
        .iter()
        .enumerate()
        .map(|(i, &value)| MetricSample {
            metric: MetricKind::SentLength,
            value,
            article_id: format!("s{i}"),
            sentence_index: Some(0),
            domain,
            source,
        })
        .collect();
    write_samples_csv(File::create(path).unwrap(), &samples).unwrap();
}

/// Deterministic synthetic generator: a human cell with mean 11, sigma
/// about 4.8, and a 5% far tail; a model cell with mean 14 and sigma 1.
/// Engineered classification: mean up, variance narrower, tail reduced.
fn synthetic_pair() -> (Vec<f64>, Vec<f64>) {
    let mut human = Vec::new();
    for i in 0..950 {
        human.push(if i % 2 == 0 { 8.0 } else { 12.0 });
    }
    human.extend(std::iter::repeat(30.0).take(50));
    let model: Vec<f64> = (0..1000)
        .map(|i| if i % 2 == 0 { 13.0 } else { 15.0 })
        .collect();
    (human, model)
}

#[test]
fn compare_classifies_engineered_pair() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    std::fs::create_dir_all(&out).unwrap();

    // Tiny but valid corpora so descriptive stats have something to read.
    let human_articles = vec![FixtureArticle {
        id: "h1".into(),
        title: None,
        text: raw_text(10),
        sentences: vec![FixtureSentence::plain(5, true)],
    }];
    let model_articles = vec![FixtureArticle {
        id: "m1".into(),
        title: None,
        text: raw_text(10),
        sentences: vec![FixtureSentence::plain(6, true)],
    }];
    let (human_path, human_parses) = write_fixture_corpus(
        dir.path(),
        "news_human",
        "ccnews",
        "human",
        None,
        &human_articles,
    );
    let (model_path, model_parses) = write_fixture_corpus(
        dir.path(),
        "news_model",
        "ccnews",
        "model",
        Some("test-model"),
        &model_articles,
    );

    let (human_values, model_values) = synthetic_pair();
    write_synthetic_cell(
        &out.join("samples_ccnews_human.csv"),
        Domain::Ccnews,
        Source::Human,
        &human_values,
    );
    write_synthetic_cell(
        &out.join("samples_ccnews_model.csv"),
        Domain::Ccnews,
        Source::Model,
        &model_values,
    );

    let config = write_config(
        dir.path(),
        &out,
        &[
            ("ccnews", "human", &human_path, Some(&human_parses)),
            ("ccnews", "model", &model_path, Some(&model_parses)),
        ],
        None,
        "",
    );
    let cfg = load_and_resolve(&common_args(config)).unwrap();
    compare::cmd_compare(&cfg).unwrap();

    let schematic = std::fs::read_to_string(out.join("schematic.txt")).unwrap();
    assert!(
        schematic.contains("Sentence Length  news    \u{2197} \u{2198} reduced"),
        "unexpected schematic:\n{schematic}"
    );
    let signatures = std::fs::read_to_string(out.join("signatures.csv")).unwrap();
    assert!(signatures.contains("sent_length,ccnews"));
    assert!(signatures.contains("up"));
    assert!(signatures.contains("narrower"));
    assert!(signatures.contains("reduced"));
    assert!(out.join("summaries.json").exists());
    assert!(out.join("descriptive_stats.csv").exists());
    assert!(out.join("histogram_sent_length_ccnews_human.csv").exists());
    assert!(out.join("histogram_sent_length_ccnews_model.csv").exists());
}

#[test]
fn compare_with_human_only_emits_stats_and_empty_signatures() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let (articles, parses) = write_fixture_corpus(
        dir.path(),
        "wiki_human",
        "wikipedia",
        "human",
        None,
        &small_corpus(),
    );
    let familiar = write_familiar_list(dir.path());
    let config = write_config(
        dir.path(),
        &out,
        &[("wikipedia", "human", &articles, Some(&parses))],
        Some(&familiar),
        "",
    );
    let cfg = load_and_resolve(&common_args(config)).unwrap();
    analyze::cmd_analyze(&cfg).unwrap();
    compare::cmd_compare(&cfg).unwrap();

    let schematic = std::fs::read_to_string(out.join("schematic.txt")).unwrap();
    assert_eq!(schematic.lines().count(), 1, "header only:\n{schematic}");
    let stats = std::fs::read_to_string(out.join("descriptive_stats.csv")).unwrap();
    assert!(stats.contains("wikipedia_human"));
}

#[test]
fn stats_command_writes_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let (articles, parses) = write_fixture_corpus(
        dir.path(),
        "wiki_human",
        "wikipedia",
        "human",
        None,
        &small_corpus(),
    );
    let config = write_config(
        dir.path(),
        &out,
        &[("wikipedia", "human", &articles, Some(&parses))],
        None,
        "",
    );
    let cfg = load_and_resolve(&common_args(config)).unwrap();
    stats::cmd_stats(&cfg).unwrap();
    let table = std::fs::read_to_string(out.join("descriptive_stats.csv")).unwrap();
    // Kept sentences: a1 [5, 6], a2 [4], a3 [3, 500] -> A=3 S=5 W=518.
    assert!(table.contains("wikipedia_human,3,5,518,1.7,103.6,172.7"), "{table}");
}

#[test]
fn analyze_without_sidecar_names_the_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let (articles, _) = write_fixture_corpus(
        dir.path(),
        "wiki_human",
        "wikipedia",
        "human",
        None,
        &small_corpus(),
    );
    let familiar = write_familiar_list(dir.path());
    let config = write_config(
        dir.path(),
        &out,
        &[("wikipedia", "human", &articles, None)],
        Some(&familiar),
        "",
    );
    let cfg = load_and_resolve(&common_args(config)).unwrap();
    let err = analyze::cmd_analyze(&cfg).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    assert!(err.to_string().contains("wikipedia_human"));
}

#[test]
fn regenerate_requires_endpoint_before_any_io() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    // input_articles deliberately missing: the endpoint check comes first.
    let config = write_config(
        dir.path(),
        &out,
        &[],
        None,
        "[regen]\nmodel_name = \"m\"\ndomain = \"eli5\"\ninput_articles = \"missing.jsonl\"\n",
    );
    let cfg = load_and_resolve(&common_args(config)).unwrap();
    let err = regenerate::cmd_regenerate(&cfg).unwrap_err();
    assert_eq!(err.exit_code(), 1);
    assert!(err.to_string().contains("endpoint_url"));
}

#[test]
fn regenerate_writes_model_corpus_and_resumes() {
    let endpoint = start_mock_endpoint(MockBehavior::Reply("A regenerated reply.".into()));
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let articles: Vec<FixtureArticle> = (1..=3)
        .map(|i| FixtureArticle {
            id: format!("e{i}"),
            title: Some(format!("Question {i}?")),
            text: String::new(),
            sentences: vec![],
        })
        .collect();
    let (input, _) = write_fixture_corpus(dir.path(), "eli5_human", "eli5", "human", None, &articles);
    let extra = format!(
        "[regen]\nendpoint_url = {url:?}\nmodel_name = \"mock-model\"\ndomain = \"eli5\"\ninput_articles = {input:?}\ninitial_backoff_ms = 1\n",
        url = endpoint.url,
        input = input.to_str().unwrap(),
    );
    let config = write_config(dir.path(), &out, &[], None, &extra);
    let cfg = load_and_resolve(&common_args(config)).unwrap();
    regenerate::cmd_regenerate(&cfg).unwrap();

    let corpus = std::fs::read_to_string(out.join("regenerated_eli5.jsonl")).unwrap();
    let lines: Vec<&str> = corpus.lines().collect();
    assert_eq!(lines.len(), 3);
    for line in &lines {
        assert!(line.contains("\"source\":\"model\""));
        assert!(line.contains("\"model_name\":\"mock-model\""));
        assert!(line.contains("A regenerated reply."));
    }
    assert!(out.join("manifest_regenerated_eli5.json").exists());
    assert_eq!(endpoint.request_count(), 3);

    // Re-running resumes from the checkpoint without new requests.
    regenerate::cmd_regenerate(&cfg).unwrap();
    assert_eq!(endpoint.request_count(), 3);
}

#[test]
fn regenerate_exit_code_for_dead_endpoint() {
    let endpoint = start_mock_endpoint(MockBehavior::Status(500));
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let articles = vec![FixtureArticle {
        id: "e1".into(),
        title: Some("Q?".into()),
        text: String::new(),
        sentences: vec![],
    }];
    let (input, _) = write_fixture_corpus(dir.path(), "eli5_human", "eli5", "human", None, &articles);
    let extra = format!(
        "[regen]\nendpoint_url = {url:?}\nmodel_name = \"m\"\ndomain = \"eli5\"\ninput_articles = {input:?}\nmax_attempts = 2\ninitial_backoff_ms = 1\n",
        url = endpoint.url,
        input = input.to_str().unwrap(),
    );
    let config = write_config(dir.path(), &out, &[], None, &extra);
    let cfg = load_and_resolve(&common_args(config)).unwrap();
    let err = regenerate::cmd_regenerate(&cfg).unwrap_err();
    assert!(matches!(err, CliError::Endpoint(_)));
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn reruns_are_byte_identical() {
    std::env::set_var("SOURCE_DATE_EPOCH", "1700000000");
    let dir = tempfile::tempdir().unwrap();
    let (articles, parses) = write_fixture_corpus(
        dir.path(),
        "wiki_human",
        "wikipedia",
        "human",
        None,
        &small_corpus(),
    );
    let familiar = write_familiar_list(dir.path());

    let mut outputs = Vec::new();
    for run in 0..2 {
        let out = dir.path().join(format!("out{run}"));
        let config_dir = dir.path().join(format!("cfg{run}"));
        std::fs::create_dir_all(&config_dir).unwrap();
        let config = write_config(
            &config_dir,
            &out,
            &[("wikipedia", "human", &articles, Some(&parses))],
            Some(&familiar),
            "",
        );
        let mut args = common_args(config);
        args.threads = Some(if run == 0 { 1 } else { 4 });
        let cfg = load_and_resolve(&args).unwrap();
        analyze::cmd_analyze(&cfg).unwrap();
        compare::cmd_compare(&cfg).unwrap();

        let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(&out)
            .unwrap()
            .map(|e| {
                let e = e.unwrap();
                (
                    e.file_name().to_string_lossy().into_owned(),
                    std::fs::read(e.path()).unwrap(),
                )
            })
            .collect();
        files.sort();
        outputs.push(files);
    }
    let names0: Vec<&String> = outputs[0].iter().map(|(n, _)| n).collect();
    let names1: Vec<&String> = outputs[1].iter().map(|(n, _)| n).collect();
    assert_eq!(names0, names1);
    for ((name, bytes0), (_, bytes1)) in outputs[0].iter().zip(outputs[1].iter()) {
        assert_eq!(bytes0, bytes1, "output {name} differs between runs");
    }
}

#[test]
fn metrics_invariant_under_article_reordering() {
    let dir = tempfile::tempdir().unwrap();
    let familiar = write_familiar_list(dir.path());
    let mut all_samples = Vec::new();
    for (run, reorder) in [(0, false), (1, true)] {
        let mut corpus = small_corpus();
        if reorder {
            corpus.reverse();
        }
        let sub = dir.path().join(format!("run{run}"));
        std::fs::create_dir_all(&sub).unwrap();
        let out = sub.join("out");
        let (articles, parses) =
            write_fixture_corpus(&sub, "wiki_human", "wikipedia", "human", None, &corpus);
        let config = write_config(
            &sub,
            &out,
            &[("wikipedia", "human", &articles, Some(&parses))],
            Some(&familiar),
            "",
        );
        let cfg = load_and_resolve(&common_args(config)).unwrap();
        analyze::cmd_analyze(&cfg).unwrap();
        let mut samples =
            textdrift_core::syntax::read_samples_csv(&out.join("samples_wikipedia_human.csv"))
                .unwrap();
        samples.sort_by(|a, b| {
            (a.metric, &a.article_id, a.sentence_index, a.value.to_bits()).cmp(&(
                b.metric,
                &b.article_id,
                b.sentence_index,
                b.value.to_bits(),
            ))
        });
        all_samples.push(samples);
    }
    assert_eq!(all_samples[0], all_samples[1]);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_textdrift");
    let status = std::process::Command::new(bin).status().unwrap();
    assert_eq!(status.code(), Some(1), "missing subcommand is a usage error");

    let status = std::process::Command::new(bin).arg("--help").status().unwrap();
    assert_eq!(status.code(), Some(0));

    let status = std::process::Command::new(bin)
        .args(["analyze", "--config", "/nonexistent/run.toml"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1), "unreadable config is a config error");
}
