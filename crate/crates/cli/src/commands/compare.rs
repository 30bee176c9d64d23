//! The compare stage: read sample files, summarize each (metric, domain,
//! source) cell at its canonical scope, classify human/model pairs, and
//! write every distribution output.

use crate::config::ResolvedConfig;
use crate::util::RunLog;
use crate::CliError;
use std::collections::BTreeMap;
use std::fs::File;
use textdrift_core::cleaning::clean_corpus;
use textdrift_core::corpus::{load_corpus, Domain, Source};
use textdrift_core::distribution::{
    classify_signatures, descriptive_stats, write_descriptive_csv, write_histogram_csv,
    write_signatures_csv, write_summaries_json, BinWidth, CellSummary, DistributionError,
};
use textdrift_core::schematic::emit_schematic;
use textdrift_core::syntax::{read_samples_csv, read_samples_jsonl, MetricKind};

type CellMap = BTreeMap<(MetricKind, Domain), BTreeMap<Source, CellSummary>>;

fn collect_cells(cfg: &ResolvedConfig, log: &mut RunLog) -> Result<CellMap, CliError> {
    let mut cells: CellMap = BTreeMap::new();
    for entry in &cfg.corpora {
        let tag = entry.tag();
        let csv_path = cfg.out_dir.join(format!("samples_{tag}.csv"));
        let jsonl_path = cfg.out_dir.join(format!("samples_{tag}.jsonl"));
        let (path, samples) = if csv_path.exists() {
            let samples = read_samples_csv(&csv_path)?;
            (csv_path, samples)
        } else if jsonl_path.exists() {
            (jsonl_path.clone(), read_samples_jsonl(&jsonl_path)?)
        } else {
            log.push(format!(
                "compare: no sample file for {tag} at {}; corpus skipped",
                csv_path.display()
            ));
            continue;
        };
        let mut grouped: BTreeMap<MetricKind, Vec<f64>> = BTreeMap::new();
        for sample in samples {
            if sample.domain != entry.domain || sample.source != entry.source {
                return Err(CliError::Data(format!(
                    "{}: sample row carries {}/{}, expected {}/{}",
                    path.display(),
                    sample.domain,
                    sample.source,
                    entry.domain,
                    entry.source
                )));
            }
            if sample.scope() == sample.metric.canonical_scope() {
                grouped.entry(sample.metric).or_default().push(sample.value);
            }
        }
        for (metric, values) in grouped {
            if values.len() < 2 {
                log.push(format!(
                    "compare: cell {metric}/{}/{}: {} samples, need at least 2; skipped",
                    entry.domain,
                    entry.source,
                    values.len()
                ));
                continue;
            }
            let cell = CellSummary::from_samples(
                metric,
                entry.domain,
                entry.source,
                &values,
                BinWidth::Auto,
                &cfg.thresholds,
            )?;
            cells
                .entry((metric, entry.domain))
                .or_default()
                .insert(entry.source, cell);
        }
    }
    Ok(cells)
}

pub fn cmd_compare(cfg: &ResolvedConfig) -> Result<(), CliError> {
    let mut log = RunLog::new();
    let cells = collect_cells(cfg, &mut log)?;

    let mut reports = Vec::new();
    for ((metric, domain), by_source) in &cells {
        if let Some(model) = by_source.get(&Source::Model) {
            match by_source.get(&Source::Human) {
                Some(human) => reports.push(classify_signatures(human, model, &cfg.thresholds)?),
                None => log.push(format!(
                    "compare: cell {metric}/{domain}: human cell missing for model cell; skipped"
                )),
            }
        }
    }

    let all_cells: Vec<CellSummary> = cells
        .values()
        .flat_map(|by_source| by_source.values().cloned())
        .collect();

    let out = &cfg.out_dir;
    let doc = emit_schematic(&reports)?;
    std::fs::write(out.join("schematic.txt"), doc.to_text())?;
    std::fs::write(out.join("schematic.csv"), doc.to_csv())?;
    write_summaries_json(&out.join("summaries.json"), &all_cells)?;
    write_signatures_csv(File::create(out.join("signatures.csv"))?, doc.cells())?;
    for cell in &all_cells {
        let name = format!(
            "histogram_{}_{}_{}.csv",
            cell.metric, cell.domain, cell.source
        );
        write_histogram_csv(File::create(out.join(name))?, cell)?;
    }

    let mut stats_rows = Vec::new();
    for entry in &cfg.corpora {
        let tag = entry.tag();
        let Some(parses) = &entry.parses else {
            log.push(format!(
                "compare: {tag}: no parse sidecar configured; descriptive stats skipped"
            ));
            continue;
        };
        let articles = load_corpus(&entry.articles, parses, entry.domain)?;
        let (cleaned, _) = clean_corpus(articles, &cfg.policy)?;
        match descriptive_stats(&cleaned) {
            Ok(stats) => stats_rows.push((tag, stats)),
            Err(DistributionError::EmptyCorpus) => log.push(format!(
                "compare: {tag}: no eligible sentences; descriptive stats skipped"
            )),
            Err(e) => return Err(e.into()),
        }
    }
    write_descriptive_csv(File::create(out.join("descriptive_stats.csv"))?, &stats_rows)?;

    log.push(format!(
        "compare: cells={} signatures={} descriptive_rows={}",
        all_cells.len(),
        doc.cells().len(),
        stats_rows.len()
    ));
    log.append_to(&out.join("run_log.txt"))?;
    Ok(())
}
