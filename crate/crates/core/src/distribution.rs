//! Distribution summaries and shift classification.
//!
//! Each (metric, domain, source) cell is summarized by sample count, mean,
//! population standard deviation, a uniform-width histogram, and a right-tail
//! report. A human/model cell pair is then classified into three shift
//! signatures: mean shift (standardized difference d), variance shift (ratio
//! ρ = σ_model/σ_human), and long-tail reduction (tail index T, the observed
//! mass above μ+2σ relative to the normal expectation). Thresholds are
//! configurable and every report carries the raw d, ρ, T values so readers
//! can re-threshold.

use crate::cleaning;
use crate::corpus::{Article, Domain, Source};
use crate::syntax::MetricKind;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;
use thiserror::Error;

/// Right-tail mass of a standard normal above two standard deviations.
pub const NORMAL_TAIL_BASELINE: f64 = 0.02275;

#[derive(Debug, Error)]
pub enum DistributionError {
    #[error("need at least 2 samples, got {n}")]
    InsufficientData { n: usize },
    #[error("bin width must be positive and finite, got {width}")]
    InvalidBinWidth { width: f64 },
    #[error("samples must be finite")]
    NonFiniteSample,
    #[error("cell mismatch: human is {human}, model is {model}")]
    CellMismatch { human: String, model: String },
    #[error("duplicate cell for metric {metric}, domain {domain}")]
    DuplicateCell { metric: MetricKind, domain: Domain },
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Streaming count/mean/M2 accumulator with min/max tracking.
///
/// Merging is associative, so shards reduced in parallel agree with the
/// sequential result up to floating-point accumulation order.
#[derive(Debug, Clone, Copy)]
pub struct MomentAccumulator {
    n: u64,
    mean: f64,
    m2: f64,
    min: f64,
    max: f64,
}

impl Default for MomentAccumulator {
    fn default() -> Self {
        Self::new()
    }
}

impl MomentAccumulator {
    pub fn new() -> Self {
        MomentAccumulator {
            n: 0,
            mean: 0.0,
            m2: 0.0,
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
        }
    }

    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
        self.min = self.min.min(x);
        self.max = self.max.max(x);
    }

    pub fn merge(&mut self, other: &MomentAccumulator) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        self.mean += delta * other.n as f64 / n as f64;
        self.m2 += other.m2 + delta * delta * (self.n as f64 * other.n as f64) / n as f64;
        self.n = n;
        self.min = self.min.min(other.min);
        self.max = self.max.max(other.max);
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Population variance (n denominator).
    pub fn variance(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.m2 / self.n as f64
        }
    }

    pub fn std(&self) -> f64 {
        self.variance().max(0.0).sqrt()
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub left_edge: f64,
    pub count: u64,
}

/// Summary of one sample cell: moments plus a uniform-width histogram
/// covering [min, max].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionSummary {
    pub n: usize,
    pub mean: f64,
    /// Population standard deviation (n denominator).
    pub std: f64,
    pub bin_width: f64,
    pub histogram: Vec<HistogramBin>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BinWidth {
    /// Freedman-Diaconis (2·IQR·n^(-1/3)), clamped to at least 1 when every
    /// sample is integral.
    Auto,
    Fixed(f64),
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    let position = q * (n - 1) as f64;
    let lower = position.floor() as usize;
    let fraction = position - lower as f64;
    if lower + 1 < n {
        sorted[lower] + fraction * (sorted[lower + 1] - sorted[lower])
    } else {
        sorted[n - 1]
    }
}

fn auto_bin_width(samples: &[f64]) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let iqr = quantile(&sorted, 0.75) - quantile(&sorted, 0.25);
    let fd = 2.0 * iqr * (samples.len() as f64).powf(-1.0 / 3.0);
    let integral = samples.iter().all(|x| x.fract() == 0.0);
    if integral {
        return fd.max(1.0);
    }
    if fd > 0.0 {
        return fd;
    }
    // Degenerate IQR on non-integral data: fall back to a fixed split of the
    // observed range.
    let range = sorted[sorted.len() - 1] - sorted[0];
    if range > 0.0 {
        range / 64.0
    } else {
        1.0
    }
}

/// Summarize a sample cell.
///
/// The histogram covers [min, max] with uniform bins anchored at min; the
/// maximum falls in the last bin, and counts always sum to n.
pub fn summarize(samples: &[f64], bin_width: BinWidth) -> Result<DistributionSummary, DistributionError> {
    if samples.len() < 2 {
        return Err(DistributionError::InsufficientData { n: samples.len() });
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(DistributionError::NonFiniteSample);
    }
    let mut acc = MomentAccumulator::new();
    for &x in samples {
        acc.push(x);
    }
    let width = match bin_width {
        BinWidth::Fixed(w) if w > 0.0 && w.is_finite() => w,
        BinWidth::Fixed(w) => return Err(DistributionError::InvalidBinWidth { width: w }),
        BinWidth::Auto => auto_bin_width(samples),
    };
    let min = acc.min();
    let max = acc.max();
    let bin_count = if max > min {
        ((max - min) / width).floor() as usize + 1
    } else {
        1
    };
    let mut counts = vec![0u64; bin_count];
    for &x in samples {
        let idx = (((x - min) / width).floor() as usize).min(bin_count - 1);
        counts[idx] += 1;
    }
    let histogram = counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| HistogramBin {
            left_edge: min + i as f64 * width,
            count,
        })
        .collect();
    Ok(DistributionSummary {
        n: samples.len(),
        mean: acc.mean(),
        std: acc.std(),
        bin_width: width,
        histogram,
    })
}

/// Right-tail report: the fraction of samples strictly above μ+2σ, compared
/// with the matched-normal expectation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    pub tail_mass: f64,
    pub normal_baseline: f64,
    pub tail_index: f64,
    pub long_tail_present: bool,
}

pub fn tail_report(samples: &[f64], summary: &DistributionSummary) -> TailReport {
    tail_report_with(samples, summary, SignatureThresholds::default().tail_present)
}

/// Tail report with an explicit presence threshold on T.
///
/// A zero standard deviation leaves the tail undefined; the report then
/// carries T = 0 and no long tail.
pub fn tail_report_with(
    samples: &[f64],
    summary: &DistributionSummary,
    present_threshold: f64,
) -> TailReport {
    if summary.std == 0.0 {
        return TailReport {
            tail_mass: 0.0,
            normal_baseline: NORMAL_TAIL_BASELINE,
            tail_index: 0.0,
            long_tail_present: false,
        };
    }
    let threshold = summary.mean + 2.0 * summary.std;
    let above = samples.iter().filter(|&&x| x > threshold).count();
    let tail_mass = above as f64 / samples.len() as f64;
    let tail_index = tail_mass / NORMAL_TAIL_BASELINE;
    TailReport {
        tail_mass,
        normal_baseline: NORMAL_TAIL_BASELINE,
        tail_index,
        long_tail_present: tail_index > present_threshold,
    }
}

/// Summary plus tail report for one (metric, domain, source) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub metric: MetricKind,
    pub domain: Domain,
    pub source: Source,
    pub summary: DistributionSummary,
    pub tail: TailReport,
}

impl CellSummary {
    pub fn from_samples(
        metric: MetricKind,
        domain: Domain,
        source: Source,
        samples: &[f64],
        bin_width: BinWidth,
        thresholds: &SignatureThresholds,
    ) -> Result<Self, DistributionError> {
        let summary = summarize(samples, bin_width)?;
        let tail = tail_report_with(samples, &summary, thresholds.tail_present);
        Ok(CellSummary {
            metric,
            domain,
            source,
            summary,
            tail,
        })
    }
}

/// Classification thresholds. The defaults are deliberate conventions, not
/// measured constants; reports always carry the raw values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SignatureThresholds {
    /// |d| below this reads as no mean shift.
    pub mean_flat_d: f64,
    /// ρ below this reads as narrower.
    pub rho_narrow: f64,
    /// ρ above this reads as wider.
    pub rho_wide: f64,
    /// T above this reads as a long tail being present.
    pub tail_present: f64,
    /// A present human tail counts as reduced when T_model ≤ this fraction
    /// of T_human.
    pub tail_reduced: f64,
}

impl Default for SignatureThresholds {
    fn default() -> Self {
        SignatureThresholds {
            mean_flat_d: 0.1,
            rho_narrow: 0.9,
            rho_wide: 1.1,
            tail_present: 1.5,
            tail_reduced: 0.75,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeanShift {
    Up,
    Down,
    Flat,
}

impl MeanShift {
    pub fn arrow(self) -> &'static str {
        match self {
            MeanShift::Up => "\u{2197}",
            MeanShift::Down => "\u{2198}",
            MeanShift::Flat => "\u{2248}",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarianceShift {
    Narrower,
    Wider,
    Flat,
}

impl VarianceShift {
    pub fn arrow(self) -> &'static str {
        match self {
            VarianceShift::Narrower => "\u{2198}",
            VarianceShift::Wider => "\u{2197}",
            VarianceShift::Flat => "\u{2248}",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailVerdict {
    Reduced,
    Comparable,
    NotApplicable,
}

impl TailVerdict {
    pub fn label(self) -> &'static str {
        match self {
            TailVerdict::Reduced => "reduced",
            TailVerdict::Comparable => "\u{2248}",
            TailVerdict::NotApplicable => "n/a",
        }
    }
}

/// The three-signature classification for one human/model cell pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignatureReport {
    pub metric: MetricKind,
    pub domain: Domain,
    pub d: f64,
    pub mean_shift: MeanShift,
    pub rho: f64,
    pub variance_shift: VarianceShift,
    pub t_human: f64,
    pub t_model: f64,
    pub tail_verdict: TailVerdict,
}

/// Classify the shift between a human cell and a model cell of the same
/// metric and domain.
///
/// d = (μ_model − μ_human) / √((σ_human² + σ_model²)/2), ρ = σ_model/σ_human.
/// The tail verdict is n/a when the human distribution has no long tail;
/// otherwise it is reduced when the model tail is absent or T_model has
/// dropped below the configured fraction of T_human, and comparable
/// otherwise.
pub fn classify_signatures(
    human: &CellSummary,
    model: &CellSummary,
    thresholds: &SignatureThresholds,
) -> Result<SignatureReport, DistributionError> {
    if human.metric != model.metric || human.domain != model.domain {
        return Err(DistributionError::CellMismatch {
            human: format!("{}/{}", human.metric, human.domain),
            model: format!("{}/{}", model.metric, model.domain),
        });
    }
    let (mu_h, sigma_h) = (human.summary.mean, human.summary.std);
    let (mu_m, sigma_m) = (model.summary.mean, model.summary.std);

    let denom = ((sigma_h * sigma_h + sigma_m * sigma_m) / 2.0).sqrt();
    let diff = mu_m - mu_h;
    let d = if denom > 0.0 {
        diff / denom
    } else if diff == 0.0 {
        0.0
    } else {
        diff.signum() * f64::INFINITY
    };
    let mean_shift = if d.abs() < thresholds.mean_flat_d {
        MeanShift::Flat
    } else if d > 0.0 {
        MeanShift::Up
    } else {
        MeanShift::Down
    };

    let rho = if sigma_h > 0.0 {
        sigma_m / sigma_h
    } else if sigma_m == 0.0 {
        1.0
    } else {
        f64::INFINITY
    };
    let variance_shift = if rho < thresholds.rho_narrow {
        VarianceShift::Narrower
    } else if rho > thresholds.rho_wide {
        VarianceShift::Wider
    } else {
        VarianceShift::Flat
    };

    let tail_verdict = if !human.tail.long_tail_present {
        TailVerdict::NotApplicable
    } else if !model.tail.long_tail_present
        || model.tail.tail_index <= thresholds.tail_reduced * human.tail.tail_index
    {
        TailVerdict::Reduced
    } else {
        TailVerdict::Comparable
    };

    Ok(SignatureReport {
        metric: human.metric,
        domain: human.domain,
        d,
        mean_shift,
        rho,
        variance_shift,
        t_human: human.tail.tail_index,
        t_model: model.tail.tail_index,
        tail_verdict,
    })
}

/// Corpus-level counts over eligible (cleaned, parsed) sentences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescriptiveStats {
    pub articles: u64,
    pub sentences: u64,
    pub words: u64,
    pub sentences_per_article: f64,
    pub words_per_sentence: f64,
    pub words_per_article: f64,
}

/// Round half away from zero to one decimal, the precision these stats are
/// reported at.
pub fn round1(x: f64) -> f64 {
    (x * 10.0).round() / 10.0
}

/// Compute descriptive statistics over an already-cleaned corpus.
///
/// Sentences flagged `parse_failed` are not eligible and articles with no
/// eligible sentences do not count.
pub fn descriptive_stats(articles: &[Article]) -> Result<DescriptiveStats, DistributionError> {
    let mut article_count = 0u64;
    let mut sentence_count = 0u64;
    let mut word_count = 0u64;
    for article in articles {
        let mut eligible = 0u64;
        for sentence in &article.sentences {
            if let Ok(words) = cleaning::sentence_word_count(sentence) {
                eligible += 1;
                word_count += words as u64;
            }
        }
        if eligible > 0 {
            article_count += 1;
            sentence_count += eligible;
        }
    }
    if article_count == 0 {
        return Err(DistributionError::EmptyCorpus);
    }
    Ok(DescriptiveStats {
        articles: article_count,
        sentences: sentence_count,
        words: word_count,
        sentences_per_article: sentence_count as f64 / article_count as f64,
        words_per_sentence: word_count as f64 / sentence_count as f64,
        words_per_article: word_count as f64 / article_count as f64,
    })
}

/// Normal density with the cell's moments, used for the plotting columns of
/// histogram exports. A zero σ yields zero density everywhere.
pub fn normal_density(x: f64, mean: f64, std: f64) -> f64 {
    if std <= 0.0 {
        return 0.0;
    }
    let z = (x - mean) / std;
    (-0.5 * z * z).exp() / (std * (2.0 * std::f64::consts::PI).sqrt())
}

pub fn write_summaries_json(path: &Path, cells: &[CellSummary]) -> Result<(), DistributionError> {
    let text = serde_json::to_string_pretty(cells)?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

pub fn write_signatures_csv<W: Write>(
    writer: W,
    reports: &[SignatureReport],
) -> Result<(), DistributionError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([
        "metric",
        "domain",
        "d",
        "mean_shift",
        "rho",
        "variance_shift",
        "t_human",
        "t_model",
        "tail_verdict",
    ])?;
    for r in reports {
        w.write_record([
            r.metric.as_str().to_string(),
            r.domain.as_str().to_string(),
            r.d.to_string(),
            format!("{:?}", r.mean_shift).to_lowercase(),
            r.rho.to_string(),
            format!("{:?}", r.variance_shift).to_lowercase(),
            r.t_human.to_string(),
            r.t_model.to_string(),
            match r.tail_verdict {
                TailVerdict::Reduced => "reduced".to_string(),
                TailVerdict::Comparable => "comparable".to_string(),
                TailVerdict::NotApplicable => "n/a".to_string(),
            },
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_descriptive_csv<W: Write>(
    writer: W,
    rows: &[(String, DescriptiveStats)],
) -> Result<(), DistributionError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["corpus", "articles", "sentences", "words", "s_per_a", "w_per_s", "w_per_a"])?;
    for (label, stats) in rows {
        w.write_record([
            label.clone(),
            stats.articles.to_string(),
            stats.sentences.to_string(),
            stats.words.to_string(),
            format!("{:.1}", round1(stats.sentences_per_article)),
            format!("{:.1}", round1(stats.words_per_sentence)),
            format!("{:.1}", round1(stats.words_per_article)),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Per-cell histogram export: bin left edge, count, and the normal-fit
/// density at the bin center.
pub fn write_histogram_csv<W: Write>(writer: W, cell: &CellSummary) -> Result<(), DistributionError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["bin_left_edge", "count", "normal_fit_density"])?;
    for bin in &cell.summary.histogram {
        let center = bin.left_edge + cell.summary.bin_width / 2.0;
        w.write_record([
            bin.left_edge.to_string(),
            bin.count.to_string(),
            normal_density(center, cell.summary.mean, cell.summary.std).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
