//! Batch experiments over uniformly random automata.

mod fit;
mod hoeffding;
mod report;
mod sink;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use fit::{fit_sqrt_points, power_model_rss, SqrtFit};
pub use hoeffding::hoeffding_bound;
pub use report::{
    emit_report, read_records_csv, read_stats_json, round_sig, write_fit_csv, write_histogram_csv,
    write_records_csv, write_stats_json, ReportFormat, RECORD_HEADER,
};
pub use sink::sink_component_size;

use crate::error::{usage, Error, Result};
use crate::generators::{random_dfa, RngSpec};
use crate::search::{shortest_reset_word, SearchConfig};

/// One sampled automaton.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub n: usize,
    pub k: usize,
    pub seed_index: u64,
    pub synchronizing: bool,
    /// Shortest reset length; present iff synchronizing.
    pub length: Option<usize>,
    /// Size of the sink component, 0 if it is not unique.
    pub sink_size: usize,
    #[serde(with = "report::sig6")]
    pub wall_ms: f64,
    pub peak_sets: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentStats {
    pub n: usize,
    pub k: usize,
    pub samples: usize,
    #[serde(with = "report::sig6")]
    pub sync_fraction: f64,
    /// Mean shortest reset length over the synchronizing samples.
    #[serde(with = "report::sig6")]
    pub mean_length: f64,
    /// Unbiased sample variance of the same.
    #[serde(with = "report::sig6")]
    pub variance: f64,
    pub max_length: Option<usize>,
    /// Mean of `sink_size / n` over the synchronizing samples.
    #[serde(with = "report::sig6")]
    pub mean_sink_fraction: f64,
    pub histogram: BTreeMap<usize, u64>,
}

impl ExperimentStats {
    /// Aggregates records that all share `n` and `k`. Float fields are NaN
    /// when undefined (no synchronizing samples, or one for the variance).
    pub fn from_records(n: usize, k: usize, records: &[ExperimentRecord]) -> ExperimentStats {
        let mut histogram = BTreeMap::new();
        let mut sink_sum = 0.0;
        for r in records {
            if let Some(l) = r.length {
                *histogram.entry(l).or_insert(0u64) += 1;
                sink_sum += r.sink_size as f64 / n as f64;
            }
        }
        let synced: u64 = histogram.values().sum();
        let c = synced as f64;
        let mean = histogram
            .iter()
            .map(|(&l, &h)| l as f64 * h as f64)
            .sum::<f64>()
            / c;
        let variance = if synced > 1 {
            histogram
                .iter()
                .map(|(&l, &h)| {
                    let d = l as f64 - mean;
                    d * d * h as f64
                })
                .sum::<f64>()
                / (c - 1.0)
        } else {
            f64::NAN
        };
        ExperimentStats {
            n,
            k,
            samples: records.len(),
            sync_fraction: if records.is_empty() {
                f64::NAN
            } else {
                c / records.len() as f64
            },
            mean_length: mean,
            variance,
            max_length: histogram.keys().next_back().copied(),
            mean_sink_fraction: sink_sum / c,
            histogram,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BatchConfig {
    pub n: usize,
    pub k: usize,
    pub samples: u64,
    pub rng: RngSpec,
    /// Worker threads; 0 uses the global pool.
    pub jobs: usize,
    pub search: SearchConfig,
    /// Fill `wall_ms`; otherwise it is 0 and the records are reproducible
    /// byte for byte.
    pub record_timings: bool,
}

impl BatchConfig {
    pub fn new(n: usize, k: usize, samples: u64, rng: RngSpec) -> Self {
        BatchConfig {
            n,
            k,
            samples,
            rng,
            jobs: 0,
            search: SearchConfig {
                reconstruct_word: false,
                ..SearchConfig::default()
            },
            record_timings: false,
        }
    }
}

/// A sample whose search failed. It keeps its record, with no length.
#[derive(Clone, Debug)]
pub struct SampleFailure {
    pub seed_index: u64,
    pub error: String,
}

#[derive(Clone, Debug)]
pub struct BatchOutput {
    pub records: Vec<ExperimentRecord>,
    pub stats: ExperimentStats,
    pub failures: Vec<SampleFailure>,
}

/// Samples `cfg.samples` automata with seeds `rng.seed + index` and solves
/// each synchronizing one exactly.
pub fn run_batch(cfg: &BatchConfig) -> Result<BatchOutput> {
    if cfg.samples == 0 {
        return Err(usage("at least one sample is needed"));
    }
    if cfg.n == 0 || cfg.k == 0 {
        return Err(usage("states and letters must be positive"));
    }
    cfg.search.validate()?;
    let work = || {
        (0..cfg.samples)
            .into_par_iter()
            .map(|i| run_sample(cfg, i))
            .collect::<Vec<_>>()
    };
    let results = if cfg.jobs == 0 {
        work()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
            .map_err(|e| Error::Resource(e.to_string()))?
            .install(work)
    };
    let mut records = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for (rec, err) in results {
        if let Some(error) = err {
            failures.push(SampleFailure {
                seed_index: rec.seed_index,
                error,
            });
        }
        records.push(rec);
    }
    let stats = ExperimentStats::from_records(cfg.n, cfg.k, &records);
    Ok(BatchOutput {
        records,
        stats,
        failures,
    })
}

fn run_sample(cfg: &BatchConfig, index: u64) -> (ExperimentRecord, Option<String>) {
    let started = std::time::Instant::now();
    let dfa = random_dfa(cfg.n, cfg.k, cfg.rng.for_index(index));
    let synchronizing = dfa.is_synchronizing();
    let mut rec = ExperimentRecord {
        n: cfg.n,
        k: cfg.k,
        seed_index: index,
        synchronizing,
        length: None,
        sink_size: sink_component_size(&dfa).unwrap_or(0),
        wall_ms: 0.0,
        peak_sets: 0,
    };
    let mut err = None;
    if synchronizing {
        match shortest_reset_word(&dfa, &cfg.search) {
            Ok(r) => {
                rec.length = Some(r.length);
                rec.peak_sets = r.stats.peak_stored_sets;
            }
            Err(e) => {
                rec.synchronizing = false;
                err = Some(e.to_string());
            }
        }
    }
    if cfg.record_timings {
        rec.wall_ms = started.elapsed().as_secs_f64() * 1e3;
    }
    (rec, err)
}

/// Fits `a·√(n − b)` to the mean lengths of several batches.
pub fn fit_sqrt_model(stats: &[ExperimentStats]) -> Result<SqrtFit> {
    let points: Vec<(f64, f64)> = stats
        .iter()
        .filter(|s| s.mean_length.is_finite())
        .map(|s| (s.n as f64, s.mean_length))
        .collect();
    fit_sqrt_points(&points)
}
