use std::collections::BTreeMap;

use shortreset::experiment::{
    emit_report, read_records_csv, read_stats_json, write_records_csv, write_stats_json,
    ReportFormat,
};
use shortreset::oracle::shortest_reset_length;
use shortreset::{run_batch, BatchConfig, Dfa, ExperimentStats, RngSpec};

fn csv_bytes(cfg: &BatchConfig) -> Vec<u8> {
    let mut buf = Vec::new();
    write_records_csv(&mut buf, &run_batch(cfg).unwrap().records).unwrap();
    buf
}

#[test]
fn record_csv_is_byte_identical_across_jobs() {
    let mut cfg = BatchConfig::new(20, 2, 100, RngSpec::new(1));
    cfg.jobs = 1;
    let a = csv_bytes(&cfg);
    cfg.jobs = 4;
    let b = csv_bytes(&cfg);
    assert_eq!(a, b);
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 101);
}

#[test]
fn stats_recomputed_from_emitted_records() {
    let out = run_batch(&BatchConfig::new(12, 2, 1000, RngSpec::new(8))).unwrap();
    let mut csv = Vec::new();
    emit_report(&mut csv, &out.records, &out.stats, ReportFormat::Csv).unwrap();
    let records = read_records_csv(&csv[..]).unwrap();
    assert_eq!(records, out.records);
    let recomputed = ExperimentStats::from_records(12, 2, &records);
    let synced = records.iter().filter(|r| r.synchronizing).count() as u64;
    assert_eq!(recomputed.histogram.values().sum::<u64>(), synced);

    let mut a = Vec::new();
    let mut b = Vec::new();
    write_stats_json(&mut a, &out.stats).unwrap();
    emit_report(&mut b, &records, &recomputed, ReportFormat::Json).unwrap();
    assert_eq!(a, b);
    let parsed = read_stats_json(&a[..]).unwrap();
    assert_eq!(parsed.histogram, out.stats.histogram);
    let lo = *parsed.histogram.keys().next().unwrap() as f64;
    let hi = parsed.max_length.unwrap() as f64;
    assert!(parsed.mean_length >= lo && parsed.mean_length <= hi);
    assert!((0.0..=1.0).contains(&parsed.sync_fraction));
}

#[test]
fn four_state_mean_matches_exhaustive_sweep() {
    let n = 4;
    let mut hist = BTreeMap::new();
    for mut code in 0..4usize.pow(8) {
        let d = Dfa::from_fn(n, 2, |_, _| {
            let t = code % n;
            code /= n;
            t
        })
        .unwrap();
        if let Some(l) = shortest_reset_length(&d).unwrap() {
            *hist.entry(l).or_insert(0u64) += 1;
        }
    }
    let total: u64 = hist.values().sum();
    let exact = hist
        .iter()
        .map(|(&l, &c)| (l * c as usize) as f64)
        .sum::<f64>()
        / total as f64;
    let sampled = run_batch(&BatchConfig::new(n, 2, 100_000, RngSpec::new(17)))
        .unwrap()
        .stats;
    assert!(
        (sampled.mean_length - exact).abs() < 0.1,
        "{} vs {exact}",
        sampled.mean_length
    );
    let exact_sync = total as f64 / 4f64.powi(8);
    assert!((sampled.sync_fraction - exact_sync).abs() < 0.01);
}

#[test]
fn mean_length_grows_with_n() {
    let means: Vec<f64> = [10, 20, 30, 40]
        .iter()
        .map(|&n| {
            run_batch(&BatchConfig::new(n, 2, 1000, RngSpec::new(5)))
                .unwrap()
                .stats
                .mean_length
        })
        .collect();
    assert!(means.windows(2).all(|w| w[0] < w[1]), "{means:?}");
}
