//! CSV and JSON output of experiment results.

use std::io::{Read, Write};

use super::{ExperimentRecord, ExperimentStats, SqrtFit};
use crate::error::{Error, Result};

pub const RECORD_HEADER: [&str; 8] = [
    "n",
    "k",
    "seed_index",
    "synchronizing",
    "length",
    "sink_size",
    "wall_ms",
    "peak_sets",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    /// Per-sample records as CSV.
    Csv,
    /// Aggregate statistics as JSON.
    Json,
}

/// `x` rounded to `digits` significant decimal digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .unwrap_or(x)
}

fn fmt6(x: f64) -> String {
    if x.is_finite() {
        round_sig(x, 6).to_string()
    } else {
        String::new()
    }
}

/// Serde adapter writing floats at six significant digits, and non-finite
/// values as null.
pub(crate) mod sig6 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(super::round_sig(*x, 6))
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

pub fn write_records_csv<W: Write>(w: W, records: &[ExperimentRecord]) -> Result<()> {
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    out.write_record(RECORD_HEADER)?;
    for r in records {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_records_csv<R: Read>(r: R) -> Result<Vec<ExperimentRecord>> {
    let mut rdr = csv::Reader::from_reader(r);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if header != RECORD_HEADER {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: format!("unexpected record header {}", header.join(",")),
        });
    }
    let records = rdr
        .deserialize()
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(records)
}

pub fn write_stats_json<W: Write>(mut w: W, stats: &ExperimentStats) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, stats)?;
    writeln!(w)?;
    Ok(())
}

pub fn read_stats_json<R: Read>(r: R) -> Result<ExperimentStats> {
    Ok(serde_json::from_reader(r)?)
}

pub fn write_histogram_csv<W: Write>(w: W, stats: &ExperimentStats) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["length", "count"])?;
    for (l, c) in &stats.histogram {
        out.write_record([l.to_string(), c.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

/// Observed means next to the fitted curve and the `c·n^e` comparison model.
pub fn write_fit_csv<W: Write>(
    w: W,
    stats: &[ExperimentStats],
    fit: &SqrtFit,
    power: (f64, f64),
) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["n", "mean_length", "sqrt_model", "power_model"])?;
    for s in stats {
        let n = s.n as f64;
        out.write_record([
            s.n.to_string(),
            fmt6(s.mean_length),
            fmt6(fit.eval(n)),
            fmt6(power.0 * n.powf(power.1)),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Records as CSV, or stats as JSON.
pub fn emit_report<W: Write>(
    w: W,
    records: &[ExperimentRecord],
    stats: &ExperimentStats,
    format: ReportFormat,
) -> Result<()> {
    match format {
        ReportFormat::Csv => write_records_csv(w, records),
        ReportFormat::Json => write_stats_json(w, stats),
    }
}
