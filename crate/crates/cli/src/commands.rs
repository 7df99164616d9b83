use std::fs::{self, File};
use std::io::{self, BufWriter, Read, Write};
use std::path::Path;
use std::process::ExitCode;

use serde_json::json;
use shortreset::experiment::{
    power_model_rss, read_stats_json, write_fit_csv, write_histogram_csv, write_records_csv,
    write_stats_json,
};
use shortreset::generators::{family, family_names};
use shortreset::{
    fit_sqrt_model, oracle, parse_automata, random_dfa, run_batch, shortest_reset_word,
    sink_component_size, BatchConfig, Dfa, Error, Result, RngSpec, SearchConfig,
};

use crate::{ExperimentArgs, FitArgs, Format, GenerateArgs, InputArgs, SolveArgs};

const POWER_MODEL: (f64, f64) = (1.95, 0.55);

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NotSynchronizing => 1,
        Error::Usage(_) | Error::Parse { .. } => 2,
        Error::Resource(_) | Error::Internal(_) => 3,
        Error::Io(_) => 4,
        Error::Csv(c) if matches!(c.kind(), csv::ErrorKind::Io(_)) => 4,
        Error::Json(j) if j.is_io() => 4,
        Error::Csv(_) | Error::Json(_) => 2,
    }
}

/// Byte counts with an optional binary suffix: `4096`, `64K`, `512M`, `2G`.
pub fn parse_bytes(s: &str) -> std::result::Result<usize, String> {
    let t = s.trim();
    let (digits, shift) = match t.chars().last().map(|c| c.to_ascii_uppercase()) {
        Some('K') => (&t[..t.len() - 1], 10),
        Some('M') => (&t[..t.len() - 1], 20),
        Some('G') => (&t[..t.len() - 1], 30),
        _ => (t, 0),
    };
    let v: usize = digits
        .parse()
        .map_err(|_| format!("invalid byte count `{s}`"))?;
    v.checked_mul(1 << shift)
        .ok_or_else(|| format!("byte count `{s}` overflows"))
}

fn lookup_family(name: &str) -> Result<&'static dyn shortreset::generators::Family> {
    family(name).ok_or_else(|| {
        Error::Usage(format!(
            "unknown family `{name}` (known: {})",
            family_names().collect::<Vec<_>>().join(", ")
        ))
    })
}

fn load(args: &InputArgs) -> Result<Vec<Dfa>> {
    if let Some(name) = &args.family {
        let n = args
            .states
            .ok_or_else(|| Error::Usage("--family needs --states".into()))?;
        if n == 0 {
            return Err(Error::Usage("--states must be positive".into()));
        }
        return Ok(vec![lookup_family(name)?.build(n)]);
    }
    let mut text = String::new();
    match args.input.as_deref() {
        None => io::stdin().read_to_string(&mut text)?,
        Some(p) if p == Path::new("-") => io::stdin().read_to_string(&mut text)?,
        Some(p) => File::open(p)?.read_to_string(&mut text)?,
    };
    let automata = parse_automata(&text)?;
    if automata.is_empty() {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "no automaton in input".into(),
        });
    }
    Ok(automata)
}

fn search_config(
    memory_limit: Option<usize>,
    ibfs_weight: Option<f64>,
    warmup: Option<usize>,
) -> SearchConfig {
    let mut cfg = SearchConfig::default();
    if let Some(m) = memory_limit {
        cfg.memory_limit = m;
    }
    cfg.ibfs_weight = ibfs_weight;
    if let Some(w) = warmup {
        cfg.warmup_steps = w;
    }
    cfg
}

fn join(word: &[usize]) -> String {
    word.iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn check(args: &InputArgs) -> Result<ExitCode> {
    let automata = load(args)?;
    let mut out = io::stdout().lock();
    for (i, d) in automata.iter().enumerate() {
        let sync = d.is_synchronizing();
        let sink = sink_component_size(d).ok();
        match args.format {
            Format::Json => writeln!(out, "{}", json!({"synchronizing": sync, "sink_size": sink}))?,
            _ => {
                if i > 0 {
                    writeln!(out)?;
                }
                writeln!(out, "synchronizing: {}", if sync { "yes" } else { "no" })?;
                match sink {
                    Some(s) => writeln!(out, "sink_size: {s}")?,
                    None => writeln!(out, "sink_size: none (several sink components)")?,
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

pub fn solve(args: &SolveArgs) -> Result<ExitCode> {
    let automata = load(&args.input)?;
    let mut cfg = search_config(args.memory_limit, args.ibfs_weight, args.warmup_steps);
    cfg.validate()?;
    let print_word = !args.no_word;
    if args.oracle {
        if let Some(d) = automata
            .iter()
            .find(|d| d.states() > oracle::MAX_ORACLE_STATES)
        {
            return Err(Error::Usage(format!(
                "--oracle supports at most {} states, got {}",
                oracle::MAX_ORACLE_STATES,
                d.states()
            )));
        }
    }
    // The word is always reconstructed so it can be checked before printing.
    cfg.reconstruct_word = true;
    let mut out = io::stdout().lock();
    let mut status = ExitCode::SUCCESS;
    for (i, d) in automata.iter().enumerate() {
        if args.input.format == Format::Text && i > 0 {
            writeln!(out)?;
        }
        let r = match shortest_reset_word(d, &cfg) {
            Ok(r) => r,
            Err(Error::NotSynchronizing) => {
                eprintln!("shortreset: automaton {} is not synchronizing", i + 1);
                match args.input.format {
                    Format::Json => writeln!(out, "{}", json!({"synchronizing": false}))?,
                    _ => writeln!(out, "synchronizing: no")?,
                }
                status = ExitCode::from(1);
                continue;
            }
            Err(e) => return Err(e),
        };
        let word = r.word.as_deref().unwrap_or(&[]);
        if !d.is_reset_word(word) && !(d.states() == 1 && word.is_empty()) {
            return Err(Error::Internal(
                "computed word does not reset the automaton".into(),
            ));
        }
        if args.oracle {
            let expected = oracle::shortest_reset_length(d)?;
            if expected != Some(r.length) {
                return Err(Error::Internal(format!(
                    "oracle length {expected:?} disagrees with search length {}",
                    r.length
                )));
            }
        }
        let s = &r.stats;
        match args.input.format {
            Format::Json => {
                let mut v = json!({
                    "synchronizing": true,
                    "length": r.length,
                    "stats": {
                        "forward_steps": s.forward_steps,
                        "backward_steps": s.backward_steps,
                        "warmup_steps": s.warmup_steps,
                        "reduced_states": s.reduced_states,
                        "peak_sets": s.peak_stored_sets,
                        "fallback_used": s.fallback_used,
                        "wall_ms": s.wall_time.as_secs_f64() * 1e3,
                    },
                });
                if print_word {
                    v["word"] = json!(word);
                }
                if args.oracle {
                    v["oracle"] = json!("agrees");
                }
                writeln!(out, "{v}")?;
            }
            _ => {
                writeln!(out, "length: {}", r.length)?;
                if print_word {
                    writeln!(out, "word: {}", join(word))?;
                }
                if args.oracle {
                    writeln!(out, "oracle: agrees")?;
                }
                writeln!(out, "forward_steps: {}", s.forward_steps)?;
                writeln!(out, "backward_steps: {}", s.backward_steps)?;
                writeln!(out, "reduced_states: {}", s.reduced_states)?;
                writeln!(out, "peak_sets: {}", s.peak_stored_sets)?;
                writeln!(
                    out,
                    "fallback: {}",
                    if s.fallback_used { "yes" } else { "no" }
                )?;
                writeln!(out, "time_ms: {:.3}", s.wall_time.as_secs_f64() * 1e3)?;
            }
        }
    }
    Ok(status)
}

fn sink_for(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) if p != Path::new("-") => Box::new(BufWriter::new(File::create(p)?)),
        _ => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn generate(args: &GenerateArgs) -> Result<ExitCode> {
    if args.states == 0 || args.letters == 0 {
        return Err(Error::Usage(
            "--states and --letters must be positive".into(),
        ));
    }
    let mut out = sink_for(args.output.as_deref())?;
    if let Some(name) = &args.family {
        write!(out, "{}", lookup_family(name)?.build(args.states))?;
    } else {
        let spec = RngSpec::new(args.seed);
        for i in 0..args.samples {
            if i > 0 {
                writeln!(out)?;
            }
            write!(
                out,
                "{}",
                random_dfa(args.states, args.letters, spec.for_index(i))
            )?;
        }
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

pub fn experiment(args: &ExperimentArgs) -> Result<ExitCode> {
    if args.format == Format::Text {
        return Err(Error::Usage("experiment writes csv or json".into()));
    }
    let mut cfg = BatchConfig::new(
        args.states,
        args.letters,
        args.samples,
        RngSpec::new(args.seed),
    );
    cfg.jobs = args.jobs;
    cfg.record_timings = args.timings;
    cfg.search = search_config(args.memory_limit, args.ibfs_weight, args.warmup_steps);
    cfg.search.reconstruct_word = false;
    let batch = run_batch(&cfg)?;
    for f in &batch.failures {
        eprintln!("shortreset: sample {} failed: {}", f.seed_index, f.error);
    }
    match &args.output {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            write_records_csv(
                BufWriter::new(File::create(dir.join("records.csv"))?),
                &batch.records,
            )?;
            write_stats_json(
                BufWriter::new(File::create(dir.join("stats.json"))?),
                &batch.stats,
            )?;
            write_histogram_csv(
                BufWriter::new(File::create(dir.join("histogram.csv"))?),
                &batch.stats,
            )?;
        }
        None => {
            let out = io::stdout().lock();
            match args.format {
                Format::Json => write_stats_json(out, &batch.stats)?,
                _ => write_records_csv(out, &batch.records)?,
            }
        }
    }
    Ok(if batch.failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    })
}

pub fn fit(args: &FitArgs) -> Result<ExitCode> {
    let mut stats = args
        .input
        .iter()
        .map(|p| read_stats_json(File::open(p)?))
        .collect::<Result<Vec<_>>>()?;
    stats.sort_by_key(|s| s.n);
    let fit = fit_sqrt_model(&stats)?;
    let points: Vec<(f64, f64)> = stats
        .iter()
        .filter(|s| s.mean_length.is_finite())
        .map(|s| (s.n as f64, s.mean_length))
        .collect();
    let power_rss = power_model_rss(&points, POWER_MODEL.0, POWER_MODEL.1);
    if let Some(p) = &args.output {
        write_fit_csv(BufWriter::new(File::create(p)?), &stats, &fit, POWER_MODEL)?;
    }
    let mut out = io::stdout().lock();
    match args.format {
        Format::Json => writeln!(
            out,
            "{}",
            json!({"a": fit.a, "b": fit.b, "rss": fit.rss, "power_model_rss": power_rss})
        )?,
        _ => {
            writeln!(out, "a: {:.6}", fit.a)?;
            writeln!(out, "b: {:.6}", fit.b)?;
            writeln!(out, "rss: {:.6}", fit.rss)?;
            writeln!(out, "power_model_rss: {power_rss:.6}")?;
        }
    }
    Ok(ExitCode::SUCCESS)
}
