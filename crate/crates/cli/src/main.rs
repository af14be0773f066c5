use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cornerrank::harness::{
    builtin_corpus, exit_code, m2z_reduce, parse_corpus, replay, report_exit_code, run_battery, sr_report, z_reduce,
    Battery, CorpusEntry, Report,
};
use cornerrank::ring::literal::RingSpec;
use cornerrank::Error;

#[derive(Parser)]
#[command(name = "cornerrank", version, about = "Exact stable rank checks with replayable reports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads for batteries and replay (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Exact stable rank of a finite ring.
    Sr {
        /// Ring spec JSON file.
        #[arg(long)]
        ring: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_n: usize,
    },
    /// Run a check battery over a corpus.
    Check {
        /// sr1, row-corner, subequivalence, transforms, combine, full-corner,
        /// corner-idempotent or vaserstein.
        battery: String,
        /// Corpus JSON file (default: the built-in corpus).
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
    /// Seeded integer demos.
    Demo {
        #[arg(value_enum)]
        name: Demo,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Entry bound (default: 1000000 for z-reduce, 50 for m2z-reduce).
        #[arg(long)]
        magnitude: Option<u64>,
        /// Attach pipeline traces to records.
        #[arg(long)]
        trace: bool,
    },
    /// Recheck every witness in a saved report.
    VerifyReport { report: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Demo {
    ZReduce,
    M2zReduce,
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn csv_of(report: &Report) -> Result<String, Error> {
    let mut w = csv::Writer::from_writer(vec![]);
    let err = |e: csv::Error| Error::Invariant(e.to_string());
    w.write_record(["check", "ring", "result", "witnesses", "elapsed_ms", "detail"])
        .map_err(err)?;
    for r in &report.records {
        let result = serde_json::to_value(r.result).unwrap_or_default();
        w.write_record([
            r.check.as_str(),
            r.ring.as_deref().unwrap_or(""),
            result.as_str().unwrap_or(""),
            &r.witnesses.len().to_string(),
            &format!("{:.3}", r.elapsed_ms),
            &r.detail.to_string(),
        ])
        .map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Invariant(e.to_string()))?;
    Ok(String::from_utf8(bytes).unwrap_or_default())
}

fn emit(cli: &Cli, text: &str) -> Result<(), Error> {
    match &cli.out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Parse(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn emit_report(cli: &Cli, report: &Report) -> Result<i32, Error> {
    let text = match cli.format {
        Format::Json => report.to_json(),
        Format::Csv => csv_of(report)?,
    };
    emit(cli, &text)?;
    let passed = report.records.iter().filter(|r| r.result == cornerrank::harness::Outcome::Pass).count();
    eprintln!("{}: {passed}/{} records pass", report.command, report.records.len());
    Ok(report_exit_code(report))
}

fn run(cli: &Cli) -> Result<i32, Error> {
    match &cli.command {
        Command::Sr { ring, max_n } => {
            let spec = RingSpec::from_json(&read(ring)?)?;
            spec.build()?;
            let name = ring.file_stem().and_then(|s| s.to_str()).unwrap_or("ring");
            let report = sr_report(&CorpusEntry::new(name, spec), *max_n);
            if let Some(r) = report.records.first() {
                match r.detail.get("stable_rank") {
                    Some(n) if !n.is_null() => eprintln!("stable rank {n}"),
                    _ => {
                        if let Some(why) = r.detail.get("unsupported").or(r.detail.get("failure")) {
                            eprintln!("{}", why.as_str().unwrap_or_default());
                        }
                    }
                }
            }
            emit_report(cli, &report)
        }
        Command::Check { battery, corpus } => {
            let b = Battery::parse(battery).ok_or_else(|| {
                let names: Vec<_> = Battery::ALL.iter().map(|b| b.name()).collect();
                Error::Parse(format!("unknown battery {battery}; expected one of {}", names.join(", ")))
            })?;
            let corpus = match corpus {
                Some(p) => parse_corpus(&read(p)?)?,
                None => builtin_corpus(),
            };
            emit_report(cli, &run_battery(b, &corpus))
        }
        Command::Demo {
            name,
            seed,
            count,
            magnitude,
            trace,
        } => {
            let report = match name {
                Demo::ZReduce => z_reduce(*seed, *count, magnitude.unwrap_or(1_000_000)),
                Demo::M2zReduce => m2z_reduce(*seed, *count, magnitude.unwrap_or(50), *trace),
            };
            emit_report(cli, &report)
        }
        Command::VerifyReport { report } => {
            let r = Report::from_json(&read(report)?)?;
            let rp = replay(&r);
            let text = serde_json::to_string_pretty(&rp).map_err(|e| Error::Invariant(e.to_string()))?;
            emit(cli, &text)?;
            eprintln!(
                "replayed {} witnesses in {} records: {} failures, {} unwitnessed pass records",
                rp.witnesses,
                rp.records,
                rp.failures.len(),
                rp.unwitnessed.len()
            );
            Ok(if rp.passed() { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("{e}");
            return ExitCode::from(3);
        }
    }
    let code = run(&cli).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        exit_code(&e)
    });
    ExitCode::from(code as u8)
}
