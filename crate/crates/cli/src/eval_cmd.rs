// SPDX-License-Identifier: Apache-2.0

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};

use lzjd_core::eval::{
    alignment_test, fragment_test, generate_corpus, load_corpus, lower_bound_report, make_corpus,
    noise_test, scb_test, Corpus, CorpusConfig, DigestDb, FragmentMode, HarnessConfig, NoiseConfig,
    ScbConfig, TestReport, ALIGN_FIXED_KB, ALIGN_PERCENTS, FRAGMENT_SIZES,
};
use lzjd_core::DEFAULT_K;

use crate::{EXIT_FAILURE, EXIT_OK, EXIT_USAGE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Test {
    Fragment,
    Alignment,
    Noise,
    Scb,
    All,
    /// Only write the synthetic corpus to --corpus
    MakeCorpus,
}

#[derive(Debug, Parser)]
#[command(name = "lzjd-eval", version, about = "Sensitivity and robustness tests for LZJD digests")]
pub struct EvalArgs {
    #[arg(value_enum)]
    pub test: Test,

    /// Corpus directory. Generated there if missing or empty; without it a
    /// synthetic corpus is generated in memory.
    #[arg(long, value_name = "DIR")]
    pub corpus: Option<PathBuf>,

    /// CSV output. Tests producing several tables write NAME.TABLE.csv.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,

    /// Seed for mutations and for corpus generation
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Number of files in a generated corpus
    #[arg(long, default_value_t = 50)]
    pub files: usize,

    /// Digest size
    #[arg(long = "k", default_value_t = DEFAULT_K as u32, value_parser = clap::value_parser!(u32).range(1..))]
    pub k: u32,

    /// Files in the random-noise subset
    #[arg(long, default_value_t = 10)]
    pub noise_files: usize,

    /// Trials per SCB file size
    #[arg(long, default_value_t = 10)]
    pub scb_trials: usize,

    /// Worker threads [default: available parallelism]
    #[arg(short = 'p', long = "threads", value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: Option<u32>,
}

fn corpus_config(args: &EvalArgs) -> CorpusConfig {
    CorpusConfig {
        n_files: args.files,
        seed: CorpusConfig::default().seed ^ args.seed,
        ..CorpusConfig::default()
    }
}

fn is_empty_dir(dir: &Path) -> io::Result<bool> {
    Ok(fs::read_dir(dir)?.next().is_none())
}

fn obtain_corpus(args: &EvalArgs) -> io::Result<Corpus> {
    match &args.corpus {
        None => Ok(generate_corpus(&corpus_config(args))),
        Some(dir) => {
            if !dir.exists() || is_empty_dir(dir)? {
                eprintln!("lzjd-eval: generating corpus in {}", dir.display());
                make_corpus(dir, &corpus_config(args))?;
            }
            load_corpus(dir)
        }
    }
}

/// Output path for one table when a run writes several.
fn table_path(out: &Path, table: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.{table}.csv"))
}

fn write_reports(reports: &[TestReport], out: Option<&Path>) -> io::Result<()> {
    if let Some(parent) = out.and_then(Path::parent).filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    match out {
        Some(path) if reports.len() == 1 => reports[0].write_csv(BufWriter::new(File::create(path)?)),
        Some(path) => {
            for r in reports {
                r.write_csv(BufWriter::new(File::create(table_path(path, &r.name))?))?;
            }
            Ok(())
        }
        None => {
            let mut stdout = io::stdout().lock();
            for r in reports {
                if reports.len() > 1 {
                    writeln!(stdout, "# {}", r.name)?;
                }
                r.write_csv(&mut stdout)?;
            }
            Ok(())
        }
    }
}

pub fn run_reports(args: &EvalArgs, corpus: &Corpus) -> Vec<TestReport> {
    let config = HarnessConfig {
        k: args.k as usize,
        rng_seed: args.seed,
        ..HarnessConfig::default()
    };
    let wants = |t: Test| args.test == t || args.test == Test::All;
    let needs_db = wants(Test::Fragment) || wants(Test::Alignment);
    let db = needs_db.then(|| DigestDb::build(corpus, &config));
    let mut reports = Vec::new();
    if let (true, Some(db)) = (wants(Test::Fragment), &db) {
        for mode in [FragmentMode::End, FragmentMode::Random] {
            reports.push(fragment_test(corpus, db, &FRAGMENT_SIZES, mode, &config));
        }
    }
    if let (true, Some(db)) = (wants(Test::Alignment), &db) {
        reports.push(alignment_test(corpus, db, &ALIGN_PERCENTS, &ALIGN_FIXED_KB, &config));
    }
    if wants(Test::Noise) {
        let noise = NoiseConfig {
            max_files: args.noise_files,
            ..NoiseConfig::default()
        };
        reports.push(noise_test(corpus, &noise, &config).report);
    }
    if wants(Test::Scb) {
        let scb = ScbConfig {
            trials: args.scb_trials,
            ..ScbConfig::default()
        };
        reports.push(scb_test(&scb, &config));
    }
    reports
}

pub fn run(args: &EvalArgs) -> i32 {
    if let Some(t) = args.threads {
        // Only fails if a global pool already exists.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t as usize).build_global();
    }
    if args.test == Test::MakeCorpus {
        let Some(dir) = &args.corpus else {
            eprintln!("lzjd-eval: make-corpus needs --corpus DIR");
            return EXIT_USAGE;
        };
        return match make_corpus(dir, &corpus_config(args)) {
            Ok(entries) => {
                eprintln!("lzjd-eval: wrote {} files to {}", entries.len(), dir.display());
                EXIT_OK
            }
            Err(e) => {
                eprintln!("lzjd-eval: {}: {e}", dir.display());
                EXIT_FAILURE
            }
        };
    }
    let corpus = match obtain_corpus(args) {
        Ok(c) if !c.is_empty() => c,
        Ok(_) => {
            eprintln!("lzjd-eval: corpus is empty");
            return EXIT_FAILURE;
        }
        Err(e) => {
            eprintln!("lzjd-eval: cannot read corpus: {e}");
            return EXIT_FAILURE;
        }
    };
    let reports = run_reports(args, &corpus);
    if let Err(e) = write_reports(&reports, args.out.as_deref()) {
        eprintln!("lzjd-eval: cannot write report: {e}");
        return EXIT_FAILURE;
    }
    let summary = lower_bound_report(&reports, 2.0);
    eprintln!(
        "lzjd-eval: lower-bound check: {}/{} points with score <= shared bytes % + {}",
        summary.satisfied,
        summary.points.len(),
        summary.tolerance
    );
    for p in summary.violations() {
        eprintln!(
            "lzjd-eval:   {} {}: score {:.2} > shared {:.2}",
            p.test, p.parameter, p.score, p.shared_percent
        );
    }
    EXIT_OK
}

pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match EvalArgs::try_parse_from(argv) {
        Ok(args) => run(&args),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_OK
            }
        }
    }
}
