// SPDX-License-Identifier: Apache-2.0

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::Parser;
use rayon::prelude::*;
use walkdir::WalkDir;

use lzjd_core::{digest_file, digest_stream, load_digest_db, score, Digest, Error, DEFAULT_K};

use crate::{EXIT_FAILURE, EXIT_OK, EXIT_USAGE};

#[derive(Debug, Parser)]
#[command(
    name = "lzjd",
    version,
    about = "Lempel-Ziv Jaccard Distance similarity digests",
    after_help = "Match lines are printed as NAME_A|NAME_B|SCORE."
)]
pub struct Args {
    /// Files to hash (directories with -r); `-` reads standard input
    #[arg(value_name = "PATH")]
    pub paths: Vec<PathBuf>,

    /// Recurse into directories
    #[arg(short = 'r', long = "deep")]
    pub recursive: bool,

    /// Hash all inputs and compare every pair
    #[arg(short = 'g', long = "gen-compare")]
    pub gen_compare: bool,

    /// Compare digests within one database, or across two
    #[arg(
        short = 'c',
        long = "compare",
        value_name = "DB",
        num_args = 1..=2,
        conflicts_with_all = ["paths", "gen_compare", "recursive"]
    )]
    pub compare: Option<Vec<PathBuf>>,

    /// Only print pairs scoring at least this much
    #[arg(short = 't', long = "threshold", default_value_t = 1,
          value_parser = clap::value_parser!(u32).range(0..=100))]
    pub threshold: u32,

    /// Worker threads [default: available parallelism]
    #[arg(short = 'p', long = "threads", value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: Option<u32>,

    /// Write output to FILE instead of standard output
    #[arg(short = 'o', long = "output", value_name = "FILE")]
    pub output: Option<PathBuf>,

    /// Digest size (number of hashes kept)
    #[arg(long = "k", default_value_t = DEFAULT_K as u32,
          value_parser = clap::value_parser!(u32).range(1..))]
    pub k: u32,

    /// Hash seed
    #[arg(long = "seed", default_value_t = 0)]
    pub seed: u32,

    /// Print timing and throughput to standard error
    #[arg(long = "stats")]
    pub stats: bool,
}

enum Input {
    Stdin,
    File(PathBuf),
}

#[derive(Default)]
struct Stats {
    files: usize,
    bytes: u64,
    hash_time: Duration,
    comparisons: u64,
    compare_time: Duration,
}

impl Stats {
    fn print(&self, threads: usize) {
        let secs = |d: Duration| d.as_secs_f64().max(1e-9);
        if self.files > 0 {
            eprintln!(
                "stats: hashed {} files, {} bytes in {:.3} s ({:.1} MB/s, {} threads)",
                self.files,
                self.bytes,
                self.hash_time.as_secs_f64(),
                self.bytes as f64 / 1e6 / secs(self.hash_time),
                threads
            );
        }
        if self.comparisons > 0 {
            eprintln!(
                "stats: {} comparisons in {:.3} s ({:.0} comparisons/s)",
                self.comparisons,
                self.compare_time.as_secs_f64(),
                self.comparisons as f64 / secs(self.compare_time)
            );
        }
    }
}

/// Expand positional paths into inputs. Errors are reported to stderr.
fn collect_inputs(paths: &[PathBuf], recursive: bool, had_error: &mut bool) -> Vec<Input> {
    let mut inputs = Vec::new();
    for path in paths {
        if path.as_os_str() == "-" {
            inputs.push(Input::Stdin);
            continue;
        }
        let meta = match std::fs::symlink_metadata(path) {
            Ok(m) => m,
            Err(e) => {
                eprintln!("lzjd: {}: {e}", path.display());
                *had_error = true;
                continue;
            }
        };
        if meta.is_dir() {
            if !recursive {
                eprintln!("lzjd: {}: is a directory (use -r)", path.display());
                *had_error = true;
                continue;
            }
            walk_dir(path, &mut inputs, had_error);
        } else {
            // Explicitly named files (and links to them) are hashed as given.
            inputs.push(Input::File(path.clone()));
        }
    }
    inputs
}

fn walk_dir(root: &Path, inputs: &mut Vec<Input>, had_error: &mut bool) {
    let walker = WalkDir::new(root)
        .follow_links(false)
        .sort_by(|a, b| a.file_name().cmp(b.file_name()));
    for entry in walker {
        match entry {
            Ok(e) if e.file_type().is_file() => inputs.push(Input::File(e.into_path())),
            Ok(e) if e.file_type().is_dir() => {}
            Ok(e) if e.file_type().is_symlink() => {
                eprintln!("lzjd: {}: skipping symbolic link", e.path().display());
            }
            Ok(e) => eprintln!("lzjd: {}: skipping special file", e.path().display()),
            Err(err) => {
                eprintln!("lzjd: {err}");
                *had_error = true;
            }
        }
    }
}

fn hash_inputs(inputs: &[Input], args: &Args, stats: &mut Stats) -> Vec<Result<Digest, Error>> {
    let (k, seed) = (args.k as usize, args.seed);
    let start = Instant::now();
    let out: Vec<Result<Digest, Error>> = inputs
        .par_iter()
        .map(|input| match input {
            Input::Stdin => digest_stream(io::stdin().lock(), "-", k, seed),
            Input::File(p) => digest_file(p, k, seed),
        })
        .collect();
    stats.hash_time += start.elapsed();
    for d in out.iter().flatten() {
        stats.files += 1;
        stats.bytes += d.input_length();
    }
    out
}

/// Matching pairs `(a, b, score)`, sorted by names. With `cross` pairs run
/// over `left x right`; otherwise over unordered pairs within `left`.
fn compare_all(
    left: &[Digest],
    right: Option<&[Digest]>,
    threshold: u32,
    stats: &mut Stats,
) -> Vec<(usize, usize, u32)> {
    let start = Instant::now();
    let mut matches: Vec<(usize, usize, u32)> = (0..left.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let (others, from) = match right {
                Some(r) => (r, 0),
                None => (left, i + 1),
            };
            (from..others.len()).filter_map(move |j| {
                let s = score(&left[i], &others[j]).expect("headers checked before comparing");
                (s >= threshold).then_some((i, j, s))
            })
        })
        .collect();
    stats.compare_time += start.elapsed();
    stats.comparisons += match right {
        Some(r) => (left.len() * r.len()) as u64,
        None => (left.len() * left.len().saturating_sub(1) / 2) as u64,
    };
    let rhs = right.unwrap_or(left);
    matches.sort_by(|x, y| {
        (left[x.0].name(), rhs[x.1].name(), x.0, x.1).cmp(&(left[y.0].name(), rhs[y.1].name(), y.0, y.1))
    });
    matches
}

/// First digest whose header differs from the first one, if any.
fn incompatibility<'a>(digests: impl IntoIterator<Item = &'a Digest>) -> Option<String> {
    let mut iter = digests.into_iter();
    let first = iter.next()?;
    iter.find(|d| d.k() != first.k() || d.seed() != first.seed())
        .map(|d| {
            format!(
                "incompatible digests: {} has k={} seed={}, {} has k={} seed={}",
                first.name(),
                first.k(),
                first.seed(),
                d.name(),
                d.k(),
                d.seed()
            )
        })
}

fn open_output(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_matches(
    out: &mut dyn Write,
    left: &[Digest],
    right: &[Digest],
    matches: &[(usize, usize, u32)],
) -> io::Result<()> {
    for &(i, j, s) in matches {
        writeln!(out, "{}|{}|{}", left[i].name(), right[j].name(), s)?;
    }
    Ok(())
}

fn run_compare(dbs: &[PathBuf], args: &Args, stats: &mut Stats) -> i32 {
    let mut loaded = Vec::new();
    for path in dbs {
        match load_digest_db(path) {
            Ok(db) => loaded.push(db),
            Err(e @ Error::Io { .. }) => {
                eprintln!("lzjd: {e}");
                return EXIT_FAILURE;
            }
            Err(e) => {
                eprintln!("lzjd: {}: {e}", path.display());
                return EXIT_USAGE;
            }
        }
    }
    if let Some(msg) = incompatibility(loaded.iter().flatten()) {
        eprintln!("lzjd: {msg}");
        return EXIT_FAILURE;
    }
    let left = &loaded[0];
    let right = loaded.get(1).map(Vec::as_slice);
    let matches = compare_all(left, right, args.threshold, stats);
    let result = open_output(args.output.as_deref())
        .and_then(|mut out| {
            write_matches(&mut *out, left, right.unwrap_or(left), &matches)?;
            out.flush()
        });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("lzjd: write error: {e}");
            EXIT_FAILURE
        }
    }
}

fn run_hash(args: &Args, stats: &mut Stats) -> i32 {
    let mut had_error = false;
    let inputs = collect_inputs(&args.paths, args.recursive, &mut had_error);
    let mut digests = Vec::with_capacity(inputs.len());
    for result in hash_inputs(&inputs, args, stats) {
        match result {
            Ok(d) => digests.push(d),
            Err(e) => {
                eprintln!("lzjd: {e}");
                had_error = true;
            }
        }
    }

    let written = open_output(args.output.as_deref()).and_then(|mut out| {
        if args.gen_compare {
            let matches = compare_all(&digests, None, args.threshold, stats);
            write_matches(&mut *out, &digests, &digests, &matches)?;
        } else {
            for d in &digests {
                match d.serialize() {
                    Ok(line) => writeln!(out, "{line}")?,
                    Err(e) => {
                        eprintln!("lzjd: {e}");
                        had_error = true;
                    }
                }
            }
        }
        out.flush()
    });
    if let Err(e) = written {
        eprintln!("lzjd: write error: {e}");
        return EXIT_FAILURE;
    }
    if had_error {
        EXIT_FAILURE
    } else {
        EXIT_OK
    }
}

/// Parse `argv` and run; returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    run(&args)
}

pub fn run(args: &Args) -> i32 {
    if args.compare.is_none() && args.paths.is_empty() {
        eprintln!("lzjd: no input files (see --help)");
        return EXIT_USAGE;
    }
    let threads = args
        .threads
        .map(|t| t as usize)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("lzjd: cannot start worker threads: {e}");
            return EXIT_FAILURE;
        }
    };
    let mut stats = Stats::default();
    let code = pool.install(|| match &args.compare {
        Some(dbs) => run_compare(dbs, args, &mut stats),
        None => run_hash(args, &mut stats),
    });
    if args.stats {
        stats.print(threads);
    }
    code
}
