// SPDX-License-Identifier: Apache-2.0

//! Sensitivity and robustness experiments: fragment, alignment, random
//! noise and single-common-block tests.
//!
//! Fragment and alignment mutants are matched against a digest database of
//! the whole corpus: a trial matches when its source file has the strictly
//! highest similarity (a tie with any other file is a miss). Noise and SCB
//! compare a mutant against its own source only.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::corpus::Corpus;
use super::mutation::{
    apply_random_edits, fragment_end, fragment_random, prepend_random, scb_pair, MutationKind,
    MutationSpec,
};
use super::report::{ReportRow, TestReport, TrialPoint};
use crate::digest::{digest_bytes, Digest, DEFAULT_K, DEFAULT_SEED};
use crate::similarity::{jaccard, score};

pub const FRAGMENT_SIZES: [u32; 23] = [
    95, 90, 85, 80, 75, 70, 65, 60, 55, 50, 45, 40, 35, 30, 25, 20, 15, 10, 5, 4, 3, 2, 1,
];
pub const ALIGN_PERCENTS: [u32; 5] = [10, 50, 100, 300, 500];
pub const ALIGN_FIXED_KB: [u32; 16] = [4, 8, 12, 16, 20, 24, 28, 32, 36, 40, 44, 48, 52, 56, 60, 64];

#[derive(Clone, Debug)]
pub struct HarnessConfig {
    pub k: usize,
    pub hash_seed: u32,
    /// Seed for every random mutation.
    pub rng_seed: u64,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            k: DEFAULT_K,
            hash_seed: DEFAULT_SEED,
            rng_seed: 0,
        }
    }
}

impl HarnessConfig {
    fn digest(&self, data: &[u8], name: &str) -> Digest {
        digest_bytes(data, name, self.k, self.hash_seed)
    }

    /// Independent stream per (test, parameter, item).
    fn rng(&self, test: u64, parameter: u64, item: u64) -> ChaCha8Rng {
        let mut x = self.rng_seed;
        for v in [test, parameter, item] {
            x = splitmix(x ^ splitmix(v.wrapping_add(0x9e37_79b9_7f4a_7c15)));
        }
        ChaCha8Rng::seed_from_u64(x)
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RankOutcome {
    pub matched: bool,
    pub score: u32,
    pub jaccard: f64,
}

/// Digests of every corpus file, in corpus order.
#[derive(Clone, Debug)]
pub struct DigestDb {
    pub digests: Vec<Digest>,
}

impl DigestDb {
    pub fn build(corpus: &Corpus, config: &HarnessConfig) -> Self {
        let digests = corpus
            .files
            .par_iter()
            .map(|f| config.digest(&f.data, &f.name))
            .collect();
        DigestDb { digests }
    }

    pub fn len(&self) -> usize {
        self.digests.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digests.is_empty()
    }

    /// Nearest-neighbour check of `query` against entry `source`: a match
    /// needs a strictly higher score than every other entry.
    pub fn rank(&self, query: &Digest, source: usize) -> RankOutcome {
        let score_of = |d: &Digest| score(query, d).expect("harness digests share k and seed");
        let best = score_of(&self.digests[source]);
        let beaten_or_tied = self
            .digests
            .iter()
            .enumerate()
            .any(|(j, d)| j != source && score_of(d) >= best);
        RankOutcome {
            matched: !beaten_or_tied,
            score: best,
            jaccard: jaccard(query, &self.digests[source]).expect("harness digests share k and seed"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FragmentMode {
    End,
    Random,
}

impl FragmentMode {
    pub fn name(self) -> &'static str {
        match self {
            FragmentMode::End => "fragment_end",
            FragmentMode::Random => "fragment_random",
        }
    }
}

fn trial(parameter: &str, file: &str, outcome: RankOutcome, spec: &MutationSpec) -> TrialPoint {
    TrialPoint {
        parameter: parameter.to_string(),
        file: file.to_string(),
        matched: outcome.matched,
        score: outcome.score,
        jaccard: outcome.jaccard,
        expected_min_score: spec.expected_min_score(),
    }
}

/// Cut each file down to each size (% of the original) and look the fragment up in `db`.
pub fn fragment_test(
    corpus: &Corpus,
    db: &DigestDb,
    sizes: &[u32],
    mode: FragmentMode,
    config: &HarnessConfig,
) -> TestReport {
    let test_id = match mode {
        FragmentMode::End => 1,
        FragmentMode::Random => 2,
    };
    let mut rows = Vec::new();
    let mut all = Vec::new();
    for &size in sizes {
        let parameter = size.to_string();
        let trials: Vec<TrialPoint> = corpus
            .files
            .par_iter()
            .enumerate()
            .map(|(i, f)| {
                let (frag, spec) = match mode {
                    FragmentMode::End => fragment_end(&f.data, size as f64),
                    FragmentMode::Random => {
                        let mut rng = config.rng(test_id, size as u64, i as u64);
                        fragment_random(&f.data, size as f64, &mut rng)
                    }
                };
                let q = config.digest(&frag, &f.name);
                trial(&parameter, &f.name, db.rank(&q, i), &spec)
            })
            .collect();
        rows.push(ReportRow::from_trials(&parameter, &trials, corpus.len()));
        all.extend(trials);
    }
    TestReport {
        name: mode.name().to_string(),
        corpus_size: corpus.len(),
        rows,
        trials: all,
    }
}

/// Prepend random bytes (a percentage of the file, then fixed KiB amounts) and
/// look the padded file up in `db`. Rows are named `10%` or `4KB`.
pub fn alignment_test(
    corpus: &Corpus,
    db: &DigestDb,
    percents: &[u32],
    fixed_kb: &[u32],
    config: &HarnessConfig,
) -> TestReport {
    let params = percents
        .iter()
        .map(|&p| (format!("{p}%"), MutationKind::AlignPercent, p))
        .chain(
            fixed_kb
                .iter()
                .map(|&kb| (format!("{kb}KB"), MutationKind::AlignFixed, kb)),
        );
    let mut rows = Vec::new();
    let mut all = Vec::new();
    for (parameter, kind, value) in params {
        let test_id = if kind == MutationKind::AlignPercent { 3 } else { 4 };
        let trials: Vec<TrialPoint> = corpus
            .files
            .par_iter()
            .enumerate()
            .map(|(i, f)| {
                let added = match kind {
                    MutationKind::AlignPercent => {
                        (f.data.len() as f64 * value as f64 / 100.0).round() as usize
                    }
                    _ => value as usize * 1024,
                };
                let mut rng = config.rng(test_id, value as u64, i as u64);
                let (padded, spec) = prepend_random(&f.data, added, kind, value as f64, &mut rng);
                let q = config.digest(&padded, &f.name);
                trial(&parameter, &f.name, db.rank(&q, i), &spec)
            })
            .collect();
        rows.push(ReportRow::from_trials(&parameter, &trials, corpus.len()));
        all.extend(trials);
    }
    TestReport {
        name: "alignment".to_string(),
        corpus_size: corpus.len(),
        rows,
        trials: all,
    }
}

#[derive(Clone, Debug)]
pub struct NoiseConfig {
    /// Files sampled from the corpus.
    pub max_files: usize,
    /// Only files up to this size are sampled.
    pub max_file_size: usize,
    /// Stop once this fraction of the original length has been edited.
    pub stop_fraction: f64,
    /// Score band floors, descending.
    pub bands: Vec<u32>,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig {
            max_files: 10,
            max_file_size: 512 * 1024,
            stop_fraction: 0.8,
            bands: (1..=19).rev().map(|b| b * 5).collect(),
        }
    }
}

/// Edits applied per step once `edits` have been made: 1 at a time up to
/// 200, then 10 up to 2000, 100 up to 20000, and so on.
pub fn noise_step(edits: usize) -> usize {
    if edits < 200 {
        return 1;
    }
    let (mut step, mut threshold) = (10, 2000);
    while edits >= threshold {
        step *= 10;
        threshold *= 10;
    }
    step
}

#[derive(Clone, Debug, PartialEq)]
pub struct NoiseStep {
    pub edits: usize,
    pub score: u32,
    pub mutant_len: usize,
}

/// Score history of one file under accumulating random edits.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseTrace {
    pub file: String,
    pub len: usize,
    pub steps: Vec<NoiseStep>,
}

impl NoiseTrace {
    /// Fraction of the file edited when the score first fell below `threshold`.
    /// If it never did, the fraction edited when the sweep stopped.
    pub fn fraction_to_fall_below(&self, threshold: u32) -> f64 {
        let edits = self
            .steps
            .iter()
            .find(|s| s.score < threshold)
            .or(self.steps.last())
            .map_or(0, |s| s.edits);
        edits as f64 / self.len.max(1) as f64
    }

    /// For each band floor, the first step at which the running minimum score
    /// entered `[floor, floor + 5)` (the top band also takes 100).
    pub fn band_entries(&self, bands: &[u32]) -> Vec<(u32, Option<&NoiseStep>)> {
        let top = bands.iter().copied().max().unwrap_or(0);
        let mut running = u32::MAX;
        let mut entries: Vec<(u32, Option<&NoiseStep>)> = bands.iter().map(|&b| (b, None)).collect();
        for step in &self.steps {
            running = running.min(step.score);
            for (floor, entry) in entries.iter_mut() {
                let upper = if *floor == top { u32::MAX } else { *floor + 5 };
                if entry.is_none() && running >= *floor && running < upper {
                    *entry = Some(step);
                }
            }
        }
        entries
    }
}

#[derive(Clone, Debug)]
pub struct NoiseResult {
    pub report: TestReport,
    pub traces: Vec<NoiseTrace>,
}

impl NoiseResult {
    /// Median over files of [`NoiseTrace::fraction_to_fall_below`].
    pub fn median_fraction_to_fall_below(&self, threshold: u32) -> f64 {
        let mut v: Vec<f64> = self
            .traces
            .iter()
            .map(|t| t.fraction_to_fall_below(threshold))
            .collect();
        v.sort_by(f64::total_cmp);
        match v.len() {
            0 => 0.0,
            n if n % 2 == 1 => v[n / 2],
            n => (v[n / 2 - 1] + v[n / 2]) / 2.0,
        }
    }
}

/// Indices of the files the noise test runs on.
pub fn noise_subset(corpus: &Corpus, noise: &NoiseConfig) -> Vec<usize> {
    let eligible: Vec<usize> = (0..corpus.len())
        .filter(|&i| corpus.files[i].data.len() <= noise.max_file_size)
        .collect();
    if eligible.len() <= noise.max_files {
        return eligible;
    }
    // Evenly spaced picks keep the mix of file profiles.
    (0..noise.max_files)
        .map(|j| eligible[j * eligible.len() / noise.max_files])
        .collect()
}

fn noise_trace(name: &str, data: &[u8], noise: &NoiseConfig, config: &HarnessConfig, item: u64) -> NoiseTrace {
    let source = config.digest(data, name);
    let lowest = noise.bands.iter().copied().min().unwrap_or(0);
    let limit = (data.len() as f64 * noise.stop_fraction).ceil() as usize;
    let mut rng = config.rng(5, 0, item);
    let mut work = data.to_vec();
    let mut edits = 0;
    let mut steps = Vec::new();
    while edits < limit {
        let step = noise_step(edits).min(limit - edits);
        work = apply_random_edits(&work, step, &mut rng);
        edits += step;
        let s = score(&config.digest(&work, name), &source).expect("same k and seed");
        steps.push(NoiseStep {
            edits,
            score: s,
            mutant_len: work.len(),
        });
        if s < lowest {
            break;
        }
    }
    NoiseTrace {
        file: name.to_string(),
        len: data.len(),
        steps,
    }
}

/// Random insert/delete/substitute edits until the score falls below the
/// lowest band or `stop_fraction` of the file has been edited.
pub fn noise_test(corpus: &Corpus, noise: &NoiseConfig, config: &HarnessConfig) -> NoiseResult {
    let subset = noise_subset(corpus, noise);
    let traces: Vec<NoiseTrace> = subset
        .par_iter()
        .map(|&i| {
            let f = &corpus.files[i];
            noise_trace(&f.name, &f.data, noise, config, i as u64)
        })
        .collect();

    let mut rows = Vec::new();
    let mut all = Vec::new();
    let entries: Vec<_> = traces.iter().map(|t| t.band_entries(&noise.bands)).collect();
    for (b, &floor) in noise.bands.iter().enumerate() {
        let parameter = format!(">={floor}");
        let trials: Vec<TrialPoint> = traces
            .iter()
            .zip(&entries)
            .filter_map(|(t, e)| {
                let step = e[b].1?;
                let spec = MutationSpec {
                    kind: MutationKind::Noise,
                    parameter: step.edits as f64,
                    analytic_edit_distance: step.edits as u64,
                    source_len: t.len as u64,
                    mutant_len: step.mutant_len as u64,
                };
                Some(TrialPoint {
                    parameter: parameter.clone(),
                    file: t.file.clone(),
                    matched: true,
                    score: step.score,
                    jaccard: step.score as f64 / 100.0,
                    expected_min_score: spec.expected_min_score(),
                })
            })
            .collect();
        rows.push(ReportRow::from_trials(&parameter, &trials, traces.len()));
        all.extend(trials);
    }
    NoiseResult {
        report: TestReport {
            name: "noise".to_string(),
            corpus_size: traces.len(),
            rows,
            trials: all,
        },
        traces,
    }
}

#[derive(Clone, Debug)]
pub struct ScbConfig {
    pub total_sizes: Vec<usize>,
    pub trials: usize,
    /// Smallest common block tried.
    pub min_block: usize,
}

impl Default for ScbConfig {
    fn default() -> Self {
        ScbConfig {
            total_sizes: vec![512 * 1024, 2 * 1024 * 1024],
            trials: 10,
            min_block: 16 * 1024,
        }
    }
}

/// Score bands reported for a given total file size.
pub fn scb_bands(total: usize) -> Vec<u32> {
    match total {
        t if t == 512 * 1024 => vec![25, 20, 15, 10, 0],
        t if t == 2 * 1024 * 1024 => vec![25, 15, 10, 5, 0],
        _ => vec![25, 20, 15, 10, 5, 0],
    }
}

/// Scores of one SCB trial for each common block size, largest first.
fn scb_trial(total: usize, scb: &ScbConfig, config: &HarnessConfig, item: u64) -> Vec<(usize, u32)> {
    let mut rng = config.rng(6, total as u64, item);
    let mut out = Vec::new();
    let mut block = total;
    while block >= scb.min_block.min(total) && block > 0 {
        let (a, b, _) = scb_pair(total, block, &mut rng);
        let s = score(&config.digest(&a, "a"), &config.digest(&b, "b")).expect("same k and seed");
        out.push((block, s));
        block /= 2;
    }
    out
}

/// Single-common-block test. For every band the smallest common block still
/// scoring at or above it is recorded; the `0` band records the first block
/// scoring exactly 0.
pub fn scb_test(scb: &ScbConfig, config: &HarnessConfig) -> TestReport {
    let mut rows = Vec::new();
    let mut all = Vec::new();
    for &total in &scb.total_sizes {
        let sweeps: Vec<Vec<(usize, u32)>> = (0..scb.trials)
            .into_par_iter()
            .map(|t| scb_trial(total, scb, config, t as u64))
            .collect();
        let label = format!("{}KB", total / 1024);
        for floor in scb_bands(total) {
            let parameter = if floor == 0 {
                format!("{label}=0")
            } else {
                format!("{label}>={floor}")
            };
            let trials: Vec<TrialPoint> = sweeps
                .iter()
                .enumerate()
                .map(|(t, sweep)| {
                    let hit = if floor == 0 {
                        sweep.iter().find(|&&(_, s)| s == 0)
                    } else {
                        sweep.iter().take_while(|&&(_, s)| s >= floor).last()
                    };
                    let (block, s) = hit.copied().unwrap_or((0, 0));
                    TrialPoint {
                        parameter: parameter.clone(),
                        file: format!("trial{t}"),
                        matched: hit.is_some(),
                        score: s,
                        jaccard: s as f64 / 100.0,
                        expected_min_score: 100.0 * block as f64 / total as f64,
                    }
                })
                .collect();
            rows.push(ReportRow::from_trials(&parameter, &trials, scb.trials));
            all.extend(trials);
        }
    }
    TestReport {
        name: "scb".to_string(),
        corpus_size: scb.trials,
        rows,
        trials: all,
    }
}
