// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn lzjd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lzjd")).args(args).output().unwrap()
}

fn eval(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lzjd-eval")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn random_file(path: &Path, len: usize, seed: u64) -> Vec<u8> {
    let mut data = vec![0u8; len];
    ChaCha8Rng::seed_from_u64(seed).fill_bytes(&mut data);
    fs::write(path, &data).unwrap();
    data
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn hashes_a_file_to_one_digest_line() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("a.bin");
    random_file(&f, 100_000, 1);
    let out = lzjd(&[s(&f)]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1);
    let fields: Vec<&str> = text.trim_end().split(':').collect();
    assert_eq!(&fields[..4], &["lzjd", "1", "1024", "0"]);
    assert_eq!(fields[4], "100000");
    assert!(stderr(&out).is_empty());
}

#[test]
fn stdin_is_named_dash() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_lzjd"))
        .arg("-")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"hello hello hello").unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("lzjd:1:1024:0:17:-:"), "{}", stdout(&out));
}

#[test]
fn directories_need_recursion() {
    let dir = tempfile::tempdir().unwrap();
    fs::create_dir(dir.path().join("sub")).unwrap();
    random_file(&dir.path().join("sub/z.bin"), 5000, 2);
    random_file(&dir.path().join("a.bin"), 5000, 3);

    let out = lzjd(&[s(dir.path())]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("is a directory"));

    let out = lzjd(&["-r", s(dir.path())]);
    assert!(out.status.success(), "{}", stderr(&out));
    let names: Vec<String> = stdout(&out)
        .lines()
        .map(|l| l.split(':').nth(5).unwrap().to_string())
        .collect();
    assert_eq!(names.len(), 2);
    assert!(names[0].ends_with("a.bin") && names[1].ends_with("z.bin"), "{names:?}");
}

#[test]
fn missing_file_fails_but_others_are_hashed() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.bin");
    random_file(&good, 4000, 4);
    let missing = dir.path().join("missing.bin");
    let out = lzjd(&[s(&missing), s(&good)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out).lines().count(), 1);
    assert!(stderr(&out).contains("missing.bin"));
}

#[test]
fn gen_compare_threshold_and_pipe_format() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.bin");
    let b = dir.path().join("b.bin");
    let c = dir.path().join("c.bin");
    let data = random_file(&a, 200_000, 5);
    fs::write(&b, &data).unwrap();
    // Unrelated random files of equal size share many short phrases, so
    // the unrelated input here is low-entropy instead.
    fs::write(&c, b"xyz".repeat(60_000)).unwrap();

    let out = lzjd(&["-g", s(&a), s(&b), s(&c)]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), format!("{}|{}|100\n", s(&a), s(&b)));

    let out = lzjd(&["-g", "-t", "0", s(&a), s(&b), s(&c)]);
    assert_eq!(stdout(&out).lines().count(), 3);
    for line in stdout(&out).lines() {
        let score: u32 = line.rsplit('|').next().unwrap().parse().unwrap();
        assert!(score <= 100);
    }
}

#[test]
fn output_file_and_database_comparison() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.bin");
    let b = dir.path().join("b.bin");
    let data = random_file(&a, 300_000, 7);
    fs::write(&b, &data[..150_000]).unwrap();
    let db1 = dir.path().join("one.lzjd");
    let db2 = dir.path().join("two.lzjd");
    assert!(lzjd(&["-o", s(&db1), s(&a)]).status.success());
    assert!(lzjd(&["-o", s(&db2), s(&b)]).status.success());

    let out = lzjd(&["-c", s(&db1), s(&db2), "-t", "0"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let line = stdout(&out);
    assert!(line.starts_with(&format!("{}|{}|", s(&a), s(&b))), "{line}");
    let score: u32 = line.trim_end().rsplit('|').next().unwrap().parse().unwrap();
    assert!((20..=60).contains(&score), "half a file scored {score}");
}

#[test]
fn malformed_database_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let db = dir.path().join("sdbf.txt");
    fs::write(&db, "sdbf:03:1:-:0:sha1:256:5:7ff:160:1:100:AAAA\n").unwrap();
    let out = lzjd(&["-c", s(&db)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 1"), "{}", stderr(&out));

    let out = lzjd(&["-c", s(&dir.path().join("absent.lzjd"))]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn incompatible_databases_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.bin");
    random_file(&f, 10_000, 8);
    let db1 = dir.path().join("k1024.lzjd");
    let db2 = dir.path().join("k256.lzjd");
    assert!(lzjd(&["-o", s(&db1), s(&f)]).status.success());
    assert!(lzjd(&["--k", "256", "-o", s(&db2), s(&f)]).status.success());
    let out = lzjd(&["-c", s(&db1), s(&db2)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("incompatible"), "{}", stderr(&out));
}

#[test]
fn usage_errors() {
    assert_eq!(lzjd(&[]).status.code(), Some(2));
    assert_eq!(lzjd(&["--segment-size", "4", "x"]).status.code(), Some(2));
    assert_eq!(lzjd(&["-t", "101", "x"]).status.code(), Some(2));
    assert_eq!(eval(&["bogus"]).status.code(), Some(2));
}

#[test]
fn stats_go_to_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.bin");
    random_file(&f, 50_000, 9);
    let out = lzjd(&["--stats", "-g", "-t", "0", s(&f), s(&f)]);
    assert!(out.status.success());
    assert!(stderr(&out).contains("MB/s"));
    assert!(stderr(&out).contains("comparisons/s"));
    assert!(!stdout(&out).contains("stats"));
}

#[test]
fn eval_writes_corpus_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    let out = eval(&["make-corpus", "--corpus", s(&corpus), "--files", "3"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let manifest = fs::read_to_string(corpus.join("manifest.csv")).unwrap();
    assert_eq!(manifest.lines().next(), Some("name,size,entropy"));
    assert_eq!(manifest.lines().count(), 4);

    let report = dir.path().join("out/fragment.csv");
    let out = eval(&["fragment", "--corpus", s(&corpus), "--out", s(&report)]);
    assert!(out.status.success(), "{}", stderr(&out));
    let end = fs::read_to_string(dir.path().join("out/fragment.fragment_end.csv")).unwrap();
    assert_eq!(
        end.lines().next(),
        Some("parameter,matches,match_rate,avg_score,expected_min_score")
    );
    assert_eq!(end.lines().count(), 24);
    assert!(end.lines().nth(1).unwrap().starts_with("95,3,100.00,"), "{end}");
    assert!(dir.path().join("out/fragment.fragment_random.csv").exists());
    assert!(stderr(&out).contains("lower-bound"));
}
