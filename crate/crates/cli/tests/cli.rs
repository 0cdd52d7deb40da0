use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lincst-cli-{}-{name}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn lincst(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lincst")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn build(dir: &PathBuf, data: &[u8]) -> String {
    let input = dir.join("input");
    let index = dir.join("index");
    fs::write(&input, data).unwrap();
    stdout(&lincst(&["build", input.to_str().unwrap(), index.to_str().unwrap(), "--verify"]));
    index.to_str().unwrap().to_string()
}

#[test]
fn abracadabra_queries() {
    let dir = scratch("abra");
    let idx = build(&dir, b"abracadabra$");
    assert_eq!(stdout(&lincst(&["dump", &idx, "bwt"])), "ard$rcaaaabb");
    assert_eq!(stdout(&lincst(&["query", &idx, "count", "abra"])), "2\n");
    assert_eq!(stdout(&lincst(&["query", &idx, "locate", "abra"])), "0\n7\n");
    assert_eq!(stdout(&lincst(&["query", &idx, "locate", "6272"])), "");
    assert_eq!(stdout(&lincst(&["query", &idx, "count", "--hex", "6272"])), "2\n");
    assert_eq!(stdout(&lincst(&["query", &idx, "locate", "zzz"])), "");
    assert_eq!(stdout(&lincst(&["query", &idx, "extract", "0", "5"])), "abrac");
    assert_eq!(stdout(&lincst(&["dump", &idx, "plcp"])).lines().count(), 12);
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn empty_input_tree() {
    let dir = scratch("empty");
    let idx = build(&dir, b"");
    assert_eq!(stdout(&lincst(&["dump", &idx, "bp"])).trim(), "(())");
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn errors_exit_nonzero() {
    let dir = scratch("errors");
    let missing = dir.join("missing");
    let out = lincst(&["query", missing.to_str().unwrap(), "count", "a"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));

    let idx = build(&dir, b"banana");
    let mut bytes = fs::read(&idx).unwrap();
    let last = bytes.len() - 1;
    bytes[last] ^= 0xff;
    fs::write(&idx, &bytes).unwrap();
    assert!(!lincst(&["dump", &idx, "bwt"]).status.success());

    let idx = build(&dir, b"banana");
    assert!(!lincst(&["query", &idx, "count", "--hex", "6"]).status.success());
    assert!(!lincst(&["query", &idx, "count", ""]).status.success());
    fs::remove_dir_all(dir).unwrap();
}
