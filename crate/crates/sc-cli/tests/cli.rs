//! End-to-end checks of the binary: exit codes, image structure,
//! checkpoint flow.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sc-cli"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary should spawn")
}

/// Splits a P6 file into (width, height, rgb bytes), panicking on any
/// structural problem.
fn parse_p6(path: &Path) -> (usize, usize, Vec<u8>) {
    let bytes = std::fs::read(path).expect("frame file should exist");
    let header_end = bytes
        .iter()
        .enumerate()
        .filter(|(_, &b)| b == b'\n')
        .map(|(i, _)| i)
        .nth(2)
        .expect("P6 header has three newline-terminated lines");
    let header = std::str::from_utf8(&bytes[..header_end]).unwrap();
    let mut lines = header.lines();
    assert_eq!(lines.next(), Some("P6"));
    let mut dims = lines.next().unwrap().split_whitespace();
    let width: usize = dims.next().unwrap().parse().unwrap();
    let height: usize = dims.next().unwrap().parse().unwrap();
    assert_eq!(lines.next(), Some("255"));
    let rgb = bytes[header_end + 1..].to_vec();
    assert_eq!(rgb.len(), 3 * width * height);
    (width, height, rgb)
}

#[test]
fn help_prints_and_exits_zero() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("demo"));
}

#[test]
fn usage_problems_exit_one() {
    assert_eq!(run(&["demo", "--bogus-flag"]).status.code(), Some(1));
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    // Threshold percent outside (0, 100] is a flag-level error.
    let out = run(&[
        "demo",
        "--threshold-percent",
        "0",
        "--out-dir",
        "/tmp/unused",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn runtime_failures_exit_two_without_panicking() {
    let out = run(&["inspect", "/definitely/not/there.scx"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.starts_with("error:"));
    assert!(!stderr.contains("panicked"));
}

fn demo_args<'a>(dir: &'a str, forecast: &'a str, extra: &'a [&'a str]) -> Vec<&'a str> {
    let mut args = vec![
        "demo",
        "--neurons",
        "64",
        "--synapses",
        "5",
        "--threshold-percent",
        "40",
        "--steps",
        "3",
        "--width",
        "12",
        "--height",
        "12",
        "--seed",
        "5",
        "--forecast",
        forecast,
        "--out-dir",
        dir,
    ];
    args.extend_from_slice(extra);
    args
}

#[test]
fn demo_writes_one_valid_frame_per_step() {
    let dir = tempfile::tempdir().unwrap();
    let dir_str = dir.path().to_str().unwrap();
    let out = run(&demo_args(dir_str, "2", &[]));
    assert_eq!(out.status.code(), Some(0), "{:?}", out);

    for step in 0..3 {
        let path = dir.path().join(format!("frame_{step:06}.ppm"));
        let (w, h, rgb) = parse_p6(&path);
        assert_eq!((w, h), (12, 12));
        let green = rgb.chunks_exact(3).filter(|px| px[1] == 255).count();
        assert_eq!(green, 49, "ball disk should fill 49 pixels");
        assert!(rgb.chunks_exact(3).all(|px| px[0] == 0), "red stays unused");
    }
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 3);
}

#[test]
fn forecast_zero_leaves_the_blue_channel_dark() {
    let dir = tempfile::tempdir().unwrap();
    let dir_str = dir.path().to_str().unwrap();
    assert_eq!(run(&demo_args(dir_str, "0", &[])).status.code(), Some(0));
    for step in 0..3 {
        let (_, _, rgb) = parse_p6(&dir.path().join(format!("frame_{step:06}.ppm")));
        assert!(rgb.chunks_exact(3).all(|px| px[2] == 0));
    }
}

#[test]
fn checkpoints_save_resume_and_inspect() {
    let dir = tempfile::tempdir().unwrap();
    let frames = dir.path().join("frames");
    let ckpt = dir.path().join("area.scx");
    let frames_str = frames.to_str().unwrap();
    let ckpt_str = ckpt.to_str().unwrap();

    let out = run(&demo_args(frames_str, "2", &["--checkpoint", ckpt_str]));
    assert_eq!(out.status.code(), Some(0));
    assert!(ckpt.exists());

    let out = run(&["inspect", ckpt_str]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    assert!(text.contains("neurons:              64"));
    assert!(text.contains("forests:              2"));

    // Resume from the checkpoint; trained synapses must be visible.
    let out = run(&demo_args(frames_str, "2", &["--checkpoint", ckpt_str]));
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["inspect", ckpt_str]);
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    let connected_line = text.lines().find(|l| l.starts_with("forest 0")).unwrap();
    assert!(
        !connected_line.contains("connected 0/"),
        "resumed training should keep connected synapses: {connected_line}"
    );

    // Mismatched flags on resume are a runtime error, not silent retraining.
    let checkpoint_flags = ["--checkpoint", ckpt_str];
    let mut args = demo_args(frames_str, "2", &checkpoint_flags);
    let pos = args.iter().position(|a| *a == "64").unwrap();
    args[pos] = "65";
    assert_eq!(run(&args).status.code(), Some(2));
}
