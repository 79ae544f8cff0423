use std::path::Path;
use std::process::{Command, Output};

fn worldlens(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_worldlens")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_exit_codes() {
    assert_eq!(code(&worldlens(&["validate", "--builtin", "chain"])), 0);
    assert_eq!(code(&worldlens(&["validate", "--builtin", "fail", "--param", "0.9"])), 0);
    let zero = worldlens(&["validate", "--builtin", "chain", "--param", "0", "--param", "0"]);
    assert_eq!(code(&zero), 1);
    assert!(String::from_utf8_lossy(&zero.stderr).contains("communicating: no"));
}

#[test]
fn malformed_world_file_is_invalid() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.world");
    std::fs::write(&file, "this is not a world\n").unwrap();
    assert_eq!(code(&worldlens(&["validate", "--world", path(&file)])), 1);
}

#[test]
fn generated_worlds_validate() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..10 {
        let file = dir.path().join(format!("w{seed}.world"));
        let s = seed.to_string();
        let gen = worldlens(&["gen-world", "--seed", &s, "--states", "6", "--actions", "2", "--out", path(&file)]);
        assert_eq!(code(&gen), 0);
        assert_eq!(code(&worldlens(&["validate", "--world", path(&file)])), 0);
    }
}

#[test]
fn half_delta_is_refused() {
    for method in ["t2", "t3", "t4d"] {
        let out =
            worldlens(&["extract", "--builtin", "fail", "--method", method, "--delta", "0.5", "--triple", "s0,R,s1"]);
        assert_eq!(code(&out), 2, "{method}");
        assert!(out.stdout.is_empty());
    }
    let out = worldlens(&["sweep", "--method", "t4", "--delta", "0.1", "--triple", "s0,R,s1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn single_action_world_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("one.world");
    let gen = worldlens(&["gen-world", "--seed", "1", "--states", "1", "--actions", "1", "--out", path(&file)]);
    assert_eq!(code(&gen), 0);
    assert_eq!(code(&worldlens(&["extract", "--world", path(&file), "--method", "t1", "--delta", "0"])), 2);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, threads: &str| {
        let file = dir.path().join(name);
        let out = Command::new(env!("CARGO_BIN_EXE_worldlens"))
            .env("WORLDLENS_THREADS", threads)
            .args(["extract", "--builtin", "chain", "--method", "t2", "--n", "60", "--n", "120"])
            .args(["--delta", "0.2", "--agent", "random", "--agent", "adversarial", "--seed", "3", "--seed", "9"])
            .args(["--out", path(&file)])
            .output()
            .unwrap();
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        assert!(dir.path().join(name.replace(".csv", ".timing.csv")).exists());
        std::fs::read(file).unwrap()
    };
    let first = run("a.csv", "1");
    assert_eq!(first, run("b.csv", "4"));
    let text = String::from_utf8(first).unwrap();
    // 50 triples x 2 n x (2 random seeds + 1 adversarial), plus the header.
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 1 + 50 * 2 * 3);
}

#[test]
fn bad_thread_count_is_refused() {
    let out = Command::new(env!("CARGO_BIN_EXE_worldlens"))
        .env("WORLDLENS_THREADS", "zero")
        .args(["extract", "--triple", "s0,R,s1"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn kernel_round_trips_through_a_world_file() {
    let dir = tempfile::tempdir().unwrap();
    let kernel = dir.path().join("estimate.world");
    let out = worldlens(&["extract", "--method", "t2", "--n", "200", "--delta", "0.1", "--kernel-out", path(&kernel)]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# kernel_entries_within_bound,50/50"));
    assert!(text.contains("# violations,0"));
    assert_eq!(code(&worldlens(&["validate", "--world", path(&kernel)])), 0);
}

#[test]
fn sweep_writes_plot_and_slope() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, svg) = (dir.path().join("sweep.csv"), dir.path().join("sweep.svg"));
    let config = dir.path().join("sweep.cfg");
    std::fs::write(
        &config,
        format!(
            "builtin = chain\nparam = 0.35\nmethod = t4\ntriple = s0,R,s1\ndelta = 0\nagent = optimal\n\
             n = 50\nn = 100\nn = 200\nn = 400\nout = {}\nplot = {}\n",
            csv.display(),
            svg.display()
        ),
    )
    .unwrap();
    let out = worldlens(&["sweep", "--config", path(&config)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let slope: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("# slope_optimal,"))
        .and_then(|s| s.parse().ok())
        .expect("slope footer");
    assert!(slope.is_finite());
    assert!(std::fs::read_to_string(&svg).unwrap().contains("slope -0.5"));
}

#[test]
fn figure4_table() {
    let out = worldlens(&["figure4", "--draws", "50"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# epsilon,0.125"));
    assert!(text.contains("# boundary,5.5"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 1 + 22);
}
