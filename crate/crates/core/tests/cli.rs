use std::path::Path;

use richlines::cli::run;

fn argv(args: &[&str]) -> Vec<String> {
    std::iter::once("richlines").chain(args.iter().copied()).map(String::from).collect()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).display().to_string()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(argv(&["frobnicate"])), 1);
    assert_eq!(run(argv(&["primes", "--x", "10", "--unknown"])), 1);
    assert_eq!(run(argv(&["primes", "--x", "1"])), 1);
    assert_eq!(run(argv(&["--help"])), 0);
    let out = path(dir.path(), "p.json");
    assert_eq!(run(argv(&["primes", "--x", "30", "--out", &out])), 0);
    assert!(std::fs::read_to_string(&out).unwrap().contains("\"k\": 10"));
}

#[test]
fn csv_refused_for_json_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "p.csv");
    assert_eq!(run(argv(&["primes", "--x", "10", "--format", "csv", "--out", &out])), 1);
    assert!(!Path::new(&out).exists());
}

#[test]
fn seeds_drive_random_trials() {
    let dir = tempfile::tempdir().unwrap();
    let go = |seed: &str, name: &str| {
        let out = path(dir.path(), name);
        let args = ["growth", "ruzsa", "--p", "101", "--trials", "5", "--seed", seed, "--out", &out];
        assert_eq!(run(argv(&args)), 0);
        std::fs::read(out).unwrap()
    };
    assert_eq!(go("3", "a.json"), go("3", "b.json"));
    assert_ne!(go("3", "a.json"), go("4", "c.json"));
}

#[test]
fn caps_from_flags() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "g.json");
    // 8^9 elements exceeds the default grid cap.
    assert_eq!(run(argv(&["construct", "folner", "--N", "8", "--eps", "1/2", "--out", &out])), 1);
    assert!(!Path::new(&out).exists());
}
