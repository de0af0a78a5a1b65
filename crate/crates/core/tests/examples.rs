//! Every example runs to completion.

use std::process::Command;

const EXAMPLES: &[&str] = &[
    "q_numbers",
    "gt_matrices",
    "casimir",
    "peter_weyl",
    "dolbeault_complex",
    "dirac_spectrum",
    "hodge_cohomology",
    "summability",
    "sphere_rewriting",
    "classical_charts",
    "cli_report",
];

#[test]
fn examples_run() {
    for ex in EXAMPLES {
        let out = Command::new(env!("CARGO"))
            .args(["run", "--quiet", "--example", ex])
            .current_dir(env!("CARGO_MANIFEST_DIR"))
            .output()
            .expect("cargo runs");
        assert!(
            out.status.success(),
            "{ex} failed:\n{}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(!out.stdout.is_empty(), "{ex} printed nothing");
    }
}

#[test]
fn example_list_is_complete() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("examples");
    let mut found: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .filter_map(|e| e.ok()?.path().file_stem()?.to_str().map(String::from))
        .collect();
    found.sort();
    let mut want: Vec<String> = EXAMPLES.iter().map(|s| s.to_string()).collect();
    want.sort();
    assert_eq!(found, want);
}
