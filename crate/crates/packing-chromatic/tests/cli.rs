//! End-to-end tests driving the `pcn` binary.

use std::path::Path;
use std::process::{Command, Output};

use tempfile::tempdir;

fn pcn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcn"))
        .args(args)
        .env_remove("PCN_VERTEX_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn code_of(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn gen_exact_round_trip_through_a_file() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("c7.col");
    let gen = pcn(&["gen", "--family", "cycle", "--n", "7", "--output", path.to_str().unwrap()]);
    assert_eq!(code_of(&gen), 0, "{}", stderr_of(&gen));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("p edge 7 7\n"));

    let direct = pcn(&["exact", "--family", "cycle", "--n", "7"]);
    let from_file = pcn(&["exact", "--input", path.to_str().unwrap()]);
    assert_eq!(code_of(&direct), 0);
    assert_eq!(code_of(&from_file), 0);
    assert_eq!(stdout_of(&direct), stdout_of(&from_file));
    assert_eq!(stdout_of(&direct), "chi_rho = 4\n");
}

#[test]
fn gen_writes_dimacs_to_stdout() {
    let out = pcn(&["gen", "--family", "path", "--n", "3"]);
    assert_eq!(code_of(&out), 0);
    assert_eq!(stdout_of(&out), "p edge 3 2\ne 1 2\ne 2 3\n");
}

#[test]
fn witness_survives_verification() {
    let dir = tempdir().unwrap();
    let witness = dir.path().join("h32.coloring");
    let solve = pcn(&[
        "exact",
        "--family",
        "hamming",
        "--q",
        "3",
        "--m",
        "2",
        "--witness-out",
        witness.to_str().unwrap(),
    ]);
    assert_eq!(code_of(&solve), 0, "{}", stderr_of(&solve));
    assert_eq!(stdout_of(&solve), "chi_rho = 7\n");

    let check = pcn(&[
        "verify",
        "--family",
        "hamming",
        "--q",
        "3",
        "--m",
        "2",
        "--coloring",
        witness.to_str().unwrap(),
    ]);
    assert_eq!(code_of(&check), 0, "{}", stderr_of(&check));
    assert!(stdout_of(&check).starts_with("valid packing coloring"));
}

#[test]
fn verify_rejects_a_bad_coloring_with_exit_3() {
    let dir = tempdir().unwrap();
    let coloring = dir.path().join("bad.coloring");
    std::fs::write(&coloring, "1 1\n2 1\n3 1\n4 1\n").unwrap();
    let check = pcn(&[
        "verify",
        "--family",
        "cycle",
        "--n",
        "4",
        "--coloring",
        coloring.to_str().unwrap(),
    ]);
    assert_eq!(code_of(&check), 3);
    assert!(stdout_of(&check).starts_with("invalid:"), "{}", stdout_of(&check));
}

#[test]
fn capped_strategy_reuses_a_witness_file() {
    let dir = tempdir().unwrap();
    let witness = dir.path().join("p6.coloring");
    let solve = pcn(&[
        "exact",
        "--family",
        "path",
        "--n",
        "6",
        "--witness-out",
        witness.to_str().unwrap(),
    ]);
    assert_eq!(code_of(&solve), 0);

    let capped = pcn(&[
        "exact",
        "--family",
        "path",
        "--n",
        "6",
        "--strategy",
        "starred-capped",
        "--upper-bound-file",
        witness.to_str().unwrap(),
    ]);
    assert_eq!(code_of(&capped), 0, "{}", stderr_of(&capped));
    assert_eq!(stdout_of(&capped), stdout_of(&solve));

    let missing = pcn(&["exact", "--family", "path", "--n", "6", "--strategy", "starred-capped"]);
    assert_eq!(code_of(&missing), 1);
    assert!(stderr_of(&missing).contains("upper-bound-file"));
}

#[test]
fn export_lp_matches_the_golden_model() {
    let golden = "\
\\ path_3
Maximize
 obj: x_1_1 + x_2_1 + x_3_1
Subject To
 col_1: x_1_1 <= 1
 col_2: x_2_1 <= 1
 col_3: x_3_1 <= 1
 clq_1_1: x_1_1 <= 1
 clq_1_2: x_2_1 <= 1
 clq_1_3: x_3_1 <= 1
 clq_1_4: x_1_1 + x_2_1 <= 1
 clq_1_5: x_2_1 + x_3_1 <= 1
Binaries
 x_1_1 x_2_1 x_3_1
End
";
    let out = pcn(&["export-lp", "--family", "path", "--n", "3", "--layers", "1"]);
    assert_eq!(code_of(&out), 0, "{}", stderr_of(&out));
    assert_eq!(stdout_of(&out), golden);
}

#[test]
fn budget_exhaustion_exits_2_with_bounds() {
    let out = pcn(&["exact", "--family", "petersen", "--budget-nodes", "1", "--no-hints"]);
    assert_eq!(code_of(&out), 2, "{}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.starts_with("chi_rho in ["), "{text}");
}

#[test]
fn usage_problems_exit_1() {
    let unknown_flag = pcn(&["exact", "--family", "path", "--n", "4", "--frobnicate"]);
    assert_eq!(code_of(&unknown_flag), 1);

    let missing_n = pcn(&["exact", "--family", "path"]);
    assert_eq!(code_of(&missing_n), 1);
    assert!(stderr_of(&missing_n).contains("--n"));

    let no_source = pcn(&["exact"]);
    assert_eq!(code_of(&no_source), 1);

    let heuristic_needs_hamming = pcn(&["heuristic", "--family", "path", "--n", "5"]);
    assert_eq!(code_of(&heuristic_needs_hamming), 1);
    assert!(stderr_of(&heuristic_needs_hamming).contains("hamming"));

    let missing_file = pcn(&["exact", "--input", "/nonexistent/graph.col"]);
    assert_eq!(code_of(&missing_file), 1);
}

#[test]
fn help_and_version_exit_0() {
    let help = pcn(&["--help"]);
    assert_eq!(code_of(&help), 0);
    assert!(stdout_of(&help).contains("Usage"));

    let version = pcn(&["--version"]);
    assert_eq!(code_of(&version), 0);
    assert!(stdout_of(&version).contains("pcn"));
}

#[test]
fn vertex_budget_flag_and_env_are_honored() {
    let flag = pcn(&["gen", "--family", "path", "--n", "50", "--vertex-budget", "10"]);
    assert_eq!(code_of(&flag), 1);
    assert!(stderr_of(&flag).contains("budget"));

    let env = Command::new(env!("CARGO_BIN_EXE_pcn"))
        .args(["gen", "--family", "path", "--n", "50"])
        .env("PCN_VERTEX_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(code_of(&env), 1);
    assert!(stderr_of(&env).contains("budget"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempdir().unwrap();
    let run = |tag: &str| {
        let witness = dir.path().join(format!("{tag}.coloring"));
        let out = pcn(&[
            "exact",
            "--family",
            "hamming",
            "--q",
            "2",
            "--m",
            "3",
            "--witness-out",
            witness.to_str().unwrap(),
        ]);
        assert_eq!(code_of(&out), 0);
        (stdout_of(&out), std::fs::read(witness).unwrap())
    };
    let (out_a, witness_a) = run("a");
    let (out_b, witness_b) = run("b");
    assert_eq!(out_a, out_b);
    assert_eq!(witness_a, witness_b);
}

#[test]
fn heuristic_writes_a_layered_set() {
    let dir = tempdir().unwrap();
    let set = dir.path().join("h23.set");
    let out = pcn(&[
        "heuristic",
        "--family",
        "hamming",
        "--q",
        "2",
        "--m",
        "3",
        "--set-out",
        set.to_str().unwrap(),
    ]);
    assert_eq!(code_of(&out), 0, "{}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.starts_with("layered set size = "), "{text}");
    let listing = std::fs::read_to_string(set).unwrap();
    assert!(listing.starts_with("# layered stable set on 8 vertices\n"));
}

#[test]
fn bounds_closes_square_grids() {
    let out = pcn(&["bounds", "--family", "hamming", "--q", "4", "--m", "2"]);
    assert_eq!(code_of(&out), 0, "{}", stderr_of(&out));
    assert_eq!(stdout_of(&out), "chi_rho = 13\n");
}

#[test]
fn table_renders_closed_form_rows() {
    let dir = tempdir().unwrap();
    let csv = dir.path().join("m2.csv");
    let out = pcn(&[
        "table",
        "--m",
        "2",
        "--q-min",
        "3",
        "--q-max",
        "5",
        "--csv-out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code_of(&out), 0, "{}", stderr_of(&out));
    let expected = "\
q  m  lower  upper  status
3  2      7      7  exact
4  2     13     13  exact
5  2     21     21  exact
";
    assert_eq!(stdout_of(&out), expected);
    let expected_csv = "\
q,m,lower,upper,status
3,2,7,7,exact
4,2,13,13,exact
5,2,21,21,exact
";
    assert_eq!(std::fs::read_to_string(csv).unwrap(), expected_csv);
}

#[test]
fn table_skips_rows_over_the_vertex_budget() {
    let out = pcn(&[
        "table",
        "--m",
        "2",
        "--q-min",
        "3",
        "--q-max",
        "4",
        "--vertex-budget",
        "10",
    ]);
    assert_eq!(code_of(&out), 0, "{}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("3  2      7      7  exact"), "{text}");
    assert!(text.contains("4  2      -      -  skipped"), "{text}");
}

#[test]
fn exact_from_a_generated_random_graph_is_reproducible() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("rand.col");
    let gen = pcn(&[
        "gen",
        "--family",
        "random",
        "--n",
        "9",
        "--edge-prob",
        "0.35",
        "--seed",
        "5",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code_of(&gen), 0);
    let again = pcn(&["gen", "--family", "random", "--n", "9", "--edge-prob", "0.35", "--seed", "5"]);
    assert_eq!(stdout_of(&again), std::fs::read_to_string(&path).unwrap());

    let a = pcn(&["exact", "--input", path.to_str().unwrap()]);
    let b = pcn(&["exact", "--input", path.to_str().unwrap(), "--strategy", "starred"]);
    assert_eq!(code_of(&a), 0);
    assert_eq!(code_of(&b), 0);
    assert_eq!(stdout_of(&a), stdout_of(&b));
}

fn assert_trailing_newline(path: &Path) {
    let bytes = std::fs::read(path).unwrap();
    assert_eq!(bytes.last(), Some(&b'\n'));
}

#[test]
fn written_files_end_with_a_newline() {
    let dir = tempdir().unwrap();
    let graph = dir.path().join("g.col");
    let witness = dir.path().join("g.coloring");
    let model = dir.path().join("g.lp");
    assert_eq!(
        code_of(&pcn(&["gen", "--family", "star", "--n", "4", "--output", graph.to_str().unwrap()])),
        0
    );
    assert_eq!(
        code_of(&pcn(&[
            "exact",
            "--family",
            "star",
            "--n",
            "4",
            "--witness-out",
            witness.to_str().unwrap(),
        ])),
        0
    );
    assert_eq!(
        code_of(&pcn(&[
            "export-lp",
            "--family",
            "star",
            "--n",
            "4",
            "--layers",
            "1,2",
            "--output",
            model.to_str().unwrap(),
        ])),
        0
    );
    assert_trailing_newline(&graph);
    assert_trailing_newline(&witness);
    assert_trailing_newline(&model);
}
