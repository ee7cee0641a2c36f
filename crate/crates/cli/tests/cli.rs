use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_redproof"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

fn manifest(dir: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(dir.join("manifest.txt"))
        .unwrap()
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| l.split_whitespace().map(String::from).collect())
        .collect()
}

const STRICT_SPR: [&str; 4] = ["--system", "spr", "--no-deletion", "--no-new-vars"];

#[test]
fn gen_php3() {
    let o = run(&["gen", "php", "3"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("p cnf 12 22\n"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('p') && !l.starts_with('c')).count(), 22);
}

#[test]
fn build_pipe_check() {
    let built = run(&["build", "php", "3"]);
    assert_eq!(code(&built), 0);
    let mut args = vec!["check"];
    args.extend(STRICT_SPR);
    let o = run_stdin(&args, &built.stdout);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).starts_with("ACCEPTED"));
}

#[test]
fn deletion_flag_matters() {
    let built = run(&["build", "php-dsr", "3"]);
    let o = run_stdin(&["check", "--system", "sr", "--no-deletion"], &built.stdout);
    assert_eq!(code(&o), 1);
    let o = run_stdin(&["check", "--system", "sr", "--no-deletion", "--allow-deletion"], &built.stdout);
    assert_eq!(code(&o), 0);
    let o = run_stdin(&["check", "--system", "spr"], &built.stdout);
    assert_eq!(code(&o), 1);
}

#[test]
fn golden_corpus_accepted() {
    let dir = data().join("golden");
    for row in manifest(&dir) {
        let (name, fmt) = (&row[0], &row[1]);
        let cnf = dir.join(format!("{name}.cnf"));
        let pf = dir.join(format!("{name}.proof"));
        let mut args = vec!["check".to_string(), cnf.display().to_string(), pf.display().to_string(), "--format".into(), fmt.clone()];
        args.extend(row[2..].iter().cloned());
        let args: Vec<&str> = args.iter().map(|s| s.as_str()).collect();
        let o = run(&args);
        assert_eq!(code(&o), 0, "{name}: {}", stdout(&o));
    }
}

#[test]
fn corrupted_corpus_rejected() {
    let dir = data().join("corrupted");
    for row in manifest(&dir) {
        let (name, fmt) = (&row[0], &row[1]);
        let step: usize = row.last().unwrap().parse().unwrap();
        let cnf = dir.join(format!("{name}.cnf"));
        let pf = dir.join(format!("{name}.proof"));
        let mut args = vec!["check".to_string(), cnf.display().to_string(), pf.display().to_string(), "--format".into(), fmt.clone(), "--porcelain".into()];
        args.extend(row[2..row.len() - 1].iter().cloned());
        let args: Vec<&str> = args.iter().map(|s| s.as_str()).collect();
        let o = run(&args);
        assert_eq!(code(&o), 1, "{name}");
        let first: serde_json::Value = serde_json::from_str(stdout(&o).lines().next().unwrap()).unwrap();
        assert_eq!(first["result"]["verdict"], "rejected");
        assert_eq!(first["result"]["step"], step, "{name}");
    }
}

#[test]
fn flipped_literal_reports_step() {
    let tmp = tempfile::tempdir().unwrap();
    let prefix = tmp.path().join("p");
    assert_eq!(code(&run(&["build", "php", "3", "-o", prefix.to_str().unwrap()])), 0);
    let pf = tmp.path().join("p.proof");
    let text = fs::read_to_string(&pf).unwrap();
    // the first induction unit, a RUP line
    let lines: Vec<&str> = text.lines().collect();
    let k = lines.iter().position(|l| l.split_whitespace().count() == 3).unwrap();
    let mut toks: Vec<String> = lines[k].split_whitespace().map(String::from).collect();
    toks[1] = (-toks[1].parse::<i64>().unwrap()).to_string();
    let mut out: Vec<String> = lines.iter().map(|s| s.to_string()).collect();
    out[k] = toks.join(" ");
    fs::write(&pf, out.join("\n") + "\n").unwrap();
    let cnf = tmp.path().join("p.cnf");
    let mut args = vec!["check", cnf.to_str().unwrap(), pf.to_str().unwrap()];
    args.extend(STRICT_SPR);
    let o = run(&args);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains(&format!("at step {k}")), "{}", stdout(&o));
}

#[test]
fn deterministic_outputs() {
    for args in [
        &["build", "tseitin", "regular", "10", "3", "--seed", "7"][..],
        &["build", "cc", "4", "3"][..],
        &["gen", "tseitin", "regular", "12", "3", "--seed", "3"][..],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&run(&["gen", "nonsense", "3"])), 2);
    assert_eq!(code(&run(&["gen", "php"])), 2);
    assert_eq!(code(&run(&["gen", "parity", "4"])), 2);
    assert_eq!(code(&run(&["check", "/nonexistent.cnf", "/nonexistent.proof"])), 2);
    assert_eq!(code(&run(&["check", "--system", "xyz"])), 2);
    assert_eq!(code(&run_stdin(&["check"], b"p cnf 1 1\n1 0\na 1 2 x 0\n")), 2);
}

#[test]
fn gadget_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let base = tmp.path().join("php2.cnf");
    fs::write(&base, stdout(&run(&["gen", "php", "2"]))).unwrap();
    for (kind, size) in [("orify", "3"), ("xorify", "3"), ("lift", "2")] {
        let g = tmp.path().join(format!("{kind}.cnf"));
        let o = run(&["gen", kind, "--input", base.to_str().unwrap(), "--var", "1", "--size", size, "-o", g.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
        assert!(tmp.path().join(format!("{kind}.cnf.gadget.json")).exists());
        let prefix = tmp.path().join(format!("{kind}_undo"));
        let o = run(&["build", "undo", "--input", g.to_str().unwrap(), "-o", prefix.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let cnf = format!("{}.cnf", prefix.display());
        let pf = format!("{}.proof", prefix.display());
        let mut args = vec!["check", cnf.as_str(), pf.as_str(), "--prefix"];
        args.extend(STRICT_SPR);
        assert_eq!(code(&run(&args)), 0);
        // without --prefix an undo prefix is not a refutation
        assert_eq!(code(&run(&args[..3])), 1);
    }
}

#[test]
fn transforms_and_stats() {
    let tmp = tempfile::tempdir().unwrap();
    let prefix = tmp.path().join("par");
    run(&["build", "parity", "5", "-o", prefix.to_str().unwrap()]);
    let cnf = format!("{}.cnf", prefix.display());
    let pf = format!("{}.proof", prefix.display());
    let drat = tmp.path().join("par.drat");
    let o = run(&["transform", "dpr-to-drat", &cnf, &pf, "--format", "drat", "-o", drat.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let o = run(&["check", &cnf, drat.to_str().unwrap(), "--format", "drat", "--system", "rat", "--allow-deletion", "--no-new-vars"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));

    let o = run(&["stats", &pf, "--porcelain"]);
    assert_eq!(code(&o), 0);
    let rec: serde_json::Value = serde_json::from_str(stdout(&o).lines().next().unwrap()).unwrap();
    assert_eq!(rec["stats"]["assignment"], 6);

    let php = tmp.path().join("php");
    run(&["build", "php", "3", "-o", php.to_str().unwrap()]);
    let o = run(&["stats", &format!("{}.proof", php.display()), "--layout", "php:3"]);
    assert!(stdout(&o).contains("pigeon width profile"));

    // x3 ↔ (x1 ∧ x2) over the four clauses on x1, x2
    let all4 = tmp.path().join("all4.cnf");
    fs::write(&all4, "p cnf 2 4\n1 2 0\n-1 2 0\n1 -2 0\n-1 -2 0\n").unwrap();
    let er = tmp.path().join("all4.er");
    fs::write(&er, "e 3 1 2\na 2 0\na 0\n").unwrap();
    let o = run(&["transform", "er-to-bc", all4.to_str().unwrap(), er.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let args = ["check", "--system", "bc", "--no-deletion", "--no-new-vars"];
    let c = run_stdin(&args, &o.stdout);
    assert_eq!(code(&c), 0, "{}", stdout(&c));
}

#[test]
fn oracle_queries() {
    let tmp = tempfile::tempdir().unwrap();
    let a = tmp.path().join("a.cnf");
    let b = tmp.path().join("b.cnf");
    fs::write(&a, "p cnf 2 2\n1 2 0\n-1 2 0\n").unwrap();
    fs::write(&b, "p cnf 1 1\n1 0\n").unwrap();
    let (a, b) = (a.to_str().unwrap(), b.to_str().unwrap());
    assert_eq!(stdout(&run(&["oracle", "sat", a])).trim(), "satisfiable: true");
    assert_eq!(stdout(&run(&["oracle", "count", a])).trim(), "models: 2");
    assert_eq!(stdout(&run(&["oracle", "implies", a, "--clause", "2"])).trim(), "implied: true");
    assert_eq!(stdout(&run(&["oracle", "equisat", a, b])).trim(), "equisatisfiable: true");
    let o = run(&["oracle", "sat", a, "--porcelain"]);
    let rec: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(rec["satisfiable"], true);
    let big = tmp.path().join("big.cnf");
    fs::write(&big, stdout(&run(&["gen", "php", "5"]))).unwrap();
    assert_eq!(code(&run(&["oracle", "sat", big.to_str().unwrap()])), 2);
}
