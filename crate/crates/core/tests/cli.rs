use std::fs;
use std::process::Command;

fn bench() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ritz-bench"));
    cmd.env_remove("RITZ_DIGITS");
    cmd
}

#[test]
fn csv_output_has_stable_columns() {
    let out = bench()
        .args(["--lambda", "10", "--form", "rotated", "--basis", "ho", "--m-list", "2,4", "--out", "csv"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "form,basis,lambda,M,alpha_opt,energy,correct_digits,cpu_seconds,method,abs_error,error"
    );
    let rows: Vec<_> = lines.collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("rotated,ho,10,2,"));
    assert!(rows[1].starts_with("rotated,ho,10,4,"));
    // the built-in reference for lambda = 10 gives at least the leading digit
    let fields: Vec<_> = rows[1].split(',').collect();
    assert!(fields[5].starts_with("3.01"));
    assert!(fields[6].parse::<u32>().unwrap() >= 3);
}

#[test]
fn digits_come_from_environment_unless_overridden() {
    let run = |extra: &[&str], env: Option<&str>| {
        let mut cmd = bench();
        cmd.args(["--lambda", "5", "--form", "original", "--basis", "ho", "--m-list", "3", "--out", "json"]);
        cmd.args(extra);
        if let Some(v) = env {
            cmd.env("RITZ_DIGITS", v);
        }
        let out = cmd.output().unwrap();
        assert_eq!(out.status.code(), Some(0));
        let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        let energy = rows[0]["energy"].as_str().unwrap().to_string();
        energy.chars().filter(char::is_ascii_digit).count()
    };
    assert_eq!(run(&[], None), 30);
    assert_eq!(run(&[], Some("18")), 18);
    assert_eq!(run(&["--digits", "22"], Some("18")), 22);
}

#[test]
fn config_file_is_read_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("study.cfg");
    fs::write(
        &path,
        "# small study\nlambda = 100\nform = original\nbasis = trig\nm = 2, 3\ndigits = 20\nreference = none\n",
    )
    .unwrap();
    let out = bench().arg("--config").arg(&path).args(["--out", "csv"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().skip(1).all(|l| l.starts_with("original,trig,100,")));
    assert!(text.lines().nth(1).unwrap().split(',').nth(6) == Some(""));

    let out = bench()
        .arg("--config")
        .arg(&path)
        .args(["--m-list", "4", "--out", "csv"])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.contains("original,trig,100,4,"));
}

#[test]
fn configuration_errors_exit_with_one() {
    for args in [
        vec!["--lambda", "-3"],
        vec!["--form", "sideways"],
        vec!["--m-list", "0"],
        vec!["--digits", "5"],
        vec!["--out", "xml"],
    ] {
        let out = bench().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cfg");
    fs::write(&path, "lambda = 10\ncolour = blue\n").unwrap();
    let out = bench().arg("--config").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn paper_table_marks_correct_digits() {
    let out = bench()
        .args(["--lambda", "10", "--form", "original", "--basis", "trig", "--m-list", "10", "--digits", "20"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# rr original trig"));
    assert!(text.contains("[3.019]70463969"), "{text}");
}

#[test]
fn plot_script_and_matrix_dump_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let plot = dir.path().join("conv.gp");
    let out = bench()
        .args(["--lambda", "10", "--form", "rotated", "--basis", "both", "--m-list", "3,5", "--out", "csv"])
        .arg("--emit-plot")
        .arg(&plot)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(fs::read_to_string(&plot).unwrap().contains("\nplot "));
    assert!(fs::read_to_string(plot.with_extension("csv")).unwrap().lines().count() >= 5);

    let dump = dir.path().join("h.txt");
    let out = bench()
        .args(["--lambda", "10", "--form", "rotated", "--basis", "ho", "--m-list", "2", "--dump-matrix"])
        .arg(&dump)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(!fs::read_to_string(&dump).unwrap().is_empty());

    let out = bench()
        .args(["--lambda", "10,5", "--form", "rotated", "--basis", "ho", "--m-list", "2", "--dump-matrix"])
        .arg(&dump)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
