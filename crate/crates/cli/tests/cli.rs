use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_drinfeld"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    let pat = format!(" {key}=");
    let start = line.find(&pat)? + pat.len();
    let rest = &line[start..];
    // Values may contain spaces; the next field starts at ` key=`.
    let end = rest
        .match_indices(' ')
        .map(|(i, _)| i)
        .find(|&i| {
            let w = rest[i + 1..].split(' ').next().unwrap();
            w.split_once('=').is_some_and(|(k, _)| {
                !k.is_empty() && k.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            })
        })
        .unwrap_or(rest.len());
    Some(&rest[..end])
}

fn record<'a>(text: &'a str, kind: &str) -> Vec<&'a str> {
    text.lines()
        .filter(|l| l.split(' ').next() == Some(kind))
        .collect()
}

#[test]
fn carlitz_first_coefficient() {
    let o = run(&["exp-series"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("# drinfeld exp-series q=2 "));
    let exp = record(&s, "exp");
    assert_eq!(field(exp[0], "value"), Some("[1]/[1]"));
    // 1/(t^2 - t)
    assert_eq!(field(exp[1], "value"), Some("[1]/[0 1 1]"));

    let s = stdout(&run(&["exp-series", "--q", "3", "--depth", "1"]));
    // 1/(t^3 - t) over F_3
    assert_eq!(field(record(&s, "exp")[1], "value"), Some("[1]/[0 2 0 1]"));
}

#[test]
fn log_inverts_exp() {
    let s = stdout(&run(&["exp-series", "--log", "--depth", "1"]));
    // 1/(t - t^2) = 1/(t^2 + t) in characteristic 2
    assert_eq!(field(record(&s, "log")[1], "value"), Some("[1]/[0 1 1]"));
}

#[test]
fn component_count_at_t_squared() {
    let o = run(&["components", "--q", "3", "--level", "0 0 1"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert_eq!(field(record(&s, "components")[0], "count"), Some("3"));
}

#[test]
fn hecke_cosets_at_a_prime() {
    let s = stdout(&run(&["hecke-cosets", "--q", "3"]));
    assert!(s.contains("#cosets 4"));
    assert_eq!(s.lines().filter(|l| !l.starts_with('#')).count(), 4);
}

#[test]
fn composition_is_consistent() {
    let o = run(&["hecke-compose"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let c = record(&s, "composition")[0];
    assert_eq!(field(c, "mass"), Some("9"));
    assert_eq!(field(c, "consistent"), Some("true"));
}

#[test]
fn verify_passes() {
    let o = run(&["verify", "--module", "skew"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let s = stdout(&o);
    assert_eq!(record(&s, "PASS").len(), 3);
    assert!(record(&s, "FAIL").is_empty());
}

#[test]
fn json_lines_parse() {
    let o = run(&["--json", "act", "--a", "0 0 1"]);
    assert_eq!(o.status.code(), Some(0));
    let vals: Vec<Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(vals[0]["kind"], "header");
    assert_eq!(vals[0]["command"], "act");
    assert_eq!(vals[1]["kind"], "act");
    assert_eq!(vals[1]["deg"], 2);
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "--module", "hecke", "--seed", "7"];
    assert_eq!(stdout(&run(&args)), stdout(&run(&args)));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["exp-series", "--bogus"]).status.code(), Some(2));
    assert_eq!(
        run(&["--set", "foo=1", "exp-series"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["--q", "6", "exp-series"]).status.code(), Some(2));
    assert_eq!(run(&["act", "--a", "0 x"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--module", "nope"]).status.code(), Some(2));
}

#[test]
fn config_file_then_flags() {
    let path = std::env::temp_dir().join(format!("drinfeld-cli-{}.cfg", std::process::id()));
    std::fs::write(&path, "# field\nq=3\nN=0 1\n").unwrap();
    let p = path.to_str().unwrap();
    let s = stdout(&run(&["--config", p, "components"]));
    assert!(s.starts_with("# drinfeld components q=3 "));
    assert!(s.contains(" N=[0 1] "));
    let s = stdout(&run(&["--config", p, "--q", "2", "components"]));
    assert!(s.contains(" q=2 "));
    std::fs::write(&path, "q=3\nbogus\n").unwrap();
    assert_eq!(run(&["--config", p, "components"]).status.code(), Some(2));
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn lost_precision_exits_three() {
    let o = run(&[
        "lattice-exp",
        "--prec",
        "8",
        "--omega",
        "2:-1:8:[1 1 0 1]; 2:0:8:[1]",
        "--z",
        "2:-20:8:[1]",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.starts_with("error: Unstable:"));
}
