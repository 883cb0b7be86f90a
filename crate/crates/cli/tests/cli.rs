use std::process::Command;

use serde_json::Value;

fn starmul(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_starmul")).args(args).output().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), v, stdout)
}

fn temp_file(name: &str, text: &str) -> String {
    let p = std::env::temp_dir().join(format!("starmul-cli-{}-{name}", std::process::id()));
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn dumped_fixture_checks_from_file() {
    let (code, dump, _) = starmul(&["catalog", "--name", "generic-231(2)"]);
    assert_eq!(code, 0);
    let file = temp_file("231.sys", dump["values"]["dsl"].as_str().unwrap());
    let (code, rep, _) = starmul(&["check", "--system", &file]);
    assert_eq!(code, 0);
    assert_eq!(rep["verdict"], true);
    assert_eq!(rep["schema_version"], 1);
    let (code, rep, _) = starmul(&["mul", "--system", &file, "--left", "mu", "--right", "mu^2"]);
    assert_eq!(code, 0);
    assert_eq!(rep["values"]["product"], "(-x, -y, -1/2 - 2*y + 4*x)");
    std::fs::remove_file(file).unwrap();
}

#[test]
fn broken_dump_is_rejected_with_a_witness() {
    let (_, dump, _) = starmul(&["catalog", "--name", "generic-221", "--broken"]);
    let file = temp_file("broken.sys", dump["values"]["dsl"].as_str().unwrap());
    let (code, rep, _) = starmul(&["check", "--system", &file]);
    assert_eq!(code, 1);
    assert_eq!(rep["verdict"], false);
    assert!(rep["values"]["witness"]["value"].is_string());
    std::fs::remove_file(file).unwrap();
}

#[test]
fn series_reports_values_and_convergence() {
    let (code, rep, _) = starmul(&["series", "--system", "generic-221", "--kind", "exp", "--point", "x=0.2,y=0.9"]);
    assert_eq!(code, 0);
    assert_eq!(rep["values"]["routes_agree"], true);
    assert_eq!(rep["values"]["values"].as_array().unwrap().len(), 2);
    let outside = ["series", "--system", "generic-221", "--kind", "geometric", "--ratio", "1", "--point", "x=6,y=-5"];
    let (code, rep, _) = starmul(&outside);
    assert_eq!(code, 1);
    assert_eq!(rep["values"]["convergence"]["passes"], false);
    let complex = ["series", "--system", "generic-221", "--kind", "exp", "--point", "x=1,y=0"];
    assert_eq!(starmul(&complex).0, 1);
    let (code, rep, _) = starmul(&["--mode", "relaxed", "series", "--system", "generic-221", "--kind", "exp", "--point", "x=1,y=0"]);
    assert_eq!(code, 0);
    assert_eq!(rep["values"]["convergence"]["regime"], "unproved regime");
}

#[test]
fn find_reports_family_dimension() {
    let (code, rep, _) = starmul(&["find", "--z", "x + y*mu + x*y*mu^2 + mu^3", "--coords", "x,y"]);
    assert_eq!(code, 0);
    assert_eq!(rep["values"]["dimension"], 2);
    let (code, rep, _) = starmul(&["find", "--z", "x + y*mu + mu^2", "--coords", "x,y", "--monic"]);
    assert_eq!(code, 0);
    assert_eq!(rep["values"]["dimension"], 0);
}

#[test]
fn text_format_prints_summary() {
    let (code, _, out) = starmul(&["--format", "text", "pow", "--system", "generic-221", "--base", "mu", "--exp", "-1"]);
    assert_eq!(code, 0);
    assert!(out.contains("(-y/x, -1/x)"), "{out}");
}

#[test]
fn errors_exit_with_two() {
    for args in [
        vec!["check", "--system", "nope"],
        vec!["pow", "--system", "cauchy-riemann", "--base", "(x, y)", "--exp", "-2"],
        vec!["mul", "--system", "generic-221", "--left", "(x", "--right", "mu"],
        vec!["find", "--z", "x + mu", "--coords", "x,x"],
        vec!["series", "--system", "generic-321", "--kind", "exp", "--point", "x=1,y=1,z=0"],
    ] {
        let (code, rep, out) = starmul(&args);
        assert_eq!(code, 2, "{args:?}: {out}");
        assert!(rep["error"]["kind"].is_string(), "{args:?}: {out}");
    }
}
