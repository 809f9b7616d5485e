//! Byte-exact JSON outputs for three canonical inputs.
//! Regenerate with `UPDATE_GOLDEN=1 cargo test -p liestat-cli --test a_golden`.

use std::path::PathBuf;
use std::process::Command;

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests")
}

fn run(args: &[String]) -> Vec<u8> {
    let o = Command::new(env!("CARGO_BIN_EXE_liestat"))
        .args(args)
        .env_remove("LIESTAT_RANK_TOL")
        .output()
        .expect("binary runs");
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    o.stdout
}

fn check(name: &str, args: &[String]) {
    let first = run(args);
    let second = run(args);
    assert_eq!(first, second, "{name}: output differs between runs");

    let path = dir().join("golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &first).unwrap();
        return;
    }
    let stored = std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(
        stored == first,
        "{name}: output differs from golden file\n--- golden\n{}\n--- actual\n{}",
        String::from_utf8_lossy(&stored),
        String::from_utf8_lossy(&first)
    );
}

fn report(spec: &str) -> Vec<String> {
    let p = dir().join("specs").join(spec);
    vec!["report".into(), p.display().to_string(), "--classify".into(), "--json".into()]
}

#[test]
fn milnor_131() {
    check("milnor_131.json", &report("milnor_131.json"));
}

#[test]
fn nonuni_10() {
    check("nonuni_10.json", &report("nonuni_10.json"));
}

#[test]
fn t_model_nu5() {
    let args: Vec<String> = ["models", "t", "--nu", "5", "--json"].iter().map(|s| s.to_string()).collect();
    check("models_t_nu5.json", &args);
}
