use std::path::Path;
use std::process::{Command, Output};

fn hammaps(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hammaps"))
        .args(args)
        .env_remove("HAMMAPS_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(out)).unwrap()
}

fn construct(dir: &Path, name: &str, d: &str, q: &str, omega: Option<&str>) -> String {
    let path = dir.join(name).to_string_lossy().into_owned();
    let mut args = vec!["construct", d, q, "--out", &path];
    if let Some(w) = omega {
        args.extend(["--omega", w]);
    }
    stdout(&hammaps(&args));
    path
}

#[test]
fn construct_writes_map_and_header() {
    let dir = tempfile::tempdir().unwrap();
    let path = construct(dir.path(), "h25.map", "2", "5", None);
    assert!(!std::fs::read_to_string(&path).unwrap().is_empty());
    let header: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(format!("{path}.json")).unwrap()).unwrap();
    assert_eq!(
        (
            header["d"].as_u64(),
            header["q"].as_u64(),
            header["p"].as_u64()
        ),
        (Some(2), Some(5), Some(5))
    );
}

#[test]
fn mirror_wilson_and_iso() {
    let dir = tempfile::tempdir().unwrap();
    let a = construct(dir.path(), "a.map", "2", "5", None);
    let mirror = dir.path().join("m.map").to_string_lossy().into_owned();
    stdout(&hammaps(&["mirror", &a, "--out", &mirror]));
    assert_eq!(json(&hammaps(&["iso", &a, &mirror]))["isomorphic"], false);
    assert_eq!(json(&hammaps(&["iso", &a, &a]))["isomorphic"], true);
    assert_eq!(
        stdout(&hammaps(&["iso", &a, &mirror, "--format", "md"])).trim(),
        "not isomorphic"
    );

    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(stdout(&hammaps(&["wilson", &a, "1"])), text);
    // H_3 of H(2,2) over F_5 is the map for the other generator, the mirror
    let h3 = dir.path().join("h3.map").to_string_lossy().into_owned();
    stdout(&hammaps(&["wilson", &a, "3", "--out", &h3]));
    assert_eq!(json(&hammaps(&["iso", &h3, &mirror]))["isomorphic"], true);
}

#[test]
fn galois_and_enumerate() {
    let g = json(&hammaps(&["galois", "25"]));
    assert_eq!(
        (g["degree"].as_u64(), g["quotient"].as_str()),
        (Some(4), Some("C2 x C2"))
    );
    let e = json(&hammaps(&["enumerate", "1", "6"]));
    assert_eq!(e["maps"].as_array().map(Vec::len), Some(0));
    let e = json(&hammaps(&["enumerate", "2", "3"]));
    assert_eq!(e["maps"].as_array().map(Vec::len), Some(1));
    let m = json(&hammaps(&["enumerate", "2", "4", "--merged", "2"]));
    assert_eq!(
        (m["verdict"].as_str(), m["certified_by"].as_str()),
        (Some("none"), Some("search"))
    );
}

#[test]
fn exit_codes() {
    assert_eq!(hammaps(&["construct", "2", "6"]).status.code(), Some(2));
    assert_eq!(
        hammaps(&["construct", "2", "9", "--omega", "t"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(hammaps(&["bogus"]).status.code(), Some(2));
    assert_eq!(hammaps(&["enumerate", "2", "7"]).status.code(), Some(3));
    assert_eq!(
        hammaps(&["enumerate", "2", "5", "--cap", "10"])
            .status
            .code(),
        Some(3)
    );
    let capped = Command::new(env!("CARGO_BIN_EXE_hammaps"))
        .args(["enumerate", "2", "5"])
        .env("HAMMAPS_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(3));
}
