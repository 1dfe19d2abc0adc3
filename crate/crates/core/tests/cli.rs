//! End-to-end runs of the command-line tool.

use std::process::Command;

fn kgzones() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kgzones"))
}

#[test]
fn dispersion_csv_echoes_the_configuration() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.csv");
    let st = kgzones()
        .args(["dispersion", "--samples", "20", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(st.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.lines().any(|l| l.starts_with("# config:")));
    let rows = text.lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(rows, 21, "header plus 20 samples");
}

#[test]
fn zones_json_has_cells_and_boundaries() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("z.json");
    let st = kgzones()
        .args([
            "zones", "--preset", "exchange", "--format", "json", "--grid", "40x30", "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(st.success());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(v["config"].is_object());
    assert!(v["data"]["boundaries"]
        .as_array()
        .is_some_and(|b| !b.is_empty()));
}

#[test]
fn bad_parameter_file_names_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("p.json");
    std::fs::write(
        &params,
        r#"{"c1": 2, "c2": 1.8, "omega1": 3, "omega2": 3.5, "muu": 0.5}"#,
    )
    .unwrap();
    let o = kgzones()
        .args(["zones", "--params"])
        .arg(&params)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("muu"));
}

#[test]
fn svg_output_is_well_formed() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.svg");
    let st = kgzones()
        .args(["scalar", "--format", "svg", "--grid", "20x20", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(st.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("<svg") || text.starts_with("<?xml"));
    assert!(text.trim_end().ends_with("</svg>"));
}
