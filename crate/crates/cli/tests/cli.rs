use std::process::{Command, Output};

fn abspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abspec")).args(args).output().expect("run abspec")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(line: &str, key: &str) -> f64 {
    let v: serde_json::Value = serde_json::from_str(line).unwrap();
    v[key].as_f64().unwrap_or_else(|| panic!("{key} missing in {line}"))
}

#[test]
fn sphere_spectrum_golden() {
    let o = abspec(&["spectrum", "sphere", "--flux", "3/10", "--count", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        concat!(
            r#"{"value":0.39,"multiplicity":1,"branch_n":0,"branch_k":0,"symbolic_alpha":"3/10"}"#,
            "\n",
            r#"{"value":1.19,"multiplicity":1,"branch_n":1,"branch_k":0,"symbolic_alpha":"7/10"}"#,
            "\n",
            r#"{"value":2.99,"multiplicity":2,"branch_n":-1,"branch_k":0,"symbolic_alpha":"13/10"}"#,
            "\n",
            r#"{"value":4.59,"multiplicity":2,"branch_n":2,"branch_k":0,"symbolic_alpha":"17/10"}"#,
            "\n"
        )
    );
}

#[test]
fn cylinder_and_hemisphere_heads() {
    let o = abspec(&["spectrum", "cylinder", "--modulus", "1", "--flux", "1/4", "--count", "1"]);
    assert_eq!(field(stdout(&o).lines().next().unwrap(), "value"), 0.0625);
    let o = abspec(&["spectrum", "hemisphere", "--bc", "neumann", "--flux", "1/2", "--count", "1", "--format", "csv"]);
    assert_eq!(stdout(&o), "value,multiplicity,branch_n,branch_k,symbolic_alpha\n0.75,2,1,0,1/2\n");
}

#[test]
fn solve_examples() {
    let o = abspec(&["solve", "--weight", "star:4pi", "--flux", "3/10", "--k", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!((field(&stdout(&o), "kappa") - 0.39).abs() < 1e-9);
    let o = abspec(&["solve", "--weight", "star:2pi", "--flux", "3/10", "--k", "0", "--right", "dirichlet"]);
    assert!((field(&stdout(&o), "kappa") - 2.99).abs() < 1e-9);
}

#[test]
fn weight_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.csv");
    let svg = dir.path().join("w.svg");
    let o = abspec(&["surface", "--model", "sphere", "--weight-out", w.to_str().unwrap(), "--svg", svg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let line = stdout(&o);
    assert!((field(&line, "area") - 4.0 * std::f64::consts::PI).abs() < 1e-9);
    assert_eq!(field(&line, "curvature_max"), 1.0);
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
    let src = format!("file:{}", w.display());
    let o = abspec(&["solve", "--weight", &src, "--flux", "0", "--k", "0"]);
    assert_eq!(field(&stdout(&o), "kappa"), 0.0);
    let ef = dir.path().join("f.csv");
    let o = abspec(&["solve", "--weight", &src, "--flux", "1/4", "--eigenfunction", ef.to_str().unwrap()]);
    assert!((field(&stdout(&o), "kappa") - 0.3125).abs() < 1e-6);
    let table = std::fs::read_to_string(&ef).unwrap();
    assert!(table.starts_with("a,f\n") && table.lines().count() > 100);
}

#[test]
fn surface_examples() {
    let o = abspec(&["surface", "--model", "cigar:3"]);
    assert!((field(&stdout(&o), "area") - 10.0 * std::f64::consts::PI).abs() < 1e-9);
    let o = abspec(&["surface", "--model", "cylinder:1", "--modulus"]);
    assert_eq!(field(&stdout(&o), "modulus"), 1.0);
}

#[test]
fn verify_examples() {
    let o = abspec(&["verify", "thm2.3", "--model", "sphere", "--flux", "3/10"]);
    assert_eq!(o.status.code(), Some(0));
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["pass"], true);
    assert!(r["flags"].as_array().unwrap().iter().any(|f| f == "equality"));

    let o = abspec(&["verify", "thm2.5", "--model", "cylinder:1", "--flux", "1/4"]);
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(r["flags"].as_array().unwrap().iter().any(|f| f == "equality"));

    let o = abspec(&["verify", "no-hersch", "--L", "1,2,4,8", "--flux", "1/2"]);
    assert_eq!(o.status.code(), Some(0));
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let q = r["quantities"].as_array().unwrap();
    let norm: Vec<f64> = q
        .iter()
        .filter(|x| x["name"].as_str().unwrap().starts_with("normalized"))
        .map(|x| x["value"].as_f64().unwrap())
        .collect();
    assert_eq!(norm.len(), 4);
    assert!(norm.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn exit_codes() {
    // curvature above the bound: report written, check fails
    let o = abspec(&["verify", "thm2.1", "--model", "cap:1,2", "--flux", "1/4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("\"pass\":false"));
    for bad in [
        vec!["spectrum", "torus", "--flux", "1/3"],
        vec!["spectrum", "hemisphere", "--flux", "1/3"],
        vec!["spectrum", "sphere", "--flux", "x"],
        vec!["spectrum", "sphere", "--flux", "1/3", "--count", "0"],
        vec!["surface", "--model", "cigar:-1"],
        vec!["solve", "--weight", "star:20", "--flux", "1/3"],
        vec!["verify", "thm9", "--model", "sphere", "--flux", "1/3"],
        vec!["verify", "thm2.3", "--flux", "1/3"],
    ] {
        assert_eq!(abspec(&bad).status.code(), Some(2), "{bad:?}");
    }
    let o = abspec(&["solve", "--weight", "star:4pi", "--flux", "3/10", "--k", "20000"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn output_is_deterministic() {
    let args = ["sweep", "thm2.5", "--model", "tube:1,2", "--fluxes", "3/8,1/8,1/4"];
    let a = abspec(&args);
    let b = abspec(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let nus: Vec<f64> = stdout(&a).lines().map(|l| field(l, "nu")).collect();
    assert_eq!(nus, vec![0.375, 0.125, 0.25]);
}

#[test]
fn out_flag_and_formats() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.svg");
    let o = abspec(&["spectrum", "sphere", "--flux", "1/3", "--format", "svg", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(&path).unwrap().contains("</svg>"));
    let o = abspec(&["verify", "no-hersch", "--L", "1,2", "--flux", "1/2", "--format", "csv"]);
    assert!(stdout(&o).starts_with("kind,name,value,holds\n"));
}
