use std::process::{Command, Output};

fn planefol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_planefol")).args(args).output().expect("binary runs")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn milnor_report_on_stdout() {
    let o = planefol(&["milnor", "--catalog", "F6"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["total_milnor"], 7);
    assert_eq!(v["bezout_holds"], true);
    assert_eq!(v["orbits"].as_array().unwrap().len(), 7);
}

#[test]
fn classify_returns_a_verified_map() {
    let o = planefol(&["classify", "--form", "(x + y^2 - x^2*y)*dy + x*(x + y^2)*dx"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["class"], "F4");
    assert_eq!(v["verified"], true);
}

#[test]
fn parse_errors_point_at_the_input() {
    let o = planefol(&["milnor", "--form", "x*dy +* y"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("x*dy +* y") && err.contains('^'), "{err}");
}

#[test]
fn wrong_degree_is_an_input_error() {
    let o = planefol(&["classify", "--form", "x*dy - y*dx"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = std::env::temp_dir().join(format!("planefol-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("bad.toml");
    std::fs::write(&cfg, "[portrait]\nseeds = 3\nbogus = 1\n").unwrap();
    let svg = dir.join("p.svg");
    let o = planefol(&["--config", cfg.to_str().unwrap(), "portrait", "--catalog", "F1", "--svg", svg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn portraits_are_byte_identical() {
    let dir = std::env::temp_dir().join(format!("planefol-svg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("small.toml");
    std::fs::write(&cfg, "[portrait]\nseeds = 4\n").unwrap();
    let mut outputs = Vec::new();
    for name in ["a.svg", "b.svg"] {
        let path = dir.join(name);
        let o = planefol(&["--config", cfg.to_str().unwrap(), "portrait", "--catalog", "F4", "--orthogonal", "--svg", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        outputs.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    roxmltree::Document::parse(std::str::from_utf8(&outputs[0]).unwrap()).unwrap();
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn catalog_verification_passes() {
    let o = planefol(&["catalog", "--verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

fn validator(def: &str) -> jsonschema::Validator {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/schema.json")).unwrap();
    let mut schema: serde_json::Value = serde_json::from_str(&text).unwrap();
    schema["$ref"] = serde_json::Value::String(format!("#/$defs/{def}"));
    schema.as_object_mut().unwrap().remove("anyOf");
    jsonschema::validator_for(&schema).expect("schema compiles")
}

fn check_schema(def: &str, doc: &serde_json::Value) {
    let v = validator(def);
    let errors: Vec<String> = v.iter_errors(doc).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{def}: {errors:#?}");
}

#[test]
fn outputs_match_the_schema() {
    let cases: [(&str, &[&str]); 10] = [
        ("output-analyze", &["analyze", "--catalog", "F5"]),
        ("output-analyze", &["analyze", "--catalog", "FJ"]),
        ("output-classify", &["classify", "--catalog", "F2"]),
        ("output-milnor", &["milnor", "--catalog", "FJ"]),
        ("output-isotropy", &["isotropy", "--catalog", "F4"]),
        ("output-flex", &["flex", "--catalog", "F6"]),
        ("output-invariant-curves", &["invariant-curves", "--catalog", "F0(1)", "--max-degree", "2"]),
        ("output-degenerate", &["degenerate", "--catalog", "FJ", "--target", "auto"]),
        ("output-catalog", &["catalog"]),
        ("output-catalog-verify", &["catalog", "--verify", "--name", "F6"]),
    ];
    let mut extra = json(&planefol(&["milnor", "--catalog", "F1"]));
    extra["unexpected"] = serde_json::Value::Bool(true);
    assert!(!validator("output-milnor").is_valid(&extra));
    for (def, args) in cases {
        let o = planefol(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        check_schema(def, &json(&o));
    }
    let dir = std::env::temp_dir().join(format!("planefol-schema-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("small.toml");
    std::fs::write(&cfg, "[portrait]\nseeds = 3\n").unwrap();
    let (svg, lines) = (dir.join("p.svg"), dir.join("p.json"));
    let o = planefol(&[
        "--config",
        cfg.to_str().unwrap(),
        "portrait",
        "--catalog",
        "F1",
        "--svg",
        svg.to_str().unwrap(),
        "--polylines",
        lines.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    check_schema("output-portrait", &json(&o));
    let dumped: serde_json::Value = serde_json::from_slice(&std::fs::read(&lines).unwrap()).unwrap();
    check_schema("output-portrait-polylines", &dumped);
    std::fs::remove_dir_all(&dir).ok();
}
