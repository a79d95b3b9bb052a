use std::path::Path;
use std::process::{Command, Output};

use hessbasis::basis::Certificate;
use serde_json::Value;

fn hb(args: &[&str]) -> Output {
    hb_env(args, &[])
}

fn hb_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_hessbasis"));
    c.args(args);
    for (k, v) in env {
        c.env(k, v);
    }
    c.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).to_string()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn dihedral_five_ratio() {
    let o = hb(&[
        "molien", "--group", "I2:5", "--tensor", "sym2", "--method", "census", "--ratio",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "1 + t^2 + t^3");
    let v = json(&hb(&["--json", "molien", "--group", "I2:5", "--ratio"]));
    assert_eq!(v["schema"], "hessbasis.molien/1");
    assert_eq!(v["ratio"], serde_json::json!(["1", "0", "1", "1"]));
    assert!(v["series"].as_array().unwrap().iter().all(Value::is_string));
}

#[test]
fn methods_agree_on_classical_series() {
    let series = |m: &str| {
        json(&hb(&["--json", "molien", "--group", "B:3", "--method", m]))["series"].clone()
    };
    assert_eq!(series("census"), series("cycle-index"));
    assert_eq!(series("census"), series("closed-form"));
    let trivial = json(&hb(&[
        "--json", "molien", "--group", "A:2", "--tensor", "trivial",
    ]));
    assert_eq!(trivial["series"], serde_json::json!(["1", "1", "2", "2"]));
}

#[test]
fn degenerate_verdict_is_data() {
    let o = hb(&[
        "basis",
        "certify",
        "--group",
        "I2:4",
        "--set",
        "r1,r1*r1,r1*r1",
        "--point",
        "1,2",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("verdict: degenerate"));
    let v = json(&hb(&[
        "--json",
        "basis",
        "certify",
        "--group",
        "I2:4",
        "--set",
        "r1,r1*r1,r2",
        "--point",
        "1,2",
    ]));
    assert_eq!(v["verdict"], "certified");
    assert_eq!(v["schema"], "hessbasis.certificate/1");
}

#[test]
fn e8_order_is_not_enumerated() {
    let o = hb(&["group", "order", "--type", "E8"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "696729600 (not enumerable; product of degrees)");
    assert_eq!(stdout(&hb(&["group", "order", "--type", "F4"])), "1152");
}

#[test]
fn exit_codes() {
    let o = hb(&["molien", "--group", "H3", "--frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Usage"));
    assert_eq!(hb(&["nonsense"]).status.code(), Some(2));
    let o = hb(&["molien", "--group", "E8"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("696729600"), "{}", stderr(&o));
    assert_eq!(hb(&["molien", "--group", "Q7"]).status.code(), Some(1));
    assert_eq!(
        hb(&["regular-check", "--group", "A:3", "--point", "1,x"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn regular_check() {
    assert_eq!(
        stdout(&hb(&[
            "regular-check",
            "--group",
            "B:3",
            "--point",
            "1,2,3"
        ])),
        "regular (det J = 720)"
    );
    let v = json(&hb(&[
        "--json",
        "regular-check",
        "--group",
        "B:3",
        "--point",
        "1,1,3",
    ]));
    assert_eq!(v["regular"], false);
    let v = json(&hb(&[
        "--json",
        "regular-check",
        "--group",
        "H3",
        "--point",
        "1/2,2,3",
    ]));
    assert_eq!(v["regular"], true);
}

#[test]
fn group_build_feeds_molien_and_basis() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("h3.json");
    let o = hb(&["group", "build", "--type", "H3", "--out", p(&g)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let stored: Value = serde_json::from_str(&std::fs::read_to_string(&g).unwrap()).unwrap();
    assert_eq!(stored["schema"], "hessbasis.group/1");
    assert!(stored["census"].is_object());

    let o = hb(&["molien", "--group", p(&g), "--ratio"]);
    assert_eq!(stdout(&o), "1 + t^2 + t^4 + t^6 + t^8 + t^10");

    let certs = dir.path().join("certs.json");
    let o = hb(&[
        "basis",
        "enumerate",
        "--group",
        "H3",
        "--certify-all",
        "--out",
        p(&certs),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("2/2 certified"));
    let loaded: Vec<Certificate> =
        serde_json::from_str(&std::fs::read_to_string(&certs).unwrap()).unwrap();
    assert_eq!(loaded.len(), 2);
    for c in &loaded {
        assert!(c.is_certified());
        let set = c.set.to_string();
        let point: Vec<String> = c.point.iter().map(|x| x.to_string()).collect();
        let v = json(&hb(&[
            "--json",
            "basis",
            "certify",
            "--group",
            &c.group,
            "--set",
            &set,
            "--point",
            &point.join(","),
        ]));
        assert_eq!(
            v["determinant"],
            serde_json::to_value(&c.determinant).unwrap()
        );
    }
}

#[test]
fn candidate_listing() {
    let v = json(&hb(&["--json", "basis", "enumerate", "--group", "E6"]));
    assert_eq!(v["sets"].as_array().unwrap().len(), 12);
    assert_eq!(v["ratio_source"], "census");
    let v = json(&hb(&["--json", "basis", "enumerate", "--group", "A:3"]));
    assert_eq!(
        v["sets"],
        serde_json::json!([["r2", "r3", "r1*r1", "r1*r2", "r1*r3", "r2*r2"]])
    );
}

#[test]
fn invariants_listing() {
    let o = hb(&["invariants", "--group", "I2:3"]);
    assert_eq!(
        stdout(&o),
        "r1 (degree 2) = x1^2 + x2^2\nr2 (degree 3) = x1^3 - 3*x1*x2^2"
    );
    let v = json(&hb(&["--json", "invariants", "--group", "F4"]));
    assert_eq!(v["degrees"], serde_json::json!([2, 6, 8, 12]));
    assert_eq!(v["invariants"][0]["orbit_size"], 24);
    let v = json(&hb(&["--json", "invariants", "--group", "H3", "--expand"]));
    assert_eq!(v["invariants"][2]["poly"]["n"], 3);
}

#[test]
fn decompose_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.json");
    let id = r#"[{"n":2,"terms":[{"exp":[0,0],"coeff":"1"}]},{"n":2,"terms":[]},{"n":2,"terms":[{"exp":[0,0],"coeff":"1"}]}]"#;
    std::fs::write(&t, id).unwrap();
    let v = json(&hb(&[
        "--json",
        "decompose",
        "--group",
        "I2:5",
        "--tensor",
        p(&t),
        "--basis",
        "auto",
    ]));
    assert_eq!(v["schema"], "hessbasis.decomposition/1");
    assert_eq!(v["residual"], false);
    assert_eq!(v["coeffs"][0]["terms"][0]["coeff"], "1/2");

    let dx2 =
        r#"[{"n":2,"terms":[{"exp":[0,0],"coeff":"1"}]},{"n":2,"terms":[]},{"n":2,"terms":[]}]"#;
    std::fs::write(&t, dx2).unwrap();
    let o = hb(&["decompose", "--group", "I2:4", "--tensor", p(&t)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("equivariant"), "{}", stderr(&o));
    let o = hb(&[
        "decompose",
        "--group",
        "I2:4",
        "--tensor",
        p(&t),
        "--symmetrize",
        "--basis",
        "r1,r1*r1,r2",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("Hess(r1): 1/4"), "{}", stdout(&o));
}

#[test]
fn selfcheck_sections_pass() {
    let o = hb(&["selfcheck", "--only", "H3,dihedral"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS  H3 ratio = 1 + t^2 + t^4 + t^6 + t^8 + t^10"));
}

#[test]
fn quick_selfcheck_is_deterministic_across_thread_counts() {
    let run = |threads: &str| {
        let o = hb_env(
            &["--json", "selfcheck", "--profile", "quick"],
            &[("HESSBASIS_THREADS", threads)],
        );
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let mut v = json(&o);
        for c in v["checks"].as_array_mut().unwrap() {
            assert!(["published-table", "derived-oracle", "trivial"]
                .contains(&c["provenance"].as_str().unwrap()));
            c["seconds"] = Value::from(0);
        }
        serde_json::to_string(&v).unwrap()
    };
    let one = run("1");
    assert_eq!(one, run("4"));
    assert_eq!(one, run("1"));
}

#[test]
fn corrupted_f4_fixture_fails_at_the_orbit_check() {
    let good = include_str!("../../core/data/fixtures.toml");
    let bad = good.replacen(r#"["0", "-2", "2", "-1"]"#, r#"["0", "-1", "2", "-1"]"#, 1);
    assert_ne!(good, bad);
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("fixtures.toml");
    std::fs::write(&f, bad).unwrap();
    let o = hb(&[
        "--json",
        "selfcheck",
        "--profile",
        "full",
        "--only",
        "F4",
        "--fixtures",
        p(&f),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stderr(&o).contains("failed: F4 orbit size = 24"),
        "{}",
        stderr(&o)
    );
    let v = json(&o);
    let orbit = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "F4 orbit size = 24")
        .unwrap();
    assert_eq!(orbit["status"], "fail");
    assert_eq!(orbit["computed"], "5");

    let o = hb(&[
        "selfcheck",
        "--profile",
        "full",
        "--only",
        "F4",
        "--fixtures",
        p(dir.path().join("none.toml").as_path()),
    ]);
    assert_eq!(o.status.code(), Some(1));
}
