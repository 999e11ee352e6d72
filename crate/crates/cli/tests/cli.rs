use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn eqlift(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eqlift"))
        .current_dir(dir)
        .env_remove("EQLIFT_TOL")
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&o.stdout)))
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

const INTERVAL: &str = r#"{"dim":1,"vertices":[["-1/1"],["1/1"]],"simplices":{"edges":[[0,1]]},
"action":{"group":{"order":2,"table":[[1,2],[2,1]]},"perms":{"1":[0,1],"2":[1,0]}}}"#;

const OCTAHEDRON: &str = r#"{"kind":"surface","dim":3,
"vertices":[["1"],["-1"],["0"],["0"],["0"],["0"]],
"simplices":{"triangles":[[0,2,4],[0,2,5],[0,3,4],[0,3,5],[1,2,4],[1,2,5],[1,3,4],[1,3,5]]}}"#;

fn octahedron_with(perm: &str) -> String {
    let coords = r#"[["1","0","0"],["-1","0","0"],["0","1","0"],["0","-1","0"],["0","0","1"],["0","0","-1"]]"#;
    OCTAHEDRON
        .replace(r#"[["1"],["-1"],["0"],["0"],["0"],["0"]]"#, coords)
        .replace(
            "}}",
            &format!(r#"}},"action":{{"group":"z2.json","perms":{{"1":[0,1,2,3,4,5],"2":{perm}}}}}}}"#),
        )
}

#[test]
fn group_commands() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&eqlift(d, &["group", "cyclic", "5", "-o", "z5.json"])), 0);
    let o = eqlift(d, &["group", "validate", "z5.json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["passed"], true);

    write(d, "bad.json", r#"{"order":2,"table":[[1,1],[2,1]]}"#);
    let o = eqlift(d, &["group", "validate", "bad.json"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout_json(&o)["latin_square"]["passed"], false);

    write(d, "garbage.json", "{not json");
    assert_eq!(code(&eqlift(d, &["group", "validate", "garbage.json"])), 2);
    assert_eq!(code(&eqlift(d, &["group", "validate", "missing.json"])), 2);
}

#[test]
fn lift_and_verify_interval() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(d, "interval.json", INTERVAL);
    let o = eqlift(d, &["lift", "--complex", "interval.json", "--out", "lifted.json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = stdout_json(&o);
    assert_eq!((r["m"].as_u64(), r["extended"].as_bool()), (Some(3), Some(true)));

    let rep: Value = serde_json::from_str(&std::fs::read_to_string(d.join("lifted.rep.json")).unwrap()).unwrap();
    assert_eq!(rep["m"], 3);
    assert_eq!(rep["elements"]["2"]["sigma"], serde_json::json!([2, 1]));
    assert_eq!(rep["elements"]["2"]["det"], 1);
    let lifted: Value = serde_json::from_str(&std::fs::read_to_string(d.join("lifted.json")).unwrap()).unwrap();
    assert_eq!(lifted["representation"], "lifted.rep.json");
    assert_eq!(lifted["manifest"]["command"], "lift");
    assert_eq!(lifted["manifest"]["inputs"][0]["sha256"].as_str().unwrap().len(), 64);

    let o = eqlift(d, &["lift", "verify", "--lift", "lifted.json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["special_orthogonal"], true);

    // Moving one lifted vertex breaks equivariance.
    let text = std::fs::read_to_string(d.join("lifted.json")).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["vertices"][0][0] = Value::String("7/2".into());
    std::fs::write(d.join("tampered.json"), v.to_string()).unwrap();
    let o = eqlift(d, &["lift", "verify", "--lift", "tampered.json"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout_json(&o)["equivariance"]["failures"].as_array().unwrap().len(), 2);

    let o = eqlift(d, &["lift", "matrix", "--lift", "lifted.json", "--element", "2", "-o", "r2.json"]);
    assert_eq!(code(&o), 0);
    let m: Value = serde_json::from_str(&std::fs::read_to_string(d.join("r2.json")).unwrap()).unwrap();
    assert_eq!(m[2][2], "-1/1");
    assert_eq!(code(&eqlift(d, &["lift", "matrix", "--lift", "lifted.json", "--element", "3", "-o", "x.json"])), 2);
}

#[test]
fn lift_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(d, "interval.json", INTERVAL);
    eqlift(d, &["lift", "--complex", "interval.json", "--out", "a.json"]);
    eqlift(d, &["lift", "--complex", "interval.json", "--out", "b.json"]);
    let a = std::fs::read_to_string(d.join("a.json")).unwrap().replace("a.rep.json", "X");
    let b = std::fs::read_to_string(d.join("b.json")).unwrap().replace("b.rep.json", "X");
    assert_eq!(a, b);
    assert_eq!(std::fs::read(d.join("a.rep.json")).unwrap(), std::fs::read(d.join("b.rep.json")).unwrap());
}

#[test]
fn octahedron_pipeline_and_corrupted_action() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&eqlift(d, &["group", "cyclic", "2", "-o", "z2.json"])), 0);
    write(d, "octa.json", &octahedron_with("[1,0,3,2,5,4]"));
    let o = eqlift(d, &["complex", "validate", "octa.json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let o = eqlift(d, &["pipeline", "upper", "--complex", "octa.json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["m"], 7);

    write(d, "bad_action.json", r#"{"group":"z2.json","perms":{"1":[0,1,2,3,4,5],"2":[2,0,1,3,4,5]}}"#);
    let o = eqlift(d, &["pipeline", "upper", "--complex", "octa.json", "--action", "bad_action.json"]);
    assert_eq!(code(&o), 1);
    let r = stdout_json(&o);
    assert_eq!(r["action"]["homomorphism"]["passed"], false);
    assert!(r["action"]["homomorphism"]["detail"].as_str().unwrap().contains("rho("));

    let o = eqlift(d, &["complex", "euler", "octa.json"]);
    assert_eq!(stdout_json(&o)["chi"], 2);
}

#[test]
fn broken_complex_is_a_verification_failure() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    // a square's boundary declared as a surface
    write(d, "sq.json", r#"{"kind":"surface","vertex_count":4,"simplices":{"edges":[[0,1],[1,2],[2,3],[0,3]]}}"#);
    let o = eqlift(d, &["complex", "validate", "sq.json"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout_json(&o)["valid"], false);
    // repeated vertex position
    write(d, "dup.json", r#"{"dim":1,"vertices":[["0"],["0"]],"simplices":{"edges":[[0,1]]}}"#);
    assert_eq!(code(&eqlift(d, &["complex", "validate", "dup.json"])), 1);
    write(d, "bad_rational.json", r#"{"dim":1,"vertices":[["1/0"]],"simplices":{}}"#);
    assert_eq!(code(&eqlift(d, &["complex", "validate", "bad_rational.json"])), 2);
}

#[test]
fn forge_surface_file() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = eqlift(d, &["forge", "surface", "--l", "2", "-o", "f2.json"]);
    assert_eq!(code(&o), 0);
    let f: Value = serde_json::from_str(&std::fs::read_to_string(d.join("f2.json")).unwrap()).unwrap();
    let meta = &f["metadata"];
    assert_eq!(meta["l"], 2);
    assert_eq!(meta["primes"], serde_json::json!([2, 3]));
    assert_eq!(meta["P"], 6);
    assert_eq!(meta["cone_indices"], serde_json::json!([3, 3, 2, 2]));
    assert_eq!((meta["genus"].as_i64(), meta["chi"].as_i64()), (Some(2), Some(-2)));
    assert_eq!(f["action"]["perms"].as_object().unwrap().len(), 6);
    assert!(f["manifest"].is_object());

    let o = eqlift(d, &["complex", "validate", "f2.json"]);
    assert_eq!(code(&o), 0);
    let r = stdout_json(&o);
    assert_eq!((r["euler_characteristic"].as_i64(), r["orientable"].as_bool()), (Some(-2), Some(true)));

    eqlift(d, &["forge", "surface", "--l", "2", "-o", "again.json"]);
    assert_eq!(std::fs::read(d.join("f2.json")).unwrap(), std::fs::read(d.join("again.json")).unwrap());

    let o = eqlift(d, &["forge", "surface", "--l", "1", "--coords", "-o", "f1.json"]);
    assert_eq!(code(&o), 0);
    let o = eqlift(d, &["lift", "--complex", "f1.json", "--out", "f1_lift.json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["m"], 11);
    assert_eq!(code(&eqlift(d, &["forge", "surface", "--l", "0", "-o", "x.json"])), 2);
}

#[test]
fn forge_formulas_and_pipelines() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = eqlift(d, &["forge", "hurwitz", "--genus", "3"]);
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "505");
    assert_eq!(code(&eqlift(d, &["forge", "hurwitz", "--genus", "1"])), 2);

    let o = eqlift(d, &["forge", "counterexample", "--m", "4"]);
    assert_eq!(code(&o), 0);
    let r = stdout_json(&o);
    assert_eq!((r["bound"].as_u64(), r["surface"]["genus"].as_i64()), (Some(6), Some(51)));
    assert_eq!(r["literal_misprint"]["surjective"]["passed"], false);

    assert_eq!(code(&eqlift(d, &["pipeline", "lower", "--m", "0"])), 2);
    let o = eqlift(d, &["pipeline", "lower", "--m", "2"]);
    assert_eq!(stdout_json(&o)["bound"], 4);

    let o = eqlift(d, &["pipeline", "roundtrip", "--l", "2"]);
    assert_eq!(code(&o), 0);
    let r = stdout_json(&o);
    assert_eq!((r["lower_bound"].as_u64(), r["lifted_dim"].as_u64()), (Some(4), Some(271)));
    assert_eq!(r["upper"]["equivariance"]["failures"].as_array().unwrap().len(), 0);
}

#[test]
fn certify_commands() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = eqlift(d, &["certify", "bound", "--lengths", "2,4,6"]);
    let r = stdout_json(&o);
    assert_eq!((r["l"].as_u64(), r["bound"].as_u64()), (Some(1), Some(2)));
    assert_eq!(code(&eqlift(d, &["certify", "bound", "--lengths", "1,2"])), 2);

    assert_eq!(
        code(&eqlift(d, &["certify", "tight", "--lengths", "2,3", "--matrix-out", "a.json", "--witnesses-out", "w.json"])),
        0
    );
    let o = eqlift(d, &["certify", "matrix", "--matrix", "a.json", "--witnesses", "w.json", "-o", "cert.json"]);
    assert_eq!(code(&o), 0);
    let c = stdout_json(&o);
    assert_eq!((c["m"].as_u64(), c["s"].as_u64(), c["bound"].as_u64()), (Some(4), Some(2), Some(4)));
    assert_eq!(c["verdict"], "consistent");
    assert_eq!(c["records"][0]["w"], 2);
    assert!(d.join("cert.json").exists());

    let o = eqlift(d, &["certify", "matrix", "--matrix", "a.json", "--witnesses", "w.json", "--claim-dim", "3"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout_json(&o)["verdict"]["contradiction"], "determinant_sign");

    // dense form of the same rotation, with a wrong orbit length claim
    write(d, "dense.json", "[[-1,0,0,0],[0,-1,0,0],[0,0,-0.5,-0.8660254037844386],[0,0,0.8660254037844386,-0.5]]");
    write(d, "wrong.json", r#"[{"point":[0,0,1,0],"length":4}]"#);
    assert_eq!(code(&eqlift(d, &["certify", "matrix", "--matrix", "dense.json", "--witnesses", "wrong.json"])), 1);
    write(d, "right.json", r#"[{"point":["1/1",0,0,0],"length":2},{"point":[0,0,1,0],"length":3}]"#);
    let o = eqlift(d, &["certify", "matrix", "--matrix", "dense.json", "--witnesses", "right.json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));

    write(d, "reflect.json", "[[0,1],[1,0]]");
    write(d, "w2.json", r#"[{"point":[1,0],"length":2}]"#);
    assert_eq!(code(&eqlift(d, &["certify", "matrix", "--matrix", "reflect.json", "--witnesses", "w2.json"])), 2);
}

#[test]
fn tolerance_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    eqlift(d, &["certify", "tight", "--lengths", "3", "--matrix-out", "a.json", "--witnesses-out", "w.json"]);
    let o = Command::new(env!("CARGO_BIN_EXE_eqlift"))
        .current_dir(d)
        .env("EQLIFT_TOL", "1e-7")
        .args(["certify", "matrix", "--matrix", "a.json", "--witnesses", "w.json"])
        .output()
        .unwrap();
    let c = stdout_json(&o);
    assert_eq!(c["tol"].as_f64(), Some(1e-7));
    assert_eq!(c["manifest"]["tol"].as_f64(), Some(1e-7));
    let o = Command::new(env!("CARGO_BIN_EXE_eqlift"))
        .current_dir(d)
        .env("EQLIFT_TOL", "nonsense")
        .args(["forge", "hurwitz", "--genus", "2"])
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn human_mode() {
    let dir = tempfile::tempdir().unwrap();
    let o = eqlift(dir.path(), &["--human", "forge", "counterexample", "--m", "1"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("needs dimension >= 2"), "{text}");
}
