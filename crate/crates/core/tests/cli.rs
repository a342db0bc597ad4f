use std::path::Path;
use std::process::{Command, Output};

use lefschetz::planner::EmbeddingCertificate;

fn lefschetz(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lefschetz")).args(args).current_dir(dir).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn plan_and_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&lefschetz(&["models", "genus2-chain", "--out", "g.json"], d)), 0);
    assert_eq!(code(&lefschetz(&["validate", "g.json"], d)), 0);

    let o = lefschetz(&["plan", "g.json", "--target", "closed", "--out", "c1.json"], d);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(code(&lefschetz(&["plan", "g.json", "--target", "closed", "--out", "c2.json"], d)), 0);
    let a = std::fs::read(d.join("c1.json")).unwrap();
    assert_eq!(a, std::fs::read(d.join("c2.json")).unwrap());
    let o = lefschetz(&["verify", "c1.json"], d);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("30 entries"));

    let mut cert = EmbeddingCertificate::from_json(std::str::from_utf8(&a).unwrap()).unwrap();
    cert.per_cycle[17].class = cert.per_cycle[16].class.clone();
    std::fs::write(d.join("bad.json"), cert.to_json()).unwrap();
    let o = lefschetz(&["verify", "bad.json"], d);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("entry 17"), "{}", stderr(&o));
}

#[test]
fn torus_is_rejected_with_the_genus_message() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&lefschetz(&["models", "torus22", "--out", "t.json"], d)), 0);
    let o = lefschetz(&["plan", "t.json", "--target", "closed", "--out", "c.json"], d);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("genus ≥ 2 required"), "{}", stderr(&o));
    assert!(!d.join("c.json").exists());
}

#[test]
fn weinstein_with_identification_words() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let text = r#"{
  "label": "w",
  "base": "disk",
  "fiber": { "genus": 3, "boundary": 1 },
  "system": "humphries",
  "cycles": ["a1", "b2", { "name": "x", "class": [1, 0, 1, 1, 0, 0] }],
  "words": ["a1 d b2 d d^-1 d"]
}"#;
    std::fs::write(d.join("w.json"), text).unwrap();
    let o =
        lefschetz(&["plan", "w.json", "--target", "weinstein", "--out", "c.json", "--prime", "3", "--cap", "1000"], d);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let cert = EmbeddingCertificate::from_json(&std::fs::read_to_string(d.join("c.json")).unwrap()).unwrap();
    let b = &cert.global.boundary_discipline[0];
    assert_eq!((b.boundary_exponent, b.psi.as_str(), b.d_free), (2, "a1 b2", true));
    assert!(cert.global.flexibility.entries[0].is_inconclusive());
    assert_eq!(code(&lefschetz(&["verify", "c.json"], d)), 0);
    assert_eq!(code(&lefschetz(&["plan", "w.json", "--target", "closed", "--out", "c.json"], d)), 2);
}

#[test]
fn inessential_cycles_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let text = r#"{"base":"disk","fiber":{"genus":2,"boundary":1},"cycles":[{"class":[1,0,0,0]},{"class":[0,0,0,0]}]}"#;
    std::fs::write(d.join("f.json"), text).unwrap();
    let o = lefschetz(&["validate", "f.json"], d);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("inessential"), "{}", stderr(&o));
    let o = lefschetz(&["plan", "f.json", "--target", "weinstein", "--out", "c.json"], d);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("not-simplified"));
}

#[test]
fn malformed_input_exits_one_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("f.json"), "{\n  \"base\": \"disk\",\n  \"fiber\": [\n}").unwrap();
    let o = lefschetz(&["validate", "f.json"], d);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));
    std::fs::write(d.join("c.json"), "{\"format\": 3}").unwrap();
    assert_eq!(code(&lefschetz(&["verify", "c.json"], d)), 1);
    assert_eq!(code(&lefschetz(&["verify", "missing.json"], d)), 1);
    assert_eq!(code(&lefschetz(&["plan", "f.json", "--target", "sideways", "--out", "x"], d)), 1);
}

#[test]
fn spcheck_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&lefschetz(&["models", "dl3", "--genus", "2", "--out", "d.json"], d)), 0);
    let o = lefschetz(&["spcheck", "d.json", "--prime", "3"], d);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("51840"));
    let o = lefschetz(&["spcheck", "d.json", "--prime", "2"], d);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stdout).contains("order 120"));
    assert_eq!(code(&lefschetz(&["spcheck", "d.json", "--prime", "4"], d)), 2);
}

#[test]
fn hurwitz_left_then_right_restores_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&lefschetz(&["models", "genus2-chain", "--out", "g.json"], d)), 0);
    assert_eq!(code(&lefschetz(&["hurwitz", "g.json", "--index", "3", "--dir", "left", "--out", "l.json"], d)), 0);
    assert_eq!(code(&lefschetz(&["hurwitz", "l.json", "--index", "3", "--dir", "right", "--out", "r.json"], d)), 0);
    let original = lefschetz::cli::parse_fibration(&std::fs::read_to_string(d.join("g.json")).unwrap()).unwrap();
    let moved = lefschetz::cli::parse_fibration(&std::fs::read_to_string(d.join("l.json")).unwrap()).unwrap();
    let back = lefschetz::cli::parse_fibration(&std::fs::read_to_string(d.join("r.json")).unwrap()).unwrap();
    assert_ne!(moved.data, original.data);
    assert_eq!(moved.data.total_monodromy(), original.data.total_monodromy());
    assert_eq!(back.data, original.data);
    // The moved fibration is still a valid closed source.
    assert_eq!(code(&lefschetz(&["plan", "l.json", "--target", "closed", "--out", "c.json"], d)), 0);
    assert_eq!(code(&lefschetz(&["verify", "c.json"], d)), 0);

    let o = lefschetz(&["hurwitz", "g.json", "--index", "29", "--dir", "left"], d);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("index-out-of-range"));
}

#[test]
fn sphere_without_closure_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let text = r#"{"base":"sphere","fiber":{"genus":1,"boundary":0},"system":"torus","cycles":["a","b"]}"#;
    std::fs::write(d.join("f.json"), text).unwrap();
    let o = lefschetz(&["validate", "f.json"], d);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("not the identity"));
    let text = text.replace("sphere", "disk");
    std::fs::write(d.join("f.json"), text).unwrap();
    assert_eq!(code(&lefschetz(&["validate", "f.json"], d)), 0);
}

#[test]
fn transposed_conjugator_and_empty_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&lefschetz(&["models", "genus2-chain", "--out", "g.json"], d)), 0);
    assert_eq!(code(&lefschetz(&["plan", "g.json", "--target", "closed", "--out", "c.json"], d)), 0);
    let cert = EmbeddingCertificate::from_json(&std::fs::read_to_string(d.join("c.json")).unwrap()).unwrap();

    // A symmetric conjugator is its own transpose, so pick one that is not.
    let i = cert.per_cycle.iter().position(|e| e.conjugator.transpose() != e.conjugator).unwrap();
    let mut bad = cert.clone();
    bad.per_cycle[i].conjugator = bad.per_cycle[i].conjugator.transpose();
    std::fs::write(d.join("bad.json"), bad.to_json()).unwrap();
    let o = lefschetz(&["verify", "bad.json"], d);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains(&format!("entry {i}:")), "{}", stderr(&o));

    let mut empty = cert;
    empty.per_cycle.clear();
    std::fs::write(d.join("empty.json"), empty.to_json()).unwrap();
    let o = lefschetz(&["verify", "empty.json"], d);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}

#[test]
fn dl3_reference_entry_has_identity_conjugator() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&lefschetz(&["models", "dl3", "--genus", "3", "--out", "d.json"], d)), 0);
    assert_eq!(code(&lefschetz(&["plan", "d.json", "--target", "weinstein", "--out", "c.json"], d)), 0);
    let cert = EmbeddingCertificate::from_json(&std::fs::read_to_string(d.join("c.json")).unwrap()).unwrap();
    let names: Vec<&str> = cert.per_cycle.iter().map(|e| e.name.as_str()).collect();
    assert_eq!(names, ["c1", "c2", "a1", "b1", "a2", "b2", "a3"]);
    assert!(cert.per_cycle[2].conjugator.is_identity());
    assert!(cert.global.flexibility.all_full());
    assert_eq!(code(&lefschetz(&["verify", "c.json"], d)), 0);
}
