//! End-to-end runs of the binary: generate → solve → verify pipelines and
//! the exit-code contract (0 ok, 1 validation failure, 2 bound violation).

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tricds"))
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("tricds-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn gen_solve_verify_pipeline() {
    let graph = tmp("g.rot");
    let cert = tmp("c.json");
    let tree = tmp("t.tree");
    let status = bin()
        .args(["gen", "--type", "random", "--n", "500", "--seed", "7", "-o"])
        .arg(&graph)
        .status()
        .unwrap();
    assert!(status.success());
    let out = bin()
        .args(["solve", "--algo", "better"])
        .arg(&graph)
        .arg("--cert")
        .arg(&cert)
        .arg("--tree")
        .arg(&tree)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("|X|="), "{stdout}");
    let status = bin().arg("verify").arg(&graph).arg(&cert).status().unwrap();
    assert!(status.success());
    // tamper with the certificate: claim fewer vertices
    let text = std::fs::read_to_string(&cert).unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    let xs = doc["X"].as_array().unwrap().clone();
    doc["X"] = serde_json::Value::Array(xs[..xs.len() - 1].to_vec());
    std::fs::write(&cert, doc.to_string()).unwrap();
    let status = bin().arg("verify").arg(&graph).arg(&cert).status().unwrap();
    assert_eq!(status.code(), Some(1));
    for p in [graph, cert, tree] {
        let _ = std::fs::remove_file(p);
    }
}

#[test]
fn reference_engine_matches() {
    let graph = tmp("ref.rot");
    assert!(bin()
        .args(["gen", "--type", "nested", "--k", "5", "-o"])
        .arg(&graph)
        .status()
        .unwrap()
        .success());
    let a = bin()
        .args(["solve", "--algo", "better", "--engine", "incremental"])
        .arg(&graph)
        .output()
        .unwrap();
    let b = bin()
        .args(["solve", "--algo", "better", "--engine", "reference"])
        .arg(&graph)
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    let _ = std::fs::remove_file(graph);
}

#[test]
fn oracle_and_surface() {
    let graph = tmp("oct.rot");
    assert!(bin()
        .args(["gen", "--type", "nested", "--k", "2", "-o"])
        .arg(&graph)
        .status()
        .unwrap()
        .success());
    let out = bin().arg("oracle").arg(&graph).output().unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("oracle emits JSON");
    assert_eq!(doc["min_cds"], 2);
    assert_eq!(doc["max_leaf"], 4);
    assert_eq!(doc["max_outerplane"], 4);
    let torus = tmp("torus.rot");
    assert!(bin()
        .args(["gen", "--type", "torus", "--k", "5", "-o"])
        .arg(&torus)
        .status()
        .unwrap()
        .success());
    let out = bin().arg("surface-solve").arg(&torus).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("genus=2"));
    for p in [graph, torus] {
        let _ = std::fs::remove_file(p);
    }
}

#[test]
fn draw_and_bench() {
    let graph = tmp("draw.rot");
    let svg = tmp("draw.svg");
    assert!(bin()
        .args(["gen", "--type", "gh", "-o"])
        .arg(&graph)
        .status()
        .unwrap()
        .success());
    assert!(bin()
        .arg("draw")
        .arg(&graph)
        .args(["--tree", "--curve", "-o"])
        .arg(&svg)
        .status()
        .unwrap()
        .success());
    let content = std::fs::read_to_string(&svg).unwrap();
    assert!(content.starts_with("<svg"));
    assert!(content.contains("polyline"));
    let out = bin()
        .args(["bench", "--sizes", "200,400", "--seeds", "2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("n,seed,algo,x,bound,ratio,ms"));
    assert_eq!(text.lines().count(), 1 + 2 * 2 * 2);
    for p in [graph, svg] {
        let _ = std::fs::remove_file(p);
    }
}
