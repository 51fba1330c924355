use std::process::{Command, Output};

use serde_json::Value;

fn syzygy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_syzygy")).args(args).output().expect("binary runs")
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).expect("json line")).collect()
}

#[test]
fn verify_small_range_passes() {
    let out = syzygy(&["verify", "--gmin", "3", "--gmax", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let reports = lines(&out);
    let mut pairs: Vec<(u64, u64)> = reports
        .iter()
        .map(|r| (r["params"]["g"].as_u64().unwrap(), r["params"]["r"].as_u64().unwrap()))
        .collect();
    pairs.dedup();
    assert_eq!(pairs, vec![(3, 1), (4, 1), (5, 1), (5, 2), (6, 1), (6, 2)]);
    assert!(reports.iter().all(|r| r["verdict"] == "PASS"));
    assert!(reports.iter().all(|r| r["elapsed_ms"] == 0));
}

#[test]
fn verify_rejects_invalid_r() {
    let out = syzygy(&["verify", "--gmin", "4", "--gmax", "4", "--r", "2"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(syzygy(&["verify", "--gmin", "2", "--gmax", "4"]).status.code(), Some(3));
    assert_eq!(syzygy(&["verify"]).status.code(), Some(3));
}

#[test]
fn verify_dumps_petri_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.txt");
    let out = syzygy(&["verify", "--gmin", "3", "--gmax", "3", "--dump-matrix", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut it = text.lines();
    assert_eq!(it.next(), Some("6 6"));
    assert_eq!(it.count(), 6);
}

#[test]
fn modular_flags() {
    let out = syzygy(&["--mod", "1073741789,1048583", "--confirm-exact", "verify", "--gmin", "5", "--gmax", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let pq = lines(&out).into_iter().find(|r| r["task"] == "verify_pq").unwrap();
    assert_eq!(pq["params"]["r"], 1);
    assert_eq!(pq["dims"]["rank_p_mod_1048583"], 20);
    assert_eq!(pq["params"]["confirm_exact"], true);
    assert_eq!(syzygy(&["--mod", "97", "verify", "--gmin", "3", "--gmax", "3"]).status.code(), Some(3));
    assert_eq!(syzygy(&["--confirm-exact", "verify", "--gmin", "3", "--gmax", "3"]).status.code(), Some(3));
}

#[test]
fn betti_veronese_csv() {
    let out = syzygy(&["betti", "--model", "veronese", "--n", "3", "--qmax", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "q\\p,0,1,2");
    assert_eq!(rows[2], "1,0,3,2");
    assert_eq!(rows.last().copied(), Some("N₀ holds"));
}

#[test]
fn betti_hyperelliptic_json() {
    let out = syzygy(&[
        "betti", "--model", "hyperelliptic", "--g", "4", "--f", "1,1,0,0,0,0,0,0,0,0,1", "--qmax", "3", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rep = &lines(&out)[0];
    assert_eq!(rep["dims"]["K_0_2"], 2);
    assert_eq!(rep["params"]["np_verdict"], "N₀ fails");
    assert_eq!(syzygy(&["betti", "--model", "hyperelliptic", "--g", "2"]).status.code(), Some(3));
    assert_eq!(syzygy(&["betti", "--model", "veronese"]).status.code(), Some(3));
}

#[test]
fn betti_writes_table_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let out = syzygy(&["betti", "--model", "veronese", "--n", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(std::fs::read_to_string(&path).unwrap().starts_with("q\\p,0,1,2\n"));
    assert_eq!(lines(&out)[0]["task"], "betti");
}

#[test]
fn pencil_command_defaults_and_errors() {
    let out = syzygy(&["lemma22", "--g", "3", "--m", "1", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let rep = &lines(&out)[0];
    assert_eq!(rep["verdict"], "PASS");
    assert!(rep["witnesses"][0]["b"].is_string());

    let out = syzygy(&["lemma22", "--g", "3", "--m", "1", "--s0", "1,1", "--s1", "1,1", "--t", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(syzygy(&["lemma22", "--g", "4", "--m", "2"]).status.code(), Some(3));

    let out = syzygy(&["lemma22", "--g", "3", "--m", "1", "--s0", "1", "--s1", "0,1", "--t", "1", "--f", "1,1,0,0,0,0,0,0,1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(lines(&out)[0]["witnesses"][0]["b"], "-1");
}

#[test]
fn pencil_command_params_rerun() {
    let first = lines(&syzygy(&["lemma22", "--g", "5", "--m", "2", "--seed", "9"]))[0].clone();
    let p = &first["params"];
    let args: Vec<String> = ["s0", "s1", "t", "f"]
        .iter()
        .flat_map(|k| [format!("--{k}"), p[*k].as_str().unwrap().to_string()])
        .collect();
    let mut all = vec!["lemma22", "--g", "5", "--m", "2", "--seed", "9"];
    all.extend(args.iter().map(String::as_str));
    let again = &lines(&syzygy(&all))[0];
    assert_eq!(again["witnesses"], first["witnesses"]);
}

#[test]
fn prcheck_rows() {
    let out = syzygy(&["prcheck", "--gmin", "3", "--gmax", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\n3,1,3,4,1,not-surjective\n"));
    assert!(text.contains("\n4,1,4,6,2,not-surjective\n"));
    assert!(text.contains("\n4,0,1,1,0,surjective\n"));
    assert_eq!(syzygy(&["prcheck", "--gmin", "2", "--gmax", "4"]).status.code(), Some(3));
}

#[test]
fn petri_dump_to_stdout() {
    let out = syzygy(&["petri", "--g", "4", "--r", "1", "--which", "q"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("12 12\n"));
}

#[test]
fn help_exits_zero() {
    assert_eq!(syzygy(&["--help"]).status.code(), Some(0));
}
