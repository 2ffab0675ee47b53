use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(seed: &str, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cluster-torsor"))
        .arg(data(seed))
        .args(args)
        .env_remove("CLUSTER_TORSOR_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn pic_of_k() {
    let o = run("k.json", &["pic"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Z/2"));
}

#[test]
fn validate_names_the_violation() {
    let o = run("not_saturated.json", &["validate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("saturated"));
    assert_eq!(run("a2.json", &["validate"]).status.code(), Some(0));
}

#[test]
fn other_commands_reject_invalid_seeds() {
    let o = run("not_saturated.json", &["pic"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("saturated"));
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\"rank\": 2,").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_cluster-torsor")).arg(&path).arg("pic").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(run("a2.json", &["sections", "--degree", "1,2,3"]).status.code(), Some(2));
}

#[test]
fn utor_trials_pass() {
    let o = run("a2.json", &["verify-utor", "--trials", "100"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn json_reports_are_deterministic() {
    let args = ["verify-utor", "--trials", "30", "--rng-seed", "5", "--format", "json"];
    let a = run("k.json", &args);
    let b = run("k.json", &args);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["parameters"]["config"]["rng_seed"], 5);
    assert_eq!(v["parameters"]["config"]["box_radius"], 3);
    assert_eq!(v["pass"], true);
}

#[test]
fn theta_with_cache_matches_cold_run() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["theta", "--q", "-1,-1,0,0", "--order", "6", "--format", "json"];
    let cold = run("a2.json", &args);
    let warm1 = Command::new(env!("CARGO_BIN_EXE_cluster-torsor"))
        .arg(data("a2.json"))
        .args(args)
        .env("CLUSTER_TORSOR_CACHE", dir.path())
        .output()
        .unwrap();
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    let warm2 = Command::new(env!("CARGO_BIN_EXE_cluster-torsor"))
        .arg(data("a2.json"))
        .args(args)
        .arg("--cache-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(cold.status.code(), Some(0));
    let parse = |o: &Output| serde_json::from_slice::<serde_json::Value>(&o.stdout).unwrap();
    assert_eq!(parse(&cold), parse(&warm1));
    assert_eq!(parse(&cold), parse(&warm2));
    let v = parse(&cold);
    assert_eq!(v["witnesses"][0]["exact"], true);
    assert_eq!(v["witnesses"][0]["xi"], true);
}

#[test]
fn mutate_and_cartier_and_sections() {
    let o = run("a2.json", &["mutate", "--path", "1,2,1,2,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"exchange_matrix\":[[0,-1],[1,0]]"));
    let fan = data("singular_fan.json");
    let o = run("singular.json", &["cartier", "--fan", fan.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"index\":\"2\""));
    let o = run("a1f.json", &["sections", "--degree", "0,1", "--box-radius", "1"]);
    assert!(stdout(&o).contains("\"count\":6"));
}

#[test]
fn verify_r_and_theta_basis() {
    let o = run("a1f.json", &["verify-r", "--degree", "0,-1", "--box-radius", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = run("a1f.json", &["theta-basis", "--lambda", "0,0", "--box-radius", "2", "--order", "6"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("independent sections"));
}
