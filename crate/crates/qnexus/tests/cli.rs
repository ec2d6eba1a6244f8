//! End-to-end runs of the `qnexus` binary.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qnexus::config::parse_arch;
use qnexus_core::arch::{all_builtins, builtin_architecture};
use qnexus_core::resources::count_architecture;
use serde_json::Value;
use tempfile::TempDir;

fn qnexus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qnexus")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn files(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.is_file())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect()
}

fn json(path: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn run_writes_summary_schedule_and_budget() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("out");
    let o = qnexus(&["run", "--workload", "aqft:n=100", "--arch", "A1", "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["summary.json", "schedule.txt", "budget.csv", "resources.csv", "arch.toml"] {
        assert!(out.join(f).is_file(), "{f}");
    }
    let v = json(&out.join("summary.json"));
    assert_eq!(v["arch"], "A1");
    assert_eq!(v["logical_qubits_count"], 100);
    assert_eq!(v["swap_count"], 0);
    let lines = std::fs::read_to_string(out.join("schedule.txt")).unwrap().lines().count();
    assert_eq!(v["events_count"].as_u64().unwrap() as usize, lines);
}

#[test]
fn identical_runs_are_byte_identical() {
    let tmp = TempDir::new().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for dir in [&a, &b] {
        let o = qnexus(&["run", "--workload", "hubbard:lx=3,ly=2", "--arch", "A2", "--out", s(dir)]);
        assert_eq!(code(&o), 0);
    }
    let fa = files(&a);
    assert_eq!(fa.len(), 5);
    assert_eq!(fa, files(&b));
}

#[test]
fn rsa_on_b2_takes_nine_days() {
    let tmp = TempDir::new().unwrap();
    let o = qnexus(&["run", "--workload", "rsa", "--arch", "B2", "--out", s(tmp.path())]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&tmp.path().join("rsa.json"));
    let days = v["runtime_days"].as_f64().unwrap();
    assert!((days - 9.2).abs() / 9.2 < 0.005, "{days}");
    assert_eq!(v["tabulated"]["fidelity_prob"], 0.954);
    assert_eq!(v["resources"]["qubits_total_count"].as_u64().unwrap(), 380_912);
    for name in ["adder", "lookup", "phaseup"] {
        assert!(tmp.path().join(format!("schedule_{name}.txt")).is_file());
    }

    let pinned = qnexus(&[
        "run",
        "--workload",
        "rsa",
        "--arch",
        "B2",
        "--fidelity",
        "0.5",
        "--format",
        "json",
        "--out",
        s(&tmp.path().join("f")),
    ]);
    assert_eq!(code(&pinned), 0);
    let v = json(&tmp.path().join("f/rsa.json"));
    assert!((v["runtime_days"].as_f64().unwrap() - days * 0.954 / 0.5).abs() < 1e-9);
    assert_eq!(v["compiled"]["fidelity_prob"], 0.5);
}

#[test]
fn distance_override_on_a_config_file() {
    let tmp = TempDir::new().unwrap();
    let file = configs().join("A1.toml");
    let o = qnexus(&[
        "run",
        "--workload",
        "aqft:n=20",
        "--arch",
        s(&file),
        "--override",
        "qpu.d=21",
        "--out",
        s(tmp.path()),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&tmp.path().join("summary.json"));

    let mut spec = builtin_architecture("A1").unwrap();
    spec.modules.iter_mut().find(|m| m.id == "qpu").unwrap().code.distance = 21;
    let rc = count_architecture(&spec).unwrap();
    let r = &v["resources"];
    assert_eq!(r["qubits_total_count"].as_u64().unwrap(), rc.total_qubits());
    assert_eq!(r["couplers_local_count"].as_u64().unwrap(), rc.couplers_local);
    assert_eq!(r["interconnects_count"].as_u64().unwrap(), rc.interconnects);
    // Three processor patches of 2 * 21^2 physical qubits each.
    assert_eq!(r["breakdown"]["logical_count"].as_u64().unwrap(), 3 * 2 * 21 * 21);
    let base = count_architecture(&builtin_architecture("A1").unwrap()).unwrap();
    assert_ne!(r["qubits_total_count"].as_u64().unwrap(), base.total_qubits());

    let arch = std::fs::read_to_string(tmp.path().join("arch.toml")).unwrap();
    assert_eq!(parse_arch(&arch, "arch.toml").unwrap(), spec);
}

#[test]
fn exit_codes() {
    let tmp = TempDir::new().unwrap();
    let out = s(tmp.path());
    let run = |extra: &[&str]| {
        let mut args = vec!["run", "--out", out];
        args.extend_from_slice(extra);
        code(&qnexus(&args))
    };
    assert_eq!(run(&["--workload", "aqft:n=4", "--arch", "no/such.toml"]), 2);
    assert_eq!(run(&["--workload", "aqft:n=4", "--arch", "A1", "--override", "qpu.nope=1"]), 2);
    assert_eq!(run(&["--workload", "aqft:n=4", "--arch", "A1", "--override", "d=1"]), 2);
    assert_eq!(run(&["--workload", "qft:n=4", "--arch", "A1"]), 2);
    assert_eq!(run(&["--workload", "rsa", "--arch", "B2", "--fidelity", "1.5"]), 2);
    assert_eq!(run(&["--workload", "aqft:n=4", "--arch", "A1", "--override", "qpu.p=0.5"]), 3);
    assert_eq!(run(&["--workload", "aqft:n=1500", "--arch", "A1"]), 4);
    assert_eq!(run(&["--workload", "aqft:n=4", "--arch", "A1"]), 0);

    let broken = tmp.path().join("broken.toml");
    std::fs::write(&broken, "name = 3\n").unwrap();
    assert_eq!(run(&["--workload", "aqft:n=4", "--arch", s(&broken)]), 2);
    assert_eq!(code(&qnexus(&["arch", "validate", "A1", "--override", "qpu.p=0.5"])), 3);
    assert_eq!(code(&qnexus(&["arch", "validate", "B6"])), 0);
}

#[test]
fn circuit_files_run() {
    let tmp = TempDir::new().unwrap();
    let circuit = tmp.path().join("bell.txt");
    std::fs::write(&circuit, "name bell\nqubits 2\nH q0\nCNOT q0 q1\n").unwrap();
    let workload = format!("file:{}", s(&circuit));
    let o = qnexus(&["run", "--workload", &workload, "--arch", "A1", "--format", "json", "--out", s(tmp.path())]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&tmp.path().join("summary.json"));
    assert_eq!(v["cnot_count"], 1);
    assert_eq!(v["ops_count"], 2);
}

#[test]
fn single_cell_sweep_matches_run() {
    let tmp = TempDir::new().unwrap();
    let sweep = tmp.path().join("sweep");
    let o = qnexus(&["sweep", "--workload", "aqft:k=4", "--sizes", "10", "--arch", "A2", "--out", s(&sweep)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let run = tmp.path().join("run");
    let o = qnexus(&["run", "--workload", "aqft:n=10,k=4", "--arch", "A2", "--fit", "--out", s(&run)]);
    assert_eq!(code(&o), 0);
    assert_eq!(files(&sweep.join("cells/10_A2")), files(&run));
}

#[test]
fn invalid_arch_is_flagged_and_the_rest_complete() {
    let tmp = TempDir::new().unwrap();
    let o = qnexus(&[
        "sweep",
        "--workload",
        "aqft:k=4",
        "--sizes",
        "6,12",
        "--arch",
        "baseline1000,bogus,A1",
        "--jobs",
        "3",
        "--out",
        s(tmp.path()),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(tmp.path().join("comparison.csv")).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 6);
    for r in &rows {
        let expected = if &r[1] == "bogus" { "error" } else { "ok" };
        assert_eq!(&r[3], expected, "{r:?}");
    }
    assert!(tmp.path().join("cells/12_A1/summary.json").is_file());
    assert!(!tmp.path().join("cells/12_bogus").exists());
}

#[test]
fn sweep_output_does_not_depend_on_jobs() {
    let tmp = TempDir::new().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for (dir, jobs) in [(&a, "1"), (&b, "4")] {
        let o = qnexus(&[
            "sweep",
            "--workload",
            "adder",
            "--sizes",
            "2,3,4",
            "--arch",
            "baseline1000,A1,A2",
            "--jobs",
            jobs,
            "--format",
            "csv",
            "--out",
            s(dir),
        ]);
        assert_eq!(code(&o), 0);
    }
    assert_eq!(files(&a), files(&b));
    assert_eq!(files(&a.join("cells/3_A1")), files(&b.join("cells/3_A1")));
}

#[test]
fn error_ratio_grows_with_size() {
    let tmp = TempDir::new().unwrap();
    let o = qnexus(&[
        "sweep",
        "--workload",
        "aqft:k=8",
        "--range",
        "6..120",
        "--points",
        "4",
        "--arch",
        "baseline1000,A1",
        "--jobs",
        "4",
        "--format",
        "csv",
        "--out",
        s(tmp.path()),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(tmp.path().join("comparison.csv")).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let ratios: Vec<f64> =
        rdr.records().map(|r| r.unwrap()).filter(|r| &r[1] == "A1").map(|r| r[9].parse().unwrap()).collect();
    assert_eq!(ratios.len(), 4);
    assert!(ratios.windows(2).all(|w| w[1] > w[0]), "{ratios:?}");
}

#[test]
fn shipped_configs_match_builtins() {
    for (name, spec) in all_builtins() {
        let path = configs().join(format!("{name}.toml"));
        let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(parse_arch(&text, &name).unwrap(), spec, "{name}");
        let o = qnexus(&["arch", "show", &name]);
        assert!(text.ends_with(&*String::from_utf8(o.stdout).unwrap()), "{name}");
    }
}
