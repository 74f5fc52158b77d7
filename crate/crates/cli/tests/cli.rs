use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

fn wstate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wstate"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_passes_on_clean_build() {
    let o = wstate(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report = stdout(&o);
    assert!(report.contains("0 failures"));
    let w6 = report.lines().find(|l| l.contains("doubling W_6")).unwrap();
    assert!(w6.starts_with("PASS"));
    assert!(!report.contains("FAIL"));
}

#[test]
fn verify_names_matrix_check_under_fault() {
    let o = wstate(&["verify", "--fault-tprime", "0.001"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("first failure 'expansion-matrix'"));
    let first_fail = stdout(&o)
        .lines()
        .find(|l| l.starts_with("FAIL"))
        .unwrap()
        .to_owned();
    assert!(first_fail.contains("expansion-matrix"));
}

#[test]
fn prepare_spin_rendering() {
    let o = wstate(&["prepare", "--n", "2", "--role", "spin"]);
    assert_eq!(o.status.code(), Some(0));
    let summary = stderr(&o);
    assert!(
        summary.contains("(|−+++⟩+|+−++⟩+|++−+⟩+|+++−⟩)/√4"),
        "{summary}"
    );
    let dump = stdout(&o);
    let r = rows(&dump);
    assert_eq!(r.len(), 4);
    let first = r.iter().find(|row| row[2] == "−+++").unwrap();
    assert!((num(&first[3]) - 0.5).abs() < 1e-15);
}

#[test]
fn prepare_n1_is_epr() {
    let o = wstate(&["prepare", "--n", "1"]);
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 2);
    assert_eq!((r[0][1].as_str(), r[1][1].as_str()), ("01", "10"));
    assert!(stderr(&o).contains("(|LR⟩+|RL⟩)/√2"));
}

#[test]
fn prepare_reports_caps() {
    let o = wstate(&["prepare", "--n", "7", "--mode", "block"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("block mode supports n ≤ 6, got n = 7"));
    let o = wstate(&["prepare", "--n", "9", "--mode", "sequential"]);
    assert!(stderr(&o).contains("sequential mode supports n ≤ 8"));
}

#[test]
fn schedules_dump_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    for mode in ["block", "sequential"] {
        for n in ["1", "2", "3", "4"] {
            let serial = dir.path().join(format!("{mode}-{n}-serial.csv"));
            let parallel = dir.path().join(format!("{mode}-{n}-parallel.csv"));
            for (schedule, out) in [("serial", &serial), ("parallel", &parallel)] {
                let o = wstate(&[
                    "prepare",
                    "--n",
                    n,
                    "--mode",
                    mode,
                    "--schedule",
                    schedule,
                    "--out",
                    path_str(out),
                ]);
                assert_eq!(o.status.code(), Some(0));
            }
            assert_eq!(
                std::fs::read(&serial).unwrap(),
                std::fs::read(&parallel).unwrap()
            );
        }
    }
}

#[test]
fn fidelity_sweep_rows() {
    let o = wstate(&["fidelity-sweep"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    assert!(csv.starts_with("theta,f_h,f_tp,f_cp,f_combined,f_simulated,n\n"));
    let r = rows(&csv);
    assert_eq!(r.len(), 200);
    assert_eq!(num(&r[0][0]), 0.0);
    for v in &r[0][1..5] {
        assert_eq!(num(v), 1.0);
    }
    assert!((num(&r[0][5]) - 1.0).abs() < 1e-12);
    let last = r.last().unwrap();
    assert_eq!(num(&last[0]), PI / 60.0);
    assert!(num(&last[4]) > 0.97);
    for row in &r {
        assert!((num(&row[4]) - num(&row[5])).abs() < 1e-9);
        assert_eq!(row[6], "2");
    }
}

#[test]
fn sweeps_are_deterministic() {
    for args in [
        &["fidelity-sweep", "--steps", "50", "--n", "3"][..],
        &["cavity-sweep", "--g-steps", "21"][..],
    ] {
        assert_eq!(wstate(args).stdout, wstate(args).stdout);
    }
}

#[test]
fn cavity_sweep_rows() {
    let o = wstate(&["cavity-sweep"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    assert!(csv.starts_with("detuning,g_ratio,re_r,im_r,phi,phi_0,cz_pass\n"));
    let r = rows(&csv);
    let at = |d: f64, g: f64| {
        r.iter()
            .find(|row| num(&row[0]) == d && num(&row[1]) == g)
            .unwrap()
    };
    let g5 = at(0.0, 5.0);
    assert_eq!(num(&g5[4]), 0.0);
    assert_eq!(num(&g5[5]), PI);
    for row in r
        .iter()
        .filter(|row| num(&row[1]) == 0.0 && num(&row[0]) == 0.0)
    {
        assert_eq!(num(&row[2]), -1.0);
    }
    let resonant: Vec<&str> = r
        .iter()
        .filter(|row| num(&row[0]) == 0.0)
        .map(|row| row[6].as_str())
        .collect();
    let transitions = resonant.windows(2).filter(|w| w[0] != w[1]).count();
    assert_eq!(transitions, 1);
    assert_eq!(resonant.first(), Some(&"false"));
    assert_eq!(resonant.last(), Some(&"true"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "n = 3\nrole = \"spin\"\nsteps = 7\n").unwrap();
    let o = wstate(&["prepare", "--config", path_str(&cfg), "--n", "1"]);
    assert_eq!(rows(&stdout(&o)).len(), 2);
    assert!(stderr(&o).contains("(|−+⟩+|+−⟩)/√2"));

    let o = wstate(&["fidelity-sweep", "--config", path_str(&cfg)]);
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 7);
    assert_eq!(r[0][6], "3");

    std::fs::write(&cfg, "nn = 3\n").unwrap();
    let o = wstate(&["prepare", "--config", path_str(&cfg)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("invalid config"));
}

#[test]
fn rejects_short_sweep() {
    let o = wstate(&["fidelity-sweep", "--steps", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("at least 2 steps"));
}

#[test]
fn out_flag_writes_file_and_prints_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w4.csv");
    let o = wstate(&["prepare", "--out", path_str(&out)]);
    let summary = stdout(&o);
    let f = summary
        .lines()
        .find_map(|l| l.strip_prefix("fidelity "))
        .unwrap();
    assert!((num(f) - 1.0).abs() < 1e-12);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("index,bits,label,re,im\n"));
    assert!(!text.contains('\r'));
}
