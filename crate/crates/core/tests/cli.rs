use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use caustics::config::KEYS;

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("caustics-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    dir
}

/// File contents without the echoed output directory.
fn body(path: PathBuf) -> String {
    let text = fs::read_to_string(path).unwrap();
    text.lines().filter(|l| !l.contains(" output ")).map(|l| format!("{l}\n")).collect()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_caustics")).arg("run").args(args).output().unwrap()
}

#[test]
fn spin_evolution_is_deterministic_and_echoes_config() {
    let (a, b) = (scratch("det-a"), scratch("det-b"));
    for dir in [&a, &b] {
        let out = run(&[
            "--model",
            "rotor",
            "--mode",
            "spin-evolution",
            "--K",
            "2.4",
            "--steps",
            "20",
            "-o",
            dir.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    assert!(body(a.join("spin_evolution.csv")) == body(b.join("spin_evolution.csv")));

    let text = fs::read_to_string(a.join("spin_evolution.csv")).unwrap();
    let header: Vec<&str> = text.lines().take_while(|l| l.starts_with("# ")).collect();
    assert_eq!(header.len(), KEYS.len());
    for (line, key) in header.iter().zip(KEYS) {
        assert!(line.starts_with(&format!("# {key} = ")), "{line}");
    }
    assert!(header.contains(&"# kick = 2.4"));
    let rows = text.lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(rows, 1 + 21);
}

#[test]
fn threads_do_not_change_output() {
    let dirs = [scratch("thr-1"), scratch("thr-4")];
    for (dir, n) in dirs.iter().zip(["1", "4"]) {
        let out = Command::new(env!("CARGO_BIN_EXE_caustics"))
            .env("CAUSTICS_THREADS", n)
            .args(["run", "--model", "rotor", "--mode", "domain-d", "--set", "nx=24", "--set", "ny=24", "-o"])
            .arg(dir)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    assert!(body(dirs[0].join("domain_d.grid")) == body(dirs[1].join("domain_d.grid")));
}

#[test]
fn config_errors_exit_with_code_two() {
    let dir = scratch("err");
    let cases: [&[&str]; 4] =
        [&["--model", "rotor", "--mode", "husimi"], &["--set", "colour=blue"], &["--hbar=-1"], &["--set", "nonsense"]];
    for args in cases {
        let mut full = args.to_vec();
        full.extend(["-o", dir.to_str().unwrap()]);
        let out = run(&full);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert!(err.contains("\"exit_code\":2"), "{err}");
    }
}

#[test]
fn config_file_and_flag_override() {
    let dir = scratch("file");
    fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.cfg");
    fs::write(&cfg, "# rotor run\nmodel = rotor\nmode = spin-evolution\nkick = 0.4\nsteps = 5\n").unwrap();
    let out = run(&["--config", cfg.to_str().unwrap(), "--steps", "3", "-o", dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.join("spin_evolution.csv")).unwrap();
    assert!(text.contains("# steps = 3"));
    assert!(text.contains("# kick = 0.4"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 1 + 4);
}
