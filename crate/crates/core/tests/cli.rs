use std::process::Command;

use msp_cs::io::{read_matrix_file, write_matrix_file};
use msp_cs::ComplexMatrix;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_msp-cs"))
}

fn stdout(cmd: &mut Command) -> String {
    let out = cmd.output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn rip_on_identity_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let phi = dir.path().join("phi.csmat");
    write_matrix_file(&phi, &ComplexMatrix::identity(6)).unwrap();
    let out = stdout(
        bin()
            .arg("rip")
            .arg("--matrix")
            .arg(&phi)
            .args(["--k", "2", "--d", "2"]),
    );
    let delta: f64 = out.trim().strip_prefix("delta=").unwrap().parse().unwrap();
    assert!(delta.abs() < 1e-12);
}

#[test]
fn recover_finds_identity_support() {
    let dir = tempfile::tempdir().unwrap();
    let (phi, y, x) = (dir.path().join("phi"), dir.path().join("y"), dir.path().join("x"));
    write_matrix_file(&phi, &ComplexMatrix::identity(12)).unwrap();
    let mut entries = vec![0.0; 12];
    entries[0] = 3.0;
    entries[4] = 2.0;
    entries[8] = 1.0;
    write_matrix_file(&y, &ComplexMatrix::from_real_rows(12, 1, &entries).unwrap()).unwrap();
    let out = stdout(
        bin()
            .arg("recover")
            .arg("--y")
            .arg(&y)
            .arg("--phi")
            .arg(&phi)
            .args([
                "--algorithm",
                "cmsp",
                "--s-bar",
                "3",
                "--t0",
                "1,2,3",
                "--s-c",
                "2",
                "--out",
            ])
            .arg(&x),
    );
    assert!(out.starts_with("t_hat=[1,5,9]\n"), "{out}");
    assert!(out.contains("stop_reason=ThresholdMet"), "{out}");
    let x_hat = read_matrix_file(&x).unwrap();
    assert!((x_hat.get(4, 0).re - 2.0).abs() < 1e-12);
}

#[test]
fn bounds_reports_constants() {
    let out = stdout(bin().args([
        "bounds", "--delta", "0.1", "--s-bar", "3", "--s-c", "1", "--eta", "0.1", "--gamma", "1",
    ]));
    assert!(out.contains("cmsp.C5="), "{out}");
    assert!(out.contains("cmsp.distortion_bound"), "{out}");
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "sweep_axis = snr_db\nsweep_values = 10\nbogus = 1\n").unwrap();
    let out = bin()
        .arg("sweep")
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("o.csv"))
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));
}
