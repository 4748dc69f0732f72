//! End-to-end checks of the binary: the documented flag surface, exit codes,
//! and byte-level determinism.

use std::fs;
use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_weylkit"))
}

fn tmpdir(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("weylkit-cli-test-{tag}-{}", std::process::id()));
    fs::create_dir_all(&d).unwrap();
    d
}

fn write_gaussian(path: &PathBuf) {
    let psi = weylkit::hilbert::Wavefunction::<f64>::gaussian(-12.0, 12.0, 256, 1.0, 0.0, 0.0);
    let mut buf = Vec::new();
    psi.0.write_csv(&mut buf).unwrap();
    fs::write(path, buf).unwrap();
}

#[test]
fn verify_subset_passes_with_exit_zero() {
    let out = bin()
        .args([
            "verify", "--suite", "ccr", "--suite", "star", "--hbar", "1.0", "--grid", "64",
        ])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["overall_pass"], serde_json::Value::Bool(true));
    // the filter must have kept only the requested families
    for c in report["checks"].as_array().unwrap() {
        let id = c["check_id"].as_str().unwrap();
        assert!(id.starts_with("ccr") || id.starts_with("star"), "{id}");
    }
}

#[test]
fn invalid_job_is_a_validation_error() {
    let dir = tmpdir("badjob");
    let job = dir.join("job.json");
    fs::write(&job, r#"{"command": "wigner", "grdi": 12}"#).unwrap();
    let out = bin().args(["run"]).arg(&job).output().unwrap();
    assert_eq!(out.status.code(), Some(2), "unknown fields must exit 2");
}

#[test]
fn unknown_map_family_is_a_validation_error() {
    let out = bin()
        .args(["kernel", "--map", "nonsense", "--grid", "32", "--domain", "2.0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn kernel_emit_matches_closed_form() {
    // spot-check the emitted u samples for a linear symplectic element
    let dir = tmpdir("kernel");
    let u_csv = dir.join("u.csv");
    let out = bin()
        .args([
            "kernel", "--map", "sl2", "--params", "1,0,1,1", "--grid", "16", "--domain",
            "2.0", "--hbar", "1.0",
        ])
        .arg("--emit")
        .arg(&u_csv)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = fs::read_to_string(&u_csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "p,q,re,im");
    for line in lines {
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        let (p, q, re, im) = (v[0], v[1], v[2], v[3]);
        let want = weylkit::maps::sl2_u_value(1.0, 0.0, 1.0, 1.0, p, q, 1.0).unwrap();
        assert!((want.re - re).abs() < 1e-12 && (want.im - im).abs() < 1e-12);
    }
}

#[test]
fn transform_gauge_is_local_phase() {
    let dir = tmpdir("transform");
    let psi_csv = dir.join("psi.csv");
    let out_csv = dir.join("phi.csv");
    write_gaussian(&psi_csv);
    let out = bin()
        .args(["transform", "--map", "gauge", "--a", "const:2", "--tau", "1"])
        .arg("--in")
        .arg(&psi_csv)
        .arg("--out")
        .arg(&out_csv)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    // output equals e^{2iy/ħ} times the input samples
    let input = fs::read_to_string(&psi_csv).unwrap();
    let output = fs::read_to_string(&out_csv).unwrap();
    for (li, lo) in input.lines().skip(1).zip(output.lines().skip(1)) {
        let vi: Vec<f64> = li.split(',').map(|x| x.parse().unwrap()).collect();
        let vo: Vec<f64> = lo.split(',').map(|x| x.parse().unwrap()).collect();
        let y = vi[0];
        let phase = num_complex::Complex::new(0.0, 2.0 * y).exp();
        let want = num_complex::Complex::new(vi[1], vi[2]) * phase;
        assert!((want.re - vo[1]).abs() < 1e-10, "at y={y}");
        assert!((want.im - vo[2]).abs() < 1e-10, "at y={y}");
    }
}

#[test]
fn wigner_output_is_deterministic() {
    let dir = tmpdir("det");
    let psi_csv = dir.join("psi.csv");
    write_gaussian(&psi_csv);
    let w1 = dir.join("w1.csv");
    let w2 = dir.join("w2.csv");
    for w in [&w1, &w2] {
        let out = bin()
            .args(["wigner", "--grid", "48", "--domain", "3.0", "--hbar", "1.0"])
            .arg("--in")
            .arg(&psi_csv)
            .arg("--out")
            .arg(w)
            .output()
            .unwrap();
        assert!(out.status.success());
    }
    assert_eq!(
        fs::read(&w1).unwrap(),
        fs::read(&w2).unwrap(),
        "repeated runs must be byte-identical"
    );
}

#[test]
fn job_file_drives_the_same_pipeline() {
    let dir = tmpdir("job");
    let psi_csv = dir.join("psi.csv");
    write_gaussian(&psi_csv);
    let out_csv = dir.join("w.csv");
    let job = dir.join("job.json");
    fs::write(
        &job,
        format!(
            r#"{{
              "command": "wigner",
              "grid": {{"p_min": -3.0, "p_max": 3.0, "q_min": -3.0, "q_max": 3.0,
                        "np": 48, "nq": 48, "hbar": 1.0}},
              "input": "{}",
              "output": "{}"
            }}"#,
            psi_csv.display(),
            out_csv.display()
        ),
    )
    .unwrap();
    let out = bin().args(["run"]).arg(&job).output().unwrap();
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    // identical to the flag-driven run above
    let flag_out = dir.join("w_flags.csv");
    bin()
        .args(["wigner", "--grid", "48", "--domain", "3.0", "--hbar", "1.0"])
        .arg("--in")
        .arg(&psi_csv)
        .arg("--out")
        .arg(&flag_out)
        .output()
        .unwrap();
    assert_eq!(fs::read(&out_csv).unwrap(), fs::read(&flag_out).unwrap());
}

#[test]
fn propagate_flow_shifts_symbol() {
    let dir = tmpdir("prop");
    let w_csv = dir.join("w.csv");
    let spec = weylkit::GridSpec::square(4.0, 48, 1.0).unwrap();
    let w = weylkit::GridSymbol::sample(&spec, |p: f64, q: f64| {
        Ok(num_complex::Complex::new((-(p * p + q * q)).exp(), 0.0))
    })
    .unwrap();
    let mut buf = Vec::new();
    w.write_csv(&mut buf).unwrap();
    fs::write(&w_csv, buf).unwrap();
    let out_csv = dir.join("w2.csv");
    let out = bin()
        .args([
            "propagate",
            "--route",
            "flow",
            "--generator",
            "1,0",
            "--gamma",
            "0.5",
            "--grid",
            "48",
            "--domain",
            "4.0",
        ])
        .arg("--in")
        .arg(&w_csv)
        .arg("--out")
        .arg(&out_csv)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let moved = weylkit::GridSymbol::read_csv(
        std::io::BufReader::new(fs::File::open(&out_csv).unwrap()),
        &spec,
    )
    .unwrap();
    // e^{iγ·iħ∂q} shifts q by −γħ
    let mut max_d = 0.0f64;
    for i in 4..44 {
        for j in 4..44 {
            let p = spec.p(i);
            let q = spec.q(j);
            let want = (-(p * p + (q - 0.5) * (q - 0.5))).exp();
            max_d = max_d.max((moved.at(i, j).re - want).abs());
        }
    }
    assert!(max_d < 1e-5, "{max_d}");
}
