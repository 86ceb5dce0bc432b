//! CLI behavior: exit codes, flag overrides, output formats.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_irsim")
}

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("irsim_cli_{tag}"));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn config_errors_exit_2() {
    let dir = scratch("bad_config");
    let bad = dir.join("bad.conf");
    std::fs::write(&bad, "no_such_key = 1\n").unwrap();
    let out = Command::new(bin())
        .args(["hist", "--config"])
        .arg(&bad)
        .arg("--out")
        .arg(dir.join("out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("config"));

    let out = Command::new(bin())
        .args(["hist", "--config", "/definitely/not/here.conf"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn unreachable_outage_exits_3() {
    let dir = scratch("unreachable");
    let conf = dir.join("weak.conf");
    // distance-based losses at λ = 0.1 leave microscopic gains: a 40-bit
    // rate target cannot be met by any antenna count the solver will try
    std::fs::write(
        &conf,
        "alpha_ref_db = 10\ndist_s = 25\ndist_d = 20\ndist_r = 15\n\
         eps_s = 2.3\neps_d = 3.5\neps_r = 2.3\nsweep = 36\n",
    )
    .unwrap();
    let out = Command::new(bin())
        .args(["tradeoff-out", "--rate", "40", "--pout", "0.01", "--config"])
        .arg(&conf)
        .arg("--out")
        .arg(dir.join("out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unreachable"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn hist_respects_bins_and_format() {
    let dir = scratch("hist_fmt");
    let conf = dir.join("small.conf");
    std::fs::write(&conf, "irs_nx = 4\nirs_ny = 4\ntrials = 200\n").unwrap();
    let out_dir = dir.join("out");
    let status = Command::new(bin())
        .args(["hist", "--bins", "25", "--seed", "5", "--config"])
        .arg(&conf)
        .arg("--out")
        .arg(&out_dir)
        .status()
        .unwrap();
    assert!(status.success());

    let text = std::fs::read_to_string(out_dir.join("hist.csv")).unwrap();
    assert!(text.starts_with("bin_center,count,analytic_pdf_scaled\r\n"));
    let lines: Vec<&str> = text.trim_end().lines().collect();
    assert_eq!(lines.len(), 26); // header + 25 bins

    // counts sum to trials; floats carry 17 significant digits
    let mut total = 0u64;
    for line in &lines[1..] {
        let fields: Vec<&str> = line.trim_end_matches('\r').split(',').collect();
        assert_eq!(fields.len(), 3);
        total += fields[1].parse::<u64>().unwrap();
        let center: f64 = fields[0].parse().unwrap();
        assert!(center.is_finite());
        assert!(fields[0].contains('e'));
        let digits = fields[0]
            .split('e')
            .next()
            .unwrap()
            .chars()
            .filter(|c| c.is_ascii_digit())
            .count();
        assert_eq!(digits, 17, "field {}", fields[0]);
    }
    assert_eq!(total, 200);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn laws_columns_present() {
    let dir = scratch("laws");
    let conf = dir.join("c.conf");
    std::fs::write(&conf, "sweep = 16, 64\n").unwrap();
    let out_dir = dir.join("out");
    let status = Command::new(bin())
        .args(["laws", "--config"])
        .arg(&conf)
        .arg("--out")
        .arg(&out_dir)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(out_dir.join("laws.csv")).unwrap();
    assert!(text.starts_with("N,mu_C,sigma2_C,sigma2_C_hat,mean_floor,var_ceiling\r\n"));
    assert_eq!(text.trim_end().lines().count(), 3);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn io_failures_carry_path_context() {
    let dir = scratch("io_ctx");
    let conf = dir.join("c.conf");
    std::fs::write(&conf, "irs_nx = 2\nirs_ny = 2\ntrials = 50\nbins = 4\n").unwrap();
    // a file where the output directory should be
    let blocker = dir.join("blocked");
    std::fs::write(&blocker, "").unwrap();
    let out = Command::new(bin())
        .args(["hist", "--config"])
        .arg(&conf)
        .arg("--out")
        .arg(&blocker)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("blocked"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn fit_eigs_dumps_spectra_on_request() {
    let dir = scratch("spectra");
    let conf = dir.join("c.conf");
    std::fs::write(&conf, "sweep = 16, 36\n").unwrap();
    let out_dir = dir.join("out");
    let status = Command::new(bin())
        .args(["fit-eigs", "--dump-spectra", "--config"])
        .arg(&conf)
        .arg("--out")
        .arg(&out_dir)
        .status()
        .unwrap();
    assert!(status.success());
    for n in [16usize, 36] {
        let text = std::fs::read_to_string(out_dir.join(format!("spectrum_{n}.csv"))).unwrap();
        assert!(text.starts_with("index,eigenvalue\r\n"));
        let vals: Vec<f64> = text
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
            .collect();
        assert_eq!(vals.len(), n);
        assert!(vals.windows(2).all(|w| w[0] >= w[1]), "descending order");
        assert!(vals.iter().all(|&v| v >= 0.0));
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn seed_changes_output() {
    let dir = scratch("seed");
    let conf = dir.join("c.conf");
    std::fs::write(&conf, "irs_nx = 4\nirs_ny = 4\ntrials = 300\n").unwrap();
    let mut outputs = Vec::new();
    for seed in ["1", "2"] {
        let out_dir = dir.join(format!("out{seed}"));
        let status = Command::new(bin())
            .args(["hist", "--seed", seed, "--config"])
            .arg(&conf)
            .arg("--out")
            .arg(&out_dir)
            .status()
            .unwrap();
        assert!(status.success());
        outputs.push(std::fs::read(out_dir.join("hist.csv")).unwrap());
    }
    assert_ne!(outputs[0], outputs[1]);
    std::fs::remove_dir_all(&dir).unwrap();
}
