use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use chaoskit::billiard::WeylParams;
use chaoskit::resonance::{breit_wigner_model, Resonance};
use serde_json::Value;

fn repo() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn config(name: &str) -> PathBuf {
    repo().join("configs").join(name)
}

fn chaoskit(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chaoskit"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("CHAOSKIT_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn ok(o: &Output) {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn data_lines(p: &Path) -> Vec<String> {
    std::fs::read_to_string(p)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(String::from)
        .collect()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn eigen_sector_count() {
    let dir = tempfile::tempdir().unwrap();
    let o = chaoskit(&["eigen", "--geometry", s(&config("empty_sector.cfg"))], dir.path());
    ok(&o);
    assert_eq!(data_lines(&dir.path().join("sector_spectrum.txt")).len(), 229);
    let csv = std::fs::read_to_string(dir.path().join("sector_spectrum.csv")).unwrap();
    assert_eq!(csv.lines().count(), 230);
    let first: Vec<f64> = csv.lines().nth(1).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(&first[..2], &[1.0, 1.0]);
    assert!((first[3] / 1e9 - 0.3805).abs() < 1e-3);
}

#[test]
fn eigen_below_first_level_is_empty_with_warning() {
    let dir = tempfile::tempdir().unwrap();
    let o = chaoskit(&["eigen", "--geometry", s(&config("empty_sector.cfg")), "--f-max-ghz", "0.38"], dir.path());
    ok(&o);
    assert!(data_lines(&dir.path().join("sector_spectrum.txt")).is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("no eigenvalues"));
}

#[test]
fn malformed_geometry_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let geo = dir.path().join("bad.cfg");
    std::fs::write(&geo, "radius_m = 0.8\n\ntheta_rad = sixty\n").unwrap();
    let o = chaoskit(&["eigen", "--geometry", s(&geo)], &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.cfg:3"));
    let o = chaoskit(&["eigen", "--geometry", s(&dir.path().join("missing.cfg"))], &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn point_scatterer_needs_one_disk() {
    let dir = tempfile::tempdir().unwrap();
    let o = chaoskit(&["eigen", "--geometry", s(&config("three_disk_1st.cfg")), "--coupling", "1"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn stats_orders_the_three_reference_cases() {
    let dir = tempfile::tempdir().unwrap();
    let sector = dir.path().join("sector");
    ok(&chaoskit(&["eigen", "--geometry", s(&config("empty_sector.cfg"))], &sector));
    let o = chaoskit(
        &[
            "stats",
            "--spectrum",
            s(&sector.join("sector_spectrum.txt")),
            "--geometry",
            s(&config("empty_sector.cfg")),
        ],
        &dir.path().join("s1"),
    );
    ok(&o);
    let sum = read_json(&dir.path().join("s1/summary.json"));
    assert_eq!(sum["closest"], "poisson");
    assert_eq!(sum["levels"], 229);
    for f in ["spacing_distribution.csv", "cumulative_spacing.csv", "number_variance.csv", "rigidity.csv"] {
        let text = std::fs::read_to_string(dir.path().join("s1").join(f)).unwrap();
        assert!(text.lines().next().unwrap().ends_with("poisson,goe,semi_poisson"), "{f}");
    }

    let ps = dir.path().join("ps");
    ok(&chaoskit(&["eigen", "--geometry", s(&config("point_scatterer.cfg")), "--k-max", "125"], &ps));
    ok(&chaoskit(
        &[
            "stats",
            "--spectrum",
            s(&ps.join("scatterer_spectrum.txt")),
            "--geometry",
            s(&config("empty_sector.cfg")),
        ],
        &dir.path().join("s2"),
    ));
    let sum = read_json(&dir.path().join("s2/summary.json"));
    assert_eq!(sum["closest"], "semi-poisson");
    assert!(sum["levels"].as_u64().unwrap() >= 300);

    ok(&chaoskit(&["stats", "--generate", "goe", "--levels", "500", "--sequences", "4"], &dir.path().join("s3")));
    assert_eq!(read_json(&dir.path().join("s3/summary.json"))["closest"], "goe");
}

#[test]
fn stats_needs_fifty_levels() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("short.txt");
    std::fs::write(&spec, (1..40).map(|i| format!("{}\n", i as f64)).collect::<String>()).unwrap();
    let o = chaoskit(&["stats", "--spectrum", s(&spec), "--unfolded"], &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(3));
}

fn write_trace(path: &Path, rs: &[Resonance], pair: (u8, u8), freqs: &[f64]) {
    let t = breit_wigner_model(rs, pair.0 == pair.1, freqs).unwrap();
    let mut text = format!("frequency_hz,re_S{}{},im_S{}{}\n", pair.0, pair.1, pair.0, pair.1);
    for (f, v) in t.frequencies().iter().zip(t.values()) {
        text.push_str(&format!("{f},{},{}\n", v.re, v.im));
    }
    std::fs::write(path, text).unwrap();
}

fn fifty_resonances() -> Vec<Resonance> {
    (0..50)
        .map(|i| {
            let width = 1.0e6 * (1.0 + 0.3 * ((i * 7) % 5) as f64);
            let centre = 2.0e9 + 10.0e6 * i as f64 + 2.0e6 * ((i * 3) % 4) as f64;
            let amp = width * (0.1 + 0.02 * ((i * 5) % 7) as f64);
            Resonance::signed(centre, width, if i % 3 == 0 { -amp } else { amp })
        })
        .collect()
}

#[test]
fn fit_recovers_fifty_resonances() {
    let dir = tempfile::tempdir().unwrap();
    let rs = fifty_resonances();
    let freqs: Vec<f64> = (0..5300).map(|i| 1.99e9 + 1.0e5 * i as f64).collect();
    let t12 = dir.path().join("s12.csv");
    let t21 = dir.path().join("s21.csv");
    write_trace(&t12, &rs, (1, 2), &freqs);
    write_trace(&t21, &rs, (2, 1), &freqs);
    let o = chaoskit(
        &["fit", "--trace", s(&t12), s(&t21), "--window-ghz", "0.1", "--prominence", "0.02"],
        &dir.path().join("out"),
    );
    ok(&o);
    let fitted = read_json(&dir.path().join("out/resonances_0_S12.json"));
    let list = fitted.as_array().unwrap();
    assert_eq!(list.len(), 50);
    let centres: Vec<f64> = list.iter().map(|r| r["f_hz"].as_f64().unwrap()).collect();
    assert!(centres.windows(2).all(|w| w[0] < w[1]));
    for (c, r) in centres.iter().zip(&rs) {
        assert!((c - r.center).abs() < 1e-2 * r.width);
    }
    let rec = read_json(&dir.path().join("out/reciprocity.json"));
    assert_eq!(rec["matched"], 50);
    assert!(rec["max_relative_difference"].as_f64().unwrap() < 1e-6);
    let strengths = std::fs::read_to_string(dir.path().join("out/strengths.csv")).unwrap();
    assert_eq!(strengths.lines().count(), 101);
    assert!(dir.path().join("out/strength_histogram.csv").exists());
}

#[test]
fn fit_rejects_empty_and_malformed_traces() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "").unwrap();
    let o = chaoskit(&["fit", "--trace", s(&empty)], &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(3));
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "frequency_hz,re_S12,im_S12\n1,2,3\n2,x,3\n").unwrap();
    let o = chaoskit(&["fit", "--trace", s(&bad)], &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.csv:3"));
}

fn rmt_config(dir: &Path, body: &str) -> PathBuf {
    let p = dir.join("rmt.cfg");
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn rmt_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = rmt_config(
        dir.path(),
        "dimension = 80\ntransmission_a = 0.3\ntransmission_b = 0.6\nfictitious_channels = 4\ntau_abs = 1\nrealizations = 12\nseed = 9\n",
    );
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = Command::new(env!("CARGO_BIN_EXE_chaoskit"))
            .args(["rmt", "--config", s(&cfg), "--out", s(&out)])
            .env("SOURCE_DATE_EPOCH", "1700000000")
            .output()
            .unwrap();
        ok(&o);
        out
    };
    let (a, b) = (run("a"), run("b"));
    let mut names: Vec<_> = std::fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.len() > 5);
    for n in names {
        assert_eq!(std::fs::read(a.join(&n)).unwrap(), std::fs::read(b.join(&n)).unwrap(), "{n:?}");
    }
    let m = read_json(&a.join("manifest.json"));
    assert_eq!(m["command"], "rmt");
    assert_eq!(m["created_unix"], 1700000000);
    assert_eq!(m["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert_eq!(read_json(&a.join("summary.json"))["label"], "absorbing");
}

#[test]
fn rmt_echoes_targets_and_labels_unitary_runs() {
    let dir = tempfile::tempdir().unwrap();
    for t in ["0.091", "0.119", "0.165"] {
        let cfg = rmt_config(
            dir.path(),
            &format!("dimension = 60\ntransmission_a = {t}\ntransmission_b = {t}\nfictitious_channels = 0\nrealizations = 10\n"),
        );
        let out = dir.path().join(t);
        ok(&chaoskit(&["rmt", "--config", s(&cfg)], &out));
        let sum = read_json(&out.join("summary.json"));
        assert_eq!(sum["targets"]["transmission_a"].as_f64().unwrap(), t.parse::<f64>().unwrap());
        assert_eq!(sum["label"], "unitary");
        assert!(out.join("autocorrelation_unitary.csv").exists());
    }
    let cfg = rmt_config(dir.path(), "dimension = 60\ntransmission_a = 0.1\n");
    assert_eq!(chaoskit(&["rmt", "--config", s(&cfg)], &dir.path().join("x")).status.code(), Some(2));
}

/// Wavevectors whose Weyl staircase sits exactly at `n - 1/2`.
fn picket_fence(w: &WeylParams, n: usize) -> Vec<f64> {
    (1..=n)
        .map(|i| {
            let target = i as f64 - 0.5 - w.constant;
            let (a, l) = (w.area / (4.0 * std::f64::consts::PI), w.perimeter / (4.0 * std::f64::consts::PI));
            (l + (l * l + 4.0 * a * target).sqrt()) / (2.0 * a)
        })
        .collect()
}

fn write_spectrum(p: &Path, k: &[f64]) {
    std::fs::write(p, k.iter().map(|v| format!("{v}\n")).collect::<String>()).unwrap();
}

#[test]
fn missing_reports_deletions() {
    let dir = tempfile::tempdir().unwrap();
    let w = WeylParams::new(0.3351032163829113, 2.437758040957278, 0.0).unwrap();
    let full = picket_fence(&w, 400);
    let geo = config("empty_sector.cfg");
    let run = |k: &[f64], name: &str| {
        let spec = dir.path().join(format!("{name}.txt"));
        write_spectrum(&spec, k);
        let out = dir.path().join(name);
        ok(&chaoskit(
            &["missing", "--spectrum", s(&spec), "--geometry", s(&geo), "--weyl-constant", "0"],
            &out,
        ));
        read_json(&out.join("missing.json"))["missing"].as_array().unwrap().clone()
    };
    assert!(run(&full, "complete").is_empty());

    let deleted = [30, 70, 110, 150, 190, 230, 270, 310];
    let thinned: Vec<f64> = full.iter().enumerate().filter(|(i, _)| !deleted.contains(i)).map(|(_, k)| *k).collect();
    let reports = run(&thinned, "eight");
    assert_eq!(reports.len(), 8);
    for r in &reports {
        assert!((r["step"].as_f64().unwrap() + 1.0).abs() < 0.3);
    }

    let adjacent: Vec<f64> = full.iter().enumerate().filter(|(i, _)| *i != 200 && *i != 203).map(|(_, k)| *k).collect();
    let reports = run(&adjacent, "merged");
    assert_eq!(reports.len(), 1);
    assert!((reports[0]["step"].as_f64().unwrap() + 2.0).abs() < 0.5);
}

#[test]
fn field_inverts_a_synthetic_shift_map() {
    let dir = tempfile::tempdir().unwrap();
    ok(&chaoskit(&["field", "--mode", "3,2", "--spacing-mm", "10", "--normalize"], &dir.path().join("mode")));
    let mode = std::fs::read_to_string(dir.path().join("mode/intensity.csv")).unwrap();
    let (f0, c1) = (2.5e9, 4.0e-3);
    let shift: String = std::iter::once("x_m,y_m,shift_hz\n".to_string())
        .chain(mode.lines().skip(1).map(|l| {
            let v: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            format!("{},{},{}\n", v[0], v[1], 7.0 * v[2] * f0 * c1)
        }))
        .collect();
    let shift_file = dir.path().join("shift.csv");
    std::fs::write(&shift_file, shift).unwrap();
    ok(&chaoskit(
        &["field", "--shift", s(&shift_file), "--f0-ghz", "2.5", "--c1", "0.004", "--normalize"],
        &dir.path().join("field"),
    ));
    let back = std::fs::read_to_string(dir.path().join("field/intensity.csv")).unwrap();
    let parse = |t: &str| -> Vec<Vec<f64>> {
        t.lines().skip(1).map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect()
    };
    let (a, b) = (parse(&mode), parse(&back));
    assert_eq!(a.len(), b.len());
    for (p, q) in a.iter().zip(&b) {
        assert!((p[0] - q[0]).abs() < 1e-12 && (p[1] - q[1]).abs() < 1e-12);
        assert!((p[2] - q[2]).abs() < 1e-12);
    }
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("env-out");
    let o = Command::new(env!("CARGO_BIN_EXE_chaoskit"))
        .args(["eigen", "--geometry", s(&config("empty_sector.cfg")), "--f-max-ghz", "1"])
        .env("CHAOSKIT_OUT_DIR", &target)
        .current_dir(dir.path())
        .output()
        .unwrap();
    ok(&o);
    assert!(target.join("sector_spectrum.txt").exists());
    assert!(target.join("manifest.json").exists());
}

#[test]
fn usage_errors_exit_with_config_code() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(chaoskit(&["eigen"], dir.path()).status.code(), Some(2));
    assert_eq!(chaoskit(&["frobnicate"], dir.path()).status.code(), Some(2));
}
