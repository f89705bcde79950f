use std::path::{Path, PathBuf};

use swipt_cli::config::load;
use swipt_cli::main_with;
use swipt_core::harvest::ModelKind;
use swipt_core::outage::success_probability;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

struct Run {
    code: u8,
    out: String,
    err: String,
}

fn swipt(args: &[&str]) -> Run {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("swipt").chain(args.iter().copied());
    let code = main_with(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let i = header
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

fn report_value<'a>(report: &'a str, key: &str) -> &'a str {
    report
        .lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(": ")))
        .unwrap_or_else(|| panic!("no {key} in report:\n{report}"))
}

#[test]
fn fit_ground_truth_reproduces_bundled_data() {
    let ds = data("rectifier_synthetic.csv");
    let r = swipt(&["fit", ds.to_str().unwrap(), "--model", "ground-truth", "--degree", "6"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let sse: f64 = report_value(&r.out, "sse_mw2").parse().unwrap();
    assert!(sse < 1e-12, "sse {sse}");
    assert!(r.out.contains("[harvest_model]"));
}

#[test]
fn fit_writes_a_loadable_model_file() {
    let dir = tempfile::tempdir().unwrap();
    let ds = data("rectifier_synthetic.csv");
    let model = dir.path().join("model.toml");
    let r = swipt(&[
        "fit",
        ds.to_str().unwrap(),
        "--model",
        "sigmoid-sens",
        "--out",
        model.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(!r.out.contains("[harvest_model]"));

    let base = std::fs::read_to_string(data("scenario_los.cfg")).unwrap();
    let head = base.split("[harvest_model]").next().unwrap();
    let cfg = dir.path().join("scenario.cfg");
    std::fs::write(&cfg, format!("{head}{}", std::fs::read_to_string(&model).unwrap())).unwrap();
    let loaded = load(&cfg).unwrap();
    assert_eq!(loaded.scenario.harvester.model.kind(), ModelKind::SigmoidSens);
}

#[test]
fn fit_piecewise_uses_every_point() {
    let ds = data("rectifier_synthetic.csv");
    let r = swipt(&["fit", ds.to_str().unwrap(), "--model", "piecewise"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let n_points = std::fs::read_to_string(&ds)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#') && l.contains(','))
        .count()
        - 1;
    let table: toml::Table = toml::from_str(r.out.split_once("\n\n").unwrap().1).unwrap();
    let pts = table["harvest_model"]["points"].as_array().unwrap();
    assert_eq!(pts.len(), n_points);
}

#[test]
fn fit_rejects_malformed_csv_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "input_dbm,harvested_mw\n-40,0\n-30,abc\n").unwrap();
    let r = swipt(&["fit", bad.to_str().unwrap(), "--model", "linear"]);
    assert_eq!(r.code, 2);
    assert!(r.err.contains("line 3"), "{}", r.err);
}

#[test]
fn sweep_consumption_is_nonincreasing_on_presets() {
    for cfg in [
        "scenario_los.cfg",
        "scenario_nlos.cfg",
        "scenario_los_noise_mw.cfg",
        "scenario_nlos_noise_mw.cfg",
    ] {
        let path = data(cfg);
        let r = swipt(&[
            "sweep",
            "--config",
            path.to_str().unwrap(),
            "--var",
            "p_c_mw",
            "--from",
            "1e-4",
            "--to",
            "1e-2",
            "--points",
            "25",
            "--scale",
            "log",
        ]);
        assert_eq!(r.code, 0, "{cfg}: {}", r.err);
        let (h, rows) = csv_rows(&r.out);
        assert_eq!(rows.len(), 25);
        let p = column(&h, &rows, "p_success");
        assert!(p.windows(2).all(|w| w[1] <= w[0]), "{cfg}: {p:?}");
    }
}

#[test]
fn sweep_single_point_and_usage_errors() {
    let cfg = data("scenario_los.cfg");
    let cfg = cfg.to_str().unwrap();
    let r = swipt(&[
        "sweep", "--config", cfg, "--var", "d_m", "--from", "3", "--to", "9", "--points", "1",
    ]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(csv_rows(&r.out).1.len(), 1);

    let r = swipt(&[
        "sweep", "--config", cfg, "--var", "d_m", "--var", "beta", "--from", "3", "--to", "9",
    ]);
    assert_eq!(r.code, 2);
    let r = swipt(&[
        "sweep", "--config", cfg, "--var", "d_m", "--from", "3", "--to", "9", "--points", "0",
    ]);
    assert_eq!(r.code, 2);
    let r = swipt(&[
        "sweep", "--config", cfg, "--var", "d_m", "--from", "3", "--to", "9", "--model", "cubic",
    ]);
    assert_eq!(r.code, 2);
}

#[test]
fn sweep_csv_round_trips_through_closed_forms() {
    let path = data("scenario_nlos_noise_mw.cfg");
    let r = swipt(&[
        "sweep",
        "--config",
        path.to_str().unwrap(),
        "--var",
        "p_c_mw",
        "--from",
        "1e-4",
        "--to",
        "1e-2",
        "--points",
        "9",
        "--scale",
        "log",
        "--model",
        "all",
    ]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(!r.out.contains('\r'));
    let loaded = load(&path).unwrap();
    let models = loaded.require_models().unwrap();
    let (h, rows) = csv_rows(&r.out);
    assert_eq!(rows.len(), 9 * 8);
    let xs = column(&h, &rows, "p_c_mw");
    let ps = column(&h, &rows, "p_success");
    for ((row, x), p) in rows.iter().zip(xs).zip(ps) {
        let kind: ModelKind = row[0].parse().unwrap();
        let s = loaded.with_model(models.get(kind)).with_consumption(x).unwrap();
        let want = success_probability(&s).unwrap().p_success;
        assert!((p - want).abs() <= 1e-9, "{kind:?} at {x}: {p} vs {want}");
    }
}

#[test]
fn sweep_monte_carlo_columns() {
    let path = data("scenario_nlos_noise_mw.cfg");
    let args = [
        "sweep",
        "--config",
        path.to_str().unwrap(),
        "--var",
        "beta",
        "--from",
        "1e-6",
        "--to",
        "1e-2",
        "--points",
        "3",
        "--scale",
        "log",
        "--trials",
        "20000",
        "--seed",
        "9",
    ];
    let a = swipt(&args);
    assert_eq!(a.code, 0, "{}", a.err);
    let (h, rows) = csv_rows(&a.out);
    let p = column(&h, &rows, "p_success");
    let mc = column(&h, &rows, "mc_p_success");
    let hw = column(&h, &rows, "mc_half_width");
    for i in 0..rows.len() {
        assert!((p[i] - mc[i]).abs() <= hw[i].max(1e-3), "row {i}");
    }
    assert_eq!(swipt(&args).out, a.out);
}

#[test]
fn validate_presets_pass_deterministically() {
    for cfg in ["scenario_los.cfg", "scenario_nlos.cfg"] {
        let path = data(cfg);
        let args = [
            "validate",
            "--config",
            path.to_str().unwrap(),
            "--trials",
            "200000",
            "--seed",
            "11",
        ];
        let a = swipt(&args);
        assert_eq!(a.code, 0, "{cfg}: {}{}", a.out, a.err);
        assert!(a.out.ends_with("RESULT: PASS\n"));
        assert_eq!(swipt(&args).out, a.out);
    }
}

#[test]
fn validate_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let base = std::fs::read_to_string(data("scenario_los.cfg")).unwrap();
    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, base.replace("rho_u = 0.01", "rho_u = -0.01")).unwrap();
    std::fs::copy(
        data("rectifier_synthetic.csv"),
        dir.path().join("rectifier_synthetic.csv"),
    )
    .unwrap();
    let r = swipt(&["validate", "--config", bad.to_str().unwrap(), "--trials", "10000"]);
    assert_eq!(r.code, 2, "{}", r.err);

    let unknown = dir.path().join("unknown.cfg");
    std::fs::write(&unknown, base.replace("[fading]", "[fading]\nshadowing_db = 3.0")).unwrap();
    let r = swipt(&["validate", "--config", unknown.to_str().unwrap(), "--trials", "10000"]);
    assert_eq!(r.code, 2);
    assert!(r.err.contains("shadowing_db"), "{}", r.err);

    let cfg = data("scenario_los.cfg");
    let r = swipt(&["validate", "--config", cfg.to_str().unwrap(), "--trials", "100"]);
    assert_eq!(r.code, 2);
    let r = swipt(&["validate", "--config", "/nonexistent.cfg"]);
    assert_eq!(r.code, 2);
}

#[test]
fn figure_shapes() {
    let los = data("scenario_los.cfg");
    let r = swipt(&["figure", "harvest-curves", "--config", los.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.err);
    let (h, rows) = csv_rows(&r.out);
    assert_eq!(h.len(), 9);
    assert_eq!(h[0], "input_dbm");
    let x = column(&h, &rows, "input_dbm");
    assert_eq!((x[0], *x.last().unwrap()), (-45.0, -20.0));

    let sens = data("scenario_sensitivity.cfg");
    let r = swipt(&[
        "figure",
        "sensitivity-outage",
        "--config",
        sens.to_str().unwrap(),
        "--points",
        "11",
    ]);
    let (h, rows) = csv_rows(&r.out);
    assert_eq!(rows.len(), 11);
    let p = column(&h, &rows, "p_a");
    assert!(p.windows(2).all(|w| w[1] > w[0]), "{p:?}");

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig.csv");
    let r = swipt(&[
        "figure",
        "success-vs-pc",
        "--config",
        los.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0);
    assert!(r.out.is_empty());
    let (h, _) = csv_rows(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(h.len(), 9);
}

#[test]
fn figure_needs_fitted_models() {
    let dir = tempfile::tempdir().unwrap();
    let base = std::fs::read_to_string(data("scenario_los.cfg")).unwrap();
    let head = base.split("[harvest_model]").next().unwrap();
    let cfg = dir.path().join("linear.cfg");
    std::fs::write(
        &cfg,
        format!("{head}[harvest_model]\nvariant = \"linear\"\nefficiency = 0.3\n"),
    )
    .unwrap();
    let r = swipt(&["figure", "harvest-curves", "--config", cfg.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    let r = swipt(&["figure", "sensitivity-outage", "--config", cfg.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.err);
}
