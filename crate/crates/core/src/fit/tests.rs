use super::*;
use crate::harvest::reference::{synthetic_coefficients, synthetic_rectifier};

fn dbm_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn sample(model: &HarvestModel<f64>, dbm: &[f64]) -> HarvesterDataset<f64> {
    let pts: Vec<(f64, f64)> = dbm.iter().map(|&d| (d, model.value(dbm_to_mw(d)))).collect();
    HarvesterDataset::new("sampled", &pts).unwrap()
}

/// Coefficients of `Σ c_k (D + s)^k` as a polynomial in `D`.
fn shifted(c: &[f64], s: f64) -> Vec<f64> {
    let mut out = vec![0.0; c.len()];
    for (k, &ck) in c.iter().enumerate() {
        let mut binom = 1.0;
        for i in 0..=k {
            out[i] += ck * binom * s.powi((k - i) as i32);
            binom *= (k - i) as f64 / (i + 1) as f64;
        }
    }
    out
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn recomputed_sse(r: &FitReport<f64>, data: &HarvesterDataset<f64>) -> f64 {
    data.points_mw()
        .map(|(x, v)| (r.model.eval(x).unwrap() - v).powi(2))
        .sum()
}

fn noisy(data: &HarvesterDataset<f64>, amp: f64) -> HarvesterDataset<f64> {
    let pts: Vec<(f64, f64)> = data
        .input_dbm()
        .iter()
        .zip(data.harvested_mw())
        .enumerate()
        .map(|(i, (&d, &v))| (d, v * (1.0 + amp * ((i * 7 % 5) as f64 - 2.0) / 2.0)))
        .collect();
    HarvesterDataset::new("noisy", &pts).unwrap()
}

fn cubic_coefficients() -> Vec<f64> {
    shifted(&[0.2, 0.01, 2e-4, 1e-6], 30.0)
}

fn cubic() -> HarvestModel<f64> {
    HarvestModel::GroundTruthPoly(
        GroundTruthPoly::new(cubic_coefficients(), dbm_to_mw(-38.0), dbm_to_mw(-20.0)).unwrap(),
    )
}

#[test]
fn ground_truth_recovers_cubic() {
    let w = cubic_coefficients();
    // the output is 0 at P_sen itself, so sample strictly above it
    let data = sample(&cubic(), &dbm_grid(-37.0, -20.0, 18));
    let r = fit_ground_truth(&data, 3, -38.0, -20.0).unwrap();
    let HarvestModel::GroundTruthPoly(g) = &r.model else {
        panic!()
    };
    for (got, want) in g.coeffs().iter().zip(&w) {
        assert!(rel(*got, *want) < 1e-6, "{got} vs {want}");
    }
    assert!(r.converged && r.sse < 1e-24);
}

#[test]
fn ground_truth_constant_efficiency() {
    let pts: Vec<(f64, f64)> = dbm_grid(-38.0, -20.0, 10)
        .iter()
        .map(|&d| (d, 0.4 * dbm_to_mw(d)))
        .collect();
    let data = HarvesterDataset::new("flat", &pts).unwrap();
    let r = fit_ground_truth(&data, 0, -38.0, -20.0).unwrap();
    let HarvestModel::GroundTruthPoly(g) = &r.model else {
        panic!()
    };
    assert_eq!(g.degree(), 0);
    assert!((g.coeffs()[0] - 0.4).abs() < 1e-15);
}

#[test]
fn ground_truth_interpolates_at_full_degree() {
    let data = sample(&synthetic_rectifier(), &dbm_grid(-38.0, -20.0, 5));
    let r = fit_ground_truth(&data, 4, -38.0, -20.0).unwrap();
    assert!(r.sse <= 1e-18, "sse {}", r.sse);
    assert!(matches!(
        fit_ground_truth(&data, 5, -38.0, -20.0),
        Err(Error::InsufficientData(_))
    ));
    assert!(fit_ground_truth(&data, 17, -38.0, -20.0).is_err());
    assert!(fit_ground_truth(&data, 2, -20.0, -38.0).is_err());
}

#[test]
fn ground_truth_recovers_synthetic_rectifier() {
    let data = sample(&synthetic_rectifier(), &dbm_grid(-45.0, -20.0, 26));
    let r = fit_ground_truth(&data, 6, -38.0, -20.0).unwrap();
    let HarvestModel::GroundTruthPoly(g) = &r.model else {
        panic!()
    };
    for (got, want) in g.coeffs().iter().zip(synthetic_coefficients()) {
        assert!(rel(*got, want) < 1e-6, "{got} vs {want}");
    }
    assert!(r.max_abs_err < 1e-15);
}

#[test]
fn least_squares_fits_are_optimal() {
    let data = noisy(&sample(&cubic(), &dbm_grid(-37.0, -20.0, 18)), 0.01);
    let r = fit_ground_truth(&data, 3, -38.0, -20.0).unwrap();
    let HarvestModel::GroundTruthPoly(g) = &r.model else {
        panic!()
    };
    let f0 = ground_truth_objective(&data, g);
    assert!(f0 > 0.0);
    for i in 0..g.coeffs().len() {
        for s in [1.0 + 1e-6, 1.0 - 1e-6] {
            let mut w = g.coeffs().to_vec();
            w[i] *= s;
            let p = GroundTruthPoly::new_unchecked(w, g.p_sen(), g.p_sat());
            assert!(ground_truth_objective(&data, &p) >= f0, "coefficient {i}");
        }
    }

    let quad = HarvestModel::Quadratic {
        a: 20.0,
        b: 0.1,
        c: -1e-5,
    };
    let data = noisy(&sample(&quad, &dbm_grid(-30.0, -20.0, 11)), 0.01);
    let r = fit_quadratic(&data).unwrap();
    let HarvestModel::Quadratic { a, b, c } = r.model else {
        panic!()
    };
    assert!(r.sse > 0.0);
    for (i, s) in [
        (0, 1.0 + 1e-6),
        (0, 1.0 - 1e-6),
        (1, 1.0 + 1e-6),
        (1, 1.0 - 1e-6),
        (2, 1.0 + 1e-6),
        (2, 1.0 - 1e-6),
    ] {
        let mut p = [a, b, c];
        p[i] *= s;
        let m = HarvestModel::Quadratic {
            a: p[0],
            b: p[1],
            c: p[2],
        };
        assert!(FitReport::assess(m, &data, 0, true).sse >= r.sse, "coefficient {i}");
    }

    let qs = HarvestModel::QuadraticSens {
        a: 25.0,
        b: 0.08,
        p_sen: dbm_to_mw(-38.0),
    };
    let data = noisy(&sample(&qs, &dbm_grid(-37.0, -20.0, 18)), 0.01);
    let r = fit_quadratic_sens(&data, -38.0).unwrap();
    let HarvestModel::QuadraticSens { a, b, p_sen } = r.model else {
        panic!()
    };
    for (i, s) in [(0, 1.0 + 1e-6), (0, 1.0 - 1e-6), (1, 1.0 + 1e-6), (1, 1.0 - 1e-6)] {
        let mut p = [a, b];
        p[i] *= s;
        let m = HarvestModel::QuadraticSens {
            a: p[0],
            b: p[1],
            p_sen,
        };
        assert!(FitReport::assess(m, &data, 0, true).sse >= r.sse, "coefficient {i}");
    }
}

#[test]
fn quadratic_examples() {
    let pts = [(-30.0, 1e-5), (-25.0, 6e-5), (-20.0, 2e-3)];
    let data = HarvesterDataset::new("three", &pts).unwrap();
    let r = fit_quadratic(&data).unwrap();
    assert!(r.sse <= 1e-20, "sse {}", r.sse);

    let truth = HarvestModel::QuadraticSens {
        a: 25.0,
        b: 0.08,
        p_sen: dbm_to_mw(-38.0),
    };
    let data = sample(&truth, &dbm_grid(-45.0, -20.0, 26));
    let r = fit_quadratic_sens(&data, -38.0).unwrap();
    let HarvestModel::QuadraticSens { a, b, .. } = r.model else {
        panic!()
    };
    assert!(rel(a, 25.0) < 1e-9 && rel(b, 0.08) < 1e-9, "{a} {b}");

    let zeros: Vec<(f64, f64)> = dbm_grid(-45.0, -20.0, 6).iter().map(|&d| (d, 0.0)).collect();
    let data = HarvesterDataset::new("zero", &zeros).unwrap();
    let r = fit_quadratic(&data).unwrap();
    assert_eq!(r.model, HarvestModel::Quadratic { a: 0.0, b: 0.0, c: 0.0 });
    assert_eq!(r.sse, 0.0);
}

#[test]
fn linear_fits_recover_efficiency() {
    let data = sample(&HarvestModel::Linear { efficiency: 0.3 }, &dbm_grid(-45.0, -20.0, 26));
    let r = fit_linear(&data).unwrap();
    assert_eq!(r.model.kind(), crate::harvest::ModelKind::Linear);
    assert!(
        rel(
            match r.model {
                HarvestModel::Linear { efficiency } => efficiency,
                _ => 0.0,
            },
            0.3
        ) < 1e-12
    );

    let cl = HarvestModel::ConstantLinear {
        efficiency: 0.35,
        p_sen: dbm_to_mw(-38.0),
    };
    let data = sample(&cl, &dbm_grid(-45.0, -20.0, 26));
    let r = fit_constant_linear(&data, -38.0).unwrap();
    let HarvestModel::ConstantLinear { efficiency, .. } = r.model else {
        panic!()
    };
    assert!(rel(efficiency, 0.35) < 1e-12);
    assert!(fit_constant_linear(&data, -10.0).is_err());
}

#[test]
fn sigmoid_norm_self_consistent() {
    let truth = HarvestModel::SigmoidNorm {
        a: 1500.0,
        b: 0.0022,
        c: 0.0024,
    };
    let data = sample(&truth, &dbm_grid(-45.0, -20.0, 26));
    let r = fit_sigmoid_norm(&data).unwrap();
    assert!(r.sse < 1e-14, "sse {}", r.sse);
    assert!(r.converged);
    for start in sigmoid_start_models(&data, None).unwrap() {
        assert!(r.sse <= FitReport::assess(start, &data, 0, true).sse);
    }
}

#[test]
fn sigmoid_sens_self_consistent() {
    let truth = HarvestModel::SigmoidSens {
        a: 1500.0,
        b: 3.0,
        c: 0.003,
        p_sen: dbm_to_mw(-38.0),
    };
    let data = sample(&truth, &dbm_grid(-45.0, -20.0, 26));
    let r = fit_sigmoid_sens(&data, -38.0).unwrap();
    assert!(r.sse < 1e-14, "sse {}", r.sse);
    for start in sigmoid_start_models(&data, Some(-38.0)).unwrap() {
        assert!(r.sse <= FitReport::assess(start, &data, 0, true).sse);
    }
}

#[test]
fn sigmoid_refit_is_fixed_point() {
    let data = sample(&synthetic_rectifier(), &dbm_grid(-45.0, -20.0, 26));
    for sens in [None, Some(-38.0)] {
        let fit = |d: &HarvesterDataset<f64>| match sens {
            None => fit_sigmoid_norm(d).unwrap(),
            Some(p) => fit_sigmoid_sens(d, p).unwrap(),
        };
        let first = fit(&data);
        let again = fit(&sample(&first.model, data.input_dbm()));
        let params = |m: &HarvestModel<f64>| match *m {
            HarvestModel::SigmoidNorm { a, b, c } | HarvestModel::SigmoidSens { a, b, c, .. } => [a, b, c],
            _ => panic!(),
        };
        for (x, y) in params(&first.model).iter().zip(params(&again.model)) {
            assert!(rel(y, *x) < 1e-6, "{sens:?}: {x} vs {y}");
        }
    }
}

#[test]
fn sigmoid_needs_signal() {
    let zeros: Vec<(f64, f64)> = dbm_grid(-45.0, -20.0, 6).iter().map(|&d| (d, 0.0)).collect();
    let data = HarvesterDataset::new("zero", &zeros).unwrap();
    assert!(fit_sigmoid_norm(&data).is_err());
    let few = HarvesterDataset::new("few", &[(-40.0, 0.0), (-30.0, 1e-4), (-20.0, 2e-3)]).unwrap();
    assert!(matches!(fit_sigmoid_sens(&few, -40.0), Err(Error::InsufficientData(_))));
}

#[test]
fn reported_sse_matches_recomputation() {
    let data = noisy(&sample(&synthetic_rectifier(), &dbm_grid(-45.0, -20.0, 26)), 0.02);
    let smooth = noisy(&sample(&cubic(), &dbm_grid(-37.0, -20.0, 18)), 0.02);
    let gt = fit_ground_truth(&smooth, 3, -38.0, -20.0).unwrap();
    let s = recomputed_sse(&gt, &smooth);
    assert!((gt.sse - s).abs() <= 1e-12 * s);
    let reports = [
        fit_linear(&data).unwrap(),
        fit_constant_linear(&data, -38.0).unwrap(),
        fit_sigmoid_norm(&data).unwrap(),
        fit_sigmoid_sens(&data, -38.0).unwrap(),
        fit_quadratic(&data).unwrap(),
        fit_quadratic_sens(&data, -38.0).unwrap(),
    ];
    for r in &reports {
        let s = recomputed_sse(r, &data);
        assert!((r.sse - s).abs() <= 1e-12 * s, "{:?}", r.model.kind());
        assert!(r.max_abs_err * r.max_abs_err <= r.sse * (1.0 + 1e-12));
    }
}

#[test]
fn piecewise_examples() {
    let two = HarvesterDataset::new("two", &[(-38.0, 0.0), (-20.0, 3e-3)]).unwrap();
    let HarvestModel::Piecewise(p) = build_piecewise(&two).unwrap() else {
        panic!()
    };
    assert_eq!(p.len(), 2);
    assert!(rel(p.slopes()[0], 3e-3 / (0.01 - dbm_to_mw(-38.0))) < 1e-14);

    let data = sample(&synthetic_rectifier(), &dbm_grid(-45.0, -20.0, 26));
    let pw = build_piecewise(&data).unwrap();
    for (x, v) in data.points_mw() {
        assert_eq!(pw.eval(x).unwrap(), v);
    }
    let HarvestModel::Piecewise(p) = &pw else { panic!() };
    assert_eq!(p.len(), 26);
    assert!(rel(pw.effective_thresholds().p_sen_eff, dbm_to_mw(-38.0)) < 1e-12);

    let lifted = HarvesterDataset::new("lifted", &[(-40.0, 1e-6), (-30.0, 1e-4)]).unwrap();
    assert!(matches!(build_piecewise(&lifted), Err(Error::InvalidModel(_))));
    let dip = HarvesterDataset::new("dip", &[(-40.0, 0.0), (-30.0, 2e-4), (-25.0, 1e-4)]).unwrap();
    assert!(matches!(build_piecewise(&dip), Err(Error::InvalidModel(_))));
}
