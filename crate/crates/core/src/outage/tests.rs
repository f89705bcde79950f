use num_complex::Complex;
use proptest::prelude::*;

use super::*;
use crate::harvest::reference::synthetic_rectifier;
use crate::harvest::{HarvestModel, PiecewiseLinear};
use crate::numerics::{dbm_to_mw, reg_upper_gamma};

pub(crate) struct Setup {
    pub m: Option<f64>,
    pub nu: f64,
    pub d: f64,
    pub p_r_mw: f64,
    pub p_c_mw: f64,
    pub noise_mw: f64,
    pub beta: f64,
    pub model: HarvestModel<f64>,
}

impl Default for Setup {
    fn default() -> Self {
        Setup {
            m: Some(10.0),
            nu: 2.3,
            d: 4.0,
            p_r_mw: 1000.0,
            p_c_mw: 1e-3,
            noise_mw: 1e-14,
            beta: 1e-5,
            model: synthetic_rectifier(),
        }
    }
}

impl Setup {
    pub fn build(self) -> Scenario<f64> {
        let s = Scenario {
            path_loss: PathLossParams::new(0.3456, 1.0, self.nu, self.d).unwrap(),
            fading: match self.m {
                Some(m) => Fading::nakagami(m).unwrap(),
                None => Fading::None,
            },
            emitter: EmitterParams::new(self.p_r_mw, None).unwrap(),
            tag_rf: TagRfParams::new(Complex::new(0.5, 0.0), Complex::new(-0.5, 0.0), 0.01).unwrap(),
            tag_energy: TagEnergyParams::new(0.5, 0.5, self.p_c_mw).unwrap(),
            reader: ReaderParams::new(self.noise_mw, self.beta).unwrap(),
            harvester: self.model.into(),
        };
        s.check().unwrap();
        s
    }
}

fn lp(s: &Scenario<f64>) -> f64 {
    s.path_gain().unwrap() * s.emitter.transmit_power_mw
}

#[test]
fn sensitivity_outage_examples() {
    let s = Setup {
        model: HarvestModel::Linear { efficiency: 0.3 },
        ..Default::default()
    }
    .build();
    assert_eq!(sensitivity_outage(&s).unwrap(), 0.0);

    let base = Setup {
        m: Some(1.0),
        ..Default::default()
    }
    .build();
    let s = Setup {
        m: Some(1.0),
        model: HarvestModel::ConstantLinear {
            efficiency: 0.3,
            p_sen: lp(&base),
        },
        ..Default::default()
    }
    .build();
    let want = 1.0 - (-1.0_f64).exp();
    assert!((sensitivity_outage(&s).unwrap() - want).abs() < 1e-14);
}

#[test]
fn sensitivity_outage_increases_with_sensitivity() {
    let cl = HarvestModel::ConstantLinear {
        efficiency: 0.3,
        p_sen: dbm_to_mw(-45.0),
    };
    let s = Setup {
        m: Some(5.0),
        nu: 2.1,
        d: 5.0,
        model: cl,
        ..Default::default()
    }
    .build();
    let mut prev = -1.0;
    for i in 0..=30 {
        let p_sen = dbm_to_mw(-45.0 + i as f64);
        let s = s.with_sensitivity(p_sen).unwrap();
        let p = sensitivity_outage(&s).unwrap();
        assert!(p > prev, "P_sen {p_sen}: {p} <= {prev}");
        prev = p;
    }
}

#[test]
fn power_outage_examples() {
    // vanishing demand: the power threshold collapses to P_sen/ζ
    let s = Setup {
        p_c_mw: 1e-15,
        ..Default::default()
    }
    .build();
    let dist = s.input_dist().unwrap();
    let want = dist.cdf(sensitivity_threshold(&s) / s.tag_energy.zeta_har()).unwrap();
    assert!((power_outage(&s).unwrap() - want).abs() < 1e-9);
    assert!(power_outage(&s).unwrap() >= sensitivity_outage(&s).unwrap());

    let sig = HarvestModel::SigmoidNorm {
        a: 1500.0,
        b: 0.0022,
        c: 0.0024,
    };
    for p_c in [0.0024, 0.003] {
        let s = Setup {
            p_c_mw: p_c,
            model: sig.clone(),
            ..Default::default()
        }
        .build();
        assert_eq!(power_outage(&s).unwrap(), 1.0);
        assert_eq!(power_threshold(&s).unwrap(), f64::INFINITY);
        let r = success_probability(&s).unwrap();
        assert_eq!(r.p_success, 0.0);
        assert_eq!(r.binding, Binding::Power);
    }

    let s = Setup {
        m: Some(1.0),
        model: HarvestModel::Linear { efficiency: 0.3 },
        p_c_mw: 2e-3,
        ..Default::default()
    }
    .build();
    let want = 1.0 - (-2e-3 / (0.3 * 0.25 * lp(&s))).exp();
    assert!((power_outage(&s).unwrap() - want).abs() < 1e-14);
}

#[test]
fn info_outage_examples() {
    let s = Setup {
        beta: 0.5 - 1e-12,
        noise_mw: 1e-8,
        ..Default::default()
    }
    .build();
    assert!(info_outage(&s).unwrap() < 1e-12);
    let s = Setup {
        noise_mw: 1e-300,
        ..Default::default()
    }
    .build();
    assert_eq!(info_outage(&s).unwrap(), 0.0);
    let s = Setup {
        noise_mw: 1e-8,
        ..Default::default()
    }
    .build();
    assert!((info_threshold(&s).unwrap() - 0.139_683_253_876_179_06).abs() < 1e-12);
}

#[test]
fn success_probability_examples() {
    let s = Setup {
        p_c_mw: 1e-300,
        noise_mw: 1e-300,
        model: HarvestModel::Linear { efficiency: 0.3 },
        ..Default::default()
    }
    .build();
    assert!((success_probability(&s).unwrap().p_success - 1.0).abs() < 1e-12);

    let s = Setup {
        m: Some(1.0),
        ..Default::default()
    }
    .build();
    let r = success_probability(&s).unwrap();
    assert!((r.p_success - (-r.theta_f / lp(&s)).exp()).abs() < 1e-15);

    let s = Setup::default().build();
    let r = success_probability(&s).unwrap();
    let want = reg_upper_gamma(10.0, 10.0 * r.theta_f / lp(&s)).unwrap();
    assert_eq!(r.p_success, want);
    assert_eq!(r.theta_f, r.thresholds.theta_f());
}

#[test]
fn verbatim_noise_makes_information_bind() {
    // σ² = 1e-11 W read in the same unit as P_R
    for (m, d, p_r_w) in [(10.0, 4.0, 1.0), (2.0, 7.0, 2.5)] {
        let s = Setup {
            m: Some(m),
            d,
            p_r_mw: 1000.0 * p_r_w,
            noise_mw: 1e-8,
            ..Default::default()
        }
        .build();
        let r = success_probability(&s).unwrap();
        assert_eq!(r.binding, Binding::Information);
        assert!(r.p_success < 1e-7, "{}", r.p_success);
    }
}

#[test]
fn nesting_is_exact() {
    for m in [0.5, 1.0, 2.0, 10.0] {
        for p_c in [1e-5, 1e-4, 1e-3, 2.9e-3] {
            let s = Setup {
                m: Some(m),
                p_c_mw: p_c,
                ..Default::default()
            }
            .build();
            let r = success_probability(&s).unwrap();
            let min = (1.0 - r.p_a).min(1.0 - r.p_b).min(1.0 - r.p_c);
            assert!((r.p_success - min).abs() <= 1e-12);
        }
    }
}

#[test]
fn monte_carlo_agrees_with_closed_form() {
    let n = 200_000;
    for (m, d) in [(10.0, 4.0), (2.0, 7.0), (1.0, 3.0)] {
        for p_c in [1e-4, 1e-3] {
            let s = Setup {
                m: Some(m),
                d,
                p_c_mw: p_c,
                ..Default::default()
            }
            .build();
            let p = success_probability(&s).unwrap().p_success;
            let mc = mc_success(&s, n, 9).unwrap();
            let tol = 3.0 * (p * (1.0 - p) / n as f64).sqrt();
            assert!(
                (mc.p_hat - p).abs() <= tol.max(1e-12),
                "M={m} d={d} P_c={p_c}: {} vs {p}",
                mc.p_hat
            );
            assert_eq!(mc.successes, mc.sensitivity_ok.min(mc.power_ok).min(mc.info_ok));
        }
    }
}

#[test]
fn monte_carlo_marginals() {
    let n = 200_000;
    let s = Setup {
        m: Some(2.0),
        d: 6.0,
        noise_mw: 1e-11,
        ..Default::default()
    }
    .build();
    let r = success_probability(&s).unwrap();
    let mc = mc_success(&s, n, 21).unwrap();
    for (est, p) in [(mc.p_a(), r.p_a), (mc.p_b(), r.p_b), (mc.p_c(), r.p_c)] {
        assert!(
            (est - p).abs() <= 3.0 * (p * (1.0 - p) / n as f64).sqrt() + 1e-12,
            "{est} vs {p}"
        );
    }
    assert!((mc.half_width - Z_99 * (mc.p_hat * (1.0 - mc.p_hat) / n as f64).sqrt()).abs() < 1e-15);
}

#[test]
fn deterministic_channel_succeeds_surely() {
    let s = Setup {
        m: None,
        d: 1.0,
        p_c_mw: 1e-4,
        ..Default::default()
    }
    .build();
    let r = success_probability(&s).unwrap();
    assert_eq!(r.p_success, 1.0);
    let mc = mc_success(&s, 10_000, 1).unwrap();
    assert_eq!(mc.p_hat, 1.0);
    assert_eq!(mc.half_width, 0.0);
}

#[test]
fn monte_carlo_ignores_thread_count() {
    let s = Setup {
        m: Some(2.0),
        d: 6.0,
        ..Default::default()
    }
    .build();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| mc_success(&s, 50_000, 5).unwrap())
    };
    assert_eq!(run(1), run(4));
    assert_ne!(run(1).successes, mc_success(&s, 50_000, 6).unwrap().successes);
}

#[test]
fn piecewise_tracks_ground_truth() {
    let gt = synthetic_rectifier::<f64>();
    let pts: Vec<(f64, f64)> = (0..=25)
        .map(|i| {
            let x = dbm_to_mw(-38.0 + 18.0 * i as f64 / 25.0);
            (x, gt.value(x))
        })
        .collect();
    let pw = HarvestModel::Piecewise(PiecewiseLinear::new(&pts).unwrap());
    for (m, d) in [(10.0, 4.0), (2.0, 7.0)] {
        for i in 0..=20 {
            let p_c = 10f64.powf(-4.0 + 2.0 * i as f64 / 20.0);
            let a = Setup {
                m: Some(m),
                d,
                p_c_mw: p_c,
                model: gt.clone(),
                ..Default::default()
            }
            .build();
            let b = Setup {
                m: Some(m),
                d,
                p_c_mw: p_c,
                model: pw.clone(),
                ..Default::default()
            }
            .build();
            let (pa, pb) = (
                success_probability(&a).unwrap().p_success,
                success_probability(&b).unwrap().p_success,
            );
            assert!((pa - pb).abs() <= 0.01, "P_c {p_c}: {pa} vs {pb}");
        }
    }
}

#[test]
fn scenario_checks() {
    let mut s = Setup::default().build();
    s.tag_rf.uplink_fraction = 0.6;
    assert!(s.check().is_err());
    let s = Setup {
        d: 0.5,
        ..Default::default()
    }
    .build();
    assert!(s.warnings().iter().any(|w| w.contains("reference distance")));
    assert!(Setup::default().build().warnings().is_empty());
    assert!(TagEnergyParams::new(1.0, 0.5, 1e-3).is_err());
    assert!(TagEnergyParams::new(0.5, 0.5, 0.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn success_monotone(m in 0.5_f64..12.0, d in 1.0_f64..10.0, lc in -5.0_f64..-2.5,
                        dc in 0.01_f64..0.5, lb in -8.0_f64..-1.0) {
        let base = Setup { m: Some(m), d, p_c_mw: 10f64.powf(lc), beta: 10f64.powf(lb), ..Default::default() };
        let s = base.build();
        let p = success_probability(&s).unwrap().p_success;
        let more_pc = s.with_consumption(10f64.powf(lc + dc)).unwrap();
        // equal thresholds may differ by bisection rounding
        let tol = 1e-12;
        prop_assert!(success_probability(&more_pc).unwrap().p_success <= p + tol);
        let p_sen = sensitivity_threshold(&s);
        let more_sen = s.with_sensitivity(p_sen * 10f64.powf(dc)).unwrap();
        prop_assert!(success_probability(&more_sen).unwrap().p_success <= p + tol);
        let farther = s.with_distance(d * (1.0 + dc)).unwrap();
        prop_assert!(success_probability(&farther).unwrap().p_success <= p + tol);
        let looser = s.with_ber_threshold((10f64.powf(lb + dc)).min(0.49)).unwrap();
        prop_assert!(success_probability(&looser).unwrap().p_success >= p - tol);
    }
}
