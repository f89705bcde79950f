use std::fmt::Write as _;
use std::io::Write;

use swipt_core::link::{ber_conditional, simulate_ber};
use swipt_core::outage::{mc_success, success_probability};

use crate::config::load;
use crate::{emit, in_pool, warn_all, CliError, Outcome, ValidateArgs};

/// SNRs `|g|/σ` at which the BER simulator is checked.
pub const BER_SNR_DB: [f64; 3] = [0.0, 6.0, 12.0];

struct Check {
    name: String,
    closed: f64,
    estimate: f64,
    n: u64,
}

impl Check {
    /// Three binomial standard errors at the closed-form probability.
    fn tolerance(&self) -> f64 {
        3.0 * (self.closed * (1.0 - self.closed) / self.n as f64).sqrt()
    }

    fn pass(&self) -> bool {
        (self.estimate - self.closed).abs() <= self.tolerance()
    }
}

pub fn run(a: &ValidateArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<Outcome, CliError> {
    if a.trials < 10_000 {
        return Err(CliError::Usage("--trials must be at least 10000".into()));
    }
    let loaded = load(&a.config)?;
    warn_all(&loaded, stderr);
    let s = &loaded.scenario;
    let r = success_probability(s)?;
    let sigma = s.reader.sigma();

    let (mc, bers) = in_pool(a.threads, || {
        let mc = mc_success(s, a.trials, a.seed);
        let bers: Vec<_> = BER_SNR_DB
            .iter()
            .enumerate()
            .map(|(k, db)| {
                let g = sigma * 10f64.powf(db / 20.0);
                simulate_ber(g, sigma, a.trials, a.seed.wrapping_add(k as u64))
            })
            .collect();
        (mc, bers)
    })?;
    let mc = mc?;

    let n = a.trials;
    let mut checks = vec![
        Check {
            name: "P(A)".into(),
            closed: r.p_a,
            estimate: mc.p_a(),
            n,
        },
        Check {
            name: "P(B)".into(),
            closed: r.p_b,
            estimate: mc.p_b(),
            n,
        },
        Check {
            name: "P(C)".into(),
            closed: r.p_c,
            estimate: mc.p_c(),
            n,
        },
        Check {
            name: "p_success".into(),
            closed: r.p_success,
            estimate: mc.p_hat,
            n,
        },
    ];
    for (db, est) in BER_SNR_DB.iter().zip(&bers) {
        checks.push(Check {
            name: format!("BER@{db}dB"),
            closed: ber_conditional(10f64.powf(db / 20.0), 1.0),
            estimate: est.rate(),
            n,
        });
    }

    let mut text = String::new();
    let _ = writeln!(text, "config: {}", a.config.display());
    let _ = writeln!(text, "trials: {n}  seed: {}", a.seed);
    let t = &r.thresholds;
    let _ = writeln!(
        text,
        "thresholds_mw: theta_a={:e} theta_b={:e} theta_c={:e} theta_f={:e} binding={}",
        t.theta_a, t.theta_b, t.theta_c, r.theta_f, r.binding
    );
    let _ = writeln!(
        text,
        "{:<12} {:>14} {:>14} {:>12} {:>12}  status",
        "quantity", "closed_form", "monte_carlo", "abs_diff", "tolerance"
    );
    for c in &checks {
        let _ = writeln!(
            text,
            "{:<12} {:>14.6e} {:>14.6e} {:>12.3e} {:>12.3e}  {}",
            c.name,
            c.closed,
            c.estimate,
            (c.estimate - c.closed).abs(),
            c.tolerance(),
            if c.pass() { "ok" } else { "FAIL" }
        );
    }
    let pass = checks.iter().all(Check::pass);
    let _ = writeln!(text, "RESULT: {}", if pass { "PASS" } else { "FAIL" });
    emit(a.out.as_deref(), text.as_bytes(), stdout)?;
    Ok(if pass { Outcome::Done } else { Outcome::ValidationFailed })
}
