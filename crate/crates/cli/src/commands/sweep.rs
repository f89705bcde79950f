use std::io::Write;

use swipt_core::harvest::{HarvestModel, ModelKind};
use swipt_core::numerics::dbm_to_mw;
use swipt_core::outage::{mc_success, success_probability, McEstimate, Scenario};

use crate::config::{load, Loaded};
use crate::output::{num, Table};
use crate::{emit, in_pool, warn_all, CliError, Outcome, Scale, SweepArgs, SweepVar};

pub fn grid(from: f64, to: f64, points: usize, scale: Scale) -> Result<Vec<f64>, CliError> {
    if points == 0 {
        return Err(CliError::Usage("--points must be at least 1".into()));
    }
    if !from.is_finite() || !to.is_finite() {
        return Err(CliError::Usage("sweep bounds must be finite".into()));
    }
    let t = |i: usize| {
        if points == 1 {
            0.0
        } else {
            i as f64 / (points - 1) as f64
        }
    };
    match scale {
        Scale::Linear => Ok((0..points).map(|i| from + (to - from) * t(i)).collect()),
        Scale::Log => {
            if !(from > 0.0 && to > 0.0) {
                return Err(CliError::Usage("a log sweep needs positive bounds".into()));
            }
            let (l0, l1) = (from.log10(), to.log10());
            Ok((0..points)
                .map(|i| match i {
                    0 => from,
                    _ if i == points - 1 => to,
                    _ => 10f64.powf(l0 + (l1 - l0) * t(i)),
                })
                .collect())
        }
    }
}

/// The scenario with `var` set to `x`.
pub fn apply(s: &Scenario<f64>, var: SweepVar, x: f64) -> Result<Scenario<f64>, CliError> {
    Ok(match var {
        SweepVar::PcMw => s.with_consumption(x)?,
        SweepVar::PsenDbm => s.with_sensitivity(dbm_to_mw(x))?,
        SweepVar::DM => s.with_distance(x)?,
        SweepVar::Beta => s.with_ber_threshold(x)?,
    })
}

/// Models named by `--model`: the configured one by default, `all`, or a list.
pub fn select(loaded: &Loaded, spec: Option<&str>) -> Result<Vec<(String, HarvestModel<f64>)>, CliError> {
    let Some(spec) = spec else {
        let m = &loaded.scenario.harvester.model;
        return Ok(vec![(m.kind().name().to_string(), m.clone())]);
    };
    let set = loaded.require_models()?;
    let kinds: Vec<ModelKind> = if spec == "all" {
        ModelKind::ALL.to_vec()
    } else {
        spec.split(',')
            .map(|k| k.trim().parse().map_err(CliError::Usage))
            .collect::<Result<_, _>>()?
    };
    Ok(kinds
        .into_iter()
        .map(|k| (k.name().to_string(), set.get(k).clone()))
        .collect())
}

pub const COLUMNS: [&str; 11] = [
    "p_a",
    "p_b",
    "p_c",
    "theta_a_mw",
    "theta_b_mw",
    "theta_c_mw",
    "theta_f_mw",
    "binding",
    "p_success",
    "mc_p_success",
    "mc_half_width",
];

pub fn run(a: &SweepArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<Outcome, CliError> {
    let loaded = load(&a.config)?;
    warn_all(&loaded, stderr);
    let xs = grid(a.from, a.to, a.points, a.scale)?;
    let models = select(&loaded, a.model.as_deref())?;
    if a.trials > 0 && a.trials < 10_000 {
        return Err(CliError::Usage("--trials must be 0 or at least 10000".into()));
    }

    let mut header = vec!["model", a.var.name()];
    header.extend(COLUMNS.iter().take(if a.trials > 0 { 11 } else { 9 }));
    if a.trials > 0 {
        header.push("mc_trials");
    }
    let mut table = Table::new(&header)?;

    for (name, model) in &models {
        let base = loaded.with_model(model);
        for &x in &xs {
            let s = apply(&base, a.var, x)?;
            let r = success_probability(&s)?;
            let mut row = vec![
                name.clone(),
                num(x),
                num(r.p_a),
                num(r.p_b),
                num(r.p_c),
                num(r.thresholds.theta_a),
                num(r.thresholds.theta_b),
                num(r.thresholds.theta_c),
                num(r.theta_f),
                r.binding.to_string(),
                num(r.p_success),
            ];
            if a.trials > 0 {
                let mc: McEstimate<f64> = in_pool(a.threads, || mc_success(&s, a.trials, a.seed))??;
                row.extend([num(mc.p_hat), num(mc.half_width), a.trials.to_string()]);
            }
            table.row(&row)?;
        }
    }
    emit(a.out.as_deref(), &table.into_bytes()?, stdout)?;
    Ok(Outcome::Done)
}
