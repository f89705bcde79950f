use std::io::Write;

use swipt_core::numerics::dbm_to_mw;
use swipt_core::outage::success_probability;

use super::sweep::grid;
use crate::config::load;
use crate::output::{num, Table};
use crate::{emit, warn_all, CliError, Figure, FigureArgs, Outcome, Scale};

/// Input-power span of the harvest-curve figure, dBm.
pub const HARVEST_SPAN_DBM: (f64, f64) = (-45.0, -20.0);
/// Sensitivity span of the sensitivity-outage figure, dBm.
pub const SENSITIVITY_SPAN_DBM: (f64, f64) = (-45.0, -15.0);
/// Consumption span of the success-probability figure, mW.
pub const CONSUMPTION_SPAN_MW: (f64, f64) = (1e-4, 1e-2);

pub fn run(a: &FigureArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<Outcome, CliError> {
    let loaded = load(&a.config)?;
    warn_all(&loaded, stderr);
    let table = match a.which {
        Figure::HarvestCurves => {
            let set = loaded.require_models()?;
            let xs = grid(
                HARVEST_SPAN_DBM.0,
                HARVEST_SPAN_DBM.1,
                a.points.unwrap_or(251),
                Scale::Linear,
            )?;
            let mut header = vec!["input_dbm".to_string()];
            header.extend(set.iter().map(|(k, _)| k.name().to_string()));
            let mut t = Table::new(&header)?;
            for x in xs {
                let mut row = vec![num(x)];
                row.extend(set.iter().map(|(_, m)| num(m.value(dbm_to_mw(x)))));
                t.row(&row)?;
            }
            t
        }
        Figure::SensitivityOutage => {
            let dist = loaded.scenario.input_dist()?;
            let xs = grid(
                SENSITIVITY_SPAN_DBM.0,
                SENSITIVITY_SPAN_DBM.1,
                a.points.unwrap_or(31),
                Scale::Linear,
            )?;
            let mut t = Table::new(&["p_sen_dbm", "p_a"])?;
            for x in xs {
                t.row(&[num(x), num(dist.cdf(dbm_to_mw(x))?)])?;
            }
            t
        }
        Figure::SuccessVsPc => {
            let set = loaded.require_models()?;
            let xs = grid(
                CONSUMPTION_SPAN_MW.0,
                CONSUMPTION_SPAN_MW.1,
                a.points.unwrap_or(41),
                Scale::Log,
            )?;
            let mut header = vec!["p_c_mw".to_string()];
            header.extend(set.iter().map(|(k, _)| k.name().to_string()));
            let mut t = Table::new(&header)?;
            let scenarios: Vec<_> = set.iter().map(|(_, m)| loaded.with_model(m)).collect();
            for x in xs {
                let mut row = vec![num(x)];
                for s in &scenarios {
                    row.push(num(success_probability(&s.with_consumption(x)?)?.p_success));
                }
                t.row(&row)?;
            }
            t
        }
    };
    emit(a.out.as_deref(), &table.into_bytes()?, stdout)?;
    Ok(Outcome::Done)
}
