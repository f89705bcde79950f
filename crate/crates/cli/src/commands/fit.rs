use std::fmt::Write as _;
use std::io::Write;

use swipt_core::fit::load_dataset;
use swipt_core::harvest::validate_model;

use crate::config::model_file;
use crate::models::{fit_one, FitSettings};
use crate::{emit, CliError, FitArgs, Outcome};

pub fn run(a: &FitArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<Outcome, CliError> {
    let data = load_dataset::<f64>(&a.dataset)?;
    let settings = FitSettings::for_dataset(&data, a.degree, a.p_sen_dbm, a.p_sat_dbm)?;
    let r = fit_one(&data, a.model, &settings)?;
    for v in validate_model(&r.model) {
        writeln!(stderr, "warning: fitted model: {v}")?;
    }
    if !r.converged {
        writeln!(
            stderr,
            "warning: search stopped before converging; reporting the best point found"
        )?;
    }

    let file = model_file(&r.model);
    let mut text = String::new();
    let _ = writeln!(text, "model: {}", a.model);
    let _ = writeln!(text, "dataset: {} ({} points)", a.dataset.display(), data.len());
    let _ = writeln!(text, "sensitivity_dbm: {}", settings.p_sen_dbm);
    let _ = writeln!(text, "saturation_dbm: {}", settings.p_sat_dbm);
    let _ = writeln!(text, "sse_mw2: {:e}", r.sse);
    let _ = writeln!(text, "max_abs_err_mw: {:e}", r.max_abs_err);
    let _ = writeln!(text, "iterations: {}", r.iterations);
    let _ = writeln!(text, "converged: {}", r.converged);
    match &a.out {
        Some(path) => {
            emit(Some(path), file.as_bytes(), stdout)?;
            let _ = writeln!(text, "written: {}", path.display());
        }
        None => {
            let _ = writeln!(text);
            text.push_str(&file);
        }
    }
    stdout.write_all(text.as_bytes())?;
    Ok(Outcome::Done)
}
