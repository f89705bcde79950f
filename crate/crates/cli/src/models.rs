//! The eight harvesting models calibrated against one dataset.

use swipt_core::fit::{
    build_piecewise, fit_constant_linear, fit_ground_truth, fit_linear, fit_quadratic, fit_quadratic_sens,
    fit_sigmoid_norm, fit_sigmoid_sens, FitReport, HarvesterDataset,
};
use swipt_core::harvest::{HarvestModel, ModelKind};

use crate::CliError;

pub const DEFAULT_DEGREE: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitSettings {
    pub degree: usize,
    pub p_sen_dbm: f64,
    pub p_sat_dbm: f64,
}

impl FitSettings {
    /// Fills unset values from the data: the sensitivity is the last of the
    /// leading zero-output points, the saturation the last point.
    pub fn for_dataset(
        data: &HarvesterDataset<f64>,
        degree: Option<usize>,
        p_sen_dbm: Option<f64>,
        p_sat_dbm: Option<f64>,
    ) -> Result<Self, CliError> {
        let d = data.input_dbm();
        let v = data.harvested_mw();
        let measured_sen = match v.iter().position(|&x| x > 0.0) {
            Some(0) | None => d[0],
            Some(i) => d[i - 1],
        };
        let s = FitSettings {
            degree: degree.unwrap_or(DEFAULT_DEGREE),
            p_sen_dbm: p_sen_dbm.unwrap_or(measured_sen),
            p_sat_dbm: p_sat_dbm.unwrap_or(d[d.len() - 1]),
        };
        if !(s.p_sen_dbm < s.p_sat_dbm) {
            return Err(CliError::Input(format!(
                "sensitivity {} dBm must lie below saturation {} dBm",
                s.p_sen_dbm, s.p_sat_dbm
            )));
        }
        Ok(s)
    }
}

pub fn fit_one(data: &HarvesterDataset<f64>, kind: ModelKind, s: &FitSettings) -> Result<FitReport<f64>, CliError> {
    let r = match kind {
        ModelKind::GroundTruth => fit_ground_truth(data, s.degree, s.p_sen_dbm, s.p_sat_dbm)?,
        ModelKind::Linear => fit_linear(data)?,
        ModelKind::ConstantLinear => fit_constant_linear(data, s.p_sen_dbm)?,
        ModelKind::SigmoidNorm => fit_sigmoid_norm(data)?,
        ModelKind::SigmoidSens => fit_sigmoid_sens(data, s.p_sen_dbm)?,
        ModelKind::Quadratic => fit_quadratic(data)?,
        ModelKind::QuadraticSens => fit_quadratic_sens(data, s.p_sen_dbm)?,
        ModelKind::Piecewise => FitReport::assess(build_piecewise(data)?, data, 0, true),
    };
    Ok(r)
}

/// One fit per [`ModelKind`], in [`ModelKind::ALL`] order.
#[derive(Debug, Clone)]
pub struct ModelSet {
    pub settings: FitSettings,
    reports: Vec<(ModelKind, FitReport<f64>)>,
}

impl ModelSet {
    pub fn fit(data: &HarvesterDataset<f64>, settings: &FitSettings) -> Result<Self, CliError> {
        let reports = ModelKind::ALL
            .into_iter()
            .map(|k| fit_one(data, k, settings).map(|r| (k, r)))
            .collect::<Result<_, _>>()?;
        Ok(ModelSet {
            settings: *settings,
            reports,
        })
    }

    pub fn get(&self, kind: ModelKind) -> &HarvestModel<f64> {
        &self.report(kind).model
    }

    pub fn report(&self, kind: ModelKind) -> &FitReport<f64> {
        &self
            .reports
            .iter()
            .find(|(k, _)| *k == kind)
            .expect("every kind is fitted")
            .1
    }

    pub fn iter(&self) -> impl Iterator<Item = (ModelKind, &HarvestModel<f64>)> {
        self.reports.iter().map(|(k, r)| (*k, &r.model))
    }
}
