//! Calibration of the harvesting models against measured rectifier data.
//!
//! Linear-in-parameter models (ground truth, linear, constant-linear and
//! both quadratics) are solved by least squares; the two sigmoids by a
//! multi-start simplex search. Every fit returns a [`FitReport`] whose
//! `sse` is recomputed from the fitted model over the whole dataset.

use crate::error::{Error, Result};
use crate::harvest::{GroundTruthPoly, HarvestModel, PiecewiseLinear, MAX_POLY_DEGREE};
use crate::numerics::{dbm_to_mw, lit, Scalar};

mod dataset;
mod lsq;
mod simplex;

pub use dataset::{load_dataset, parse_dataset, HarvesterDataset, DATASET_HEADER};

/// Upper bound on simplex restarts per sigmoid start point.
pub const MAX_RESTARTS: usize = 50;

const SIMPLEX_TOL: f64 = 1e-9;
const SIMPLEX_MAX_ITER: usize = 20_000;
/// Slack when selecting points inside a dBm interval.
const DBM_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct FitReport<T> {
    pub model: HarvestModel<T>,
    /// Sum of squared power residuals over the dataset, mW².
    pub sse: T,
    /// Largest absolute power residual, mW.
    pub max_abs_err: T,
    pub iterations: usize,
    pub converged: bool,
}

impl<T: Scalar> FitReport<T> {
    /// Scores `model` against every point of `data`.
    pub fn assess(model: HarvestModel<T>, data: &HarvesterDataset<T>, iterations: usize, converged: bool) -> Self {
        let (sse, max_abs_err) = data.points_mw().fold((T::zero(), T::zero()), |(s, m), (x, v)| {
            let r = model.value(x) - v;
            (s + r * r, m.max(r.abs()))
        });
        FitReport {
            model,
            sse,
            max_abs_err,
            iterations,
            converged,
        }
    }
}

fn closed_form<T: Scalar>(model: HarvestModel<T>, data: &HarvesterDataset<T>) -> FitReport<T> {
    FitReport::assess(model, data, 0, true)
}

/// Least-squares fit of the dBm-domain efficiency polynomial of degree `degree`
/// to the efficiency targets `v/q` of the points inside `[p_sen, p_sat]` dBm.
pub fn fit_ground_truth<T: Scalar>(
    data: &HarvesterDataset<T>,
    degree: usize,
    p_sen_dbm: T,
    p_sat_dbm: T,
) -> Result<FitReport<T>> {
    if degree > MAX_POLY_DEGREE {
        return Err(Error::InvalidParameter(format!(
            "degree {degree} exceeds {MAX_POLY_DEGREE}"
        )));
    }
    if !(p_sen_dbm < p_sat_dbm) {
        return Err(Error::InvalidParameter(format!(
            "P_sen {p_sen_dbm} dBm must lie below P_sat {p_sat_dbm} dBm"
        )));
    }
    let slack = lit::<T>(DBM_SLACK);
    let (rows, targets) = ground_truth_design(data, degree, p_sen_dbm - slack, p_sat_dbm + slack);
    if rows.len() < degree + 1 {
        return Err(Error::InsufficientData(format!(
            "{} points in [{p_sen_dbm}, {p_sat_dbm}] dBm for degree {degree}",
            rows.len()
        )));
    }
    let w = lsq::solve(&rows, &targets)?;
    let gt = GroundTruthPoly::new(w, dbm_to_mw(p_sen_dbm), dbm_to_mw(p_sat_dbm))?;
    Ok(closed_form(HarvestModel::GroundTruthPoly(gt), data))
}

fn ground_truth_design<T: Scalar>(data: &HarvesterDataset<T>, degree: usize, lo: T, hi: T) -> (Vec<Vec<T>>, Vec<T>) {
    data.input_dbm()
        .iter()
        .zip(data.harvested_mw())
        .filter(|(d, _)| **d >= lo && **d <= hi)
        .map(|(&d, &v)| {
            let row = std::iter::successors(Some(T::one()), |p| Some(*p * d))
                .take(degree + 1)
                .collect();
            (row, v / dbm_to_mw(d))
        })
        .unzip()
}

/// Squared error of an efficiency polynomial on the targets of
/// [`fit_ground_truth`], the objective that fit minimizes.
pub fn ground_truth_objective<T: Scalar>(data: &HarvesterDataset<T>, model: &GroundTruthPoly<T>) -> T {
    let slack = lit::<T>(DBM_SLACK);
    let to_dbm = |x: T| lit::<T>(10.0) * x.log10();
    let (lo, hi) = (to_dbm(model.p_sen()) - slack, to_dbm(model.p_sat()) + slack);
    data.input_dbm()
        .iter()
        .zip(data.harvested_mw())
        .filter(|(d, _)| **d >= lo && **d <= hi)
        .map(|(&d, &v)| {
            let r = model.efficiency_dbm(d) - v / dbm_to_mw(d);
            r * r
        })
        .fold(T::zero(), |a, b| a + b)
}

/// `p(x) = η x` through the origin, all points.
pub fn fit_linear<T: Scalar>(data: &HarvesterDataset<T>) -> Result<FitReport<T>> {
    let (rows, y): (Vec<Vec<T>>, Vec<T>) = data.points_mw().map(|(x, v)| (vec![x], v)).unzip();
    let w = lsq::solve(&rows, &y)?;
    Ok(closed_form(HarvestModel::Linear { efficiency: w[0] }, data))
}

/// `p(x) = η (x − P_sen)` on the points above `P_sen`.
pub fn fit_constant_linear<T: Scalar>(data: &HarvesterDataset<T>, p_sen_dbm: T) -> Result<FitReport<T>> {
    let p_sen = dbm_to_mw(p_sen_dbm);
    let (rows, y) = above(data, p_sen, |u| vec![u]);
    let w = lsq::solve(&rows, &y)?;
    Ok(closed_form(
        HarvestModel::ConstantLinear {
            efficiency: w[0],
            p_sen,
        },
        data,
    ))
}

/// `p(x) = a x² + b x + c` in mW, all points.
pub fn fit_quadratic<T: Scalar>(data: &HarvesterDataset<T>) -> Result<FitReport<T>> {
    if data.len() < 3 {
        return Err(Error::InsufficientData(format!("{} points, need 3", data.len())));
    }
    let (rows, y): (Vec<Vec<T>>, Vec<T>) = data.points_mw().map(|(x, v)| (vec![x * x, x, T::one()], v)).unzip();
    let w = lsq::solve(&rows, &y)?;
    Ok(closed_form(
        HarvestModel::Quadratic {
            a: w[0],
            b: w[1],
            c: w[2],
        },
        data,
    ))
}

/// `p(x) = a (x − P_sen)² + b (x − P_sen)` on the points above `P_sen`.
pub fn fit_quadratic_sens<T: Scalar>(data: &HarvesterDataset<T>, p_sen_dbm: T) -> Result<FitReport<T>> {
    let p_sen = dbm_to_mw(p_sen_dbm);
    let (rows, y) = above(data, p_sen, |u| vec![u * u, u]);
    let w = lsq::solve(&rows, &y)?;
    Ok(closed_form(
        HarvestModel::QuadraticSens {
            a: w[0],
            b: w[1],
            p_sen,
        },
        data,
    ))
}

fn above<T: Scalar>(data: &HarvesterDataset<T>, p_sen: T, row: impl Fn(T) -> Vec<T>) -> (Vec<Vec<T>>, Vec<T>) {
    data.points_mw()
        .filter(|(x, _)| *x > p_sen)
        .map(|(x, v)| (row(x - p_sen), v))
        .unzip()
}

#[derive(Clone, Copy)]
enum Sigmoid<T> {
    Norm,
    Sens { p_sen: T },
}

impl<T: Scalar> Sigmoid<T> {
    /// Search coordinates are `(ln a, b', ln c)` with `b' = b/x_ref` for the
    /// normalized form and `b' = b` for the sensitivity form.
    fn model(self, z: &[T], x_ref: T) -> HarvestModel<T> {
        let (a, c) = (z[0].exp(), z[2].exp());
        match self {
            Sigmoid::Norm => HarvestModel::SigmoidNorm { a, b: z[1] * x_ref, c },
            Sigmoid::Sens { p_sen } => HarvestModel::SigmoidSens { a, b: z[1], c, p_sen },
        }
    }

    fn start(self, a: T, x_half: T, v_max: T) -> Vec<T> {
        let b = match self {
            Sigmoid::Norm => T::one(),
            Sigmoid::Sens { .. } => a * x_half,
        };
        vec![a.ln(), b, v_max.ln()]
    }

    fn steps(self) -> Vec<T> {
        match self {
            Sigmoid::Norm => vec![T::one(), lit(0.25), lit(0.1)],
            Sigmoid::Sens { .. } => vec![T::one(), T::one(), lit(0.1)],
        }
    }
}

struct SigmoidProblem<'a, T> {
    data: &'a HarvesterDataset<T>,
    kind: Sigmoid<T>,
    x_half: T,
    v_max: T,
    norm: T,
}

impl<'a, T: Scalar> SigmoidProblem<'a, T> {
    fn new(data: &'a HarvesterDataset<T>, kind: Sigmoid<T>) -> Result<Self> {
        if data.len() < 4 {
            return Err(Error::InsufficientData(format!("{} points, need 4", data.len())));
        }
        let v_max = data.harvested_mw().iter().copied().fold(T::zero(), T::max);
        if v_max <= T::zero() {
            return Err(Error::InsufficientData("all harvested powers are zero".into()));
        }
        let half = v_max * lit(0.5);
        let x_half = data
            .points_mw()
            .find(|(_, v)| *v >= half)
            .map(|(x, _)| x)
            .expect("maximum is attained");
        let norm = data
            .harvested_mw()
            .iter()
            .map(|v| *v * *v)
            .fold(T::zero(), |a, b| a + b);
        Ok(SigmoidProblem {
            data,
            kind,
            x_half,
            v_max,
            norm,
        })
    }

    fn objective(&self, z: &[T]) -> T {
        let m = self.kind.model(z, self.x_half);
        self.data
            .points_mw()
            .map(|(x, v)| {
                let r = m.value(x) - v;
                r * r
            })
            .fold(T::zero(), |a, b| a + b)
            / self.norm
    }

    fn starts(&self) -> Vec<Vec<T>> {
        (-1..=5)
            .map(|k| self.kind.start(lit::<T>(10f64.powi(k)), self.x_half, self.v_max))
            .collect()
    }

    fn solve(&self) -> FitReport<T> {
        let f = |z: &[T]| self.objective(z);
        let steps = self.kind.steps();
        let tol = lit::<T>(SIMPLEX_TOL);
        let mut best: Option<(Vec<T>, T, bool)> = None;
        let mut iterations = 0;
        for start in self.starts() {
            let mut out = simplex::minimize(f, &start, &steps, tol, SIMPLEX_MAX_ITER);
            iterations += out.iterations;
            // restart from the incumbent until a fresh simplex stops moving it
            for _ in 0..MAX_RESTARTS {
                let again = simplex::minimize(f, &out.x, &steps, tol, SIMPLEX_MAX_ITER);
                iterations += again.iterations;
                let settled = again.converged && !(again.f < out.f);
                if again.f <= out.f {
                    out = again;
                }
                if settled {
                    break;
                }
            }
            if best.as_ref().is_none_or(|b| out.f < b.1) {
                best = Some((out.x, out.f, out.converged));
            }
        }
        let (z, _, converged) = best.expect("at least one start");
        FitReport::assess(self.kind.model(&z, self.x_half), self.data, iterations, converged)
    }
}

/// Normalized logistic fit by multi-start simplex search.
pub fn fit_sigmoid_norm<T: Scalar>(data: &HarvesterDataset<T>) -> Result<FitReport<T>> {
    Ok(SigmoidProblem::new(data, Sigmoid::Norm)?.solve())
}

/// Logistic-with-sensitivity fit by multi-start simplex search.
pub fn fit_sigmoid_sens<T: Scalar>(data: &HarvesterDataset<T>, p_sen_dbm: T) -> Result<FitReport<T>> {
    let kind = Sigmoid::Sens {
        p_sen: dbm_to_mw(p_sen_dbm),
    };
    Ok(SigmoidProblem::new(data, kind)?.solve())
}

/// The models the sigmoid fits start their simplex searches from.
pub fn sigmoid_start_models<T: Scalar>(
    data: &HarvesterDataset<T>,
    p_sen_dbm: Option<T>,
) -> Result<Vec<HarvestModel<T>>> {
    let kind = match p_sen_dbm {
        None => Sigmoid::Norm,
        Some(d) => Sigmoid::Sens { p_sen: dbm_to_mw(d) },
    };
    let p = SigmoidProblem::new(data, kind)?;
    Ok(p.starts().iter().map(|z| kind.model(z, p.x_half)).collect())
}

/// Piecewise-linear model with one breakpoint per data point. Leading
/// zero-output points become flat segments below the measured sensitivity.
pub fn build_piecewise<T: Scalar>(data: &HarvesterDataset<T>) -> Result<HarvestModel<T>> {
    let pts: Vec<(T, T)> = data.points_mw().collect();
    if pts[0].1 != T::zero() {
        return Err(Error::InvalidModel(format!(
            "first harvested power is {} mW, the curve must start at 0",
            pts[0].1
        )));
    }
    Ok(HarvestModel::Piecewise(PiecewiseLinear::new(&pts)?))
}

#[cfg(test)]
mod tests;
