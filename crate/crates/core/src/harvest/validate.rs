use std::fmt;

use super::{HarvestModel, MAX_POLY_DEGREE};
use crate::numerics::{lit, Scalar};

const GRID_POINTS: usize = 1000;
const MONOTONE_RTOL: f64 = 1e-12;
/// Rounding slack on efficiencies, so a fitted curve that vanishes at its
/// sensitivity is not rejected for being `-1e-17` there.
const EFFICIENCY_ATOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    InvalidParameter,
    NonFinite,
    Negative,
    NotMonotone,
    EfficiencyOutOfRange,
    Discontinuous,
}

/// One broken model invariant. At most one violation per kind is reported,
/// located at the first offending input.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Input power (mW) where it was found, if it is a point property.
    pub at_mw: Option<f64>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.at_mw {
            Some(x) => write!(f, "{:?} at {x:e} mW: {}", self.kind, self.detail),
            None => write!(f, "{:?}: {}", self.kind, self.detail),
        }
    }
}

pub(crate) fn summarize(v: &[Violation]) -> String {
    v.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

#[derive(Default)]
struct Collector(Vec<Violation>);

impl Collector {
    fn push<T: Scalar>(&mut self, kind: ViolationKind, at: Option<T>, detail: impl Into<String>) {
        if self.0.iter().any(|v| v.kind == kind) {
            return;
        }
        self.0.push(Violation {
            kind,
            at_mw: at.and_then(|x| x.to_f64()),
            detail: detail.into(),
        });
    }
}

/// Grid check of nonnegativity, finiteness, monotonicity up to saturation,
/// continuity and parameter ranges. Empty iff the model is well formed.
pub fn validate_model<T: Scalar>(model: &HarvestModel<T>) -> Vec<Violation> {
    use ViolationKind::*;
    let mut out = Collector::default();
    let zero = T::zero();
    let one = T::one();
    let bad = |x: T| !x.is_finite();

    match *model {
        HarvestModel::Linear { efficiency } => {
            if !(efficiency > zero && efficiency <= one) {
                out.push(InvalidParameter, None::<T>, "efficiency outside (0, 1]");
            }
        }
        HarvestModel::ConstantLinear { efficiency, p_sen } => {
            if !(efficiency > zero && efficiency <= one) {
                out.push(InvalidParameter, None::<T>, "efficiency outside (0, 1]");
            }
            if !(p_sen >= zero) || bad(p_sen) {
                out.push(InvalidParameter, None::<T>, "P_sen must be >= 0");
            }
        }
        HarvestModel::SigmoidNorm { a, b, c } => {
            if !(a > zero) || !(c > zero) || bad(a) || bad(b) || bad(c) {
                out.push(InvalidParameter, None::<T>, "need a > 0, c > 0, finite b");
            }
        }
        HarvestModel::SigmoidSens { a, b, c, p_sen } => {
            if !(a > zero) || !(c > zero) || bad(a) || bad(b) || bad(c) {
                out.push(InvalidParameter, None::<T>, "need a > 0, c > 0, finite b");
            }
            if !(p_sen >= zero) || bad(p_sen) {
                out.push(InvalidParameter, None::<T>, "P_sen must be >= 0");
            }
        }
        HarvestModel::Quadratic { a, b, c } => {
            if bad(a) || bad(b) || bad(c) {
                out.push(InvalidParameter, None::<T>, "non-finite coefficient");
            }
        }
        HarvestModel::QuadraticSens { a, b, p_sen } => {
            if bad(a) || bad(b) {
                out.push(InvalidParameter, None::<T>, "non-finite coefficient");
            }
            if !(p_sen >= zero) || bad(p_sen) {
                out.push(InvalidParameter, None::<T>, "P_sen must be >= 0");
            }
        }
        HarvestModel::Piecewise(ref pw) => {
            let (q, v) = (pw.breakpoints(), pw.values());
            if q.len() < 2 {
                out.push(InvalidParameter, None::<T>, "fewer than two breakpoints");
            }
            if q.iter().chain(v).any(|&x| bad(x)) {
                out.push(NonFinite, None::<T>, "non-finite breakpoint");
            }
            if q.first().is_some_and(|&q0| !(q0 >= zero)) {
                out.push(InvalidParameter, None::<T>, "q_0 must be >= 0");
            }
            if v.first().is_some_and(|&v0| v0 != zero) {
                out.push(InvalidParameter, q.first().copied(), "v_0 must be 0");
            }
            for j in 1..q.len() {
                if !(q[j] > q[j - 1]) {
                    out.push(InvalidParameter, Some(q[j]), "q not strictly increasing");
                }
                if v[j] < v[j - 1] {
                    out.push(NotMonotone, Some(q[j]), "v decreases");
                }
                let right = pw.slopes()[j - 1] * (q[j] - q[j - 1]) + v[j - 1];
                let tol = lit::<T>(MONOTONE_RTOL) * v[j].abs().max(v[j - 1].abs());
                if !((right - v[j]).abs() <= tol) {
                    out.push(Discontinuous, Some(q[j]), "segment end does not meet v_j");
                }
            }
        }
        HarvestModel::GroundTruthPoly(ref gt) => {
            if gt.coeffs().is_empty() || gt.degree() > MAX_POLY_DEGREE {
                out.push(
                    InvalidParameter,
                    None::<T>,
                    format!("degree must be 0..={MAX_POLY_DEGREE}"),
                );
            }
            if gt.coeffs().iter().any(|&w| bad(w)) {
                out.push(InvalidParameter, None::<T>, "non-finite coefficient");
            }
            if !(gt.p_sen() > zero && gt.p_sen() < gt.p_sat()) || bad(gt.p_sat()) {
                out.push(InvalidParameter, None::<T>, "need 0 < P_sen < P_sat");
            } else {
                let (lo, hi) = (gt.p_sen().log10(), gt.p_sat().log10());
                let n = lit::<T>((GRID_POINTS - 1) as f64);
                for i in 0..GRID_POINTS {
                    let x = lit::<T>(10.0).powf(lo + (hi - lo) * lit(i as f64) / n);
                    let eta = gt.efficiency(x);
                    let tol = lit::<T>(EFFICIENCY_ATOL);
                    if !(eta >= -tol && eta <= one + tol) {
                        out.push(EfficiencyOutOfRange, Some(x), "efficiency outside [0, 1]");
                        break;
                    }
                }
            }
        }
    }

    if out.0.iter().all(|v| v.kind != InvalidParameter) {
        grid_check(model, &mut out);
    }
    out.0
}

fn grid_check<T: Scalar>(model: &HarvestModel<T>, out: &mut Collector) {
    use ViolationKind::*;
    let zero = T::zero();
    let th = model.effective_thresholds();
    let upper = if th.p_sat_eff.is_finite() && th.p_sat_eff > zero {
        th.p_sat_eff
    } else {
        let base = if th.p_sen_eff.is_finite() { th.p_sen_eff } else { zero };
        let scale = match *model {
            HarvestModel::SigmoidNorm { a, b, .. } => b + lit::<T>(20.0) / a,
            HarvestModel::SigmoidSens { a, b, .. } => (b + lit::<T>(20.0)) / a,
            _ => T::one(),
        };
        (base * lit(10.0)).max(scale).max(lit(1e-9))
    };
    let mut lower = upper * lit(1e-6);
    if th.p_sen_eff.is_finite() && th.p_sen_eff > zero {
        lower = lower.min(th.p_sen_eff / lit(10.0));
    }
    let (l0, l1) = (lower.log10(), upper.log10());
    let n = lit::<T>((GRID_POINTS - 2) as f64);
    let grid = std::iter::once(zero)
        .chain((0..GRID_POINTS - 1).map(|i| lit::<T>(10.0).powf(l0 + (l1 - l0) * lit(i as f64) / n)));

    let mut prev: Option<T> = None;
    for x in grid {
        let y = model.value(x);
        if !y.is_finite() {
            out.push(NonFinite, Some(x), "non-finite output");
            continue;
        }
        if y < -lit::<T>(EFFICIENCY_ATOL) * x {
            out.push(Negative, Some(x), "negative harvested power");
        }
        if let Some(p) = prev {
            if x <= th.p_sat_eff && y < p - lit::<T>(MONOTONE_RTOL) * p.abs() {
                out.push(NotMonotone, Some(x), "output decreases before saturation");
            }
        }
        prev = Some(y);
    }
}
