//! Harvested-power transfer functions `p(x)`, all powers in mW.
//!
//! | variant | model |
//! |---|---|
//! | [`HarvestModel::Linear`] | `η_L·x` |
//! | [`HarvestModel::ConstantLinear`] | `η_CL·(x − P_sen)` above `P_sen` |
//! | [`HarvestModel::SigmoidNorm`] | normalized logistic, zero at the origin |
//! | [`HarvestModel::SigmoidSens`] | logistic with sensitivity and an outer `max{·, 0}` |
//! | [`HarvestModel::Quadratic`] | `a x² + b x + c`, clamped at 0 |
//! | [`HarvestModel::QuadraticSens`] | `a (x − P_sen)² + b (x − P_sen)` above `P_sen` |
//! | [`HarvestModel::Piecewise`] | linear interpolation through measured pairs |
//! | [`HarvestModel::GroundTruthPoly`] | dBm-domain efficiency polynomial times `x` |
//!
//! Only the piecewise and ground-truth models saturate. The others are
//! evaluated as written; [`Harvester`] adds an optional input clamp.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numerics::{lit, Scalar};

mod invert;
pub mod reference;
mod validate;

pub use validate::{validate_model, Violation, ViolationKind};

/// Highest supported degree of the ground-truth efficiency polynomial.
pub const MAX_POLY_DEGREE: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub enum HarvestModel<T> {
    Linear {
        efficiency: T,
    },
    ConstantLinear {
        efficiency: T,
        p_sen: T,
    },
    /// `a` in 1/mW, `b` and `c` in mW.
    SigmoidNorm {
        a: T,
        b: T,
        c: T,
    },
    /// `a` in 1/mW, `b` dimensionless, `c` in mW.
    SigmoidSens {
        a: T,
        b: T,
        c: T,
        p_sen: T,
    },
    /// `a` in 1/mW, `b` dimensionless, `c` in mW.
    Quadratic {
        a: T,
        b: T,
        c: T,
    },
    QuadraticSens {
        a: T,
        b: T,
        p_sen: T,
    },
    Piecewise(PiecewiseLinear<T>),
    GroundTruthPoly(GroundTruthPoly<T>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelKind {
    GroundTruth,
    Linear,
    ConstantLinear,
    SigmoidNorm,
    SigmoidSens,
    Quadratic,
    QuadraticSens,
    Piecewise,
}

impl ModelKind {
    pub const ALL: [ModelKind; 8] = [
        ModelKind::GroundTruth,
        ModelKind::Linear,
        ModelKind::ConstantLinear,
        ModelKind::SigmoidNorm,
        ModelKind::SigmoidSens,
        ModelKind::Quadratic,
        ModelKind::QuadraticSens,
        ModelKind::Piecewise,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::GroundTruth => "ground-truth",
            ModelKind::Linear => "linear",
            ModelKind::ConstantLinear => "constant-linear",
            ModelKind::SigmoidNorm => "sigmoid-norm",
            ModelKind::SigmoidSens => "sigmoid-sens",
            ModelKind::Quadratic => "quadratic",
            ModelKind::QuadraticSens => "quadratic-sens",
            ModelKind::Piecewise => "piecewise",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown model kind `{s}`"))
    }
}

/// Sensitivity, saturation and supremum of a transfer function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds<T> {
    /// Infimum of inputs with positive output (`+∞` if the output is never positive).
    pub p_sen_eff: T,
    /// Smallest input attaining the supremum (`+∞` if not attained).
    pub p_sat_eff: T,
    /// Supremum of the output (`+∞` if unbounded).
    pub p_max: T,
}

/// Rectifier model: `0` below `P_sen`, `η(10·log10 x)·x` on
/// `[P_sen, P_sat]`, constant `p(P_sat)` above.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruthPoly<T> {
    coeffs: Vec<T>,
    p_sen: T,
    p_sat: T,
}

impl<T: Scalar> GroundTruthPoly<T> {
    /// Validated construction; efficiency in `[0, 1]` and `p` increasing on
    /// `[P_sen, P_sat]` are grid-checked.
    pub fn new(coeffs: Vec<T>, p_sen_mw: T, p_sat_mw: T) -> Result<Self> {
        let poly = Self::new_unchecked(coeffs, p_sen_mw, p_sat_mw);
        let violations = validate_model(&HarvestModel::GroundTruthPoly(poly.clone()));
        if violations.is_empty() {
            Ok(poly)
        } else {
            Err(Error::InvalidModel(validate::summarize(&violations)))
        }
    }

    pub fn new_unchecked(coeffs: Vec<T>, p_sen_mw: T, p_sat_mw: T) -> Self {
        Self {
            coeffs,
            p_sen: p_sen_mw,
            p_sat: p_sat_mw,
        }
    }

    /// `w_0 … w_W`, lowest order first.
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn p_sen(&self) -> T {
        self.p_sen
    }

    pub fn p_sat(&self) -> T {
        self.p_sat
    }

    /// Efficiency polynomial at input `x` mW (Horner in dBm).
    pub fn efficiency(&self, x_mw: T) -> T {
        let d = lit::<T>(10.0) * x_mw.log10();
        self.efficiency_dbm(d)
    }

    pub fn efficiency_dbm(&self, dbm: T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, &w| acc * dbm + w)
    }

    fn value(&self, x: T) -> T {
        if x <= self.p_sen {
            T::zero()
        } else if x <= self.p_sat {
            (self.efficiency(x) * x).max(T::zero())
        } else {
            self.efficiency(self.p_sat) * self.p_sat
        }
    }
}

/// Linear interpolation through `(q_j, v_j)`, zero up to `q_0 = P_sen` and
/// constant `v_J` from `q_J = P_sat` on.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear<T> {
    q: Vec<T>,
    v: Vec<T>,
    slopes: Vec<T>,
}

impl<T: Scalar> PiecewiseLinear<T> {
    /// Requires at least two points, `q` strictly increasing, `v`
    /// nondecreasing and `v_0 = 0`.
    pub fn new(points: &[(T, T)]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidModel("piecewise model needs at least two points".into()));
        }
        let pw = Self::from_points_unchecked(points);
        let violations = validate_model(&HarvestModel::Piecewise(pw.clone()));
        if violations.is_empty() {
            Ok(pw)
        } else {
            Err(Error::InvalidModel(validate::summarize(&violations)))
        }
    }

    pub fn from_points_unchecked(points: &[(T, T)]) -> Self {
        let q: Vec<T> = points.iter().map(|p| p.0).collect();
        let v: Vec<T> = points.iter().map(|p| p.1).collect();
        let slopes = q
            .windows(2)
            .zip(v.windows(2))
            .map(|(qw, vw)| (vw[1] - vw[0]) / (qw[1] - qw[0]))
            .collect();
        Self { q, v, slopes }
    }

    pub fn breakpoints(&self) -> &[T] {
        &self.q
    }

    pub fn values(&self) -> &[T] {
        &self.v
    }

    /// `l_j = (v_j − v_{j−1})/(q_j − q_{j−1})`, `j = 1…J`.
    pub fn slopes(&self) -> &[T] {
        &self.slopes
    }

    pub fn points(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.q.iter().copied().zip(self.v.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    fn value(&self, x: T) -> T {
        let last = self.q.len() - 1;
        if x <= self.q[0] {
            return T::zero();
        }
        if x >= self.q[last] {
            return self.v[last];
        }
        // first j with q_j >= x, so x lies in (q_{j-1}, q_j]
        let j = self.q.partition_point(|&qj| qj < x);
        if self.q[j] == x {
            return self.v[j];
        }
        self.slopes[j - 1] * (x - self.q[j - 1]) + self.v[j - 1]
    }
}

impl<T: Scalar> HarvestModel<T> {
    pub fn kind(&self) -> ModelKind {
        match self {
            HarvestModel::Linear { .. } => ModelKind::Linear,
            HarvestModel::ConstantLinear { .. } => ModelKind::ConstantLinear,
            HarvestModel::SigmoidNorm { .. } => ModelKind::SigmoidNorm,
            HarvestModel::SigmoidSens { .. } => ModelKind::SigmoidSens,
            HarvestModel::Quadratic { .. } => ModelKind::Quadratic,
            HarvestModel::QuadraticSens { .. } => ModelKind::QuadraticSens,
            HarvestModel::Piecewise(_) => ModelKind::Piecewise,
            HarvestModel::GroundTruthPoly(_) => ModelKind::GroundTruth,
        }
    }

    /// Harvested power at input `x` mW.
    pub fn eval(&self, x: T) -> Result<T> {
        if !(x >= T::zero()) {
            return Err(Error::domain("harvest eval", x, "x >= 0 mW"));
        }
        Ok(self.value(x))
    }

    /// [`eval`](Self::eval) without the domain check; `x` must be `>= 0`.
    pub fn value(&self, x: T) -> T {
        let zero = T::zero();
        let one = T::one();
        match *self {
            HarvestModel::Linear { efficiency } => efficiency * x,
            HarvestModel::ConstantLinear { efficiency, p_sen } => {
                if x < p_sen {
                    zero
                } else {
                    efficiency * (x - p_sen)
                }
            }
            HarvestModel::SigmoidNorm { a, b, c } => {
                let offset = c / (one + (a * b).exp());
                let num = c / (one + (-a * (x - b)).exp()) - offset;
                let den = one - one / (one + (a * b).exp());
                num / den
            }
            HarvestModel::SigmoidSens { a, b, c, p_sen } => {
                let e = (-a * p_sen + b).exp();
                let v = c / e * ((one + e) / (one + (-a * x + b).exp()) - one);
                v.max(zero)
            }
            HarvestModel::Quadratic { a, b, c } => (a * x * x + b * x + c).max(zero),
            HarvestModel::QuadraticSens { a, b, p_sen } => {
                if x <= p_sen {
                    zero
                } else {
                    let u = x - p_sen;
                    (a * u * u + b * u).max(zero)
                }
            }
            HarvestModel::Piecewise(ref pw) => pw.value(x),
            HarvestModel::GroundTruthPoly(ref gt) => gt.value(x),
        }
    }

    pub fn effective_thresholds(&self) -> Thresholds<T> {
        let zero = T::zero();
        let inf = T::infinity();
        let two = lit::<T>(2.0);
        match *self {
            HarvestModel::Linear { .. } => Thresholds {
                p_sen_eff: zero,
                p_sat_eff: inf,
                p_max: inf,
            },
            HarvestModel::ConstantLinear { p_sen, .. } => Thresholds {
                p_sen_eff: p_sen,
                p_sat_eff: inf,
                p_max: inf,
            },
            HarvestModel::SigmoidNorm { c, .. } => Thresholds {
                p_sen_eff: zero,
                p_sat_eff: inf,
                p_max: c,
            },
            HarvestModel::SigmoidSens { c, p_sen, .. } => Thresholds {
                p_sen_eff: p_sen,
                p_sat_eff: inf,
                p_max: c,
            },
            HarvestModel::Quadratic { a, b, c } => {
                let p_sen_eff = quadratic_positive_from(a, b, c);
                let (p_sat_eff, p_max) = if a > zero || (a == zero && b > zero) {
                    (inf, inf)
                } else if a < zero && b > zero {
                    let vertex = -b / (two * a);
                    (vertex, self.value(vertex))
                } else {
                    (zero, c.max(zero))
                };
                Thresholds {
                    p_sen_eff,
                    p_sat_eff,
                    p_max,
                }
            }
            HarvestModel::QuadraticSens { a, b, p_sen } => {
                let p_sen_eff = if b > zero {
                    p_sen
                } else if a > zero {
                    p_sen - b / a
                } else {
                    inf
                };
                let (p_sat_eff, p_max) = if a >= zero && p_sen_eff.is_finite() {
                    (inf, inf)
                } else if a < zero && b > zero {
                    (p_sen - b / (two * a), -b * b / (lit::<T>(4.0) * a))
                } else {
                    (p_sen, zero)
                };
                Thresholds {
                    p_sen_eff,
                    p_sat_eff,
                    p_max,
                }
            }
            HarvestModel::Piecewise(ref pw) => {
                let v_max = *pw.v.last().expect("non-empty piecewise model");
                let zeros = pw.v.iter().take_while(|&&v| v <= zero).count();
                let p_sen_eff = if zeros == pw.v.len() {
                    inf
                } else {
                    pw.q[zeros.saturating_sub(1)]
                };
                let first_max = pw.v.iter().position(|&v| v >= v_max).unwrap_or(0);
                Thresholds {
                    p_sen_eff,
                    p_sat_eff: pw.q[first_max],
                    p_max: v_max,
                }
            }
            HarvestModel::GroundTruthPoly(ref gt) => Thresholds {
                p_sen_eff: gt.p_sen,
                p_sat_eff: gt.p_sat,
                p_max: gt.value(gt.p_sat),
            },
        }
    }

    /// Sensitivity parameter, for variants that model one.
    pub fn sensitivity(&self) -> Option<T> {
        match *self {
            HarvestModel::ConstantLinear { p_sen, .. }
            | HarvestModel::SigmoidSens { p_sen, .. }
            | HarvestModel::QuadraticSens { p_sen, .. } => Some(p_sen),
            HarvestModel::Piecewise(ref pw) => Some(pw.q[0]),
            HarvestModel::GroundTruthPoly(ref gt) => Some(gt.p_sen),
            _ => None,
        }
    }

    /// Copy with the sensitivity moved to `p_sen` mW. Models without a
    /// sensitivity parameter are returned unchanged. A piecewise model keeps
    /// its breakpoints above the new sensitivity and restarts from `(p_sen, 0)`;
    /// a ground-truth model is cut to zero below `p_sen`. Neither changes
    /// when `p_sen` lies below the point where its output already starts.
    pub fn with_sensitivity(&self, p_sen: T) -> Result<Self> {
        if !(p_sen >= T::zero()) || !p_sen.is_finite() {
            return Err(Error::domain("with_sensitivity", p_sen, "P_sen >= 0 mW"));
        }
        let mut out = self.clone();
        match out {
            HarvestModel::ConstantLinear { p_sen: ref mut s, .. }
            | HarvestModel::SigmoidSens { p_sen: ref mut s, .. }
            | HarvestModel::QuadraticSens { p_sen: ref mut s, .. } => *s = p_sen,
            HarvestModel::GroundTruthPoly(ref gt) if p_sen > gt.p_sen => {
                out = HarvestModel::GroundTruthPoly(GroundTruthPoly::new(gt.coeffs.clone(), p_sen, gt.p_sat)?);
            }
            HarvestModel::Piecewise(ref pw) if p_sen > pw.q[0] => {
                let mut pts = vec![(p_sen, T::zero())];
                pts.extend(pw.points().filter(|&(q, _)| q > p_sen));
                out = HarvestModel::Piecewise(PiecewiseLinear::new(&pts)?);
            }
            _ => {}
        }
        Ok(out)
    }
}

/// Infimum of `x >= 0` where `a x² + b x + c > 0`.
fn quadratic_positive_from<T: Scalar>(a: T, b: T, c: T) -> T {
    let zero = T::zero();
    if c > zero {
        return zero;
    }
    if a == zero {
        return if b > zero { -c / b } else { T::infinity() };
    }
    let disc = b * b - lit::<T>(4.0) * a * c;
    if disc < zero {
        return if a > zero { zero } else { T::infinity() };
    }
    let sq = disc.sqrt();
    let two_a = lit::<T>(2.0) * a;
    let (r1, r2) = {
        let x1 = (-b - sq) / two_a;
        let x2 = (-b + sq) / two_a;
        (x1.min(x2), x1.max(x2))
    };
    if a > zero {
        r2.max(zero)
    } else if r2 > zero {
        r1.max(zero)
    } else {
        T::infinity()
    }
}

/// A transfer function with an optional input-side saturation clamp
/// (off by default).
#[derive(Debug, Clone, PartialEq)]
pub struct Harvester<T> {
    pub model: HarvestModel<T>,
    /// Input power in mW above which the output is held constant.
    pub saturation_mw: Option<T>,
}

impl<T: Scalar> From<HarvestModel<T>> for Harvester<T> {
    fn from(model: HarvestModel<T>) -> Self {
        Self {
            model,
            saturation_mw: None,
        }
    }
}

impl<T: Scalar> Harvester<T> {
    pub fn with_saturation(model: HarvestModel<T>, saturation_mw: T) -> Result<Self> {
        if !(saturation_mw > T::zero()) {
            return Err(Error::domain("Harvester::with_saturation", saturation_mw, "> 0 mW"));
        }
        Ok(Self {
            model,
            saturation_mw: Some(saturation_mw),
        })
    }

    pub fn eval(&self, x: T) -> Result<T> {
        if !(x >= T::zero()) {
            return Err(Error::domain("harvest eval", x, "x >= 0 mW"));
        }
        Ok(self.value(x))
    }

    pub fn value(&self, x: T) -> T {
        match self.saturation_mw {
            Some(s) if x > s => self.model.value(s),
            _ => self.model.value(x),
        }
    }

    pub fn effective_thresholds(&self) -> Thresholds<T> {
        let t = self.model.effective_thresholds();
        match self.saturation_mw {
            Some(s) if s < t.p_sat_eff => Thresholds {
                p_sen_eff: t.p_sen_eff,
                p_sat_eff: s,
                p_max: self.model.value(s),
            },
            _ => t,
        }
    }

    pub fn invert(&self, y: T) -> Result<T> {
        let t = self.effective_thresholds();
        if y > T::zero() && y >= t.p_max {
            return Err(Error::Unreachable {
                demand: y.to_f64().unwrap_or(f64::NAN),
                p_max: t.p_max.to_f64().unwrap_or(f64::NAN),
            });
        }
        self.model.invert(y)
    }
}
