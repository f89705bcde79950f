//! Inverse transfer functions `p⁻¹(y)` on the increasing branch.
//!
//! Where `p` has flat stretches the result is `sup{x : p(x) <= y}`, which is
//! the threshold that makes `{p(x) <= y}` equal to `{x <= p⁻¹(y)}`.

use super::{HarvestModel, Scalar};
use crate::error::{Error, Result};
use crate::numerics::lit;

const MAX_EXPANSIONS: usize = 2100;
const MAX_BISECTIONS: usize = 2000;

impl<T: Scalar> HarvestModel<T> {
    /// Input power (mW) at which the model delivers `y` mW.
    ///
    /// Fails with [`Error::Unreachable`] when `y` is at or above the supremum
    /// of the model and with a domain error for `y <= 0`.
    pub fn invert(&self, y: T) -> Result<T> {
        if !(y > T::zero()) {
            return Err(Error::domain("harvest invert", y, "y > 0 mW"));
        }
        let th = self.effective_thresholds();
        if y >= th.p_max {
            return Err(unreachable(y, th.p_max));
        }
        let two = lit::<T>(2.0);
        match *self {
            HarvestModel::Linear { efficiency } => Ok(y / efficiency),
            HarvestModel::ConstantLinear { efficiency, p_sen } => Ok(p_sen + y / efficiency),
            HarvestModel::QuadraticSens { a, b, p_sen } => {
                let u = if a == T::zero() {
                    y / b
                } else if b > T::zero() {
                    // smaller root, written to avoid cancellation
                    two * y / (b + (b * b + lit::<T>(4.0) * a * y).sqrt())
                } else {
                    (-b + (b * b + lit::<T>(4.0) * a * y).sqrt()) / (two * a)
                };
                Ok(p_sen + u)
            }
            HarvestModel::Piecewise(ref pw) => {
                let (q, v) = (pw.breakpoints(), pw.values());
                // first j with v_j > y; then v_{j-1} <= y < v_j
                let j = v.partition_point(|&vj| vj <= y);
                if j == 0 {
                    return Ok(q[0]);
                }
                if v[j - 1] == y {
                    return Ok(q[j - 1]);
                }
                Ok(q[j - 1] + (y - v[j - 1]) / pw.slopes()[j - 1])
            }
            HarvestModel::SigmoidNorm { a, b, .. } => {
                self.bisect(y, th.p_sen_eff, th.p_sat_eff, b.abs() + T::one() / a.abs())
            }
            HarvestModel::SigmoidSens { a, b, p_sen, .. } => {
                self.bisect(y, th.p_sen_eff, th.p_sat_eff, p_sen + (b.abs() + T::one()) / a.abs())
            }
            HarvestModel::Quadratic { a, b, .. } => {
                let mut start = th.p_sen_eff;
                if a > T::zero() && b < T::zero() {
                    start = start.max(-b / (two * a));
                }
                self.bisect(y, start, th.p_sat_eff, T::one())
            }
            HarvestModel::GroundTruthPoly(_) => self.bisect(y, th.p_sen_eff, th.p_sat_eff, th.p_sat_eff),
        }
    }

    /// `sup{x in [lo, hi] : p(x) <= y}` assuming `p` nondecreasing there.
    fn bisect(&self, y: T, lo: T, hi: T, scale_hint: T) -> Result<T> {
        let two = lit::<T>(2.0);
        let mut lo = lo.max(T::zero());
        if self.value(lo) > y {
            return Ok(lo);
        }
        let mut hi = if hi.is_finite() {
            hi
        } else {
            let mut h = if lo > T::zero() { lo * two } else { scale_hint };
            if !(h > lo) || !h.is_finite() {
                h = lo + T::one();
            }
            let mut n = 0;
            while self.value(h) <= y {
                lo = h;
                h = h * two;
                n += 1;
                if n > MAX_EXPANSIONS || !h.is_finite() {
                    return Err(unreachable(y, self.effective_thresholds().p_max));
                }
            }
            h
        };
        if self.value(hi) <= y {
            return Ok(hi);
        }
        for _ in 0..MAX_BISECTIONS {
            let mid = lo + (hi - lo) / two;
            if mid <= lo || mid >= hi {
                break;
            }
            if self.value(mid) <= y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }
}

fn unreachable<T: Scalar>(y: T, p_max: T) -> Error {
    Error::Unreachable {
        demand: y.to_f64().unwrap_or(f64::NAN),
        p_max: p_max.to_f64().unwrap_or(f64::NAN),
    }
}
