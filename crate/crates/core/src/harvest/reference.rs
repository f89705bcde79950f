//! The synthetic rectifier used for the bundled dataset.
//!
//! Efficiency in dBm, with `t = (D + 38)/18` on `[−38, −20]` dBm:
//!
//! ```text
//! η(D) = 0.3 · (1 − (1 − t)³)²
//! ```
//!
//! so `η(−38) = 0` (no output at sensitivity), `η` rises smoothly to 30% at
//! `−20` dBm with zero slope there, and `p(x) = η·x` saturates at 3 µW.
//! This is a stand-in with plausible ultra-low-power rectifier behavior, not
//! measured data.

use super::{GroundTruthPoly, HarvestModel};
use crate::numerics::{dbm_to_mw, lit, Scalar};

pub const SYNTHETIC_P_SEN_DBM: f64 = -38.0;
pub const SYNTHETIC_P_SAT_DBM: f64 = -20.0;
const PEAK_EFFICIENCY: f64 = 0.3;

/// Monomial coefficients `w_0 … w_6` (in powers of dBm) of the synthetic
/// efficiency polynomial.
pub fn synthetic_coefficients() -> Vec<f64> {
    // 1 − (1 − t)³ with 1 − t = −(D + 20)/18, squared:
    // 1 + 2 (D+20)³/18³ + (D+20)⁶/18⁶
    let shift = [20.0, 1.0]; // D + 20
    let cube = poly_pow(&shift, 3);
    let sixth = poly_pow(&shift, 6);
    let mut w = [0.0; 7];
    w[0] = 1.0;
    for (i, c) in cube.iter().enumerate() {
        w[i] += 2.0 * c / 18f64.powi(3);
    }
    for (i, c) in sixth.iter().enumerate() {
        w[i] += c / 18f64.powi(6);
    }
    w.iter().map(|c| c * PEAK_EFFICIENCY).collect()
}

fn poly_pow(p: &[f64], n: usize) -> Vec<f64> {
    (0..n).fold(vec![1.0], |acc, _| {
        let mut out = vec![0.0; acc.len() + p.len() - 1];
        for (i, a) in acc.iter().enumerate() {
            for (j, b) in p.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        out
    })
}

/// The synthetic ground-truth model on `[−38, −20]` dBm.
pub fn synthetic_rectifier<T: Scalar>() -> HarvestModel<T> {
    let coeffs = synthetic_coefficients().into_iter().map(lit).collect();
    HarvestModel::GroundTruthPoly(GroundTruthPoly::new_unchecked(
        coeffs,
        dbm_to_mw(lit(SYNTHETIC_P_SEN_DBM)),
        dbm_to_mw(lit(SYNTHETIC_P_SAT_DBM)),
    ))
}
