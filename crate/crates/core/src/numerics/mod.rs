//! Scalar abstraction, power units and special functions.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

mod special;
mod units;

pub use special::{ln_gamma, q_func, q_inv, r_func, r_inv, reg_lower_gamma, reg_upper_gamma};
pub use units::{dbm_to_mw, mw_to_dbm, watt_to_mw, PowerDbm, PowerLin, Probability, ZeroPower};

/// Floating-point type the library computes in (`f32` or `f64`).
pub trait Scalar: Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static {}

impl<T> Scalar for T where T: Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static {}

/// Converts an `f64` literal into `T`.
#[inline(always)]
pub(crate) fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}
