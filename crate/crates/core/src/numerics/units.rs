use super::{lit, Scalar};
use crate::error::{Error, Result};

/// Linear power in milliwatt.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct PowerLin<T>(T);

/// Power in dBm. May be −∞ for zero linear power.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct PowerDbm<T>(T);

/// A value in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Probability<T>(T);

/// What [`mw_to_dbm`] returns for zero power.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroPower {
    NegInfinity,
    Reject,
}

impl<T: Scalar> PowerLin<T> {
    pub fn new(mw: T) -> Result<Self> {
        if mw.is_finite() && mw >= T::zero() {
            Ok(Self(mw))
        } else {
            Err(Error::domain("PowerLin::new", mw, "finite and >= 0 mW"))
        }
    }

    pub fn from_watt(w: T) -> Result<Self> {
        Self::new(watt_to_mw(w))
    }

    pub fn mw(self) -> T {
        self.0
    }

    pub fn watt(self) -> T {
        self.0 / lit(1000.0)
    }

    /// dBm value; zero power maps to −∞.
    pub fn to_dbm(self) -> PowerDbm<T> {
        PowerDbm(lit::<T>(10.0) * self.0.log10())
    }
}

impl<T: Scalar> PowerDbm<T> {
    pub fn new(dbm: T) -> Result<Self> {
        if dbm.is_nan() || dbm == T::infinity() {
            Err(Error::domain("PowerDbm::new", dbm, "real or -inf dBm"))
        } else {
            Ok(Self(dbm))
        }
    }

    pub fn dbm(self) -> T {
        self.0
    }

    pub fn to_lin(self) -> PowerLin<T> {
        PowerLin(dbm_to_mw(self.0))
    }
}

impl<T: Scalar> Probability<T> {
    pub fn new(p: T) -> Result<Self> {
        if p >= T::zero() && p <= T::one() {
            Ok(Self(p))
        } else {
            Err(Error::domain("Probability::new", p, "[0, 1]"))
        }
    }

    /// Clamps into `[0, 1]`; NaN becomes 0.
    pub fn saturating(p: T) -> Self {
        if p.is_nan() {
            Self(T::zero())
        } else {
            Self(p.max(T::zero()).min(T::one()))
        }
    }

    pub fn get(self) -> T {
        self.0
    }
}

/// `x = 10^(d/10)` mW.
pub fn dbm_to_mw<T: Scalar>(dbm: T) -> T {
    lit::<T>(10.0).powf(dbm / lit(10.0))
}

/// `10·log10(x)` dBm. Zero power is −∞ or an error depending on `zero`.
pub fn mw_to_dbm<T: Scalar>(mw: T, zero: ZeroPower) -> Result<T> {
    if mw.is_nan() || mw < T::zero() {
        return Err(Error::domain("mw_to_dbm", mw, ">= 0 mW"));
    }
    if mw == T::zero() {
        return match zero {
            ZeroPower::NegInfinity => Ok(T::neg_infinity()),
            ZeroPower::Reject => Err(Error::domain("mw_to_dbm", mw, "> 0 mW")),
        };
    }
    Ok(lit::<T>(10.0) * mw.log10())
}

pub fn watt_to_mw<T: Scalar>(w: T) -> T {
    w * lit(1000.0)
}
