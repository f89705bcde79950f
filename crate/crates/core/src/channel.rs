//! Large-scale path gain, Nakagami-m fading, and the law of the tag's input
//! power `P_in = L·P_R·a²`.
//!
//! The fading phase φ of `h = a·e^(−jφ)` is not modeled: every quantity the
//! library computes depends on `|h|²` only.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::numerics::{lit, reg_upper_gamma, Scalar};
use crate::rng::{Domain, Streams};

const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLossParams<T> {
    pub wavelength_m: T,
    pub reference_distance_m: T,
    pub exponent: T,
    pub distance_m: T,
}

impl<T: Scalar> PathLossParams<T> {
    pub fn new(wavelength_m: T, reference_distance_m: T, exponent: T, distance_m: T) -> Result<Self> {
        let p = Self {
            wavelength_m,
            reference_distance_m,
            exponent,
            distance_m,
        };
        p.check()?;
        Ok(p)
    }

    pub fn check(&self) -> Result<()> {
        let fields = [
            ("wavelength", self.wavelength_m),
            ("reference distance", self.reference_distance_m),
            ("path loss exponent", self.exponent),
            ("distance", self.distance_m),
        ];
        for (_, v) in fields {
            if !(v > T::zero() && v.is_finite()) {
                return Err(Error::domain("path_gain", v, "positive and finite"));
            }
        }
        Ok(())
    }

    /// True when the tag sits closer than the reference distance, where the
    /// log-distance model is outside its usual range.
    pub fn below_reference(&self) -> bool {
        self.distance_m < self.reference_distance_m
    }
}

/// L = (λ/(4π d0))² · (d0/d)^ν
pub fn path_gain<T: Scalar>(p: &PathLossParams<T>) -> Result<T> {
    p.check()?;
    let free = p.wavelength_m / (lit::<T>(4.0) * T::PI() * p.reference_distance_m);
    Ok(free * free * (p.reference_distance_m / p.distance_m).powf(p.exponent))
}

/// Small-scale fading. `m = 1` is Rayleigh; `None` is the `a = 1` limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Fading<T> {
    Nakagami { m: T },
    None,
}

impl<T: Scalar> Fading<T> {
    pub fn nakagami(m: T) -> Result<Self> {
        if !(m >= lit(0.5)) || !m.is_finite() {
            return Err(Error::domain("Fading::nakagami", m, "M >= 0.5"));
        }
        Ok(Fading::Nakagami { m })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmitterParams<T> {
    /// Transmit power in mW.
    pub transmit_power_mw: T,
    /// Informational only; formulas use the wavelength.
    pub carrier_frequency_hz: Option<T>,
}

impl<T: Scalar> EmitterParams<T> {
    pub fn new(transmit_power_mw: T, carrier_frequency_hz: Option<T>) -> Result<Self> {
        if !(transmit_power_mw > T::zero() && transmit_power_mw.is_finite()) {
            return Err(Error::domain("EmitterParams::new", transmit_power_mw, "P_R > 0"));
        }
        if let Some(f) = carrier_frequency_hz {
            if !(f > T::zero()) {
                return Err(Error::domain("EmitterParams::new", f, "F_c > 0"));
            }
        }
        Ok(Self {
            transmit_power_mw,
            carrier_frequency_hz,
        })
    }

    /// Warning text when `λ` and `c/F_c` disagree by more than 0.1%.
    pub fn wavelength_mismatch(&self, wavelength_m: T) -> Option<String> {
        let f = self.carrier_frequency_hz?;
        let expected = lit::<T>(SPEED_OF_LIGHT) / f;
        let rel = ((wavelength_m - expected) / expected).abs();
        (rel > lit(1e-3))
            .then(|| format!("wavelength {wavelength_m} m differs from c/F_c = {expected} m; using the wavelength"))
    }
}

/// Law of the received power at the tag, in mW.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InputPowerDist<T> {
    /// Gamma(shape, scale) with shape = M and scale = L·P_R/M.
    Gamma { shape: T, scale: T },
    /// No fading: all mass at `value = L·P_R`.
    Deterministic { value: T },
}

/// Gamma law of `P_in = L·P_R·a²` for `E[a²] = 1`.
pub fn input_power_dist<T: Scalar>(path_gain: T, transmit_power_mw: T, fading: Fading<T>) -> Result<InputPowerDist<T>> {
    if !(path_gain > T::zero() && path_gain.is_finite()) {
        return Err(Error::domain("input_power_dist", path_gain, "L > 0"));
    }
    if !(transmit_power_mw > T::zero() && transmit_power_mw.is_finite()) {
        return Err(Error::domain("input_power_dist", transmit_power_mw, "P_R > 0"));
    }
    let mean = path_gain * transmit_power_mw;
    match fading {
        Fading::None => Ok(InputPowerDist::Deterministic { value: mean }),
        Fading::Nakagami { m } => {
            if !(m >= lit(0.5)) || !m.is_finite() {
                return Err(Error::domain("input_power_dist", m, "M >= 0.5"));
            }
            Ok(InputPowerDist::Gamma {
                shape: m,
                scale: mean / m,
            })
        }
    }
}

impl<T: Scalar> InputPowerDist<T> {
    pub fn mean(&self) -> T {
        match *self {
            InputPowerDist::Gamma { shape, scale } => shape * scale,
            InputPowerDist::Deterministic { value } => value,
        }
    }

    pub fn variance(&self) -> T {
        match *self {
            InputPowerDist::Gamma { shape, scale } => shape * scale * scale,
            InputPowerDist::Deterministic { .. } => T::zero(),
        }
    }

    /// `F(x) = P(P_in <= x)`.
    pub fn cdf(&self, x: T) -> Result<T> {
        Ok(T::one() - self.survival(x)?)
    }

    /// `P(P_in > x) = Γ(M, M·x/(L·P_R))/Γ(M)`; accepts `x = +∞`.
    pub fn survival(&self, x: T) -> Result<T> {
        if !(x >= T::zero()) {
            return Err(Error::domain("input_power_cdf", x, "x >= 0"));
        }
        match *self {
            InputPowerDist::Gamma { shape, scale } => reg_upper_gamma(shape, x / scale),
            InputPowerDist::Deterministic { value } => Ok(if value > x { T::one() } else { T::zero() }),
        }
    }

    /// Draw using an explicit generator.
    pub fn sample_with<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        match *self {
            InputPowerDist::Gamma { shape, scale } => sample_gamma(rng, shape) * scale,
            InputPowerDist::Deterministic { value } => value,
        }
    }
}

/// CDF of the input power, `F(x) = 1 − Γ(M, (M/(L P_R))·x)/Γ(M)`.
pub fn input_power_cdf<T: Scalar>(x: T, dist: &InputPowerDist<T>) -> Result<T> {
    dist.cdf(x)
}

/// One draw of `P_in`, a pure function of `(seed, trial_index)`.
pub fn sample_input_power<T: Scalar>(dist: &InputPowerDist<T>, trial_index: u64, seed: u64) -> T {
    let mut rng = Streams::new(seed, Domain::InputPower).stream(trial_index);
    dist.sample_with(&mut rng)
}

/// Unit-scale Gamma(shape) variate: Marsaglia–Tsang squeeze, with the
/// `U^(1/shape)` boost below shape 1.
pub(crate) fn sample_gamma<T: Scalar, R: Rng + ?Sized>(rng: &mut R, shape: T) -> T {
    let one = 1.0_f64;
    let a = shape.to_f64().unwrap_or(f64::NAN);
    let (alpha, boost) = if a < one { (a + one, true) } else { (a, false) };
    let d = alpha - one / 3.0;
    let c = one / (9.0 * d).sqrt();
    let g = loop {
        let z: f64 = rng.sample(StandardNormal);
        let v = one + c * z;
        if v <= 0.0 {
            continue;
        }
        let v = v * v * v;
        let u: f64 = rng.random();
        let z2 = z * z;
        if u < one - 0.0331 * z2 * z2 {
            break d * v;
        }
        if u.ln() < 0.5 * z2 + d * (one - v + v.ln()) {
            break d * v;
        }
    };
    let g = if boost {
        // open interval keeps ln finite
        let u: f64 = 1.0 - rng.random::<f64>();
        g * u.powf(one / a)
    } else {
        g
    };
    lit(g)
}
