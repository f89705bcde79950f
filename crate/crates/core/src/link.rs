//! Backscatter link: reflection coefficients, the effective channel at the
//! reader correlators and the FM0 bit error rate.
//!
//! Power quantities here only need to share one unit: `|g|²` and the noise
//! variance `σ²` must be expressed in the same power unit as `P_R` and
//! `P_in`. The rest of the crate uses mW.

use num_complex::Complex;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::{lit, r_func, r_inv, Scalar};
use crate::rng::{Domain, Streams};

/// Bits simulated per counter-based stream.
const BER_BLOCK: u64 = 16_384;
/// Agreement required between stored and impedance-derived coefficients.
const GAMMA_ATOL: f64 = 1e-9;

/// `Γ = (Z − Z_a*)/(Z + Z_a)` for load `Z` on an antenna of impedance `Z_a`.
pub fn reflection_coefficient<T: Scalar>(z: Complex<T>, za: Complex<T>) -> Result<Complex<T>> {
    let den = z + za;
    if den.norm_sqr() == T::zero() || !den.norm_sqr().is_finite() {
        return Err(Error::InvalidParameter(format!(
            "Z + Z_a = {den} leaves the reflection coefficient undefined"
        )));
    }
    Ok((z - za.conj()) / den)
}

/// Load impedances of the two tag states and of the antenna, in ohms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Impedances<T> {
    pub z0: Complex<T>,
    pub z1: Complex<T>,
    pub za: Complex<T>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TagRfParams<T> {
    pub gamma0: Complex<T>,
    pub gamma1: Complex<T>,
    pub impedances: Option<Impedances<T>>,
    /// Structural-mode term `A_s`; it cancels in every detection quantity.
    pub structural_mode: Complex<T>,
    /// `ρ_u`, share of the incident power backscattered to the reader.
    pub uplink_fraction: T,
    pub bit_duration_s: Option<T>,
    pub bits_per_frame: Option<u32>,
}

impl<T: Scalar> TagRfParams<T> {
    pub fn new(gamma0: Complex<T>, gamma1: Complex<T>, uplink_fraction: T) -> Result<Self> {
        let p = TagRfParams {
            gamma0,
            gamma1,
            impedances: None,
            structural_mode: Complex::new(T::zero(), T::zero()),
            uplink_fraction,
            bit_duration_s: None,
            bits_per_frame: None,
        };
        p.check()?;
        Ok(p)
    }

    /// Coefficients derived from the load and antenna impedances.
    pub fn from_impedances(z: Impedances<T>, uplink_fraction: T) -> Result<Self> {
        let mut p = Self::new(
            reflection_coefficient(z.z0, z.za)?,
            reflection_coefficient(z.z1, z.za)?,
            uplink_fraction,
        )?;
        p.impedances = Some(z);
        Ok(p)
    }

    pub fn check(&self) -> Result<()> {
        let one = T::one();
        for (name, g) in [("Γ0", self.gamma0), ("Γ1", self.gamma1)] {
            if !(g.norm() <= one + lit(1e-12)) {
                return Err(Error::InvalidParameter(format!("|{name}| = {} exceeds 1", g.norm())));
            }
        }
        let rho = self.uplink_fraction;
        if !(rho > T::zero() && rho <= one) {
            return Err(Error::domain("TagRfParams", rho, "0 < rho_u <= 1"));
        }
        if let Some(t) = self.bit_duration_s {
            if !(t > T::zero() && t.is_finite()) {
                return Err(Error::domain("TagRfParams", t, "bit duration > 0"));
            }
        }
        if let Some(z) = self.impedances {
            for (name, zi, g) in [("Γ0", z.z0, self.gamma0), ("Γ1", z.z1, self.gamma1)] {
                let derived = reflection_coefficient(zi, z.za)?;
                if !((derived - g).norm() <= lit(GAMMA_ATOL)) {
                    return Err(Error::InvalidParameter(format!(
                        "{name} = {g} disagrees with impedance-derived {derived}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// `|Γ0 − Γ1|`.
    pub fn delta_gamma(&self) -> T {
        (self.gamma0 - self.gamma1).norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReaderParams<T> {
    /// `σ²`, variance of each complex noise component.
    pub noise_variance: T,
    /// `β`, largest acceptable bit error rate.
    pub ber_threshold: T,
}

impl<T: Scalar> ReaderParams<T> {
    pub fn new(noise_variance: T, ber_threshold: T) -> Result<Self> {
        if !(noise_variance > T::zero() && noise_variance.is_finite()) {
            return Err(Error::domain("ReaderParams", noise_variance, "sigma^2 > 0"));
        }
        if !(ber_threshold > T::zero() && ber_threshold < lit(0.5)) {
            return Err(Error::domain("ReaderParams", ber_threshold, "0 < beta < 0.5"));
        }
        Ok(ReaderParams {
            noise_variance,
            ber_threshold,
        })
    }

    pub fn sigma(&self) -> T {
        self.noise_variance.sqrt()
    }
}

/// `|g| = L·√(ρ_u P_R)·a²·|ΔΓ|`.
pub fn effective_channel_mag<T: Scalar>(path_gain: T, p_r: T, rho_u: T, a2: T, delta_gamma: T) -> Result<T> {
    const F: &str = "effective_channel_mag";
    if !(path_gain > T::zero()) {
        return Err(Error::domain(F, path_gain, "L > 0"));
    }
    if !(p_r > T::zero()) {
        return Err(Error::domain(F, p_r, "P_R > 0"));
    }
    if !(rho_u > T::zero()) {
        return Err(Error::domain(F, rho_u, "rho_u > 0"));
    }
    if !(a2 >= T::zero()) {
        return Err(Error::domain(F, a2, "a^2 >= 0"));
    }
    if !(delta_gamma >= T::zero()) {
        return Err(Error::domain(F, delta_gamma, "|dGamma| >= 0"));
    }
    Ok(path_gain * (rho_u * p_r).sqrt() * a2 * delta_gamma)
}

/// The same `|g|` written through the input power, `P_in·√(ρ_u/P_R)·|ΔΓ|`.
pub fn channel_mag_from_input_power<T: Scalar>(p_in: T, p_r: T, rho_u: T, delta_gamma: T) -> T {
    p_in * (rho_u / p_r).sqrt() * delta_gamma
}

/// `P(error | g) = 2Q(|g|/σ)(1 − Q(|g|/σ))`.
pub fn ber_conditional<T: Scalar>(g_mag: T, sigma: T) -> T {
    let snr = g_mag / sigma;
    if snr > T::zero() {
        r_func(snr).expect("positive argument")
    } else {
        lit(0.5)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BerEstimate {
    pub errors: u64,
    pub n_bits: u64,
}

impl BerEstimate {
    pub fn rate(&self) -> f64 {
        self.errors as f64 / self.n_bits as f64
    }
}

/// Monte Carlo BER of FM0 differential detection.
///
/// Each bit occupies two intervals; each interval has a hard decision
/// `sign(|g| + σ z)`, and the bit is wrong iff exactly one of the two
/// decisions is wrong.
pub fn simulate_ber<T: Scalar>(g_mag: T, sigma: T, n_bits: u64, seed: u64) -> BerEstimate {
    let snr = (g_mag / sigma).to_f64().unwrap_or(f64::NAN);
    let streams = Streams::new(seed, Domain::BitErrors);
    let blocks = n_bits.div_ceil(BER_BLOCK);
    let errors = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = streams.stream(b);
            let len = BER_BLOCK.min(n_bits - b * BER_BLOCK);
            (0..len)
                .filter(|_| {
                    let z1: f64 = StandardNormal.sample(&mut rng);
                    let z2: f64 = StandardNormal.sample(&mut rng);
                    (snr + z1 < 0.0) != (snr + z2 < 0.0)
                })
                .count() as u64
        })
        .sum();
    BerEstimate { errors, n_bits }
}

/// `θ_C = √P_R·σ·R⁻¹(β)/(|ΔΓ|·√ρ_u)`: input power below which the BER
/// exceeds `β`.
pub fn info_outage_threshold<T: Scalar>(p_r: T, sigma: T, beta: T, delta_gamma: T, rho_u: T) -> Result<T> {
    const F: &str = "info_outage_threshold";
    if !(p_r > T::zero()) {
        return Err(Error::domain(F, p_r, "P_R > 0"));
    }
    if !(sigma >= T::zero()) {
        return Err(Error::domain(F, sigma, "sigma >= 0"));
    }
    if !(delta_gamma > T::zero()) {
        return Err(Error::domain(F, delta_gamma, "|dGamma| > 0"));
    }
    if !(rho_u > T::zero() && rho_u <= T::one()) {
        return Err(Error::domain(F, rho_u, "0 < rho_u <= 1"));
    }
    let x = r_inv(beta)?;
    Ok(p_r.sqrt() * sigma * x / (delta_gamma * rho_u.sqrt()))
}
