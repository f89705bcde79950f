//! Outage events of a backscatter SWIPT link and the success probability.
//!
//! All three events are lower thresholds on the same input power `P_in`:
//! * sensitivity (A): `P_in ≤ θ_A = P_sen`,
//! * power (B): `p(ζ_har·P_in) ≤ P_c`, i.e. `P_in ≤ θ_B = p⁻¹(P_c)/ζ_har`,
//! * information (C): `BER(P_in) ≥ β`, i.e. `P_in ≤ θ_C`.
//!
//! Success is the complement of their union, `P_in > θ_F = max(θ_A, θ_B, θ_C)`.

use std::fmt;

use crate::channel::{input_power_dist, path_gain, EmitterParams, Fading, InputPowerDist, PathLossParams};
use crate::error::{Error, Result};
use crate::harvest::{validate_model, Harvester};
use crate::link::{info_outage_threshold, ReaderParams, TagRfParams};
use crate::numerics::Scalar;

mod monte_carlo;

pub use monte_carlo::{mc_success, McEstimate, MC_CHUNK};

/// Normal quantile for two-sided 99% intervals.
pub const Z_99: f64 = 2.575_829_303_548_901;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TagEnergyParams<T> {
    /// `τ_d`, fraction of time in the absorbing state.
    pub absorb_fraction: T,
    /// `χ`, share of the absorbed power routed to the harvester.
    pub harvest_share: T,
    /// `P_c` in mW.
    pub consumption_mw: T,
}

impl<T: Scalar> TagEnergyParams<T> {
    pub fn new(absorb_fraction: T, harvest_share: T, consumption_mw: T) -> Result<Self> {
        let p = TagEnergyParams {
            absorb_fraction,
            harvest_share,
            consumption_mw,
        };
        p.check()?;
        Ok(p)
    }

    pub fn check(&self) -> Result<()> {
        let (zero, one) = (T::zero(), T::one());
        if !(self.absorb_fraction > zero && self.absorb_fraction < one) {
            return Err(Error::domain("TagEnergyParams", self.absorb_fraction, "0 < tau_d < 1"));
        }
        if !(self.harvest_share > zero && self.harvest_share < one) {
            return Err(Error::domain("TagEnergyParams", self.harvest_share, "0 < chi < 1"));
        }
        if !(self.consumption_mw > zero && self.consumption_mw.is_finite()) {
            return Err(Error::domain("TagEnergyParams", self.consumption_mw, "P_c > 0"));
        }
        Ok(())
    }

    /// `ζ_har = χ·τ_d`.
    pub fn zeta_har(&self) -> T {
        self.harvest_share * self.absorb_fraction
    }
}

/// A complete link: geometry, fading, emitter, tag and reader.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario<T> {
    pub path_loss: PathLossParams<T>,
    pub fading: Fading<T>,
    pub emitter: EmitterParams<T>,
    pub tag_rf: TagRfParams<T>,
    pub tag_energy: TagEnergyParams<T>,
    pub reader: ReaderParams<T>,
    pub harvester: Harvester<T>,
}

impl<T: Scalar> Scenario<T> {
    pub fn check(&self) -> Result<()> {
        self.path_loss.check()?;
        if let Fading::Nakagami { m } = self.fading {
            Fading::nakagami(m)?;
        }
        EmitterParams::new(self.emitter.transmit_power_mw, self.emitter.carrier_frequency_hz)?;
        self.tag_rf.check()?;
        self.tag_energy.check()?;
        ReaderParams::new(self.reader.noise_variance, self.reader.ber_threshold)?;
        let budget = T::one() - self.tag_energy.absorb_fraction;
        if self.tag_rf.uplink_fraction > budget {
            return Err(Error::InvalidParameter(format!(
                "rho_u = {} exceeds 1 - tau_d = {budget}",
                self.tag_rf.uplink_fraction
            )));
        }
        if !(self.tag_rf.delta_gamma() > T::zero()) {
            return Err(Error::InvalidParameter("Γ0 = Γ1 carries no information".into()));
        }
        Ok(())
    }

    /// Conditions that are legal but probably unintended.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.path_loss.below_reference() {
            out.push(format!(
                "distance {} m is below the reference distance {} m; path gain extrapolated",
                self.path_loss.distance_m, self.path_loss.reference_distance_m
            ));
        }
        out.extend(self.emitter.wavelength_mismatch(self.path_loss.wavelength_m));
        out.extend(
            validate_model(&self.harvester.model)
                .iter()
                .map(|v| format!("harvest model: {v}")),
        );
        out
    }

    pub fn path_gain(&self) -> Result<T> {
        path_gain(&self.path_loss)
    }

    pub fn input_dist(&self) -> Result<InputPowerDist<T>> {
        input_power_dist(self.path_gain()?, self.emitter.transmit_power_mw, self.fading)
    }

    pub fn with_consumption(&self, p_c_mw: T) -> Result<Self> {
        let mut s = self.clone();
        s.tag_energy.consumption_mw = p_c_mw;
        s.tag_energy.check()?;
        Ok(s)
    }

    /// Moves the harvester sensitivity; see [`crate::harvest::HarvestModel::with_sensitivity`].
    pub fn with_sensitivity(&self, p_sen_mw: T) -> Result<Self> {
        let mut s = self.clone();
        s.harvester.model = self.harvester.model.with_sensitivity(p_sen_mw)?;
        Ok(s)
    }

    pub fn with_distance(&self, d_m: T) -> Result<Self> {
        let mut s = self.clone();
        s.path_loss.distance_m = d_m;
        s.path_loss.check()?;
        Ok(s)
    }

    pub fn with_ber_threshold(&self, beta: T) -> Result<Self> {
        let mut s = self.clone();
        s.reader = ReaderParams::new(self.reader.noise_variance, beta)?;
        Ok(s)
    }
}

/// Which threshold attains `θ_F`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Binding {
    Sensitivity,
    Power,
    Information,
}

impl Binding {
    pub fn name(self) -> &'static str {
        match self {
            Binding::Sensitivity => "sensitivity",
            Binding::Power => "power",
            Binding::Information => "information",
        }
    }
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Input-power thresholds of the three outage events, mW.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageThresholds<T> {
    pub theta_a: T,
    /// `+∞` when `P_c` is not reachable by the harvester.
    pub theta_b: T,
    pub theta_c: T,
}

impl<T: Scalar> OutageThresholds<T> {
    pub fn theta_f(&self) -> T {
        self.theta_a.max(self.theta_b).max(self.theta_c)
    }

    /// Ties resolve in the order sensitivity, power, information.
    pub fn binding(&self) -> Binding {
        let f = self.theta_f();
        if self.theta_a == f {
            Binding::Sensitivity
        } else if self.theta_b == f {
            Binding::Power
        } else {
            Binding::Information
        }
    }
}

pub fn sensitivity_threshold<T: Scalar>(s: &Scenario<T>) -> T {
    s.harvester.effective_thresholds().p_sen_eff
}

/// `θ_B = p⁻¹(P_c)/ζ_har`, `+∞` if `P_c` is unreachable.
pub fn power_threshold<T: Scalar>(s: &Scenario<T>) -> Result<T> {
    match s.harvester.invert(s.tag_energy.consumption_mw) {
        Ok(x) => Ok(x / s.tag_energy.zeta_har()),
        Err(Error::Unreachable { .. }) => Ok(T::infinity()),
        Err(e) => Err(e),
    }
}

pub fn info_threshold<T: Scalar>(s: &Scenario<T>) -> Result<T> {
    info_outage_threshold(
        s.emitter.transmit_power_mw,
        s.reader.sigma(),
        s.reader.ber_threshold,
        s.tag_rf.delta_gamma(),
        s.tag_rf.uplink_fraction,
    )
}

pub fn thresholds<T: Scalar>(s: &Scenario<T>) -> Result<OutageThresholds<T>> {
    Ok(OutageThresholds {
        theta_a: sensitivity_threshold(s),
        theta_b: power_threshold(s)?,
        theta_c: info_threshold(s)?,
    })
}

/// `P(A) = F(θ_A)`.
pub fn sensitivity_outage<T: Scalar>(s: &Scenario<T>) -> Result<T> {
    s.input_dist()?.cdf(sensitivity_threshold(s))
}

/// `P(B) = F(θ_B)`, 1 when `P_c` is unreachable.
pub fn power_outage<T: Scalar>(s: &Scenario<T>) -> Result<T> {
    s.input_dist()?.cdf(power_threshold(s)?)
}

/// `P(C) = F(θ_C)`.
pub fn info_outage<T: Scalar>(s: &Scenario<T>) -> Result<T> {
    s.input_dist()?.cdf(info_threshold(s)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutageReport<T> {
    pub p_a: T,
    pub p_b: T,
    pub p_c: T,
    pub thresholds: OutageThresholds<T>,
    pub theta_f: T,
    pub binding: Binding,
    /// `P(P_in > θ_F)`.
    pub p_success: T,
    pub mc: Option<McEstimate<T>>,
}

/// Closed-form outage probabilities and `P(success) = Γ(M, M θ_F/(L P_R))/Γ(M)`.
pub fn success_probability<T: Scalar>(s: &Scenario<T>) -> Result<OutageReport<T>> {
    let dist = s.input_dist()?;
    let th = thresholds(s)?;
    let theta_f = th.theta_f();
    Ok(OutageReport {
        p_a: dist.cdf(th.theta_a)?,
        p_b: dist.cdf(th.theta_b)?,
        p_c: dist.cdf(th.theta_c)?,
        thresholds: th,
        theta_f,
        binding: th.binding(),
        p_success: dist.survival(theta_f)?,
        mc: None,
    })
}

#[cfg(test)]
pub(crate) mod tests;
