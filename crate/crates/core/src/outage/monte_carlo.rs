use rayon::prelude::*;

use super::{Scenario, Z_99};
use crate::error::Result;
use crate::link::{ber_conditional, channel_mag_from_input_power};
use crate::numerics::{lit, Scalar};
use crate::rng::{Domain, Streams};

/// Trials per parallel work item.
pub const MC_CHUNK: u64 = 8_192;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate<T> {
    pub n_trials: u64,
    pub successes: u64,
    /// Trials above the sensitivity, with enough harvested power, with a
    /// good enough BER: the complements of events A, B and C.
    pub sensitivity_ok: u64,
    pub power_ok: u64,
    pub info_ok: u64,
    pub p_hat: T,
    /// Half-width of the normal-approximation 99% interval.
    pub half_width: T,
}

impl<T: Scalar> McEstimate<T> {
    fn freq(&self, k: u64) -> T {
        lit::<T>(k as f64) / lit(self.n_trials as f64)
    }

    pub fn p_a(&self) -> T {
        T::one() - self.freq(self.sensitivity_ok)
    }

    pub fn p_b(&self) -> T {
        T::one() - self.freq(self.power_ok)
    }

    pub fn p_c(&self) -> T {
        T::one() - self.freq(self.info_ok)
    }
}

#[derive(Default, Clone, Copy)]
struct Counts {
    all: u64,
    a: u64,
    b: u64,
    c: u64,
}

impl std::ops::Add for Counts {
    type Output = Counts;

    fn add(self, o: Counts) -> Counts {
        Counts {
            all: self.all + o.all,
            a: self.a + o.a,
            b: self.b + o.b,
            c: self.c + o.c,
        }
    }
}

/// Monte Carlo success frequency. Trial `i` draws `P_in` from stream `i`,
/// so the result does not depend on the number of worker threads.
pub fn mc_success<T: Scalar>(s: &Scenario<T>, n_trials: u64, seed: u64) -> Result<McEstimate<T>> {
    let dist = s.input_dist()?;
    let p_sen = s.harvester.effective_thresholds().p_sen_eff;
    let zeta = s.tag_energy.zeta_har();
    let p_c = s.tag_energy.consumption_mw;
    let (p_r, rho, dg) = (
        s.emitter.transmit_power_mw,
        s.tag_rf.uplink_fraction,
        s.tag_rf.delta_gamma(),
    );
    let (sigma, beta) = (s.reader.sigma(), s.reader.ber_threshold);
    let streams = Streams::new(seed, Domain::InputPower);

    let chunks = n_trials.div_ceil(MC_CHUNK);
    let counts = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut k = Counts::default();
            for i in c * MC_CHUNK..n_trials.min((c + 1) * MC_CHUNK) {
                let p_in = dist.sample_with(&mut streams.stream(i));
                let a = p_in > p_sen;
                let b = s.harvester.value(zeta * p_in) > p_c;
                let g = channel_mag_from_input_power(p_in, p_r, rho, dg);
                let ok_c = ber_conditional(g, sigma) < beta;
                k.a += a as u64;
                k.b += b as u64;
                k.c += ok_c as u64;
                k.all += (a && b && ok_c) as u64;
            }
            k
        })
        .reduce(Counts::default, |x, y| x + y);

    let n: T = lit(n_trials as f64);
    let p_hat = lit::<T>(counts.all as f64) / n;
    let half_width = lit::<T>(Z_99) * (p_hat * (T::one() - p_hat) / n).sqrt();
    Ok(McEstimate {
        n_trials,
        successes: counts.all,
        sensitivity_ok: counts.a,
        power_ok: counts.b,
        info_ok: counts.c,
        p_hat,
        half_width,
    })
}
