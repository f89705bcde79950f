//! Gamma-family special functions and the Gaussian tail.

use super::{lit, Scalar};
use crate::error::{Error, Result};

const MAX_ITER: usize = 1000;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// ln Γ(x) for x > 0 (Lanczos, g = 7).
pub fn ln_gamma<T: Scalar>(x: T) -> T {
    let half = lit::<T>(0.5);
    if x < half {
        // reflection keeps accuracy near the pole
        let pi = T::PI();
        return (pi / (pi * x).sin()).ln() - ln_gamma(T::one() - x);
    }
    let x = x - T::one();
    let mut acc = lit::<T>(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc = acc + lit::<T>(c) / (x + lit(i as f64));
    }
    let t = x + lit::<T>(LANCZOS_G) + half;
    half * (lit::<T>(2.0) * T::PI()).ln() + (x + half) * t.ln() - t + acc.ln()
}

/// Regularized upper incomplete gamma Γ(a, z)/Γ(a).
///
/// Series for z < a + 1, Lentz continued fraction otherwise.
pub fn reg_upper_gamma<T: Scalar>(a: T, z: T) -> Result<T> {
    gamma_pair(a, z).map(|(_, q)| q)
}

/// Regularized lower incomplete gamma γ(a, z)/Γ(a).
pub fn reg_lower_gamma<T: Scalar>(a: T, z: T) -> Result<T> {
    gamma_pair(a, z).map(|(p, _)| p)
}

fn gamma_pair<T: Scalar>(a: T, z: T) -> Result<(T, T)> {
    if !(a > T::zero()) || !a.is_finite() {
        return Err(Error::domain("reg_upper_gamma", a, "a > 0"));
    }
    if !(z >= T::zero()) {
        return Err(Error::domain("reg_upper_gamma", z, "z >= 0"));
    }
    if z == T::zero() {
        return Ok((T::zero(), T::one()));
    }
    if z == T::infinity() {
        return Ok((T::one(), T::zero()));
    }
    let prefactor = (a * z.ln() - z - ln_gamma(a)).exp();
    if z < a + T::one() {
        let p = prefactor * lower_series(a, z)?;
        Ok((p, T::one() - p))
    } else {
        let q = prefactor * upper_fraction(a, z)?;
        Ok((T::one() - q, q))
    }
}

// Σ z^n / (a (a+1) ... (a+n))
fn lower_series<T: Scalar>(a: T, z: T) -> Result<T> {
    let mut ap = a;
    let mut term = T::one() / a;
    let mut sum = term;
    for _ in 0..MAX_ITER {
        ap = ap + T::one();
        term = term * z / ap;
        sum = sum + term;
        if term.abs() <= sum.abs() * T::epsilon() {
            return Ok(sum);
        }
    }
    Err(Error::NoConvergence("incomplete gamma series"))
}

// modified Lentz for 1/(z+1-a- 1(1-a)/(z+3-a- 2(2-a)/(z+5-a- ...)))
fn upper_fraction<T: Scalar>(a: T, z: T) -> Result<T> {
    let tiny = T::min_positive_value() / T::epsilon();
    let two = lit::<T>(2.0);
    let mut b = z + T::one() - a;
    let mut c = T::one() / tiny;
    let mut d = T::one() / b;
    let mut h = d;
    for i in 1..=MAX_ITER {
        let n = lit::<T>(i as f64);
        let an = -n * (n - a);
        b = b + two;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = T::one() / d;
        let delta = d * c;
        h = h * delta;
        if (delta - T::one()).abs() <= T::epsilon() {
            return Ok(h);
        }
    }
    Err(Error::NoConvergence("incomplete gamma continued fraction"))
}

/// Gaussian tail Q(x) = ½·erfc(x/√2), computed as ½·Γ(½, x²/2)/Γ(½).
pub fn q_func<T: Scalar>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    let half = lit::<T>(0.5);
    if x.is_infinite() {
        return if x > T::zero() { T::zero() } else { T::one() };
    }
    let z = x * x * half;
    let tail = half * reg_upper_gamma(half, z).expect("a = 1/2 always converges");
    if x >= T::zero() {
        tail
    } else {
        T::one() - tail
    }
}

/// Inverse of [`q_func`] on (0, 1) by safeguarded bisection to full precision.
pub fn q_inv<T: Scalar>(p: T) -> Result<T> {
    if !(p > T::zero() && p < T::one()) {
        return Err(Error::domain("q_inv", p, "0 < p < 1"));
    }
    let bound = lit::<T>(40.0);
    let (mut lo, mut hi) = (-bound, bound);
    let two = lit::<T>(2.0);
    // invariant: Q(lo) > p >= Q(hi)
    for _ in 0..1200 {
        let mid = lo + (hi - lo) / two;
        if mid <= lo || mid >= hi {
            break;
        }
        let q = q_func(mid);
        if q == p {
            return Ok(mid);
        }
        if q > p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (qlo, qhi) = (q_func(lo), q_func(hi));
    Ok(if (qlo - p).abs() <= (qhi - p).abs() { lo } else { hi })
}

/// R(x) = 2Q(x)(1 − Q(x)) for x > 0.
pub fn r_func<T: Scalar>(x: T) -> Result<T> {
    if !(x > T::zero()) {
        return Err(Error::domain("r_func", x, "x > 0"));
    }
    let q = q_func(x);
    Ok(lit::<T>(2.0) * q * (T::one() - q))
}

/// R⁻¹(β) = Q⁻¹((1 − √(1 − 2β))/2) for β in (0, ½).
pub fn r_inv<T: Scalar>(beta: T) -> Result<T> {
    let half = lit::<T>(0.5);
    if !(beta > T::zero() && beta < half) {
        return Err(Error::domain("r_inv", beta, "0 < beta < 0.5"));
    }
    // (1 - sqrt(1 - 2b))/2 == b / (1 + sqrt(1 - 2b)), without cancellation
    let root = (T::one() - lit::<T>(2.0) * beta).sqrt();
    let inner = beta / (T::one() + root);
    if inner >= half {
        return Ok(T::zero());
    }
    q_inv(inner)
}
