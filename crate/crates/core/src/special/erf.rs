//! Complementary error function and its exponentially scaled form.

use crate::real::Real;

const CF_SWITCH: f64 = 2.5;
const MAX_ITER: usize = 10_000;

/// `erf(z)` for `0 <= z < CF_SWITCH` from the positive-term series
/// `(2/sqrt(pi)) exp(-z^2) sum_n (2z^2)^n z / (1*3*...*(2n+1))`.
fn erf_series<T: Real>(z: T) -> T {
    let two_z2 = T::lit(2.0) * z * z;
    let mut term = z;
    let mut sum = z;
    for n in 1..MAX_ITER {
        term = term * two_z2 / T::from_usize_lossy(2 * n + 1);
        sum = sum + term;
        if term <= T::epsilon() * sum * T::lit(0.25) {
            break;
        }
    }
    T::FRAC_2_SQRT_PI() * (-z * z).exp() * sum
}

/// `exp(z^2) erfc(z)` for `z >= CF_SWITCH` by the Laplace continued fraction
/// `1/sqrt(pi) * 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + ...))))`.
fn erfcx_cf<T: Real>(z: T) -> T {
    let tiny = T::min_positive_value().sqrt();
    let mut f = z;
    let mut c = f;
    let mut d = T::zero();
    for k in 1..MAX_ITER {
        let a = T::from_usize_lossy(k) * T::lit(0.5);
        d = z + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = z + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = T::one() / d;
        let delta = c * d;
        f = f * delta;
        if (delta - T::one()).abs() < T::epsilon() {
            break;
        }
    }
    T::FRAC_2_SQRT_PI() * T::lit(0.5) / f
}

/// Complementary error function, `erfc(-z) = 2 - erfc(z)`.
pub fn erfc<T: Real>(z: T) -> T {
    if z.is_nan() {
        return z;
    }
    if z < T::zero() {
        return T::lit(2.0) - erfc(-z);
    }
    if z < T::lit(CF_SWITCH) {
        T::one() - erf_series(z)
    } else if z * z > T::exp_guard() {
        T::zero()
    } else {
        (-z * z).exp() * erfcx_cf(z)
    }
}

/// Scaled complementary error function `exp(z^2) erfc(z)`.
///
/// Finite for all `z >= 0`; grows like `2 exp(z^2)` for negative `z`.
pub fn erfcx<T: Real>(z: T) -> T {
    if z.is_nan() {
        return z;
    }
    if z < T::zero() {
        return T::lit(2.0) * (z * z).exp() - erfcx(-z);
    }
    if z < T::lit(CF_SWITCH) {
        (z * z).exp() * (T::one() - erf_series(z))
    } else {
        erfcx_cf(z)
    }
}
