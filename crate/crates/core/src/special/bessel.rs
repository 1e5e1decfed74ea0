//! Modified Bessel functions of integer order.
//!
//! `I_n` uses its power series up to `z = 15` and, above that, `I_0` scaled
//! by ratios `I_{k+1}/I_k` obtained from a continued fraction at the top order
//! followed by the (stable) downward recurrence. `K_0`, `K_1` use the
//! logarithmic series for `z <= 2` and Steed's evaluation of the second
//! continued fraction (Temme's CF2) beyond it; higher orders come from the
//! upward recurrence, which is stable for `K_n`.
//!
//! The ratio sequences are exported as well: the disc Helmholtz series only
//! ever needs products such as `K_n I_n` and `I_n(a)/I_n(b)`, which stay
//! bounded even where `K_n` and `I_n` individually overflow or underflow.

use crate::error::{Error, Result};
use crate::real::Real;

/// Orders beyond this are rejected by the scalar entry points.
pub const DEFAULT_ORDER_CAP: usize = 256;

const SERIES_SWITCH: f64 = 15.0;
const K_SERIES_SWITCH: f64 = 2.0;
const MAX_ITER: usize = 100_000;

fn check_order(n: i32) -> Result<usize> {
    let order = n.unsigned_abs() as usize;
    if order > DEFAULT_ORDER_CAP {
        return Err(Error::BesselOrderTooLarge {
            order: n as i64,
            cap: DEFAULT_ORDER_CAP,
        });
    }
    Ok(order)
}

/// `I_n(z)` for `z >= 0`. Negative orders use `I_{-n} = I_n`.
pub fn bessel_i<T: Real>(n: i32, z: T) -> Result<T> {
    let n = check_order(n)?;
    if !(z >= T::zero()) || !z.is_finite() {
        return Err(Error::DomainError {
            function: "bessel_i",
            value: z.as_f64(),
            domain: "[0, inf)",
        });
    }
    if z > T::exp_guard() {
        return Err(Error::Overflow {
            function: "bessel_i",
            value: z.as_f64(),
        });
    }
    if z == T::zero() {
        return Ok(if n == 0 { T::one() } else { T::zero() });
    }
    if z <= T::lit(SERIES_SWITCH) {
        return Ok(i_series(n, z));
    }
    let i0 = i_series(0, z);
    if n == 0 {
        return Ok(i0);
    }
    let ratios = bessel_i_ratios(z, n);
    Ok(ratios[..n].iter().fold(i0, |acc, &p| acc * p))
}

/// Power series `sum_k (z/2)^{2k+n} / (k! (k+n)!)`; every term is positive.
fn i_series<T: Real>(n: usize, z: T) -> T {
    let half = z * T::lit(0.5);
    let mut lead = T::one();
    for i in 1..=n {
        lead = lead * half / T::from_usize_lossy(i);
    }
    if lead == T::zero() {
        return lead;
    }
    let q = half * half;
    let nf = T::from_usize_lossy(n);
    let mut term = T::one();
    let mut sum = T::one();
    for k in 1..MAX_ITER {
        let kf = T::from_usize_lossy(k);
        term = term * q / (kf * (kf + nf));
        sum = sum + term;
        if term <= T::epsilon() * sum * T::lit(0.5) {
            break;
        }
    }
    lead * sum
}

/// Ratios `p_k = I_{k+1}(z) / I_k(z)` for `k = 0..=n_max`.
///
/// The top ratio comes from its continued fraction (modified Lentz), the rest
/// from `p_{k-1} = 1 / (2k/z + p_k)`. At `z = 0` every ratio is zero.
pub fn bessel_i_ratios<T: Real>(z: T, n_max: usize) -> Vec<T> {
    let mut p = vec![T::zero(); n_max + 1];
    if z == T::zero() {
        return p;
    }
    let two_over_z = T::lit(2.0) / z;
    p[n_max] = i_ratio_cf(n_max, two_over_z);
    for k in (1..=n_max).rev() {
        p[k - 1] = T::one() / (T::from_usize_lossy(k) * two_over_z + p[k]);
    }
    p
}

/// `I_{n+1}/I_n = 1/(b_1 + 1/(b_2 + ...))` with `b_j = 2(n+j)/z`.
fn i_ratio_cf<T: Real>(n: usize, two_over_z: T) -> T {
    let tiny = T::min_positive_value().sqrt();
    let b = |j: usize| T::from_usize_lossy(n + j) * two_over_z;
    let mut f = b(1);
    let mut c = f;
    let mut d = T::zero();
    for j in 2..MAX_ITER {
        let bj = b(j);
        d = bj + d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = bj + T::one() / c;
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
    T::one() / f
}

/// `(K_0(z), K_1(z))` for `z > 0`.
pub fn bessel_k01<T: Real>(z: T) -> Result<(T, T)> {
    if !(z > T::zero()) || !z.is_finite() {
        return Err(Error::DomainError {
            function: "bessel_k",
            value: z.as_f64(),
            domain: "(0, inf)",
        });
    }
    if z <= T::lit(K_SERIES_SWITCH) {
        Ok(k01_series(z))
    } else {
        Ok(k01_steed(z))
    }
}

/// A&S 9.6.13 / 9.6.11 with `psi(k+1) = -gamma + H_k`.
fn k01_series<T: Real>(z: T) -> (T, T) {
    let half = z * T::lit(0.5);
    let q = half * half;
    let log_half = half.ln();
    let gamma = T::euler_gamma();

    // k = 0 terms
    let mut harmonic = T::zero(); // H_k
    let mut t0 = T::one(); // q^k / (k!)^2
    let mut t1 = T::one(); // q^k / (k! (k+1)!)
    let mut i0 = T::one();
    let mut i1 = T::one();
    let mut s0 = -gamma; // sum psi(k+1) q^k/(k!)^2
    let mut s1 = -gamma - gamma + T::one(); // sum (psi(k+1)+psi(k+2)) q^k/(k!(k+1)!)
    for k in 1..MAX_ITER {
        let kf = T::from_usize_lossy(k);
        harmonic = harmonic + T::one() / kf;
        t0 = t0 * q / (kf * kf);
        t1 = t1 * q / (kf * (kf + T::one()));
        i0 = i0 + t0;
        i1 = i1 + t1;
        let psi_k1 = harmonic - gamma;
        let psi_k2 = psi_k1 + T::one() / (kf + T::one());
        let d0 = psi_k1 * t0;
        let d1 = (psi_k1 + psi_k2) * t1;
        s0 = s0 + d0;
        s1 = s1 + d1;
        if t0 <= T::epsilon() * T::lit(1e-3) && t1 <= T::epsilon() * T::lit(1e-3) {
            break;
        }
    }
    let i1 = i1 * half;
    let k0 = -log_half * i0 + s0;
    let k1 = T::one() / z + log_half * i1 - half * T::lit(0.5) * s1;
    (k0, k1)
}

/// Steed's algorithm for CF2 at order zero (Numerical Recipes `bessik`, x >= 2).
fn k01_steed<T: Real>(z: T) -> (T, T) {
    let two = T::lit(2.0);
    let mut b = two * (T::one() + z);
    let mut d = T::one() / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = T::zero();
    let mut q2 = T::one();
    let a1 = T::lit(0.25);
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = T::one() + q * delh;
    for i in 1..MAX_ITER {
        let fi = T::from_usize_lossy(i);
        a = a - two * fi;
        c = -a * c / (fi + T::one());
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q = q + c * qnew;
        b = b + two;
        d = T::one() / (b + a * d);
        delh = (b * d - T::one()) * delh;
        h = h + delh;
        let dels = q * delh;
        s = s + dels;
        if (dels / s).abs() < T::epsilon() {
            break;
        }
    }
    h = a1 * h;
    let k0 = (T::PI() / (two * z)).sqrt() * (-z).exp() / s;
    let k1 = k0 * (z + T::lit(0.5) - h) / z;
    (k0, k1)
}

/// `K_n(z)` for `z > 0`. Negative orders use `K_{-n} = K_n`.
pub fn bessel_k<T: Real>(n: i32, z: T) -> Result<T> {
    let n = check_order(n)?;
    let (k0, k1) = bessel_k01(z)?;
    let value = match n {
        0 => k0,
        1 => k1,
        _ => {
            let two_over_z = T::lit(2.0) / z;
            let (mut km, mut k) = (k0, k1);
            for j in 1..n {
                let next = km + T::from_usize_lossy(j) * two_over_z * k;
                km = k;
                k = next;
            }
            k
        }
    };
    if !value.is_finite() {
        return Err(Error::Overflow {
            function: "bessel_k",
            value: z.as_f64(),
        });
    }
    Ok(value)
}

/// Ratios `q_k = K_{k+1}(z) / K_k(z)` for `k = 0..=n_max`, by the upward
/// recurrence `q_k = 2k/z + 1/q_{k-1}`.
pub fn bessel_k_ratios<T: Real>(z: T, n_max: usize) -> Result<Vec<T>> {
    let (k0, k1) = bessel_k01(z)?;
    let two_over_z = T::lit(2.0) / z;
    let mut q = Vec::with_capacity(n_max + 1);
    q.push(k1 / k0);
    for k in 1..=n_max {
        let prev = q[k - 1];
        q.push(T::from_usize_lossy(k) * two_over_z + T::one() / prev);
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // Independent reference values: mpmath power series for I_1(1); scipy
    // quadrature of K_0(z) = int_0^inf exp(-z cosh t) dt and
    // K_1(z) = int_0^inf exp(-z cosh t) cosh t dt.
    const I1_AT_1: f64 = 0.565_159_103_992_485_0;
    const K_QUADRATURE: [(f64, f64, f64); 6] = [
        (0.5, 0.924_419_071_227_665_65, 1.656_441_120_003_300_9),
        (1.0, 0.421_024_438_240_708_34, f64::NAN),
        (2.0, 0.113_893_872_749_533_43, 0.139_865_881_816_522_4),
        (3.0, 0.034_739_504_386_279_249, 0.040_156_431_128_194_184),
        (5.0, 0.003_691_098_334_042_593_8, 0.004_044_613_445_452_163_7),
        (10.0, 1.778_006_231_616_765_7e-5, 1.864_877_345_382_559_6e-5),
    ];

    #[test]
    fn i_small_argument_limits() {
        assert_relative_eq!(bessel_i(0, 1e-300_f64).unwrap(), 1.0);
        assert_eq!(bessel_i(0, 0.0_f64).unwrap(), 1.0);
        assert!(bessel_i(2, 1e-200_f64).unwrap() < 1e-300);
        assert_eq!(bessel_i(2, 0.0_f64).unwrap(), 0.0);
    }

    #[test]
    fn i1_matches_power_series_reference() {
        assert_relative_eq!(bessel_i(1, 1.0_f64).unwrap(), I1_AT_1, max_relative = 1e-14);
        assert_relative_eq!(bessel_i(-1, 1.0_f64).unwrap(), I1_AT_1, max_relative = 1e-14);
    }

    #[test]
    fn k_matches_quadrature() {
        for &(z, k0, k1) in &K_QUADRATURE {
            assert_relative_eq!(bessel_k(0, z).unwrap(), k0, max_relative = 1e-12);
            if k1.is_finite() {
                assert_relative_eq!(bessel_k(1, z).unwrap(), k1, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn k0_small_argument_expansion() {
        let z = 1e-4_f64;
        let lhs = bessel_k(0, z).unwrap() + (z / 2.0).ln();
        assert!((lhs + 0.577_215_664_9).abs() < 1e-7, "{lhs}");
    }

    #[test]
    fn wronskian_holds_across_orders() {
        for &z in &[0.5_f64, 2.0, 10.0] {
            for n in 0..=20 {
                let w = bessel_i(n, z).unwrap() * bessel_k(n + 1, z).unwrap()
                    + bessel_i(n + 1, z).unwrap() * bessel_k(n, z).unwrap();
                assert!((w * z - 1.0).abs() < 1e-10, "n={n} z={z} w*z={}", w * z);
            }
        }
    }

    #[test]
    fn miller_branch_agrees_with_series_branch() {
        // Above the switch the series is still valid (all terms positive).
        for &z in &[15.5_f64, 30.0, 120.0] {
            for n in [0usize, 1, 5, 40] {
                let series = i_series(n, z);
                let miller = bessel_i(n as i32, z).unwrap();
                assert_relative_eq!(miller, series, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn recurrence_consistency() {
        for &z in &[0.3_f64, 4.0, 16.0, 60.0] {
            for n in 1..30 {
                let lo = bessel_i(n - 1, z).unwrap();
                let mid = bessel_i(n, z).unwrap();
                let hi = bessel_i(n + 1, z).unwrap();
                let pred = lo - 2.0 * n as f64 / z * mid;
                if hi > 1e-280 {
                    assert!(((pred - hi) / hi).abs() < 1e-9 || (pred - hi).abs() < 1e-9 * lo);
                }
            }
        }
    }

    #[test]
    fn outputs_positive_and_finite() {
        for &z in &[1e-3_f64, 0.7, 3.0, 25.0, 200.0] {
            for n in 0..12 {
                let i = bessel_i(n, z).unwrap();
                let k = bessel_k(n, z).unwrap();
                assert!(i.is_finite() && i > 0.0);
                assert!(k.is_finite() && k > 0.0);
            }
        }
    }

    #[test]
    fn guards() {
        assert!(matches!(bessel_i(0, 701.0_f64), Err(Error::Overflow { .. })));
        assert!(matches!(bessel_k(0, 0.0_f64), Err(Error::DomainError { .. })));
        assert!(matches!(bessel_k(0, -1.0_f64), Err(Error::DomainError { .. })));
        assert!(matches!(bessel_i(300, 1.0_f64), Err(Error::BesselOrderTooLarge { .. })));
        assert!(matches!(bessel_k(200, 1e-3_f64), Err(Error::Overflow { .. })));
    }

    #[test]
    fn ratio_sequences_match_direct_values() {
        let z = 0.8_f64;
        let p = bessel_i_ratios(z, 10);
        let q = bessel_k_ratios(z, 10).unwrap();
        for k in 0..10 {
            let ip = bessel_i(k as i32 + 1, z).unwrap() / bessel_i(k as i32, z).unwrap();
            let kq = bessel_k(k as i32 + 1, z).unwrap() / bessel_k(k as i32, z).unwrap();
            assert_relative_eq!(p[k], ip, max_relative = 1e-13);
            assert_relative_eq!(q[k], kq, max_relative = 1e-13);
        }
    }

    #[test]
    fn single_precision_instantiation() {
        let v = bessel_i(1, 1.0_f32).unwrap();
        assert!((v as f64 - I1_AT_1).abs() < 1e-6);
        let k = bessel_k(0, 3.0_f32).unwrap();
        assert!((k as f64 - 0.034_739_504_386_279_249).abs() < 1e-7);
    }
}
