//! One-dimensional morphogen gradient: constant flux `J` into `x = 0`,
//! diffusion `D` and linear degradation `k` on a long interval.

use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadratureOptions};
use crate::real::Real;
use crate::special::{erfc, erfcx};

/// `Z(x, t)` below which the time integrand is treated as zero.
pub const Z_CUTOFF: f64 = 1e-10;

/// Default Laplace variable for [`acc_time_1d_laplace`], in units of `k`.
pub const DEFAULT_LAPLACE_S: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Morphogen1DParams<T> {
    pub d: T,
    pub k: T,
    pub j: T,
    pub l: T,
}

impl<T: Real> Morphogen1DParams<T> {
    pub fn new(d: T, k: T, j: T, l: T) -> Result<Self> {
        for (name, value) in [("D", d), ("k", k), ("J", j), ("L", l)] {
            if !(value > T::zero() && value.is_finite()) {
                return Err(Error::NonpositiveParameter {
                    name,
                    value: value.as_f64(),
                });
            }
        }
        let p = Self { d, k, j, l };
        if l < T::lit(10.0) * p.xi() {
            log::warn!(
                "L = {} is shorter than 10 length constants ({}); semi-infinite formulas lose accuracy",
                l,
                p.xi()
            );
        }
        Ok(p)
    }

    /// Length constant `ξ = sqrt(D/k)`.
    pub fn xi(&self) -> T {
        (self.d / self.k).sqrt()
    }
}

fn check_x<T: Real>(x: T) -> Result<()> {
    if x >= T::zero() && x.is_finite() {
        Ok(())
    } else {
        Err(Error::DomainError {
            function: "morphogen_1d",
            value: x.as_f64(),
            domain: "x >= 0",
        })
    }
}

/// `u*(x) = (J ξ / D) exp(-x/ξ)`.
pub fn steady_1d<T: Real>(x: T, p: &Morphogen1DParams<T>) -> T {
    let xi = p.xi();
    p.j * xi / p.d * (-x / xi).exp()
}

/// Fractional deviation `Z = 1 - u/u*`.
///
/// The second erfc term carries `exp(2x/ξ)`; combined with the scaled erfc
/// the exponent collapses to `-(a - b)^2`, so nothing overflows.
pub fn deviation_1d<T: Real>(x: T, t: T, p: &Morphogen1DParams<T>) -> T {
    if t <= T::zero() {
        return T::one();
    }
    let root = (p.d * t).sqrt();
    let a = root / p.xi();
    let b = x / (T::lit(2.0) * root);
    let half = T::lit(0.5);
    half * erfc(a - b) + half * (-(a - b) * (a - b)).exp() * erfcx(a + b)
}

/// `u(x, t)` from zero initial data.
pub fn concentration_1d<T: Real>(x: T, t: T, p: &Morphogen1DParams<T>) -> Result<T> {
    check_x(x)?;
    if t < T::zero() {
        return Err(Error::DomainError {
            function: "concentration_1d",
            value: t.as_f64(),
            domain: "t >= 0",
        });
    }
    Ok(steady_1d(x, p) * (T::one() - deviation_1d(x, t, p)))
}

/// Exact accumulation time `T(x) = (1 + x/ξ) / (2k)`.
pub fn acc_time_1d_exact<T: Real>(x: T, p: &Morphogen1DParams<T>) -> Result<T> {
    check_x(x)?;
    Ok((T::one() + x / p.xi()) / (T::lit(2.0) * p.k))
}

/// First time (doubling from `1/k`) at which `Z` drops below [`Z_CUTOFF`].
fn time_cutoff<T: Real>(x: T, p: &Morphogen1DParams<T>) -> Result<T> {
    let mut t = T::one() / p.k;
    for _ in 0..200 {
        if deviation_1d(x, t, p) < T::lit(Z_CUTOFF) {
            return Ok(t);
        }
        t = t * T::lit(2.0);
    }
    Err(Error::QuadratureNotConverged { estimate: f64::NAN })
}

fn quad_opts() -> QuadratureOptions {
    QuadratureOptions {
        abs_tol: 1e-11,
        rel_tol: 1e-11,
        max_intervals: 4000,
    }
}

/// `T(x) = ∫ Z(x, t) dt` by adaptive quadrature.
pub fn acc_time_1d_numeric<T: Real>(x: T, p: &Morphogen1DParams<T>) -> Result<T> {
    check_x(x)?;
    let t_max = time_cutoff(x, p)?;
    integrate(|t| deviation_1d(x, t, p), T::zero(), t_max, quad_opts())
}

/// `T(x)` from the Laplace transform `F(s) = s ∫ exp(-st) u dt`, via
/// `T ≈ (F(0) - F(s)) / (s F(0))` at `s` and `s/2` with one Richardson step.
/// `s` is given in units of `k`.
pub fn acc_time_1d_laplace<T: Real>(x: T, p: &Morphogen1DParams<T>, s: T) -> Result<T> {
    check_x(x)?;
    let u_star = steady_1d(x, p);
    let t_max = time_cutoff(x, p)?;
    let one_sided = |s: T| -> Result<T> {
        // ∫ e^{-st} u = u*/s + ∫ e^{-st} (u - u*), the second part decaying with Z
        let transient = integrate(
            |t| (-s * t).exp() * (steady_1d(x, p) * (T::one() - deviation_1d(x, t, p)) - u_star),
            T::zero(),
            t_max,
            quad_opts(),
        )?;
        let f = s * (u_star / s + transient);
        Ok((u_star - f) / (s * u_star))
    };
    let s = s * p.k;
    let coarse = one_sided(s)?;
    let fine = one_sided(s * T::lit(0.5))?;
    Ok(T::lit(2.0) * fine - coarse)
}

/// Leading-eigenmode accumulation time on `[0, L]`:
/// `T0(x) = ξ/(kL) (1 - exp(-L/ξ)) exp(x/ξ)`.
pub fn truncated_acc_time_1d<T: Real>(x: T, p: &Morphogen1DParams<T>) -> Result<T> {
    check_x(x)?;
    let xi = p.xi();
    Ok(xi / (p.k * p.l) * (T::one() - (-p.l / xi).exp()) * (x / xi).exp())
}
