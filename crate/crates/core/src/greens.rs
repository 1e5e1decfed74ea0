//! Green's functions of the unit disc with reflecting outer boundary.
//!
//! * `G0`: generalized Neumann Green's function of `D Δ` (zero mean, source
//!   balanced by a uniform sink).
//! * `G(x, s | x0)`: Neumann Green's function of `D Δ - s`, normalized so its
//!   integral over the disc is `1/s`.
//! * `G1`: the `O(s)` coefficient of `G - 1/(s π) = G0 + s G1 + ...`, obtained
//!   numerically.
//!
//! Every function returns values already divided by `2 π D`.

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::real::Real;
use crate::special::{bessel_i, bessel_i_ratios, bessel_k01, bessel_k_ratios, DEFAULT_ORDER_CAP};

/// Separations below this are treated as the same point.
pub const COINCIDENT_TOL: f64 = 1e-12;

/// Default absolute truncation tolerance for the Helmholtz correction series.
pub const DEFAULT_SERIES_TOL: f64 = 1e-12;

/// Default step for the numerical `s`-derivative in [`g1`].
pub const DEFAULT_G1_STEP: f64 = 1e-2;

/// A Green's function value with its non-singular part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreensEval<T> {
    pub value: T,
    /// `value + ln|x - x0| / (2 π D)`.
    pub regular_part: T,
    pub is_coincident: bool,
}

fn check_nonpositive<T: Real>(name: &'static str, v: T) -> Result<()> {
    if v > T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(Error::NonpositiveParameter {
            name,
            value: v.as_f64(),
        })
    }
}

fn check_in_closed_disc<T: Real>(p: Point2<T>) -> Result<()> {
    let r = p.norm();
    if r > T::one() + T::lit(1e-12) || !r.is_finite() {
        return Err(Error::PointOutsideDomain { radius: r.as_f64() });
    }
    Ok(())
}

fn prefactor<T: Real>(d: T) -> T {
    T::one() / (T::TAU() * d)
}

/// `G0(x, xi)`.
///
/// The image term is written as
/// `-ln|x|xi| - xi/|xi|| = -1/2 ln(|x - xi|^2 + (1 - |x|^2)(1 - |xi|^2))`,
/// which is symmetric in its arguments and regular as `xi -> 0`.
pub fn g0<T: Real>(x: Point2<T>, xi: Point2<T>, d: T) -> Result<GreensEval<T>> {
    check_nonpositive("D", d)?;
    check_in_closed_disc(x)?;
    check_in_closed_disc(xi)?;
    let dist_sq = (x - xi).norm_sq();
    if dist_sq.sqrt() < T::lit(COINCIDENT_TOL) {
        return Err(Error::CoincidentPoints);
    }
    let (a2, b2) = (x.norm_sq(), xi.norm_sq());
    let image = dist_sq + (T::one() - a2).max(T::zero()) * (T::one() - b2).max(T::zero());
    let half = T::lit(0.5);
    let regular = prefactor(d) * (-half * image.ln() + half * (a2 + b2) - T::lit(0.75));
    let value = regular - prefactor(d) * half * dist_sq.ln();
    Ok(GreensEval {
        value,
        regular_part: regular,
        is_coincident: false,
    })
}

/// `R0(xi, xi)`, the regular part of `G0` on the diagonal.
pub fn r0_coincident<T: Real>(xi: Point2<T>, d: T) -> Result<T> {
    check_nonpositive("D", d)?;
    let a2 = xi.norm_sq();
    if !(a2 < T::one()) {
        return Err(Error::DomainError {
            function: "r0_coincident",
            value: a2.sqrt().as_f64(),
            domain: "|xi| < 1",
        });
    }
    Ok(prefactor(d) * (-(T::one() - a2).ln() + a2 - T::lit(0.75)))
}

/// Laplace variable and series controls for the modified-Helmholtz kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelmholtzParams<T> {
    pub s: T,
    pub omega: T,
    pub tol: T,
    pub n_max: usize,
}

impl<T: Real> HelmholtzParams<T> {
    pub fn new(s: T, d: T) -> Result<Self> {
        check_nonpositive("s", s)?;
        check_nonpositive("D", d)?;
        Ok(Self {
            s,
            omega: (s / d).sqrt(),
            tol: T::lit(DEFAULT_SERIES_TOL),
            n_max: DEFAULT_ORDER_CAP,
        })
    }

    pub fn with_tol(mut self, tol: T) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_n_max(mut self, n_max: usize) -> Self {
        self.n_max = n_max;
        self
    }
}

/// The `x`-independent part of the modified-Helmholtz series for one `s`.
///
/// The boundary correction is
/// `sum_n eps_n c_n rho_n(r) rho_n(r0) cos(n dtheta)` with
/// `c_n = K_n'(w) I_n(w)^2 / I_n'(w)`, `rho_n(r) = I_n(w r) / I_n(w)` and
/// `eps_0 = 1, eps_n = 2`. Both `c_n` and `rho_n` are built from ratios of
/// consecutive Bessel functions, so nothing overflows for large `n` or `w`.
#[derive(Debug, Clone)]
pub struct HelmholtzKernel<T> {
    params: HelmholtzParams<T>,
    d: T,
    i0_omega: T,
    /// `I_{k+1}(w) / I_k(w)`.
    p_omega: Vec<T>,
    coef: Vec<T>,
}

impl<T: Real> HelmholtzKernel<T> {
    pub fn new(params: HelmholtzParams<T>, d: T) -> Result<Self> {
        check_nonpositive("s", params.s)?;
        check_nonpositive("D", d)?;
        check_nonpositive("tol", params.tol)?;
        let w = params.omega;
        let n_max = params.n_max.max(2);
        let p = bessel_i_ratios(w, n_max + 1);
        let q = bessel_k_ratios(w, n_max + 1)?;
        let (k0, _) = bessel_k01(w)?;
        let i0 = bessel_i(0, w)?;
        let mut coef = Vec::with_capacity(n_max + 1);
        // K_n(w) I_n(w), advanced by q_{n-1} p_{n-1}.
        let mut ki = k0 * i0;
        for n in 0..=n_max {
            if n > 0 {
                ki = ki * q[n - 1] * p[n - 1];
            }
            let (dk, di) = if n == 0 {
                (-q[0], p[0])
            } else {
                (
                    -(T::one() / q[n - 1] + q[n]) * T::lit(0.5),
                    (T::one() / p[n - 1] + p[n]) * T::lit(0.5),
                )
            };
            coef.push(dk / di * ki);
        }
        if !coef.iter().all(|c| c.is_finite()) {
            return Err(Error::Overflow {
                function: "helmholtz_kernel",
                value: w.as_f64(),
            });
        }
        Ok(Self {
            params,
            d,
            i0_omega: i0,
            p_omega: p,
            coef,
        })
    }

    pub fn params(&self) -> &HelmholtzParams<T> {
        &self.params
    }

    pub fn diffusivity(&self) -> T {
        self.d
    }

    /// `rho_n(r)` for `n = 0..=n_max`.
    fn radial(&self, r: T) -> Result<Vec<T>> {
        let n_max = self.coef.len() - 1;
        let wr = self.params.omega * r;
        let mut rho = vec![T::zero(); n_max + 1];
        rho[0] = bessel_i(0, wr)? / self.i0_omega;
        if wr == T::zero() {
            return Ok(rho);
        }
        let pr = bessel_i_ratios(wr, n_max);
        for n in 1..=n_max {
            rho[n] = rho[n - 1] * pr[n - 1] / self.p_omega[n - 1];
        }
        Ok(rho)
    }

    /// Boundary-correction series (without the `1/(2 π D)` factor).
    fn correction(&self, x: Point2<T>, x0: Point2<T>) -> Result<T> {
        let rho = self.radial(x.norm())?;
        let rho0 = if x == x0 {
            rho.clone()
        } else {
            self.radial(x0.norm())?
        };
        let dtheta = x.angle() - x0.angle();
        let tol = self.params.tol * T::TAU() * self.d;
        let mut sum = self.coef[0] * rho[0] * rho0[0];
        let mut small = 0;
        for n in 1..self.coef.len() {
            let nf = T::from_usize_lossy(n);
            let term = T::lit(2.0) * self.coef[n] * rho[n] * rho0[n] * (nf * dtheta).cos();
            sum = sum + term;
            // the cosine can vanish by accident, so bound the term by its envelope
            let envelope = (T::lit(2.0) * self.coef[n] * rho[n] * rho0[n]).abs();
            if envelope < tol {
                small += 1;
                if small >= 2 {
                    return Ok(sum);
                }
            } else {
                small = 0;
            }
        }
        Err(Error::SeriesNotConverged {
            n_max: self.coef.len() - 1,
            tol: self.params.tol.as_f64(),
        })
    }

    /// `G(x, s | x0)` for distinct points.
    pub fn g(&self, x: Point2<T>, x0: Point2<T>) -> Result<GreensEval<T>> {
        check_in_closed_disc(x)?;
        check_in_closed_disc(x0)?;
        let dist = x.distance(x0);
        if dist < T::lit(COINCIDENT_TOL) {
            return Err(Error::CoincidentPoints);
        }
        let (k0, _) = bessel_k01(self.params.omega * dist)?;
        let value = prefactor(self.d) * (k0 - self.correction(x, x0)?);
        Ok(GreensEval {
            value,
            regular_part: value + prefactor(self.d) * dist.ln(),
            is_coincident: false,
        })
    }

    /// `R(x0, s | x0)`, using `K_0(z) + ln z -> ln 2 - γ`.
    pub fn r_coincident(&self, x0: Point2<T>) -> Result<T> {
        if !(x0.norm() < T::one()) {
            return Err(Error::PointOutsideDomain {
                radius: x0.norm().as_f64(),
            });
        }
        let w = self.params.omega;
        let local = -(w * T::lit(0.5)).ln() - T::euler_gamma();
        Ok(prefactor(self.d) * (local - self.correction(x0, x0)?))
    }
}

/// `G(x, s | x0)`; builds a one-off [`HelmholtzKernel`].
pub fn g_helmholtz<T: Real>(
    x: Point2<T>,
    x0: Point2<T>,
    params: &HelmholtzParams<T>,
    d: T,
) -> Result<GreensEval<T>> {
    HelmholtzKernel::new(*params, d)?.g(x, x0)
}

/// `R(x0, s | x0)`; builds a one-off [`HelmholtzKernel`].
pub fn r_helmholtz_coincident<T: Real>(
    x0: Point2<T>,
    params: &HelmholtzParams<T>,
    d: T,
) -> Result<T> {
    HelmholtzKernel::new(*params, d)?.r_coincident(x0)
}

/// One-sided five-point derivative at `s = 0` of `H(s) = F(s) - 1/(s π)`,
/// anchored by the exact `H(0)` and sampled at `s = k h / 4`, `k = 1..4`.
fn ds_at_zero<T: Real>(h0: T, h: T, mut f: impl FnMut(T) -> Result<T>) -> Result<T> {
    let step = h * T::lit(0.25);
    let mut hs = [h0, T::zero(), T::zero(), T::zero(), T::zero()];
    for k in 1..5 {
        let s = step * T::from_usize_lossy(k);
        hs[k] = f(s)? - T::one() / (s * T::PI());
    }
    let w = [-25.0, 48.0, -36.0, 16.0, -3.0];
    let acc: T = hs.iter().zip(w).map(|(&v, c)| v * T::lit(c)).sum();
    Ok(acc / (T::lit(12.0) * step))
}

/// `G1(x, x0)` with the default step.
pub fn g1<T: Real>(x: Point2<T>, x0: Point2<T>, d: T) -> Result<T> {
    g1_with_step(x, x0, d, T::lit(DEFAULT_G1_STEP))
}

/// `G1(x, x0)` from samples of `G(x, s | x0)` on `(0, h]`; error `O(h^4)`.
pub fn g1_with_step<T: Real>(x: Point2<T>, x0: Point2<T>, d: T, h: T) -> Result<T> {
    check_nonpositive("h", h)?;
    let base = g0(x, x0, d)?.value;
    ds_at_zero(base, h, |s| {
        g_helmholtz(x, x0, &HelmholtzParams::new(s, d)?, d).map(|g| g.value)
    })
}

/// Diagonal counterpart of [`g1`]: the `O(s)` coefficient of `R(x0, s | x0)`.
pub fn r1_coincident<T: Real>(x0: Point2<T>, d: T) -> Result<T> {
    let base = r0_coincident(x0, d)?;
    ds_at_zero(base, T::lit(DEFAULT_G1_STEP), |s| {
        r_helmholtz_coincident(x0, &HelmholtzParams::new(s, d)?, d)
    })
}
