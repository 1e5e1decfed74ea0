//! Principal eigenvalue of the perforated disc and the single-mode
//! ("truncated") accumulation time.
//!
//! The eigenvalue condition uses the small-`λ` form of the Helmholtz
//! interaction matrix, `𝒢(-λ) ≈ -E/(λ|Ω|) + 𝒢0` with `E` the all-ones matrix.

use crate::asymptotics::build_interaction_matrix;
use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::greens::{g0, r0_coincident};
use crate::linalg::{Lu, Matrix};
use crate::real::Real;
use crate::scene::Scene;

const SCAN_START: f64 = 1e-6;
const SCAN_POINTS_PER_DECADE: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralEstimate<T> {
    pub lambda_two_term: T,
    pub lambda_root: T,
    pub tau: T,
    pub n_holes: usize,
}

/// `det(I + 2πνD(-E/(λ|Ω|) + 𝒢0))` as a function of `λ`.
#[derive(Debug, Clone)]
pub struct EigenCondition<T> {
    base: Matrix<T>,
    kappa: T,
    area: T,
}

impl<T: Real> EigenCondition<T> {
    pub fn new(scene: &Scene<T>) -> Result<Self> {
        let g = build_interaction_matrix(scene, T::zero())?.entries;
        let kappa = T::TAU() * scene.nu() * scene.diffusivity();
        let n = g.rows();
        Ok(Self {
            base: Matrix::identity(n).add(&g.scaled(kappa)),
            kappa,
            area: scene.domain_area(),
        })
    }

    pub fn det(&self, lambda: T) -> T {
        let shift = self.kappa / (lambda * self.area);
        let n = self.base.rows();
        let m = Matrix::from_fn(n, n, |i, j| self.base[(i, j)] - shift);
        Lu::new(&m).det()
    }
}

/// Finds the first sign change of `f` on a geometric grid over `[lo, hi]`.
fn bracket<T: Real>(f: impl Fn(T) -> T, lo: T, hi: T) -> Option<(T, T)> {
    let decades = (hi / lo).log10().ceil().max(T::one());
    let steps = (decades.as_f64() as usize) * SCAN_POINTS_PER_DECADE;
    let ratio = (hi / lo).powf(T::one() / T::from_usize_lossy(steps));
    let mut a = lo;
    let mut fa = f(a);
    for _ in 0..steps {
        let b = (a * ratio).min(hi);
        let fb = f(b);
        if fa == T::zero() {
            return Some((a, a));
        }
        if fa.signum() != fb.signum() {
            return Some((a, b));
        }
        a = b;
        fa = fb;
    }
    None
}

fn refine_root<T: Real>(f: impl Fn(T) -> T, mut a: T, mut b: T) -> T {
    let mut fa = f(a);
    if a == b {
        return a;
    }
    for _ in 0..200 {
        let mid = (a + b) * T::lit(0.5);
        let fm = f(mid);
        if fm == T::zero() {
            return mid;
        }
        if fa.signum() == fm.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
        if (b - a) <= T::lit(1e-10) * b {
            break;
        }
    }
    // secant polish, kept inside the bracket
    let (mut x0, mut x1) = (a, b);
    let (mut f0, mut f1) = (f(x0), f(x1));
    for _ in 0..20 {
        if f1 == f0 {
            break;
        }
        let x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if !(x2 >= a && x2 <= b) {
            break;
        }
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f(x1);
        if (x1 - x0).abs() <= T::epsilon() * x1 * T::lit(4.0) {
            break;
        }
    }
    x1
}

pub fn principal_eigenvalue<T: Real>(scene: &Scene<T>) -> Result<SpectralEstimate<T>> {
    let cond = EigenCondition::new(scene)?;
    let n = scene.n_holes();
    let nf = T::from_usize_lossy(n);
    let leading = cond.kappa / cond.area;
    let hi = T::lit(10.0) * leading * nf;
    let f = |l: T| cond.det(l);
    let (a, b) = bracket(f, T::lit(SCAN_START), hi).ok_or(Error::NoRootBracketed { upper: hi.as_f64() })?;
    let lambda_root = refine_root(f, a, b);
    let lambda_two_term = if n == 1 {
        let r0 = r0_coincident(scene.holes()[0].center, scene.diffusivity())?;
        leading * (T::one() - cond.kappa * r0)
    } else {
        leading * nf
    };
    Ok(SpectralEstimate {
        lambda_two_term,
        lambda_root,
        tau: T::one() / lambda_root,
        n_holes: n,
    })
}

/// Single-mode accumulation time `T0(x)` for a one-hole scene.
pub fn truncated_acc_time<T: Real>(scene: &Scene<T>, x: Point2<T>) -> Result<T> {
    TruncatedAccTime::new(scene)?.eval(x)
}

/// Precomputed form of [`truncated_acc_time`].
#[derive(Debug, Clone)]
pub struct TruncatedAccTime<T> {
    scene: Scene<T>,
    constant: T,
    weight: T,
}

impl<T: Real> TruncatedAccTime<T> {
    pub fn new(scene: &Scene<T>) -> Result<Self> {
        match scene.n_holes() {
            0 => return Err(Error::NoHoles),
            1 => {}
            count => return Err(Error::UnsupportedHoleCount { count }),
        }
        let hole = scene.holes()[0];
        let d = scene.diffusivity();
        let phi = hole.phi;
        let gamma0 = scene.gamma0();
        let excess = scene.domain_area() * phi - gamma0;
        let weight = excess / phi;
        let mut constant = excess / (T::TAU() * scene.nu() * d * phi)
            + weight * r0_coincident(hole.center, d)?;
        if gamma0 != T::zero() {
            constant = constant + gamma0 / phi * g0(hole.center, scene.x0(), d)?.value;
        }
        Ok(Self {
            scene: scene.clone(),
            constant,
            weight,
        })
    }

    pub fn eval(&self, x: Point2<T>) -> Result<T> {
        let hole = self.scene.holes()[0];
        let r = x.norm();
        if r > T::one() + T::lit(1e-12) {
            return Err(Error::PointOutsideDomain { radius: r.as_f64() });
        }
        let dist = x.distance(hole.center);
        if dist < self.scene.epsilon() * hole.radius_scale {
            return Err(Error::EvaluationInsideHole { index: 0 });
        }
        if dist < T::lit(crate::asymptotics::SINGULAR_GUARD) {
            return Err(Error::EvaluationAtSingularPoint {
                distance: dist.as_f64(),
            });
        }
        Ok(self.constant - self.weight * g0(x, hole.center, self.scene.diffusivity())?.value)
    }
}
