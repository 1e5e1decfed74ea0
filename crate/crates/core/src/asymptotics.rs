//! Matched-asymptotics solution of the perforated-disc problem: interaction
//! systems, the steady state `u*`, the Laplace-space outer solution and the
//! accumulation time `T(x)`.
//!
//! Each quantity has a precomputing evaluator (`SteadyState`, `LaplaceField`,
//! `AccTimeOrder1`, `NonperturbativeAccTime`) for repeated evaluation over a
//! grid, and a one-shot free function of the same name.

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::greens::{g0, r0_coincident, HelmholtzKernel, HelmholtzParams};
use crate::linalg::{least_squares, solve_checked, Matrix};
use crate::real::Real;
use crate::scene::Scene;

/// Distance below which `T` and `u~` are treated as evaluated on a singularity.
pub const SINGULAR_GUARD: f64 = 1e-9;

/// Condition-number limit for the interaction solves.
pub const MAX_CONDITION: f64 = 1e12;

/// Default Laplace variable for the non-perturbative accumulation time.
pub const DEFAULT_S_BASE: f64 = 1e-2;

/// Green's-function couplings between hole centers; diagonal holds regular
/// parts. `s == 0` selects the Neumann (`G0`/`R0`) entries.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionMatrix<T> {
    pub entries: Matrix<T>,
    pub s: T,
}

fn require_holes<T: Real>(scene: &Scene<T>) -> Result<()> {
    if scene.n_holes() == 0 {
        Err(Error::NoHoles)
    } else {
        Ok(())
    }
}

fn neumann_matrix<T: Real>(scene: &Scene<T>) -> Result<Matrix<T>> {
    let d = scene.diffusivity();
    let h = scene.holes();
    let n = h.len();
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = r0_coincident(h[i].center, d)?;
        for j in i + 1..n {
            let v = g0(h[i].center, h[j].center, d)?.value;
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    Ok(m)
}

fn helmholtz_matrix<T: Real>(scene: &Scene<T>, kernel: &HelmholtzKernel<T>) -> Result<Matrix<T>> {
    let h = scene.holes();
    let n = h.len();
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = kernel.r_coincident(h[i].center)?;
        for j in i + 1..n {
            let v = kernel.g(h[i].center, h[j].center)?.value;
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    Ok(m)
}

pub fn build_interaction_matrix<T: Real>(scene: &Scene<T>, s: T) -> Result<InteractionMatrix<T>> {
    require_holes(scene)?;
    let entries = if s == T::zero() {
        neumann_matrix(scene)?
    } else {
        let kernel = HelmholtzKernel::new(HelmholtzParams::new(s, scene.diffusivity())?, scene.diffusivity())?;
        helmholtz_matrix(scene, &kernel)?
    };
    Ok(InteractionMatrix { entries, s })
}

/// Rejects points outside the disc or inside a hole.
fn check_outer<T: Real>(scene: &Scene<T>, x: Point2<T>) -> Result<()> {
    let r = x.norm();
    if r > T::one() + T::lit(1e-12) || !r.is_finite() {
        return Err(Error::PointOutsideDomain { radius: r.as_f64() });
    }
    for (index, h) in scene.holes().iter().enumerate() {
        if x.distance(h.center) < scene.epsilon() * h.radius_scale {
            return Err(Error::EvaluationInsideHole { index });
        }
    }
    Ok(())
}

/// Rejects points within [`SINGULAR_GUARD`] of a hole center, or of `x0`
/// when the initial mass is nonzero.
fn check_singular<T: Real>(scene: &Scene<T>, x: Point2<T>) -> Result<()> {
    let guard = T::lit(SINGULAR_GUARD);
    let mut nearest = T::infinity();
    for c in scene.centers() {
        nearest = nearest.min(x.distance(c));
    }
    if scene.gamma0() != T::zero() {
        nearest = nearest.min(x.distance(scene.x0()));
    }
    if nearest < guard {
        return Err(Error::EvaluationAtSingularPoint {
            distance: nearest.as_f64(),
        });
    }
    Ok(())
}

/// Laplace-space hole strengths `A_j(nu, s)` and the right-hand side `V_j(s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplaceCoeffs<T> {
    pub a_s: Vec<T>,
    pub v_rhs: Vec<T>,
}

/// Outer solution `u~(x, s)` for one `s`, with its kernel and coefficients.
#[derive(Debug, Clone)]
pub struct LaplaceField<T> {
    scene: Scene<T>,
    kernel: HelmholtzKernel<T>,
    matrix: InteractionMatrix<T>,
    coeffs: LaplaceCoeffs<T>,
}

impl<T: Real> LaplaceField<T> {
    pub fn new(scene: &Scene<T>, s: T) -> Result<Self> {
        require_holes(scene)?;
        let d = scene.diffusivity();
        let kernel = HelmholtzKernel::new(HelmholtzParams::new(s, d)?, d)?;
        let entries = helmholtz_matrix(scene, &kernel)?;
        let n = scene.n_holes();
        let gamma0 = scene.gamma0();
        let v_rhs = scene
            .holes()
            .iter()
            .map(|h| {
                let mut v = h.phi / s;
                if gamma0 != T::zero() {
                    v = v - gamma0 * kernel.g(h.center, scene.x0())?.value;
                }
                Ok(v)
            })
            .collect::<Result<Vec<T>>>()?;
        let kappa = T::TAU() * scene.nu() * d;
        let system = Matrix::identity(n).add(&entries.scaled(kappa));
        let rhs: Vec<T> = v_rhs.iter().map(|&v| -d * v).collect();
        let a_s = solve_checked(&system, &rhs, T::lit(MAX_CONDITION))?;
        Ok(Self {
            scene: scene.clone(),
            kernel,
            matrix: InteractionMatrix { entries, s },
            coeffs: LaplaceCoeffs { a_s, v_rhs },
        })
    }

    pub fn s(&self) -> T {
        self.matrix.s
    }

    pub fn coeffs(&self) -> &LaplaceCoeffs<T> {
        &self.coeffs
    }

    pub fn matrix(&self) -> &InteractionMatrix<T> {
        &self.matrix
    }

    /// `u~(x, s) = Γ0 G(x, s | x0) - 2 π ν Σ_j A_j G(x, s | x_j)`.
    pub fn eval(&self, x: Point2<T>) -> Result<T> {
        let scene = &self.scene;
        check_outer(scene, x)?;
        check_singular(scene, x)?;
        let mut sum = T::zero();
        for (h, &a) in scene.holes().iter().zip(&self.coeffs.a_s) {
            sum = sum + a * self.kernel.g(x, h.center)?.value;
        }
        let mut u = -T::TAU() * scene.nu() * sum;
        if scene.gamma0() != T::zero() {
            u = u + scene.gamma0() * self.kernel.g(x, scene.x0())?.value;
        }
        Ok(u)
    }
}

pub fn solve_interaction_coeffs<T: Real>(scene: &Scene<T>, s: T) -> Result<LaplaceCoeffs<T>> {
    Ok(LaplaceField::new(scene, s)?.coeffs)
}

pub fn outer_solution_laplace<T: Real>(scene: &Scene<T>, x: Point2<T>, s: T) -> Result<T> {
    LaplaceField::new(scene, s)?.eval(x)
}

/// Steady-state hole strengths `𝒜_j`, the mass defect `ΔΓ` and `Φ̄`.
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyCoeffs<T> {
    pub a: Vec<T>,
    pub delta_gamma: T,
    pub phi_bar: T,
}

/// `u*(x)` with its coefficients and the Neumann interaction matrix.
#[derive(Debug, Clone)]
pub struct SteadyState<T> {
    scene: Scene<T>,
    matrix: InteractionMatrix<T>,
    coeffs: SteadyCoeffs<T>,
    /// `(2 π ν / N) Σ_ij a_i 𝒢_ij`.
    offset: T,
}

impl<T: Real> SteadyState<T> {
    pub fn new(scene: &Scene<T>) -> Result<Self> {
        require_holes(scene)?;
        let g = neumann_matrix(scene)?;
        let n = scene.n_holes();
        let nf = T::from_usize_lossy(n);
        let d = scene.diffusivity();
        let kappa = T::TAU() * scene.nu();
        let phi_bar = scene.phi_bar();
        let col_mean: Vec<T> = (0..n).map(|k| (0..n).map(|j| g[(j, k)]).sum::<T>() / nf).collect();
        // N balance rows plus the constraint Σ a = 0; consistent by construction.
        let system = Matrix::from_fn(n + 1, n, |j, k| {
            if j == n {
                T::one()
            } else {
                let diag = if j == k { T::one() / d } else { T::zero() };
                kappa * (g[(j, k)] - col_mean[k]) + diag
            }
        });
        let mut rhs: Vec<T> = scene.holes().iter().map(|h| phi_bar - h.phi).collect();
        rhs.push(T::zero());
        let a = if scene.has_identical_phi() {
            vec![T::zero(); n]
        } else {
            least_squares(&system, &rhs)?
        };
        let ga: T = (0..n)
            .map(|i| (0..n).map(|j| a[i] * g[(i, j)]).sum::<T>())
            .sum();
        let offset = kappa * ga / nf;
        let delta_gamma = -scene.domain_area() * (phi_bar + offset);
        Ok(Self {
            scene: scene.clone(),
            matrix: InteractionMatrix { entries: g, s: T::zero() },
            coeffs: SteadyCoeffs {
                a,
                delta_gamma,
                phi_bar,
            },
            offset,
        })
    }

    pub fn coeffs(&self) -> &SteadyCoeffs<T> {
        &self.coeffs
    }

    pub fn matrix(&self) -> &InteractionMatrix<T> {
        &self.matrix
    }

    /// `u*(x) = Φ̄ - 2 π ν Σ_k a_k G0(x, x_k) + (2 π ν / N) Σ_ij a_i 𝒢_ij`.
    pub fn eval(&self, x: Point2<T>) -> Result<T> {
        let scene = &self.scene;
        check_outer(scene, x)?;
        let mut sum = T::zero();
        for (h, &a) in scene.holes().iter().zip(&self.coeffs.a) {
            if a != T::zero() {
                sum = sum + a * g0_or_singular(x, h.center, scene.diffusivity())?;
            }
        }
        Ok(self.coeffs.phi_bar - T::TAU() * scene.nu() * sum + self.offset)
    }
}

fn g0_or_singular<T: Real>(x: Point2<T>, y: Point2<T>, d: T) -> Result<T> {
    match g0(x, y, d) {
        Err(Error::CoincidentPoints) => Err(Error::EvaluationAtSingularPoint {
            distance: x.distance(y).as_f64(),
        }),
        other => other.map(|e| e.value),
    }
}

pub fn steady_state_coeffs<T: Real>(scene: &Scene<T>) -> Result<SteadyCoeffs<T>> {
    Ok(SteadyState::new(scene)?.coeffs)
}

pub fn steady_state<T: Real>(scene: &Scene<T>, x: Point2<T>) -> Result<T> {
    SteadyState::new(scene)?.eval(x)
}

/// Accumulation time to `O(1)` in the `ν`-expansion, with every
/// `x`-independent sum precomputed.
#[derive(Debug, Clone)]
pub struct AccTimeOrder1<T> {
    scene: Scene<T>,
    /// `(|Ω| Φ̄ - Γ0) / (2 π ν N D Φ̄)`.
    leading: T,
    /// `x`-independent part of the `O(1)` source term.
    source_const: T,
    /// `-(1/N) Σ_jk (Φ̄ - Φ_j) 𝒢_jk`.
    bracket_const: T,
}

impl<T: Real> AccTimeOrder1<T> {
    pub fn new(scene: &Scene<T>) -> Result<Self> {
        require_holes(scene)?;
        let g = neumann_matrix(scene)?;
        let holes = scene.holes();
        let n = holes.len();
        let nf = T::from_usize_lossy(n);
        let d = scene.diffusivity();
        let area = scene.domain_area();
        let phi_bar = scene.phi_bar();
        let gamma0 = scene.gamma0();
        let excess = area * phi_bar - gamma0;
        let leading = excess / (T::TAU() * scene.nu() * nf * d * phi_bar);

        let mut sum_g = T::zero();
        let mut sum_dev_g = T::zero();
        for i in 0..n {
            let dev = phi_bar - holes[i].phi;
            for j in 0..n {
                sum_g = sum_g + g[(i, j)];
                sum_dev_g = sum_dev_g + dev * g[(i, j)];
            }
        }
        let mut source_const = -(area / (nf * nf)) * sum_dev_g - excess / (nf * nf) * sum_g;
        if gamma0 != T::zero() {
            let mut sum_x0 = T::zero();
            for h in holes {
                sum_x0 = sum_x0 + g0(h.center, scene.x0(), d)?.value;
            }
            source_const = source_const - gamma0 / nf * sum_x0;
        }
        Ok(Self {
            scene: scene.clone(),
            leading,
            source_const,
            bracket_const: -sum_dev_g / nf,
        })
    }

    pub fn eval(&self, x: Point2<T>) -> Result<T> {
        let scene = &self.scene;
        check_outer(scene, x)?;
        check_singular(scene, x)?;
        let d = scene.diffusivity();
        let n = T::from_usize_lossy(scene.n_holes());
        let phi_bar = scene.phi_bar();
        let excess = scene.domain_area() * phi_bar - scene.gamma0();
        let mut sum_g = T::zero();
        let mut bracket = self.bracket_const;
        for h in scene.holes() {
            let gx = g0(x, h.center, d)?.value;
            sum_g = sum_g + gx;
            bracket = bracket + (phi_bar - h.phi) * gx;
        }
        let mut source = self.source_const + excess / n * sum_g;
        if scene.gamma0() != T::zero() {
            source = source + scene.gamma0() * g0(x, scene.x0(), d)?.value;
        }
        Ok(self.leading - source / phi_bar + excess / (n * phi_bar * phi_bar) * bracket)
    }
}

pub fn acc_time_order1<T: Real>(scene: &Scene<T>, x: Point2<T>) -> Result<T> {
    AccTimeOrder1::new(scene)?.eval(x)
}

/// Accumulation time with all logarithmic terms summed, from
/// `T = -(dF/ds)(0) / F(0)`, `F = s u~`, by a one-sided difference at `s`
/// and `s/2` with one Richardson step.
#[derive(Debug, Clone)]
pub struct NonperturbativeAccTime<T> {
    steady: SteadyState<T>,
    coarse: LaplaceField<T>,
    fine: LaplaceField<T>,
}

impl<T: Real> NonperturbativeAccTime<T> {
    pub fn new(scene: &Scene<T>, s_base: T) -> Result<Self> {
        if !(s_base > T::zero()) {
            return Err(Error::NonpositiveParameter {
                name: "s_base",
                value: s_base.as_f64(),
            });
        }
        Ok(Self {
            steady: SteadyState::new(scene)?,
            coarse: LaplaceField::new(scene, s_base)?,
            fine: LaplaceField::new(scene, s_base * T::lit(0.5))?,
        })
    }

    pub fn steady(&self) -> &SteadyState<T> {
        &self.steady
    }

    pub fn eval(&self, x: Point2<T>) -> Result<T> {
        let u_star = self.steady.eval(x)?;
        let one_sided = |field: &LaplaceField<T>| -> Result<T> {
            let s = field.s();
            Ok((u_star - s * field.eval(x)?) / (s * u_star))
        };
        let coarse = one_sided(&self.coarse)?;
        let fine = one_sided(&self.fine)?;
        if (fine - coarse).abs() > T::lit(0.5) * coarse.abs() {
            return Err(Error::NonConvergedExtrapolation {
                coarse: coarse.as_f64(),
                fine: fine.as_f64(),
            });
        }
        Ok(T::lit(2.0) * fine - coarse)
    }
}

pub fn acc_time_nonperturbative<T: Real>(scene: &Scene<T>, x: Point2<T>, s_base: T) -> Result<T> {
    NonperturbativeAccTime::new(scene, s_base)?.eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::greens::{g_helmholtz, r_helmholtz_coincident};
    use crate::scene::{RawHole, RawScene};
    use std::f64::consts::PI;

    fn p(x: f64, y: f64) -> Point2<f64> {
        Point2::new(x, y)
    }

    fn center_hole(nu: f64) -> Scene<f64> {
        RawScene::with_nu(nu, vec![RawHole::new(p(0.0, 0.0), 1.0)])
            .validate()
            .unwrap()
    }

    fn two_holes(phi: [f64; 2], gamma0: f64) -> Scene<f64> {
        RawScene::with_nu(
            0.1,
            vec![RawHole::new(p(0.2, 0.0), phi[0]), RawHole::new(p(-0.2, 0.0), phi[1])],
        )
        .source(gamma0, p(0.0, 0.5))
        .validate()
        .unwrap()
    }

    #[test]
    fn neumann_matrix_entries() {
        let m = build_interaction_matrix(&center_hole(0.1), 0.0).unwrap();
        assert!((m.entries[(0, 0)] + 3.0 / (8.0 * PI)).abs() < 1e-15);
        let m = build_interaction_matrix(&two_holes([1.0, 1.0], 0.0), 0.0).unwrap().entries;
        assert_eq!(m[(0, 1)], m[(1, 0)]);
        assert!((m[(0, 0)] - m[(1, 1)]).abs() < 1e-15);
        assert!((m[(0, 1)] - g0(p(0.2, 0.0), p(-0.2, 0.0), 1.0).unwrap().value).abs() < 1e-15);
    }

    #[test]
    fn helmholtz_matrix_matches_pointwise() {
        let scene = two_holes([1.0, 2.0], 0.0);
        let m = build_interaction_matrix(&scene, 1.0).unwrap().entries;
        let hp = HelmholtzParams::new(1.0, 1.0).unwrap();
        assert_eq!(m[(0, 1)], g_helmholtz(p(0.2, 0.0), p(-0.2, 0.0), &hp, 1.0).unwrap().value);
        assert_eq!(m[(1, 1)], r_helmholtz_coincident(p(-0.2, 0.0), &hp, 1.0).unwrap());
    }

    #[test]
    fn single_hole_laplace_coefficient_closed_form() {
        let scene = RawScene::with_nu(0.1, vec![RawHole::new(p(0.3, 0.1), 1.0)])
            .validate()
            .unwrap();
        let s = 0.5;
        let c = solve_interaction_coeffs(&scene, s).unwrap();
        let hp = HelmholtzParams::new(s, 1.0).unwrap();
        let r = r_helmholtz_coincident(p(0.3, 0.1), &hp, 1.0).unwrap();
        let expect = -(1.0 / s) / (1.0 + 2.0 * PI * 0.1 * r);
        assert!((c.a_s[0] - expect).abs() < 1e-12);
    }

    #[test]
    fn laplace_residual_is_small() {
        let scene = two_holes([1.0, 1.0], 1.0);
        let f = LaplaceField::new(&scene, 0.01).unwrap();
        let (g, c) = (&f.matrix().entries, f.coeffs());
        let kappa = 2.0 * PI * 0.1;
        let mut res = 0.0_f64;
        let mut scale = 0.0_f64;
        for i in 0..2 {
            let lhs = c.a_s[i] + kappa * (0..2).map(|j| g[(i, j)] * c.a_s[j]).sum::<f64>();
            res = res.max((lhs + c.v_rhs[i]).abs());
            scale = scale.max(c.v_rhs[i].abs());
        }
        assert!(res <= 1e-10 * scale);
    }

    #[test]
    fn steady_coefficients_two_holes() {
        let c = steady_state_coeffs(&two_holes([1.0, 2.0], 0.0)).unwrap();
        // reduced 2x2 system solved independently
        assert!((c.a[0] - 0.545_628_036_769_713_5).abs() < 1e-12);
        assert!((c.a[0] + c.a[1]).abs() < 1e-12);
        assert_eq!(c.phi_bar, 1.5);
    }

    #[test]
    fn steady_state_identical_phi_is_constant() {
        let scene = two_holes([0.7, 0.7], 1.0);
        let c = steady_state_coeffs(&scene).unwrap();
        assert_eq!(c.a, vec![0.0, 0.0]);
        assert!((-c.delta_gamma / PI - 0.7).abs() < 1e-15);
        for x in [p(0.5, 0.5), p(-0.9, 0.0), p(0.0, 0.5)] {
            assert_eq!(steady_state(&scene, x).unwrap(), 0.7);
        }
    }

    #[test]
    fn steady_state_ignores_source() {
        let a = steady_state(&two_holes([1.0, 2.0], 0.0), p(0.1, 0.6)).unwrap();
        let b = steady_state(&two_holes([1.0, 2.0], 0.9), p(0.1, 0.6)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn center_hole_accumulation_time() {
        let scene = center_hole(0.1);
        assert!((acc_time_order1(&scene, p(1.0, 0.0)).unwrap() - 4.75).abs() < 1e-12);
        let half = acc_time_order1(&scene, p(0.5, 0.0)).unwrap();
        assert!((half - 4.590_926_409_720_027_3).abs() < 1e-12);
    }

    #[test]
    fn identical_phi_matches_specialized_formula() {
        // with identical values the deviation bracket vanishes and
        // T = (|Ω|Φ - Γ0)/(2πνNDΦ) - F0/Φ
        let scene = two_holes([1.3, 1.3], 0.8);
        let t = AccTimeOrder1::new(&scene).unwrap();
        let x = p(0.4, -0.3);
        let (phi, gamma0, nu) = (1.3, 0.8, 0.1);
        let xs = [p(0.2, 0.0), p(-0.2, 0.0)];
        let g = neumann_matrix(&scene).unwrap();
        let sum_g: f64 = (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| g[(i, j)]).sum();
        let gx: f64 = xs.iter().map(|&c| g0(x, c, 1.0).unwrap().value).sum();
        let gx0: f64 = xs.iter().map(|&c| g0(c, p(0.0, 0.5), 1.0).unwrap().value).sum();
        let excess = PI * phi - gamma0;
        let f0 = gamma0 * g0(x, p(0.0, 0.5), 1.0).unwrap().value - gamma0 / 2.0 * gx0
            - excess / 4.0 * sum_g
            + excess / 2.0 * gx;
        let expect = excess / (2.0 * PI * nu * 2.0 * phi) - f0 / phi;
        assert!((t.eval(x).unwrap() - expect).abs() < 1e-13);
    }

    #[test]
    fn singular_points_are_rejected() {
        let scene = two_holes([1.0, 2.0], 1.0);
        assert!(matches!(
            acc_time_order1(&scene, p(0.0, 0.5)),
            Err(Error::EvaluationAtSingularPoint { .. })
        ));
        assert!(matches!(
            acc_time_order1(&scene, p(0.2, 0.0)),
            Err(Error::EvaluationInsideHole { index: 0 })
        ));
        assert!(matches!(
            steady_state(&scene, p(1.2, 0.0)),
            Err(Error::PointOutsideDomain { .. })
        ));
    }

    #[test]
    fn laplace_solution_tends_to_steady_state() {
        let scene = two_holes([1.0, 1.0], 0.0);
        let s = 1e-3;
        for x in [p(0.6, 0.3), p(-0.1, -0.7)] {
            let su = s * outer_solution_laplace(&scene, x, s).unwrap();
            assert!((su - 1.0).abs() < 5e-3, "{su}");
        }
    }

    #[test]
    fn laplace_solution_without_mass_ignores_x0() {
        let a = two_holes([1.0, 2.0], 0.0);
        let b = a.with_source(0.0, p(0.3, -0.6)).unwrap();
        let x = p(0.5, 0.5);
        assert_eq!(
            outer_solution_laplace(&a, x, 0.2).unwrap(),
            outer_solution_laplace(&b, x, 0.2).unwrap()
        );
    }

    #[test]
    fn nonperturbative_close_to_order_one() {
        let scene = center_hole(0.1);
        let x = p(0.75, 0.0);
        let np = acc_time_nonperturbative(&scene, x, DEFAULT_S_BASE).unwrap();
        let o1 = acc_time_order1(&scene, x).unwrap();
        assert!((np - o1).abs() <= 0.5, "{np} vs {o1}");
        let half = acc_time_nonperturbative(&scene, x, DEFAULT_S_BASE / 2.0).unwrap();
        assert!(((half - np) / np).abs() <= 1e-3);
    }

    #[test]
    fn nonperturbative_mirror_symmetry() {
        let scene = two_holes([1.0, 1.0], 0.0);
        let t = NonperturbativeAccTime::new(&scene, DEFAULT_S_BASE).unwrap();
        let a = t.eval(p(0.5, 0.3)).unwrap();
        let b = t.eval(p(-0.5, 0.3)).unwrap();
        assert!((a - b).abs() < 1e-8);
    }

    #[test]
    fn no_holes_is_an_error() {
        let scene = RawScene::with_nu(0.1, vec![]).validate().unwrap();
        assert!(matches!(steady_state_coeffs(&scene), Err(Error::NoHoles)));
    }
}
