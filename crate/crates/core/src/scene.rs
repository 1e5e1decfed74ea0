//! Problem instance: the unit disc, its small absorbing holes, and the
//! initial point mass.
//!
//! A [`RawScene`] is what users write (directly or as JSON); [`validate_scene`]
//! turns it into an immutable [`Scene`] with every geometric and physical
//! invariant checked and both `nu` and `epsilon` populated.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::real::Real;

/// Separation threshold, in units of `epsilon`, applied when the scene does not
/// set one explicitly.
pub const DEFAULT_SEPARATION_FACTOR: f64 = 10.0;

/// `nu = -1 / ln(epsilon)` for `epsilon` in (0, 1).
pub fn nu_from_epsilon<T: Real>(epsilon: T) -> Result<T> {
    if !(epsilon > T::zero() && epsilon < T::one()) {
        return Err(Error::DomainError {
            function: "nu_from_epsilon",
            value: epsilon.as_f64(),
            domain: "(0, 1)",
        });
    }
    Ok(-T::one() / epsilon.ln())
}

/// `epsilon = exp(-1 / nu)`; the inverse of [`nu_from_epsilon`].
pub fn epsilon_from_nu<T: Real>(nu: T) -> Result<T> {
    if !(nu > T::zero() && nu.is_finite()) {
        return Err(Error::DomainError {
            function: "epsilon_from_nu",
            value: nu.as_f64(),
            domain: "(0, inf)",
        });
    }
    Ok((-T::one() / nu).exp())
}

fn default_radius_scale<T: Real>() -> T {
    T::one()
}

/// One hole as supplied by the user.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct RawHole<T> {
    pub center: Point2<T>,
    pub phi: T,
    #[serde(default = "default_radius_scale")]
    pub radius_scale: T,
}

impl<T: Real> RawHole<T> {
    pub fn new(center: Point2<T>, phi: T) -> Self {
        Self {
            center,
            phi,
            radius_scale: T::one(),
        }
    }
}

/// Unvalidated scene description; this is also the JSON scene-file schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct RawScene<T> {
    #[serde(rename = "D")]
    pub diffusivity: T,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<T>,
    pub gamma0: T,
    pub x0: Point2<T>,
    pub holes: Vec<RawHole<T>>,
    #[serde(default)]
    pub allow_overshoot: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub separation_min: Option<T>,
}

impl<T: Real> RawScene<T> {
    /// Scene with the given holes, unit diffusivity, no initial mass, and
    /// the logarithmic gauge `nu`.
    pub fn with_nu(nu: T, holes: Vec<RawHole<T>>) -> Self {
        Self {
            diffusivity: T::one(),
            nu: Some(nu),
            epsilon: None,
            gamma0: T::zero(),
            x0: Point2::origin(),
            holes,
            allow_overshoot: false,
            separation_min: None,
        }
    }

    pub fn with_epsilon(epsilon: T, holes: Vec<RawHole<T>>) -> Self {
        Self {
            nu: None,
            epsilon: Some(epsilon),
            ..Self::with_nu(T::one(), holes)
        }
    }

    pub fn source(mut self, gamma0: T, x0: Point2<T>) -> Self {
        self.gamma0 = gamma0;
        self.x0 = x0;
        self
    }

    pub fn diffusivity(mut self, d: T) -> Self {
        self.diffusivity = d;
        self
    }

    pub fn allow_overshoot(mut self, allow: bool) -> Self {
        self.allow_overshoot = allow;
        self
    }

    pub fn separation_min(mut self, s: T) -> Self {
        self.separation_min = Some(s);
        self
    }

    pub fn validate(self) -> Result<Scene<T>> {
        validate_scene(self)
    }
}

/// Which of the two redundant size parameters the scene was specified with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Gauge {
    Nu,
    Epsilon,
}

/// A validated hole: a disc of radius `epsilon * radius_scale` around
/// `center` held at concentration `phi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hole<T> {
    pub center: Point2<T>,
    pub radius_scale: T,
    pub phi: T,
}

/// Validated, immutable problem instance on the unit disc.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene<T> {
    holes: Vec<Hole<T>>,
    diffusivity: T,
    nu: T,
    epsilon: T,
    gamma0: T,
    x0: Point2<T>,
    separation_min: T,
    explicit_separation: bool,
    allow_overshoot: bool,
    gauge: Gauge,
}

impl<T: Real> Scene<T> {
    pub fn holes(&self) -> &[Hole<T>] {
        &self.holes
    }

    pub fn n_holes(&self) -> usize {
        self.holes.len()
    }

    pub fn diffusivity(&self) -> T {
        self.diffusivity
    }

    pub fn nu(&self) -> T {
        self.nu
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    pub fn gamma0(&self) -> T {
        self.gamma0
    }

    pub fn x0(&self) -> Point2<T> {
        self.x0
    }

    pub fn separation_min(&self) -> T {
        self.separation_min
    }

    pub fn allows_overshoot(&self) -> bool {
        self.allow_overshoot
    }

    /// `|Omega|` for the unit disc.
    pub fn domain_area(&self) -> T {
        T::PI()
    }

    pub fn centers(&self) -> impl Iterator<Item = Point2<T>> + '_ {
        self.holes.iter().map(|h| h.center)
    }

    /// Mean boundary value. Exact (not a rounded average) when all holes share
    /// the same value, so identical-value code paths see `phi_j - phi_bar == 0`.
    pub fn phi_bar(&self) -> T {
        let first = match self.holes.first() {
            Some(h) => h.phi,
            None => return T::nan(),
        };
        if self.holes.iter().all(|h| h.phi == first) {
            return first;
        }
        self.holes.iter().map(|h| h.phi).sum::<T>() / T::from_usize_lossy(self.holes.len())
    }

    pub fn has_identical_phi(&self) -> bool {
        self.holes.windows(2).all(|w| w[0].phi == w[1].phi)
    }

    /// Inverse of [`validate_scene`]: validating the result reproduces `self`.
    pub fn to_raw(&self) -> RawScene<T> {
        RawScene {
            diffusivity: self.diffusivity,
            nu: (self.gauge == Gauge::Nu).then_some(self.nu),
            epsilon: (self.gauge == Gauge::Epsilon).then_some(self.epsilon),
            gamma0: self.gamma0,
            x0: self.x0,
            holes: self
                .holes
                .iter()
                .map(|h| RawHole {
                    center: h.center,
                    phi: h.phi,
                    radius_scale: h.radius_scale,
                })
                .collect(),
            allow_overshoot: self.allow_overshoot,
            separation_min: self.explicit_separation.then_some(self.separation_min),
        }
    }

    /// Short hex digest of the canonical JSON form, embedded in every artifact.
    pub fn fingerprint(&self) -> String {
        let raw = self.to_raw();
        let canonical = RawScene::<f64> {
            diffusivity: raw.diffusivity.as_f64(),
            nu: raw.nu.map(Real::as_f64),
            epsilon: raw.epsilon.map(Real::as_f64),
            gamma0: raw.gamma0.as_f64(),
            x0: raw.x0.cast(),
            holes: raw
                .holes
                .iter()
                .map(|h| RawHole {
                    center: h.center.cast(),
                    phi: h.phi.as_f64(),
                    radius_scale: h.radius_scale.as_f64(),
                })
                .collect(),
            allow_overshoot: raw.allow_overshoot,
            separation_min: raw.separation_min.map(Real::as_f64),
        };
        let bytes = serde_json::to_vec(&canonical).expect("scene serializes");
        hex::encode(&Sha256::digest(&bytes)[..8])
    }

    /// Same scene with a different initial mass and location (validated).
    pub fn with_source(&self, gamma0: T, x0: Point2<T>) -> Result<Self> {
        self.to_raw().source(gamma0, x0).validate()
    }

    /// Same holes and source at a different logarithmic gauge (validated).
    pub fn with_nu(&self, nu: T) -> Result<Self> {
        let mut raw = self.to_raw();
        raw.nu = Some(nu);
        raw.epsilon = None;
        raw.validate()
    }
}

fn positive<T: Real>(name: &'static str, value: T) -> Result<()> {
    if value > T::zero() && value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonpositiveParameter {
            name,
            value: value.as_f64(),
        })
    }
}

/// Checks every scene invariant and derives the missing one of `nu`/`epsilon`.
pub fn validate_scene<T: Real>(raw: RawScene<T>) -> Result<Scene<T>> {
    positive("D", raw.diffusivity)?;
    if !(raw.gamma0 >= T::zero()) || !raw.gamma0.is_finite() {
        return Err(Error::NonpositiveParameter {
            name: "gamma0",
            value: raw.gamma0.as_f64(),
        });
    }

    let (nu, epsilon, gauge) = match (raw.nu, raw.epsilon) {
        (Some(nu), None) => {
            positive("nu", nu)?;
            (nu, epsilon_from_nu(nu)?, Gauge::Nu)
        }
        (None, Some(eps)) => {
            positive("epsilon", eps)?;
            (nu_from_epsilon(eps)?, eps, Gauge::Epsilon)
        }
        _ => return Err(Error::AmbiguousGauge),
    };

    let (separation_min, explicit_separation) = match raw.separation_min {
        Some(s) if s >= T::zero() => (s, true),
        Some(s) => {
            return Err(Error::NonpositiveParameter {
                name: "separation_min",
                value: s.as_f64(),
            })
        }
        None => (T::lit(DEFAULT_SEPARATION_FACTOR) * epsilon, false),
    };

    let mut holes = Vec::with_capacity(raw.holes.len());
    for (index, h) in raw.holes.iter().enumerate() {
        if h.radius_scale != T::one() {
            return Err(Error::UnsupportedHoleShape {
                index,
                value: h.radius_scale.as_f64(),
            });
        }
        positive("phi", h.phi)?;
        let r = h.center.norm();
        if !(r + epsilon < T::one()) {
            return Err(Error::HoleOutsideDomain {
                index,
                reason: format!(
                    "|center| + epsilon = {} >= 1",
                    (r + epsilon).as_f64()
                ),
            });
        }
        if T::one() - r < separation_min {
            return Err(Error::HoleOutsideDomain {
                index,
                reason: format!(
                    "distance to the outer boundary {} is below the separation minimum {}",
                    (T::one() - r).as_f64(),
                    separation_min.as_f64()
                ),
            });
        }
        holes.push(Hole {
            center: h.center,
            radius_scale: h.radius_scale,
            phi: h.phi,
        });
    }

    for i in 0..holes.len() {
        for j in i + 1..holes.len() {
            let d = holes[i].center.distance(holes[j].center);
            if d < separation_min || d <= T::lit(2.0) * epsilon {
                return Err(Error::HolesOverlapping {
                    first: i,
                    second: j,
                    distance: d.as_f64(),
                    minimum: separation_min.max(T::lit(2.0) * epsilon).as_f64(),
                });
            }
        }
    }

    if !(raw.x0.norm() < T::one()) {
        return Err(Error::InvalidSource {
            reason: format!("lies outside the unit disc (|x0| = {})", raw.x0.norm().as_f64()),
        });
    }
    // The source location only enters the problem when there is initial mass.
    if raw.gamma0 > T::zero() {
        for (index, h) in holes.iter().enumerate() {
            let d = raw.x0.distance(h.center);
            if d < separation_min || d <= epsilon {
                return Err(Error::InvalidSource {
                    reason: format!(
                        "is {} from hole {index}, below the separation minimum {}",
                        d.as_f64(),
                        separation_min.as_f64()
                    ),
                });
            }
        }
    }

    if let Some(min_phi) = holes.iter().map(|h| h.phi).reduce(T::min) {
        let density = raw.gamma0 / T::PI();
        if density >= min_phi {
            if raw.allow_overshoot {
                log::warn!(
                    "growth condition violated (gamma0/|Omega| = {} >= min phi = {}); \
                     the accumulation time may be negative",
                    density.as_f64(),
                    min_phi.as_f64()
                );
            } else {
                return Err(Error::GrowthConditionViolated {
                    mean_density: density.as_f64(),
                    min_phi: min_phi.as_f64(),
                });
            }
        }
    }

    Ok(Scene {
        holes,
        diffusivity: raw.diffusivity,
        nu,
        epsilon,
        gamma0: raw.gamma0,
        x0: raw.x0,
        separation_min,
        explicit_separation,
        allow_overshoot: raw.allow_overshoot,
        gauge,
    })
}
