//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar the analytic formulas are written against.
///
/// Implemented for `f32` and `f64`. Tolerances quoted throughout the crate
/// (1e-12 for special functions, 1e-10 for linear solves) assume `f64`;
/// `f32` instantiations run the same code paths at single precision.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Sum + Send + Sync + 'static
{
    /// Euler–Mascheroni constant.
    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable in scalar type")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("integer representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn euler_gamma() -> Self {
        Self::lit(Self::EULER_GAMMA)
    }

    /// Largest argument for which `exp` stays finite with some headroom.
    fn exp_guard() -> Self {
        Self::max_value().ln() - Self::lit(10.0)
    }
}

impl Real for f32 {}
impl Real for f64 {}
