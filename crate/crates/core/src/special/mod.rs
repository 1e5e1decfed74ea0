//! Special functions needed by the Green's functions and the 1D closed forms.

mod bessel;
mod erf;

pub use bessel::{
    bessel_i, bessel_i_ratios, bessel_k, bessel_k01, bessel_k_ratios, DEFAULT_ORDER_CAP,
};
pub use erf::{erfc, erfcx};
