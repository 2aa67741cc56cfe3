//! Special functions: Bessel functions of the first kind of real order and
//! their zeros, the modified Bessel function K0, and Gauss-Legendre rules.

mod bessel;
mod gamma;
mod k0;
mod quadrature;

pub use bessel::{bessel_j, bessel_j_with_derivative, bessel_order_zeros, bessel_zeros_below};
pub use gamma::ln_gamma;
pub use k0::bessel_k0;
pub use quadrature::{gauss_legendre, integrate};

/// `sin(pi * t)`, exactly zero at integer `t`.
pub fn sin_pi(t: f64) -> f64 {
    if t.fract() == 0.0 {
        return 0.0;
    }
    // reduce to [-1, 1)
    let r = t - 2.0 * (t / 2.0).floor();
    let r = if r >= 1.0 { r - 2.0 } else { r };
    (std::f64::consts::PI * r).sin()
}
