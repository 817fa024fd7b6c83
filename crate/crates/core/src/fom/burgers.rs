//! Viscous Burgers in conservative semi-discrete form
//! `f(u) = -1/2 A1 (u o u) + mu A2 u` with homogeneous Dirichlet ends.

use super::stencil::{central_first, central_second};
use crate::numerics::C64;

pub(super) fn rhs(u: &[C64], h: f64, viscosity: f64, out: &mut [C64]) {
    let squared: Vec<C64> = u.iter().map(|z| z * z).collect();
    let flux = central_first(&squared, h);
    let diffusion = central_second(u, h);
    for j in 0..u.len() {
        out[j] = flux[j] * -0.5 + diffusion[j] * viscosity;
    }
}

pub(super) fn initial_condition(x: &[f64]) -> Vec<C64> {
    let n = x.len();
    x.iter()
        .enumerate()
        .map(|(j, &xj)| {
            if j == 0 || j == n - 1 {
                C64::new(0.0, 0.0)
            } else {
                C64::new(-(std::f64::consts::PI * xj).sin(), 0.0)
            }
        })
        .collect()
}

/// `-1/2 A1 (du o du)`: the exact second-order part of the Burgers
/// right-hand side, i.e. `f(u + du) - f(u) - J(u) du`.
pub fn burgers_remainder_operator(delta_u: &[C64], h: f64) -> Vec<C64> {
    let squared: Vec<C64> = delta_u.iter().map(|z| z * z).collect();
    central_first(&squared, h).into_iter().map(|z| z * -0.5).collect()
}

/// Analytic Jacobian-vector product `J(u) v = -A1 (u o v) + mu A2 v`.
pub fn burgers_jacobian_apply(u: &[C64], v: &[C64], h: f64, viscosity: f64) -> Vec<C64> {
    let uv: Vec<C64> = u.iter().zip(v).map(|(a, b)| a * b).collect();
    let adv = central_first(&uv, h);
    let diff = central_second(v, h);
    adv.iter().zip(&diff).map(|(a, d)| -a + d * viscosity).collect()
}
