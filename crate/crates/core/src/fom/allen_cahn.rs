use super::stencil::neumann_second;
use crate::numerics::C64;

/// `alpha u_xx + 5 (u - u^3)` with zero-flux ends.
pub(super) fn rhs(u: &[C64], h: f64, diffusion: f64, out: &mut [C64]) {
    let lap = neumann_second(u, h);
    for j in 0..u.len() {
        let z = u[j];
        out[j] = lap[j] * diffusion + (z - z * z * z) * 5.0;
    }
}

pub(super) fn initial_condition(x: &[f64]) -> Vec<C64> {
    use std::f64::consts::PI;
    x.iter()
        .map(|&xj| C64::new(0.53 * xj + 0.47 * (-1.5 * PI * xj).sin(), 0.0))
        .collect()
}
