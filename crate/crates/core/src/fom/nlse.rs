use super::stencil::central_second;
use crate::numerics::C64;

/// `i theta psi_xx + i theta |psi|^2 psi`, Dirichlet ends.
pub(super) fn rhs(psi: &[C64], h: f64, theta: f64, out: &mut [C64]) {
    let lap = central_second(psi, h);
    let n = psi.len();
    let i_theta = C64::new(0.0, theta);
    for j in 0..n {
        out[j] = if j == 0 || j == n - 1 {
            C64::new(0.0, 0.0)
        } else {
            i_theta * (lap[j] + psi[j] * psi[j].norm_sqr())
        };
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
                C64::new(2.0 / xj.cosh(), 0.0)
            }
        })
        .collect()
}
