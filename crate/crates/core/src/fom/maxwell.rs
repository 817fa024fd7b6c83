//! 2-D transverse-magnetic Maxwell system with polarization (`J`) and
//! magnetization (`K`) currents and manufactured sources.
//!
//! State blocks, each `n x n` nodes: `Hx, Hy, Ez, Jz, Kx, Ky`.
//! `Ez` is pinned to zero on the boundary (perfect conductor).

use super::stencil::{dx_2d, dy_2d};
use crate::numerics::C64;

struct Sources {
    gx: f64,
    gy: f64,
    fs: f64,
}

fn sources(t: f64, x: f64, y: f64, omega: f64) -> Sources {
    let e = (-t).exp();
    let (sx, cx) = (omega * x).sin_cos();
    let (sy, cy) = (omega * y).sin_cos();
    Sources {
        gx: (omega - 1.0 + t) * sx * cy * e,
        gy: (1.0 - omega - t) * cx * sy * e,
        fs: (t - 1.0 - 2.0 * omega) * sx * sy * e,
    }
}

fn on_boundary(idx: usize, n: usize) -> bool {
    let (i, j) = (idx % n, idx / n);
    i == 0 || j == 0 || i == n - 1 || j == n - 1
}

pub(super) fn rhs(u: &[C64], t: f64, n: usize, lower: f64, h: f64, omega: f64, out: &mut [C64]) {
    let m = n * n;
    let (hx, rest) = u.split_at(m);
    let (hy, rest) = rest.split_at(m);
    let (ez, rest) = rest.split_at(m);
    let (jz, rest) = rest.split_at(m);
    let (kx, ky) = rest.split_at(m);

    let dez_dx = dx_2d(ez, n, h);
    let dez_dy = dy_2d(ez, n, h);
    let dhy_dx = dx_2d(hy, n, h);
    let dhx_dy = dy_2d(hx, n, h);

    for idx in 0..m {
        let x = lower + (idx % n) as f64 * h;
        let y = lower + (idx / n) as f64 * h;
        let s = sources(t, x, y, omega);
        // dH/dt = -curl E - K + g, curl E = (dE/dy, -dE/dx)
        out[idx] = -dez_dy[idx] - kx[idx] + s.gx;
        out[m + idx] = dez_dx[idx] - ky[idx] + s.gy;
        // dE/dt = curl H - J + f
        out[2 * m + idx] = if on_boundary(idx, n) {
            C64::new(0.0, 0.0)
        } else {
            dhy_dx[idx] - dhx_dy[idx] - jz[idx] + s.fs
        };
        out[3 * m + idx] = ez[idx] - jz[idx];
        out[4 * m + idx] = hx[idx] - kx[idx];
        out[5 * m + idx] = hy[idx] - ky[idx];
    }
}

pub(super) fn initial_condition(n: usize, lower: f64, h: f64, omega: f64) -> Vec<C64> {
    let m = n * n;
    let mut u = vec![C64::new(0.0, 0.0); 6 * m];
    for idx in 0..m {
        let x = lower + (idx % n) as f64 * h;
        let y = lower + (idx / n) as f64 * h;
        let (sx, cx) = (omega * x).sin_cos();
        let (sy, cy) = (omega * y).sin_cos();
        u[idx] = C64::new(sx * cy, 0.0);
        u[m + idx] = C64::new(-cx * sy, 0.0);
        if !on_boundary(idx, n) {
            u[2 * m + idx] = C64::new(sx * sy, 0.0);
        }
    }
    u
}
