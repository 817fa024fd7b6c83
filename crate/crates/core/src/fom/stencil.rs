//! Second-order finite-difference stencils on uniform grids.

use crate::numerics::C64;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Central first difference; boundary rows are zero (Dirichlet nodes).
pub fn central_first(v: &[C64], h: f64) -> Vec<C64> {
    let n = v.len();
    let mut out = vec![ZERO; n];
    let s = 1.0 / (2.0 * h);
    for j in 1..n - 1 {
        out[j] = (v[j + 1] - v[j - 1]) * s;
    }
    out
}

/// Central second difference; boundary rows are zero (Dirichlet nodes).
pub fn central_second(v: &[C64], h: f64) -> Vec<C64> {
    let n = v.len();
    let mut out = vec![ZERO; n];
    let s = 1.0 / (h * h);
    for j in 1..n - 1 {
        out[j] = (v[j + 1] - v[j] * 2.0 + v[j - 1]) * s;
    }
    out
}

/// Second difference with zero-flux ends via mirrored ghost nodes.
pub fn neumann_second(v: &[C64], h: f64) -> Vec<C64> {
    let n = v.len();
    let s = 1.0 / (h * h);
    let mut out = central_second(v, h);
    out[0] = (v[1] - v[0]) * (2.0 * s);
    out[n - 1] = (v[n - 2] - v[n - 1]) * (2.0 * s);
    out
}

/// First derivative along one direction of a 2-D collocated grid.
///
/// `at(k)` returns the flat index of the k-th node along the line. Interior
/// nodes use central differences, end nodes the second-order one-sided
/// formula.
fn line_derivative(field: &[C64], n: usize, h: f64, at: impl Fn(usize) -> usize, out: &mut [C64]) {
    let s = 1.0 / (2.0 * h);
    let f = |k: usize| field[at(k)];
    out[at(0)] = (f(0) * -3.0 + f(1) * 4.0 - f(2)) * s;
    for k in 1..n - 1 {
        out[at(k)] = (f(k + 1) - f(k - 1)) * s;
    }
    out[at(n - 1)] = (f(n - 1) * 3.0 - f(n - 2) * 4.0 + f(n - 3)) * s;
}

/// `d/dx` on an `n x n` grid stored with index `i + n * j`.
pub fn dx_2d(field: &[C64], n: usize, h: f64) -> Vec<C64> {
    let mut out = vec![ZERO; n * n];
    for j in 0..n {
        line_derivative(field, n, h, |i| i + n * j, &mut out);
    }
    out
}

/// `d/dy` on an `n x n` grid stored with index `i + n * j`.
pub fn dy_2d(field: &[C64], n: usize, h: f64) -> Vec<C64> {
    let mut out = vec![ZERO; n * n];
    for i in 0..n {
        line_derivative(field, n, h, |j| i + n * j, &mut out);
    }
    out
}
