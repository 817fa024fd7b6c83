use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{lstsq_pinv, singular_values, thin_svd, DenseMatrix, C64, DEFAULT_RCOND};

/// Radial kernel used to interpolate POD coefficients over time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Kernel {
    /// `exp(-(r / shape)^2)`. Without an explicit shape the median pairwise
    /// distance between sample times is used.
    Gaussian { shape: Option<f64> },
    /// `r`, piecewise-linear interpolation in one dimension.
    Linear,
    /// `r^3`.
    Cubic,
}

impl Default for Kernel {
    fn default() -> Self {
        Kernel::Gaussian { shape: None }
    }
}

impl Kernel {
    fn eval(&self, r: f64, shape: f64) -> f64 {
        match self {
            Kernel::Gaussian { .. } => (-(r / shape).powi(2)).exp(),
            Kernel::Linear => r,
            Kernel::Cubic => r * r * r,
        }
    }
}

/// A POD basis with an RBF interpolant of its coefficients over time.
#[derive(Clone, Debug)]
pub struct PodRbfModel {
    /// Orthonormal columns, `state_dim x r_pod`.
    pub pod_basis: DenseMatrix,
    /// `r_pod x M` projections of the snapshots.
    pub coefficient_samples: DenseMatrix,
    pub kernel: Kernel,
    /// Shape parameter in effect (1 for kernels that ignore it).
    pub shape: f64,
    pub sample_times: Vec<f64>,
    /// `(M + 1) x r_pod`: kernel weights then the constant term, per coefficient.
    weights: DenseMatrix,
    /// The interpolation system was singular to working precision and was
    /// solved in the least-squares sense.
    pub regularized: bool,
}

fn median_pairwise_distance(times: &[f64]) -> f64 {
    let mut d: Vec<f64> = times
        .iter()
        .enumerate()
        .flat_map(|(i, a)| times[i + 1..].iter().map(move |b| (b - a).abs()))
        .collect();
    d.sort_by(f64::total_cmp);
    d[d.len() / 2]
}

/// Fits a rank-`r_pod` POD basis to the snapshots and an RBF interpolant,
/// augmented with a constant, to each projection coefficient.
pub fn fit_pod_rbf<V: AsRef<[C64]>>(states: &[V], times: &[f64], r_pod: usize, kernel: Kernel) -> Result<PodRbfModel> {
    let m = states.len();
    if m != times.len() {
        return Err(Error::contract(format!("{m} snapshots but {} sample times", times.len())));
    }
    if m < 2 || r_pod == 0 || r_pod > m {
        return Err(Error::contract(format!("need 2 <= r_pod ({r_pod}) <= snapshots ({m})")));
    }
    if !times.windows(2).all(|w| w[1] > w[0]) {
        return Err(Error::contract("sample times must be strictly increasing"));
    }
    let shape = match kernel {
        Kernel::Gaussian { shape: Some(s) } if s > 0.0 => s,
        Kernel::Gaussian { shape: Some(s) } => {
            return Err(Error::contract(format!("kernel shape must be positive, got {s}")))
        }
        Kernel::Gaussian { shape: None } => median_pairwise_distance(times),
        _ => 1.0,
    };

    let snapshots = DenseMatrix::from_columns(states)?;
    let rank = r_pod.min(snapshots.rows());
    let basis = thin_svd(&snapshots, rank)?.u;
    let coefficients = &basis.adjoint() * &snapshots;

    // [Phi 1; 1^T 0] [w; c] = [coeff^T; 0]
    let system = DenseMatrix::from_fn(m + 1, m + 1, |i, j| match (i < m, j < m) {
        (true, true) => C64::new(kernel.eval((times[i] - times[j]).abs(), shape), 0.0),
        (false, false) => C64::new(0.0, 0.0),
        _ => C64::new(1.0, 0.0),
    })?;
    let rhs = DenseMatrix::from_fn(m + 1, rank, |i, k| if i < m { coefficients.get(k, i) } else { C64::new(0.0, 0.0) })?;
    let sv = singular_values(&system)?;
    let regularized = sv.last().map_or(true, |&s| s <= DEFAULT_RCOND * sv[0]);
    if regularized {
        log::warn!("RBF interpolation matrix is singular to working precision; using a least-squares solve");
    }
    let weights = lstsq_pinv(&system, &rhs, DEFAULT_RCOND)?;

    Ok(PodRbfModel {
        pod_basis: basis,
        coefficient_samples: coefficients,
        kernel,
        shape,
        sample_times: times.to_vec(),
        weights,
        regularized,
    })
}

/// Evaluates the interpolated coefficients at `t` and lifts them back to
/// the state space. Times outside the sample range are extrapolated.
pub fn predict_pod_rbf(model: &PodRbfModel, t: f64) -> Vec<C64> {
    let m = model.sample_times.len();
    let row: Vec<f64> = model
        .sample_times
        .iter()
        .map(|&s| model.kernel.eval((t - s).abs(), model.shape))
        .collect();
    let coeffs: Vec<C64> = (0..model.pod_basis.cols())
        .map(|k| {
            let kernel_part: C64 = row.iter().enumerate().map(|(i, &phi)| model.weights.get(i, k) * phi).sum();
            kernel_part + model.weights.get(m, k)
        })
        .collect();
    model.pod_basis.mul_vec(&coeffs)
}
