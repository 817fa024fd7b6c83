use serde::{Deserialize, Serialize};

use crate::dmd::{select_rank, DmdModel, ObservableMap, RankSpec};
use crate::error::{Error, Result};
use crate::numerics::{all_finite, eig_dense, lstsq_pinv, thin_svd, DenseMatrix, C64, DEFAULT_RCOND};

/// Eigenvalues of the delay Gram matrix below this fraction of the largest
/// are dropped. The Gram matrix squares the singular values, so this sits
/// well above machine precision.
const GRAM_RCOND: f64 = 1e-11;

/// Delay-embedding settings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HodmdConfig {
    /// Consecutive snapshots stacked per column.
    pub d: usize,
    pub rank: RankSpec,
}

impl HodmdConfig {
    pub fn validate(&self, snapshots: usize) -> Result<()> {
        if self.d == 0 {
            return Err(Error::contract("d must be at least 1"));
        }
        if snapshots < self.d + 2 {
            return Err(Error::contract(format!(
                "{snapshots} snapshots cannot support {} delays (need d + 2)",
                self.d
            )));
        }
        self.rank.validate()
    }
}

/// Shape of the delay-stacked snapshot matrix for `snapshots` states of
/// dimension `dim`: `(rows, columns)`.
pub fn delay_matrix_shape(dim: usize, snapshots: usize, d: usize) -> (usize, usize) {
    (dim * d, (snapshots + 1).saturating_sub(d))
}

/// Sums `g` along diagonals of length `d`: `s[i][j] = sum_l g[i+l][j+l]`.
/// This is the Gram matrix of the delay-stacked columns.
fn delay_gram(g: &DenseMatrix, d: usize, count: usize) -> Vec<Vec<C64>> {
    (0..count)
        .map(|i| {
            (0..count)
                .map(|j| (0..d).map(|l| g.get(i + l, j + l)).sum())
                .collect()
        })
        .collect()
}

/// Higher-order DMD: DMD on columns that stack `d` consecutive observables.
///
/// The stacked matrix is never formed. Its Gram matrix follows from the
/// Gram matrix of the plain snapshots by summing along diagonals, and the
/// factorization is carried out on that (method of snapshots). The returned
/// model works in the plain observable space: its modes are the leading
/// block of the stacked modes, so `predict_discrete(k)` is the observable at
/// step `k`.
pub fn fit_hodmd<V: AsRef<[C64]>>(
    states: &[V],
    cfg: &HodmdConfig,
    dt: f64,
    t0: f64,
    map: ObservableMap,
) -> Result<DmdModel> {
    cfg.validate(states.len())?;
    if !(dt > 0.0) {
        return Err(Error::contract(format!("dt must be positive, got {dt}")));
    }
    let observed = states
        .iter()
        .map(|u| map.apply(u.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    let y = DenseMatrix::from_columns(&observed)?;
    let gram = &y.adjoint() * &y;

    let (_, columns) = delay_matrix_shape(y.rows(), y.cols(), cfg.d);
    let pairs = columns - 1;
    let s = delay_gram(&gram, cfg.d, columns);
    let k11 = DenseMatrix::from_fn(pairs, pairs, |i, j| s[i][j])?;
    let k12 = DenseMatrix::from_fn(pairs, pairs, |i, j| s[i][j + 1])?;

    // K11 is Hermitian positive semidefinite, so its SVD is its eigendecomposition
    let eig = thin_svd(&k11, pairs)?;
    let sigma: Vec<f64> = eig.sigma.iter().map(|&l| l.max(0.0).sqrt()).collect();
    let requested = select_rank(&sigma, cfg.rank)?;
    let numerical = eig.sigma.iter().take_while(|&&l| l > GRAM_RCOND * eig.sigma[0]).count();
    if numerical == 0 {
        return Err(Error::Degenerate("delay-stacked snapshots are numerically zero".into()));
    }
    let rank = requested.min(numerical);
    let rank_reduced = rank < requested;
    if rank_reduced {
        log::warn!("requested rank {requested} reduced to numerical rank {rank}");
    }

    let v = eig.u.leading_columns(rank);
    let inv_sigma: Vec<C64> = sigma[..rank].iter().map(|&x| C64::new(1.0 / x, 0.0)).collect();
    // V Sigma^-1 maps stacked columns to the orthonormal basis U = X1 V Sigma^-1
    let v_scaled = v.scale_columns(&inv_sigma);
    let reduced = &(&v_scaled.adjoint() * &k12) * &v_scaled;
    let (eigenvalues, w) = eig_dense(&reduced)?;

    let coeff_map = &v_scaled * &w;
    let leading = DenseMatrix::from_columns(&observed[..pairs])?;
    let modes = &leading * &coeff_map;

    // b = W^-1 U^H z0 and U^H X1 = Sigma^-1 V^H K11
    let proj_first = DenseMatrix::from_fn(pairs, 1, |i, _| s[i][0])?;
    let uh_z0 = &v_scaled.adjoint() * &proj_first;
    let amplitudes = lstsq_pinv(&w, &uh_z0, DEFAULT_RCOND)?.column(0);

    // one-step error of the leading block over the training pairs
    let uh_x1 = &v_scaled.adjoint() * &k11;
    let coeffs = lstsq_pinv(&w, &uh_x1, DEFAULT_RCOND)?;
    let advanced = &modes.scale_columns(&eigenvalues) * &coeffs;
    let target = DenseMatrix::from_columns(&observed[1..=pairs])?;
    let denom = target.frobenius_norm();
    let residual = advanced.sub(&target).frobenius_norm();
    let reconstruction_re = if denom > 0.0 { residual / denom } else { residual };

    let omega = eigenvalues
        .iter()
        .map(|&l| if l == C64::new(0.0, 0.0) { C64::new(f64::NEG_INFINITY, 0.0) } else { l.ln() / dt })
        .collect();
    let model = DmdModel {
        modes,
        eigenvalues,
        amplitudes,
        omega,
        dt,
        t0,
        rank,
        requested_rank: requested,
        rank_reduced,
        observable: map,
        reconstruction_re,
        singular_values: sigma,
    };
    if !(model.modes.is_finite() && all_finite(&model.eigenvalues) && all_finite(&model.amplitudes)) {
        return Err(Error::NonFinite("fitted HODMD model".into()));
    }
    Ok(model)
}
