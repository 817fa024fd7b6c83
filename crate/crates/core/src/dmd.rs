//! Standard dynamic mode decomposition.
//!
//! A [`DmdModel`] is fit from a [`SnapshotPair`] by projecting the one-step
//! operator onto the leading left singular vectors of `Y1`, diagonalising the
//! reduced operator and lifting its eigenvectors back to modes `Phi = U W`.
//! Amplitudes are fit to the first snapshot only.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    self, eig_dense, lstsq_pinv, thin_svd, DenseMatrix, C64, DEFAULT_RCOND,
};

/// Which observable functions are applied to the state before fitting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObservableKind {
    Identity,
    /// `g(u) = [u; exp(u)]`, componentwise exponential.
    AugmentExp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ObservableMap {
    pub kind: ObservableKind,
    pub state_dim: usize,
}

impl ObservableMap {
    pub fn new(kind: ObservableKind, state_dim: usize) -> Self {
        ObservableMap { kind, state_dim }
    }

    pub fn identity(state_dim: usize) -> Self {
        Self::new(ObservableKind::Identity, state_dim)
    }

    pub fn augment_exp(state_dim: usize) -> Self {
        Self::new(ObservableKind::AugmentExp, state_dim)
    }

    pub fn observable_dim(&self) -> usize {
        match self.kind {
            ObservableKind::Identity => self.state_dim,
            ObservableKind::AugmentExp => 2 * self.state_dim,
        }
    }

    pub fn apply(&self, u: &[C64]) -> Result<Vec<C64>> {
        if u.len() != self.state_dim {
            return Err(Error::contract(format!(
                "state has length {}, observable expects {}",
                u.len(),
                self.state_dim
            )));
        }
        Ok(match self.kind {
            ObservableKind::Identity => u.to_vec(),
            ObservableKind::AugmentExp => u.iter().copied().chain(u.iter().map(|z| z.exp())).collect(),
        })
    }

    /// Maps an observable vector back to state space.
    ///
    /// For the exponential augmentation the first block is returned; it is the
    /// exact least-squares preimage whenever `y` is consistent.
    pub fn invert(&self, y: &[C64]) -> Result<Vec<C64>> {
        if y.len() != self.observable_dim() {
            return Err(Error::contract(format!(
                "observable has length {}, expected {}",
                y.len(),
                self.observable_dim()
            )));
        }
        Ok(y[..self.state_dim].to_vec())
    }
}

/// Shifted data matrices `Y1 = [y0 .. y_{M-1}]`, `Y2 = [y1 .. y_M]`.
#[derive(Clone, Debug)]
pub struct SnapshotPair {
    pub y1: DenseMatrix,
    pub y2: DenseMatrix,
    pub dt: f64,
    pub t0: f64,
}

impl SnapshotPair {
    /// Number of snapshot pairs `M`.
    pub fn len(&self) -> usize {
        self.y1.cols()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first_snapshot(&self) -> Vec<C64> {
        self.y1.column(0)
    }
}

/// Builds the one-step-shifted snapshot matrices from `y0 .. y_M`.
pub fn build_snapshot_pair<V: AsRef<[C64]>>(states: &[V], dt: f64, t0: f64) -> Result<SnapshotPair> {
    if states.len() < 3 {
        return Err(Error::contract(format!(
            "need at least 3 snapshots, got {}",
            states.len()
        )));
    }
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::contract(format!("dt must be positive, got {dt}")));
    }
    let m = states.len() - 1;
    let y1 = DenseMatrix::from_columns(&states[..m])?;
    let y2 = DenseMatrix::from_columns(&states[1..])?;
    Ok(SnapshotPair { y1, y2, dt, t0 })
}

/// Like [`build_snapshot_pair`] but takes explicit timestamps and rejects
/// non-uniform sampling.
pub fn build_snapshot_pair_timed<V: AsRef<[C64]>>(states: &[V], times: &[f64]) -> Result<SnapshotPair> {
    if times.len() != states.len() {
        return Err(Error::contract("one timestamp per snapshot required"));
    }
    if times.len() < 3 {
        return Err(Error::contract("need at least 3 snapshots"));
    }
    let dt = times[1] - times[0];
    for w in times.windows(2) {
        let step = w[1] - w[0];
        if (step - dt).abs() > 1e-9 * dt.abs().max(1.0) {
            return Err(Error::contract(format!(
                "non-uniform sampling: step {step} differs from {dt}"
            )));
        }
    }
    build_snapshot_pair(states, dt, times[0])
}

/// How the truncation rank is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankSpec {
    Fixed(usize),
    /// Smallest rank keeping a `1 - eta` fraction of the squared singular
    /// value energy.
    Energy(f64),
}

impl RankSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            RankSpec::Fixed(0) => Err(Error::contract("fixed rank must be at least 1")),
            RankSpec::Energy(eta) if !(eta > 0.0 && eta < 1.0) => {
                Err(Error::contract(format!("energy threshold must lie in (0, 1), got {eta}")))
            }
            _ => Ok(()),
        }
    }
}

pub fn select_rank(sigma: &[f64], spec: RankSpec) -> Result<usize> {
    spec.validate()?;
    if sigma.is_empty() {
        return Err(Error::contract("empty singular value sequence"));
    }
    if sigma.iter().any(|&s| s < 0.0 || !s.is_finite()) {
        return Err(Error::contract("singular values must be finite and nonnegative"));
    }
    if sigma.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::contract("singular values must be nonincreasing"));
    }
    match spec {
        RankSpec::Fixed(r) => Ok(r.min(sigma.len())),
        RankSpec::Energy(eta) => {
            let energy: Vec<f64> = sigma.iter().map(|s| s * s).collect();
            let total: f64 = energy.iter().sum();
            if total == 0.0 {
                return Err(Error::Degenerate("all singular values are zero".into()));
            }
            let l = sigma.iter().filter(|&&s| s > 0.0).count();
            let mut acc = 0.0;
            for (j, e) in energy.iter().take(l).enumerate() {
                acc += e;
                if acc / total >= 1.0 - eta {
                    return Ok(j + 1);
                }
            }
            Ok(l)
        }
    }
}

/// A fitted rank-`r` DMD model. Immutable after construction.
#[derive(Clone, Debug)]
pub struct DmdModel {
    /// Modes, `observable_dim x rank`.
    pub modes: DenseMatrix,
    pub eigenvalues: Vec<C64>,
    pub amplitudes: Vec<C64>,
    /// `ln(lambda) / dt` on the principal branch; `-inf` real part for a zero eigenvalue.
    pub omega: Vec<C64>,
    pub dt: f64,
    pub t0: f64,
    pub rank: usize,
    pub requested_rank: usize,
    /// Set when the snapshot matrix could not support the requested rank.
    pub rank_reduced: bool,
    pub observable: ObservableMap,
    /// `||Y2 - Phi diag(Lambda) Phi^+ Y1||_F / ||Y2||_F` on the training pairs.
    pub reconstruction_re: f64,
    pub singular_values: Vec<f64>,
}

/// Fits a DMD model to snapshot pairs that are already in observable space.
pub fn fit_dmd(pair: &SnapshotPair, spec: RankSpec, map: ObservableMap) -> Result<DmdModel> {
    if pair.y1.rows() != map.observable_dim() {
        return Err(Error::contract(format!(
            "snapshot dimension {} does not match observable dimension {}",
            pair.y1.rows(),
            map.observable_dim()
        )));
    }
    if pair.y1.cols() != pair.y2.cols() || pair.y1.rows() != pair.y2.rows() {
        return Err(Error::contract("Y1 and Y2 differ in shape"));
    }
    if pair.y1.cols() < 2 {
        return Err(Error::contract("need at least two snapshot pairs"));
    }
    let kmax = pair.y1.rows().min(pair.y1.cols());
    let svd = thin_svd(&pair.y1, kmax)?;
    let requested = select_rank(&svd.sigma, spec)?;
    let cutoff = DEFAULT_RCOND * svd.sigma[0];
    let numerical = svd.sigma.iter().take_while(|&&s| s > cutoff).count();
    if numerical == 0 {
        return Err(Error::Degenerate("snapshot matrix is numerically zero".into()));
    }
    let rank = requested.min(numerical);
    let rank_reduced = rank < requested;
    if rank_reduced {
        log::warn!("requested rank {requested} reduced to numerical rank {rank}");
    }

    let u = svd.u.leading_columns(rank);
    let v = svd.v.leading_columns(rank);
    let inv_sigma: Vec<C64> = svd.sigma[..rank].iter().map(|&s| C64::new(1.0 / s, 0.0)).collect();

    // A~ = U^H Y2 V Sigma^-1
    let uh_y2 = &u.adjoint() * &pair.y2;
    let reduced = (&uh_y2 * &v).scale_columns(&inv_sigma);
    let (eigenvalues, w) = eig_dense(&reduced)?;
    let modes = &u * &w;

    let y0 = DenseMatrix::from_columns(&[pair.first_snapshot()])?;
    let amplitudes = lstsq_pinv(&modes, &y0, DEFAULT_RCOND)?.column(0);

    let omega = eigenvalues.iter().map(|&l| continuous_frequency(l, pair.dt)).collect();

    // training reconstruction error of the fitted one-step map
    let coeffs = lstsq_pinv(&modes, &pair.y1, DEFAULT_RCOND)?;
    let advanced = modes.scale_columns(&eigenvalues);
    let residual = (&advanced * &coeffs).sub(&pair.y2).frobenius_norm();
    let denom = pair.y2.frobenius_norm();
    let reconstruction_re = if denom > 0.0 { residual / denom } else { residual };

    let model = DmdModel {
        modes,
        eigenvalues,
        amplitudes,
        omega,
        dt: pair.dt,
        t0: pair.t0,
        rank,
        requested_rank: requested,
        rank_reduced,
        observable: map,
        reconstruction_re,
        singular_values: svd.sigma,
    };
    if !(model.modes.is_finite()
        && numerics::all_finite(&model.eigenvalues)
        && numerics::all_finite(&model.amplitudes))
    {
        return Err(Error::NonFinite("fitted DMD model".into()));
    }
    Ok(model)
}

/// Fits a model directly from state snapshots `u0 .. u_M`, applying the observable map.
pub fn fit_dmd_states<V: AsRef<[C64]>>(
    states: &[V],
    dt: f64,
    t0: f64,
    spec: RankSpec,
    map: ObservableMap,
) -> Result<DmdModel> {
    let observed = states
        .iter()
        .map(|u| map.apply(u.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    let pair = build_snapshot_pair(&observed, dt, t0)?;
    fit_dmd(&pair, spec, map)
}

fn continuous_frequency(lambda: C64, dt: f64) -> C64 {
    if lambda == C64::new(0.0, 0.0) {
        C64::new(f64::NEG_INFINITY, 0.0)
    } else {
        lambda.ln() / dt
    }
}

impl DmdModel {
    /// `Phi diag(lambda^k) b` in observable space. Entries can overflow to
    /// infinity for `|lambda| > 1` and large `k`; callers check finiteness.
    pub fn predict_discrete(&self, k: usize) -> Vec<C64> {
        let coeffs: Vec<C64> = self
            .eigenvalues
            .iter()
            .zip(&self.amplitudes)
            .map(|(&l, &b)| power(l, k) * b)
            .collect();
        self.modes.mul_vec(&coeffs)
    }

    /// `Phi diag(exp(omega (t - t0))) b` in observable space.
    pub fn predict_continuous(&self, t: f64) -> Result<Vec<C64>> {
        if t < self.t0 {
            return Err(Error::contract(format!(
                "prediction time {t} precedes model start {}",
                self.t0
            )));
        }
        let tau = t - self.t0;
        let coeffs: Vec<C64> = self
            .omega
            .iter()
            .zip(&self.amplitudes)
            .map(|(&w, &b)| {
                if w.re == f64::NEG_INFINITY {
                    if tau == 0.0 { b } else { C64::new(0.0, 0.0) }
                } else {
                    (w * tau).exp() * b
                }
            })
            .collect();
        Ok(self.modes.mul_vec(&coeffs))
    }

    /// Discrete prediction mapped back to state space.
    pub fn predict_state(&self, k: usize) -> Vec<C64> {
        let y = self.predict_discrete(k);
        self.observable.invert(&y).expect("model output has observable dimension")
    }

    pub fn diagnostics(&self) -> Result<ModeDiagnostics> {
        mode_diagnostics(self)
    }
}

/// `z^k` by repeated squaring; `0^0 = 1`.
fn power(z: C64, k: usize) -> C64 {
    let mut result = C64::new(1.0, 0.0);
    let mut base = z;
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            result *= base;
        }
        base *= base;
        e >>= 1;
    }
    result
}

/// Norm factors appearing in the error bounds of the localized method.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModeDiagnostics {
    pub norm_phi: f64,
    pub norm_phi_pinv: f64,
    pub spectral_radius: f64,
}

pub fn mode_diagnostics(model: &DmdModel) -> Result<ModeDiagnostics> {
    let sigma = numerics::singular_values(&model.modes)?;
    let norm_phi = sigma.first().copied().unwrap_or(0.0);
    let cutoff = DEFAULT_RCOND * norm_phi;
    let smallest = sigma.iter().rev().copied().find(|&s| s > cutoff).unwrap_or(0.0);
    let norm_phi_pinv = if smallest > 0.0 { 1.0 / smallest } else { f64::INFINITY };
    let spectral_radius = model.eigenvalues.iter().map(|l| l.norm()).fold(0.0, f64::max);
    Ok(ModeDiagnostics {
        norm_phi,
        norm_phi_pinv,
        spectral_radius,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn observable_examples() {
        let id = ObservableMap::identity(2);
        assert_eq!(id.apply(&[c(1.0), c(2.0)]).unwrap(), vec![c(1.0), c(2.0)]);
        assert_eq!(id.invert(&[c(3.0), c(4.0)]).unwrap(), vec![c(3.0), c(4.0)]);

        let ex = ObservableMap::augment_exp(1);
        assert_eq!(ex.apply(&[c(0.0)]).unwrap(), vec![c(0.0), c(1.0)]);

        let ex2 = ObservableMap::augment_exp(2);
        let y = ex2.apply(&[c(1.0), c(-1.0)]).unwrap();
        let e = std::f64::consts::E;
        let expect = [c(1.0), c(-1.0), c(e), c(1.0 / e)];
        for (a, b) in y.iter().zip(expect) {
            assert!((a - b).norm() < 1e-15);
        }
        assert_eq!(ex2.invert(&y).unwrap(), vec![c(1.0), c(-1.0)]);
        assert!(ex2.apply(&[c(1.0)]).is_err());
        assert!(ex2.invert(&[c(1.0), c(2.0)]).is_err());
    }

    #[test]
    fn snapshot_pair_shift() {
        let a = vec![c(1.0)];
        let b = vec![c(2.0)];
        let cc = vec![c(3.0)];
        let pair = build_snapshot_pair(&[a.clone(), b.clone(), cc.clone()], 0.1, 0.0).unwrap();
        assert_eq!(pair.y1.column(0), a);
        assert_eq!(pair.y1.column(1), b);
        assert_eq!(pair.y2.column(0), b);
        assert_eq!(pair.y2.column(1), cc);
        assert!(build_snapshot_pair(&[a.clone(), b.clone()], 0.1, 0.0).is_err());
        assert!(build_snapshot_pair_timed(&[a.clone(), b.clone(), cc.clone()], &[0.0, 0.1, 0.3]).is_err());
        assert!(build_snapshot_pair_timed(&[a, b, cc], &[0.0, 0.1, 0.2]).is_ok());
    }

    #[test]
    fn rank_selection_examples() {
        // cumulative energy 4/6 < 0.7 <= 5/6
        assert_eq!(select_rank(&[2.0, 1.0, 1.0], RankSpec::Energy(0.3)).unwrap(), 2);
        let many: Vec<f64> = (0..300).map(|i| 300.0 - i as f64).collect();
        assert_eq!(select_rank(&many, RankSpec::Fixed(20)).unwrap(), 20);
        assert_eq!(select_rank(&[3.0, 2.0, 1.0], RankSpec::Energy(1e-15)).unwrap(), 3);
        assert!(matches!(
            select_rank(&[0.0, 0.0], RankSpec::Energy(0.1)),
            Err(Error::Degenerate(_))
        ));
        assert!(select_rank(&[1.0, 2.0], RankSpec::Fixed(1)).is_err());
        assert!(RankSpec::Energy(1.0).validate().is_err());
    }

    #[test]
    fn geometric_sequence_recovers_eigenvalue() {
        let states: Vec<Vec<C64>> = (0..10).map(|k| vec![c(0.9f64.powi(k)); 2]).collect();
        let model = fit_dmd_states(&states, 0.1, 0.0, RankSpec::Fixed(1), ObservableMap::identity(2)).unwrap();
        assert_eq!(model.rank, 1);
        assert!((model.eigenvalues[0] - c(0.9)).norm() < 1e-10);
        let m = model.modes.column(0);
        assert!((m[0] - m[1]).norm() < 1e-12);
    }

    #[test]
    fn exact_operator_recovery() {
        let pair = SnapshotPair {
            y1: DenseMatrix::identity(2),
            y2: DenseMatrix::from_real_rows(&[&[0.5, 0.0], &[0.0, 0.25]]).unwrap(),
            dt: 1.0,
            t0: 0.0,
        };
        let model = fit_dmd(&pair, RankSpec::Fixed(2), ObservableMap::identity(2)).unwrap();
        let mut re: Vec<f64> = model.eigenvalues.iter().map(|l| l.re).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((re[0] - 0.25).abs() < 1e-12 && (re[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rank_deficient_snapshots_reduce_rank() {
        let states: Vec<Vec<C64>> = (0..8).map(|k| vec![c(0.5f64.powi(k)), c(0.0), c(0.0)]).collect();
        let model = fit_dmd_states(&states, 1.0, 0.0, RankSpec::Fixed(3), ObservableMap::identity(3)).unwrap();
        assert!(model.rank_reduced);
        assert_eq!(model.rank, 1);
    }

    #[test]
    fn continuous_prediction_decays_exponentially() {
        let dt = 0.05;
        let states: Vec<Vec<C64>> = (0..6).map(|k| vec![c((-(k as f64) * dt).exp())]).collect();
        let model = fit_dmd_states(&states, dt, 0.0, RankSpec::Fixed(1), ObservableMap::identity(1)).unwrap();
        let y0 = model.predict_continuous(0.0).unwrap();
        let phib = model.modes.mul_vec(&model.amplitudes);
        assert_eq!(y0, phib);
        let y = model.predict_continuous(0.37).unwrap();
        assert!((y[0].re - (-0.37f64).exp()).abs() < 1e-10);
        assert!(model.predict_continuous(-1.0).is_err());
    }

    #[test]
    fn zero_eigenvalue_vanishes_after_start() {
        let model = DmdModel {
            modes: DenseMatrix::identity(1),
            eigenvalues: vec![c(0.0)],
            amplitudes: vec![c(2.0)],
            omega: vec![continuous_frequency(c(0.0), 1.0)],
            dt: 1.0,
            t0: 0.0,
            rank: 1,
            requested_rank: 1,
            rank_reduced: false,
            observable: ObservableMap::identity(1),
            reconstruction_re: 0.0,
            singular_values: vec![1.0],
        };
        assert_eq!(model.predict_continuous(0.0).unwrap(), vec![c(2.0)]);
        assert_eq!(model.predict_continuous(0.5).unwrap(), vec![c(0.0)]);
        assert_eq!(model.predict_discrete(0), vec![c(2.0)]);
        assert_eq!(model.predict_discrete(3), vec![c(0.0)]);
    }

    #[test]
    fn unit_eigenvalue_is_constant() {
        let states: Vec<Vec<C64>> = (0..5).map(|_| vec![c(1.0), c(2.0)]).collect();
        let model = fit_dmd_states(&states, 1.0, 0.0, RankSpec::Fixed(1), ObservableMap::identity(2)).unwrap();
        let a = model.predict_discrete(1);
        let b = model.predict_discrete(40);
        assert!(crate::harness::relative_error(&a, &b).value < 1e-12);
    }

    #[test]
    fn diagnostics_examples() {
        let model = DmdModel {
            modes: DenseMatrix::identity(2),
            eigenvalues: vec![c(0.9), c(0.5)],
            amplitudes: vec![c(1.0), c(1.0)],
            omega: vec![c(0.9).ln(), c(0.5).ln()],
            dt: 1.0,
            t0: 0.0,
            rank: 2,
            requested_rank: 2,
            rank_reduced: false,
            observable: ObservableMap::identity(2),
            reconstruction_re: 0.0,
            singular_values: vec![1.0, 1.0],
        };
        let d = mode_diagnostics(&model).unwrap();
        assert!((d.norm_phi - 1.0).abs() < 1e-14);
        assert!((d.norm_phi_pinv - 1.0).abs() < 1e-14);
        assert!((d.spectral_radius - 0.9).abs() < 1e-15);
    }

    #[test]
    fn omega_matches_eigenvalues() {
        let states: Vec<Vec<C64>> = (0..12)
            .map(|k| {
                let t = k as f64 * 0.1;
                vec![c(t.cos()), c(t.sin()), c((-t).exp())]
            })
            .collect();
        let model = fit_dmd_states(&states, 0.1, 0.0, RankSpec::Fixed(3), ObservableMap::identity(3)).unwrap();
        for (w, l) in model.omega.iter().zip(&model.eigenvalues) {
            assert!(((w * model.dt).exp() - l).norm() < 1e-12);
        }
    }
}
