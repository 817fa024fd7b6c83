use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{all_finite, C64};

/// Threshold and check stride for the adaptive method.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualConfig {
    /// Stage is terminated once the residual reaches this value. `+inf`
    /// never splits.
    pub epsilon: f64,
    /// Prediction window length; the residual is checked once per window.
    pub window: usize,
}

impl ResidualConfig {
    pub fn new(epsilon: f64, window: usize) -> Result<Self> {
        let cfg = ResidualConfig { epsilon, window };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) {
            return Err(Error::contract(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if self.window == 0 {
            return Err(Error::contract("window must be at least 1"));
        }
        Ok(())
    }
}

/// `|| (u_next - u_k) / dt - f_k ||_F`, the defect of a state pair in the
/// explicit Euler discretization.
pub fn residual_estimator(u_k: &[C64], u_next: &[C64], f_k: &[C64], dt: f64) -> Result<f64> {
    if u_k.len() != u_next.len() || u_k.len() != f_k.len() {
        return Err(Error::contract("residual inputs differ in length"));
    }
    if !(dt > 0.0) {
        return Err(Error::contract(format!("dt must be positive, got {dt}")));
    }
    if !(all_finite(u_k) && all_finite(u_next) && all_finite(f_k)) {
        return Err(Error::NonFinite("residual estimator input".into()));
    }
    let sum: f64 = u_k
        .iter()
        .zip(u_next)
        .zip(f_k)
        .map(|((a, b), f)| ((b - a) / dt - f).norm_sqr())
        .sum();
    Ok(sum.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn exact_euler_step_has_zero_residual() {
        let u = vec![c(0.25), c(-0.5), c(0.125)];
        let f = vec![c(1.0), c(2.0), c(-4.0)];
        let dt = 0.0625;
        let next: Vec<C64> = u.iter().zip(&f).map(|(a, b)| a + b * dt).collect();
        assert_eq!(residual_estimator(&u, &next, &f, dt).unwrap(), 0.0);
    }

    #[test]
    fn perturbation_scales_with_inverse_dt() {
        let u = vec![c(1.0), c(2.0)];
        let f = vec![c(0.5), c(-1.0)];
        let dt = 1e-3;
        // ||delta|| = 1e-3
        let delta = [c(6e-4), c(8e-4)];
        let next: Vec<C64> = (0..2).map(|j| u[j] + f[j] * dt + delta[j]).collect();
        let r = residual_estimator(&u, &next, &f, dt).unwrap();
        assert!((r - 1.0).abs() < 1e-9);
    }

    #[test]
    fn errors() {
        let u = vec![c(1.0)];
        assert!(matches!(residual_estimator(&u, &[c(1.0), c(2.0)], &u, 0.1), Err(Error::Contract(_))));
        assert!(matches!(residual_estimator(&u, &u, &u, 0.0), Err(Error::Contract(_))));
        assert!(matches!(
            residual_estimator(&u, &[c(f64::NAN)], &u, 0.1),
            Err(Error::NonFinite(_))
        ));
        assert!(ResidualConfig::new(0.0, 5).is_err());
        assert!(ResidualConfig::new(1.0, 0).is_err());
        assert!(ResidualConfig::new(f64::INFINITY, 1).is_ok());
    }
}
