use serde::Serialize;

use crate::error::{Error, Result};
use crate::fom::{FomProblem, State};
use crate::numerics::{norm2, C64};

/// A relative error value. `zero_reference` is set when the reference norm
/// vanished and the absolute error was reported instead.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RelativeError {
    pub value: f64,
    pub zero_reference: bool,
}

/// `||est - exact|| / ||exact||`, falling back to the absolute error (and
/// flagging it) when the reference is zero.
pub fn relative_error(est: &[C64], exact: &[C64]) -> RelativeError {
    let diff: f64 = est.iter().zip(exact).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
    let scale = norm2(exact);
    if scale == 0.0 {
        RelativeError { value: diff, zero_reference: true }
    } else {
        RelativeError { value: diff / scale, zero_reference: false }
    }
}

/// Mean of a sequence; zero for an empty one.
pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        0.0
    } else {
        values.iter().sum::<f64>() / values.len() as f64
    }
}

/// Per-step relative errors of one reported quantity.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantityErrors {
    pub name: &'static str,
    /// Errors at steps `1..=N_t`.
    pub per_step: Vec<RelativeError>,
    pub mre: f64,
}

/// Errors of every reported quantity of a problem, headline first.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorReport {
    pub quantities: Vec<QuantityErrors>,
}

impl ErrorReport {
    pub fn headline(&self) -> &QuantityErrors {
        &self.quantities[0]
    }

    pub fn quantity(&self, name: &str) -> Option<&QuantityErrors> {
        self.quantities.iter().find(|q| q.name == name)
    }
}

/// Compares an estimated trajectory with the reference, step by step, on
/// every quantity the problem reports.
pub fn error_report(problem: &FomProblem, estimate: &[State], reference: &[State]) -> Result<ErrorReport> {
    if estimate.len() != reference.len() || estimate.len() < 2 {
        return Err(Error::contract(format!(
            "estimate has {} states, reference {}",
            estimate.len(),
            reference.len()
        )));
    }
    let mut quantities: Vec<QuantityErrors> = Vec::new();
    for k in 1..estimate.len() {
        let est = problem.error_quantities(&estimate[k]);
        let exact = problem.error_quantities(&reference[k]);
        if quantities.is_empty() {
            quantities = est
                .iter()
                .map(|(name, _)| QuantityErrors { name, per_step: Vec::with_capacity(estimate.len() - 1), mre: 0.0 })
                .collect();
        }
        for (q, ((_, e), (_, x))) in quantities.iter_mut().zip(est.iter().zip(&exact)) {
            q.per_step.push(relative_error(e, x));
        }
    }
    for q in &mut quantities {
        let values: Vec<f64> = q.per_step.iter().map(|r| r.value).collect();
        q.mre = mean(&values);
    }
    Ok(ErrorReport { quantities })
}
