//! Full-order models: semi-discrete benchmark PDEs integrated with explicit
//! forward Euler.
//!
//! The integrator and the residual estimator share the same discretization,
//! so the residual of any consecutive pair of full-order states vanishes up to
//! rounding.

mod allen_cahn;
mod burgers;
mod maxwell;
mod nlse;
pub mod stencil;

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{all_finite, C64};

pub use burgers::{burgers_jacobian_apply, burgers_remainder_operator};

/// A state vector in complex storage; its layout is given by the owning problem.
pub type State = Vec<C64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Equation {
    Burgers,
    AllenCahn,
    Nlse,
    MaxwellTm,
}

impl Equation {
    pub fn name(&self) -> &'static str {
        match self {
            Equation::Burgers => "burgers",
            Equation::AllenCahn => "allen_cahn",
            Equation::Nlse => "nlse",
            Equation::MaxwellTm => "maxwell_tm",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "burgers" => Ok(Equation::Burgers),
            "allen_cahn" => Ok(Equation::AllenCahn),
            "nlse" => Ok(Equation::Nlse),
            "maxwell_tm" => Ok(Equation::MaxwellTm),
            other => Err(Error::config(format!("unknown equation: {other}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryKind {
    DirichletZero,
    NeumannZero,
    /// Tangential electric field held at zero on the square's edges.
    PerfectConductor,
}

/// Physical parameters per equation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Physics {
    Burgers { viscosity: f64 },
    AllenCahn { diffusion: f64 },
    Nlse { theta: f64 },
    MaxwellTm { omega: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Grid {
    /// Uniform nodes on `[lower, upper]`, `intervals + 1` of them.
    Line { lower: f64, upper: f64, intervals: usize },
    /// `nodes x nodes` collocated grid on `[lower, upper]^2`.
    Square { lower: f64, upper: f64, nodes: usize },
}

impl Grid {
    pub fn spacing(&self) -> f64 {
        match *self {
            Grid::Line { lower, upper, intervals } => (upper - lower) / intervals as f64,
            Grid::Square { lower, upper, nodes } => (upper - lower) / (nodes - 1) as f64,
        }
    }

    pub fn node_count(&self) -> usize {
        match *self {
            Grid::Line { intervals, .. } => intervals + 1,
            Grid::Square { nodes, .. } => nodes * nodes,
        }
    }

    /// Node coordinates of a line grid.
    pub fn line_nodes(&self) -> Vec<f64> {
        match *self {
            Grid::Line { lower, intervals, .. } => {
                let h = self.spacing();
                (0..=intervals).map(|j| lower + j as f64 * h).collect()
            }
            Grid::Square { .. } => panic!("line_nodes called on a 2-D grid"),
        }
    }
}

/// A named index range inside the flat state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    pub name: &'static str,
    pub range: Range<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateLayout {
    pub components: Vec<Component>,
}

impl StateLayout {
    pub fn len(&self) -> usize {
        self.components.last().map_or(0, |c| c.range.end)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn component(&self, name: &str) -> Option<Range<usize>> {
        self.components.iter().find(|c| c.name == name).map(|c| c.range.clone())
    }
}

/// A semi-discrete PDE with its time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct FomProblem {
    pub equation: Equation,
    pub physics: Physics,
    pub grid: Grid,
    pub boundary: BoundaryKind,
    pub t0: f64,
    pub t_end: f64,
    pub n_steps: usize,
}

impl FomProblem {
    /// Viscous Burgers on `[-1, 1]`, `mu = 0.01`, `T = 1`.
    pub fn burgers(intervals: usize, n_steps: usize) -> Self {
        FomProblem {
            equation: Equation::Burgers,
            physics: Physics::Burgers { viscosity: 0.01 },
            grid: Grid::Line { lower: -1.0, upper: 1.0, intervals },
            boundary: BoundaryKind::DirichletZero,
            t0: 0.0,
            t_end: 1.0,
            n_steps,
        }
    }

    /// Allen–Cahn on `[-1, 1]`, `alpha = 1e-4`, `T = 2`.
    pub fn allen_cahn(intervals: usize, n_steps: usize) -> Self {
        FomProblem {
            equation: Equation::AllenCahn,
            physics: Physics::AllenCahn { diffusion: 1e-4 },
            grid: Grid::Line { lower: -1.0, upper: 1.0, intervals },
            boundary: BoundaryKind::NeumannZero,
            t0: 0.0,
            t_end: 2.0,
            n_steps,
        }
    }

    /// Cubic Schrödinger on `[-15, 15]`, `theta = 0.5`, `T = pi`.
    pub fn nlse(intervals: usize, n_steps: usize) -> Self {
        FomProblem {
            equation: Equation::Nlse,
            physics: Physics::Nlse { theta: 0.5 },
            grid: Grid::Line { lower: -15.0, upper: 15.0, intervals },
            boundary: BoundaryKind::DirichletZero,
            t0: 0.0,
            t_end: std::f64::consts::PI,
            n_steps,
        }
    }

    /// Transverse-magnetic Maxwell system with polarization and magnetization
    /// currents on `[0, 1]^2`, `omega = 4 pi`, `T = 2`.
    pub fn maxwell_tm(nodes: usize, n_steps: usize) -> Self {
        FomProblem {
            equation: Equation::MaxwellTm,
            physics: Physics::MaxwellTm { omega: 4.0 * std::f64::consts::PI },
            grid: Grid::Square { lower: 0.0, upper: 1.0, nodes },
            boundary: BoundaryKind::PerfectConductor,
            t0: 0.0,
            t_end: 2.0,
            n_steps,
        }
    }

    /// The benchmark as configured in the reference experiments.
    pub fn benchmark(equation: Equation) -> Self {
        match equation {
            Equation::Burgers => Self::burgers(500, 2000),
            Equation::AllenCahn => Self::allen_cahn(200, 2000),
            Equation::Nlse => Self::nlse(100, 2000),
            Equation::MaxwellTm => Self::maxwell_tm(20, 2000),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let grid_ok = match self.grid {
            Grid::Line { intervals, lower, upper } => intervals >= 2 && upper > lower,
            Grid::Square { nodes, lower, upper } => nodes >= 3 && upper > lower,
        };
        if !grid_ok {
            return Err(Error::config("grid needs at least 3 nodes per direction"));
        }
        if self.n_steps == 0 || !(self.t_end > self.t0) {
            return Err(Error::config("time grid must have positive length and at least one step"));
        }
        let positive = match self.physics {
            Physics::Burgers { viscosity } => viscosity > 0.0,
            Physics::AllenCahn { diffusion } => diffusion > 0.0,
            Physics::Nlse { theta } => theta > 0.0,
            Physics::MaxwellTm { omega } => omega > 0.0,
        };
        if !positive {
            return Err(Error::config("physical parameters must be positive"));
        }
        Ok(())
    }

    pub fn dt(&self) -> f64 {
        (self.t_end - self.t0) / self.n_steps as f64
    }

    pub fn time(&self, step: usize) -> f64 {
        self.t0 + step as f64 * self.dt()
    }

    pub fn state_dim(&self) -> usize {
        self.layout().len()
    }

    pub fn layout(&self) -> StateLayout {
        let n = self.grid.node_count();
        match self.equation {
            Equation::Burgers | Equation::AllenCahn => StateLayout {
                components: vec![Component { name: "u", range: 0..n }],
            },
            Equation::Nlse => StateLayout {
                components: vec![Component { name: "psi", range: 0..n }],
            },
            Equation::MaxwellTm => {
                let names = ["hx", "hy", "ez", "jz", "kx", "ky"];
                StateLayout {
                    components: names
                        .iter()
                        .enumerate()
                        .map(|(k, &name)| Component { name, range: k * n..(k + 1) * n })
                        .collect(),
                }
            }
        }
    }

    /// Explicit-scheme stability number: `nu dt / dx^2` for the diffusive
    /// equations, `dt / dx` for the Maxwell system.
    pub fn stability_number(&self) -> f64 {
        let h = self.grid.spacing();
        let dt = self.dt();
        match self.physics {
            Physics::Burgers { viscosity } => viscosity * dt / (h * h),
            Physics::AllenCahn { diffusion } => diffusion * dt / (h * h),
            Physics::Nlse { theta } => theta * dt / (h * h),
            Physics::MaxwellTm { .. } => dt / h,
        }
    }

    /// Semi-discrete time derivative `f(u, t)`.
    pub fn rhs(&self, u: &[C64], t: f64) -> State {
        let mut out = vec![C64::new(0.0, 0.0); u.len()];
        self.rhs_into(u, t, &mut out);
        out
    }

    pub fn rhs_into(&self, u: &[C64], t: f64, out: &mut [C64]) {
        assert_eq!(u.len(), self.state_dim(), "state does not match layout");
        assert_eq!(out.len(), u.len());
        let h = self.grid.spacing();
        match self.physics {
            Physics::Burgers { viscosity } => burgers::rhs(u, h, viscosity, out),
            Physics::AllenCahn { diffusion } => allen_cahn::rhs(u, h, diffusion, out),
            Physics::Nlse { theta } => nlse::rhs(u, h, theta, out),
            Physics::MaxwellTm { omega } => {
                let Grid::Square { nodes, lower, .. } = self.grid else {
                    unreachable!("maxwell problems use a square grid")
                };
                maxwell::rhs(u, t, nodes, lower, h, omega, out)
            }
        }
    }

    pub fn initial_condition(&self) -> State {
        match self.physics {
            Physics::Burgers { .. } => burgers::initial_condition(&self.grid.line_nodes()),
            Physics::AllenCahn { .. } => allen_cahn::initial_condition(&self.grid.line_nodes()),
            Physics::Nlse { .. } => nlse::initial_condition(&self.grid.line_nodes()),
            Physics::MaxwellTm { omega } => {
                let Grid::Square { nodes, lower, .. } = self.grid else {
                    unreachable!("maxwell problems use a square grid")
                };
                maxwell::initial_condition(nodes, lower, self.grid.spacing(), omega)
            }
        }
    }

    /// One forward Euler step `u + dt f(u, t)`.
    pub fn step(&self, u: &[C64], t: f64) -> State {
        let dt = self.dt();
        let f = self.rhs(u, t);
        u.iter().zip(&f).map(|(a, b)| a + b * dt).collect()
    }

    /// Integrates `steps` forward Euler steps from `u0` at `t0`; returns
    /// `steps + 1` states including `u0`.
    pub fn integrate(&self, u0: &[C64], t0: f64, steps: usize) -> Result<Vec<State>> {
        if steps == 0 {
            return Err(Error::contract("integrate needs at least one step"));
        }
        if u0.len() != self.state_dim() {
            return Err(Error::contract("initial state does not match layout"));
        }
        let dt = self.dt();
        let mut states = Vec::with_capacity(steps + 1);
        states.push(u0.to_vec());
        for k in 0..steps {
            let t = t0 + k as f64 * dt;
            let next = self.step(&states[k], t);
            if !all_finite(&next) {
                return Err(Error::Integration { step: k + 1, last_good: k, stage: None });
            }
            states.push(next);
        }
        Ok(states)
    }

    /// Whether states of this problem are real. Complex storage is shared by
    /// all problems, so a real problem only ever holds zero imaginary parts.
    pub fn is_real_valued(&self) -> bool {
        self.equation != Equation::Nlse
    }

    /// Maps a model output into the problem's state space: imaginary parts
    /// are dropped for real-valued problems.
    pub fn project_state(&self, mut u: State) -> State {
        if self.is_real_valued() {
            u.iter_mut().for_each(|z| z.im = 0.0);
        }
        u
    }

    /// The full reference trajectory over `n_steps` from the initial condition.
    pub fn reference_trajectory(&self) -> Result<Vec<State>> {
        self.integrate(&self.initial_condition(), self.t0, self.n_steps)
    }

    /// Named quantities on which errors are reported. The first entry is the
    /// headline quantity.
    pub fn error_quantities(&self, u: &[C64]) -> Vec<(&'static str, Vec<C64>)> {
        match self.equation {
            Equation::Burgers | Equation::AllenCahn => vec![("u", u.to_vec())],
            Equation::Nlse => vec![(
                "density",
                position_density(u).into_iter().map(|r| C64::new(r, 0.0)).collect(),
            )],
            Equation::MaxwellTm => {
                let layout = self.layout();
                let slice = |names: &[&str]| -> Vec<C64> {
                    names
                        .iter()
                        .flat_map(|n| u[layout.component(n).expect("maxwell component")].to_vec())
                        .collect()
                };
                vec![
                    ("state", u.to_vec()),
                    ("magnetic_field", slice(&["hx", "hy"])),
                    ("electric_field", slice(&["ez"])),
                    ("polarization_current", slice(&["jz"])),
                ]
            }
        }
    }
}

/// `|psi|^2` componentwise.
pub fn position_density(psi: &[C64]) -> Vec<f64> {
    psi.iter().map(|z| z.norm_sqr()).collect()
}
