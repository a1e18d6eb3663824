//! State trajectories used as synthesis inputs.
//!
//! A trajectory is either analytic (state and, optionally, exact derivative
//! at any time) or a set of samples. Analytic trajectories are turned into
//! [`SampledPath`]s on a uniform grid; when no exact derivative is known the
//! samples are differentiated numerically.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{differentiate_path, SampledPath};
use crate::linalg::{c, cvec, CVector};
use crate::propagate::uniform_grid;

pub trait Trajectory: Send + Sync {
    fn dim(&self) -> usize;
    fn state(&self, t: f64) -> CVector;
    fn derivative(&self, _t: f64) -> Option<CVector> {
        None
    }
}

/// `(cos t, sin t)`: a great circle through both poles of the Bloch sphere.
#[derive(Debug, Clone, Copy, Default)]
pub struct GreatCircle;

impl Trajectory for GreatCircle {
    fn dim(&self) -> usize {
        2
    }

    fn state(&self, t: f64) -> CVector {
        cvec(&[c(t.cos(), 0.0), c(t.sin(), 0.0)])
    }

    fn derivative(&self, t: f64) -> Option<CVector> {
        Some(cvec(&[c(-t.sin(), 0.0), c(t.cos(), 0.0)]))
    }
}

type StateFn = Arc<dyn Fn(f64) -> CVector + Send + Sync>;

/// A trajectory given by closures.
#[derive(Clone)]
pub struct FnTrajectory {
    dim: usize,
    state: StateFn,
    derivative: Option<StateFn>,
}

impl FnTrajectory {
    pub fn new<F>(dim: usize, state: F) -> Self
    where
        F: Fn(f64) -> CVector + Send + Sync + 'static,
    {
        Self { dim, state: Arc::new(state), derivative: None }
    }

    pub fn with_derivative<F>(mut self, derivative: F) -> Self
    where
        F: Fn(f64) -> CVector + Send + Sync + 'static,
    {
        self.derivative = Some(Arc::new(derivative));
        self
    }
}

impl Trajectory for FnTrajectory {
    fn dim(&self) -> usize {
        self.dim
    }

    fn state(&self, t: f64) -> CVector {
        (self.state)(t)
    }

    fn derivative(&self, t: f64) -> Option<CVector> {
        self.derivative.as_ref().map(|d| d(t))
    }
}

/// Look up a named trajectory.
pub fn preset(name: &str) -> Result<Box<dyn Trajectory>> {
    match name {
        "greatcircle" => Ok(Box::new(GreatCircle)),
        other => Err(Error::InvalidInput(format!("unknown trajectory preset '{other}'"))),
    }
}

fn sample_states(traj: &dyn Trajectory, t0: f64, t1: f64, step: f64) -> Result<(Vec<f64>, Vec<CVector>)> {
    let times = uniform_grid(t0, t1, step)?;
    let states = times.iter().map(|&t| traj.state(t)).collect();
    Ok((times, states))
}

/// Sample on a uniform grid, using the exact derivative when there is one.
pub fn sample(traj: &dyn Trajectory, t0: f64, t1: f64, step: f64) -> Result<SampledPath> {
    let (times, states) = sample_states(traj, t0, t1, step)?;
    let exact: Option<Vec<CVector>> = times.iter().map(|&t| traj.derivative(t)).collect();
    match exact {
        Some(d) => SampledPath::with_derivatives(times, states, d),
        None => differentiate_path(&SampledPath::new(times, states)?),
    }
}

/// Sample on a uniform grid and differentiate numerically, ignoring any
/// exact derivative.
pub fn sample_finite_difference(traj: &dyn Trajectory, t0: f64, t1: f64, step: f64) -> Result<SampledPath> {
    let (times, states) = sample_states(traj, t0, t1, step)?;
    differentiate_path(&SampledPath::new(times, states)?)
}
