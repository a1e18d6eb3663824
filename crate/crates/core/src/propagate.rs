//! Fixed-step integration of `i∂ₜψ = H(t)ψ` for arbitrary, generally
//! non-Hermitian, `H(t)`.
//!
//! The norm of `ψ` is left alone unless asked for: under a non-Hermitian
//! Hamiltonian it carries physical gain and loss.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{check_uniform_grid, fs_angle, same_grid, SampledPath, ZERO_NORM};
use crate::linalg::{ensure_dim, ensure_square, is_finite_matrix, CMatrix, CVector, C64, I};

/// Runaway-gain limit on `‖ψ‖`.
pub const OVERFLOW_NORM: f64 = 1e150;

/// `n_steps + 1` equally spaced points from `t0` to `t1`, with the step
/// rounded down so that it does not exceed `step`.
pub fn uniform_grid(t0: f64, t1: f64, step: f64) -> Result<Vec<f64>> {
    if !(t0.is_finite() && t1.is_finite() && t1 > t0) {
        return Err(Error::InvalidInput(format!("time span [{t0}, {t1}] is empty or not finite")));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidInput(format!("step {step} must be positive")));
    }
    let n_steps = (((t1 - t0) / step) - 1e-9).ceil().max(1.0) as usize;
    let h = (t1 - t0) / n_steps as f64;
    Ok((0..=n_steps)
        .map(|k| if k == n_steps { t1 } else { t0 + k as f64 * h })
        .collect())
}

type Generator = Arc<dyn Fn(f64) -> CMatrix + Send + Sync>;

/// A time-dependent Hamiltonian.
#[derive(Clone)]
pub enum HamiltonianPath {
    /// Evaluated on demand at any time.
    Analytic { dim: usize, generator: Generator },
    /// Matrices on a uniform grid, linearly interpolated in between.
    Sampled(SampledHamiltonian),
}

impl fmt::Debug for HamiltonianPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HamiltonianPath::Analytic { dim, .. } => {
                f.debug_struct("Analytic").field("dim", dim).finish_non_exhaustive()
            }
            HamiltonianPath::Sampled(s) => f.debug_tuple("Sampled").field(s).finish(),
        }
    }
}

impl HamiltonianPath {
    pub fn analytic<F>(dim: usize, generator: F) -> Self
    where
        F: Fn(f64) -> CMatrix + Send + Sync + 'static,
    {
        HamiltonianPath::Analytic { dim, generator: Arc::new(generator) }
    }

    pub fn constant(h: CMatrix) -> Self {
        let dim = h.nrows();
        Self::analytic(dim, move |_| h.clone())
    }

    pub fn dim(&self) -> usize {
        match self {
            HamiltonianPath::Analytic { dim, .. } => *dim,
            HamiltonianPath::Sampled(s) => s.dim(),
        }
    }

    pub fn at(&self, t: f64) -> CMatrix {
        match self {
            HamiltonianPath::Analytic { generator, .. } => generator(t),
            HamiltonianPath::Sampled(s) => s.interpolate(t),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledHamiltonian {
    times: Vec<f64>,
    matrices: Vec<CMatrix>,
}

impl SampledHamiltonian {
    pub fn new(times: Vec<f64>, matrices: Vec<CMatrix>) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::TooFewSamples { needed: 1, found: 0 });
        }
        if times.len() != matrices.len() {
            return Err(Error::GridMismatch(format!(
                "{} times but {} matrices",
                times.len(),
                matrices.len()
            )));
        }
        check_uniform_grid(&times)?;
        let dim = ensure_square(&matrices[0])?;
        for m in &matrices {
            ensure_dim(dim, ensure_square(m)?)?;
            if !is_finite_matrix(m) {
                return Err(Error::InvalidInput("non-finite Hamiltonian entry".into()));
            }
        }
        Ok(Self { times, matrices })
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].nrows()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.matrices
    }

    pub fn spacing(&self) -> Option<f64> {
        (self.times.len() >= 2).then(|| self.times[1] - self.times[0])
    }

    /// Linear interpolation per entry; constant extrapolation past the ends.
    pub fn interpolate(&self, t: f64) -> CMatrix {
        let n = self.times.len();
        let Some(h) = self.spacing() else {
            return self.matrices[0].clone();
        };
        let x = (t - self.times[0]) / h;
        if x <= 0.0 {
            return self.matrices[0].clone();
        }
        let idx = (x.floor() as usize).min(n - 2);
        let w = (x - idx as f64).clamp(0.0, 1.0);
        if w == 0.0 {
            return self.matrices[idx].clone();
        }
        &self.matrices[idx] * C64::from(1.0 - w) + &self.matrices[idx + 1] * C64::from(w)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationOptions {
    pub step: f64,
    /// Project back to unit norm after every step.
    pub renormalize: bool,
    /// Keep every n-th integrator step in the output.
    pub record_every: usize,
}

impl Default for PropagationOptions {
    fn default() -> Self {
        Self { step: 1e-3, renormalize: false, record_every: 1 }
    }
}

impl PropagationOptions {
    pub fn with_step(step: f64) -> Self {
        Self { step, ..Self::default() }
    }
}

/// Classical fourth-order Runge-Kutta for `∂ₜψ = −iH(t)ψ`.
pub fn propagate(
    h: &HamiltonianPath,
    psi0: &CVector,
    t0: f64,
    t1: f64,
    opts: &PropagationOptions,
) -> Result<SampledPath> {
    ensure_dim(h.dim(), psi0.len())?;
    if !(psi0.norm() >= ZERO_NORM) {
        return Err(Error::ZeroVector);
    }
    if opts.record_every == 0 {
        return Err(Error::InvalidInput("record_every must be at least 1".into()));
    }
    let grid = uniform_grid(t0, t1, opts.step)?;
    let n_steps = grid.len() - 1;
    if n_steps % opts.record_every != 0 {
        return Err(Error::InvalidInput(format!(
            "{n_steps} steps are not a multiple of record_every = {}",
            opts.record_every
        )));
    }
    let dt = (t1 - t0) / n_steps as f64;
    if let HamiltonianPath::Sampled(s) = h {
        if let Some(spacing) = s.spacing() {
            if dt > spacing * (1.0 + 1e-9) {
                return Err(Error::StepTooLarge { step: dt, spacing });
            }
            let (first, last) = (s.times[0], s.times[s.times.len() - 1]);
            let slack = 1e-9 * spacing;
            if t0 < first - slack || t1 > last + slack {
                return Err(Error::GridMismatch(format!(
                    "propagation span [{t0}, {t1}] leaves the sampled range [{first}, {last}]"
                )));
            }
        }
    }

    let minus_i = -I;
    let rhs = |m: &CMatrix, v: &CVector| -> CVector { (m * v) * minus_i };
    let half = C64::from(dt / 2.0);
    let full = C64::from(dt);
    let sixth = C64::from(dt / 6.0);

    let mut psi = psi0.clone();
    let mut times = Vec::with_capacity(n_steps / opts.record_every + 1);
    let mut states = Vec::with_capacity(times.capacity());
    times.push(grid[0]);
    states.push(psi.clone());

    let mut h_start = h.at(grid[0]);
    for k in 0..n_steps {
        let t = grid[k];
        let h_mid = h.at(t + dt / 2.0);
        let h_end = h.at(grid[k + 1]);
        let k1 = rhs(&h_start, &psi);
        let k2 = rhs(&h_mid, &(&psi + &k1 * half));
        let k3 = rhs(&h_mid, &(&psi + &k2 * half));
        let k4 = rhs(&h_end, &(&psi + &k3 * full));
        psi += (k1 + k2 * C64::from(2.0) + k3 * C64::from(2.0) + k4) * sixth;

        let norm = psi.norm();
        if !(norm <= OVERFLOW_NORM) {
            return Err(Error::Overflow { t: grid[k + 1], limit: OVERFLOW_NORM });
        }
        if opts.renormalize {
            if !(norm >= ZERO_NORM) {
                return Err(Error::ZeroVector);
            }
            psi /= C64::from(norm);
        }
        if (k + 1) % opts.record_every == 0 {
            times.push(grid[k + 1]);
            states.push(psi.clone());
        }
        h_start = h_end;
    }
    SampledPath::new(times, states)
}

/// Largest Fubini-Study angle between two paths sampled on the same grid.
pub fn phs_distance(a: &SampledPath, b: &SampledPath) -> Result<f64> {
    if !same_grid(a.times(), b.times()) {
        return Err(Error::GridMismatch("paths are sampled on different grids".into()));
    }
    a.states()
        .iter()
        .zip(b.states())
        .try_fold(0.0_f64, |acc, (x, y)| Ok(acc.max(fs_angle(x, y)?.radians())))
}

/// `(t, ‖ψ(t)‖)` for every sample.
pub fn norm_history(path: &SampledPath) -> Vec<(f64, f64)> {
    path.times()
        .iter()
        .zip(path.states())
        .map(|(&t, s)| (t, s.norm()))
        .collect()
}
