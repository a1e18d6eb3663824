//! Maximally efficient Hamiltonians for a prescribed trajectory.
//!
//! Given any path `ψ(t)` in Hilbert space, the projective motion it describes
//! is generated with efficiency `η = 1` by
//!
//! ```text
//! H₀ = i|∂ₜm⟩⟨m| − i g|m⟩⟨∂ₜm|,      |g| ≤ 1,
//! ```
//!
//! where `m = c(t)ψ` is the gauge-fixed copy of `ψ`: unit norm and parallel
//! transported, `⟨m|∂ₜm⟩ = 0`. `g = 1` gives a Hermitian Hamiltonian;
//! `g = 0` gives a nilpotent rank-one generator that sits at an exceptional
//! point at every instant and has the smallest Hilbert-Schmidt norm of the
//! family.
//!
//! With `v = ⟨∂ₜm|∂ₜm⟩`:
//!
//! * `‖H₀‖_SP = √v·max(1, |g|)` and `‖H₀‖_HS = √((1 + |g|²)v)`,
//! * `K(H₀, m) = v`, so `η = 1/max(1, |g|)`,
//! * the instantaneous eigenvalues are `±√g·√v`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{differentiate_path, fs_angle, normalized, SampledPath};
use crate::linalg::{
    hs_norm, identity, inner, outer, spectral_norm, CMatrix, CVector, C64, I,
};
use crate::propagate::{HamiltonianPath, SampledHamiltonian};

pub use crate::bounds::efficiency;

/// Largest endpoint angle accepted by [`geometric_phase`].
pub const CLOSED_PATH_TOL: f64 = 1e-6;

/// A unit-norm, parallel-transported path `m(t) = c(t)ψ(t)` with its
/// derivative.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeFixedPath {
    path: SampledPath,
    gauge_factor: Vec<C64>,
}

impl GaugeFixedPath {
    /// States `m(t)` with derivatives `∂ₜm(t)` filled in.
    pub fn path(&self) -> &SampledPath {
        &self.path
    }

    pub fn times(&self) -> &[f64] {
        self.path.times()
    }

    pub fn states(&self) -> &[CVector] {
        self.path.states()
    }

    pub fn derivatives(&self) -> &[CVector] {
        self.path.derivatives().expect("gauge-fixed paths always carry derivatives")
    }

    /// `c(t)` with `m = c·ψ`.
    pub fn gauge_factor(&self) -> &[C64] {
        &self.gauge_factor
    }

    pub fn len(&self) -> usize {
        self.path.len()
    }

    pub fn is_empty(&self) -> bool {
        self.path.is_empty()
    }
}

/// Normalize and parallel transport a path.
///
/// The transport phase `exp(−∫⟨χ|∂χ⟩dt)` is integrated with the trapezoid
/// rule and pinned to zero at the first sample. The small residual
/// `⟨m|∂m⟩` left by the discretization is then projected out of `∂m`.
pub fn gauge_fix(path: &SampledPath) -> Result<GaugeFixedPath> {
    let with_d;
    let path = match path.derivatives() {
        Some(_) => path,
        None => {
            with_d = differentiate_path(path)?;
            &with_d
        }
    };
    let derivs = path.derivatives().expect("derivatives present");
    let n = path.len();
    if n < 2 {
        return Err(Error::TooFewSamples { needed: 2, found: n });
    }

    let mut chis = Vec::with_capacity(n);
    let mut dchis = Vec::with_capacity(n);
    let mut connection = Vec::with_capacity(n);
    let mut norms = Vec::with_capacity(n);
    for (psi, dpsi) in path.states().iter().zip(derivs) {
        let (chi, norm) = normalized(psi)?;
        let proj = inner(&chi, dpsi);
        // ∂χ = (∂ψ − χ·Re⟨χ|∂ψ⟩)/‖ψ‖ and ⟨χ|∂χ⟩ = i·Im⟨χ|∂ψ⟩/‖ψ‖
        let dchi = (dpsi - &chi * C64::from(proj.re)) / C64::from(norm);
        connection.push(I * (proj.im / norm));
        chis.push(chi);
        dchis.push(dchi);
        norms.push(norm);
    }

    let times = path.times();
    let mut phase = C64::from(0.0);
    let mut states = Vec::with_capacity(n);
    let mut derivatives = Vec::with_capacity(n);
    let mut gauge_factor = Vec::with_capacity(n);
    for k in 0..n {
        if k > 0 {
            phase += (connection[k - 1] + connection[k]) * (0.5 * (times[k] - times[k - 1]));
        }
        let factor = (-phase).exp();
        let m = &chis[k] * factor;
        let mut dm = (&dchis[k] - &chis[k] * connection[k]) * factor;
        let residual = inner(&m, &dm);
        dm -= &m * residual;
        gauge_factor.push(factor / norms[k]);
        states.push(m);
        derivatives.push(dm);
    }
    Ok(GaugeFixedPath {
        path: SampledPath::with_derivatives(times.to_vec(), states, derivatives)?,
        gauge_factor,
    })
}

/// The free parameter of the efficient family, constant or one value per
/// sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum GParameter {
    Constant(C64),
    Series(Vec<C64>),
}

impl GParameter {
    pub fn real(g: f64) -> Self {
        GParameter::Constant(C64::from(g))
    }

    fn value(&self, k: usize) -> C64 {
        match self {
            GParameter::Constant(g) => *g,
            GParameter::Series(v) => v[k],
        }
    }

    fn check(&self, len: usize) -> Result<()> {
        let values: &[C64] = match self {
            GParameter::Constant(g) => std::slice::from_ref(g),
            GParameter::Series(v) => {
                if v.len() != len {
                    return Err(Error::GridMismatch(format!(
                        "g series has {} values for {len} samples",
                        v.len()
                    )));
                }
                v
            }
        };
        if values.iter().any(|g| !(g.re.is_finite() && g.im.is_finite())) {
            return Err(Error::InvalidInput("g must be finite".into()));
        }
        Ok(())
    }
}

impl From<f64> for GParameter {
    fn from(g: f64) -> Self {
        GParameter::real(g)
    }
}

impl From<C64> for GParameter {
    fn from(g: C64) -> Self {
        GParameter::Constant(g)
    }
}

#[derive(Debug, Clone)]
pub struct SynthesisResult {
    pub gauge: GaugeFixedPath,
    pub g: GParameter,
    pub h0: SampledHamiltonian,
    pub e_plus: Vec<C64>,
    pub e_minus: Vec<C64>,
    pub sp_norm: Vec<f64>,
    pub hs_norm: Vec<f64>,
    /// `√⟨∂ₜm|∂ₜm⟩`, the Fubini-Study speed of the trajectory.
    pub speed: Vec<f64>,
}

impl SynthesisResult {
    pub fn times(&self) -> &[f64] {
        self.gauge.times()
    }

    pub fn hamiltonians(&self) -> &[CMatrix] {
        self.h0.matrices()
    }

    pub fn hamiltonian_path(&self) -> HamiltonianPath {
        HamiltonianPath::Sampled(self.h0.clone())
    }

    pub fn len(&self) -> usize {
        self.gauge.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gauge.is_empty()
    }
}

/// Build `H₀(t; g)` at every sample of a gauge-fixed path.
pub fn synthesize(gauge: &GaugeFixedPath, g: &GParameter) -> Result<SynthesisResult> {
    let n = gauge.len();
    g.check(n)?;
    let mut matrices = Vec::with_capacity(n);
    let mut e_plus = Vec::with_capacity(n);
    let mut e_minus = Vec::with_capacity(n);
    let mut sp = Vec::with_capacity(n);
    let mut hs = Vec::with_capacity(n);
    let mut speed = Vec::with_capacity(n);
    for (k, (m, dm)) in gauge.states().iter().zip(gauge.derivatives()).enumerate() {
        let gk = g.value(k);
        let h = outer(dm, m) * I - outer(m, dm) * (I * gk);
        let v = dm.norm();
        let e = gk.sqrt() * v;
        matrices.push(h);
        e_plus.push(e);
        e_minus.push(-e);
        sp.push(v * gk.norm().max(1.0));
        hs.push(v * (1.0 + gk.norm_sqr()).sqrt());
        speed.push(v);
    }
    Ok(SynthesisResult {
        gauge: gauge.clone(),
        g: g.clone(),
        h0: SampledHamiltonian::new(gauge.times().to_vec(), matrices)?,
        e_plus,
        e_minus,
        sp_norm: sp,
        hs_norm: hs,
        speed,
    })
}

/// The `g = 0` member: a nilpotent, rank-one generator at every instant.
///
/// Fails with [`Error::Invariant`] if any sample violates `H₀² = 0` or
/// `‖H₀‖_SP = ‖H₀‖_HS` beyond `1e-10` relative.
pub fn ep_generator(gauge: &GaugeFixedPath) -> Result<SynthesisResult> {
    let result = synthesize(gauge, &GParameter::real(0.0))?;
    for (t, h) in result.times().iter().zip(result.hamiltonians()) {
        let hs = hs_norm(h);
        let square = hs_norm(&(h * h));
        if square > 1e-10 * hs * hs {
            return Err(Error::Invariant(format!("H₀² ≠ 0 at t = {t}: ‖H₀²‖ = {square:e}")));
        }
        let sp = spectral_norm(h)?;
        if (sp - hs).abs() > 1e-10 * hs {
            return Err(Error::Invariant(format!(
                "spectral and Hilbert-Schmidt norms differ at t = {t}: {sp} vs {hs}"
            )));
        }
    }
    Ok(result)
}

/// Add a phase/amplitude drive `∂ₜφ` along `m` to a synthesized Hamiltonian.
///
/// The drive is `∂ₜφ·(|m⟩⟨m| − (1 − |m⟩⟨m|)/(N − 1))`: the diagonal term
/// along `m` plus the compensating term on the orthogonal complement that
/// keeps the result traceless. Both leave `K` unchanged and
/// `⟨m|H_new|m⟩ = ∂ₜφ`.
pub fn phase_perturb(result: &SynthesisResult, phi_dot: &[C64]) -> Result<HamiltonianPath> {
    if phi_dot.len() != result.len() {
        return Err(Error::GridMismatch(format!(
            "{} phase rates for {} samples",
            phi_dot.len(),
            result.len()
        )));
    }
    let dim = result.h0.dim();
    let complement = 1.0 / (dim as f64 - 1.0);
    let matrices = result
        .hamiltonians()
        .iter()
        .zip(result.gauge.states())
        .zip(phi_dot)
        .map(|((h, m), &rate)| {
            let proj = outer(m, m);
            let drive = &proj * C64::from(1.0 + complement) - identity(dim) * C64::from(complement);
            h + drive * rate
        })
        .collect();
    Ok(HamiltonianPath::Sampled(SampledHamiltonian::new(
        result.times().to_vec(),
        matrices,
    )?))
}

/// Trapezoid integral of `⟨m|H|m⟩/⟨m|m⟩` along the path.
pub fn dynamical_phase(h_path: &HamiltonianPath, path: &SampledPath) -> Result<C64> {
    crate::linalg::ensure_dim(h_path.dim(), path.dim())?;
    let matrices: Vec<CMatrix> = match h_path {
        HamiltonianPath::Sampled(s) => {
            if !path.same_grid(s.times()) {
                return Err(Error::GridMismatch(
                    "Hamiltonian and path are sampled on different grids".into(),
                ));
            }
            s.matrices().to_vec()
        }
        HamiltonianPath::Analytic { .. } => path.times().iter().map(|&t| h_path.at(t)).collect(),
    };
    let expectation: Vec<C64> = path
        .states()
        .iter()
        .zip(&matrices)
        .map(|(m, h)| inner(m, &(h * m)) / m.norm_squared())
        .collect();
    let times = path.times();
    Ok((1..times.len())
        .map(|k| (expectation[k - 1] + expectation[k]) * (0.5 * (times[k] - times[k - 1])))
        .sum())
}

/// Total phase `arg⟨ψ(0)|ψ(T)⟩ ∈ (−π, π]` of a path that returns to its
/// starting ray.
pub fn geometric_phase(path: &SampledPath) -> Result<f64> {
    let first = &path.states()[0];
    let last = &path.states()[path.len() - 1];
    let angle = fs_angle(first, last)?.radians();
    if angle > CLOSED_PATH_TOL {
        return Err(Error::NotClosed { angle });
    }
    let phase = inner(first, last).arg();
    Ok(if phase <= -std::f64::consts::PI { std::f64::consts::PI } else { phase })
}
