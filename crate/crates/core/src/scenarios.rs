//! Named experiments built from the other modules.
//!
//! * [`run_figure1`]: two efficient Hamiltonians for the same great-circle
//!   trajectory drive the designed state identically and other states
//!   differently.
//! * [`run_optical`]: the waveguide/polarization Hamiltonian
//!   `[[0, i], [−iq, 0]]` and its speed limit near the exceptional point `q = 0`.
//! * [`run_pauli`]: traceless `(α⃗ + iβ⃗)·σ⃗` and the pseudo-Hermitian case
//!   `α⃗·β⃗ = 0`.
//! * [`run_brachistochrone`]: the PT-symmetric brachistochrone Hamiltonian
//!   and its exceptional-point limit at fixed energy gap.
//!
//! Every report carries a list of [`Check`]s.

use std::sync::Arc;

use serde::Serialize;

use crate::bounds::{efficiency, report_path, SpeedReportRow};
use crate::checks::Check;
use crate::error::{Error, Result};
use crate::geometry::{bloch_speed, bloch_vector, fs_angle, SampledPath};
use crate::io::state_to_json;
use crate::linalg::{
    c, cmat, cvec, eigenvalues_2x2, hs_norm, pauli_combination, sigma_x, spectral_norm, CMatrix,
    CVector, C64, I,
};
use crate::propagate::{phs_distance, propagate, HamiltonianPath, PropagationOptions};
use crate::synthesis::{gauge_fix, synthesize, GParameter, GaugeFixedPath};
use crate::trajectory::{sample, GreatCircle};

fn up() -> CVector {
    cvec(&[c(1.0, 0.0), c(0.0, 0.0)])
}

fn down() -> CVector {
    cvec(&[c(0.0, 0.0), c(1.0, 0.0)])
}

/// Short label for a coupling value, e.g. `1`, `-0.8`, `0+0.7i`.
pub fn g_label(g: C64) -> String {
    if g.im == 0.0 {
        format!("{}", g.re)
    } else if g.im < 0.0 {
        format!("{}{}i", g.re, g.im)
    } else {
        format!("{}+{}i", g.re, g.im)
    }
}

fn state_label(psi: &CVector, index: usize) -> String {
    let close = |other: &CVector| {
        psi.len() == 2 && fs_angle(psi, other).map(|a| a.radians() < 1e-12).unwrap_or(false)
    };
    if close(&up()) {
        "north".into()
    } else if close(&down()) {
        "south".into()
    } else {
        format!("state{index}")
    }
}

fn validate_time(t_end: f64, step: f64) -> Result<()> {
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidInput(format!("t_end = {t_end} must be positive")));
    }
    if !(step > 0.0 && step <= t_end) {
        return Err(Error::InvalidInput(format!("step = {step} must lie in (0, t_end]")));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Figure 1

/// Sampled Hamiltonians are interpolated linearly between samples, which
/// costs `O(spacing²)` in the norm of non-Hermitian runs (about `2.4e-6`
/// over `[0, 3]` at spacing `1e-3`). Propagations of synthesized
/// Hamiltonians therefore run on a grid this many times finer than the
/// reported one.
pub const PROPAGATION_REFINE: usize = 4;

/// The great circle gauge-fixed on the refined propagation grid.
pub fn refined_gauge(t_end: f64, step: f64) -> Result<GaugeFixedPath> {
    gauge_fix(&sample(&GreatCircle, 0.0, t_end, step / PROPAGATION_REFINE as f64)?)
}

/// Options matching [`refined_gauge`]: integrate on the fine grid, record on
/// the coarse one.
pub fn refined_options(step: f64) -> PropagationOptions {
    PropagationOptions {
        step: step / PROPAGATION_REFINE as f64,
        renormalize: false,
        record_every: PROPAGATION_REFINE,
    }
}

#[derive(Debug, Clone)]
pub struct Figure1Config {
    pub g_values: Vec<C64>,
    pub initial_states: Vec<CVector>,
    pub t_end: f64,
    pub step: f64,
}

impl Default for Figure1Config {
    fn default() -> Self {
        Self {
            g_values: vec![C64::from(1.0), C64::from(-0.8)],
            initial_states: vec![up(), down()],
            t_end: 3.0,
            step: 1e-3,
        }
    }
}

/// Separation below which a propagated run counts as following `m(t)`.
pub const COINCIDENCE_TOL: f64 = 1e-6;
/// Separation above which two runs count as visibly different.
pub const DIVERGENCE_THRESHOLD: f64 = 0.3;
/// Allowed deviation of `η` from `1/max(1, |g|)` along the designed state.
pub const DESIGNED_ETA_TOL: f64 = 1e-4;

#[derive(Debug, Clone)]
pub struct Figure1Run {
    pub g: C64,
    pub state_label: String,
    pub path: SampledPath,
    pub bloch: Vec<[f64; 3]>,
    pub norms: Vec<f64>,
    /// Efficiency of `H₀(t)` on the propagated state.
    pub eta: Vec<Option<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Figure1Input {
    pub g_values: Vec<C64>,
    pub initial_states: Vec<Vec<[f64; 2]>>,
    pub t_end: f64,
    pub step: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DesignedRun {
    pub g: C64,
    pub state_label: String,
    pub distance_to_trajectory: f64,
    pub max_norm_deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairDistance {
    pub state_label: String,
    pub g_a: C64,
    pub g_b: C64,
    pub distance: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EtaSummary {
    pub g: C64,
    pub expected: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Figure1Report {
    pub input: Figure1Input,
    pub designed_runs: Vec<DesignedRun>,
    pub pairwise: Vec<PairDistance>,
    pub designed_eta: Vec<EtaSummary>,
    #[serde(skip)]
    pub runs: Vec<Figure1Run>,
    pub checks: Vec<Check>,
}

pub fn run_figure1(cfg: &Figure1Config) -> Result<Figure1Report> {
    validate_time(cfg.t_end, cfg.step)?;
    if cfg.g_values.is_empty() || cfg.initial_states.is_empty() {
        return Err(Error::InvalidInput("figure1 needs at least one g and one initial state".into()));
    }
    for psi in &cfg.initial_states {
        crate::linalg::ensure_dim(2, psi.len())?;
        crate::geometry::normalized(psi)?;
    }
    let gauge = gauge_fix(&sample(&GreatCircle, 0.0, cfg.t_end, cfg.step)?)?;
    let fine = refined_gauge(cfg.t_end, cfg.step)?;
    let m0 = &gauge.states()[0];
    let labels: Vec<String> =
        cfg.initial_states.iter().enumerate().map(|(i, s)| state_label(s, i)).collect();
    let designed: Vec<bool> = cfg
        .initial_states
        .iter()
        .map(|s| fs_angle(s, m0).map(|a| a.radians() < 1e-12))
        .collect::<Result<_>>()?;

    let mut runs = Vec::new();
    let mut designed_runs = Vec::new();
    let mut designed_eta = Vec::new();
    let mut checks = Vec::new();
    let opts = refined_options(cfg.step);
    for &g in &cfg.g_values {
        let synth = synthesize(&gauge, &GParameter::Constant(g))?;
        let h_path = synthesize(&fine, &GParameter::Constant(g))?.hamiltonian_path();

        let expected = 1.0 / g.norm().max(1.0);
        let etas: Vec<f64> = synth
            .hamiltonians()
            .iter()
            .zip(gauge.states())
            .map(|(h, m)| efficiency(h, m).map(|e| e.unwrap_or(f64::NAN)))
            .collect::<Result<_>>()?;
        let (min, max) = etas.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &e| {
            (lo.min(e), hi.max(e))
        });
        let worst = etas.iter().map(|e| (e - expected).abs()).fold(0.0, f64::max);
        checks.push(Check::at_most(
            format!("η along m(t) = {expected}, g = {}", g_label(g)),
            worst,
            DESIGNED_ETA_TOL,
        ));
        designed_eta.push(EtaSummary { g, expected, min, max });

        for (idx, psi0) in cfg.initial_states.iter().enumerate() {
            let path = propagate(&h_path, psi0, 0.0, cfg.t_end, &opts)?;
            let bloch = path.states().iter().map(|s| bloch_vector(s).map(|b| b.0)).collect::<Result<_>>()?;
            let norms: Vec<f64> = path.states().iter().map(|s| s.norm()).collect();
            let eta = synth
                .hamiltonians()
                .iter()
                .zip(path.states())
                .map(|(h, s)| efficiency(h, s))
                .collect::<Result<_>>()?;
            if designed[idx] {
                let distance = phs_distance(&path, gauge.path())?;
                let scale = psi0.norm();
                let drift = norms.iter().map(|n| (n / scale - 1.0).abs()).fold(0.0, f64::max);
                checks.push(Check::at_most(
                    format!("{} run follows m(t), g = {}", labels[idx], g_label(g)),
                    distance,
                    COINCIDENCE_TOL,
                ));
                checks.push(Check::at_most(
                    format!("{} run keeps its norm, g = {}", labels[idx], g_label(g)),
                    drift,
                    COINCIDENCE_TOL,
                ));
                designed_runs.push(DesignedRun {
                    g,
                    state_label: labels[idx].clone(),
                    distance_to_trajectory: distance,
                    max_norm_deviation: drift,
                });
            }
            runs.push(Figure1Run { g, state_label: labels[idx].clone(), path, bloch, norms, eta });
        }
    }

    let mut pairwise = Vec::new();
    let n_states = cfg.initial_states.len();
    for (idx, label) in labels.iter().enumerate() {
        for a in 0..cfg.g_values.len() {
            for b in a + 1..cfg.g_values.len() {
                let (ra, rb) = (&runs[a * n_states + idx], &runs[b * n_states + idx]);
                let distance = phs_distance(&ra.path, &rb.path)?;
                let (ga, gb) = (cfg.g_values[a], cfg.g_values[b]);
                let name = format!("{label} runs for g = {} and g = {}", g_label(ga), g_label(gb));
                if designed[idx] {
                    checks.push(Check::at_most(format!("{name} coincide"), distance, COINCIDENCE_TOL));
                } else if ga != gb {
                    checks.push(Check::at_least(format!("{name} diverge"), distance, DIVERGENCE_THRESHOLD));
                }
                pairwise.push(PairDistance { state_label: label.clone(), g_a: ga, g_b: gb, distance });
            }
        }
    }

    Ok(Figure1Report {
        input: Figure1Input {
            g_values: cfg.g_values.clone(),
            initial_states: cfg.initial_states.iter().map(state_to_json).collect(),
            t_end: cfg.t_end,
            step: cfg.step,
        },
        designed_runs,
        pairwise,
        designed_eta,
        runs,
        checks,
    })
}

// ---------------------------------------------------------------------------
// Optical exceptional point

/// `[[0, i], [−iq, 0]]`.
pub fn berry_hamiltonian(q: C64) -> CMatrix {
    cmat([[c(0.0, 0.0), I], [-I * q, c(0.0, 0.0)]])
}

type Profile = Arc<dyn Fn(f64) -> C64 + Send + Sync>;

#[derive(Clone)]
pub struct OpticalConfig {
    pub q_profile: Profile,
    /// Human-readable description of the profile, echoed in the report.
    pub q_label: String,
    pub z_range: (f64, f64),
    pub samples: usize,
    pub probe_states: Vec<CVector>,
    /// Optionally propagate this state along `z` and report its speeds.
    pub propagate_from: Option<CVector>,
    pub step: f64,
}

impl std::fmt::Debug for OpticalConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OpticalConfig")
            .field("q_label", &self.q_label)
            .field("z_range", &self.z_range)
            .field("samples", &self.samples)
            .finish_non_exhaustive()
    }
}

impl OpticalConfig {
    pub fn new<F>(label: impl Into<String>, q: F, z_range: (f64, f64)) -> Self
    where
        F: Fn(f64) -> C64 + Send + Sync + 'static,
    {
        let diag = cvec(&[c(1.0, 0.0), c(1.0, 0.0)]) / C64::from(2f64.sqrt());
        Self {
            q_profile: Arc::new(q),
            q_label: label.into(),
            z_range,
            samples: 101,
            probe_states: vec![up(), down(), diag],
            propagate_from: None,
            step: 1e-3,
        }
    }

    pub fn constant(q: C64) -> Self {
        Self::new(format!("q = {}", g_label(q)), move |_| q, (0.0, 1.0))
    }

    /// `q(z) = z` on `[0, 2]`, propagating `(1, 1)/√2`.
    pub fn linear_ramp() -> Self {
        let mut cfg = Self::new("q = z", |z| C64::from(z), (0.0, 2.0));
        cfg.propagate_from = Some(cvec(&[c(1.0, 0.0), c(1.0, 0.0)]) / C64::from(2f64.sqrt()));
        cfg
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OpticalRow {
    pub z: f64,
    pub q: C64,
    /// `2√q`, principal branch.
    pub delta_e: C64,
    pub sp_norm: f64,
    pub hs_norm: f64,
    pub bloch_speeds: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OpticalInput {
    pub q_profile: String,
    pub z_range: (f64, f64),
    pub samples: usize,
    pub probe_states: Vec<Vec<[f64; 2]>>,
    pub propagate_from: Option<Vec<[f64; 2]>>,
    pub step: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OpticalReport {
    pub input: OpticalInput,
    pub max_bloch_speed: f64,
    #[serde(skip)]
    pub rows: Vec<OpticalRow>,
    #[serde(skip)]
    pub propagated: Option<Vec<SpeedReportRow>>,
    pub checks: Vec<Check>,
}

pub fn run_optical(cfg: &OpticalConfig) -> Result<OpticalReport> {
    let (z0, z1) = cfg.z_range;
    if !(z1 > z0) {
        return Err(Error::InvalidInput(format!("empty z range [{z0}, {z1}]")));
    }
    if cfg.samples < 2 {
        return Err(Error::TooFewSamples { needed: 2, found: cfg.samples });
    }
    for psi in &cfg.probe_states {
        crate::linalg::ensure_dim(2, psi.len())?;
    }

    let mut rows = Vec::with_capacity(cfg.samples);
    let (mut sp_err, mut speed_excess, mut chain_excess) = (0.0_f64, f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut max_speed = 0.0_f64;
    for k in 0..cfg.samples {
        let z = z0 + (z1 - z0) * k as f64 / (cfg.samples - 1) as f64;
        let q = (cfg.q_profile)(z);
        let h = berry_hamiltonian(q);
        let sp = spectral_norm(&h)?;
        let hs = hs_norm(&h);
        let expected_sp = q.norm().max(1.0);
        sp_err = sp_err.max((sp - expected_sp).abs() / expected_sp);
        chain_excess = chain_excess.max(expected_sp - (1.0 + q.norm_sqr()).sqrt()).max(sp - hs);
        let speeds: Vec<f64> = cfg.probe_states.iter().map(|p| bloch_speed(&h, p)).collect::<Result<_>>()?;
        for &v in &speeds {
            speed_excess = speed_excess.max(v - 2.0 * expected_sp);
            max_speed = max_speed.max(v);
        }
        rows.push(OpticalRow { z, q, delta_e: q.sqrt() * 2.0, sp_norm: sp, hs_norm: hs, bloch_speeds: speeds });
    }

    let mut checks = vec![
        Check::at_most("‖H‖_SP = max(1, |q|)", sp_err, 1e-12),
        Check::at_most("probe Bloch speed ≤ 2·max(1, |q|)", speed_excess, 1e-10),
        Check::at_most("max(1, |q|) ≤ √(1 + |q|²) and ‖H‖_SP ≤ ‖H‖_HS", chain_excess, 1e-12),
    ];

    let propagated = match &cfg.propagate_from {
        None => None,
        Some(psi0) => {
            let profile = cfg.q_profile.clone();
            let h_path = HamiltonianPath::analytic(2, move |z| berry_hamiltonian(profile(z)));
            let path = propagate(&h_path, psi0, z0, z1, &PropagationOptions::with_step(cfg.step))?;
            let report = report_path(&h_path, &path)?;
            let excess = report
                .iter()
                .map(|r| r.fs_speed - (cfg.q_profile)(r.t).norm().max(1.0))
                .fold(f64::NEG_INFINITY, f64::max);
            checks.push(Check::at_most("propagated speed ≤ max(1, |q|)", excess, 1e-10));
            Some(report)
        }
    };

    Ok(OpticalReport {
        input: OpticalInput {
            q_profile: cfg.q_label.clone(),
            z_range: cfg.z_range,
            samples: cfg.samples,
            probe_states: cfg.probe_states.iter().map(state_to_json).collect(),
            propagate_from: cfg.propagate_from.as_ref().map(state_to_json),
            step: cfg.step,
        },
        max_bloch_speed: max_speed,
        rows,
        propagated,
        checks,
    })
}

// ---------------------------------------------------------------------------
// Pauli decomposition

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PauliConfig {
    pub alpha: [f64; 3],
    pub beta: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumClass {
    Zero,
    Real,
    Imaginary,
    Complex,
}

#[derive(Debug, Clone, Serialize)]
pub struct PauliReport {
    pub input: PauliConfig,
    pub e_plus: C64,
    pub e_minus: C64,
    pub delta_e: C64,
    pub spectrum: SpectrumClass,
    pub sp_norm: f64,
    pub hs_norm: f64,
    pub pseudo_hermitian: bool,
    /// `|α⃗| + |β⃗|`, reported only for `α⃗·β⃗ = 0`.
    pub sp_norm_formula: Option<f64>,
    pub checks: Vec<Check>,
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn classify(e: C64, scale: f64) -> SpectrumClass {
    let tol = 1e-12 * scale.max(f64::MIN_POSITIVE);
    let sq = e * e;
    if e.norm() <= tol.sqrt() * scale.sqrt() && sq.norm() <= tol {
        SpectrumClass::Zero
    } else if sq.im.abs() <= tol && sq.re > 0.0 {
        SpectrumClass::Real
    } else if sq.im.abs() <= tol && sq.re < 0.0 {
        SpectrumClass::Imaginary
    } else {
        SpectrumClass::Complex
    }
}

pub fn run_pauli(cfg: &PauliConfig) -> Result<PauliReport> {
    if cfg.alpha.iter().chain(&cfg.beta).any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("α⃗ and β⃗ must be finite".into()));
    }
    let h = pauli_combination(cfg.alpha, cfg.beta);
    let spec = eigenvalues_2x2(&h)?;
    let sp = spectral_norm(&h)?;
    let (a2, b2, ab) = (dot(cfg.alpha, cfg.alpha), dot(cfg.beta, cfg.beta), dot(cfg.alpha, cfg.beta));
    let (na, nb) = (a2.sqrt(), b2.sqrt());
    let scale = a2 + b2;

    // E² = α⃗² − β⃗² + 2iα⃗·β⃗
    let e_sq = c(a2 - b2, 2.0 * ab);
    let formula_err = (spec.e_plus * spec.e_plus - e_sq).norm() / scale.max(f64::MIN_POSITIVE);
    let mut checks = vec![Check::at_most("E±² = α⃗² − β⃗² + 2iα⃗·β⃗", formula_err, 1e-12)];

    let pseudo = ab.abs() < 1e-12 * na * nb || na == 0.0 || nb == 0.0;
    let spectrum = classify(spec.e_plus, scale);
    let sp_formula = pseudo.then_some(na + nb);
    if pseudo {
        let im_sq = (spec.e_plus * spec.e_plus).im.abs() / scale.max(f64::MIN_POSITIVE);
        checks.push(Check::at_most("E± ∈ ℝ ∪ iℝ", im_sq, 1e-12));
        checks.push(Check::at_most(
            "‖H‖_SP = |α⃗| + |β⃗|",
            (sp - (na + nb)).abs() / (na + nb).max(f64::MIN_POSITIVE),
            1e-10,
        ));
    }
    Ok(PauliReport {
        input: *cfg,
        e_plus: spec.e_plus,
        e_minus: spec.e_minus,
        delta_e: spec.delta_e,
        spectrum,
        sp_norm: sp,
        hs_norm: hs_norm(&h),
        pseudo_hermitian: pseudo,
        sp_norm_formula: sp_formula,
        checks,
    })
}

// ---------------------------------------------------------------------------
// PT-symmetric brachistochrone

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BrachistochroneConfig {
    pub s: f64,
    /// Reparametrization angle with `r sin χ = s sin α`.
    pub alpha: f64,
    /// Energy gap held fixed in the sweep towards `α → π/2`; `None` skips it.
    pub sweep_delta_e: Option<f64>,
    pub sweep_points: usize,
    pub sweep_alpha_max: f64,
    pub t_end: f64,
    pub step: f64,
}

impl BrachistochroneConfig {
    pub fn canonical(s: f64, alpha: f64) -> Self {
        Self {
            s,
            alpha,
            sweep_delta_e: Some(1.0),
            sweep_points: 32,
            sweep_alpha_max: 1.55,
            t_end: 1.0,
            step: 1e-3,
        }
    }

    /// The `s` that gives energy gap `delta_e` at angle `alpha`.
    pub fn at_fixed_gap(delta_e: f64, alpha: f64) -> Self {
        Self::canonical(delta_e / (2.0 * alpha.cos()), alpha)
    }

    /// From the raw `(r, s, χ)` parameters of `[[ir sin χ, s], [s, −ir sin χ]]`.
    pub fn from_raw(r: f64, s: f64, chi: f64) -> Result<Self> {
        if s == 0.0 || !s.is_finite() {
            return Err(Error::ParameterInconsistent(format!("s = {s} must be finite and nonzero")));
        }
        let sin_alpha = r * chi.sin() / s;
        if !(sin_alpha.abs() <= 1.0) {
            return Err(Error::ParameterInconsistent(format!(
                "|r sin χ / s| = {} exceeds 1; no real α exists",
                sin_alpha.abs()
            )));
        }
        Ok(Self::canonical(s, sin_alpha.asin()))
    }

    /// Both parameterizations at once; they must agree on `|r sin χ| = |s sin α|`.
    pub fn from_both(r: f64, s: f64, chi: f64, alpha: f64) -> Result<Self> {
        let lhs = (r * chi.sin()).abs();
        let rhs = (s * alpha.sin()).abs();
        if (lhs - rhs).abs() > 1e-12 * lhs.max(rhs).max(1.0) {
            return Err(Error::ParameterInconsistent(format!(
                "|r sin χ| = {lhs} but |s sin α| = {rhs}"
            )));
        }
        Ok(Self::canonical(s, alpha))
    }
}

/// `s·[[i sin α, 1], [1, −i sin α]]`.
pub fn brachistochrone_hamiltonian(s: f64, alpha: f64) -> CMatrix {
    let sa = alpha.sin();
    cmat([[I * sa, c(1.0, 0.0)], [c(1.0, 0.0), -I * sa]]) * C64::from(s)
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepPoint {
    pub alpha: f64,
    pub s: f64,
    pub delta_e: f64,
    pub sp_norm: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BrachReport {
    pub input: BrachistochroneConfig,
    pub delta_e: f64,
    pub delta_e_numeric: C64,
    pub sp_norm_formula: f64,
    pub sp_norm: f64,
    pub ratio: f64,
    /// `‖σ_x H σ_x − H†‖_HS`.
    pub pseudo_hermiticity_residual: f64,
    pub max_bloch_speed: f64,
    pub sweep: Vec<SweepPoint>,
    #[serde(skip)]
    pub trajectory: Option<SampledPath>,
    #[serde(skip)]
    pub speeds: Vec<SpeedReportRow>,
    pub checks: Vec<Check>,
}

pub fn run_brachistochrone(cfg: &BrachistochroneConfig) -> Result<BrachReport> {
    if !(cfg.s.is_finite() && cfg.alpha.is_finite()) {
        return Err(Error::InvalidInput("s and α must be finite".into()));
    }
    validate_time(cfg.t_end, cfg.step)?;
    let h = brachistochrone_hamiltonian(cfg.s, cfg.alpha);
    let spec = eigenvalues_2x2(&h)?;
    let delta_e = 2.0 * cfg.s * cfg.alpha.cos();
    let sp_formula = cfg.s.abs() * (1.0 + cfg.alpha.sin().abs());
    let sp = spectral_norm(&h)?;
    let ratio = delta_e.abs() / sp;
    let pt = hs_norm(&(sigma_x() * &h * sigma_x() - h.adjoint()));

    let mut checks = vec![
        Check::at_most("σ_x H σ_x = H†", pt, 0.0),
        Check::at_most(
            "ΔE = 2s cos α",
            (spec.delta_e - C64::from(delta_e)).norm() / delta_e.abs().max(1.0),
            1e-12,
        ),
        Check::at_most("‖H‖_SP = |s|(1 + |sin α|)", (sp - sp_formula).abs() / sp_formula.max(f64::MIN_POSITIVE), 1e-10),
    ];

    let mut sweep = Vec::new();
    if let Some(gap) = cfg.sweep_delta_e {
        if !(gap > 0.0) || cfg.sweep_points < 2 || !(cfg.sweep_alpha_max > 0.0 && cfg.sweep_alpha_max < std::f64::consts::FRAC_PI_2) {
            return Err(Error::InvalidInput("sweep needs ΔE > 0, ≥ 2 points and 0 < α_max < π/2".into()));
        }
        let mut worst_formula = 0.0_f64;
        let mut monotone = true;
        for k in 0..cfg.sweep_points {
            let alpha = cfg.sweep_alpha_max * k as f64 / (cfg.sweep_points - 1) as f64;
            let s = gap / (2.0 * alpha.cos());
            let sp = spectral_norm(&brachistochrone_hamiltonian(s, alpha))?;
            let ratio = gap / sp;
            worst_formula = worst_formula.max((ratio - 2.0 * alpha.cos() / (1.0 + alpha.sin())).abs());
            if let Some(prev) = sweep.last().map(|p: &SweepPoint| p.ratio) {
                monotone &= ratio < prev;
            }
            sweep.push(SweepPoint { alpha, s, delta_e: gap, sp_norm: sp, ratio });
        }
        checks.push(Check::at_most("sweep ratio = 2cos α/(1 + sin α)", worst_formula, 1e-12));
        checks.push(Check::new_flag("sweep ratio decreases monotonically", monotone));
        let last = sweep.last().expect("at least two sweep points");
        checks.push(Check::at_most(
            "sweep ratio approaches cos α",
            (last.ratio / last.alpha.cos() - 1.0).abs(),
            (1.0 - last.alpha.sin()) / (1.0 + last.alpha.sin()) + 1e-12,
        ));
    }

    let h_path = HamiltonianPath::constant(h.clone());
    let trajectory = propagate(&h_path, &up(), 0.0, cfg.t_end, &PropagationOptions::with_step(cfg.step))?;
    let speeds = report_path(&h_path, &trajectory)?;
    let max_bloch = speeds.iter().map(|r| 2.0 * r.fs_speed).fold(0.0, f64::max);
    checks.push(Check::at_most("max Bloch speed ≤ 2‖H‖_SP", max_bloch - 2.0 * sp, 1e-10 * sp));

    Ok(BrachReport {
        input: *cfg,
        delta_e,
        delta_e_numeric: spec.delta_e,
        sp_norm_formula: sp_formula,
        sp_norm: sp,
        ratio,
        pseudo_hermiticity_residual: pt,
        max_bloch_speed: max_bloch,
        sweep,
        trajectory: Some(trajectory),
        speeds,
        checks,
    })
}
