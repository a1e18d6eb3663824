//! Pass/fail records, and the seeded invariant suite behind `effham check`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{bound_report, efficiency};
use crate::error::Result;
use crate::geometry::{fs_angle, kinetic_scalar};
use crate::linalg::{
    adjoint, eigenvalues_2x2, hs_norm, identity, max_abs_entry, numerical_rank, singular_values,
    spectral_norm, trace_split, CMatrix, CVector, C64, DEFAULT_RANK_TOL,
};
use crate::propagate::{phs_distance, propagate, PropagationOptions};
use crate::scenarios::{self, BrachistochroneConfig, Figure1Config, PauliConfig};
use crate::synthesis::{ep_generator, gauge_fix, phase_perturb, synthesize, GParameter};
use crate::trajectory::{sample, sample_finite_difference, GreatCircle};

pub const DEFAULT_SEED: u64 = 20_130_611;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One named check: a measured value compared with a limit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub value: f64,
    pub limit: f64,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, value: f64, limit: f64) -> Self {
        let status = if passed { Status::Pass } else { Status::Fail };
        Self { name: name.into(), status, value, limit }
    }

    /// Passes when `value ≤ limit` (NaN fails).
    pub fn at_most(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self::new(name, value <= limit, value, limit)
    }

    /// Passes when `value ≥ limit` (NaN fails).
    pub fn at_least(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self::new(name, value >= limit, value, limit)
    }

    /// Boolean check; value and limit are `1` and `0` for pass and fail.
    pub fn new_flag(name: impl Into<String>, passed: bool) -> Self {
        Self::new(name, passed, if passed { 1.0 } else { 0.0 }, 1.0)
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(Check::passed)
}

/// Random complex number uniform in the unit disk.
pub fn random_disk<R: Rng>(rng: &mut R) -> C64 {
    C64::from_polar(rng.random::<f64>().sqrt(), 2.0 * PI * rng.random::<f64>())
}

pub fn random_matrix<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| random_disk(rng))
}

pub fn random_state<R: Rng>(rng: &mut R, n: usize) -> CVector {
    loop {
        let v = CVector::from_fn(n, |_, _| random_disk(rng));
        if v.norm() > 1e-3 {
            return v;
        }
    }
}

fn rel_excess(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs) / rhs.abs().max(f64::MIN_POSITIVE)
}

/// Worst relative violations of the norm chain over random `(H, ψ)`.
fn norm_chain(rng: &mut ChaCha8Rng, samples: usize) -> Result<Vec<Check>> {
    let mut worst = [f64::NEG_INFINITY; 4];
    let mut worst_sv = 0.0_f64;
    let mut worst_adj = 0.0_f64;
    for i in 0..samples {
        let n = 2 + i % 5;
        let (h, _) = trace_split(&random_matrix(rng, n));
        let psi = random_state(rng, n);
        let speed = kinetic_scalar(&h, &psi)?.speed();
        let sv = singular_values(&h)?;
        let sp = sv[0];
        let hs = hs_norm(&h);
        let rank = numerical_rank(&h, DEFAULT_RANK_TOL)? as f64;
        let maxe = max_abs_entry(&h);
        worst[0] = worst[0].max(rel_excess(speed, sp));
        worst[1] = worst[1].max(rel_excess(sp, hs));
        worst[2] = worst[2].max(rel_excess(hs, rank.sqrt() * sp));
        worst[3] = worst[3].max(rel_excess(maxe, sp)).max(rel_excess(sp, n as f64 * maxe));
        let sum_sq: f64 = sv.iter().map(|s| s * s).sum();
        worst_sv = worst_sv.max((sum_sq - hs * hs).abs() / (hs * hs));
        worst_adj = worst_adj.max((spectral_norm(&adjoint(&h))? - sp).abs() / sp);
    }
    Ok(vec![
        Check::at_most("√K ≤ ‖𝓗‖_SP", worst[0], 1e-10),
        Check::at_most("‖𝓗‖_SP ≤ ‖𝓗‖_HS", worst[1], 1e-10),
        Check::at_most("‖𝓗‖_HS ≤ √rank·‖𝓗‖_SP", worst[2], 1e-10),
        Check::at_most("max|Hᵢⱼ| ≤ ‖H‖_SP ≤ N·max|Hᵢⱼ|", worst[3], 1e-10),
        Check::at_most("Σσ² = ‖H‖_HS²", worst_sv, 1e-11),
        Check::at_most("‖H†‖_SP = ‖H‖_SP", worst_adj, 1e-12),
    ])
}

fn invariances(rng: &mut ChaCha8Rng, samples: usize) -> Result<Vec<Check>> {
    let (mut scale, mut shift, mut herm, mut fleming, mut det) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    for i in 0..samples {
        let n = 2 + i % 4;
        let h = random_matrix(rng, n);
        let psi = random_state(rng, n);
        let c = random_disk(rng) + C64::from(0.1);
        let mu = random_disk(rng) * 3.0;
        let k = kinetic_scalar(&h, &psi)?.value();
        scale = scale.max((kinetic_scalar(&h, &(&psi * c))?.value() - k).abs() / k);
        let shifted = &h + identity(n) * mu;
        shift = shift.max((kinetic_scalar(&shifted, &psi)?.value() - k).abs() / k);

        let herm_h = (&h + adjoint(&h)) * C64::from(0.5);
        let unit = &psi / C64::from(psi.norm());
        let h2 = crate::linalg::inner(&unit, &(&herm_h * &herm_h * &unit)).re;
        let h1 = crate::linalg::inner(&unit, &(&herm_h * &unit)).re;
        let variance = h2 - h1 * h1;
        herm = herm.max((kinetic_scalar(&herm_h, &psi)?.value() - variance).abs() / variance.abs().max(1e-300));

        let m2 = random_matrix(rng, 2);
        let spec = eigenvalues_2x2(&m2)?;
        for r in [spec.e_plus, spec.e_minus] {
            let shifted = &m2 - identity(2) * r;
            let d = shifted[(0, 0)] * shifted[(1, 1)] - shifted[(0, 1)] * shifted[(1, 0)];
            det = det.max(d.norm() / (1.0 + hs_norm(&m2).powi(2)));
        }

        let (h2x2, _) = trace_split(&random_matrix(rng, 2));
        let h2x2 = (&h2x2 + adjoint(&h2x2)) * C64::from(0.5);
        let psi2 = random_state(rng, 2);
        let bloch = 2.0 * kinetic_scalar(&h2x2, &psi2)?.speed();
        let bound = crate::bounds::fleming_bound(&h2x2)?;
        fleming = fleming.max(rel_excess(bloch, bound));
    }
    Ok(vec![
        Check::at_most("K(H, cψ) = K(H, ψ)", scale, 1e-12),
        Check::at_most("K(H + μI, ψ) = K(H, ψ)", shift, 1e-11),
        Check::at_most("Hermitian K = energy variance", herm, 1e-12),
        Check::at_most("det(M − E±) = 0", det, 1e-11),
        Check::at_most("Fleming: 2√K ≤ |ΔE|", fleming, 1e-11),
    ])
}

fn synthesis_family() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let analytic = gauge_fix(&sample(&GreatCircle, 0.0, 3.0, 1e-3)?)?;
    let numeric = gauge_fix(&sample_finite_difference(&GreatCircle, 0.0, 3.0, 1e-3)?)?;
    let gs = [
        C64::from(0.0),
        C64::from(0.5),
        C64::from(-0.5),
        C64::from(1.0),
        C64::from(-1.0),
        C64::new(0.0, 0.7),
        C64::new(0.0, -0.7),
        C64::from(2.0),
    ];
    for (label, gauge, tol) in [("analytic", &analytic, 1e-8), ("finite-difference", &numeric, 1e-4)] {
        let mut worst = 0.0_f64;
        for g in gs {
            let expect = 1.0 / g.norm().max(1.0);
            let r = synthesize(gauge, &GParameter::Constant(g))?;
            for (h, m) in r.hamiltonians().iter().zip(gauge.states()).skip(1).take(r.len() - 2) {
                let eta = efficiency(h, m)?.unwrap_or(f64::NAN);
                worst = worst.max((eta - expect).abs());
            }
        }
        checks.push(Check::at_most(format!("η = 1/max(1,|g|), {label} derivatives"), worst, tol));
    }

    let ep = ep_generator(&numeric)?;
    let rank_ok = ep
        .hamiltonians()
        .iter()
        .map(|h| numerical_rank(h, DEFAULT_RANK_TOL))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|r| r == 1);
    checks.push(Check::new("EP generator has rank one", rank_ok, 1.0, 1.0));

    let g1 = synthesize(&numeric, &GParameter::real(1.0))?;
    let worst = g1
        .hamiltonians()
        .iter()
        .map(|h| hs_norm(&(h - crate::linalg::sigma_y())))
        .fold(0.0, f64::max);
    checks.push(Check::at_most("g = 1 on the great circle is σ_y", worst, 1e-6));

    let perturbed = phase_perturb(&g1, &vec![C64::from(1.0); g1.len()])?;
    let mut worst_eta = 0.0_f64;
    for (&t, m) in g1.times().iter().zip(numeric.states()) {
        let row = bound_report(&perturbed.at(t), m, t)?;
        worst_eta = worst_eta.max(row.eta.unwrap_or(f64::NAN));
    }
    checks.push(Check::at_most("phase drive caps η at 1/√2", worst_eta, 0.5f64.sqrt() + 1e-6));
    Ok(checks)
}

fn propagation() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let gauge = gauge_fix(&sample(&GreatCircle, 0.0, 3.0, 1e-3)?)?;
    let fine = scenarios::refined_gauge(3.0, 1e-3)?;
    for g in [1.0, -0.8, 0.0] {
        let r = synthesize(&fine, &GParameter::real(g))?;
        let run = propagate(
            &r.hamiltonian_path(),
            &gauge.states()[0],
            0.0,
            3.0,
            &scenarios::refined_options(1e-3),
        )?;
        checks.push(Check::at_most(
            format!("designed state follows m(t), g = {g}"),
            phs_distance(&run, gauge.path())?,
            1e-6,
        ));
        let drift = run.states().iter().map(|s| (s.norm() - 1.0).abs()).fold(0.0, f64::max);
        checks.push(Check::at_most(format!("designed state keeps unit norm, g = {g}"), drift, 1e-6));
    }
    let sigma = crate::propagate::HamiltonianPath::constant(crate::linalg::sigma_y());
    let up = crate::linalg::cvec(&[C64::from(1.0), C64::from(0.0)]);
    let run = propagate(&sigma, &up, 0.0, 10.0, &PropagationOptions::with_step(1e-3))?;
    let drift = run.states().iter().map(|s| (s.norm() - 1.0).abs()).fold(0.0, f64::max);
    checks.push(Check::at_most("Hermitian evolution conserves the norm", drift, 1e-8));
    let end = &run.states()[run.len() - 1];
    let exact = crate::linalg::cvec(&[C64::from(10f64.cos()), C64::from(10f64.sin())]);
    checks.push(Check::at_most("σ_y rotation matches cos/sin", fs_angle(end, &exact)?.radians(), 1e-8));
    Ok(checks)
}

fn scenario_checks() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    fn prefix(name: &'static str, list: Vec<Check>) -> impl Iterator<Item = Check> {
        list.into_iter().map(move |mut c| {
            c.name = format!("{name}: {}", c.name);
            c
        })
    }
    checks.extend(prefix("figure1", scenarios::run_figure1(&Figure1Config::default())?.checks));
    checks.extend(prefix(
        "optical",
        scenarios::run_optical(&scenarios::OpticalConfig::linear_ramp())?.checks,
    ));
    checks.extend(prefix(
        "pauli",
        scenarios::run_pauli(&PauliConfig { alpha: [1.0, 0.0, 0.0], beta: [0.0, 1.0, 0.0] })?.checks,
    ));
    checks.extend(prefix(
        "brach",
        scenarios::run_brachistochrone(&BrachistochroneConfig::canonical(1.0, 0.5))?.checks,
    ));
    Ok(checks)
}

/// Run every invariant with a fixed seed.
pub fn run_invariant_suite(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = norm_chain(&mut rng, 2000)?;
    checks.extend(invariances(&mut rng, 1000)?);
    checks.extend(synthesis_family()?);
    checks.extend(propagation()?);
    checks.extend(scenario_checks()?);
    Ok(checks)
}
