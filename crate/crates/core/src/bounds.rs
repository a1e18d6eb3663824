//! Per-instant speed bounds and the efficiency figure of merit.
//!
//! Every quantity is evaluated on the traceless part `𝓗 = H − tr(H)/N`, which
//! generates the same projective motion as `H`. The chain checked here is
//!
//! ```text
//! √K ≤ ‖𝓗‖_SP ≤ ‖𝓗‖_HS ≤ √rank(𝓗)·‖𝓗‖_SP
//! ```
//!
//! and the efficiency is `η = √K / ‖𝓗‖_SP`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{bloch_vector, kinetic_scalar, SampledPath};
use crate::linalg::{
    anti_hermitian_residual, eigenvalues_2x2, ensure_dim, ensure_square, hs_norm, spectral_norm,
    trace_split, CMatrix, CVector,
};
use crate::propagate::HamiltonianPath;

/// Relative threshold on `‖H − H†‖_HS / ‖H‖_HS` for treating a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

pub const CSV_HEADER: &str = "t,k,fs_speed,sp_norm,hs_norm,eta,state_norm,nx,ny,nz,fleming";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeedReportRow {
    pub t: f64,
    pub k: f64,
    pub fs_speed: f64,
    pub sp_norm: f64,
    pub hs_norm: f64,
    /// `None` when the traceless Hamiltonian vanishes.
    pub eta: Option<f64>,
    pub state_norm: f64,
    pub bloch: Option<[f64; 3]>,
    pub fleming_bound: Option<f64>,
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

impl SpeedReportRow {
    /// One CSV record in [`CSV_HEADER`] order; absent fields are left empty.
    pub fn to_csv_line(&self) -> String {
        let [nx, ny, nz] = match self.bloch {
            Some(n) => n.map(Some),
            None => [None; 3],
        };
        [
            self.t.to_string(),
            self.k.to_string(),
            self.fs_speed.to_string(),
            self.sp_norm.to_string(),
            self.hs_norm.to_string(),
            opt(self.eta),
            self.state_norm.to_string(),
            opt(nx),
            opt(ny),
            opt(nz),
            opt(self.fleming_bound),
        ]
        .join(",")
    }
}

pub fn bound_report(h: &CMatrix, psi: &CVector, t: f64) -> Result<SpeedReportRow> {
    let n = ensure_square(h)?;
    ensure_dim(n, psi.len())?;
    let (traceless, _) = trace_split(h);
    let k = kinetic_scalar(&traceless, psi)?;
    let sp = spectral_norm(&traceless)?;
    let hs = hs_norm(&traceless);
    let bloch = if n == 2 { Some(bloch_vector(psi)?.0) } else { None };
    let fleming = if n == 2 && anti_hermitian_residual(&traceless) <= HERMITIAN_TOL * hs {
        Some(eigenvalues_2x2(&traceless)?.delta_e.norm())
    } else {
        None
    };
    Ok(SpeedReportRow {
        t,
        k: k.value(),
        fs_speed: k.speed(),
        sp_norm: sp,
        hs_norm: hs,
        eta: eta_from(k.speed(), sp),
        state_norm: psi.norm(),
        bloch,
        fleming_bound: fleming,
    })
}

fn eta_from(speed: f64, sp: f64) -> Option<f64> {
    // √K ≤ ‖𝓗‖_SP holds exactly; the clamp only absorbs last-bit rounding.
    (sp > 0.0).then(|| (speed / sp).min(1.0))
}

/// `η = √K / ‖𝓗‖_SP`, or `None` when `𝓗 = 0`.
pub fn efficiency(h: &CMatrix, psi: &CVector) -> Result<Option<f64>> {
    let n = ensure_square(h)?;
    ensure_dim(n, psi.len())?;
    let (traceless, _) = trace_split(h);
    let speed = kinetic_scalar(&traceless, psi)?.speed();
    Ok(eta_from(speed, spectral_norm(&traceless)?))
}

/// `|ΔE|` of the traceless part of a Hermitian two-level Hamiltonian.
///
/// The Bloch speed of any state under `h` is at most this value.
pub fn fleming_bound(h: &CMatrix) -> Result<f64> {
    let n = ensure_square(h)?;
    ensure_dim(2, n)?;
    let (traceless, _) = trace_split(h);
    let residual = anti_hermitian_residual(&traceless);
    let scale = hs_norm(h);
    if residual > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian { residual: residual / scale });
    }
    Ok(eigenvalues_2x2(&traceless)?.delta_e.norm())
}

/// One [`SpeedReportRow`] per sample of `psi_path`, with `H` taken from the
/// Hamiltonian path at the same time.
pub fn report_path(h_path: &HamiltonianPath, psi_path: &SampledPath) -> Result<Vec<SpeedReportRow>> {
    ensure_dim(h_path.dim(), psi_path.dim())?;
    if let HamiltonianPath::Sampled(s) = h_path {
        if !psi_path.same_grid(s.times()) {
            return Err(Error::GridMismatch(
                "Hamiltonian and state samples are on different grids".into(),
            ));
        }
        return psi_path
            .times()
            .iter()
            .zip(psi_path.states())
            .zip(s.matrices())
            .map(|((&t, psi), h)| bound_report(h, psi, t))
            .collect();
    }
    psi_path
        .times()
        .iter()
        .zip(psi_path.states())
        .map(|(&t, psi)| bound_report(&h_path.at(t), psi, t))
        .collect()
}
