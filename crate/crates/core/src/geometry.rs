//! Geometry of the projective Hilbert space.
//!
//! States that differ by a nonzero complex factor are the same point of the
//! projective space, so every quantity here is invariant under `ψ → c·ψ`.
//! The Fubini-Study distance between two rays is the angle
//! `Θ = arccos(|⟨a|b⟩| / ‖a‖‖b‖)`, and the squared speed at which a state
//! moves under `i∂ₜψ = Hψ` is the kinetic scalar
//!
//! ```text
//! K = ⟨Ψ|H†H|Ψ⟩ − ⟨Ψ|H†|Ψ⟩⟨Ψ|H|Ψ⟩,   Ψ = ψ/‖ψ‖.
//! ```
//!
//! For a Hermitian `H` this is the energy variance. For two-level systems the
//! Bloch vector moves at exactly twice the Fubini-Study speed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ensure_dim, ensure_square, hs_norm, inner, CMatrix, CVector, C64};

/// Norms below this are treated as zero vectors.
pub const ZERO_NORM: f64 = 1e-300;

/// Relative guard band (in units of `‖H‖_HS²`) under which a negative kinetic
/// scalar is accepted as round-off and clamped to zero.
const K_GUARD: f64 = 1e-13;

/// Fubini-Study angle between two rays, in `[0, π/2]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct FsAngle(f64);

impl FsAngle {
    pub fn radians(self) -> f64 {
        self.0
    }
}

/// Squared Fubini-Study speed.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct KineticScalar(f64);

impl KineticScalar {
    pub fn value(self) -> f64 {
        self.0
    }

    /// `√K`, the Fubini-Study speed `|ds_FS/dt|`.
    pub fn speed(self) -> f64 {
        self.0.sqrt()
    }
}

/// Unit vector on the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector(pub [f64; 3]);

impl BlochVector {
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn distance(&self, other: &BlochVector) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

/// Return `ψ/‖ψ‖` together with `‖ψ‖`.
pub fn normalized(psi: &CVector) -> Result<(CVector, f64)> {
    let n = psi.norm();
    if !(n >= ZERO_NORM) {
        return Err(Error::ZeroVector);
    }
    Ok((psi / C64::from(n), n))
}

pub fn fs_angle(a: &CVector, b: &CVector) -> Result<FsAngle> {
    ensure_dim(a.len(), b.len())?;
    let (na, nb) = (a.norm(), b.norm());
    if !(na >= ZERO_NORM && nb >= ZERO_NORM) {
        return Err(Error::ZeroVector);
    }
    let (ua, ub) = (a / C64::from(na), b / C64::from(nb));
    let ov = inner(&ua, &ub);
    // Align the phases and measure the chord: ‖b̂ − e^{iφ}â‖ = 2 sin(Θ/2).
    // Unlike arccos of the overlap this stays accurate near Θ = 0.
    let phase = if ov.norm() > 0.0 { ov / ov.norm() } else { C64::from(1.0) };
    let chord_b = (&ub - &ua * phase).norm();
    let chord_a = (&ua - &ub * phase.conj()).norm();
    let half = (0.25 * (chord_a + chord_b)).clamp(0.0, 1.0);
    Ok(FsAngle((2.0 * half.asin()).min(std::f64::consts::FRAC_PI_2)))
}

/// Kinetic scalar of `psi` under `h`.
///
/// Evaluated as the squared norm of the component of `HΨ` orthogonal to `Ψ`,
/// which equals the defining expression and is nonnegative up to rounding.
pub fn kinetic_scalar(h: &CMatrix, psi: &CVector) -> Result<KineticScalar> {
    let n = ensure_square(h)?;
    ensure_dim(n, psi.len())?;
    let (unit, _) = normalized(psi)?;
    let h_psi = h * &unit;
    let mean = inner(&unit, &h_psi);
    let orth = &h_psi - &unit * mean;
    let k = orth.norm_squared();
    if k < 0.0 {
        let floor = -K_GUARD * hs_norm(h).powi(2);
        if k < floor {
            return Err(Error::Invariant(format!("negative kinetic scalar {k:e}")));
        }
        return Ok(KineticScalar(0.0));
    }
    Ok(KineticScalar(k))
}

/// `√K`.
pub fn fs_speed(h: &CMatrix, psi: &CVector) -> Result<f64> {
    Ok(kinetic_scalar(h, psi)?.speed())
}

/// `n̂ = ⟨Ψ|σ⃗|Ψ⟩` for a two-level state.
pub fn bloch_vector(psi: &CVector) -> Result<BlochVector> {
    ensure_dim(2, psi.len())?;
    let (unit, _) = normalized(psi)?;
    let (a, b) = (unit[0], unit[1]);
    let cross = a.conj() * b;
    Ok(BlochVector([
        2.0 * cross.re,
        2.0 * cross.im,
        a.norm_sqr() - b.norm_sqr(),
    ]))
}

/// Angular speed of the Bloch vector, `|dn̂/dt| = 2√K`.
pub fn bloch_speed(h: &CMatrix, psi: &CVector) -> Result<f64> {
    ensure_dim(2, psi.len())?;
    Ok(2.0 * fs_speed(h, psi)?)
}

/// States sampled on a uniform time grid, optionally with their time
/// derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPath {
    times: Vec<f64>,
    states: Vec<CVector>,
    derivatives: Option<Vec<CVector>>,
}

pub(crate) fn check_uniform_grid(times: &[f64]) -> Result<()> {
    if times.len() < 2 {
        return Ok(());
    }
    let h = times[1] - times[0];
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::NonuniformGrid { index: 1 });
    }
    for (k, w) in times.windows(2).enumerate() {
        let step = w[1] - w[0];
        let slack = 1e-12 * h + 4.0 * f64::EPSILON * w[1].abs().max(w[0].abs());
        if !((step - h).abs() <= slack) {
            return Err(Error::NonuniformGrid { index: k + 1 });
        }
    }
    Ok(())
}

impl SampledPath {
    pub fn new(times: Vec<f64>, states: Vec<CVector>) -> Result<Self> {
        Self::build(times, states, None)
    }

    pub fn with_derivatives(
        times: Vec<f64>,
        states: Vec<CVector>,
        derivatives: Vec<CVector>,
    ) -> Result<Self> {
        Self::build(times, states, Some(derivatives))
    }

    fn build(times: Vec<f64>, states: Vec<CVector>, derivatives: Option<Vec<CVector>>) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::TooFewSamples { needed: 1, found: 0 });
        }
        if times.len() != states.len() {
            return Err(Error::GridMismatch(format!(
                "{} times but {} states",
                times.len(),
                states.len()
            )));
        }
        if times.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidInput("non-finite sample time".into()));
        }
        check_uniform_grid(&times)?;
        let dim = states[0].len();
        if dim == 0 {
            return Err(Error::InvalidInput("empty state vector".into()));
        }
        for s in states.iter().chain(derivatives.iter().flatten()) {
            ensure_dim(dim, s.len())?;
            if !crate::linalg::is_finite_vector(s) {
                return Err(Error::InvalidInput("non-finite state entry".into()));
            }
        }
        if let Some(d) = &derivatives {
            if d.len() != times.len() {
                return Err(Error::GridMismatch(format!(
                    "{} times but {} derivatives",
                    times.len(),
                    d.len()
                )));
            }
        }
        Ok(Self { times, states, derivatives })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].len()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[CVector] {
        &self.states
    }

    pub fn derivatives(&self) -> Option<&[CVector]> {
        self.derivatives.as_deref()
    }

    /// Grid spacing, or `None` for a single sample.
    pub fn spacing(&self) -> Option<f64> {
        (self.times.len() >= 2).then(|| self.times[1] - self.times[0])
    }

    pub fn duration(&self) -> f64 {
        self.times[self.times.len() - 1] - self.times[0]
    }

    /// True when `other` has the same grid within rounding.
    pub fn same_grid(&self, other: &[f64]) -> bool {
        same_grid(&self.times, other)
    }

    pub fn into_parts(self) -> (Vec<f64>, Vec<CVector>, Option<Vec<CVector>>) {
        (self.times, self.states, self.derivatives)
    }
}

pub(crate) fn same_grid(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| {
            (x - y).abs() <= 1e-9 * (1.0 + x.abs().max(y.abs()))
        })
}

/// Fill in time derivatives by second-order finite differences.
///
/// Central differences in the interior, one-sided three-point stencils at
/// the two endpoints. Exact for polynomials of degree two.
pub fn differentiate_path(path: &SampledPath) -> Result<SampledPath> {
    let n = path.len();
    if n < 3 {
        return Err(Error::TooFewSamples { needed: 3, found: n });
    }
    let h = path.spacing().expect("at least three samples");
    let s = &path.states;
    let inv = C64::from(1.0 / (2.0 * h));
    let mut d = Vec::with_capacity(n);
    // −3ψ₀ + 4ψ₁ − ψ₂, grouped so that constant paths give exact zeros
    d.push(((&s[1] - &s[0]) * C64::from(4.0) - (&s[2] - &s[0])) * inv);
    for k in 1..n - 1 {
        d.push((&s[k + 1] - &s[k - 1]) * inv);
    }
    d.push(((&s[n - 1] - &s[n - 2]) * C64::from(4.0) - (&s[n - 1] - &s[n - 3])) * inv);
    Ok(SampledPath {
        times: path.times.clone(),
        states: path.states.clone(),
        derivatives: Some(d),
    })
}
