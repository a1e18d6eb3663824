//! Reference computations that share no code with the library.
//!
//! Spectral norms come from the Hermitian eigenproblem of `M†M` (or plain
//! power iteration), kinetic scalars from an explicit orthonormal completion
//! of the state, angles from the component of one state orthogonal to the other.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

pub type C = Complex64;
pub type V = DVector<C>;
pub type M = DMatrix<C>;

pub fn traceless(h: &M) -> M {
    let n = h.nrows();
    let mu = h.trace() / C::from(n as f64);
    h - M::identity(n, n) * mu
}

/// Largest singular value as `√λ_max(M†M)`.
pub fn sp_norm(m: &M) -> f64 {
    let gram = m.adjoint() * m;
    let eig = gram.symmetric_eigenvalues();
    eig.iter().cloned().fold(0.0, f64::max).sqrt()
}

/// Singular values from the same eigenproblem, descending.
pub fn singular_values(m: &M) -> Vec<f64> {
    let gram = m.adjoint() * m;
    let mut s: Vec<f64> = gram.symmetric_eigenvalues().iter().map(|l| l.max(0.0).sqrt()).collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// Power iteration on `M†M` from a fixed start; a lower bound on `‖M‖_SP`
/// that converges to it.
pub fn sp_norm_power(m: &M, iterations: usize) -> f64 {
    let n = m.ncols();
    let gram = m.adjoint() * m;
    let mut v = V::from_fn(n, |k, _| C::new(1.0 + 0.1 * k as f64, 0.05 * k as f64));
    v /= C::from(v.norm());
    let mut lambda = 0.0;
    for _ in 0..iterations {
        let w = &gram * &v;
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        lambda = v.dotc(&w).re;
        v = w / C::from(norm);
    }
    lambda.max(0.0).sqrt()
}

pub fn hs_norm(m: &M) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `K = Σ_{j≥2} |⟨e_j|HΨ⟩|²` over an orthonormal basis with `e_1 = Ψ`.
pub fn kinetic(h: &M, psi: &V) -> f64 {
    let n = psi.len();
    let e1 = psi / C::from(psi.norm());
    let mut basis = vec![e1.clone()];
    for j in 0..n {
        let mut v = V::zeros(n);
        v[j] = C::from(1.0);
        for _ in 0..2 {
            for b in &basis {
                let p = b.dotc(&v);
                v -= b * p;
            }
        }
        let norm = v.norm();
        if norm > 1e-6 {
            basis.push(v / C::from(norm));
        }
        if basis.len() == n {
            break;
        }
    }
    let h_psi = h * e1;
    basis[1..].iter().map(|b| b.dotc(&h_psi).norm_sqr()).sum()
}

pub fn eta(h: &M, psi: &V) -> f64 {
    let t = traceless(h);
    kinetic(&t, psi).sqrt() / sp_norm(&t)
}

/// `atan2(‖b̂ − ⟨â|b̂⟩â‖, |⟨â|b̂⟩|)`, accurate for small angles where
/// `arccos` of the overlap is not.
pub fn fs_angle(a: &V, b: &V) -> f64 {
    let (a, b) = (a / C::from(a.norm()), b / C::from(b.norm()));
    let overlap = a.dotc(&b);
    (&b - &a * overlap).norm().atan2(overlap.norm())
}

pub fn bloch(psi: &V) -> [f64; 3] {
    let (a, b) = (psi[0], psi[1]);
    let n2 = a.norm_sqr() + b.norm_sqr();
    let ab = a.conj() * b;
    [2.0 * ab.re / n2, 2.0 * ab.im / n2, (a.norm_sqr() - b.norm_sqr()) / n2]
}

pub fn state_from_bloch(n: [f64; 3]) -> V {
    let theta = n[2].clamp(-1.0, 1.0).acos();
    let phi = n[1].atan2(n[0]);
    V::from_vec(vec![C::from((theta / 2.0).cos()), C::from_polar((theta / 2.0).sin(), phi)])
}

pub fn random_c<R: Rng>(rng: &mut R) -> C {
    C::new(rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0)
}

pub fn random_matrix<R: Rng>(rng: &mut R, n: usize) -> M {
    M::from_fn(n, n, |_, _| random_c(rng))
}

pub fn random_state<R: Rng>(rng: &mut R, n: usize) -> V {
    loop {
        let v = V::from_fn(n, |_, _| random_c(rng));
        if v.norm() > 1e-3 {
            return v;
        }
    }
}

pub fn random_unit3<R: Rng>(rng: &mut R) -> [f64; 3] {
    loop {
        let v = [0; 3].map(|_| rng.random::<f64>() * 2.0 - 1.0);
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-3 && n <= 1.0 {
            return v.map(|x| x / n);
        }
    }
}

pub fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub fn norm3(a: [f64; 3]) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

/// `a·σ⃗ + i b·σ⃗`, written out entry by entry.
pub fn pauli(a: [f64; 3], b: [f64; 3]) -> M {
    let z = |x: f64, y: f64| C::new(x, y);
    // σ_x = [[0,1],[1,0]], σ_y = [[0,−i],[i,0]], σ_z = diag(1,−1)
    let h00 = z(a[2], b[2]);
    let h01 = z(a[0], b[0]) + C::new(0.0, -1.0) * z(a[1], b[1]);
    let h10 = z(a[0], b[0]) + C::new(0.0, 1.0) * z(a[1], b[1]);
    M::from_row_slice(2, 2, &[h00, h01, h10, -h00])
}

pub fn great_circle(t: f64) -> V {
    V::from_vec(vec![C::from(t.cos()), C::from(t.sin())])
}
