//! Quasiparity `Q`, charge `C` and the κ-dependent metric `Θ`.
//!
//! With `q_n = 1/⟨E_n|P|E_n⟩` (unit-norm right vectors, divided by `|κ_n|²`
//! after renormalization):
//!
//! ```text
//! Q = Σ_n |E_n⟩ q_n ⟨⟨E_n|
//! C = Σ_n |E_n⟩⟩ q_n ⟨E_n|          (κ-free vectors)
//! Θ = Σ_n |E_n⟩⟩ |κ_n|⁻² ⟨⟨E_n|     (κ-free vectors)
//! ```
//!
//! and, whenever `H† = P H P⁻¹`, `Θ = PQ = CP = Q†P† = P†C†`.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use crate::biortho::{renormalize, BiorthogonalSystem};
use crate::error::{Error, Result};
use crate::linalg::{
    adjoint, c64, hermiticity_residual, min_hermitian_eigenvalue, ComplexMatrix, Tolerance, C64,
};
use crate::models::PseudoMetric;

pub const OVERLAP_THRESHOLD: f64 = 1e-10;
pub const CONJUGACY_LIMIT: f64 = 1e-12;
pub const REALITY_THRESHOLD: f64 = 1e-10;
/// Bound on every normalized factorization residual of a valid bundle.
pub const FACTORIZATION_LIMIT: f64 = 1e-9;

pub const THETA_HERMITIAN: &str = "theta_hermitian";
pub const PQ: &str = "pq";
pub const CP: &str = "cp";
pub const QDAG_PDAG: &str = "qdag_pdag";
pub const PDAG_CDAG: &str = "pdag_cdag";

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSet {
    pub q: Vec<C64>,
    pub c: Vec<C64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricBundle {
    pub theta: ComplexMatrix,
    pub quasiparity: ComplexMatrix,
    pub charge: ComplexMatrix,
    pub coeffs: CoefficientSet,
    pub residuals: BTreeMap<&'static str, f64>,
    pub theta_min_eigenvalue: f64,
    pub valid: bool,
}

fn check_dim(sys: &BiorthogonalSystem, p: &PseudoMetric) -> Result<()> {
    if sys.dim() != p.dim() {
        return Err(Error::DimensionMismatch { left: sys.dim(), right: p.dim() });
    }
    Ok(())
}

/// `⟨E_n|M|E_n⟩` on the κ-free right vectors.
fn unit_overlaps(sys: &BiorthogonalSystem, m: &ComplexMatrix) -> Result<Vec<C64>> {
    let scale = m.frobenius_norm();
    (0..sys.dim())
        .map(|n| {
            let r = sys.unit_right_vector(n);
            let overlap = r.dotc(&(m.as_dmatrix() * &r));
            if overlap.norm() < OVERLAP_THRESHOLD * scale * r.norm_squared() {
                Err(Error::VanishingOverlap { index: n, overlap })
            } else {
                Ok(overlap)
            }
        })
        .collect()
}

fn kappa_weights(sys: &BiorthogonalSystem) -> impl Iterator<Item = f64> + '_ {
    sys.kappa().iter().map(|k| k.norm_sqr())
}

/// `q_n^(κ) = 1 / (|κ_n|² ⟨E_n|P|E_n⟩)`
pub fn quasiparity_coeffs(sys: &BiorthogonalSystem, p: &PseudoMetric) -> Result<Vec<C64>> {
    check_dim(sys, p)?;
    let overlaps = unit_overlaps(sys, p.matrix())?;
    Ok(overlaps.iter().zip(kappa_weights(sys)).map(|(o, w)| o.inv() / w).collect())
}

/// `c_n^(κ) = 1 / (|κ_n|² ⟨E_n|P†|E_n⟩)`, cross-checked against `conj(q_n)`.
pub fn charge_coeffs(sys: &BiorthogonalSystem, p: &PseudoMetric) -> Result<Vec<C64>> {
    check_dim(sys, p)?;
    let overlaps = unit_overlaps(sys, &adjoint(p.matrix()))?;
    let c: Vec<C64> = overlaps.iter().zip(kappa_weights(sys)).map(|(o, w)| o.inv() / w).collect();
    let q = quasiparity_coeffs(sys, p)?;
    let scale = q.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for (index, (cn, qn)) in c.iter().zip(&q).enumerate() {
        let deviation = (cn - qn.conj()).norm();
        if deviation > CONJUGACY_LIMIT * scale {
            return Err(Error::ConjugationMismatch { index, deviation });
        }
    }
    Ok(c)
}

/// `Σ_n a_n w_n b_n†`, accumulated in index order.
fn spectral_sum(a: &[DVector<C64>], weights: &[C64], b: &[DVector<C64>]) -> ComplexMatrix {
    let n = a[0].len();
    let mut acc = DMatrix::<C64>::zeros(n, n);
    for ((an, w), bn) in a.iter().zip(weights).zip(b) {
        acc += (an * *w) * bn.adjoint();
    }
    ComplexMatrix::from_dmatrix(acc).expect("finite spectral sum")
}

fn rights(sys: &BiorthogonalSystem) -> Vec<DVector<C64>> {
    (0..sys.dim()).map(|n| sys.right_vector(n)).collect()
}

fn lefts(sys: &BiorthogonalSystem) -> Vec<DVector<C64>> {
    (0..sys.dim()).map(|n| sys.left_vector(n)).collect()
}

fn unit_rights(sys: &BiorthogonalSystem) -> Vec<DVector<C64>> {
    (0..sys.dim()).map(|n| sys.unit_right_vector(n)).collect()
}

fn unit_lefts(sys: &BiorthogonalSystem) -> Vec<DVector<C64>> {
    (0..sys.dim()).map(|n| sys.unit_left_vector(n)).collect()
}

/// `Σ_n |E_n⟩ q_n ⟨⟨E_n|` for arbitrary coefficients.
pub fn spectral_quasiparity(sys: &BiorthogonalSystem, q: &[C64]) -> ComplexMatrix {
    spectral_sum(&rights(sys), q, &lefts(sys))
}

/// `Σ_n |E_n⟩⟩ q_n ⟨E_n|` on κ-free vectors for arbitrary coefficients.
pub fn spectral_charge(sys: &BiorthogonalSystem, q: &[C64]) -> ComplexMatrix {
    spectral_sum(&unit_lefts(sys), q, &unit_rights(sys))
}

pub fn build_quasiparity(sys: &BiorthogonalSystem, p: &PseudoMetric) -> Result<ComplexMatrix> {
    let q = quasiparity_coeffs(sys, p)?;
    Ok(spectral_quasiparity(sys, &q))
}

pub fn build_charge(sys: &BiorthogonalSystem, p: &PseudoMetric) -> Result<ComplexMatrix> {
    charge_coeffs(sys, p)?;
    let q = quasiparity_coeffs(sys, p)?;
    Ok(spectral_charge(sys, &q))
}

pub fn build_metric(sys: &BiorthogonalSystem) -> ComplexMatrix {
    let weights: Vec<C64> = kappa_weights(sys).map(|w| c64(w.recip(), 0.0)).collect();
    let lefts = unit_lefts(sys);
    spectral_sum(&lefts, &weights, &lefts)
}

/// Residuals of `Θ = PQ = CP = Q†P† = P†C†` and of `Θ = Θ†`, each divided by `‖Θ‖_F`.
pub fn verify_factorizations(
    theta: &ComplexMatrix,
    p: &ComplexMatrix,
    q: &ComplexMatrix,
    c: &ComplexMatrix,
) -> Result<BTreeMap<&'static str, f64>> {
    for m in [p, q, c] {
        if m.dim() != theta.dim() {
            return Err(Error::DimensionMismatch { left: theta.dim(), right: m.dim() });
        }
    }
    let norm = theta.frobenius_norm();
    let rel = |m: ComplexMatrix| theta.distance(&m).expect("checked") / norm;
    let pdag = adjoint(p);
    let mut out = BTreeMap::new();
    out.insert(THETA_HERMITIAN, hermiticity_residual(theta) / norm);
    out.insert(PQ, rel(p * q));
    out.insert(CP, rel(c * p));
    out.insert(QDAG_PDAG, rel(&adjoint(q) * &pdag));
    out.insert(PDAG_CDAG, rel(&pdag * &adjoint(c)));
    Ok(out)
}

/// Runs every constructor and check in one go.
pub fn build_bundle(sys: &BiorthogonalSystem, p: &PseudoMetric, tol: Tolerance) -> Result<MetricBundle> {
    let q = quasiparity_coeffs(sys, p)?;
    let c = charge_coeffs(sys, p)?;
    let theta = build_metric(sys);
    let quasiparity = spectral_quasiparity(sys, &q);
    let charge = spectral_charge(sys, &q);
    let residuals = verify_factorizations(&theta, p.matrix(), &quasiparity, &charge)?;
    let theta_min_eigenvalue = min_hermitian_eigenvalue(&theta);
    let valid = theta_min_eigenvalue > tol.abs && residuals.values().all(|&r| r <= FACTORIZATION_LIMIT);
    Ok(MetricBundle {
        theta,
        quasiparity,
        charge,
        coeffs: CoefficientSet { q, c },
        residuals,
        theta_min_eigenvalue,
        valid,
    })
}

/// Chooses `κ_n = √|q_n^(1)|` so that every renormalized `q_n` is `±1`,
/// which makes both `Q` and `C` involutions.
pub fn involutive_normalization(
    sys: &BiorthogonalSystem,
    p: &PseudoMetric,
) -> Result<(Vec<C64>, BiorthogonalSystem)> {
    check_dim(sys, p)?;
    let q1: Vec<C64> = unit_overlaps(sys, p.matrix())?.iter().map(|o| o.inv()).collect();
    let indices: Vec<usize> = q1
        .iter()
        .enumerate()
        .filter(|(_, q)| q.im.abs() > REALITY_THRESHOLD * q.norm())
        .map(|(n, _)| n)
        .collect();
    if !indices.is_empty() {
        return Err(Error::NonRealQuasiparity { indices });
    }
    let kappa: Vec<C64> = q1.iter().map(|q| c64(q.norm().sqrt(), 0.0)).collect();
    let step: Vec<C64> = kappa.iter().zip(sys.kappa()).map(|(k, current)| k / current).collect();
    let renormalized = renormalize(sys, &step)?;
    Ok((kappa, renormalized))
}
