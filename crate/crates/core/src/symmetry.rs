//! Scale-free residual checks for the symmetry relations a non-Hermitian
//! Hamiltonian may satisfy.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{
    adjoint, commutator_residual, hermiticity_residual, inverse, is_positive_definite,
    min_hermitian_eigenvalue, ComplexMatrix, Tolerance,
};
use crate::models::PseudoMetric;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SymmetryKind {
    PseudoHermitian,
    WeakTriplet,
    QuasiHermitian,
    PtCommutant,
}

impl SymmetryKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SymmetryKind::PseudoHermitian => "pseudo_hermitian",
            SymmetryKind::WeakTriplet => "weak_triplet",
            SymmetryKind::QuasiHermitian => "quasi_hermitian",
            SymmetryKind::PtCommutant => "pt_commutant",
        }
    }
}

impl fmt::Display for SymmetryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of one check. `holds` is exactly `residual <= threshold`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryVerdict {
    pub name: SymmetryKind,
    pub residual: f64,
    pub threshold: f64,
    pub holds: bool,
    pub detail: BTreeMap<&'static str, f64>,
    pub notes: Vec<String>,
}

pub const DEGENERATE_TRIPLET: &str = "degenerate triplet: P is self-adjoint, S = I";
pub const DEPENDENCY_VIOLATED: &str = "first and third triplet relations hold but the second does not";

impl SymmetryVerdict {
    fn new(name: SymmetryKind, residual: f64, tol: Tolerance) -> Self {
        let threshold = normalized_threshold(tol);
        Self { name, residual, threshold, holds: residual <= threshold, detail: BTreeMap::new(), notes: Vec::new() }
    }
}

/// Residuals here are already divided by operator norms.
fn normalized_threshold(tol: Tolerance) -> f64 {
    tol.abs + tol.rel
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        if num == 0.0 { 0.0 } else { f64::INFINITY }
    } else {
        num / den
    }
}

fn check_dims(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { left: a.dim(), right: b.dim() });
    }
    Ok(())
}

fn similarity_residual(h: &ComplexMatrix, p: &ComplexMatrix, pinv: &ComplexMatrix) -> f64 {
    let hdag = adjoint(h);
    ratio((&(p * h) * pinv).distance(&hdag).expect("same dim"), h.frobenius_norm())
}

/// `‖P H P⁻¹ − H†‖_F / ‖H‖_F`
pub fn pseudo_hermiticity_residual(
    h: &ComplexMatrix,
    p: &PseudoMetric,
    tol: Tolerance,
) -> Result<SymmetryVerdict> {
    check_dims(h, p.matrix())?;
    let pinv = inverse(p.matrix())?;
    let r = similarity_residual(h, p.matrix(), &pinv);
    Ok(SymmetryVerdict::new(SymmetryKind::PseudoHermitian, r, tol))
}

/// Checks `H† = P H P⁻¹`, `H† = P† H (P⁻¹)†` and `[H, P⁻¹P†] = 0` together.
pub fn weak_triplet_check(h: &ComplexMatrix, p: &PseudoMetric, tol: Tolerance) -> Result<SymmetryVerdict> {
    check_dims(h, p.matrix())?;
    let pinv = inverse(p.matrix())?;
    let pdag = adjoint(p.matrix());
    let r1 = similarity_residual(h, p.matrix(), &pinv);
    let r2 = similarity_residual(h, &pdag, &adjoint(&pinv));
    let s = &pinv * &pdag;
    let (raw, _) = commutator_residual(h, &s, tol)?;
    let r_comm = ratio(raw, h.frobenius_norm() * s.frobenius_norm());

    let mut v = SymmetryVerdict::new(SymmetryKind::WeakTriplet, r1.max(r2).max(r_comm), tol);
    v.detail.insert("r1", r1);
    v.detail.insert("r2", r2);
    v.detail.insert("r_comm", r_comm);
    if p.self_adjoint {
        v.notes.push(DEGENERATE_TRIPLET.to_string());
    }
    if r1 <= v.threshold && r_comm <= v.threshold && r2 > 10.0 * v.threshold {
        v.notes.push(DEPENDENCY_VIOLATED.to_string());
    }
    Ok(v)
}

/// `‖Θ H − H† Θ‖_F / (‖Θ‖_F ‖H‖_F)`; `Θ` must be Hermitian positive definite.
pub fn quasi_hermiticity_residual(
    h: &ComplexMatrix,
    theta: &ComplexMatrix,
    tol: Tolerance,
) -> Result<SymmetryVerdict> {
    check_dims(h, theta)?;
    match is_positive_definite(theta, tol) {
        Err(_) => return Err(Error::NotHermitian { residual: hermiticity_residual(theta) }),
        Ok(false) => {
            return Err(Error::NotPositiveDefinite { min_eigenvalue: min_hermitian_eigenvalue(theta) })
        }
        Ok(true) => {}
    }
    let lhs = theta * h;
    let rhs = &adjoint(h) * theta;
    let r = ratio(lhs.distance(&rhs)?, theta.frobenius_norm() * h.frobenius_norm());
    Ok(SymmetryVerdict::new(SymmetryKind::QuasiHermitian, r, tol))
}

/// `‖HS − SH‖_F / (‖H‖_F ‖S‖_F)`
pub fn pt_commutant_check(h: &ComplexMatrix, s: &ComplexMatrix, tol: Tolerance) -> Result<SymmetryVerdict> {
    let (raw, _) = commutator_residual(h, s, tol)?;
    let r = ratio(raw, h.frobenius_norm() * s.frobenius_norm());
    Ok(SymmetryVerdict::new(SymmetryKind::PtCommutant, r, tol))
}
