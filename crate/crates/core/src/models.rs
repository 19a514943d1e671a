//! Concrete Hamiltonians and pseudo-metrics.

use crate::error::{Error, Result};
use crate::linalg::{
    adjoint, c64, hermiticity_residual, inverse, singular_values, ComplexMatrix, Tolerance, C64,
    CONDITION_CAP,
};

/// An invertible-or-not operator `P` used in `H† = P H P⁻¹`, with its
/// structural properties computed once at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoMetric {
    matrix: ComplexMatrix,
    pub self_adjoint: bool,
    pub unitary: bool,
    pub involutive: bool,
    pub invertible: bool,
    pub smallest_singular_value: f64,
}

impl PseudoMetric {
    pub fn new(matrix: ComplexMatrix) -> Self {
        let tol = Tolerance::default();
        let n = matrix.dim();
        let id = ComplexMatrix::identity(n);
        let id_norm = (n as f64).sqrt();
        let scale = matrix.frobenius_norm();
        let self_adjoint = hermiticity_residual(&matrix) <= tol.bound(scale);
        let pdag = adjoint(&matrix);
        let unitary = (&pdag * &matrix).distance(&id).unwrap() <= tol.bound(id_norm.max(scale * scale));
        let involutive = (&matrix * &matrix).distance(&id).unwrap() <= tol.bound(id_norm.max(scale * scale));
        let sv = singular_values(&matrix);
        let smallest_singular_value = sv[sv.len() - 1];
        let invertible = smallest_singular_value > 0.0 && sv[0] / smallest_singular_value <= CONDITION_CAP;
        Self { matrix, self_adjoint, unitary, involutive, invertible, smallest_singular_value }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn adjoint(&self) -> PseudoMetric {
        PseudoMetric::new(adjoint(&self.matrix))
    }

    pub fn inverse(&self) -> Result<ComplexMatrix> {
        inverse(&self.matrix)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainTag {
    Interior,
    Boundary,
    Exterior,
}

impl DomainTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            DomainTag::Interior => "interior",
            DomainTag::Boundary => "boundary",
            DomainTag::Exterior => "exterior",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainClass {
    pub tag: DomainTag,
    /// `(a − d)² − 4|b|²`
    pub discriminant: f64,
}

/// Two-level PT-symmetric Hamiltonian `[[a, b], [−b*, d]]`.
pub fn build_h2(a: f64, d: f64, b: C64) -> ComplexMatrix {
    ComplexMatrix::from_rows([[c64(a, 0.0), b], [-b.conj(), c64(d, 0.0)]])
        .expect("finite parameters")
}

pub fn h2_discriminant(a: f64, d: f64, b: C64) -> f64 {
    (a - d) * (a - d) - 4.0 * b.norm_sqr()
}

/// Width of the band around `∂D` that is classified as the boundary itself.
pub fn default_boundary_band(a: f64, d: f64, b: C64) -> f64 {
    let s = a.abs() + d.abs() + b.norm();
    1e-9 * s * s
}

pub fn classify_h2(a: f64, d: f64, b: C64, boundary_band: f64) -> DomainClass {
    let discriminant = h2_discriminant(a, d, b);
    let tag = if discriminant > boundary_band {
        DomainTag::Interior
    } else if discriminant < -boundary_band {
        DomainTag::Exterior
    } else {
        DomainTag::Boundary
    };
    DomainClass { tag, discriminant }
}

/// `diag(1, −1)`
pub fn parity2() -> PseudoMetric {
    PseudoMetric::new(ComplexMatrix::real_diagonal(&[1.0, -1.0]).unwrap())
}

/// `[[0, 1], [1, 0]]`
pub fn swap2() -> PseudoMetric {
    PseudoMetric::new(ComplexMatrix::from_real_rows([[0.0, 1.0], [1.0, 0.0]]).unwrap())
}

/// Cyclic shift on `n` sites: ones on the sub-diagonal and in the top-right
/// corner, so that `P e_i = e_{i+1 mod n}`.
pub fn cyclic_p(n: usize) -> Result<PseudoMetric> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("cyclic pseudo-metric needs n >= 2, got {n}")));
    }
    let mut entries = vec![c64(0.0, 0.0); n * n];
    entries[n - 1] = c64(1.0, 0.0);
    for i in 1..n {
        entries[i * n + (i - 1)] = c64(1.0, 0.0);
    }
    Ok(PseudoMetric::new(ComplexMatrix::from_row_major(n, &entries)?))
}

/// Three-level circulant `[[a, b, b*], [b*, a, b], [b, b*, a]]`.
pub fn build_h3(a: f64, b: C64) -> ComplexMatrix {
    let a = c64(a, 0.0);
    let bc = b.conj();
    ComplexMatrix::from_rows([[a, b, bc], [bc, a, b], [b, bc, a]]).expect("finite parameters")
}

/// `P + P†`; may be singular.
pub fn hermitian_sum(p: &PseudoMetric) -> PseudoMetric {
    PseudoMetric::new(p.matrix() + &adjoint(p.matrix()))
}

/// `i [P e^{iθ} − P† e^{−iθ}]`, Hermitian for every θ.
pub fn hermitian_rotation(p: &PseudoMetric, theta: f64) -> PseudoMetric {
    let phase = C64::from_polar(1.0, theta);
    let i = c64(0.0, 1.0);
    let m = &p.matrix().scale(phase) - &adjoint(p.matrix()).scale(phase.conj());
    PseudoMetric::new(m.scale(i))
}
