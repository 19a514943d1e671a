//! Right/left eigenvector pairs of a non-Hermitian `H` with real spectrum.
//!
//! The right vectors solve `H|E_n⟩ = E_n|E_n⟩`, the left ones solve
//! `H†|E_n⟩⟩ = E_n|E_n⟩⟩`. They are paired by eigenvalue and scaled so that
//! `⟨⟨E_m|E_n⟩ = δ_mn`. In the unrenormalized system (`κ = 1`) every right
//! vector has unit Euclidean norm with its largest entry real positive, and
//! the left vector carries the whole biorthonormalization factor.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::{adjoint, c64, eig, fix_phase, ComplexMatrix, Tolerance, C64};

/// Relative eigenvalue separation below which the spectrum counts as degenerate.
pub const DEGENERACY_THRESHOLD: f64 = 1e-8;
/// Relative distance allowed between `E_n` and the conjugate of its left partner.
pub const PAIRING_THRESHOLD: f64 = 1e-8;
pub const BIORTHONORMALITY_LIMIT: f64 = 1e-10;
pub const COMPLETENESS_LIMIT: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct BiorthogonalSystem {
    energies: Vec<f64>,
    right: ComplexMatrix,
    left: ComplexMatrix,
    kappa: Vec<C64>,
    // κ-free vectors, kept so that undoing the renormalization is exact
    base_right: ComplexMatrix,
    base_left: ComplexMatrix,
}

impl BiorthogonalSystem {
    fn unrenormalized(energies: Vec<f64>, right: ComplexMatrix, left: ComplexMatrix) -> Self {
        let n = energies.len();
        Self {
            energies,
            base_right: right.clone(),
            base_left: left.clone(),
            right,
            left,
            kappa: vec![c64(1.0, 0.0); n],
        }
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    /// Eigenvalues in ascending order.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Columns are `|E_n⟩` (κ-scaled).
    pub fn right(&self) -> &ComplexMatrix {
        &self.right
    }

    /// Columns are `|E_n⟩⟩`; the bra `⟨⟨E_n|` is the adjoint of column `n`.
    pub fn left(&self) -> &ComplexMatrix {
        &self.left
    }

    pub fn kappa(&self) -> &[C64] {
        &self.kappa
    }

    pub fn right_vector(&self, n: usize) -> DVector<C64> {
        self.right.column(n)
    }

    pub fn left_vector(&self, n: usize) -> DVector<C64> {
        self.left.column(n)
    }

    /// `|E_n⟩` with the renormalization undone.
    pub fn unit_right_vector(&self, n: usize) -> DVector<C64> {
        self.base_right.column(n)
    }

    /// `|E_n⟩⟩` with the renormalization undone.
    pub fn unit_left_vector(&self, n: usize) -> DVector<C64> {
        self.base_left.column(n)
    }

    /// `max_mn |⟨⟨E_m|E_n⟩ − δ_mn|`
    pub fn biorthonormality_residual(&self) -> f64 {
        let gram = adjoint(&self.left).as_dmatrix() * self.right.as_dmatrix();
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let delta = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((gram[(i, j)] - c64(delta, 0.0)).norm());
            }
        }
        worst
    }
}

/// `‖Σ_n |E_n⟩⟨⟨E_n| − I‖_F`
pub fn completeness_residual(sys: &BiorthogonalSystem) -> f64 {
    let sum = &sys.right * &adjoint(&sys.left);
    sum.distance(&ComplexMatrix::identity(sys.dim())).expect("same dimension")
}

fn is_scalar(h: &ComplexMatrix) -> bool {
    let n = h.dim();
    let d = h.get(0, 0);
    (0..n).all(|i| (0..n).all(|j| h.get(i, j) == if i == j { d } else { c64(0.0, 0.0) }))
}

/// Builds the unrenormalized biorthonormal eigensystem of `h`.
///
/// A scalar `h = c·I` has no distinguished eigenbasis and gets the standard
/// basis; any other spectrum must be non-degenerate.
pub fn solve_biorthogonal(h: &ComplexMatrix, tol: Tolerance) -> Result<BiorthogonalSystem> {
    let n = h.dim();
    let scale = h.frobenius_norm();

    if is_scalar(h) {
        let e = h.get(0, 0);
        if e.im.abs() > tol.bound(scale) {
            return Err(Error::ComplexSpectrum { max_imag: e.im.abs(), eigenvalues: vec![e; n] });
        }
        return Ok(BiorthogonalSystem::unrenormalized(
            vec![e.re; n],
            ComplexMatrix::identity(n),
            ComplexMatrix::identity(n),
        ));
    }

    let right = eig(h)?;
    for i in 0..n {
        for j in (i + 1)..n {
            let gap = (right.values[i] - right.values[j]).norm();
            if gap < DEGENERACY_THRESHOLD * scale {
                return Err(Error::DegenerateSpectrum { first: i, second: j, gap });
            }
        }
    }
    let max_imag = right.values.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if max_imag > tol.bound(scale) {
        return Err(Error::ComplexSpectrum { max_imag, eigenvalues: right.values.clone() });
    }

    let left = eig(&adjoint(h))?;
    let mut used = vec![false; n];
    let mut right_cols = Vec::with_capacity(n);
    let mut left_cols = Vec::with_capacity(n);
    for (i, lambda) in right.values.iter().enumerate() {
        let (j, distance) = (0..n)
            .filter(|&j| !used[j])
            .map(|j| (j, (left.values[j].conj() - lambda).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("as many left as right eigenvalues");
        if distance > PAIRING_THRESHOLD * scale {
            return Err(Error::PairingFailure { index: i, distance });
        }
        used[j] = true;

        let mut r = right.vectors.column(i);
        fix_phase(&mut r);
        let l = left.vectors.column(j);
        let overlap = l.dotc(&r);
        if !(overlap.norm() > f64::EPSILON) {
            return Err(Error::BiorthonormalityLoss { residual: 1.0 });
        }
        left_cols.push(l / overlap.conj());
        right_cols.push(r);
    }

    let sys = BiorthogonalSystem::unrenormalized(
        right.values.iter().map(|z| z.re).collect(),
        ComplexMatrix::from_columns(&right_cols)?,
        ComplexMatrix::from_columns(&left_cols)?,
    );
    let residual = sys.biorthonormality_residual();
    if residual > BIORTHONORMALITY_LIMIT {
        return Err(Error::BiorthonormalityLoss { residual });
    }
    let residual = completeness_residual(&sys);
    if residual > COMPLETENESS_LIMIT {
        return Err(Error::BiorthonormalityLoss { residual });
    }
    Ok(sys)
}

/// Rescales `|E_n⟩ → κ_n|E_n⟩` and `⟨⟨E_n| → ⟨⟨E_n|/κ_n`.
pub fn renormalize(sys: &BiorthogonalSystem, kappa: &[C64]) -> Result<BiorthogonalSystem> {
    let n = sys.dim();
    if kappa.len() != n {
        return Err(Error::KappaLength { expected: n, found: kappa.len() });
    }
    if let Some(index) = kappa
        .iter()
        .position(|k| !(k.re.is_finite() && k.im.is_finite()) || k.norm() == 0.0)
    {
        return Err(Error::ZeroKappa { index });
    }
    let total: Vec<C64> = sys.kappa.iter().zip(kappa).map(|(a, b)| a * b).collect();
    // scale the κ-free vectors by the accumulated κ rather than compounding roundoff
    let right: Vec<_> = (0..n).map(|k| sys.base_right.column(k) * total[k]).collect();
    let left: Vec<_> = (0..n).map(|k| sys.base_left.column(k) / total[k].conj()).collect();
    Ok(BiorthogonalSystem {
        energies: sys.energies.clone(),
        right: ComplexMatrix::from_columns(&right)?,
        left: ComplexMatrix::from_columns(&left)?,
        kappa: total,
        base_right: sys.base_right.clone(),
        base_left: sys.base_left.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::build_h2;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn hermitian_input_collapses_doublet() {
        let h = ComplexMatrix::from_rows([
            [c64(2.0, 0.0), c64(0.5, -0.25), c64(0.0, 0.0)],
            [c64(0.5, 0.25), c64(-1.0, 0.0), c64(0.1, 0.3)],
            [c64(0.0, 0.0), c64(0.1, -0.3), c64(0.5, 0.0)],
        ])
        .unwrap();
        let sys = solve_biorthogonal(&h, tol()).unwrap();
        assert!(sys.left().max_abs_diff(sys.right()) < 1e-12);
        for w in sys.energies().windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn h2_interior_energies() {
        let h = build_h2(1.0, 0.0, c64(0.0, 0.4));
        let sys = solve_biorthogonal(&h, tol()).unwrap();
        assert!((sys.energies()[0] - 0.2).abs() < 1e-14);
        assert!((sys.energies()[1] - 0.8).abs() < 1e-14);
        assert!(sys.biorthonormality_residual() <= 1e-12);

        // H v = 0.2 v for v ∝ (0.4i, −0.8) up to phase
        let v = sys.right_vector(0);
        let want = DVector::from_vec(vec![c64(0.0, 0.4), c64(-0.8, 0.0)]);
        let want = want.unscale(want.norm());
        assert!((v.dotc(&want).norm() - 1.0).abs() < 1e-14);
        for n in 0..2 {
            let r = sys.right_vector(n);
            let l = sys.left_vector(n);
            let e = sys.energies()[n];
            assert!((h.as_dmatrix() * &r - &r * c64(e, 0.0)).norm() < 1e-13);
            assert!((adjoint(&h).as_dmatrix() * &l - &l * c64(e, 0.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn h2_exterior_and_boundary_refused() {
        assert!(matches!(
            solve_biorthogonal(&build_h2(1.0, 0.0, c64(0.0, 0.6)), tol()),
            Err(Error::ComplexSpectrum { .. })
        ));
        assert!(matches!(
            solve_biorthogonal(&build_h2(1.0, 0.0, c64(0.0, 0.5)), tol()),
            Err(Error::DegenerateSpectrum { .. })
        ));
    }

    #[test]
    fn degenerate_h3_refused_but_scalar_accepted() {
        use crate::models::build_h3;
        assert!(matches!(
            solve_biorthogonal(&build_h3(0.0, c64(1.0, 0.0)), tol()),
            Err(Error::DegenerateSpectrum { .. })
        ));
        let sys = solve_biorthogonal(&ComplexMatrix::identity(3), tol()).unwrap();
        assert!(completeness_residual(&sys) <= 1e-14);
    }

    #[test]
    fn renormalization_preserves_structure() {
        let sys = solve_biorthogonal(&build_h2(0.3, -1.2, c64(0.2, 0.5)), tol()).unwrap();
        let same = renormalize(&sys, &[c64(1.0, 0.0); 2]).unwrap();
        assert_eq!(same, sys);

        let phases = [C64::from_polar(1.0, 0.7), C64::from_polar(1.0, -2.1)];
        let rotated = renormalize(&sys, &phases).unwrap();
        assert!((rotated.biorthonormality_residual() - sys.biorthonormality_residual()).abs() <= 1e-14);

        let scaled = renormalize(&sys, &[c64(2.0, 0.0), c64(1.0, 0.0)]).unwrap();
        let overlap = scaled.left_vector(0).dotc(&scaled.right_vector(0));
        assert!((overlap - c64(1.0, 0.0)).norm() <= 1e-12);
        assert!((completeness_residual(&scaled) - completeness_residual(&sys)).abs() <= 1e-14);
        assert_eq!(scaled.kappa()[0], c64(2.0, 0.0));

        let twice = renormalize(&scaled, &[c64(0.5, 0.0), c64(1.0, 0.0)]).unwrap();
        assert!(twice.right().max_abs_diff(sys.right()) <= 1e-12);
        assert!(twice.left().max_abs_diff(sys.left()) <= 1e-12);
    }

    #[test]
    fn renormalize_rejects_bad_kappa() {
        let sys = solve_biorthogonal(&build_h2(1.0, 0.0, c64(0.0, 0.4)), tol()).unwrap();
        assert!(matches!(
            renormalize(&sys, &[c64(1.0, 0.0), c64(0.0, 0.0)]),
            Err(Error::ZeroKappa { index: 1 })
        ));
        assert!(matches!(
            renormalize(&sys, &[c64(1.0, 0.0)]),
            Err(Error::KappaLength { expected: 2, found: 1 })
        ));
    }
}
