//! Dense complex matrix primitives.
//!
//! Everything here is a thin, checked layer over `nalgebra`. Residuals are
//! Frobenius norms throughout.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Matrices whose 2-norm condition number exceeds this are treated as singular.
pub const CONDITION_CAP: f64 = 1e12;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Relative/absolute residual thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64) -> Result<Self> {
        if !(rel.is_finite() && abs.is_finite() && rel >= 0.0 && abs >= 0.0) {
            return Err(Error::InvalidTolerance { rel, abs });
        }
        Ok(Self { rel, abs })
    }

    /// `abs + rel * scale`
    #[inline]
    pub fn bound(&self, scale: f64) -> f64 {
        self.abs + self.rel * scale
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { rel: 1e-10, abs: 1e-12 }
    }
}

/// Square dense complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix{}", self.0)
    }
}

impl ComplexMatrix {
    /// Builds a matrix from `dim * dim` entries in row-major order.
    pub fn from_row_major(dim: usize, entries: &[C64]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::NotSquare { rows: 0, cols: 0 });
        }
        if entries.len() != dim * dim {
            return Err(Error::EntryCount { expected: dim * dim, found: entries.len() });
        }
        Self::from_dmatrix(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn from_rows<const N: usize>(rows: [[C64; N]; N]) -> Result<Self> {
        let flat: Vec<C64> = rows.iter().flatten().copied().collect();
        Self::from_row_major(N, &flat)
    }

    /// Real-valued convenience constructor, row-major.
    pub fn from_real_rows<const N: usize>(rows: [[f64; N]; N]) -> Result<Self> {
        let flat: Vec<C64> = rows.iter().flatten().map(|&x| c64(x, 0.0)).collect();
        Self::from_row_major(N, &flat)
    }

    pub fn from_dmatrix(m: DMatrix<C64>) -> Result<Self> {
        let (rows, cols) = m.shape();
        if rows != cols || rows == 0 {
            return Err(Error::NotSquare { rows, cols });
        }
        for j in 0..cols {
            for i in 0..rows {
                let z = m[(i, j)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(Self(m))
    }

    /// Assembles a matrix from column vectors.
    pub fn from_columns(columns: &[DVector<C64>]) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::NotSquare { rows: 0, cols: 0 });
        }
        Self::from_dmatrix(DMatrix::from_columns(columns))
    }

    pub fn identity(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        Self(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn diagonal(values: &[C64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::NotSquare { rows: 0, cols: 0 });
        }
        Self::from_dmatrix(DMatrix::from_diagonal(&DVector::from_column_slice(values)))
    }

    pub fn real_diagonal(values: &[f64]) -> Result<Self> {
        let v: Vec<C64> = values.iter().map(|&x| c64(x, 0.0)).collect();
        Self::diagonal(&v)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[(row, col)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn column(&self, k: usize) -> DVector<C64> {
        self.0.column(k).into_owned()
    }

    /// Entries in row-major order.
    pub fn row_major(&self) -> Vec<C64> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self(&self.0 * s)
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    /// Integer power by repeated multiplication (`k = 0` gives the identity).
    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::identity(self.dim());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { left: self.dim(), right: other.dim() });
        }
        Ok(())
    }

    /// Frobenius norm of `self - other`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.check_same_dim(other)?;
        Ok((&self.0 - &other.0).norm())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(self * other)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

/// Conjugate transpose.
pub fn adjoint(m: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix(m.0.adjoint())
}

/// `‖AB − BA‖_F` and whether it lies below `tol.abs + tol.rel·‖A‖_F·‖B‖_F`.
pub fn commutator_residual(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: Tolerance,
) -> Result<(f64, bool)> {
    a.check_same_dim(b)?;
    let residual = (&a.0 * &b.0 - &b.0 * &a.0).norm();
    let bound = tol.bound(a.frobenius_norm() * b.frobenius_norm());
    Ok((residual, residual <= bound))
}

pub fn hermiticity_residual(m: &ComplexMatrix) -> f64 {
    (&m.0 - m.0.adjoint()).norm()
}

pub fn is_hermitian(m: &ComplexMatrix, tol: Tolerance) -> bool {
    hermiticity_residual(m) <= tol.bound(m.frobenius_norm())
}

/// Eigenvalues (ascending) of the Hermitian part `(M + M†)/2`.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let h = (&m.0 + m.0.adjoint()) * c64(0.5, 0.0);
    let mut values: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

pub fn min_hermitian_eigenvalue(m: &ComplexMatrix) -> f64 {
    hermitian_eigenvalues(m)[0]
}

pub fn is_positive_definite(m: &ComplexMatrix, tol: Tolerance) -> Result<bool> {
    if !is_hermitian(m, tol) {
        return Err(Error::NotHermitian { residual: hermiticity_residual(m) });
    }
    Ok(min_hermitian_eigenvalue(m) > tol.abs)
}

/// Singular values in descending order.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = SVD::new(m.0.clone(), false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn smallest_singular_value(m: &ComplexMatrix) -> f64 {
    *singular_values(m).last().expect("dim >= 1")
}

/// 2-norm condition number; infinite for exactly singular input.
pub fn condition_number(m: &ComplexMatrix) -> f64 {
    let s = singular_values(m);
    let (max, min) = (s[0], s[s.len() - 1]);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

pub fn inverse(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let condition = condition_number(m);
    if !(condition <= CONDITION_CAP) {
        return Err(Error::SingularMatrix { condition });
    }
    m.0.clone()
        .try_inverse()
        .map(ComplexMatrix)
        .ok_or(Error::SingularMatrix { condition })
}

/// Eigenvalues and unit-norm right eigenvectors (as columns).
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<C64>,
    pub vectors: ComplexMatrix,
}

/// Total order used for every spectrum in the crate: ascending real part,
/// ties broken by imaginary part.
pub fn spectral_order(a: &C64, b: &C64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// General dense eigendecomposition.
///
/// Exactly Hermitian input goes through the Hermitian solver and comes back
/// with real eigenvalues and orthonormal vectors. Everything else is reduced
/// to complex Schur form `M = Z T Z†`; eigenvectors of the triangular factor
/// are obtained by back-substitution and mapped back through `Z`.
pub fn eig(m: &ComplexMatrix) -> Result<Eigen> {
    let n = m.dim();
    let (values, vectors): (Vec<C64>, Vec<DVector<C64>>) = if m.0 == m.0.adjoint() {
        let se = SymmetricEigen::new(m.0.clone());
        (
            se.eigenvalues.iter().map(|&x| c64(x, 0.0)).collect(),
            (0..n).map(|k| se.eigenvectors.column(k).into_owned()).collect(),
        )
    } else {
        let schur = Schur::try_new(m.0.clone(), f64::EPSILON, 1000 * n.max(10))
            .ok_or(Error::ConvergenceFailure)?;
        let (z, t) = schur.unpack();
        let values: Vec<C64> = (0..n).map(|k| t[(k, k)]).collect();
        let vectors = (0..n).map(|k| &z * triangular_eigenvector(&t, k)).collect();
        (values, vectors)
    };

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| spectral_order(&values[i], &values[j]));

    let mut sorted_values = Vec::with_capacity(n);
    let mut columns = Vec::with_capacity(n);
    for &k in &order {
        let v = &vectors[k];
        let norm = v.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::ConvergenceFailure);
        }
        sorted_values.push(values[k]);
        columns.push(v.unscale(norm));
    }
    let vectors = ComplexMatrix::from_columns(&columns).map_err(|_| Error::ConvergenceFailure)?;
    Ok(Eigen { values: sorted_values, vectors })
}

/// Solves `(T − t_kk) x = 0` for upper-triangular `T` with `x_k = 1` and
/// `x_j = 0` for `j > k`. Near-zero pivots are clamped to `ε·‖T‖_F`.
fn triangular_eigenvector(t: &DMatrix<C64>, k: usize) -> DVector<C64> {
    let n = t.nrows();
    let lambda = t[(k, k)];
    let small = (f64::EPSILON * t.norm()).max(f64::MIN_POSITIVE);
    let mut x = DVector::<C64>::zeros(n);
    x[k] = c64(1.0, 0.0);
    for j in (0..k).rev() {
        let mut s = C64::new(0.0, 0.0);
        for l in (j + 1)..=k {
            s += t[(j, l)] * x[l];
        }
        let mut d = t[(j, j)] - lambda;
        if d.norm() < small {
            d = c64(small, 0.0);
        }
        x[j] = -s / d;
        let xn = x[j].norm();
        if xn > 1e100 {
            x.unscale_mut(xn);
        }
    }
    x
}

/// Rotates `v` so that its largest-modulus entry is real and positive.
///
/// Entries within a relative `1e-8` of the maximum modulus count as ties and
/// the lowest index wins, so nearly-flat vectors get a reproducible phase.
pub fn fix_phase(v: &mut DVector<C64>) {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    let pivot = v
        .iter()
        .position(|z| z.norm() >= max * (1.0 - 1e-8))
        .expect("max attained");
    let z = v[pivot];
    let phase = z.conj() / z.norm();
    for e in v.iter_mut() {
        *e *= phase;
    }
    v[pivot] = c64(v[pivot].norm(), 0.0);
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn shift3() -> ComplexMatrix {
        ComplexMatrix::from_real_rows([[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]).unwrap()
    }

    fn circulant3(a: f64, b: C64) -> ComplexMatrix {
        let a = c64(a, 0.0);
        ComplexMatrix::from_rows([[a, b, b.conj()], [b.conj(), a, b], [b, b.conj(), a]]).unwrap()
    }

    #[test]
    fn rejects_bad_shapes_and_values() {
        assert!(matches!(
            ComplexMatrix::from_row_major(2, &[c64(1.0, 0.0); 3]),
            Err(Error::EntryCount { expected: 4, found: 3 })
        ));
        assert!(ComplexMatrix::from_row_major(0, &[]).is_err());
        assert!(matches!(
            ComplexMatrix::from_real_rows([[1.0, f64::NAN], [0.0, 1.0]]),
            Err(Error::NonFinite { row: 0, col: 1 })
        ));
        assert!(Tolerance::new(-1.0, 0.0).is_err());
        assert!(Tolerance::new(1e-10, f64::INFINITY).is_err());
    }

    #[test]
    fn adjoint_examples() {
        let parity = ComplexMatrix::real_diagonal(&[1.0, -1.0]).unwrap();
        assert_eq!(adjoint(&parity), parity);
        let swap = ComplexMatrix::from_real_rows([[0.0, 1.0], [1.0, 0.0]]).unwrap();
        assert_eq!(adjoint(&swap), swap);
        let p = shift3();
        let pt = adjoint(&p);
        assert_eq!(pt, ComplexMatrix::from_real_rows([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]]).unwrap());
        assert_eq!(&pt * &p, ComplexMatrix::identity(3));
        assert_eq!(inverse(&p).unwrap().max_abs_diff(&pt), 0.0);
    }

    #[test]
    fn commutator_examples() {
        let tol = Tolerance::default();
        let a = circulant3(1.0, c64(0.3, 0.4));
        assert_eq!(commutator_residual(&a, &a, tol).unwrap(), (0.0, true));

        let parity = ComplexMatrix::real_diagonal(&[1.0, -1.0]).unwrap();
        let swap = ComplexMatrix::from_real_rows([[0.0, 1.0], [1.0, 0.0]]).unwrap();
        let (r, ok) = commutator_residual(&parity, &swap, tol).unwrap();
        assert!((r - 2.0 * 2f64.sqrt()).abs() < 1e-15);
        assert!(!ok);

        let (r, ok) = commutator_residual(&a, &shift3(), tol).unwrap();
        assert!(r <= 1e-12 && ok);

        assert!(matches!(
            commutator_residual(&parity, &a, tol),
            Err(Error::DimensionMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn hermiticity_examples() {
        let tol = Tolerance::default();
        assert!(is_hermitian(&ComplexMatrix::identity(4), tol));
        assert!(!is_hermitian(&shift3(), tol));
        let p = shift3();
        assert!(is_hermitian(&(&p + &adjoint(&p)), tol));
    }

    #[test]
    fn positive_definite_examples() {
        let tol = Tolerance::default();
        assert!(is_positive_definite(&ComplexMatrix::identity(3), tol).unwrap());
        assert!(!is_positive_definite(&ComplexMatrix::real_diagonal(&[1.0, -1.0]).unwrap(), tol).unwrap());
        assert!(matches!(is_positive_definite(&shift3(), tol), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn eig_diagonal() {
        let e = eig(&ComplexMatrix::real_diagonal(&[3.0, 1.0, 2.0]).unwrap()).unwrap();
        let re: Vec<f64> = e.values.iter().map(|z| z.re).collect();
        assert_eq!(re, vec![1.0, 2.0, 3.0]);
        for (k, src) in [1usize, 2, 0].iter().enumerate() {
            assert!((e.vectors.get(*src, k).norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn eig_two_by_two_pt_model() {
        // λ² − λ + 0.16 = 0
        let h = ComplexMatrix::from_rows([[c64(1.0, 0.0), c64(0.0, 0.4)], [c64(0.0, 0.4), c64(0.0, 0.0)]])
            .unwrap();
        let e = eig(&h).unwrap();
        assert!((e.values[0] - c64(0.2, 0.0)).norm() < 1e-14);
        assert!((e.values[1] - c64(0.8, 0.0)).norm() < 1e-14);
        for k in 0..2 {
            let v = e.vectors.column(k);
            let r = (h.as_dmatrix() * &v - &v * e.values[k]).norm();
            assert!(r <= 1e-12);
            assert!((v.norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn eig_circulant_matches_closed_form() {
        let b = c64(0.3, 0.4);
        let h = circulant3(0.0, b);
        let mut expected: Vec<f64> =
            (0..3).map(|k| 2.0 * b.norm() * (b.arg() + 2.0 * PI * k as f64 / 3.0).cos()).collect();
        expected.sort_by(f64::total_cmp);
        let e = eig(&h).unwrap();
        for (got, want) in e.values.iter().zip(&expected) {
            assert!((got.re - want).abs() < 1e-12);
            assert!(got.im.abs() < 1e-12);
        }
        assert!((expected[0] + 0.9928).abs() < 1e-4);
        assert!((expected[1] - 0.3928).abs() < 1e-4);
        assert!((expected[2] - 0.6).abs() < 1e-12);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(inverse(&ComplexMatrix::identity(3)).unwrap(), ComplexMatrix::identity(3));
        let p4 = ComplexMatrix::from_real_rows([
            [0.0, 0.0, 0.0, 1.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
        ])
        .unwrap();
        let sum = &p4 + &adjoint(&p4);
        assert!(matches!(inverse(&sum), Err(Error::SingularMatrix { .. })));
    }

    #[test]
    fn fix_phase_makes_pivot_real_positive() {
        let mut v = DVector::from_vec(vec![c64(0.1, 0.2), c64(0.0, -2.0), c64(1.0, 1.0)]);
        fix_phase(&mut v);
        assert_eq!(v[1], c64(2.0, 0.0));
        assert!((v[0] - c64(0.1, 0.2) * c64(0.0, 1.0)).norm() < 1e-15);
    }
}
