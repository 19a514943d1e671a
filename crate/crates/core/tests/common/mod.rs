//! Oracles and model generators shared by the integration suites.
//!
//! The naive builders below index raw vectors entry by entry and never call
//! into `cryptoherm::metric`, so they stay independent of the spectral-sum
//! code they check.

#![allow(dead_code)]

use cryptoherm::biortho::BiorthogonalSystem;
use cryptoherm::linalg::{adjoint, c64, inverse, ComplexMatrix, C64};
use cryptoherm::models::{build_h2, build_h3, h2_discriminant, PseudoMetric};
use rand::Rng;

fn entrywise(n: usize, f: impl Fn(usize, usize) -> C64) -> ComplexMatrix {
    let mut data = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            data.push(f(i, j));
        }
    }
    ComplexMatrix::from_row_major(n, &data).unwrap()
}

/// `Θ_ij = Σ_n l_n[i] conj(l_n[j]) / |κ_n|²` on κ-free left vectors.
pub fn naive_theta(sys: &BiorthogonalSystem) -> ComplexMatrix {
    let n = sys.dim();
    let l: Vec<Vec<C64>> = (0..n).map(|k| sys.unit_left_vector(k).iter().copied().collect()).collect();
    entrywise(n, |i, j| {
        let mut acc = c64(0.0, 0.0);
        for k in 0..n {
            acc += l[k][i] * l[k][j].conj() / sys.kappa()[k].norm_sqr();
        }
        acc
    })
}

/// `1/⟨E_n|P|E_n⟩` by explicit double loop over κ-free right vectors, divided by `|κ_n|²`.
pub fn naive_q(sys: &BiorthogonalSystem, p: &ComplexMatrix) -> Vec<C64> {
    let n = sys.dim();
    (0..n)
        .map(|k| {
            let r = sys.unit_right_vector(k);
            let mut overlap = c64(0.0, 0.0);
            for i in 0..n {
                for j in 0..n {
                    overlap += r[i].conj() * p.get(i, j) * r[j];
                }
            }
            1.0 / overlap / sys.kappa()[k].norm_sqr()
        })
        .collect()
}

/// `Q_ij = Σ_n r_n[i] q_n conj(l_n[j])` on κ-scaled vectors.
pub fn naive_quasiparity(sys: &BiorthogonalSystem, q: &[C64]) -> ComplexMatrix {
    let n = sys.dim();
    entrywise(n, |i, j| {
        let mut acc = c64(0.0, 0.0);
        for k in 0..n {
            acc += sys.right().get(i, k) * q[k] * sys.left().get(j, k).conj();
        }
        acc
    })
}

/// `C_ij = Σ_n l_n[i] q_n conj(r_n[j])` on κ-free vectors.
pub fn naive_charge(sys: &BiorthogonalSystem, q: &[C64]) -> ComplexMatrix {
    let n = sys.dim();
    let l: Vec<Vec<C64>> = (0..n).map(|k| sys.unit_left_vector(k).iter().copied().collect()).collect();
    let r: Vec<Vec<C64>> = (0..n).map(|k| sys.unit_right_vector(k).iter().copied().collect()).collect();
    entrywise(n, |i, j| {
        let mut acc = c64(0.0, 0.0);
        for k in 0..n {
            acc += l[k][i] * q[k] * r[k][j].conj();
        }
        acc
    })
}

pub fn random_c64(rng: &mut impl Rng, scale: f64) -> C64 {
    c64(rng.random_range(-scale..scale), rng.random_range(-scale..scale))
}

/// `(a, d, b)` with `a, d ∈ [−2, 2]` and `|b| ≤ 1`.
pub fn random_h2_params(rng: &mut impl Rng) -> (f64, f64, C64) {
    let a = rng.random_range(-2.0..2.0);
    let d = rng.random_range(-2.0..2.0);
    let r: f64 = rng.random_range(0.0f64..1.0).sqrt();
    let phi = rng.random_range(0.0..std::f64::consts::TAU);
    (a, d, C64::from_polar(r, phi))
}

/// Interior two-level model whose discriminant exceeds `margin·(|a|+|d|+|b|)²`.
pub fn random_h2_interior(rng: &mut impl Rng, margin: f64) -> (f64, f64, C64, ComplexMatrix) {
    loop {
        let (a, d, b) = random_h2_params(rng);
        let s = a.abs() + d.abs() + b.norm();
        if h2_discriminant(a, d, b) > margin * s * s {
            return (a, d, b, build_h2(a, d, b));
        }
    }
}

/// Circulant three-level model whose eigenvalue gaps all exceed `min_gap`.
pub fn random_h3_nondegenerate(rng: &mut impl Rng, min_gap: f64) -> (f64, C64, ComplexMatrix) {
    loop {
        let a = rng.random_range(-2.0..2.0);
        let b = random_c64(rng, 1.0);
        let mut e: Vec<f64> = (0..3)
            .map(|k| a + 2.0 * b.norm() * (b.arg() + std::f64::consts::TAU * k as f64 / 3.0).cos())
            .collect();
        e.sort_by(f64::total_cmp);
        if e[1] - e[0] > min_gap && e[2] - e[1] > min_gap {
            return (a, b, build_h3(a, b));
        }
    }
}

/// `H = S D S⁻¹` with real distinct `D`, and `P = (S S†)⁻¹ (H − σ)`.
///
/// `H† P = P H` holds by construction and `P ≠ P†` in general. The shift σ
/// sits between two eigenvalues, so `⟨E_n|P|E_n⟩` is real with mixed signs.
pub fn similarity_model(rng: &mut impl Rng, n: usize) -> (ComplexMatrix, PseudoMetric) {
    let mut s = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let diag = if i == j { c64(1.0, 0.0) } else { c64(0.0, 0.0) };
            s.push(diag + random_c64(rng, 0.35));
        }
    }
    let s = ComplexMatrix::from_row_major(n, &s).unwrap();
    let energies: Vec<f64> = (0..n).map(|k| k as f64 + rng.random_range(-0.3..0.3)).collect();
    let d = ComplexMatrix::real_diagonal(&energies).unwrap();
    let sinv = inverse(&s).unwrap();
    let h = &(&s * &d) * &sinv;
    let theta0 = inverse(&(&s * &adjoint(&s))).unwrap();
    let sigma = 0.5 * (energies[0] + energies[1]);
    let shifted = &h - &ComplexMatrix::identity(n).scale(c64(sigma, 0.0));
    (h, PseudoMetric::new(&theta0 * &shifted))
}
