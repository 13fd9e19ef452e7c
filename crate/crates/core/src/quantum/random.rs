//! Seeded random states and bases for property checks and the CLI.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::qmat::{kron, CMatrix};
use crate::quantum::state::DensityMatrix;

pub fn random_ket<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Complex64> {
    let raw: Vec<Complex64> = (0..dim)
        .map(|_| {
            Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
        })
        .collect();
    let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    raw.into_iter().map(|z| z / norm).collect()
}

/// Haar-random orthonormal basis (Gram-Schmidt on Gaussian kets).
pub fn random_basis<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while basis.len() < dim {
        let mut v = random_ket(dim, rng);
        for b in &basis {
            let ip: Complex64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= ip * y);
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            basis.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    basis
}

pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_columns(&random_basis(dim, rng)).expect("square basis")
}

/// Ginibre-distributed mixed state of the given rank.
pub fn random_density<R: Rng + ?Sized>(dims: Vec<usize>, rank: usize, rng: &mut R) -> DensityMatrix {
    let n: usize = dims.iter().product();
    let g = CMatrix::from_fn(n, |_, j| {
        if j < rank {
            Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m.scale_real(1.0 / tr).hermitian_part(), dims).expect("valid by construction")
}

pub fn random_pure<R: Rng + ?Sized>(dims: Vec<usize>, rng: &mut R) -> DensityMatrix {
    let n: usize = dims.iter().product();
    DensityMatrix::from_ket(&random_ket(n, rng), dims).expect("unit ket")
}

fn random_probabilities<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| -rng.random::<f64>().max(1e-300).ln()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// Σ_j p_j ρ^A_j ⊗ |β_j⟩⟨β_j| with a random basis {|β_j⟩}, weights, and A-states.
pub fn random_classical_quantum<R: Rng + ?Sized>(da: usize, db: usize, rng: &mut R) -> DensityMatrix {
    let basis = random_basis(db, rng);
    let weights = random_probabilities(db, rng);
    let m = basis
        .iter()
        .zip(&weights)
        .fold(CMatrix::zeros(da * db), |acc, (beta, &p)| {
            let ra = random_density(vec![da], da, rng);
            &acc + &kron(ra.matrix(), &CMatrix::outer(beta)).scale_real(p)
        });
    DensityMatrix::new(m.hermitian_part(), vec![da, db]).expect("valid by construction")
}

/// Local unitary U_A ⊗ 𝟙 applied to a bipartite state.
pub fn rotate_first<R: Rng + ?Sized>(rho: &DensityMatrix, rng: &mut R) -> DensityMatrix {
    let (da, db) = rho.bipartite_dims().expect("bipartite");
    let u = kron(&random_unitary(da, rng), &CMatrix::identity(db));
    DensityMatrix::new(rho.matrix().conjugate_by(&u).hermitian_part(), vec![da, db])
        .expect("unitary conjugation preserves validity")
}
