//! Perfect-cloneability test for the steering of a bipartite state.
//!
//! A state's assemblage can be cloned exactly by an operation on the steered
//! party iff the state has the classical-quantum form
//! Σ_j p_j ρ^A_j ⊗ |β_j⟩⟨β_j|. Equivalently, ρ_B and every η_k pairwise
//! commute, and their common eigenbasis is {|β_j⟩}.

use num_complex::Complex64;
use rand::Rng;

use crate::error::Result;
use crate::qmat::{comm_norm, herm_eig, kron, CMatrix, ZERO};
use crate::quantum::assemblage::eta_operators;
use crate::quantum::state::DensityMatrix;

pub const DEFAULT_TOL: f64 = 1e-9;
const DIAG_RETRIES: usize = 3;

#[derive(Debug, Clone)]
pub struct ZeroDiscordCertificate {
    pub is_zero_discord: bool,
    /// Common eigenbasis {|β_j⟩} of ρ_B and the η_k; present iff zero-discord.
    pub common_basis: Option<Vec<Vec<Complex64>>>,
    /// p_j = ⟨β_j|ρ_B|β_j⟩
    pub weights: Option<Vec<f64>>,
    /// Normalized ρ^A_j; zero matrix where p_j = 0.
    pub a_states: Option<Vec<CMatrix>>,
    /// ‖Σ_j p_j ρ^A_j ⊗ |β_j⟩⟨β_j| − ρ_AB‖_F for the returned basis.
    pub reconstruction_error: Option<f64>,
    /// Largest ‖[X, Y]‖_F over pairs drawn from {ρ_B, η_1, …}.
    pub max_commutator: f64,
    pub eta_operators: Vec<CMatrix>,
}

pub fn zero_discord_check<R: Rng + ?Sized>(
    rho: &DensityMatrix,
    tol: f64,
    rng: &mut R,
) -> Result<ZeroDiscordCertificate> {
    let (da, db) = rho.bipartite_dims()?;
    let etas = eta_operators(rho)?;
    let rho_b = rho.reduce(&[1])?.into_matrix();

    let mut family = Vec::with_capacity(etas.len() + 1);
    family.push(rho_b.clone());
    family.extend(etas.iter().cloned());

    let mut max_commutator = 0.0f64;
    for i in 0..family.len() {
        for j in i + 1..family.len() {
            max_commutator = max_commutator.max(comm_norm(&family[i], &family[j]));
        }
    }

    let mut cert = ZeroDiscordCertificate {
        is_zero_discord: max_commutator <= tol,
        common_basis: None,
        weights: None,
        a_states: None,
        reconstruction_error: None,
        max_commutator,
        eta_operators: etas,
    };
    if !cert.is_zero_discord {
        return Ok(cert);
    }

    let basis = common_eigenbasis(&family, tol, rng)?;
    let (weights, a_states) = decompose(rho, &basis, da, db);
    let rebuilt = rebuild(&weights, &a_states, &basis);
    cert.reconstruction_error = Some(rebuilt.distance(rho.matrix()));
    cert.common_basis = Some(basis);
    cert.weights = Some(weights);
    cert.a_states = Some(a_states);
    Ok(cert)
}

/// Diagonalizes a random real combination of a commuting family and keeps the
/// basis in which every member is diagonal. Retries with fresh weights when an
/// accidental degeneracy mixes joint eigenspaces; returns the best attempt.
fn common_eigenbasis<R: Rng + ?Sized>(
    family: &[CMatrix],
    tol: f64,
    rng: &mut R,
) -> Result<Vec<Vec<Complex64>>> {
    let n = family[0].dim();
    let diag_tol = (10.0 * tol).max(1e-10);
    let mut best: Option<(f64, CMatrix)> = None;
    for _ in 0..=DIAG_RETRIES {
        let combo = family.iter().fold(CMatrix::zeros(n), |acc, m| {
            &acc + &m.scale_real(rng.random_range(-1.0..1.0))
        });
        let v = herm_eig(&combo.hermitian_part())?.vectors;
        let vh = v.adjoint();
        let off = family
            .iter()
            .map(|m| {
                let d = &(&vh * m) * &v;
                let mut s = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            s += d[(i, j)].norm_sqr();
                        }
                    }
                }
                s.sqrt()
            })
            .fold(0.0, f64::max);
        let better = best.as_ref().is_none_or(|(b, _)| off < *b);
        if better {
            best = Some((off, v));
        }
        if off <= diag_tol {
            break;
        }
    }
    let v = best.expect("at least one attempt").1;
    Ok((0..n).map(|j| v.column(j)).collect())
}

fn decompose(
    rho: &DensityMatrix,
    basis: &[Vec<Complex64>],
    da: usize,
    db: usize,
) -> (Vec<f64>, Vec<CMatrix>) {
    let m = rho.matrix();
    let mut weights = Vec::with_capacity(db);
    let mut states = Vec::with_capacity(db);
    for beta in basis {
        // ⟨β|_B ρ |β⟩_B
        let block = CMatrix::from_fn(da, |i, k| {
            let mut acc = ZERO;
            for s in 0..db {
                for t in 0..db {
                    acc += beta[s].conj() * m[(i * db + s, k * db + t)] * beta[t];
                }
            }
            acc
        })
        .hermitian_part();
        let p = block.trace().re.max(0.0);
        weights.push(p);
        states.push(if p > 0.0 {
            block.scale_real(1.0 / p)
        } else {
            CMatrix::zeros(da)
        });
    }
    (weights, states)
}

fn rebuild(weights: &[f64], a_states: &[CMatrix], basis: &[Vec<Complex64>]) -> CMatrix {
    let da = a_states[0].dim();
    let db = basis.len();
    weights
        .iter()
        .zip(a_states)
        .zip(basis)
        .fold(CMatrix::zeros(da * db), |acc, ((&p, ra), beta)| {
            &acc + &kron(ra, &CMatrix::outer(beta)).scale_real(p)
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::state::{bell_state, BellKind};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn classical_quantum_state_is_certified() {
        let ra0 = CMatrix::from_real_rows(&[&[0.6, 0.2], &[0.2, 0.4]]);
        let ra1 = CMatrix::diag_real(&[0.1, 0.9]);
        let m = &kron(&ra0, &CMatrix::diag_real(&[1.0, 0.0])).scale_real(0.3)
            + &kron(&ra1, &CMatrix::diag_real(&[0.0, 1.0])).scale_real(0.7);
        let rho = DensityMatrix::new(m, vec![2, 2]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let cert = zero_discord_check(&rho, DEFAULT_TOL, &mut rng).unwrap();
        assert!(cert.is_zero_discord);
        assert!(cert.reconstruction_error.unwrap() < 1e-12);
        let mut w = cert.weights.clone().unwrap();
        w.sort_by(f64::total_cmp);
        assert!((w[0] - 0.3).abs() < 1e-12 && (w[1] - 0.7).abs() < 1e-12);
        // basis is computational up to order and phase
        for beta in cert.common_basis.unwrap() {
            let big = beta.iter().filter(|z| z.norm() > 1e-9).count();
            assert_eq!(big, 1);
        }
    }

    #[test]
    fn phi_plus_fails_with_pauli_witness() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let cert = zero_discord_check(&bell_state(BellKind::PhiPlus), DEFAULT_TOL, &mut rng).unwrap();
        assert!(!cert.is_zero_discord);
        assert!(cert.common_basis.is_none());
        assert!((cert.max_commutator - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn product_state_is_zero_discord() {
        let ra = CMatrix::from_real_rows(&[&[0.7, 0.3], &[0.3, 0.3]]);
        let rb = CMatrix::from_fn(3, |i, j| {
            if i == j {
                Complex64::new(1.0 / 3.0, 0.0)
            } else {
                Complex64::new(0.05, 0.02 * (i as f64 - j as f64))
            }
        });
        let rho = DensityMatrix::new(kron(&ra, &rb), vec![2, 3]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cert = zero_discord_check(&rho, DEFAULT_TOL, &mut rng).unwrap();
        assert!(cert.is_zero_discord);
        assert!(cert.reconstruction_error.unwrap() < 1e-10);
    }

    #[test]
    fn maximally_mixed_degenerate_family() {
        let rho = DensityMatrix::maximally_mixed(vec![2, 3]);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let cert = zero_discord_check(&rho, DEFAULT_TOL, &mut rng).unwrap();
        assert!(cert.is_zero_discord);
        assert!(cert.reconstruction_error.unwrap() < 1e-12);
    }
}
