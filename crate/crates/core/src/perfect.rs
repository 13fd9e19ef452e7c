//! End-to-end perfect-cloneability check: certify zero discord, build the
//! copier from the certificate basis, and verify it on a measurement set.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::Result;
use crate::quantum::copier::{perfect_copier, verify_clone, Channel, CloneReport};
use crate::quantum::discord::{zero_discord_check, ZeroDiscordCertificate};
use crate::quantum::measurement::{
    proof_measurements, qubit_measurement, random_direction, BinaryMeasurement,
};
use crate::quantum::state::DensityMatrix;

pub const CHECK_MEASUREMENTS: usize = 50;
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Clone)]
pub struct PerfectOutcome {
    pub certificate: ZeroDiscordCertificate,
    /// Present only for zero-discord states.
    pub clone_report: Option<CloneReport>,
}

impl PerfectOutcome {
    pub fn pass(&self) -> bool {
        self.clone_report.as_ref().is_some_and(|r| r.pass)
    }
}

/// Random spin directions when A is a qubit, otherwise proof measurements
/// cycling through the generators with random strengths Δ ∈ (0.05, 0.7).
pub fn check_measurements<R: Rng + ?Sized>(da: usize, n: usize, rng: &mut R) -> Result<Vec<BinaryMeasurement>> {
    if da == 2 {
        return (0..n).map(|_| qubit_measurement(random_direction(rng))).collect();
    }
    let generators = da * da - 1;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let delta = rng.random_range(0.05..0.7);
        let mut set = proof_measurements(da, delta)?;
        out.push(set.swap_remove(i % generators));
    }
    Ok(out)
}

pub fn perfect_check(rho: &DensityMatrix, tol: f64, seed: u64) -> Result<PerfectOutcome> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let certificate = zero_discord_check(rho, tol, &mut rng)?;
    let clone_report = match &certificate.common_basis {
        Some(basis) => {
            let (da, _) = rho.bipartite_dims()?;
            let channel = Channel::Unitary(perfect_copier(basis)?);
            let ms = check_measurements(da, CHECK_MEASUREMENTS, &mut rng)?;
            Some(verify_clone(rho, &channel, &ms, tol)?)
        }
        None => None,
    };
    Ok(PerfectOutcome {
        certificate,
        clone_report,
    })
}
