use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::qmat::{herm_eig, paulis, CMatrix, I, ONE};

/// Default strength Δ for the generator-based binary measurements.
pub const DEFAULT_DELTA: f64 = 0.5;

const POVM_TOL: f64 = 1e-10;

/// Generalized Gell-Mann matrices: Hermitian, traceless, tr(λ_k λ_l) = 2δ_kl.
///
/// Ordering is the symmetric/antisymmetric pair for each (j, k) with j < k,
/// followed by the d − 1 diagonal generators, so `su_generators(2)` is
/// (σ_x, σ_y, σ_z).
pub fn su_generators(d: usize) -> Vec<CMatrix> {
    assert!(d >= 2, "SU(d) generators need d >= 2");
    let mut out = Vec::with_capacity(d * d - 1);
    for j in 0..d {
        for k in j + 1..d {
            let mut sym = CMatrix::zeros(d);
            sym[(j, k)] = ONE;
            sym[(k, j)] = ONE;
            out.push(sym);
            let mut anti = CMatrix::zeros(d);
            anti[(j, k)] = -I;
            anti[(k, j)] = I;
            out.push(anti);
        }
    }
    for l in 1..d {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut diag = vec![0.0; d];
        diag[..l].iter_mut().for_each(|x| *x = norm);
        diag[l] = -(l as f64) * norm;
        out.push(CMatrix::diag_real(&diag));
    }
    out
}

/// What a binary measurement setting is parameterized by.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeasurementLabel {
    /// Qubit spin measurement along a unit vector.
    Direction([f64; 3]),
    /// (𝟙 ± Δ λ_k)/2 built from the k-th SU(d) generator.
    Generator { k: usize, strength: f64 },
}

/// One element Π^x_a of a binary measurement on the measuring party.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementElement {
    pub operator: CMatrix,
    pub label: MeasurementLabel,
    /// +1 or −1.
    pub outcome: i8,
}

/// The two elements of a setting, outcome +1 first.
pub type BinaryMeasurement = [MeasurementElement; 2];

/// Spin measurement (𝟙 ± x⃗·σ⃗)/2 along a unit vector.
pub fn qubit_measurement(direction: [f64; 3]) -> Result<BinaryMeasurement> {
    let norm = direction.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > POVM_TOL {
        return Err(Error::InvalidMeasurement(format!(
            "direction {direction:?} has norm {norm}, expected 1"
        )));
    }
    let s = paulis();
    let n = (0..3).fold(CMatrix::zeros(2), |acc, k| {
        &acc + &s[k].scale_real(direction[k])
    });
    let label = MeasurementLabel::Direction(direction);
    Ok(binary_pair(&n, 1.0, label))
}

fn binary_pair(generator: &CMatrix, strength: f64, label: MeasurementLabel) -> BinaryMeasurement {
    let id = CMatrix::identity(generator.dim());
    let half = |a: f64| (&id + &generator.scale_real(a * strength)).scale_real(0.5);
    [
        MeasurementElement {
            operator: half(1.0),
            label,
            outcome: 1,
        },
        MeasurementElement {
            operator: half(-1.0),
            label,
            outcome: -1,
        },
    ]
}

/// The d² − 1 binary measurements Π^k_± = (𝟙 ± Δλ_k)/2.
pub fn proof_measurements(d: usize, delta: f64) -> Result<Vec<BinaryMeasurement>> {
    if d < 2 {
        return Err(Error::InvalidMeasurement(format!("dimension {d} < 2")));
    }
    if !(delta > 0.0 && delta < FRAC_1_SQRT_2) {
        return Err(Error::InvalidMeasurement(format!(
            "strength {delta} outside (0, 1/sqrt 2)"
        )));
    }
    Ok(su_generators(d)
        .iter()
        .enumerate()
        .map(|(k, g)| binary_pair(g, delta, MeasurementLabel::Generator { k, strength: delta }))
        .collect())
}

/// Largest violation of 0 ≤ Π ≤ 𝟙 and Σ_a Π_a = 𝟙 for one setting.
pub fn povm_violation(m: &BinaryMeasurement) -> Result<f64> {
    let mut worst = 0.0f64;
    for el in m {
        let eig = herm_eig(&el.operator)?;
        let hi = eig.values[0];
        let lo = *eig.values.last().unwrap();
        worst = worst.max(-lo).max(hi - 1.0);
    }
    let sum = &m[0].operator + &m[1].operator;
    worst = worst.max(sum.max_abs_diff(&CMatrix::identity(sum.dim())));
    Ok(worst)
}

/// Uniformly distributed unit vector.
pub fn random_direction<R: rand::Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    use rand_distr::{Distribution, UnitSphere};
    UnitSphere.sample(rng)
}
