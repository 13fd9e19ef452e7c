use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qmat::{kron, partial_trace, CMatrix};
use crate::quantum::assemblage::{assemblage, Assemblage};
use crate::quantum::measurement::BinaryMeasurement;
use crate::quantum::state::DensityMatrix;

const ORTHO_TOL: f64 = 1e-10;

fn check_orthonormal(basis: &[Vec<Complex64>]) -> Result<()> {
    let d = basis.len();
    if d == 0 || basis.iter().any(|b| b.len() != d) {
        return Err(Error::DimensionMismatch(
            "basis must hold d kets of length d".into(),
        ));
    }
    let mut worst = 0.0f64;
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            let ip: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
            let expect = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((ip - expect).norm());
        }
    }
    if worst > ORTHO_TOL {
        return Err(Error::NotOrthonormal(worst));
    }
    Ok(())
}

/// Unitary on B⊗C with U|β_j⟩|0⟩ = |β_j⟩|β_j⟩.
///
/// Built as U = Σ_j |β_j⟩⟨β_j| ⊗ X^j·W, where W maps the computational ket
/// |m⟩_C to |β_m⟩_C and X is the cyclic shift |β_m⟩ → |β_{m+1 mod d}⟩.
/// For the computational basis this is CNOT with B as control.
pub fn perfect_copier(basis: &[Vec<Complex64>]) -> Result<CMatrix> {
    check_orthonormal(basis)?;
    let d = basis.len();
    let w = CMatrix::from_columns(basis)?;
    let shift = (0..d).fold(CMatrix::zeros(d), |acc, m| {
        &acc + &CMatrix::outer2(&basis[(m + 1) % d], &basis[m])
    });
    let mut power = w;
    let mut u = CMatrix::zeros(d * d);
    for beta in basis {
        u = &u + &kron(&CMatrix::outer(beta), &power);
        power = &shift * &power;
    }
    Ok(u)
}

/// An operation on the steered party B and the blank copy C.
#[derive(Debug, Clone)]
pub enum Channel {
    Unitary(CMatrix),
    Kraus(Vec<CMatrix>),
}

impl Channel {
    fn operators(&self) -> &[CMatrix] {
        match self {
            Channel::Unitary(u) => std::slice::from_ref(u),
            Channel::Kraus(ks) => ks,
        }
    }

    /// Largest deviation of Σ K†K from 𝟙.
    pub fn trace_preservation_error(&self) -> f64 {
        let ops = self.operators();
        let n = ops.first().map_or(0, CMatrix::dim);
        let sum = ops
            .iter()
            .fold(CMatrix::zeros(n), |acc, k| &acc + &(&k.adjoint() * k));
        sum.max_abs_diff(&CMatrix::identity(n))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CloneReport {
    pub max_deviation_b: f64,
    pub max_deviation_c: f64,
    pub pass: bool,
}

/// Output of running a channel on ρ_AB ⊗ |0⟩⟨0|_C.
#[derive(Debug, Clone)]
pub struct CloneOutput {
    pub abc: DensityMatrix,
    pub ab: DensityMatrix,
    pub ac: DensityMatrix,
}

pub fn run_clone(rho: &DensityMatrix, channel: &Channel) -> Result<CloneOutput> {
    let (da, db) = rho.bipartite_dims()?;
    let ops = channel.operators();
    if ops.is_empty() || ops.iter().any(|k| k.dim() != db * db) {
        return Err(Error::DimensionMismatch(format!(
            "channel must act on B⊗C of dim {}",
            db * db
        )));
    }
    let tp = channel.trace_preservation_error();
    if tp > 1e-10 {
        return Err(Error::InvalidState(format!(
            "channel is not trace preserving (deviation {tp:.3e})"
        )));
    }
    let mut blank = CMatrix::zeros(db);
    blank[(0, 0)] = Complex64::new(1.0, 0.0);
    let input = kron(rho.matrix(), &blank);
    let id_a = CMatrix::identity(da);
    let out = ops.iter().fold(CMatrix::zeros(input.dim()), |acc, k| {
        &acc + &input.conjugate_by(&kron(&id_a, k))
    });
    let dims = vec![da, db, db];
    let ab = partial_trace(&out, &dims, &[0, 1])?.hermitian_part();
    let ac = partial_trace(&out, &dims, &[0, 2])?.hermitian_part();
    Ok(CloneOutput {
        abc: DensityMatrix::new(out.hermitian_part(), dims)?,
        ab: DensityMatrix::new(ab, vec![da, db])?,
        ac: DensityMatrix::new(ac, vec![da, db])?,
    })
}

fn max_deviation(reference: &Assemblage, copy: &Assemblage) -> f64 {
    reference
        .entries
        .iter()
        .zip(&copy.entries)
        .map(|(r, c)| r.state.distance(&c.state))
        .fold(0.0, f64::max)
}

/// Compares both copies' assemblages with the original one, entry by entry.
pub fn verify_clone(
    rho: &DensityMatrix,
    channel: &Channel,
    measurements: &[BinaryMeasurement],
    tol: f64,
) -> Result<CloneReport> {
    let out = run_clone(rho, channel)?;
    let original = assemblage(rho, measurements)?;
    let max_deviation_b = max_deviation(&original, &assemblage(&out.ab, measurements)?);
    let max_deviation_c = max_deviation(&original, &assemblage(&out.ac, measurements)?);
    Ok(CloneReport {
        max_deviation_b,
        max_deviation_c,
        pass: max_deviation_b <= tol && max_deviation_c <= tol,
    })
}
