use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qmat::{herm_eig, partial_trace, CMatrix, HERMITIAN_TOL, ZERO};

pub const TRACE_TOL: f64 = 1e-10;
pub const EIGEN_TOL: f64 = 1e-10;

/// A validated density matrix together with its tensor-factor dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace, positivity and the dims product.
    pub fn new(matrix: CMatrix, dims: Vec<usize>) -> Result<Self> {
        let prod: usize = dims.iter().product();
        if dims.is_empty() || dims.contains(&0) || prod != matrix.dim() {
            return Err(Error::DimensionMismatch(format!(
                "subsystem dims {dims:?} do not match matrix dim {}",
                matrix.dim()
            )));
        }
        let dev = matrix.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!(
                "trace is {:.3e}{:+.3e}i, expected 1",
                tr.re, tr.im
            )));
        }
        let eig = herm_eig(&matrix)?;
        let min = eig.values.last().copied().unwrap_or(0.0);
        if min < -EIGEN_TOL {
            return Err(Error::NotPsd(min));
        }
        Ok(Self { matrix, dims })
    }

    /// Normalizes the ket and forms its projector.
    pub fn from_ket(ket: &[Complex64], dims: Vec<usize>) -> Result<Self> {
        let norm = ket.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero ket".into()));
        }
        let unit: Vec<Complex64> = ket.iter().map(|z| z / norm).collect();
        Self::new(CMatrix::outer(&unit), dims)
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let n: usize = dims.iter().product();
        Self {
            matrix: CMatrix::identity(n).scale_real(1.0 / n as f64),
            dims,
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// Reduced state on the kept subsystems.
    pub fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let m = partial_trace(&self.matrix, &self.dims, keep)?;
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let dims = keep.iter().map(|&k| self.dims[k]).collect();
        DensityMatrix::new(m, dims)
    }

    /// Dimensions (d_A, d_B) of a bipartite state.
    pub fn bipartite_dims(&self) -> Result<(usize, usize)> {
        match self.dims[..] {
            [a, b] => Ok((a, b)),
            _ => Err(Error::DimensionMismatch(format!(
                "expected a bipartite state, got dims {:?}",
                self.dims
            ))),
        }
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        DensityMatrix {
            matrix: crate::qmat::kron(&self.matrix, &other.matrix),
            dims,
        }
    }
}

/// The four two-qubit Bell states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [
        BellKind::PhiPlus,
        BellKind::PhiMinus,
        BellKind::PsiPlus,
        BellKind::PsiMinus,
    ];

    /// Correlation signs tr(σ_k⊗σ_k |B⟩⟨B|) for k = x, y, z.
    pub fn correlations(self) -> [f64; 3] {
        match self {
            BellKind::PhiPlus => [1.0, -1.0, 1.0],
            BellKind::PhiMinus => [-1.0, 1.0, 1.0],
            BellKind::PsiPlus => [1.0, 1.0, -1.0],
            BellKind::PsiMinus => [-1.0, -1.0, -1.0],
        }
    }
}

/// Amplitudes in the computational basis |00⟩, |01⟩, |10⟩, |11⟩.
pub fn bell_ket(kind: BellKind) -> [Complex64; 4] {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    match kind {
        BellKind::PhiPlus => [h, ZERO, ZERO, h],
        BellKind::PhiMinus => [h, ZERO, ZERO, -h],
        BellKind::PsiPlus => [ZERO, h, h, ZERO],
        BellKind::PsiMinus => [ZERO, h, -h, ZERO],
    }
}

pub fn bell_state(kind: BellKind) -> DensityMatrix {
    DensityMatrix {
        matrix: CMatrix::outer(&bell_ket(kind)),
        dims: vec![2, 2],
    }
}

/// |0⟩, |1⟩ and |±⟩ as kets.
pub fn qubit_ket(label: char) -> [Complex64; 2] {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let one = Complex64::new(1.0, 0.0);
    match label {
        '0' => [one, ZERO],
        '1' => [ZERO, one],
        '+' => [h, h],
        '-' => [h, -h],
        _ => panic!("unknown qubit label {label:?}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::kron_ket;

    #[test]
    fn phi_plus_marginal_is_maximally_mixed() {
        let rb = bell_state(BellKind::PhiPlus).reduce(&[1]).unwrap();
        assert!(rb.matrix().distance(&CMatrix::identity(2).scale_real(0.5)) < 1e-15);
    }

    #[test]
    fn bell_basis_is_orthonormal() {
        for a in BellKind::ALL {
            for b in BellKind::ALL {
                let ip: Complex64 = bell_ket(a)
                    .iter()
                    .zip(bell_ket(b).iter())
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((ip - expect).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn phi_plus_in_plus_minus_basis() {
        let pp = kron_ket(&qubit_ket('+'), &qubit_ket('+'));
        let mm = kron_ket(&qubit_ket('-'), &qubit_ket('-'));
        let phi = bell_ket(BellKind::PhiPlus);
        for i in 0..4 {
            let alt = (pp[i] + mm[i]) * FRAC_1_SQRT_2;
            assert!((alt - phi[i]).norm() < 1e-15);
        }
    }

    #[test]
    fn bell_correlation_signs_match_expectations() {
        let paulis = crate::qmat::paulis();
        for kind in BellKind::ALL {
            let rho = bell_state(kind);
            for (k, s) in paulis.iter().enumerate() {
                let ss = crate::qmat::kron(s, s);
                let t = rho.matrix().trace_product(&ss).re;
                assert!((t - kind.correlations()[k]).abs() < 1e-15, "{kind:?} k={k}");
            }
        }
    }

    #[test]
    fn validation_rejects_bad_states() {
        let not_unit = CMatrix::diag_real(&[0.5, 0.6]);
        assert!(matches!(
            DensityMatrix::new(not_unit, vec![2]),
            Err(Error::InvalidState(_))
        ));
        let negative = CMatrix::diag_real(&[1.2, -0.2]);
        assert!(matches!(
            DensityMatrix::new(negative, vec![2]),
            Err(Error::NotPsd(_))
        ));
        let wrong_dims = CMatrix::diag_real(&[0.5, 0.5]);
        assert!(DensityMatrix::new(wrong_dims, vec![3]).is_err());
    }
}
