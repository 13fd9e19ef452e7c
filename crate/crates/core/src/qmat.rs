//! Dense complex matrices for small quantum systems.
//!
//! Every matrix in this crate is at most 16×16 (four qubits), so the routines
//! here use plain row-major storage and straightforward O(n³) algorithms.
//! Hermitian eigendecomposition is a cyclic complex Jacobi sweep, which is
//! accurate to a few ulps on matrices of this size.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Absolute tolerance on |M[i][j] − conj(M[j][i])| for Hermitian inputs.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Eigenvalues below this are rejected as not positive semidefinite; anything
/// between it and zero is clamped to zero.
pub const PSD_REJECT: f64 = -1e-9;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Square complex matrix in row-major layout.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries; fails unless `data.len()` is a perfect square.
    pub fn from_vec(data: Vec<Complex64>) -> Result<Self> {
        let dim = (data.len() as f64).sqrt().round() as usize;
        if dim == 0 || dim * dim != data.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} entries do not form a square matrix",
                data.len()
            )));
        }
        Ok(Self { dim, data })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let dim = rows.len();
        Self::from_fn(dim, |i, j| Complex64::new(rows[i][j], 0.0))
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    /// |ψ⟩⟨ψ| for an arbitrary (not necessarily normalized) ket.
    pub fn outer(ket: &[Complex64]) -> Self {
        Self::from_fn(ket.len(), |i, j| ket[i] * ket[j].conj())
    }

    /// |a⟩⟨b|
    pub fn outer2(a: &[Complex64], b: &[Complex64]) -> Self {
        assert_eq!(a.len(), b.len());
        Self::from_fn(a.len(), |i, j| a[i] * b[j].conj())
    }

    /// Matrix whose columns are the given kets.
    pub fn from_columns(cols: &[Vec<Complex64>]) -> Result<Self> {
        let dim = cols.len();
        if cols.iter().any(|c| c.len() != dim) {
            return Err(Error::DimensionMismatch(
                "columns must be kets of length equal to their count".into(),
            ));
        }
        Ok(Self::from_fn(dim, |i, j| cols[j][i]))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius distance ‖a − b‖_F.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest entrywise |a − b|.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// (M + M†)/2
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    pub fn apply(&self, ket: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(ket.len(), self.dim);
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)] * ket[j]).sum())
            .collect()
    }

    /// U M U†
    pub fn conjugate_by(&self, u: &Self) -> Self {
        &(u * self) * &u.adjoint()
    }

    /// tr(A B) without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut acc = ZERO;
        for i in 0..n {
            for k in 0..n {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        acc
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim);
        CMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim);
        CMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  [")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, " {:+.6}{:+.6}i", z.re, z.im)?;
            }
            writeln!(f, " ]")?;
        }
        Ok(())
    }
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
}

pub fn pauli_y() -> CMatrix {
    let mut m = CMatrix::zeros(2);
    m[(0, 1)] = -I;
    m[(1, 0)] = I;
    m
}

pub fn pauli_z() -> CMatrix {
    CMatrix::diag_real(&[1.0, -1.0])
}

/// (σ_x, σ_y, σ_z)
pub fn paulis() -> [CMatrix; 3] {
    [pauli_x(), pauli_y(), pauli_z()]
}

pub fn hadamard() -> CMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_real_rows(&[&[h, h], &[h, -h]])
}

/// Tensor product; `kron(a, b)[(i·db + k, j·db + l)] = a[i][j]·b[k][l]`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (da, db) = (a.dim, b.dim);
    let n = da * db;
    let mut out = CMatrix::zeros(n);
    for i in 0..da {
        for j in 0..da {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..db {
                for l in 0..db {
                    out[(i * db + k, j * db + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

pub fn kron_all(factors: &[&CMatrix]) -> CMatrix {
    let mut it = factors.iter();
    let first = (*it.next().expect("kron_all needs at least one factor")).clone();
    it.fold(first, |acc, m| kron(&acc, m))
}

/// Tensor product of kets.
pub fn kron_ket(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .flat_map(|&x| b.iter().map(move |&y| x * y))
        .collect()
}

fn check_dims(total: usize, dims: &[usize]) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::DimensionMismatch(format!(
            "subsystem dims {dims:?} must be nonempty and positive"
        )));
    }
    let prod: usize = dims.iter().product();
    if prod != total {
        return Err(Error::DimensionMismatch(format!(
            "subsystem dims {dims:?} multiply to {prod}, matrix has dim {total}"
        )));
    }
    Ok(())
}

fn digits(mut index: usize, dims: &[usize], out: &mut [usize]) {
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
}

/// Traces out every subsystem not listed in `keep`. The kept subsystems
/// appear in the result in ascending index order.
pub fn partial_trace(m: &CMatrix, dims: &[usize], keep: &[usize]) -> Result<CMatrix> {
    check_dims(m.dim, dims)?;
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.is_empty() {
        return Err(Error::DimensionMismatch("keep set must be nonempty".into()));
    }
    if let Some(&bad) = keep.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::DimensionMismatch(format!(
            "subsystem index {bad} out of range for {} subsystems",
            dims.len()
        )));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();
    let out_dim: usize = keep.iter().map(|&k| dims[k]).product();
    let mut out = CMatrix::zeros(out_dim);

    let n = dims.len();
    let mut di = vec![0usize; n];
    let mut dj = vec![0usize; n];
    let compose = |d: &[usize]| keep.iter().fold(0usize, |acc, &k| acc * dims[k] + d[k]);
    for i in 0..m.dim {
        digits(i, dims, &mut di);
        let oi = compose(&di);
        for j in 0..m.dim {
            digits(j, dims, &mut dj);
            if traced.iter().all(|&t| di[t] == dj[t]) {
                out[(oi, compose(&dj))] += m[(i, j)];
            }
        }
    }
    Ok(out)
}

/// Reorders tensor factors: subsystem `s` of the result is subsystem `perm[s]` of the input.
pub fn permute_subsystems(m: &CMatrix, dims: &[usize], perm: &[usize]) -> Result<CMatrix> {
    check_dims(m.dim, dims)?;
    let map = permutation_map(dims, perm)?;
    let mut out = CMatrix::zeros(m.dim);
    for i in 0..m.dim {
        for j in 0..m.dim {
            out[(map[i], map[j])] = m[(i, j)];
        }
    }
    Ok(out)
}

/// Same as [`permute_subsystems`] for a ket.
pub fn permute_ket(ket: &[Complex64], dims: &[usize], perm: &[usize]) -> Result<Vec<Complex64>> {
    check_dims(ket.len(), dims)?;
    let map = permutation_map(dims, perm)?;
    let mut out = vec![ZERO; ket.len()];
    for (i, &z) in ket.iter().enumerate() {
        out[map[i]] = z;
    }
    Ok(out)
}

// old flat index -> new flat index
fn permutation_map(dims: &[usize], perm: &[usize]) -> Result<Vec<usize>> {
    let n = dims.len();
    let mut seen = vec![false; n];
    if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
        return Err(Error::DimensionMismatch(format!(
            "{perm:?} is not a permutation of {n} subsystems"
        )));
    }
    let total: usize = dims.iter().product();
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let mut d = vec![0usize; n];
    Ok((0..total)
        .map(|i| {
            digits(i, dims, &mut d);
            perm.iter()
                .zip(&new_dims)
                .fold(0usize, |acc, (&p, &nd)| acc * nd + d[p])
        })
        .collect())
}

/// Spectral decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermEig {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, matching `values`.
    pub vectors: CMatrix,
}

impl HermEig {
    pub fn reconstruct(&self) -> CMatrix {
        let v = &self.vectors;
        let n = v.dim;
        CMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * self.values[k] * v[(j, k)].conj())
                .sum()
        })
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
pub fn herm_eig(m: &CMatrix) -> Result<HermEig> {
    let dev = m.hermitian_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let n = m.dim;
    let mut a = m.hermitian_part();
    let mut v = CMatrix::identity(n);
    let scale = a.frobenius_norm();

    for _sweep in 0..64 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-17 * scale.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let b = a[(p, q)];
                let babs = b.norm();
                if babs <= 1e-300 {
                    continue;
                }
                let phase = b / babs;
                let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * babs);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // columns p, q of the rotation: (c, −s·e^{−iφ}) and (s, c·e^{−iφ})
                let upp = Complex64::new(c, 0.0);
                let uqp = -phase.conj() * s;
                let upq = Complex64::new(s, 0.0);
                let uqq = phase.conj() * c;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * upp + akq * uqp;
                    a[(k, q)] = akp * upq + akq * uqq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = upp.conj() * apk + uqp.conj() * aqk;
                    a[(q, k)] = upq.conj() * apk + uqq.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * upp + vkq * uqp;
                    v[(k, q)] = vkp * upq + vkq * uqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, |r, c| v[(r, order[c])]);
    Ok(HermEig { values, vectors })
}

/// Principal square root of a Hermitian PSD matrix.
pub fn psd_sqrt(m: &CMatrix) -> Result<CMatrix> {
    let eig = herm_eig(m)?;
    let min = eig.values.iter().copied().fold(f64::INFINITY, f64::min);
    if min < PSD_REJECT {
        return Err(Error::NotPsd(min));
    }
    let roots: Vec<f64> = eig
        .values
        .iter()
        .map(|&w| if w < 0.0 { 0.0 } else { w.sqrt() })
        .collect();
    Ok(HermEig {
        values: roots,
        vectors: eig.vectors,
    }
    .reconstruct())
}

/// Frobenius norm of the commutator ‖ab − ba‖_F.
pub fn comm_norm(a: &CMatrix, b: &CMatrix) -> f64 {
    (a * b).distance(&(b * a))
}
