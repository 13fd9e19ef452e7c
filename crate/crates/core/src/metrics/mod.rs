//! Clone fidelities, the steering measure of Bell-diagonal states, and the
//! two trade-off inequalities between the copies.

pub mod quadrature;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::cloning::{clone_pair, VCoefficients};
use crate::error::{Error, Result};
use crate::qmat::{kron, partial_trace, paulis, psd_sqrt, CMatrix};
use crate::quantum::state::{bell_state, BellKind, DensityMatrix};

pub use quadrature::{Estimate, QuadratureScheme, SphereQuadrature};

/// Off-diagonal correlations above this reject a state as not Bell-diagonal.
pub const BELL_DIAGONAL_TOL: f64 = 1e-8;
/// A Bell-diagonal state is steerable iff S exceeds this.
pub const STEERING_THRESHOLD: f64 = 0.5;

/// Fidelity tr(√ρ1 ρ2 √ρ1), exactly as written.
///
/// This is not the squared Uhlmann fidelity (tr√(√ρ1 ρ2 √ρ1))². The two agree
/// whenever ρ1 is pure, which is the case for every reference state in the
/// cloning protocol; there the value reduces to ⟨ψ|ρ2|ψ⟩.
pub fn fidelity(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::DimensionMismatch(format!(
            "fidelity of dim {} and dim {} states",
            rho1.dim(),
            rho2.dim()
        )));
    }
    let s = psd_sqrt(rho1.matrix())?;
    Ok((&(&s * rho2.matrix()) * &s).trace().re)
}

type Mat2 = [[Complex64; 2]; 2];

fn mat2(m: &CMatrix) -> Mat2 {
    [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]
}

fn mat2_lin(m0: &Mat2, ms: &[Mat2; 3], a: f64, x: [f64; 3]) -> Mat2 {
    let mut out = *m0;
    for (mk, xk) in ms.iter().zip(x) {
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] += mk[i][j] * (a * xk);
            }
        }
    }
    for row in &mut out {
        for z in row {
            *z *= 0.5;
        }
    }
    out
}

fn mat2_trace(m: &Mat2) -> f64 {
    m[0][0].re + m[1][1].re
}

fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// √M for a 2×2 PSD matrix via √M = (M + √det·𝟙)/√(tr M + 2√det).
fn mat2_sqrt(m: &Mat2) -> Mat2 {
    let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).re.max(0.0);
    let sd = det.sqrt();
    let t = (mat2_trace(m) + 2.0 * sd).max(0.0).sqrt();
    if t == 0.0 {
        return [[Complex64::new(0.0, 0.0); 2]; 2];
    }
    let mut out = *m;
    out[0][0] += sd;
    out[1][1] += sd;
    for row in &mut out {
        for z in row {
            *z /= t;
        }
    }
    out
}

fn mat2_fidelity(r1: &Mat2, r2: &Mat2) -> f64 {
    let s = mat2_sqrt(r1);
    mat2_trace(&mat2_mul(&mat2_mul(&s, r2), &s))
}

/// M_0 = tr_A ρ and M_k = tr_A[(σ_k ⊗ 𝟙) ρ], so that the conditional state for
/// Π^x_a = (𝟙 + a x⃗·σ⃗)/2 is (M_0 + a Σ_k x_k M_k)/2.
fn steering_operators(rho: &DensityMatrix) -> Result<(Mat2, [Mat2; 3])> {
    let id = CMatrix::identity(2);
    let reduce = |op: &CMatrix| -> Result<Mat2> {
        let lifted = kron(op, &id);
        Ok(mat2(&partial_trace(&(&lifted * rho.matrix()), &[2, 2], &[1])?))
    };
    let [sx, sy, sz] = paulis();
    Ok((reduce(&id)?, [reduce(&sx)?, reduce(&sy)?, reduce(&sz)?]))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AveragedFidelities {
    pub f_b: Estimate,
    pub f_c: Estimate,
    /// Largest |F(a=+1) − F(a=−1)| seen at any node, on either copy.
    pub outcome_asymmetry: f64,
}

struct SteeredTriple {
    original: (Mat2, [Mat2; 3]),
    b: (Mat2, [Mat2; 3]),
    c: (Mat2, [Mat2; 3]),
}

impl SteeredTriple {
    /// Per-outcome fidelities [[F_B(+), F_B(−)], [F_C(+), F_C(−)]] and P(±).
    fn at(&self, x: [f64; 3]) -> ([[f64; 2]; 2], [f64; 2]) {
        let mut f = [[0.0; 2]; 2];
        let mut p = [0.0; 2];
        for (slot, a) in [1.0, -1.0].into_iter().enumerate() {
            let orig = mat2_lin(&self.original.0, &self.original.1, a, x);
            p[slot] = mat2_trace(&orig);
            if p[slot] <= 0.0 {
                continue;
            }
            let orig = scale2(&orig, 1.0 / p[slot]);
            for (k, (m0, ms)) in [&self.b, &self.c].into_iter().enumerate() {
                let copy = mat2_lin(m0, ms, a, x);
                let pc = mat2_trace(&copy);
                if pc > 0.0 {
                    f[k][slot] = mat2_fidelity(&orig, &scale2(&copy, 1.0 / pc));
                }
            }
        }
        (f, p)
    }
}

/// Direction-averaged clone fidelities for the Cerf cloner acting on |Φ+⟩.
///
/// At every node the original and both copies are steered by the spin
/// measurement along x⃗; the per-direction fidelity is the P_a-weighted mean
/// over both outcomes, then averaged with the node weights.
pub fn averaged_fidelities(v: &VCoefficients, quad: &SphereQuadrature) -> Result<AveragedFidelities> {
    let (ab, ac) = clone_pair(v)?;
    let triple = SteeredTriple {
        original: steering_operators(&bell_state(BellKind::PhiPlus))?,
        b: steering_operators(&ab)?,
        c: steering_operators(&ac)?,
    };
    let mut est = [Estimate { value: 0.0, std_err: 0.0 }; 2];
    quad.average_many::<2>(
        |x| {
            let (f, p) = triple.at(x);
            [p[0] * f[0][0] + p[1] * f[0][1], p[0] * f[1][0] + p[1] * f[1][1]]
        },
        &mut est,
    );
    let outcome_asymmetry = quad
        .nodes()
        .par_iter()
        .map(|node| {
            let (f, _) = triple.at(node.direction);
            (f[0][0] - f[0][1]).abs().max((f[1][0] - f[1][1]).abs())
        })
        .reduce(|| 0.0, f64::max);
    Ok(AveragedFidelities {
        f_b: est[0],
        f_c: est[1],
        outcome_asymmetry,
    })
}

fn scale2(m: &Mat2, s: f64) -> Mat2 {
    let mut out = *m;
    for row in &mut out {
        for z in row {
            *z *= s;
        }
    }
    out
}

/// F_B = (1 + 2v0²)/3 and F_C = (1 + 2|v0'|²)/3.
pub fn closed_form_fidelities(v: &VCoefficients) -> (f64, f64) {
    let v0 = v.v0();
    let v0p = v.primed()[0].norm_sqr();
    ((1.0 + 2.0 * v0 * v0) / 3.0, (1.0 + 2.0 * v0p) / 3.0)
}

/// Diagonal of the spin-correlation matrix, T_k = tr(σ_k ⊗ σ_k ρ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationDiagonal {
    pub t: [f64; 3],
}

impl CorrelationDiagonal {
    pub fn new(t: [f64; 3]) -> Self {
        Self { t }
    }

    pub fn abs(&self) -> [f64; 3] {
        self.t.map(f64::abs)
    }

    /// |T x⃗|
    pub fn steered_length(&self, x: [f64; 3]) -> f64 {
        let [a, b, c] = self.t;
        ((a * x[0]).powi(2) + (b * x[1]).powi(2) + (c * x[2]).powi(2)).sqrt()
    }
}

/// Full 3×3 correlation matrix tr(σ_k ⊗ σ_l ρ).
pub fn correlation_matrix(rho: &DensityMatrix) -> Result<[[f64; 3]; 3]> {
    if rho.dims() != [2, 2] {
        return Err(Error::DimensionMismatch(format!(
            "correlations need a two-qubit state, got dims {:?}",
            rho.dims()
        )));
    }
    let s = paulis();
    let mut t = [[0.0; 3]; 3];
    for (k, sk) in s.iter().enumerate() {
        for (l, sl) in s.iter().enumerate() {
            t[k][l] = rho.matrix().trace_product(&kron(sk, sl)).re;
        }
    }
    Ok(t)
}

pub fn correlation_diagonal(rho: &DensityMatrix) -> Result<CorrelationDiagonal> {
    let t = correlation_matrix(rho)?;
    for (k, row) in t.iter().enumerate() {
        for (l, &value) in row.iter().enumerate() {
            if k != l && value.abs() > BELL_DIAGONAL_TOL {
                return Err(Error::NotBellDiagonal { row: k, col: l, value });
            }
        }
    }
    Ok(CorrelationDiagonal::new([t[0][0], t[1][1], t[2][2]]))
}

/// Sphere average of |T x⃗|, the mean length of the steered Bloch vectors.
pub fn steering_s(t: &CorrelationDiagonal, quad: &SphereQuadrature) -> f64 {
    steering_s_estimate(t, quad).value
}

pub fn steering_s_estimate(t: &CorrelationDiagonal, quad: &SphereQuadrature) -> Estimate {
    quad.average(|x| t.steered_length(x))
}

pub fn is_steerable(s: f64) -> bool {
    s > STEERING_THRESHOLD
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteeringPair {
    pub t_ab: CorrelationDiagonal,
    pub t_ac: CorrelationDiagonal,
    pub s_ab: f64,
    pub s_ac: f64,
    pub steerable_ab: bool,
    pub steerable_ac: bool,
}

pub fn steering_pair(v: &VCoefficients, quad: &SphereQuadrature) -> Result<SteeringPair> {
    let (ab, ac) = clone_pair(v)?;
    let t_ab = correlation_diagonal(&ab)?;
    let t_ac = correlation_diagonal(&ac)?;
    let s_ab = steering_s(&t_ab, quad);
    let s_ac = steering_s(&t_ac, quad);
    Ok(SteeringPair {
        t_ab,
        t_ac,
        s_ab,
        s_ac,
        steerable_ab: is_steerable(s_ab),
        steerable_ac: is_steerable(s_ac),
    })
}

/// (1−F_B) + (1−F_C) + √((1−F_B)(1−F_C)); the cloner keeps this ≥ 1/2.
pub fn nocloning_lhs(f_b: f64, f_c: f64) -> f64 {
    let (a, b) = (1.0 - f_b, 1.0 - f_c);
    a + b + (a * b).max(0.0).sqrt()
}

/// (1−S_AB) + (1−S_AC) + √((1−S_AB)(1−S_AC)); the cloner keeps this ≥ 1.
pub fn steering_lhs(s_ab: f64, s_ac: f64) -> f64 {
    nocloning_lhs(s_ab, s_ac)
}

/// The two closed-form candidates for |T_k| of the Alice–Bob copy:
/// |2(v0² − |v_k|²) − 1| and |2(v0² + |v_k|²) − 1|.
pub fn t_closed_form_candidates(v: &VCoefficients) -> ([f64; 3], [f64; 3]) {
    let w = v.weights();
    let minus = [1, 2, 3].map(|k| (2.0 * (w[0] - w[k]) - 1.0).abs());
    let plus = [1, 2, 3].map(|k| (2.0 * (w[0] + w[k]) - 1.0).abs());
    (minus, plus)
}

/// Everything reported for one cloner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteeringReport {
    pub v: VCoefficients,
    pub f_b: f64,
    pub f_c: f64,
    pub steering: SteeringPair,
    pub nocloning_lhs: f64,
    pub steering_lhs: f64,
}

/// Fidelities from the closed form, steering from the quadrature.
pub fn report(v: &VCoefficients, quad: &SphereQuadrature) -> Result<SteeringReport> {
    let (f_b, f_c) = closed_form_fidelities(v);
    let steering = steering_pair(v, quad)?;
    Ok(SteeringReport {
        v: *v,
        f_b,
        f_c,
        nocloning_lhs: nocloning_lhs(f_b, f_c),
        steering_lhs: steering_lhs(steering.s_ab, steering.s_ac),
        steering,
    })
}
