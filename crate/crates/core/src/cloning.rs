//! Pauli (Cerf) cloning of the steered half of |Φ+⟩.
//!
//! The cloner is described by four amplitudes (v0, v1, v2, v3). Alice's
//! four-qubit output is
//!
//! ```text
//! |Ω⟩_ABCD = v0|Φ+⟩|Φ+⟩ + v1|Ψ+⟩|Ψ+⟩ + v2|Ψ−⟩|Ψ−⟩ + v3|Φ−⟩|Φ−⟩
//! ```
//!
//! which is built directly and treated as the reference. The operator
//! v0·𝟙 + Σ v_k σ_k⊗σ_k on B⊗C is only unitary for special v (its Bell-basis
//! eigenvalues v0 ± v1 ∓ v2 ± v3 need not have unit modulus), so
//! [`apply_cerf_operator`] is restricted to the single input the protocol
//! feeds it and serves as a cross-check.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qmat::{kron, kron_all, kron_ket, partial_trace, paulis, permute_ket, CMatrix, ZERO};
use crate::quantum::state::{bell_ket, BellKind, DensityMatrix};

const NORM_TOL: f64 = 1e-12;
/// Inputs further than this from unit norm are reported when normalized.
pub const NORM_WARN: f64 = 1e-6;

/// Bell state attached to each coefficient slot.
pub const SLOT_BELL: [BellKind; 4] = [
    BellKind::PhiPlus,
    BellKind::PsiPlus,
    BellKind::PsiMinus,
    BellKind::PhiMinus,
];

const QUBITS4: [usize; 4] = [2, 2, 2, 2];

/// Cloner amplitudes, normalized, with v0 real and nonnegative.
#[derive(Clone, Copy, PartialEq)]
pub struct VCoefficients {
    v: [Complex64; 4],
}

impl VCoefficients {
    /// Requires unit norm (within 1e-12); fixes the global phase.
    pub fn new(v: [Complex64; 4]) -> Result<Self> {
        let norm = norm(&v);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidCoefficients(format!(
                "sum of |v_k|^2 is {:.15}, expected 1",
                norm * norm
            )));
        }
        Ok(Self { v: canonical_phase(v) })
    }

    pub fn from_real(v: [f64; 4]) -> Result<Self> {
        Self::new(v.map(|x| Complex64::new(x, 0.0)))
    }

    /// Rescales to unit norm. Returns the input norm alongside.
    pub fn normalized(v: [Complex64; 4]) -> Result<(Self, f64)> {
        let n = norm(&v);
        if !n.is_finite() || n == 0.0 {
            return Err(Error::InvalidCoefficients("coefficients must not all vanish".into()));
        }
        let unit = v.map(|z| z / n);
        Ok((Self { v: canonical_phase(unit) }, n))
    }

    /// The symmetric cloner v = (√3/2, 1/(2√3), 1/(2√3), 1/(2√3)).
    pub fn symmetric() -> Self {
        let s = 1.0 / (2.0 * 3f64.sqrt());
        Self::from_real([3f64.sqrt() / 2.0, s, s, s]).expect("unit norm")
    }

    pub fn amplitudes(&self) -> [Complex64; 4] {
        self.v
    }

    pub fn v0(&self) -> f64 {
        self.v[0].re
    }

    /// |v_k|², which are the Bell weights of the Alice–Bob copy.
    pub fn weights(&self) -> [f64; 4] {
        self.v.map(|z| z.norm_sqr())
    }

    pub fn primed(&self) -> [Complex64; 4] {
        primed(&self.v)
    }

    /// |v'_k|², the Bell weights of the Alice–Charlie copy.
    pub fn primed_weights(&self) -> [f64; 4] {
        self.primed().map(|z| z.norm_sqr())
    }

    pub fn is_positive_real(&self) -> bool {
        self.v.iter().all(|z| z.im == 0.0 && z.re >= 0.0)
    }

    /// Parses "a,b,c,d" (reals) or "re:im,re:im,re:im,re:im" (complex).
    /// The result is normalized; the second value is the input norm.
    pub fn parse(s: &str) -> Result<(Self, f64)> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!(
                "expected 4 comma-separated coefficients, got {}",
                parts.len()
            )));
        }
        let mut v = [ZERO; 4];
        for (slot, p) in v.iter_mut().zip(&parts) {
            *slot = parse_complex(p)?;
        }
        Self::normalized(v)
    }
}

fn parse_complex(s: &str) -> Result<Complex64> {
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("cannot parse {t:?} as a number")))
            .and_then(|x| {
                if x.is_finite() {
                    Ok(x)
                } else {
                    Err(Error::Parse(format!("{t:?} is not finite")))
                }
            })
    };
    match s.split_once(':') {
        Some((re, im)) => Ok(Complex64::new(num(re)?, num(im)?)),
        None => Ok(Complex64::new(num(s)?, 0.0)),
    }
}

impl fmt::Debug for VCoefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.v.iter()).finish()
    }
}

fn norm(v: &[Complex64; 4]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

// v0 real ≥ 0, or the first nonzero amplitude when v0 = 0
fn canonical_phase(v: [Complex64; 4]) -> [Complex64; 4] {
    let Some(lead) = v.iter().find(|z| z.norm() > 0.0) else {
        return v;
    };
    let phase = lead.conj() / lead.norm();
    let mut out = v.map(|z| z * phase);
    if let Some(z) = out.iter_mut().find(|z| z.norm() > 0.0) {
        *z = Complex64::new(z.norm(), 0.0);
    }
    out
}

/// Coefficients of the same state after exchanging B and C.
pub fn primed(v: &[Complex64; 4]) -> [Complex64; 4] {
    let [v0, v1, v2, v3] = *v;
    [
        (v0 + v3 + v1 + v2) * 0.5,
        (v0 - v3 + v1 - v2) * 0.5,
        (v0 - v3 - v1 + v2) * 0.5,
        (v0 + v3 - v1 - v2) * 0.5,
    ]
}

/// The 16-amplitude state |Ω⟩ in A⊗B⊗C⊗D order.
#[derive(Debug, Clone, PartialEq)]
pub struct FourQubitState {
    pub ket: Vec<Complex64>,
    pub source: VCoefficients,
}

impl FourQubitState {
    pub fn norm(&self) -> f64 {
        self.ket.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn density(&self) -> CMatrix {
        CMatrix::outer(&self.ket)
    }
}

/// Σ_k v_k |B_k⟩_AB |B_k⟩_CD over the slot Bell states.
pub fn omega_state(v: &VCoefficients) -> FourQubitState {
    let mut ket = vec![ZERO; 16];
    for (&c, kind) in v.amplitudes().iter().zip(SLOT_BELL) {
        let b = bell_ket(kind);
        for (slot, z) in ket.iter_mut().zip(kron_ket(&b, &b)) {
            *slot += c * z;
        }
    }
    FourQubitState { ket, source: *v }
}

/// |Φ+⟩_AB ⊗ |Φ+⟩_CD
pub fn protocol_input() -> Vec<Complex64> {
    let b = bell_ket(BellKind::PhiPlus);
    kron_ket(&b, &b)
}

/// v0·𝟙 + Σ_k v_k σ_k ⊗ σ_k on B⊗C.
pub fn cerf_operator(v: &VCoefficients) -> CMatrix {
    let [v0, rest @ ..] = v.amplitudes();
    paulis()
        .iter()
        .zip(rest)
        .fold(CMatrix::identity(4).scale(v0), |acc, (s, vk)| {
            &acc + &kron(s, s).scale(vk)
        })
}

/// Applies the cloning operator on B⊗C to the protocol input.
pub fn apply_cerf_operator(v: &VCoefficients, input: &[Complex64]) -> Result<FourQubitState> {
    let reference = protocol_input();
    let dev = input
        .iter()
        .zip(&reference)
        .map(|(a, b)| (a - b).norm())
        .fold(if input.len() == 16 { 0.0 } else { f64::INFINITY }, f64::max);
    if dev > NORM_TOL {
        return Err(Error::Unsupported(
            "the cloning operator is only applied to |Φ+⟩_AB|Φ+⟩_CD".into(),
        ));
    }
    let id = CMatrix::identity(2);
    let full = kron_all(&[&id, &cerf_operator(v), &id]);
    Ok(FourQubitState {
        ket: full.apply(input),
        source: *v,
    })
}

/// Exchanges wires B and C.
pub fn swap_bc(ket: &[Complex64]) -> Vec<Complex64> {
    permute_ket(ket, &QUBITS4, &[0, 2, 1, 3]).expect("four-qubit ket")
}

/// Overlaps ⟨B_i|_AB ⟨B_j|_CD |ψ⟩ indexed by (i, j) over `BellKind::ALL`.
pub fn bell_expansion(ket: &[Complex64]) -> [[Complex64; 4]; 4] {
    let mut out = [[ZERO; 4]; 4];
    for (i, a) in BellKind::ALL.into_iter().enumerate() {
        for (j, b) in BellKind::ALL.into_iter().enumerate() {
            let basis = kron_ket(&bell_ket(a), &bell_ket(b));
            out[i][j] = basis.iter().zip(ket).map(|(x, y)| x.conj() * y).sum();
        }
    }
    out
}

/// The Alice–Bob and Alice–Charlie copies, by partial trace of |Ω⟩⟨Ω|.
pub fn clone_pair(v: &VCoefficients) -> Result<(DensityMatrix, DensityMatrix)> {
    let omega = omega_state(v).density();
    let ab = partial_trace(&omega, &QUBITS4, &[0, 1])?.hermitian_part();
    let ac = partial_trace(&omega, &QUBITS4, &[0, 2])?.hermitian_part();
    Ok((
        DensityMatrix::new(ab, vec![2, 2])?,
        DensityMatrix::new(ac, vec![2, 2])?,
    ))
}

/// Bell-diagonal state Σ_k w_k |B_k⟩⟨B_k| in slot order.
pub fn bell_diagonal(weights: [f64; 4]) -> Result<DensityMatrix> {
    let m = weights
        .iter()
        .zip(SLOT_BELL)
        .fold(CMatrix::zeros(4), |acc, (&w, kind)| {
            &acc + &CMatrix::outer(&bell_ket(kind)).scale_real(w)
        });
    DensityMatrix::new(m, vec![2, 2])
}

/// ⟨B_k|ρ|B_k⟩ in slot order.
pub fn bell_weights(rho: &DensityMatrix) -> [f64; 4] {
    SLOT_BELL.map(|kind| {
        let b = bell_ket(kind);
        let rb = rho.matrix().apply(&b);
        b.iter().zip(&rb).map(|(x, y)| x.conj() * y).sum::<Complex64>().re
    })
}

/// Largest |⟨B_i|ρ|B_j⟩| with i ≠ j.
pub fn bell_off_diagonal(rho: &DensityMatrix) -> f64 {
    let kets = BellKind::ALL.map(bell_ket);
    let mut worst = 0.0f64;
    for (i, a) in kets.iter().enumerate() {
        let ra = rho.matrix().apply(a);
        for (j, b) in kets.iter().enumerate() {
            if i != j {
                let z: Complex64 = b.iter().zip(&ra).map(|(x, y)| x.conj() * y).sum();
                worst = worst.max(z.norm());
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn primed_of_identity_cloner_is_uniform() {
        let p = primed(&[c(1.0, 0.0), ZERO, ZERO, ZERO]);
        for z in p {
            assert_abs_diff_eq!((z - 0.5).norm(), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn symmetric_point_is_fixed() {
        let v = VCoefficients::symmetric();
        let p = v.primed();
        for (a, b) in p.iter().zip(v.amplitudes()) {
            assert_abs_diff_eq!((a - b).norm(), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn canonical_phase_rules() {
        let v = VCoefficients::new([c(0.0, 0.6), c(0.0, 0.8), ZERO, ZERO]).unwrap();
        assert_eq!(v.amplitudes()[0], c(0.6, 0.0));
        assert_abs_diff_eq!((v.amplitudes()[1] - c(0.8, 0.0)).norm(), 0.0, epsilon = 1e-15);

        let v = VCoefficients::new([ZERO, c(0.0, -1.0), ZERO, ZERO]).unwrap();
        assert_eq!(v.amplitudes()[1], c(1.0, 0.0));
        assert!(v.is_positive_real());
    }

    #[test]
    fn unnormalized_rejected_by_new_but_normalized_by_parse() {
        assert!(VCoefficients::from_real([1.0, 1.0, 0.0, 0.0]).is_err());
        let (v, n) = VCoefficients::parse("1,1,0,0").unwrap();
        assert_abs_diff_eq!(n, 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(v.v0(), std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn parse_complex_pairs() {
        let (v, n) = VCoefficients::parse("0.5:0, 0:0.5, 0.5:0, 0:-0.5").unwrap();
        assert_abs_diff_eq!(n, 1.0, epsilon = 1e-15);
        assert_eq!(v.amplitudes()[1], c(0.0, 0.5));
        assert!(VCoefficients::parse("0.5,0.5").is_err());
        assert!(VCoefficients::parse("a,b,c,d").is_err());
        assert!(VCoefficients::parse("0,0,0,0").is_err());
        assert!(VCoefficients::parse("1:2:3,0,0,0").is_err());
    }

    #[test]
    fn omega_of_identity_cloner_is_bell_pair() {
        let v = VCoefficients::from_real([1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(omega_state(&v).ket, protocol_input());
    }

    #[test]
    fn sigma_x_cloner_gives_psi_plus_pair() {
        let v = VCoefficients::from_real([0.0, 1.0, 0.0, 0.0]).unwrap();
        let out = apply_cerf_operator(&v, &protocol_input()).unwrap();
        let psi = bell_ket(BellKind::PsiPlus);
        let want = kron_ket(&psi, &psi);
        for (a, b) in out.ket.iter().zip(&want) {
            assert_abs_diff_eq!((a - b).norm(), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn cerf_operator_rejects_other_inputs() {
        let v = VCoefficients::symmetric();
        let mut other = protocol_input();
        other.swap(0, 1);
        assert!(apply_cerf_operator(&v, &other).is_err());
        assert!(apply_cerf_operator(&v, &other[..4]).is_err());
    }

    #[test]
    fn cerf_operator_not_unitary_in_general() {
        // Bell-basis eigenvalues 0.8 ± 0.6
        let v = VCoefficients::from_real([0.8, 0.6, 0.0, 0.0]).unwrap();
        let u = cerf_operator(&v);
        let err = (&u.adjoint() * &u).distance(&CMatrix::identity(4));
        assert!(err > 0.1, "expected non-unitary, got {err}");
    }

    #[test]
    fn identity_cloner_copies() {
        let v = VCoefficients::from_real([1.0, 0.0, 0.0, 0.0]).unwrap();
        let (ab, ac) = clone_pair(&v).unwrap();
        let phi = CMatrix::outer(&bell_ket(BellKind::PhiPlus));
        assert!(ab.matrix().distance(&phi) < 1e-15);
        assert!(ac.matrix().distance(&CMatrix::identity(4).scale_real(0.25)) < 1e-15);
    }

    #[test]
    fn symmetric_cloner_weights() {
        let (ab, ac) = clone_pair(&VCoefficients::symmetric()).unwrap();
        let expect = [0.75, 1.0 / 12.0, 1.0 / 12.0, 1.0 / 12.0];
        for (w, e) in bell_weights(&ab).iter().zip(expect) {
            assert_abs_diff_eq!(*w, e, epsilon = 1e-14);
        }
        for (w, e) in bell_weights(&ac).iter().zip(expect) {
            assert_abs_diff_eq!(*w, e, epsilon = 1e-14);
        }
    }
}
