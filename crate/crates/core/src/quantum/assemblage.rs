use crate::error::{Error, Result};
use crate::qmat::{herm_eig, kron, partial_trace, CMatrix};
use crate::quantum::measurement::{su_generators, BinaryMeasurement, MeasurementLabel};
use crate::quantum::state::DensityMatrix;

/// Unnormalized conditional state of the steered party for one (setting, outcome).
#[derive(Debug, Clone)]
pub struct AssemblageEntry {
    pub setting: usize,
    pub label: MeasurementLabel,
    pub outcome: i8,
    pub state: CMatrix,
    pub probability: f64,
}

impl AssemblageEntry {
    /// State divided by its probability, `None` for a zero-probability outcome.
    pub fn normalized(&self) -> Option<CMatrix> {
        (self.probability > 0.0).then(|| self.state.scale_real(1.0 / self.probability))
    }
}

#[derive(Debug, Clone)]
pub struct Assemblage {
    pub entries: Vec<AssemblageEntry>,
    pub reduced_state: DensityMatrix,
}

impl Assemblage {
    pub fn get(&self, setting: usize, outcome: i8) -> Option<&AssemblageEntry> {
        self.entries
            .iter()
            .find(|e| e.setting == setting && e.outcome == outcome)
    }

    pub fn settings(&self) -> usize {
        self.entries.iter().map(|e| e.setting + 1).max().unwrap_or(0)
    }

    /// Largest deviation across the no-signaling and trace conditions:
    /// |P − tr ρ| and ‖Σ_a ρ_a − ρ_B‖_F.
    pub fn invariant_violation(&self) -> f64 {
        let mut worst = 0.0f64;
        for e in &self.entries {
            worst = worst.max((e.probability - e.state.trace().re).abs());
        }
        let rb = self.reduced_state.matrix();
        for s in 0..self.settings() {
            let sum = self
                .entries
                .iter()
                .filter(|e| e.setting == s)
                .fold(CMatrix::zeros(rb.dim()), |acc, e| &acc + &e.state);
            worst = worst.max(sum.distance(rb));
        }
        worst
    }

    /// Smallest eigenvalue over all conditional states.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        let mut lo = f64::INFINITY;
        for e in &self.entries {
            lo = lo.min(*herm_eig(&e.state.hermitian_part())?.values.last().unwrap());
        }
        Ok(lo)
    }
}

/// Conditional states ρ_a^x = tr_A[(Π^x_a ⊗ 𝟙) ρ_AB] of the second party.
pub fn assemblage(rho: &DensityMatrix, measurements: &[BinaryMeasurement]) -> Result<Assemblage> {
    let (da, db) = rho.bipartite_dims()?;
    let id_b = CMatrix::identity(db);
    let mut entries = Vec::with_capacity(2 * measurements.len());
    for (setting, pair) in measurements.iter().enumerate() {
        for el in pair {
            if el.operator.dim() != da {
                return Err(Error::DimensionMismatch(format!(
                    "measurement acts on dim {}, first subsystem has dim {da}",
                    el.operator.dim()
                )));
            }
            let lifted = kron(&el.operator, &id_b);
            let state = partial_trace(&(&lifted * rho.matrix()), &[da, db], &[1])?.hermitian_part();
            let probability = state.trace().re;
            entries.push(AssemblageEntry {
                setting,
                label: el.label,
                outcome: el.outcome,
                state,
                probability,
            });
        }
    }
    Ok(Assemblage {
        entries,
        reduced_state: rho.reduce(&[1])?,
    })
}

/// η_k = (d/2)·tr_A[(λ_k ⊗ 𝟙) ρ_AB], one per SU(d_A) generator.
pub fn eta_operators(rho: &DensityMatrix) -> Result<Vec<CMatrix>> {
    let (da, db) = rho.bipartite_dims()?;
    let id_b = CMatrix::identity(db);
    su_generators(da)
        .iter()
        .map(|g| {
            let lifted = kron(g, &id_b);
            Ok(partial_trace(&(&lifted * rho.matrix()), &[da, db], &[1])?
                .hermitian_part()
                .scale_real(da as f64 / 2.0))
        })
        .collect()
}

/// (1/d)(𝟙 ⊗ ρ_B + Σ_k λ_k ⊗ η_k)
pub fn reconstruct_from_eta(da: usize, rho_b: &CMatrix, etas: &[CMatrix]) -> CMatrix {
    let gens = su_generators(da);
    let base = kron(&CMatrix::identity(da), rho_b);
    gens.iter()
        .zip(etas)
        .fold(base, |acc, (g, eta)| &acc + &kron(g, eta))
        .scale_real(1.0 / da as f64)
}
