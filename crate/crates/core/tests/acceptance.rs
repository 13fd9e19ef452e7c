//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Reference values are computed here from
//! first principles rather than through the library's closed forms.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::process::{Command, ExitCode};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use steerclone::cloning::{
    apply_cerf_operator, omega_state, primed, protocol_input, swap_bc, VCoefficients,
};
use steerclone::metrics::{
    averaged_fidelities, closed_form_fidelities, correlation_diagonal, is_steerable, nocloning_lhs,
    steering_lhs, steering_pair, steering_s, CorrelationDiagonal, SphereQuadrature,
};
use steerclone::perfect::perfect_check;
use steerclone::qmat::{kron, CMatrix};
use steerclone::quantum::random::{random_basis, random_density, random_pure};
use steerclone::quantum::state_to_json;
use steerclone::sweep::{region_points, RegionMode};
use steerclone::DensityMatrix;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn raw_gaussian_v(rng: &mut ChaCha20Rng, complex: bool) -> [Complex64; 4] {
    let v: [Complex64; 4] = std::array::from_fn(|_| {
        let re: f64 = StandardNormal.sample(rng);
        if complex {
            Complex64::new(re, StandardNormal.sample(rng))
        } else {
            Complex64::new(re.abs(), 0.0)
        }
    });
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.map(|z| z / n)
}

/// F_B, F_C from the raw amplitudes: the copies' Bell weights are |v_k|² and
/// |Σ_k v_k / 2|², and a Bell-diagonal clone of |Φ+⟩ with Φ+ weight p has
/// direction-averaged fidelity (1 + 2p)/3.
fn fidelity_oracle(v: &[Complex64; 4]) -> (f64, f64) {
    let p_b = v[0].norm_sqr();
    let p_c = ((v[0] + v[1] + v[2] + v[3]) * 0.5).norm_sqr();
    ((1.0 + 2.0 * p_b) / 3.0, (1.0 + 2.0 * p_c) / 3.0)
}

fn lhs_oracle(a: f64, b: f64) -> f64 {
    // a or b can exceed 1 by roundoff
    (1.0 - a) + (1.0 - b) + ((1.0 - a) * (1.0 - b)).max(0.0).sqrt()
}

fn fidelity_oracle_agreement() -> Check {
    let start = Instant::now();
    let grid = SphereQuadrature::default_grid();
    let mc = SphereQuadrature::parse("mc:100000:2024").unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(1);
    let (mut worst_grid, mut worst_z) = (0.0f64, 0.0f64);
    for i in 0..100 {
        let raw = raw_gaussian_v(&mut rng, i >= 50);
        let (fb, fc) = fidelity_oracle(&raw);
        let v = VCoefficients::new(raw).map_err(|e| e.to_string())?;
        let g = averaged_fidelities(&v, &grid).map_err(|e| e.to_string())?;
        let m = averaged_fidelities(&v, &mc).map_err(|e| e.to_string())?;
        for (est, want) in [(g.f_b, fb), (g.f_c, fc)] {
            worst_grid = worst_grid.max((est.value - want).abs());
        }
        for (est, want) in [(m.f_b, fb), (m.f_c, fc)] {
            let err = (est.value - want).abs();
            ensure(err <= 3.0 * est.std_err + 1e-12, || {
                format!("v #{i}: mc error {err:.3e} exceeds 3 std errors ({:.3e})", est.std_err)
            })?;
            if est.std_err > 0.0 {
                worst_z = worst_z.max(err / est.std_err);
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(worst_grid <= 1e-8, || format!("grid error {worst_grid:.3e} > 1e-8"))?;
    ensure(secs <= 60.0, || format!("took {secs:.1} s > 60 s"))?;
    Ok(format!(
        "grid max err {worst_grid:.1e}, mc max {worst_z:.2} std errs, {secs:.1} s"
    ))
}

fn endpoint_fidelities() -> Check {
    let v = VCoefficients::from_real([1.0, 0.0, 0.0, 0.0]).unwrap();
    let (fb, fc) = closed_form_fidelities(&v);
    ensure((fb - 1.0).abs() <= 1e-12 && (fc - 0.5).abs() <= 1e-12, || {
        format!("closed form ({fb}, {fc})")
    })?;
    let q = averaged_fidelities(&v, &SphereQuadrature::default_grid()).map_err(|e| e.to_string())?;
    let (qb, qc) = (q.f_b.value, q.f_c.value);
    ensure((qb - 1.0).abs() <= 1e-8 && (qc - 0.5).abs() <= 1e-8, || {
        format!("quadrature ({qb}, {qc})")
    })?;
    Ok(format!("closed form ({fb}, {fc}), quadrature ({qb:.12}, {qc:.12})"))
}

fn nocloning_bound() -> Check {
    let mut rng = ChaCha20Rng::seed_from_u64(2);
    let mut min = f64::INFINITY;
    for i in 0..10_000 {
        let raw = raw_gaussian_v(&mut rng, i % 2 == 1);
        let v = VCoefficients::new(raw).map_err(|e| e.to_string())?;
        let (fb, fc) = closed_form_fidelities(&v);
        let (ob, oc) = fidelity_oracle(&raw);
        ensure((fb - ob).abs() <= 1e-12 && (fc - oc).abs() <= 1e-12, || {
            format!("closed form disagrees with oracle at {raw:?}")
        })?;
        let lhs = lhs_oracle(fb, fc);
        ensure((lhs - nocloning_lhs(fb, fc)).abs() <= 1e-14, || "lhs formula mismatch".into())?;
        min = min.min(lhs);
    }
    ensure(min >= 0.5 - 1e-9, || format!("min lhs {min} < 1/2"))?;

    // optimal curve v1 = v2 = v3 = √((1 − v0²)/3), which covers F_B from 1/2
    // to 1 as v0 runs over [1/2, 1]
    let mut worst = 0.0f64;
    for i in 0..400 {
        let v0 = 0.5 + 0.5 * i as f64 / 399.0;
        let s = ((1.0 - v0 * v0) / 3.0).sqrt();
        let raw = [v0, s, s, s].map(|x| Complex64::new(x, 0.0));
        let (fb, fc) = fidelity_oracle(&raw);
        worst = worst.max((lhs_oracle(fb, fc) - 0.5).abs());
    }
    ensure(worst <= 1e-9, || format!("equality off by {worst:.3e}"))?;

    let sym = VCoefficients::symmetric();
    let (fb, fc) = closed_form_fidelities(&sym);
    ensure((fb - 5.0 / 6.0).abs() <= 1e-9 && (fc - 5.0 / 6.0).abs() <= 1e-9, || {
        format!("symmetric point ({fb}, {fc})")
    })?;

    // same curve below v0 = 1/2: strictly above the bound
    let below = (0..50)
        .map(|i| {
            let v0 = 0.49 * i as f64 / 49.0;
            let s = ((1.0 - v0 * v0) / 3.0).sqrt();
            let (fb, fc) = fidelity_oracle(&[v0, s, s, s].map(|x| Complex64::new(x, 0.0)));
            lhs_oracle(fb, fc) - 0.5
        })
        .fold(f64::INFINITY, f64::min);
    Ok(format!(
        "min lhs {min:.6} over 1e4 v; equality err {worst:.1e} on v0 in [1/2, 1]; \
         v0 < 1/2 branch exceeds bound by >= {below:.2e}"
    ))
}

fn steering_measure_anchors() -> Check {
    let q = SphereQuadrature::default_grid();
    let s = |t: [f64; 3]| steering_s(&CorrelationDiagonal::new(t), &q);
    let mut worst = 0.0f64;
    let mut track = |got: f64, want: f64| worst = worst.max((got - want).abs());
    track(s([1.0, 1.0, 1.0]), 1.0);
    for k in 1..=9 {
        let w = k as f64 / 10.0;
        track(s([w, w, w]), w);
    }
    for c in [1.0, -0.8, 0.3] {
        track(s([0.0, 0.0, c]), c.abs() / 2.0);
    }
    for a in [1.0, 0.6, -0.25] {
        track(s([a, a, 0.0]), a.abs() * PI / 4.0);
    }
    ensure(worst <= 1e-6, || format!("anchor error {worst:.3e}"))?;

    // Werner states w|Φ+⟩⟨Φ+| + (1 − w)𝟙/4 built directly
    let werner = |w: f64| {
        let phi = CMatrix::from_fn(4, |i, j| {
            let on = |k: usize| k == 0 || k == 3;
            Complex64::new(if on(i) && on(j) { 0.5 } else { 0.0 }, 0.0)
        });
        let m = &phi.scale_real(w) + &CMatrix::identity(4).scale_real((1.0 - w) / 4.0);
        DensityMatrix::new(m, vec![2, 2]).unwrap()
    };
    let flag = |w: f64| -> Result<(f64, bool), String> {
        let t = correlation_diagonal(&werner(w)).map_err(|e| e.to_string())?;
        let sv = steering_s(&t, &q);
        Ok((sv, is_steerable(sv)))
    };
    let (lo, lo_flag) = flag(0.5 - 1e-3)?;
    let (hi, hi_flag) = flag(0.5 + 1e-3)?;
    ensure(!lo_flag && hi_flag, || format!("flags S={lo}:{lo_flag}, S={hi}:{hi_flag}"))?;
    Ok(format!("max anchor err {worst:.1e}; Werner S={lo:.6} unsteerable, S={hi:.6} steerable"))
}

fn headline_double_steering() -> Check {
    let s = 1.0 / (2.0 * 3f64.sqrt());
    let v = VCoefficients::from_real([3f64.sqrt() / 2.0, s, s, s]).unwrap();
    let p = steering_pair(&v, &SphereQuadrature::default_grid()).map_err(|e| e.to_string())?;
    ensure((p.s_ab - 2.0 / 3.0).abs() <= 1e-6 && (p.s_ac - 2.0 / 3.0).abs() <= 1e-6, || {
        format!("(S_AB, S_AC) = ({}, {})", p.s_ab, p.s_ac)
    })?;
    ensure(p.steerable_ab && p.steerable_ac, || "not flagged steerable on both sides".into())?;
    let lhs = lhs_oracle(p.s_ab, p.s_ac);
    ensure((lhs - 1.0).abs() <= 1e-6, || format!("steering lhs {lhs}"))?;
    Ok(format!("S_AB = {:.9}, S_AC = {:.9}, lhs = {lhs:.9}", p.s_ab, p.s_ac))
}

fn steering_bound() -> Check {
    let q = SphereQuadrature::default_grid();
    let mut parts = Vec::new();
    for (mode, seed) in [(RegionMode::PositiveReal, 11), (RegionMode::Complex, 12)] {
        let mut min = f64::INFINITY;
        let mut both = 0usize;
        for v in region_points(10_000, mode, seed) {
            let p = steering_pair(&v, &q).map_err(|e| e.to_string())?;
            let lhs = lhs_oracle(p.s_ab, p.s_ac);
            ensure((lhs - steering_lhs(p.s_ab, p.s_ac)).abs() <= 1e-14, || "lhs formula mismatch".into())?;
            min = min.min(lhs);
            both += usize::from(p.steerable_ab && p.steerable_ac);
        }
        ensure(min >= 1.0 - 1e-9, || format!("{mode:?}: min lhs {min} < 1"))?;
        parts.push(format!("{mode:?} min {min:.6} ({both} double-steerable)"));
    }
    let v = VCoefficients::from_real([1.0, 0.0, 0.0, 0.0]).unwrap();
    let p = steering_pair(&v, &q).map_err(|e| e.to_string())?;
    ensure((p.s_ab - 1.0).abs() <= 1e-9 && p.s_ac.abs() <= 1e-9, || {
        format!("endpoint ({}, {})", p.s_ab, p.s_ac)
    })?;
    let lhs = lhs_oracle(p.s_ab, p.s_ac);
    ensure((lhs - 1.0).abs() <= 1e-9, || format!("endpoint lhs {lhs}"))?;
    Ok(format!("{}; endpoint lhs {lhs}", parts.join(", ")))
}

/// Σ_j p_j ρ^A_j ⊗ |β_j⟩⟨β_j| assembled here from a random basis.
fn classical_quantum(da: usize, db: usize, rng: &mut ChaCha20Rng) -> DensityMatrix {
    let basis = random_basis(db, rng);
    let raw: Vec<f64> = (0..db).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut m = CMatrix::zeros(da * db);
    for (beta, p) in basis.iter().zip(&raw) {
        let ra = random_density(vec![da], da, rng);
        m = &m + &kron(ra.matrix(), &CMatrix::outer(beta)).scale_real(p / total);
    }
    DensityMatrix::new(m.hermitian_part(), vec![da, db]).unwrap()
}

fn zero_discord_characterization() -> Check {
    let tol = 1e-9;
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    let dims = [(2, 2), (2, 3), (3, 2), (3, 3)];
    let mut worst_dev = 0.0f64;
    for i in 0..100 {
        let (da, db) = dims[i % 4];
        let rho = classical_quantum(da, db, &mut rng);
        let out = perfect_check(&rho, tol, i as u64).map_err(|e| e.to_string())?;
        let r = out
            .clone_report
            .as_ref()
            .ok_or_else(|| format!("cq state #{i} ({da}x{db}) not certified: {:.3e}", out.certificate.max_commutator))?;
        worst_dev = worst_dev.max(r.max_deviation_b).max(r.max_deviation_c);
        ensure(out.pass(), || format!("cq state #{i} ({da}x{db}) failed: {r:?}"))?;
    }
    ensure(worst_dev <= 1e-9, || format!("deviation {worst_dev:.3e}"))?;

    let mut min_witness = f64::INFINITY;
    for i in 0..100 {
        let (da, db) = dims[i % 4];
        let rho = if i < 50 {
            random_pure(vec![da, db], &mut rng)
        } else {
            random_density(vec![da, db], da * db, &mut rng)
        };
        let out = perfect_check(&rho, tol, i as u64).map_err(|e| e.to_string())?;
        ensure(!out.pass(), || format!("non-classical state #{i} passed"))?;
        min_witness = min_witness.min(out.certificate.max_commutator);
    }
    ensure(min_witness > tol, || format!("witness {min_witness:.3e} not positive"))?;

    // Φ+ through the command-line path
    let dir = std::env::temp_dir().join(format!("steerclone_acceptance_{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let phi = DensityMatrix::from_ket(&[h, zero, zero, h], vec![2, 2]).unwrap();
    let path = dir.join("phi.json");
    std::fs::write(&path, state_to_json(&phi)).map_err(|e| e.to_string())?;
    let o = Command::new(env!("CARGO_BIN_EXE_steerclone"))
        .args(["perfect", "--state"])
        .arg(&path)
        .output()
        .map_err(|e| e.to_string())?;
    let _ = std::fs::remove_dir_all(&dir);
    let text = String::from_utf8_lossy(&o.stdout);
    let witness: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("witness="))
        .ok_or("no witness printed")?
        .parse()
        .map_err(|_| "unparseable witness".to_string())?;
    ensure(o.status.code() == Some(1) && text.contains("FAIL"), || "Φ+ did not FAIL".into())?;
    ensure((witness - FRAC_1_SQRT_2).abs() <= 1e-9, || format!("Φ+ witness {witness}"))?;
    Ok(format!(
        "100 cq PASS (max dev {worst_dev:.1e}); 100 others FAIL (min witness {min_witness:.2e}); Φ+ witness {witness}"
    ))
}

fn bell_ket(kind: usize) -> [Complex64; 4] {
    // slot order Φ+, Ψ+, Ψ−, Φ−
    let h = FRAC_1_SQRT_2;
    let r = |a: f64, b: f64, c: f64, d: f64| [a, b, c, d].map(|x| Complex64::new(x * h, 0.0));
    match kind {
        0 => r(1.0, 0.0, 0.0, 1.0),
        1 => r(0.0, 1.0, 1.0, 0.0),
        2 => r(0.0, 1.0, -1.0, 0.0),
        _ => r(1.0, 0.0, 0.0, -1.0),
    }
}

fn omega_oracle(v: &[Complex64; 4]) -> Vec<Complex64> {
    let mut ket = vec![Complex64::new(0.0, 0.0); 16];
    for (k, c) in v.iter().enumerate() {
        let b = bell_ket(k);
        for i in 0..4 {
            for j in 0..4 {
                ket[4 * i + j] += c * b[i] * b[j];
            }
        }
    }
    ket
}

fn cross_construction() -> Check {
    let mut rng = ChaCha20Rng::seed_from_u64(9);
    let (mut e_apply, mut e_swap, mut e_inv) = (0.0f64, 0.0f64, 0.0f64);
    let max_diff = |a: &[Complex64], b: &[Complex64]| {
        a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    };
    for _ in 0..100 {
        let v = VCoefficients::new(raw_gaussian_v(&mut rng, true)).unwrap();
        let omega = omega_state(&v);
        ensure(max_diff(&omega.ket, &omega_oracle(&v.amplitudes())) <= 1e-12, || {
            "omega_state disagrees with direct construction".into()
        })?;
        let applied = apply_cerf_operator(&v, &protocol_input()).map_err(|e| e.to_string())?;
        e_apply = e_apply.max(max_diff(&applied.ket, &omega.ket));

        // (v0 + v1 + v2 + v3)/2 etc., written out independently of the library
        let [a, b, c, d] = v.amplitudes();
        let vp = [
            (a + b + c + d) * 0.5,
            (a + b - c - d) * 0.5,
            (a - b + c - d) * 0.5,
            (a - b - c + d) * 0.5,
        ];
        let lib_p = primed(&v.amplitudes());
        ensure(max_diff(&vp, &lib_p) <= 1e-12, || format!("primed {lib_p:?} vs {vp:?}"))?;
        e_swap = e_swap.max(max_diff(&swap_bc(&omega.ket), &omega_oracle(&vp)));
        let projector_gap = CMatrix::outer(&swap_bc(&omega.ket))
            .max_abs_diff(&omega_state(&VCoefficients::new(lib_p).unwrap()).density());
        e_swap = e_swap.max(projector_gap);
        e_inv = e_inv.max(max_diff(&primed(&lib_p), &v.amplitudes()));
    }
    ensure(e_apply <= 1e-12, || format!("operator vs direct {e_apply:.3e}"))?;
    ensure(e_swap <= 1e-10, || format!("swap vs primed {e_swap:.3e}"))?;
    ensure(e_inv <= 1e-12, || format!("involution {e_inv:.3e}"))?;
    Ok(format!("operator {e_apply:.1e}, swap {e_swap:.1e}, involution {e_inv:.1e}"))
}

fn parse_csv(text: &str) -> Result<Vec<Vec<f64>>, String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty csv")?;
    ensure(
        header == "v0,v1,v2,v3,FB,FC,SAB,SAC,nocloning_lhs,steering_lhs,steerable_AB,steerable_AC",
        || format!("header {header}"),
    )?;
    lines
        .map(|l| {
            l.split(',')
                .map(|x| x.parse::<f64>().map_err(|_| format!("bad cell {x:?}")))
                .collect()
        })
        .collect()
}

fn curve_fixtures() -> Check {
    let dir = std::env::temp_dir().join(format!("steerclone_curves_{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut summary = Vec::new();
    let targets: [(&str, &[(f64, f64)]); 2] =
        [("f3", &[(1.0, 0.0), (0.5, 0.5)]), ("sym", &[(1.0, 0.0), (2.0 / 3.0, 2.0 / 3.0)])];
    for (family, points) in targets {
        let path = dir.join(format!("{family}.csv"));
        let o = Command::new(env!("CARGO_BIN_EXE_steerclone"))
            .args(["sweep", "--family", family, "--steps", "601", "--out"])
            .arg(&path)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(o.status.success(), || format!("{family} sweep failed"))?;
        let rows = parse_csv(&std::fs::read_to_string(&path).map_err(|e| e.to_string())?)?;
        ensure(rows.len() == 601, || format!("{family}: {} rows", rows.len()))?;
        for r in &rows {
            ensure(r[8] >= 0.5 - 1e-9 && r[9] >= 1.0 - 1e-9, || format!("{family}: row {r:?} breaks a bound"))?;
        }
        for &(sab, sac) in points {
            let gap = rows
                .iter()
                .map(|r| (r[6] - sab).abs().max((r[7] - sac).abs()))
                .fold(f64::INFINITY, f64::min);
            ensure(gap <= 1e-6, || format!("{family} misses ({sab}, {sac}) by {gap:.3e}"))?;
            summary.push(format!("{family} ({sab:.4}, {sac:.4}) gap {gap:.0e}"));
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(summary.join("; "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("fidelity-oracle", fidelity_oracle_agreement),
        ("endpoint-fidelities", endpoint_fidelities),
        ("nocloning-bound", nocloning_bound),
        ("steering-anchors", steering_measure_anchors),
        ("double-steering", headline_double_steering),
        ("steering-bound", steering_bound),
        ("zero-discord", zero_discord_characterization),
        ("cross-construction", cross_construction),
        ("curve-fixtures", curve_fixtures),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let result = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {name:<20} {detail} [{secs:.1}s]"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name:<20} {why} [{secs:.1}s]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
