//! Parameter families, region sampling and CSV output for the cloner sweeps.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::cloning::VCoefficients;
use crate::error::{Error, Result};
use crate::metrics::{report, SphereQuadrature, SteeringReport};

pub const CSV_HEADER: &str =
    "v0,v1,v2,v3,FB,FC,SAB,SAC,nocloning_lhs,steering_lhs,steerable_AB,steerable_AC";
/// Rows must satisfy both trade-off inequalities to within this.
pub const ROW_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// v1 = v2 = v3
    Sym,
    /// v1 = v2, v3 = 0
    F2,
    /// v2 = v3 = 0
    F3,
    /// v1 = v2 = 4 v3
    Dashed,
    /// v1 = v2 = v3 / 4
    Dotted,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::Sym, Family::F2, Family::F3, Family::Dashed, Family::Dotted];

    /// Fixed direction of (v1, v2, v3).
    pub fn ratio(self) -> [f64; 3] {
        match self {
            Family::Sym => [1.0, 1.0, 1.0],
            Family::F2 => [1.0, 1.0, 0.0],
            Family::F3 => [1.0, 0.0, 0.0],
            Family::Dashed => [4.0, 4.0, 1.0],
            Family::Dotted => [1.0, 1.0, 4.0],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Sym => "sym",
            Family::F2 => "f2",
            Family::F3 => "f3",
            Family::Dashed => "dashed",
            Family::Dotted => "dotted",
        }
    }

    /// The family member with the given v0 ∈ [0, 1].
    pub fn point(self, v0: f64) -> Result<VCoefficients> {
        if !(0.0..=1.0).contains(&v0) {
            return Err(Error::InvalidCoefficients(format!("v0 = {v0} outside [0, 1]")));
        }
        let r = self.ratio();
        let len = r.iter().map(|x| x * x).sum::<f64>().sqrt();
        let rest = (1.0 - v0 * v0).max(0.0).sqrt() / len;
        VCoefficients::from_real([v0, rest * r[0], rest * r[1], rest * r[2]])
    }

    /// `steps` values of v0 in increasing order, v0 = cos θ with θ evenly
    /// spaced on [0, π/2]. Both ends are included; v0 = 1/√2 and √3/2 are hit
    /// exactly whenever steps − 1 is a multiple of 6.
    pub fn grid(steps: usize) -> Result<Vec<f64>> {
        if steps < 2 {
            return Err(Error::Parse(format!("steps must be at least 2, got {steps}")));
        }
        let n = steps - 1;
        Ok((0..steps)
            .map(|i| {
                let k = n - i;
                if k == 0 {
                    1.0
                } else if k == n {
                    0.0
                } else if 2 * k == n {
                    std::f64::consts::FRAC_1_SQRT_2
                } else if 3 * k == n {
                    3f64.sqrt() / 2.0
                } else {
                    (std::f64::consts::FRAC_PI_2 * k as f64 / n as f64).cos()
                }
            })
            .collect())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown family {s:?}; expected sym|f2|f3|dashed|dotted")))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionMode {
    PositiveReal,
    Complex,
}

impl FromStr for RegionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "positive-real" => Ok(RegionMode::PositiveReal),
            "complex" => Ok(RegionMode::Complex),
            _ => Err(Error::Parse(format!("unknown mode {s:?}; expected positive-real|complex"))),
        }
    }
}

/// One coefficient vector per index, each drawn from its own ChaCha20 stream.
pub fn region_point(mode: RegionMode, seed: u64, index: u64) -> VCoefficients {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    loop {
        let g: [f64; 8] = std::array::from_fn(|_| StandardNormal.sample(&mut rng));
        let v = match mode {
            RegionMode::PositiveReal => [0, 1, 2, 3].map(|k| Complex64::new(g[k].abs(), 0.0)),
            RegionMode::Complex => [0, 1, 2, 3].map(|k| Complex64::new(g[2 * k], g[2 * k + 1])),
        };
        if let Ok((v, _)) = VCoefficients::normalized(v) {
            return v;
        }
    }
}

pub fn region_points(samples: usize, mode: RegionMode, seed: u64) -> Vec<VCoefficients> {
    (0..samples as u64)
        .into_par_iter()
        .map(|i| region_point(mode, seed, i))
        .collect()
}

/// Reports for every v, in input order; fails on the first row that breaks
/// either inequality.
pub fn evaluate(points: &[VCoefficients], quad: &SphereQuadrature) -> Result<Vec<SteeringReport>> {
    let rows: Vec<SteeringReport> = points
        .par_iter()
        .map(|v| report(v, quad))
        .collect::<Result<_>>()?;
    for (i, r) in rows.iter().enumerate() {
        validate_row(r).map_err(|e| Error::InvariantViolation(format!("row {i}: {e}")))?;
    }
    Ok(rows)
}

pub fn validate_row(r: &SteeringReport) -> Result<()> {
    // NaN fails both checks
    if r.nocloning_lhs.is_nan() || r.nocloning_lhs < 0.5 - ROW_TOL {
        return Err(Error::InvariantViolation(format!(
            "nocloning_lhs = {} at v = {:?}",
            r.nocloning_lhs,
            r.v.amplitudes()
        )));
    }
    if r.steering_lhs.is_nan() || r.steering_lhs < 1.0 - ROW_TOL {
        return Err(Error::InvariantViolation(format!(
            "steering_lhs = {} at v = {:?}",
            r.steering_lhs,
            r.v.amplitudes()
        )));
    }
    Ok(())
}

pub fn family_sweep(family: Family, steps: usize, quad: &SphereQuadrature) -> Result<Vec<SteeringReport>> {
    let points = Family::grid(steps)?
        .into_iter()
        .map(|v0| family.point(v0))
        .collect::<Result<Vec<_>>>()?;
    evaluate(&points, quad)
}

pub fn region(samples: usize, mode: RegionMode, seed: u64, quad: &SphereQuadrature) -> Result<Vec<SteeringReport>> {
    if samples == 0 {
        return Err(Error::Parse("samples must be at least 1".into()));
    }
    evaluate(&region_points(samples, mode, seed), quad)
}

/// Nine significant digits, no exponent for ordinary magnitudes.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let s = format!("{:.8e}", x);
    let parsed: f64 = s.parse().unwrap_or(x);
    let mag = parsed.abs().log10().floor() as i32;
    if (-5..9).contains(&mag) {
        let decimals = (8 - mag).max(0) as usize;
        let mut out = format!("{:.*}", decimals, parsed);
        if out.contains('.') {
            while out.ends_with('0') {
                out.pop();
            }
            if out.ends_with('.') {
                out.pop();
            }
        }
        if out == "-0" {
            out = "0".into();
        }
        out
    } else {
        s
    }
}

pub fn csv_header(complex: bool) -> String {
    if complex {
        format!("{CSV_HEADER},v0_im,v1_im,v2_im,v3_im")
    } else {
        CSV_HEADER.to_string()
    }
}

pub fn csv_row(r: &SteeringReport, complex: bool) -> String {
    let v = r.v.amplitudes();
    let mut cols: Vec<String> = v.iter().map(|z| fmt_sig(z.re)).collect();
    cols.extend(
        [
            r.f_b,
            r.f_c,
            r.steering.s_ab,
            r.steering.s_ac,
            r.nocloning_lhs,
            r.steering_lhs,
        ]
        .map(fmt_sig),
    );
    cols.push(u8::from(r.steering.steerable_ab).to_string());
    cols.push(u8::from(r.steering.steerable_ac).to_string());
    if complex {
        cols.extend(v.iter().map(|z| fmt_sig(z.im)));
    }
    cols.join(",")
}

pub fn write_csv<W: Write>(mut w: W, rows: &[SteeringReport], complex: bool) -> Result<()> {
    writeln!(w, "{}", csv_header(complex))?;
    for r in rows {
        validate_row(r)?;
        writeln!(w, "{}", csv_row(r, complex))?;
    }
    w.flush()?;
    Ok(())
}
