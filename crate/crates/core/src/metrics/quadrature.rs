//! Averages over uniformly distributed directions on the unit sphere.
//!
//! Two schemes share one interface:
//!
//! * `grid:<nθ>x<nφ>`: product Gauss–Legendre rule. The polar angle is split
//!   at the equator and the azimuth into four quadrants, with Gauss–Legendre
//!   nodes on each piece. Integrands of the form |T x⃗| with diagonal T are
//!   smooth inside every octant, so the rule converges spectrally even when
//!   some T_k vanish and the integrand has kinks on coordinate planes.
//! * `mc:<n>:<seed>`: n seeded uniform samples with equal weights.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quantum::measurement::random_direction;

pub const DEFAULT_SCHEME: &str = "grid:64x128";
const CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureScheme {
    MonteCarlo { samples: usize, seed: u64 },
    Grid { n_theta: usize, n_phi: usize },
}

impl FromStr for QuadratureScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad quadrature scheme {s:?}; use mc:<n>:<seed> or grid:<nθ>x<nφ>"));
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "mc" => {
                let (n, seed) = rest.split_once(':').ok_or_else(bad)?;
                let samples: usize = n.parse().map_err(|_| bad())?;
                let seed: u64 = seed.parse().map_err(|_| bad())?;
                if samples == 0 {
                    return Err(bad());
                }
                Ok(Self::MonteCarlo { samples, seed })
            }
            "grid" => {
                let (a, b) = rest.split_once('x').ok_or_else(bad)?;
                let n_theta: usize = a.parse().map_err(|_| bad())?;
                let n_phi: usize = b.parse().map_err(|_| bad())?;
                if n_theta == 0 || !n_theta.is_multiple_of(2) || n_phi == 0 || !n_phi.is_multiple_of(4) {
                    return Err(Error::Parse(format!(
                        "grid needs an even nθ and an nφ divisible by 4, got {n_theta}x{n_phi}"
                    )));
                }
                Ok(Self::Grid { n_theta, n_phi })
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for QuadratureScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::MonteCarlo { samples, seed } => write!(f, "mc:{samples}:{seed}"),
            Self::Grid { n_theta, n_phi } => write!(f, "grid:{n_theta}x{n_phi}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub direction: [f64; 3],
    pub weight: f64,
}

/// A weighted average over sphere directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    /// Monte Carlo standard error; zero for deterministic rules.
    pub std_err: f64,
}

#[derive(Debug, Clone)]
pub struct SphereQuadrature {
    scheme: QuadratureScheme,
    nodes: Vec<Node>,
}

impl SphereQuadrature {
    pub fn new(scheme: QuadratureScheme) -> Self {
        let nodes = match scheme {
            QuadratureScheme::Grid { n_theta, n_phi } => grid_nodes(n_theta, n_phi),
            QuadratureScheme::MonteCarlo { samples, seed } => {
                let mut rng = ChaCha20Rng::seed_from_u64(seed);
                let w = 1.0 / samples as f64;
                (0..samples)
                    .map(|_| Node {
                        direction: random_direction(&mut rng),
                        weight: w,
                    })
                    .collect()
            }
        };
        Self { scheme, nodes }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(Self::new(s.parse()?))
    }

    pub fn default_grid() -> Self {
        Self::parse(DEFAULT_SCHEME).expect("default scheme parses")
    }

    pub fn scheme(&self) -> QuadratureScheme {
        self.scheme
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn is_monte_carlo(&self) -> bool {
        matches!(self.scheme, QuadratureScheme::MonteCarlo { .. })
    }

    /// Weighted average Σ q_x f(x⃗) with compensated summation.
    pub fn average(&self, f: impl Fn([f64; 3]) -> f64 + Sync) -> Estimate {
        let mut out = [Estimate { value: 0.0, std_err: 0.0 }];
        self.average_many::<1>(|x| [f(x)], &mut out);
        out[0]
    }

    /// Averages several integrands sharing per-node work. Chunks are reduced
    /// in a fixed order so the result does not depend on the worker count.
    pub fn average_many<const N: usize>(
        &self,
        f: impl Fn([f64; 3]) -> [f64; N] + Sync,
        out: &mut [Estimate; N],
    ) {
        let partials: Vec<([Neumaier; N], [Neumaier; N])> = self
            .nodes
            .par_chunks(CHUNK)
            .map(|chunk| {
                let mut s = [Neumaier::default(); N];
                let mut s2 = [Neumaier::default(); N];
                for node in chunk {
                    let vals = f(node.direction);
                    for k in 0..N {
                        s[k].add(node.weight * vals[k]);
                        s2[k].add(node.weight * vals[k] * vals[k]);
                    }
                }
                (s, s2)
            })
            .collect();
        let mc = self.is_monte_carlo();
        let n = self.nodes.len() as f64;
        for k in 0..N {
            let mut s = Neumaier::default();
            let mut s2 = Neumaier::default();
            for (a, b) in &partials {
                s.add(a[k].total());
                s2.add(b[k].total());
            }
            let mean = s.total();
            let std_err = if mc && n > 1.0 {
                let var = (s2.total() - mean * mean).max(0.0) * n / (n - 1.0);
                (var / n).sqrt()
            } else {
                0.0
            };
            out[k] = Estimate { value: mean, std_err };
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = vec![(0.0, 0.0); n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[i] = (-x, w);
        out[n - 1 - i] = (x, w);
    }
    out
}

// P_n(x) and P_n'(x) by the three-term recurrence
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn grid_nodes(n_theta: usize, n_phi: usize) -> Vec<Node> {
    let gt = gauss_legendre(n_theta / 2);
    let gp = gauss_legendre(n_phi / 4);
    let mut nodes = Vec::with_capacity(n_theta * n_phi);
    let q = FRAC_PI_2 / 2.0;
    for hemi in 0..2 {
        for &(xt, wt) in &gt {
            let theta = FRAC_PI_2 * hemi as f64 + q * (xt + 1.0);
            let (st, ct) = theta.sin_cos();
            for quad in 0..4 {
                for &(xp, wp) in &gp {
                    let phi = FRAC_PI_2 * quad as f64 + q * (xp + 1.0);
                    let (sp, cp) = phi.sin_cos();
                    let w = wt * q * st * wp * q / (4.0 * PI);
                    nodes.push(Node {
                        direction: [st * cp, st * sp, ct],
                        weight: w,
                    });
                }
            }
        }
    }
    let total: f64 = nodes.iter().map(|n| n.weight).sum();
    nodes.iter_mut().for_each(|n| n.weight /= total);
    nodes
}
