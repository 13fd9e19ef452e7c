use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand};

use steerclone::cloning::{VCoefficients, NORM_WARN};
use steerclone::metrics::{quadrature::DEFAULT_SCHEME, report, SphereQuadrature};
use steerclone::perfect::{perfect_check, DEFAULT_SEED};
use steerclone::quantum::discord::DEFAULT_TOL;
use steerclone::quantum::load_state;
use steerclone::sweep::{family_sweep, region, write_csv, Family, RegionMode};

#[derive(Parser)]
#[command(name = "steerclone", version, about = "Cloning of quantum steering: checks, sweeps and region sampling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fidelities, steering and both inequality values for one cloner.
    Check {
        /// Four amplitudes "v0,v1,v2,v3"; complex entries as "re:im".
        #[arg(long = "v", allow_hyphen_values = true)]
        v: String,
        #[arg(long, default_value = DEFAULT_SCHEME)]
        quadrature: String,
    },
    /// Write one CSV row per point along a parameter family.
    Sweep {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = DEFAULT_SCHEME)]
        quadrature: String,
    },
    /// Write one CSV row per randomly sampled cloner.
    Region {
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value = "positive-real")]
        mode: RegionMode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = DEFAULT_SCHEME)]
        quadrature: String,
    },
    /// Decide whether a state's assemblage can be cloned perfectly.
    Perfect {
        /// JSON file {"dims": [dA, dB], "matrix": [[re, im], ...]}.
        #[arg(long)]
        state: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

fn init_threads() {
    let Ok(raw) = std::env::var("STEERCLONE_THREADS") else {
        return;
    };
    match raw.trim().parse::<usize>() {
        Ok(n) if n > 0 => {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        _ => eprintln!("warning: ignoring STEERCLONE_THREADS={raw:?}"),
    }
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    let mut cmd = Cli::command();
    cmd.build();
    let sub = cmd.find_subcommand_mut("check").map(|c| c.render_usage().to_string());
    eprintln!("error: {msg}");
    if let Some(u) = sub {
        eprintln!("\n{u}");
    }
    ExitCode::from(2)
}

fn quadrature(spec: &str) -> Result<SphereQuadrature, ExitCode> {
    SphereQuadrature::parse(spec).map_err(|e| {
        eprintln!("error: {e}");
        ExitCode::from(2)
    })
}

fn check(v: &str, quad: &str) -> ExitCode {
    let (v, norm) = match VCoefficients::parse(v) {
        Ok(x) => x,
        Err(e) => return usage_error(e),
    };
    if (norm - 1.0).abs() > NORM_WARN {
        eprintln!("warning: coefficients had norm {norm:.9}; normalized");
    }
    let quad = match quadrature(quad) {
        Ok(q) => q,
        Err(code) => return code,
    };
    let r = match report(&v, &quad) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    let a = v.amplitudes();
    if v.is_positive_real() {
        println!("v=({:.9}, {:.9}, {:.9}, {:.9})", a[0].re, a[1].re, a[2].re, a[3].re);
    } else {
        let s: Vec<String> = a.iter().map(|z| format!("{:.9}{:+.9}i", z.re, z.im)).collect();
        println!("v=({})", s.join(", "));
    }
    println!("FB={:.6}", r.f_b);
    println!("FC={:.6}", r.f_c);
    println!("SAB={:.6}", r.steering.s_ab);
    println!("SAC={:.6}", r.steering.s_ac);
    println!("nocloning_lhs={:.6}", r.nocloning_lhs);
    println!("steering_lhs={:.6}", r.steering_lhs);
    println!("steerable_AB={}", u8::from(r.steering.steerable_ab));
    println!("steerable_AC={}", u8::from(r.steering.steerable_ac));
    ExitCode::SUCCESS
}

fn write_rows(
    out: &PathBuf,
    rows: steerclone::Result<Vec<steerclone::SteeringReport>>,
    complex: bool,
) -> ExitCode {
    let rows = match rows {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    let result = File::create(out)
        .map_err(steerclone::Error::from)
        .and_then(|f| write_csv(BufWriter::new(f), &rows, complex));
    match result {
        Ok(()) => {
            eprintln!("wrote {} rows to {}", rows.len(), out.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}: {e}", out.display());
            ExitCode::FAILURE
        }
    }
}

fn perfect(path: &PathBuf, tol: f64, seed: u64) -> ExitCode {
    let rho = match load_state(path) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(2);
        }
    };
    let out = match perfect_check(&rho, tol, seed) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cert = &out.certificate;
    println!("max_commutator={:.3e}", cert.max_commutator);
    match &out.clone_report {
        Some(r) => {
            println!("zero_discord=1");
            if let Some(e) = cert.reconstruction_error {
                println!("reconstruction_error={e:.3e}");
            }
            if let Some(w) = &cert.weights {
                let w: Vec<String> = w.iter().map(|p| format!("{p:.9}")).collect();
                println!("weights={}", w.join(","));
            }
            println!("max_deviation_B={:.3e}", r.max_deviation_b);
            println!("max_deviation_C={:.3e}", r.max_deviation_c);
        }
        None => {
            println!("zero_discord=0");
            println!("witness={:.9}", cert.max_commutator);
        }
    }
    if out.pass() {
        println!("PASS");
        ExitCode::SUCCESS
    } else {
        println!("FAIL");
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads();
    match cli.command {
        Command::Check { v, quadrature } => check(&v, &quadrature),
        Command::Sweep {
            family,
            steps,
            out,
            quadrature: q,
        } => match quadrature(&q) {
            Ok(q) => write_rows(&out, family_sweep(family, steps, &q), false),
            Err(code) => code,
        },
        Command::Region {
            samples,
            mode,
            seed,
            out,
            quadrature: q,
        } => match quadrature(&q) {
            Ok(q) => write_rows(&out, region(samples, mode, seed, &q), mode == RegionMode::Complex),
            Err(code) => code,
        },
        Command::Perfect { state, tol, seed } => perfect(&state, tol, seed),
    }
}
