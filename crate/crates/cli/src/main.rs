//! `hpinterp`: homogeneous interpolation over the integers from the shell.
//!
//! Exit codes: 0 success or feasible, 1 usage, 2 invalid input,
//! 3 infeasible (certificate on stdout) or verification mismatch,
//! 4 unknown or budget exhausted.

mod instance;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use hpinterp::{
    construct_witness, default_primes, factor, feasible_degree, min_degree, mod_witness,
    periodic_obstruction, Error, FeasibilityResult, HomogeneousPoly, MinDegreeOptions,
    ResiduePointSet, Verdict, WitnessOptions, WitnessStrategy,
};
use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Value};

use instance::{parse_instance, read_json};

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_UNKNOWN: u8 = 4;

#[derive(Parser)]
#[command(name = "hpinterp", version, about = "Homogeneous polynomial interpolation over Z")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for any internal randomness (factoring).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Print a homogeneous polynomial equal to 1 at every point.
    Witness {
        instance: PathBuf,
        /// Largest witness degree to materialize.
        #[arg(long, default_value_t = 1000)]
        max_degree: u64,
        /// Use the unit-power construction instead of local idempotents.
        #[arg(long)]
        unit_power: bool,
    },
    /// Decide feasibility at one degree.
    Feasible {
        instance: PathBuf,
        #[arg(long)]
        degree: u32,
    },
    /// Least feasible degree up to a budget.
    MinDegree {
        instance: PathBuf,
        #[arg(long, default_value_t = 120)]
        max_degree: u32,
        /// Keep an SNF certificate for every infeasible degree.
        #[arg(long)]
        keep_certificates: bool,
    },
    /// Search for an obstruction valid in every degree.
    Obstruct {
        instance: PathBuf,
        /// Comma-separated primes; defaults to primes where points collide.
        #[arg(long, value_delimiter = ',')]
        primes: Vec<String>,
        /// Stabilization budget: largest degree examined directly.
        #[arg(long, default_value_t = 64)]
        max_degree: u32,
    },
    /// Evaluate a polynomial at the points and compare with the targets.
    Verify {
        instance: PathBuf,
        #[arg(long)]
        poly: PathBuf,
    },
    /// A polynomial unit-valued modulo m at every point.
    ModWitness {
        instance: PathBuf,
        #[arg(long)]
        modulus: String,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::DegreeBudgetExceeded { .. } | Error::FactorBudgetExceeded(_) => EXIT_UNKNOWN,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn parse_int(raw: &str, what: &str) -> Result<BigInt, Failure> {
    hpinterp::serde_dec::parse(raw).map_err(|e| input_error(format!("{what}: {e}")))
}

fn load(path: &PathBuf) -> Result<hpinterp::InterpolationInstance, Failure> {
    let text = read_json(path).map_err(input_error)?;
    parse_instance(&text).map_err(input_error)
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Feasible => EXIT_OK,
        Verdict::InfeasibleAtDegree | Verdict::InfeasibleAllDegrees => EXIT_INFEASIBLE,
        Verdict::Unknown => EXIT_UNKNOWN,
    }
}

fn report(result: &FeasibilityResult, started: Instant) -> Value {
    let mut v = serde_json::to_value(result).expect("results serialize");
    v["elapsed_ms"] = json!(started.elapsed().as_millis() as u64);
    v
}

fn run(cli: Cli) -> Result<(u8, String), Failure> {
    let started = Instant::now();
    match cli.command {
        Command::Witness {
            instance,
            max_degree,
            unit_power,
        } => {
            let inst = load(&instance)?;
            if inst.targets().iter().any(|t| !t.is_one()) {
                return Err(input_error("witness requires all targets equal to 1"));
            }
            let opts = WitnessOptions {
                strategy: if unit_power {
                    WitnessStrategy::UnitPower
                } else {
                    WitnessStrategy::LocalLagrange
                },
                max_degree,
                seed: cli.seed,
            };
            let f = construct_witness(inst.points(), &opts)?;
            eprintln!("witness of degree {} with {} terms", f.degree(), f.num_terms());
            Ok((EXIT_OK, f.to_json()))
        }
        Command::Feasible { instance, degree } => {
            let inst = load(&instance)?;
            if degree == 0 {
                return Err(input_error("--degree must be at least 1"));
            }
            let r = feasible_degree(&inst, degree)?;
            Ok((verdict_code(r.verdict), report(&r, started).to_string()))
        }
        Command::MinDegree {
            instance,
            max_degree,
            keep_certificates,
        } => {
            let inst = load(&instance)?;
            if max_degree == 0 {
                return Err(input_error("--max-degree must be at least 1"));
            }
            let opts = MinDegreeOptions {
                max_degree,
                keep_certificates,
                ..Default::default()
            };
            let r = min_degree(&inst, &opts)?;
            Ok((verdict_code(r.verdict), report(&r, started).to_string()))
        }
        Command::Obstruct {
            instance,
            primes,
            max_degree,
        } => {
            let inst = load(&instance)?;
            let primes = if primes.is_empty() {
                default_primes(&inst)
            } else {
                primes
                    .iter()
                    .map(|p| parse_int(p.trim(), "--primes"))
                    .collect::<Result<_, _>>()?
            };
            let cert = periodic_obstruction(&inst, &primes, max_degree)?;
            let r = FeasibilityResult {
                verdict: if cert.is_some() {
                    Verdict::InfeasibleAllDegrees
                } else {
                    Verdict::Unknown
                },
                degree: None,
                witness: None,
                certificate: cert,
                degree_certificates: Vec::new(),
            };
            let mut out = report(&r, started);
            out["primes"] = json!(primes.iter().map(|p| p.to_string()).collect::<Vec<_>>());
            Ok((verdict_code(r.verdict), out.to_string()))
        }
        Command::Verify { instance, poly } => {
            let inst = load(&instance)?;
            let text = read_json(&poly).map_err(input_error)?;
            let f = HomogeneousPoly::from_json(&text)?;
            let points = inst.points().points();
            let mut values = Vec::with_capacity(points.len());
            let mut matches = true;
            for (p, target) in points.iter().zip(inst.targets()) {
                let value = f.eval_at(p)?;
                let expected = match f.modulus() {
                    Some(m) => num_integer::Integer::mod_floor(target, m),
                    None => target.clone(),
                };
                matches &= value == expected;
                values.push(value.to_string());
            }
            let out = json!({
                "verdict": if matches { "match" } else { "mismatch" },
                "degree": f.degree(),
                "values": values,
                "elapsed_ms": started.elapsed().as_millis() as u64,
            });
            Ok((if matches { EXIT_OK } else { EXIT_INFEASIBLE }, out.to_string()))
        }
        Command::ModWitness { instance, modulus } => {
            let inst = load(&instance)?;
            let m = parse_int(&modulus, "--modulus")?;
            if m < BigInt::from(2) {
                return Err(input_error("--modulus must be at least 2"));
            }
            let a = factor(&m)?;
            let residues =
                ResiduePointSet::from_points(m.clone(), inst.points().dim(), inst.points().points())?;
            let g = mod_witness(&a, &residues)?;
            let values: Vec<String> = residues
                .points()
                .iter()
                .map(|v| g.evaluate(v).map(|x| x.to_string()))
                .collect::<Result<_, _>>()?;
            let out = json!({
                "modulus": m.to_string(),
                "witness": g,
                "values": values,
                "elapsed_ms": started.elapsed().as_millis() as u64,
            });
            Ok((EXIT_OK, out.to_string()))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok((code, out)) => {
            println!("{out}");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
