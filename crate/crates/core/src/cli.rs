//! Command-line experiment driver.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::circuits::{u_dis, u_time, Circuit};
use crate::error::{invalid, Error, Result};
use crate::observables::{
    energy_termwise, estimate_energy_diagonal, estimate_energy_grouped, estimate_mz_shots,
    mz_per_site,
};
use crate::statevector::StateVector;
use crate::verify::{render_table, run_suite, Fault};
use crate::xymodel::{
    first_excited_bitstring, ground_bitstring, gs_mz_closed_form, mz_time_closed_form, ModelParams,
};

#[derive(Debug, Parser)]
#[command(
    name = "xychain",
    version,
    about = "XY spin chain circuits: diagonalization, sweeps and time evolution"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energy of the ground or excited state across a field sweep.
    #[command(allow_negative_numbers = true)]
    EnergySweep(SweepArgs),
    /// Ground-state magnetization across a field sweep.
    #[command(allow_negative_numbers = true)]
    MagnetizationSweep(SweepArgs),
    /// Magnetization of the evolved all-up state over a time grid.
    #[command(allow_negative_numbers = true)]
    Evolve(EvolveArgs),
    /// Run the invariant suite and print a pass/fail table.
    Verify(VerifyArgs),
    /// Write a circuit as JSON.
    #[command(allow_negative_numbers = true)]
    EmitCircuit(EmitArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Estimator {
    Grouped,
    Diagonal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CircuitChoice {
    UDis,
    UTime,
    /// `U_dis† · U(t) · U_dis`
    Evolution,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FaultArg {
    FswapSign,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub j: f64,
    /// Anisotropy; defaults to 0 for energy sweeps and 1 otherwise.
    #[arg(long)]
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Single field value instead of a range.
    #[arg(long, conflicts_with_all = ["lambda_start", "lambda_stop", "lambda_steps"])]
    pub lambda: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub lambda_start: f64,
    #[arg(long, default_value_t = 2.0)]
    pub lambda_stop: f64,
    /// Number of grid points, endpoints included.
    #[arg(long, default_value_t = 41)]
    pub lambda_steps: usize,
    #[arg(long, default_value_t = 1000)]
    pub shots: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Estimator::Grouped)]
    pub estimator: Estimator,
    /// gs, excited, or an explicit diagonal-basis bitstring.
    #[arg(long, default_value = "gs")]
    pub state: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 0.5)]
    pub lambda: f64,
    #[arg(long, default_value_t = 0.0)]
    pub t_start: f64,
    /// Defaults to two oscillation periods of the n=4 Ising magnetization.
    #[arg(long)]
    pub t_stop: Option<f64>,
    #[arg(long, default_value_t = 101)]
    pub t_steps: usize,
    #[arg(long, default_value_t = 1000)]
    pub shots: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Restrict to one chain length (4 or 8).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_enum)]
    pub inject_fault: Option<FaultArg>,
}

#[derive(Debug, Clone, Args)]
pub struct EmitArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 0.5)]
    pub lambda: f64,
    #[arg(long, value_enum, default_value_t = CircuitChoice::UDis)]
    pub circuit: CircuitChoice,
    #[arg(long, default_value_t = 0.0)]
    pub t: f64,
    /// Expand composite gates into the basic set.
    #[arg(long)]
    pub decompose: bool,
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

/// Which diagonal-basis state a sweep prepares.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StateSelector {
    Ground,
    Excited,
    Bits(String),
}

impl StateSelector {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "gs" => Ok(Self::Ground),
            "excited" => Ok(Self::Excited),
            b if !b.is_empty() && b.bytes().all(|c| c == b'0' || c == b'1') => {
                Ok(Self::Bits(b.to_string()))
            }
            other => invalid(format!(
                "state must be gs, excited or a bitstring, got {other:?}"
            )),
        }
    }

    pub fn bits(&self, params: &ModelParams) -> Result<String> {
        match self {
            Self::Ground => Ok(ground_bitstring(params)?.bits),
            Self::Excited => Ok(first_excited_bitstring(params)?.bits),
            Self::Bits(b) => {
                if b.len() != params.n() {
                    return invalid(format!("bitstring {b} does not have length {}", params.n()));
                }
                Ok(b.clone())
            }
        }
    }
}

/// `U_dis† |bits⟩` together with the bitstring used.
pub fn prepare_state(
    params: &ModelParams,
    selector: &StateSelector,
) -> Result<(StateVector, String)> {
    let bits = selector.bits(params)?;
    let state = u_dis(params)?
        .dagger()
        .apply_to(&StateVector::basis(&bits)?)?;
    Ok((state, bits))
}

/// Evenly spaced grid with both endpoints.
pub fn grid(start: f64, stop: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 1 {
        return invalid("steps must be at least 1");
    }
    if !(start.is_finite() && stop.is_finite()) || stop < start {
        return invalid(format!(
            "range {start}..{stop} must be finite with stop >= start"
        ));
    }
    if steps == 1 {
        return Ok(vec![start]);
    }
    let span = stop - start;
    Ok((0..steps)
        .map(|i| {
            if i + 1 == steps {
                stop
            } else {
                start + span * i as f64 / (steps - 1) as f64
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyRow {
    pub lambda: f64,
    pub bits: String,
    pub exact_energy: f64,
    pub sampled_mean: f64,
    pub std_error: f64,
    pub shots: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MagnetizationRow {
    pub lambda: f64,
    pub exact_mz: f64,
    pub closed_form_mz: Option<f64>,
    pub sampled_mean: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvolveRow {
    pub t: f64,
    pub exact_mz: f64,
    pub closed_form_mz: Option<f64>,
    pub sampled_mean: f64,
    pub std_error: f64,
}

/// Closed forms apply only to the four-site Ising chain with unit coupling.
fn closed_form_applies(params: &ModelParams) -> bool {
    params.n() == 4 && params.gamma() == 1.0 && params.j() == 1.0
}

pub fn energy_sweep(
    base: &ModelParams,
    lambdas: &[f64],
    selector: &StateSelector,
    estimator: Estimator,
    shots: usize,
    seed: u64,
) -> Result<Vec<EnergyRow>> {
    lambdas
        .par_iter()
        .enumerate()
        .map(|(i, &l)| {
            let params = base.with_lambda(l)?;
            let (state, bits) = prepare_state(&params, selector)?;
            let point_seed = seed.wrapping_add(i as u64);
            let est = match estimator {
                Estimator::Grouped => estimate_energy_grouped(&state, &params, shots, point_seed)?,
                Estimator::Diagonal => {
                    estimate_energy_diagonal(&state, &params, shots, point_seed)?
                }
            };
            Ok(EnergyRow {
                lambda: l,
                bits,
                exact_energy: energy_termwise(&state, &params)?,
                sampled_mean: est.mean,
                std_error: est.std_error,
                shots,
            })
        })
        .collect()
}

pub fn magnetization_sweep(
    base: &ModelParams,
    lambdas: &[f64],
    selector: &StateSelector,
    shots: usize,
    seed: u64,
) -> Result<Vec<MagnetizationRow>> {
    lambdas
        .par_iter()
        .enumerate()
        .map(|(i, &l)| {
            let params = base.with_lambda(l)?;
            let (state, _) = prepare_state(&params, selector)?;
            let est = estimate_mz_shots(&state, shots, seed.wrapping_add(i as u64))?;
            Ok(MagnetizationRow {
                lambda: l,
                exact_mz: mz_per_site(&state),
                closed_form_mz: closed_form_applies(&params).then(|| gs_mz_closed_form(l)),
                sampled_mean: est.mean,
                std_error: est.std_error,
            })
        })
        .collect()
}

/// `U_dis† U(t) U_dis |0…0⟩`.
pub fn evolved_state(params: &ModelParams, t: f64) -> Result<StateVector> {
    let mut c = u_dis(params)?;
    c.append(&u_time(params, t)?)?;
    c.append(&u_dis(params)?.dagger())?;
    c.apply_to(&StateVector::zero(params.n())?)
}

pub fn evolve(
    params: &ModelParams,
    times: &[f64],
    shots: usize,
    seed: u64,
) -> Result<Vec<EvolveRow>> {
    times
        .par_iter()
        .enumerate()
        .map(|(i, &t)| {
            let state = evolved_state(params, t)?;
            let est = estimate_mz_shots(&state, shots, seed.wrapping_add(i as u64))?;
            Ok(EvolveRow {
                t,
                exact_mz: mz_per_site(&state),
                closed_form_mz: closed_form_applies(params)
                    .then(|| mz_time_closed_form(params.lambda(), t)),
                sampled_mean: est.mean,
                std_error: est.std_error,
            })
        })
        .collect()
}

/// `%.12g`-style number formatting.
pub fn fmt_g(x: f64) -> String {
    const DIGITS: usize = 12;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.*e}", DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= DIGITS as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt_g(x: Option<f64>) -> String {
    x.map(fmt_g).unwrap_or_default()
}

pub const ENERGY_HEADER: &str = "lambda,exact_energy,sampled_mean,std_error,shots";
pub const MAGNETIZATION_HEADER: &str = "lambda,exact_mz,closed_form_mz,sampled_mean,std_error";
pub const EVOLVE_HEADER: &str = "t,exact_mz,closed_form_mz,sampled_mean,std_error";

pub fn energy_csv(rows: &[EnergyRow]) -> String {
    let mut s = format!("{ENERGY_HEADER}\n");
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_g(r.lambda),
            fmt_g(r.exact_energy),
            fmt_g(r.sampled_mean),
            fmt_g(r.std_error),
            r.shots
        ));
    }
    s
}

pub fn magnetization_csv(rows: &[MagnetizationRow]) -> String {
    let mut s = format!("{MAGNETIZATION_HEADER}\n");
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_g(r.lambda),
            fmt_g(r.exact_mz),
            opt_g(r.closed_form_mz),
            fmt_g(r.sampled_mean),
            fmt_g(r.std_error)
        ));
    }
    s
}

pub fn evolve_csv(rows: &[EvolveRow]) -> String {
    let mut s = format!("{EVOLVE_HEADER}\n");
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_g(r.t),
            fmt_g(r.exact_mz),
            opt_g(r.closed_form_mz),
            fmt_g(r.sampled_mean),
            fmt_g(r.std_error)
        ));
    }
    s
}

#[derive(Serialize)]
struct JsonReport<'a, R: Serialize> {
    command: &'a str,
    n: usize,
    j: f64,
    gamma: f64,
    shots: usize,
    seed: u64,
    rows: &'a [R],
}

fn to_json<R: Serialize>(
    command: &str,
    params: &ModelParams,
    shots: usize,
    seed: u64,
    rows: &[R],
) -> Result<String> {
    let report = JsonReport {
        command,
        n: params.n(),
        j: params.j(),
        gamma: params.gamma(),
        shots,
        seed,
        rows,
    };
    let mut s =
        serde_json::to_string_pretty(&report).map_err(|e| Error::Serialization(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn write_output(out: Option<&std::path::Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::Serialization(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::Serialization(e.to_string())),
    }
}

fn model(args: &ModelArgs, default_gamma: f64, lambda: f64) -> Result<ModelParams> {
    ModelParams::new(args.n, args.j, args.gamma.unwrap_or(default_gamma), lambda)
}

fn check_shots(shots: usize) -> Result<()> {
    if shots < 1 {
        return invalid("shots must be at least 1");
    }
    Ok(())
}

fn sweep_grid(args: &SweepArgs) -> Result<Vec<f64>> {
    match args.lambda {
        Some(l) if l.is_finite() => Ok(vec![l]),
        Some(l) => invalid(format!("lambda {l} is not finite")),
        None => grid(args.lambda_start, args.lambda_stop, args.lambda_steps),
    }
}

/// Runs one parsed command. `Ok(false)` means verification failed.
pub fn execute(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::EnergySweep(a) => {
            check_shots(a.shots)?;
            let lambdas = sweep_grid(a)?;
            let params = model(&a.model, 0.0, lambdas[0])?;
            let selector = StateSelector::parse(&a.state)?;
            let rows = energy_sweep(&params, &lambdas, &selector, a.estimator, a.shots, a.seed)?;
            let text = match a.output.format {
                Format::Csv => energy_csv(&rows),
                Format::Json => to_json("energy-sweep", &params, a.shots, a.seed, &rows)?,
            };
            write_output(a.output.out.as_deref(), &text)?;
        }
        Command::MagnetizationSweep(a) => {
            check_shots(a.shots)?;
            let lambdas = sweep_grid(a)?;
            let params = model(&a.model, 1.0, lambdas[0])?;
            let selector = StateSelector::parse(&a.state)?;
            let rows = magnetization_sweep(&params, &lambdas, &selector, a.shots, a.seed)?;
            let text = match a.output.format {
                Format::Csv => magnetization_csv(&rows),
                Format::Json => to_json("magnetization-sweep", &params, a.shots, a.seed, &rows)?,
            };
            write_output(a.output.out.as_deref(), &text)?;
        }
        Command::Evolve(a) => {
            check_shots(a.shots)?;
            let params = model(&a.model, 1.0, a.lambda)?;
            let period = std::f64::consts::PI / (2.0 * (1.0 + a.lambda * a.lambda).sqrt());
            let times = grid(
                a.t_start,
                a.t_stop.unwrap_or(a.t_start + 2.0 * period),
                a.t_steps,
            )?;
            let rows = evolve(&params, &times, a.shots, a.seed)?;
            let text = match a.output.format {
                Format::Csv => evolve_csv(&rows),
                Format::Json => to_json("evolve", &params, a.shots, a.seed, &rows)?,
            };
            write_output(a.output.out.as_deref(), &text)?;
        }
        Command::Verify(a) => {
            let sizes = a.n.map(|n| vec![n]).unwrap_or_else(|| vec![4, 8]);
            let fault = a.inject_fault.map(|f| match f {
                FaultArg::FswapSign => Fault::FswapSign,
            });
            let results = run_suite(&sizes, fault)?;
            print!("{}", render_table(&results));
            let failed: Vec<String> = results
                .iter()
                .filter(|r| !r.passed)
                .map(|r| format!("{} (n={})", r.name, r.n))
                .collect();
            if !failed.is_empty() {
                eprintln!("verification failed: {}", failed.join(", "));
                return Ok(false);
            }
            println!("all {} checks passed", results.len());
        }
        Command::EmitCircuit(a) => {
            let params = model(&a.model, 1.0, a.lambda)?;
            let mut c = match a.circuit {
                CircuitChoice::UDis => u_dis(&params)?,
                CircuitChoice::UTime => u_time(&params, a.t)?,
                CircuitChoice::Evolution => {
                    let mut c: Circuit = u_dis(&params)?;
                    c.append(&u_time(&params, a.t)?)?;
                    c.append(&u_dis(&params)?.dagger())?;
                    c
                }
            };
            if a.decompose {
                c = c.decomposed()?;
            }
            let mut text = c.to_json()?;
            text.push('\n');
            write_output(a.out.as_deref(), &text)?;
        }
    }
    Ok(true)
}

/// Parses `args` and runs. Exit codes: 0 success, 1 verification or
/// runtime failure, 2 usage error.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e @ (Error::InvalidArgument(_) | Error::ResourceLimit(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
