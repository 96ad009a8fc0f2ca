//! Command implementations. Each `run_*` validates flags against the
//! underlying type invariants before computing, renders to a string, and
//! writes it whole, so identical invocations produce byte-identical files.

use std::fs;
use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;
use splinosc::{
    collocation_points, damping_spectrum, interpolate, model_by_name, newton_solve, warm_start,
    BasisSpec, Error, Family, NewtonConfig, OscillatorModel, PSSProblem, PhaseAnchor, Spectrum,
};

use crate::{BasisArgs, DampingArgs, FormatArg, InterpArgs, PssArgs, SweepArgs};

/// Probe count for interpolation error reports; probes sit at interval
/// midpoints, away from every collocation point and knot.
const INTERP_PROBES: usize = 200;
/// Dense sample count behind every reported amplitude.
const AMPLITUDE_SAMPLES: usize = 4096;
/// Rows in an exported waveform CSV.
const WAVEFORM_SAMPLES: usize = 512;

#[derive(Debug)]
pub enum CliError {
    /// Bad invocation; nothing was computed. Exit 2.
    Usage(String),
    /// Computation or IO failed. Exit 1.
    Runtime(String),
    /// The Newton iteration ran out of budget. Exit 3.
    NoConvergence(String),
}

impl CliError {
    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) | CliError::NoConvergence(m) => m,
        }
    }

    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
            CliError::NoConvergence(_) => 3,
        }
    }
}

fn usage(e: Error) -> CliError {
    CliError::Usage(e.to_string())
}

fn runtime(e: Error) -> CliError {
    CliError::Runtime(e.to_string())
}

fn basis_spec(args: &BasisArgs) -> Result<BasisSpec, CliError> {
    BasisSpec::new(args.family.into_family(), args.m, args.n, args.sigma).map_err(usage)
}

fn parse_params(raw: &[String]) -> Result<Vec<(String, f64)>, CliError> {
    raw.iter()
        .map(|item| {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("parameter '{item}' is not name=value")))?;
            if name.is_empty() {
                return Err(CliError::Usage(format!("parameter '{item}' has an empty name")));
            }
            let parsed: f64 = value
                .parse()
                .map_err(|_| CliError::Usage(format!("parameter '{item}' has a non-numeric value")))?;
            Ok((name.to_string(), parsed))
        })
        .collect()
}

/// Writes to standard output, exiting quietly if the reading end of a pipe
/// has gone away (the downstream consumer decided it has seen enough).
pub fn write_stdout(content: &str) -> Result<(), CliError> {
    match io::stdout().write_all(content.as_bytes()) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => std::process::exit(0),
        Err(e) => Err(CliError::Runtime(format!("cannot write to stdout: {e}"))),
    }
}

/// Writes to the path, or to standard output when none was given, always
/// ending with exactly one newline.
fn emit(out: Option<&str>, content: &str) -> Result<(), CliError> {
    let mut owned = content.to_string();
    if !owned.ends_with('\n') {
        owned.push('\n');
    }
    match out {
        Some(path) => fs::write(path, owned)
            .map_err(|e| CliError::Runtime(format!("cannot write {path}: {e}"))),
        None => write_stdout(&owned),
    }
}

#[derive(Serialize)]
struct SpectrumEntryRecord {
    xi: f64,
    re_psi: f64,
    im_psi: f64,
    singular: bool,
}

#[derive(Serialize)]
struct SpectrumRecord {
    family: Family,
    m: usize,
    n: usize,
    sigma: f64,
    entries: Vec<SpectrumEntryRecord>,
}

fn spectrum_record(spec: &BasisSpec, spectrum: &Spectrum) -> SpectrumRecord {
    let entries = spectrum
        .entries
        .iter()
        .map(|e| match e.value {
            Some(v) => SpectrumEntryRecord { xi: e.xi, re_psi: v.re, im_psi: v.im, singular: false },
            None => SpectrumEntryRecord { xi: e.xi, re_psi: 0.0, im_psi: 0.0, singular: true },
        })
        .collect();
    SpectrumRecord {
        family: spec.family(),
        m: spec.m(),
        n: spec.n(),
        sigma: spec.sigma(),
        entries,
    }
}

pub fn run_damping(args: &DampingArgs) -> Result<(), CliError> {
    let spec = basis_spec(&args.basis)?;
    let spectrum =
        damping_spectrum(spec.family(), spec.m(), spec.n(), spec.sigma()).map_err(runtime)?;
    let rendered = match args.format {
        FormatArg::Csv => spectrum.to_csv(),
        FormatArg::Json => to_json_line(&spectrum_record(&spec, &spectrum))?,
    };
    emit(args.out.as_deref(), &rendered)
}

type Signal = (&'static str, fn(f64) -> f64);

/// Constant and fundamental-frequency probes: the trigonometric family
/// reproduces all three exactly, the polynomial family does not.
const SIGNALS: [Signal; 3] = [
    ("one", |_| 1.0),
    ("cos", |t| (2.0 * std::f64::consts::PI * t).cos()),
    ("sin", |t| (2.0 * std::f64::consts::PI * t).sin()),
];

#[derive(Serialize)]
struct InterpRow {
    signal: &'static str,
    max_error: f64,
}

#[derive(Serialize)]
struct InterpRecord {
    family: Family,
    m: usize,
    n: usize,
    sigma: f64,
    signals: Vec<InterpRow>,
}

fn interp_rows(spec: &BasisSpec) -> Result<Vec<InterpRow>, CliError> {
    let pts = collocation_points(spec);
    SIGNALS
        .iter()
        .map(|&(signal, f)| {
            let samples: Vec<f64> = pts.iter().map(|&t| f(t)).collect();
            let fit = interpolate(spec, &samples).map_err(runtime)?;
            let mut max_error: f64 = 0.0;
            for j in 0..INTERP_PROBES {
                let t = (j as f64 + 0.5) / INTERP_PROBES as f64;
                max_error = max_error.max((fit.evaluate_dim(0, t) - f(t)).abs());
            }
            Ok(InterpRow { signal, max_error })
        })
        .collect()
}

fn interp_csv(rows: &[InterpRow]) -> String {
    let mut out = String::from("signal,max_error\n");
    for row in rows {
        out.push_str(&format!("{},{}\n", row.signal, row.max_error));
    }
    out
}

pub fn run_interp(args: &InterpArgs) -> Result<(), CliError> {
    let spec = basis_spec(&args.basis)?;
    let rows = interp_rows(&spec)?;
    let rendered = match args.format {
        FormatArg::Csv => interp_csv(&rows),
        FormatArg::Json => to_json_line(&InterpRecord {
            family: spec.family(),
            m: spec.m(),
            n: spec.n(),
            sigma: spec.sigma(),
            signals: rows,
        })?,
    };
    emit(args.out.as_deref(), &rendered)
}

#[derive(Serialize)]
struct PssSummary {
    period: f64,
    amplitude: f64,
    residual: f64,
    iterations: usize,
}

fn solve_steady_state(
    model: &OscillatorModel,
    spec: BasisSpec,
) -> Result<splinosc::PSSolution, CliError> {
    let (guess, period, anchor_value) = warm_start(model, &spec, 0).map_err(runtime)?;
    let anchor = PhaseAnchor { dimension: 0, value: anchor_value };
    let problem = PSSProblem::new(model, guess, period, anchor, NewtonConfig::default())
        .map_err(runtime)?;
    newton_solve(&problem).map_err(runtime)
}

pub fn run_pss(args: &PssArgs) -> Result<(), CliError> {
    let spec = basis_spec(&args.basis)?;
    let params = parse_params(&args.param)?;
    let model = model_by_name(&args.model, &params).map_err(usage)?;
    let sol = solve_steady_state(&model, spec)?;
    if !sol.converged() {
        return Err(CliError::NoConvergence(format!(
            "no convergence after {} iterations, residual {:.3e}",
            sol.iterations(),
            sol.residual_norm()
        )));
    }
    let summary = PssSummary {
        period: sol.period(),
        amplitude: sol.amplitude(0, AMPLITUDE_SAMPLES),
        residual: sol.residual_norm(),
        iterations: sol.iterations(),
    };
    write_stdout(&format!("{}\n", to_json_line(&summary)?))?;
    if let Some(stem) = args.out.as_deref() {
        emit(Some(&format!("{stem}.json")), &sol.to_json())?;
        emit(Some(&format!("{stem}.csv")), &sol.to_waveform_csv(WAVEFORM_SAMPLES))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct SweepRow {
    family: Family,
    m: usize,
    n: usize,
    sigma: f64,
    amplitude: f64,
    period: f64,
    converged: bool,
}

fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("family,m,n,sigma,amplitude,period,converged\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.family,
            row.m,
            row.n,
            row.sigma,
            row.amplitude,
            row.period,
            u8::from(row.converged)
        ));
    }
    out
}

pub fn run_sweep(args: &SweepArgs) -> Result<(), CliError> {
    if args.n_list.is_empty() {
        return Err(CliError::Usage("n-list is empty".into()));
    }
    let params = parse_params(&args.param)?;
    let model = model_by_name(&args.model, &params).map_err(usage)?;

    // Canonical work order up front: families then grid sizes, duplicates
    // dropped. Workers may finish in any order; rows are emitted in this one.
    let mut families: Vec<Family> = args.family.iter().map(|f| f.into_family()).collect();
    families.sort_by_key(|f| f.to_string());
    families.dedup();
    let mut sizes = args.n_list.clone();
    sizes.sort_unstable();
    sizes.dedup();

    let mut specs = Vec::new();
    for &family in &families {
        for &n in &sizes {
            specs.push(BasisSpec::new(family, args.m, n, args.sigma).map_err(usage)?);
        }
    }

    let rows: Vec<SweepRow> = specs
        .par_iter()
        .map(|&spec| {
            let sol = solve_steady_state(&model, spec)?;
            Ok(SweepRow {
                family: spec.family(),
                m: spec.m(),
                n: spec.n(),
                sigma: spec.sigma(),
                amplitude: sol.amplitude(0, AMPLITUDE_SAMPLES),
                period: sol.period(),
                converged: sol.converged(),
            })
        })
        .collect::<Result<_, CliError>>()?;

    let rendered = match args.format {
        FormatArg::Csv => sweep_csv(&rows),
        FormatArg::Json => to_json_line(&rows)?,
    };
    emit(args.out.as_deref(), &rendered)
}

fn to_json_line<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string(value).map_err(|e| CliError::Runtime(format!("serialization: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_parse_name_value_pairs() {
        let parsed = parse_params(&["mu=1.5".into(), "k=-2".into()]).unwrap();
        assert_eq!(parsed, vec![("mu".to_string(), 1.5), ("k".to_string(), -2.0)]);
        assert!(parse_params(&["mu".into()]).is_err());
        assert!(parse_params(&["mu=abc".into()]).is_err());
        assert!(parse_params(&["=1".into()]).is_err());
    }

    #[test]
    fn sweep_csv_layout() {
        let rows = vec![
            SweepRow {
                family: Family::Polynomial,
                m: 3,
                n: 16,
                sigma: -0.25,
                amplitude: 1.5,
                period: 6.5,
                converged: true,
            },
            SweepRow {
                family: Family::Trigonometric,
                m: 3,
                n: 16,
                sigma: -0.25,
                amplitude: 2.0,
                period: 6.6,
                converged: false,
            },
        ];
        let csv = sweep_csv(&rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "family,m,n,sigma,amplitude,period,converged");
        assert_eq!(lines[1], "poly,3,16,-0.25,1.5,6.5,1");
        assert_eq!(lines[2], "trig,3,16,-0.25,2,6.6,0");
    }

    #[test]
    fn interp_csv_layout() {
        let rows = vec![InterpRow { signal: "one", max_error: 1e-15 }];
        let csv = interp_csv(&rows);
        assert_eq!(csv, "signal,max_error\none,0.000000000000001\n");
    }

    #[test]
    fn error_codes_are_distinct() {
        assert_eq!(CliError::Usage(String::new()).code(), 2);
        assert_eq!(CliError::Runtime(String::new()).code(), 1);
        assert_eq!(CliError::NoConvergence(String::new()).code(), 3);
    }

    #[test]
    fn sweep_rows_serialize_in_field_order() {
        let row = SweepRow {
            family: Family::Polynomial,
            m: 3,
            n: 16,
            sigma: -0.25,
            amplitude: 1.0,
            period: 2.0,
            converged: true,
        };
        let json = to_json_line(&row).unwrap();
        assert_eq!(
            json,
            "{\"family\":\"poly\",\"m\":3,\"n\":16,\"sigma\":-0.25,\"amplitude\":1.0,\"period\":2.0,\"converged\":true}"
        );
    }
}
