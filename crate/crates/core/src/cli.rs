//! Command-line front end.
//!
//! Exit codes: `0` every executed check passed, `1` a consistency check
//! failed, `2` invalid input or I/O failure. CSV and JSON output is
//! deterministic for a given command line; only `table` output of `verify`
//! carries wall-clock timings.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::entanglement::{write_table_csv, EntanglementRecord, EntanglementRoute, TwoQutritScenario};
use crate::error::{Error, Result};
use crate::field::{Lattice, PhaseVector, PrimeDim, DEFAULT_MAX_DIM};
use crate::linalg::{ComplexMatrix, HamiltonianSpec};
use crate::path_integral::{path_sum_kernel, path_sum_propagator, PathConfig, PathSumMethod, DEFAULT_PATH_BUDGET};
use crate::presets::{HamiltonianSource, MatrixFile};
use crate::propagator::{
    evolution_symbol, fourier_kernel_raw, kernel_fourier_form, kernel_trace_form, weyl_kernel_to_wigner,
    weyl_space_kernel, WignerKernel, KERNEL_IMAG_TOL,
};
use crate::pseudo_classical::{
    classify_commensurability_with_tolerance, verify_report, Commensurability, LinearHamiltonian, INTEGRALITY_TOL,
};
use crate::states::{product_density, StatePreset};
use crate::verify::{run_verify, CheckStatus, VerifyOptions, CHECKS, DEFAULT_DIMS};
use crate::weyl::{hermitian_symbol, wigner_function, WignerFunction};

/// Environment variable naming the directory for relative `--output` paths.
pub const OUTPUT_DIR_ENV: &str = "QUDIT_WIGNER_OUTPUT_DIR";
/// Default consistency tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "qudit-wigner",
    version,
    about = "Discrete Wigner functions, propagators and phase-space path integrals for odd-prime qudits"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,
    /// Write output to this file instead of stdout; relative paths resolve
    /// against $QUDIT_WIGNER_OUTPUT_DIR when it is set.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Consistency tolerance.
    #[arg(long, default_value_t = DEFAULT_TOL, global = true)]
    pub tol: f64,
    /// Largest accepted dimension.
    #[arg(long, default_value_t = DEFAULT_MAX_DIM, global = true)]
    pub max_dim: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Wigner function of a (possibly evolved) state.
    Wigner(WignerArgs),
    /// Exact Wigner propagator of a Hamiltonian.
    Propagate(PropagateArgs),
    /// Time-sliced path sum.
    PathIntegral(PathIntegralArgs),
    /// Commensurability of a linear Hamiltonian step.
    Commensurability(CommensurabilityArgs),
    /// Two-qutrit linear entropy table.
    Entanglement(EntanglementArgs),
    /// Run the verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct HamiltonianArgs {
    /// Named Hamiltonian: diag012, xx or xplusp.
    #[arg(long, alias = "evolve", conflicts_with = "matrix_file")]
    pub preset: Option<String>,
    /// JSON matrix file {"dim": N, "entries": [[re, im], ...]}.
    #[arg(long)]
    pub matrix_file: Option<PathBuf>,
}

impl HamiltonianArgs {
    fn source(&self) -> Result<Option<HamiltonianSource>> {
        match (&self.preset, &self.matrix_file) {
            (Some(p), _) => Ok(Some(HamiltonianSource::Preset(p.parse()?))),
            (None, Some(f)) => Ok(Some(HamiltonianSource::Matrix(MatrixFile::load(f)?))),
            (None, None) => Ok(None),
        }
    }

    fn require(&self) -> Result<HamiltonianSource> {
        self.source()?
            .ok_or_else(|| Error::InvalidArgument("a Hamiltonian is required (--preset or --matrix-file)".into()))
    }
}

#[derive(Debug, Args)]
pub struct WignerArgs {
    #[arg(long)]
    pub d: i64,
    /// Comma-separated per-qudit states: p<k>, x<k> or mixed.
    #[arg(long, default_value = "p0")]
    pub state: String,
    /// Density matrix file in the matrix JSON format (overrides --state).
    #[arg(long)]
    pub state_file: Option<PathBuf>,
    #[command(flatten)]
    pub hamiltonian: HamiltonianArgs,
    /// Evolution time χt (requires a Hamiltonian).
    #[arg(long, allow_negative_numbers = true)]
    pub chi_t: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelForm {
    Fourier,
    Trace,
    Weyl,
}

#[derive(Debug, Args)]
pub struct PropagateArgs {
    #[arg(long)]
    pub d: i64,
    #[command(flatten)]
    pub hamiltonian: HamiltonianArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub chi_t: f64,
    #[arg(long, value_enum, default_value_t = KernelForm::Fourier)]
    pub form: KernelForm,
    /// Also build the other two forms and require agreement.
    #[arg(long)]
    pub compare: bool,
}

#[derive(Debug, Args)]
pub struct PathIntegralArgs {
    #[arg(long)]
    pub d: i64,
    #[command(flatten)]
    pub hamiltonian: HamiltonianArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub chi_t: f64,
    /// Number of time slices.
    #[arg(long = "N", alias = "steps", default_value_t = 1)]
    pub steps: usize,
    /// Initial point, comma-separated coordinates m1,n1,...
    #[arg(long)]
    pub mu0: Option<String>,
    /// Final point.
    #[arg(long = "muN", alias = "mu-n")]
    pub mu_n: Option<String>,
    /// Visit every path instead of composing slice kernels.
    #[arg(long)]
    pub enumerate: bool,
    /// Cap on enumerated path terms.
    #[arg(long, default_value_t = DEFAULT_PATH_BUDGET)]
    pub budget: f64,
    /// Compare with the exact kernel and fail beyond --tol.
    #[arg(long)]
    pub compare_exact: bool,
}

#[derive(Debug, Args)]
pub struct CommensurabilityArgs {
    #[arg(long)]
    pub d: i64,
    /// Position coefficients, one per qudit.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
    pub a: Vec<f64>,
    /// Momentum coefficients, one per qudit.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
    pub b: Vec<f64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub offset: f64,
    /// Time step, as typed; its decimal precision sets the integrality tolerance.
    #[arg(long)]
    pub tau: String,
    /// Use the strict integrality tolerance regardless of the quoted precision.
    #[arg(long)]
    pub exact_tau: bool,
}

#[derive(Debug, Args)]
pub struct EntanglementArgs {
    #[arg(
        long = "chi-t-list",
        value_delimiter = ',',
        allow_negative_numbers = true,
        default_value = "0.25,0.5,1.5708,2.0944,3.1416,4.1888,6.2832"
    )]
    pub chi_t_list: Vec<f64>,
    /// Routes: exact, kernel, path-integral, closed-form.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "exact,kernel,path-integral,closed-form"
    )]
    pub routes: Vec<String>,
    /// Slices for the path-integral route.
    #[arg(long = "N", alias = "steps", default_value_t = 4)]
    pub steps: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Comma-separated check names.
    #[arg(long, value_delimiter = ',')]
    pub only: Option<Vec<String>>,
    /// Comma-separated dimensions.
    #[arg(long, value_delimiter = ',')]
    pub d: Option<Vec<u32>>,
    /// Perturb the root of unity used by the reality check (negative control).
    #[arg(long, hide = true)]
    pub perturb_omega: Option<f64>,
    /// List the checks and exit.
    #[arg(long)]
    pub list: bool,
}

/// Rendered output plus the verdict of the command's consistency checks.
struct Outcome {
    text: String,
    ok: bool,
}

/// Runs the CLI on `args` (including the program name); returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            if let Err(e) = emit(&cli.common, &outcome.text) {
                eprintln!("error: {e}");
                return EXIT_INVALID;
            }
            if outcome.ok {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INVALID
        }
    }
}

fn resolve_output(path: &Path) -> PathBuf {
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn emit(common: &Common, text: &str) -> Result<()> {
    match &common.output {
        Some(p) => {
            let path = resolve_output(p);
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            std::fs::write(path, text)?;
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let c = &cli.common;
    if !c.tol.is_finite() || c.tol <= 0.0 {
        return Err(Error::InvalidArgument("--tol must be positive".into()));
    }
    match &cli.command {
        Command::Wigner(a) => cmd_wigner(c, a),
        Command::Propagate(a) => cmd_propagate(c, a),
        Command::PathIntegral(a) => cmd_path_integral(c, a),
        Command::Commensurability(a) => cmd_commensurability(c, a),
        Command::Entanglement(a) => cmd_entanglement(c, a),
        Command::Verify(a) => cmd_verify(c, a),
    }
}

fn dim(c: &Common, d: i64) -> Result<PrimeDim> {
    PrimeDim::with_max(d, c.max_dim)
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn csv_rows(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(header)?;
    for r in rows {
        wtr.write_record(&r)?;
    }
    let bytes = wtr.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| Error::InvalidArgument(e.to_string()))
}

fn parse_point(lat: &Lattice, s: &str) -> Result<usize> {
    let coords = s
        .split(',')
        .map(|t| t.trim().parse::<i64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| Error::InvalidArgument(format!("bad phase-space point '{s}'")))?;
    if coords.len() != 2 * lat.n_qudits() {
        return Err(Error::InvalidArgument(format!(
            "point '{s}' needs {} coordinates",
            2 * lat.n_qudits()
        )));
    }
    Ok(PhaseVector::new(lat.dim(), &coords)?.index(lat.dim()))
}

fn point_label(lat: &Lattice, i: usize) -> String {
    lat.coords(i).iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

#[derive(Serialize)]
struct WignerOutput<'a> {
    dim: PrimeDim,
    n_qudits: usize,
    values: &'a [f64],
    sum: f64,
    negativity: f64,
}

fn render_wigner(c: &Common, w: &WignerFunction) -> Result<String> {
    match c.format {
        Format::Json => json(&WignerOutput {
            dim: w.dim,
            n_qudits: w.n_qudits,
            values: &w.values,
            sum: w.sum(),
            negativity: w.negativity(),
        }),
        Format::Csv => {
            let mut buf = Vec::new();
            w.write_csv(&mut buf)?;
            String::from_utf8(buf).map_err(|e| Error::InvalidArgument(e.to_string()))
        }
        Format::Table => {
            let mut s = String::new();
            let d = w.dim.as_usize();
            if w.n_qudits == 1 {
                let _ = write!(s, "{:>5}", "m\\n");
                for n in 0..d {
                    let _ = write!(s, " {n:>12}");
                }
                s.push('\n');
                for m in 0..d {
                    let _ = write!(s, "{m:>5}");
                    for n in 0..d {
                        let _ = write!(s, " {:>12.8}", clean(w.values[m * d + n]));
                    }
                    s.push('\n');
                }
            } else {
                let lat = Lattice::new(w.dim, w.n_qudits)?;
                for (i, v) in w.values.iter().enumerate() {
                    let _ = writeln!(s, "({}) {:>14.10}", point_label(&lat, i), clean(*v));
                }
            }
            let _ = writeln!(s, "sum = {:.12}", w.sum());
            let _ = writeln!(s, "negativity = {:.12}", clean(w.negativity()));
            Ok(s)
        }
    }
}

/// Maps `-0.0` and sub-1e-15 residues to `0.0` for display.
fn clean(v: f64) -> f64 {
    if v.abs() < 1e-15 {
        0.0
    } else {
        v
    }
}

fn cmd_wigner(c: &Common, a: &WignerArgs) -> Result<Outcome> {
    let dim = dim(c, a.d)?;
    let (rho, n) = match &a.state_file {
        Some(f) => {
            let rho = MatrixFile::load(f)?;
            let n = crate::weyl::infer_qudits(rho.rows(), dim)?;
            (rho, n)
        }
        None => {
            let presets = a
                .state
                .split(',')
                .map(str::parse::<StatePreset>)
                .collect::<Result<Vec<_>>>()?;
            (product_density(dim, &presets)?, presets.len())
        }
    };
    let rho = match (a.hamiltonian.source()?, a.chi_t) {
        (Some(src), Some(t)) => {
            let (h, hn) = src.resolve(dim)?;
            if hn != n {
                return Err(Error::InvalidDims(format!(
                    "Hamiltonian acts on {hn} qudits, state on {n}"
                )));
            }
            let u = HamiltonianSpec::new(h, 1.0)?.evolution(t)?;
            u.matmul(&rho)?.matmul(&u.adjoint())?
        }
        (None, None) => rho,
        _ => {
            return Err(Error::InvalidArgument(
                "--evolve/--preset and --chi-t go together".into(),
            ))
        }
    };
    let w = wigner_function(&rho, dim, n)?;
    let ok = (w.sum() - 1.0).abs() < c.tol;
    Ok(Outcome {
        text: render_wigner(c, &w)?,
        ok,
    })
}

#[derive(Serialize)]
struct KernelOutput<'a> {
    dim: PrimeDim,
    n_qudits: usize,
    chi_t: f64,
    form: &'static str,
    max_imag: f64,
    max_column_sum_error: f64,
    is_permutation: bool,
    form_disagreement: Option<f64>,
    entries: &'a [f64],
}

fn form_name(f: KernelForm) -> &'static str {
    match f {
        KernelForm::Fourier => "fourier",
        KernelForm::Trace => "trace",
        KernelForm::Weyl => "weyl",
    }
}

fn build_kernel(form: KernelForm, u: &ComplexMatrix, dim: PrimeDim, n: usize) -> Result<(WignerKernel, f64)> {
    let lat = Lattice::new(dim, n)?;
    match form {
        KernelForm::Fourier => {
            let raw = fourier_kernel_raw(&evolution_symbol(u, dim, n)?, &lat, &crate::field::OmegaTable::new(dim))?;
            let im = raw.max_imag();
            // unitarity is checked by the production builder
            Ok((kernel_fourier_form(u, dim, n)?, im))
        }
        KernelForm::Trace => Ok((kernel_trace_form(u, dim, n)?, 0.0)),
        KernelForm::Weyl => {
            let raw = weyl_kernel_to_wigner(&weyl_space_kernel(u, dim)?)?;
            let im = raw.max_imag();
            Ok((raw.into_real(KERNEL_IMAG_TOL)?, im))
        }
    }
}

fn cmd_propagate(c: &Common, a: &PropagateArgs) -> Result<Outcome> {
    let dim = dim(c, a.d)?;
    let (h, n) = a.hamiltonian.require()?.resolve(dim)?;
    let u = HamiltonianSpec::new(h, 1.0)?.evolution(a.chi_t)?;
    let (g, max_imag) = build_kernel(a.form, &u, dim, n)?;
    let col = g.max_column_sum_error();
    let disagreement = if a.compare {
        let mut worst: f64 = 0.0;
        for other in [KernelForm::Fourier, KernelForm::Trace, KernelForm::Weyl] {
            if other != a.form {
                worst = worst.max(build_kernel(other, &u, dim, n)?.0.max_abs_diff(&g));
            }
        }
        Some(worst)
    } else {
        None
    };
    let ok = col < c.tol && max_imag < c.tol && disagreement.map_or(true, |x| x < c.tol);
    let lat = Lattice::new(dim, n)?;
    let l = lat.size();
    let text = match c.format {
        Format::Json => json(&KernelOutput {
            dim,
            n_qudits: n,
            chi_t: a.chi_t,
            form: form_name(a.form),
            max_imag,
            max_column_sum_error: col,
            is_permutation: g.is_permutation(c.tol),
            form_disagreement: disagreement,
            entries: &g.entries,
        })?,
        Format::Csv => csv_rows(
            &["final", "initial", "value"],
            (0..l).flat_map(|f| {
                let lat = &lat;
                let g = &g;
                (0..l).map(move |i| {
                    vec![
                        point_label(lat, f),
                        point_label(lat, i),
                        format!("{:.17e}", g.get(f, i)),
                    ]
                })
            }),
        )?,
        Format::Table => {
            let mut s = format!(
                "kernel ({} form), d = {dim}, {n} qudit(s), chi*t = {}\n",
                form_name(a.form),
                a.chi_t
            );
            let _ = writeln!(s, "max |Im| before cast     {max_imag:.3e}");
            let _ = writeln!(s, "max |column sum - 1|     {col:.3e}");
            let _ = writeln!(s, "permutation kernel       {}", g.is_permutation(c.tol));
            if let Some(x) = disagreement {
                let _ = writeln!(s, "max disagreement (forms) {x:.3e}");
            }
            if l <= 9 {
                for f in 0..l {
                    for i in 0..l {
                        let _ = write!(s, " {:>11.7}", clean(g.get(f, i)));
                    }
                    s.push('\n');
                }
            }
            let _ = writeln!(s, "{}", if ok { "PASS" } else { "FAIL" });
            s
        }
    };
    Ok(Outcome { text, ok })
}

#[derive(Serialize)]
struct PathRecord {
    #[serde(rename = "N")]
    steps: usize,
    t: f64,
    mu0: Vec<u32>,
    #[serde(rename = "muN")]
    mu_n: Vec<u32>,
    value: f64,
    exact_value: Option<f64>,
    abs_error: Option<f64>,
}

fn cmd_path_integral(c: &Common, a: &PathIntegralArgs) -> Result<Outcome> {
    let dim = dim(c, a.d)?;
    let (h, n) = a.hamiltonian.require()?.resolve(dim)?;
    let lat = Lattice::new(dim, n)?;
    let h_w = hermitian_symbol(&h, dim, n)?;
    let cfg = PathConfig::new(a.steps, a.chi_t)?;
    let method = if a.enumerate {
        PathSumMethod::Enumerated { budget: a.budget }
    } else {
        PathSumMethod::Composed
    };
    let exact = if a.compare_exact {
        Some(kernel_fourier_form(
            &HamiltonianSpec::new(h, 1.0)?.evolution(a.chi_t)?,
            dim,
            n,
        )?)
    } else {
        None
    };
    let pairs: Vec<(usize, usize)> = match (&a.mu0, &a.mu_n) {
        (Some(p0), Some(pn)) => vec![(parse_point(&lat, p0)?, parse_point(&lat, pn)?)],
        (None, None) => (0..lat.size())
            .flat_map(|f| (0..lat.size()).map(move |i| (i, f)))
            .collect(),
        _ => return Err(Error::InvalidArgument("--mu0 and --muN go together".into())),
    };
    let values: Vec<f64> = if pairs.len() == 1 {
        vec![path_sum_propagator(&h_w, &cfg, &lat, pairs[0].0, pairs[0].1, method)?]
    } else {
        path_sum_kernel(&h_w, &cfg, &lat, method)?.entries
    };
    let records: Vec<PathRecord> = pairs
        .iter()
        .zip(&values)
        .map(|(&(i, f), &v)| {
            let ex = exact.as_ref().map(|g| g.get(f, i));
            PathRecord {
                steps: a.steps,
                t: a.chi_t,
                mu0: lat.coords(i).to_vec(),
                mu_n: lat.coords(f).to_vec(),
                value: v,
                exact_value: ex,
                abs_error: ex.map(|e| (e - v).abs()),
            }
        })
        .collect();
    let max_err = records.iter().filter_map(|r| r.abs_error).fold(0.0, f64::max);
    let ok = !a.compare_exact || max_err < c.tol;
    let text = match c.format {
        Format::Json => json(&records)?,
        Format::Csv => csv_rows(
            &["N", "t", "mu0", "muN", "value", "exact_value", "abs_error"],
            records.iter().map(|r| {
                vec![
                    r.steps.to_string(),
                    r.t.to_string(),
                    join_u32(&r.mu0),
                    join_u32(&r.mu_n),
                    format!("{:.17e}", r.value),
                    r.exact_value.map(|x| format!("{x:.17e}")).unwrap_or_default(),
                    r.abs_error.map(|x| format!("{x:.3e}")).unwrap_or_default(),
                ]
            }),
        )?,
        Format::Table => {
            let mut s = format!(
                "path sum, d = {dim}, {n} qudit(s), N = {}, chi*t = {}, {}\n",
                a.steps,
                a.chi_t,
                if a.enumerate { "enumerated" } else { "composed" }
            );
            if records.len() <= 81 {
                for r in &records {
                    let _ = write!(
                        s,
                        "({}) -> ({})  {:>14.10}",
                        join_u32(&r.mu0),
                        join_u32(&r.mu_n),
                        clean(r.value)
                    );
                    if let Some(e) = r.abs_error {
                        let _ = write!(s, "  err {e:.2e}");
                    }
                    s.push('\n');
                }
            }
            if a.compare_exact {
                let _ = writeln!(s, "max abs error vs exact kernel: {max_err:.3e}");
                let _ = writeln!(s, "{}", if ok { "PASS" } else { "FAIL" });
            }
            s
        }
    };
    Ok(Outcome { text, ok })
}

fn join_u32(v: &[u32]) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

/// Half a unit in the last quoted decimal of `text`.
fn quoted_precision(text: &str) -> f64 {
    let mantissa = text.split(['e', 'E']).next().unwrap_or(text);
    let exp: i32 = text
        .split_once(['e', 'E'])
        .and_then(|(_, e)| e.parse().ok())
        .unwrap_or(0);
    let decimals = mantissa.split_once('.').map_or(0, |(_, frac)| frac.len()) as i32;
    0.5 * 10f64.powi(exp - decimals)
}

#[derive(Serialize)]
struct CommensurabilityOutput {
    dim: PrimeDim,
    tau_input: f64,
    tau_used: f64,
    tolerance: f64,
    k_values: Vec<(f64, f64)>,
    class: Commensurability,
    predicted_shift: Option<Vec<(i64, i64)>>,
    predicted_shift_mod_d: Option<Vec<(u32, u32)>>,
    offset: f64,
    kernel_is_permutation: bool,
    matches_prediction: bool,
    max_column_support: usize,
    consistent: bool,
}

fn cmd_commensurability(c: &Common, a: &CommensurabilityArgs) -> Result<Outcome> {
    let dim = dim(c, a.d)?;
    if a.a.len() != a.b.len() {
        return Err(Error::InvalidArgument("--a and --b need one value per qudit".into()));
    }
    let tau_input: f64 = a
        .tau
        .trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("bad --tau '{}'", a.tau)))?;
    let h = LinearHamiltonian::new(a.a.iter().copied().zip(a.b.iter().copied()).collect(), a.offset)?;
    let max_coef = h
        .coeffs
        .iter()
        .flat_map(|(x, y)| [x.abs(), y.abs()])
        .fold(0.0, f64::max);
    let tolerance = if a.exact_tau {
        INTEGRALITY_TOL
    } else {
        // a τ quoted to q decimals fixes k only to within max|coef|·d·δτ/π
        INTEGRALITY_TOL.max(max_coef * f64::from(dim.get()) * quoted_precision(a.tau.trim()) / std::f64::consts::PI)
    };
    let mut report = classify_commensurability_with_tolerance(&h, tau_input, dim, tolerance)?;
    // integer k at the quoted precision: move τ onto the commensurate value
    if report.class != Commensurability::Incommensurate && max_coef > 0.0 {
        let (k, coef) = report
            .k_values
            .iter()
            .zip(&h.coeffs)
            .flat_map(|((ka, kb), (ca, cb))| [(*ka, *ca), (*kb, *cb)])
            .max_by(|x, y| x.1.abs().total_cmp(&y.1.abs()))
            .expect("at least one coefficient");
        let snapped = k.round() * std::f64::consts::PI / (coef * f64::from(dim.get()));
        if snapped > 0.0 {
            let again = classify_commensurability_with_tolerance(&h, snapped, dim, INTEGRALITY_TOL)?;
            if again.class == report.class {
                report = again;
            }
        }
    }
    let tau_used = report.tau;
    let v = verify_report(&h, report, h.n_qudits())?;
    let shifts = v.report.predicted_shift.as_ref();
    let out = CommensurabilityOutput {
        dim,
        tau_input,
        tau_used,
        tolerance,
        k_values: v.report.k_values.clone(),
        class: v.report.class,
        predicted_shift: shifts.map(|s| s.iter().map(|q| (q.dm, q.dn)).collect()),
        predicted_shift_mod_d: shifts.map(|s| s.iter().map(|q| (q.dm_mod, q.dn_mod)).collect()),
        offset: v.report.offset,
        kernel_is_permutation: v.kernel_is_permutation,
        matches_prediction: v.matches_prediction,
        max_column_support: v.max_column_support,
        consistent: v.consistent,
    };
    let text = match c.format {
        Format::Json => json(&out)?,
        Format::Csv => csv_rows(
            &[
                "qudit",
                "k_a",
                "k_b",
                "class",
                "dm",
                "dn",
                "kernel_is_permutation",
                "consistent",
            ],
            out.k_values.iter().enumerate().map(|(q, (ka, kb))| {
                let s = out.predicted_shift.as_ref().map(|s| s[q]);
                vec![
                    (q + 1).to_string(),
                    format!("{ka:.12}"),
                    format!("{kb:.12}"),
                    out.class.to_string(),
                    s.map(|x| x.0.to_string()).unwrap_or_default(),
                    s.map(|x| x.1.to_string()).unwrap_or_default(),
                    out.kernel_is_permutation.to_string(),
                    out.consistent.to_string(),
                ]
            }),
        )?,
        Format::Table => {
            let mut s = format!(
                "d = {dim}, tau = {} (used {:.12}), tolerance {:.1e}\n",
                a.tau.trim(),
                tau_used,
                tolerance
            );
            for (q, (ka, kb)) in out.k_values.iter().enumerate() {
                let _ = writeln!(s, "qudit {}: k_a = {ka:.9}, k_b = {kb:.9}", q + 1);
            }
            let _ = writeln!(s, "class: {}", out.class);
            if let (Some(sh), Some(md)) = (&out.predicted_shift, &out.predicted_shift_mod_d) {
                for (q, ((dm, dn), (mm, mn))) in sh.iter().zip(md).enumerate() {
                    let _ = writeln!(
                        s,
                        "qudit {}: shift (dm, dn) = ({dm}, {dn}) = ({mm}, {mn}) mod {dim}",
                        q + 1
                    );
                }
            }
            let _ = writeln!(s, "kernel is permutation: {}", out.kernel_is_permutation);
            let _ = writeln!(s, "max column support: {}", out.max_column_support);
            let _ = writeln!(s, "{}", if out.consistent { "PASS" } else { "FAIL" });
            s
        }
    };
    Ok(Outcome {
        text,
        ok: out.consistent,
    })
}

fn cmd_entanglement(c: &Common, a: &EntanglementArgs) -> Result<Outcome> {
    let routes = a
        .routes
        .iter()
        .map(|r| {
            r.parse::<EntanglementRoute>().map(|route| match route {
                EntanglementRoute::PathIntegral { .. } => EntanglementRoute::PathIntegral { steps: a.steps },
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if a.steps == 0 {
        return Err(Error::InvalidArgument("--N must be at least 1".into()));
    }
    let scenario = TwoQutritScenario::new()?;
    let mut records: Vec<EntanglementRecord> = Vec::new();
    for &t in &a.chi_t_list {
        for &r in &routes {
            records.push(scenario.record(t, r)?);
        }
    }
    let ok = records.iter().all(|r| r.abs_error < c.tol);
    let text = match c.format {
        Format::Json => json(&records)?,
        Format::Csv => {
            let mut buf = Vec::new();
            write_table_csv(&records, &mut buf)?;
            String::from_utf8(buf).map_err(|e| Error::InvalidArgument(e.to_string()))?
        }
        Format::Table => {
            let mut s = String::from("two qutrits, H = chi x1 x2, initial |p,0>|p,0>\n");
            let _ = write!(s, "{:>10}", "chi*t");
            for r in &routes {
                let _ = write!(s, " {:>20}", r.to_string());
            }
            let _ = writeln!(s, " {:>12}", "max error");
            for (i, &t) in a.chi_t_list.iter().enumerate() {
                let row = &records[i * routes.len()..(i + 1) * routes.len()];
                let _ = write!(s, "{t:>10.4}");
                for r in row {
                    let _ = write!(s, " {:>20.10}", clean(r.linear_entropy));
                }
                let worst = row.iter().map(|r| r.abs_error).fold(0.0, f64::max);
                let _ = writeln!(s, " {worst:>12.2e}");
            }
            let _ = writeln!(s, "{}", if ok { "PASS" } else { "FAIL" });
            s
        }
    };
    Ok(Outcome { text, ok })
}

fn cmd_verify(c: &Common, a: &VerifyArgs) -> Result<Outcome> {
    if a.list {
        let mut s = String::new();
        for info in CHECKS {
            let _ = writeln!(s, "{:<20} {}", info.name, info.summary);
        }
        return Ok(Outcome { text: s, ok: true });
    }
    let opts = VerifyOptions {
        only: a.only.clone(),
        dims: a.d.clone().unwrap_or_else(|| DEFAULT_DIMS.to_vec()),
        perturb_omega: a.perturb_omega,
        ..VerifyOptions::default()
    };
    for &d in &opts.dims {
        PrimeDim::with_max(i64::from(d), c.max_dim)?;
    }
    let report = run_verify(&opts)?;
    let ok = report.all_passed();
    let text = match c.format {
        Format::Json => json(&report)?,
        Format::Csv => csv_rows(
            &["check", "status", "detail"],
            report
                .checks
                .iter()
                .map(|k| vec![k.name.clone(), status_word(&k.status).to_string(), k.detail.clone()]),
        )?,
        Format::Table => {
            let mut s = String::new();
            for k in &report.checks {
                let _ = writeln!(
                    s,
                    "{:<4} {:<20} {:>8.3}s  {}",
                    status_word(&k.status),
                    k.name,
                    k.seconds,
                    k.detail
                );
            }
            let total: f64 = report.checks.iter().map(|k| k.seconds).sum();
            if ok {
                let _ = writeln!(s, "all {} checks passed in {total:.2}s", report.checks.len());
            } else {
                let _ = writeln!(s, "FAILED: {}", report.failures().join(", "));
            }
            s
        }
    };
    Ok(Outcome { text, ok })
}

fn status_word(s: &CheckStatus) -> &'static str {
    match s {
        CheckStatus::Pass => "PASS",
        CheckStatus::Fail => "FAIL",
        CheckStatus::Skipped => "SKIP",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_of_quoted_numbers() {
        assert!((quoted_precision("2.0944") - 5e-5).abs() < 1e-18);
        assert!((quoted_precision("2") - 0.5).abs() < 1e-18);
        assert!((quoted_precision("1.5e-2") - 5e-4).abs() < 1e-18);
    }

    #[test]
    fn parse_points() {
        let lat = Lattice::new(PrimeDim::new(3).unwrap(), 1).unwrap();
        assert_eq!(parse_point(&lat, "1,2").unwrap(), 5);
        assert!(parse_point(&lat, "1").is_err());
        assert!(parse_point(&lat, "a,b").is_err());
    }

    #[test]
    fn argument_errors_map_to_invalid() {
        assert_eq!(run(["qudit-wigner", "wigner", "--d", "4"]), EXIT_INVALID);
        assert_eq!(run(["qudit-wigner", "frobnicate"]), EXIT_INVALID);
    }
}
