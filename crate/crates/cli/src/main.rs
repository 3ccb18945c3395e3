//! `qbmf`: point evaluation, tables and identity verification for the
//! modified q-Bessel and q-Bessel-Macdonald functions.
//!
//! Exit status: 0 success, 1 check failure, 2 usage error, 3 domain,
//! pole or convergence error.

mod text;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use qbmf::double_integral::{k_integral_double, xi, DoubleForm, XiParams};
use qbmf::qbessel::{a_nu, bessel_i, bessel_j, bessel_k, BesselArgs, FunctionKind};
use qbmf::qseries::{EvalResult, QBase, SeriesPolicy};
use qbmf::quadrature::{k_integral_single, weight_eval, QuadraturePolicy, WeightParams};
use qbmf::verify::{self, Suite, VerifyConfig, VerifyReport, DEFAULT_SEED};

use text::{complex_with, fixed_sig, general, parse_complex};

const CSV_DIGITS: usize = 17;
const HUMAN_DIGITS: usize = 12;
const TABLE_HEADER: [&str; 4] = ["z", "value_re", "value_im", "abs_err"];

#[derive(Parser)]
#[command(name = "qbmf", version, about = "Modified q-Bessel and q-Bessel-Macdonald functions of kinds 1, 2 and 3")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one function at one point.
    Eval(EvalArgs),
    /// Evaluate one function on an evenly spaced real grid and write CSV.
    Table(TableArgs),
    /// Run identity-verification suites.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Func {
    /// J_nu^(j)(x; q) at the raw argument x
    #[value(name = "J")]
    J,
    /// I_nu^(j)((1 - q^2) z; q^2)
    #[value(name = "I")]
    I,
    /// K_nu^(j)((1 - q^2) z; q^2)
    #[value(name = "K")]
    K,
    /// The normalising constant A_nu (no z)
    #[value(name = "A")]
    A,
    /// xi_eta^(delta)(s) with s given by --z
    #[value(name = "xi")]
    Xi,
    /// The weight f_nu^(j)(s), s = --z real and >= 0
    #[value(name = "weight")]
    Weight,
}

impl Func {
    fn label(self) -> &'static str {
        match self {
            Func::J => "J",
            Func::I => "I",
            Func::K => "K",
            Func::A => "A",
            Func::Xi => "xi",
            Func::Weight => "weight",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Rep {
    Series,
    IntegralSingle,
    IntegralDouble,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Form {
    /// xi_{1/2} times xi_{1/2}
    HalfHalf,
    /// e_{q^2} times xi_1
    ExpXi,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Csv,
}

#[derive(Args)]
struct FunctionArgs {
    #[arg(value_enum)]
    func: Func,
    /// Kind j; the map to delta is 1 -> 2, 2 -> 0, 3 -> 1.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=3))]
    kind: u8,
    /// Order, real or complex (e.g. 1.5 or 0.5+0.2i).
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    nu: Option<Complex64>,
    /// Base, 0 < q < 1.
    #[arg(long)]
    q: f64,
    #[arg(long, value_enum, default_value_t = Rep::Series)]
    rep: Rep,
    /// Allow the kind-1 product continuation outside the series disc |z| < 2/(1-q^2).
    #[arg(long)]
    continuation: bool,
    /// eta for xi.
    #[arg(long)]
    eta: Option<f64>,
    /// Gauss nodes per quadrature band.
    #[arg(long, default_value_t = 32)]
    nodes: usize,
    /// Trapezoid nodes for the angular integral of the double-integral representation.
    #[arg(long, default_value_t = 64)]
    angular_nodes: usize,
    /// Pairing used by the double-integral representation.
    #[arg(long, value_enum, default_value_t = Form::HalfHalf)]
    form: Form,
    /// Relative stopping tolerance for series.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    f: FunctionArgs,
    /// Argument, real or complex (e.g. 1.2 or 1-0.5i).
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    z: Option<Complex64>,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
}

#[derive(Args)]
struct TableArgs {
    #[command(flatten)]
    f: FunctionArgs,
    /// First grid point.
    #[arg(long, allow_hyphen_values = true)]
    from: f64,
    /// Last grid point.
    #[arg(long, allow_hyphen_values = true)]
    to: f64,
    /// Number of grid points, at least 2.
    #[arg(long)]
    count: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    DifferenceEquations,
    Wronskian,
    Moments,
    Lemmas,
    Representations,
    Limits,
    Binomial,
    All,
}

impl SuiteArg {
    fn suites(self) -> Vec<Suite> {
        match self {
            SuiteArg::DifferenceEquations => vec![Suite::DifferenceEquations],
            SuiteArg::Wronskian => vec![Suite::Wronskian],
            SuiteArg::Moments => vec![Suite::Moments],
            SuiteArg::Lemmas => vec![Suite::Lemmas],
            SuiteArg::Representations => vec![Suite::Representations],
            SuiteArg::Limits => vec![Suite::Limits],
            SuiteArg::Binomial => vec![Suite::Binomial],
            SuiteArg::All => Suite::ALL.to_vec(),
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: SuiteArg,
    /// Run every suite (except limits) at this base only.
    #[arg(long)]
    q: Option<f64>,
    /// Replace every tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Seed for the randomised draws.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// List passing checks too.
    #[arg(long)]
    verbose: bool,
}

enum Failure {
    Usage(String),
    Eval(qbmf::Error),
    Io(io::Error),
}

impl From<qbmf::Error> for Failure {
    fn from(e: qbmf::Error) -> Self {
        Failure::Eval(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.into())
    }
}

/// A value plus a description of how it was obtained.
struct Evaluated {
    result: EvalResult,
    method: &'static str,
}

/// Checked inputs shared by `eval` and `table`.
struct Setup {
    func: Func,
    kind: FunctionKind,
    nu: Option<Complex64>,
    base: QBase,
    rep: Rep,
    continuation: bool,
    eta: Option<f64>,
    qpolicy: QuadraturePolicy,
    spolicy: SeriesPolicy,
    angular_nodes: usize,
    form: DoubleForm,
}

impl Setup {
    fn new(a: &FunctionArgs) -> Result<Self, Failure> {
        if a.func != Func::K && a.rep != Rep::Series {
            return Err(Failure::Usage(format!("{} supports only --rep series", a.func.label())));
        }
        if matches!(a.func, Func::J | Func::I | Func::K | Func::A | Func::Weight) && a.nu.is_none() {
            return Err(Failure::Usage(format!("{} needs --nu", a.func.label())));
        }
        if a.func == Func::Xi && a.eta.is_none() {
            return Err(Failure::Usage("xi needs --eta".into()));
        }
        let spolicy = match a.tol {
            Some(t) => SeriesPolicy::new(t, 3, 10_000)?,
            None => SeriesPolicy::default(),
        };
        Ok(Setup {
            func: a.func,
            kind: FunctionKind::from_j(a.kind)?,
            nu: a.nu,
            base: QBase::new(a.q)?,
            rep: a.rep,
            continuation: a.continuation,
            eta: a.eta,
            qpolicy: QuadraturePolicy::default().with_nodes(a.nodes)?,
            spolicy,
            angular_nodes: a.angular_nodes,
            form: match a.form {
                Form::HalfHalf => DoubleForm::HalfHalf,
                Form::ExpXi => DoubleForm::ExpXi,
            },
        })
    }

    fn needs_z(&self) -> bool {
        self.func != Func::A
    }

    fn eval(&self, z: Complex64) -> Result<Evaluated, Failure> {
        let nu = self.nu.unwrap_or_default();
        let args = BesselArgs::new(nu, z, self.base).with_continuation(self.continuation);
        let sp = &self.spolicy;
        let (result, method) = match (self.func, self.rep) {
            (Func::J, _) => (bessel_j(self.kind, args, sp)?, "series"),
            (Func::I, _) => (bessel_i(self.kind, args, sp)?, "series"),
            (Func::K, Rep::Series) => (bessel_k(self.kind, args, sp)?, "series"),
            (Func::K, Rep::IntegralSingle) => (
                k_integral_single(self.kind, nu, z, &self.base, &self.qpolicy, sp)?,
                "single-integral representation",
            ),
            (Func::K, Rep::IntegralDouble) => {
                if z.im != 0.0 || z.re.is_nan() || z.re <= 0.0 {
                    return Err(Failure::Eval(qbmf::Error::Domain(format!(
                        "the double-integral representation gives K at positive real arguments only, got z = {z}"
                    ))));
                }
                (
                    k_integral_double(self.kind, nu, z / 2.0, &self.base, &self.qpolicy, self.angular_nodes, self.form)?,
                    "double-integral representation",
                )
            }
            (Func::A, _) => (a_nu(nu, &self.base, sp)?, "series ratio"),
            (Func::Xi, _) => {
                let params = XiParams::for_kind(self.eta.unwrap_or_default(), self.kind, self.base)?;
                (xi(&params, z, sp)?, "series")
            }
            (Func::Weight, _) => {
                if z.im != 0.0 {
                    return Err(Failure::Eval(qbmf::Error::Domain(format!(
                        "the weight is evaluated at real s >= 0, got {z}"
                    ))));
                }
                let params = WeightParams::new(nu, self.kind, self.base)?;
                (weight_eval(&params, z.re)?, "product ratio")
            }
        };
        Ok(Evaluated { result, method })
    }
}

fn csv_writer() -> csv::Writer<io::StdoutLock<'static>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(io::stdout().lock())
}

fn cmd_eval(a: &EvalArgs) -> Result<(), Failure> {
    let setup = Setup::new(&a.f)?;
    let z = match (setup.needs_z(), a.z) {
        (true, Some(z)) => z,
        (true, None) => return Err(Failure::Usage(format!("{} needs --z", a.f.func.label()))),
        (false, _) => Complex64::new(0.0, 0.0),
    };
    let Evaluated { result, method } = setup.eval(z)?;
    match a.format {
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record(TABLE_HEADER)?;
            let zs = if setup.needs_z() { complex_with(z, |x| fixed_sig(x, CSV_DIGITS)) } else { String::new() };
            w.write_record([
                zs,
                fixed_sig(result.value.re, CSV_DIGITS),
                fixed_sig(result.value.im, CSV_DIGITS),
                fixed_sig(result.abs_err, CSV_DIGITS),
            ])?;
            w.flush()?;
        }
        Format::Human => {
            let g = |x: f64| general(x, HUMAN_DIGITS);
            let mut out = io::stdout().lock();
            let mut head = a.f.func.label().to_string();
            if a.f.func != Func::A {
                head.push_str(&format!(" kind {}", a.f.kind));
            }
            if let Some(nu) = setup.nu {
                head.push_str(&format!(" nu={}", complex_with(nu, g)));
            }
            if let Some(eta) = setup.eta.filter(|_| a.f.func == Func::Xi) {
                head.push_str(&format!(" eta={}", g(eta)));
            }
            if setup.needs_z() {
                head.push_str(&format!(" z={}", complex_with(z, g)));
            }
            head.push_str(&format!(" q={}", g(setup.base.q())));
            writeln!(out, "{head}")?;
            writeln!(out, "value    {}", complex_with(result.value, g))?;
            writeln!(out, "abs_err  {}", general(result.abs_err, 3))?;
            writeln!(out, "method   {method}, {} terms/nodes", result.terms)?;
            let warnings: Vec<String> = result.warnings.iter().map(|w| w.to_string()).collect();
            writeln!(out, "warnings {}", if warnings.is_empty() { "none".into() } else { warnings.join(", ") })?;
        }
    }
    Ok(())
}

/// Writes every row; a failing row is written as `z,NaN,NaN,NaN` and
/// reported on stderr. Returns whether any row failed.
fn cmd_table(a: &TableArgs) -> Result<bool, Failure> {
    let setup = Setup::new(&a.f)?;
    if !setup.needs_z() {
        return Err(Failure::Usage("A has no argument to tabulate; use eval".into()));
    }
    if a.count < 2 {
        return Err(Failure::Usage(format!("--count must be at least 2, got {}", a.count)));
    }
    if !(a.from.is_finite() && a.to.is_finite() && a.from < a.to) {
        return Err(Failure::Usage(format!("need finite --from < --to, got {} and {}", a.from, a.to)));
    }
    let mut w = csv_writer();
    w.write_record(TABLE_HEADER)?;
    let mut any_failed = false;
    let n = a.count - 1;
    for k in 0..=n {
        let z = if k == n { a.to } else { a.from + (a.to - a.from) * k as f64 / n as f64 };
        let zs = fixed_sig(z, CSV_DIGITS);
        match setup.eval(Complex64::new(z, 0.0)) {
            Ok(ev) => {
                let v = ev.result.value;
                w.write_record([zs, fixed_sig(v.re, CSV_DIGITS), fixed_sig(v.im, CSV_DIGITS), fixed_sig(ev.result.abs_err, CSV_DIGITS)])?;
            }
            Err(Failure::Eval(e)) => {
                any_failed = true;
                eprintln!("row {k} (z = {}): {e}", general(z, HUMAN_DIGITS));
                w.write_record([zs.as_str(), "NaN", "NaN", "NaN"])?;
            }
            Err(other) => return Err(other),
        }
    }
    w.flush()?;
    Ok(any_failed)
}

fn print_report(report: &VerifyReport, a: &VerifyArgs) -> Result<(), Failure> {
    match a.format {
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record(["index", "suite", "check", "identity", "params", "residual", "tol", "pass", "note"])?;
            for c in &report.checks {
                w.write_record([
                    c.index.to_string(),
                    c.suite.to_string(),
                    c.name.clone(),
                    c.identity.to_string(),
                    c.params.clone(),
                    fixed_sig(c.residual, CSV_DIGITS),
                    fixed_sig(c.tol, CSV_DIGITS),
                    c.pass.to_string(),
                    c.note.clone().unwrap_or_default(),
                ])?;
            }
            w.flush()?;
        }
        Format::Human => {
            let mut out = io::stdout().lock();
            for c in report.checks.iter().filter(|c| a.verbose || !c.pass) {
                write!(
                    out,
                    "{} #{} {} | {} ({}) | {} | residual {} tol {}",
                    if c.pass { "ok  " } else { "FAIL" },
                    c.index,
                    c.suite,
                    c.name,
                    c.identity,
                    c.params,
                    general(c.residual, 3),
                    general(c.tol, 3)
                )?;
                match &c.note {
                    Some(note) => writeln!(out, " | {note}")?,
                    None => writeln!(out)?,
                }
            }
            for (suite, pass, total) in report.suite_summary() {
                writeln!(out, "{:<22} {pass}/{total} passed", suite.name())?;
            }
            writeln!(out, "total                  {}/{} passed (seed {})", report.passed(), report.checks.len(), a.seed)?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Eval(a) => cmd_eval(&a).map(|()| ExitCode::SUCCESS),
        Command::Table(a) => cmd_table(&a).map(|failed| if failed { ExitCode::from(3) } else { ExitCode::SUCCESS }),
        Command::Verify(a) => {
            if let Some(t) = a.tol {
                if t.is_nan() || t < 0.0 {
                    return Err(Failure::Usage(format!("--tol must be non-negative, got {t}")));
                }
            }
            let config = VerifyConfig { q: a.q, tol: a.tol, seed: a.seed };
            let report = verify::run(&a.suite.suites(), &config)?;
            print_report(&report, &a)?;
            Ok(if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Eval(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
