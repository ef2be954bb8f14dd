//! `tunnel`: quadrature values, asymptotic expansions, the comparison table
//! and exact expansion coefficients from the command line.

use std::fmt;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize, Serializer};
use tunnel_core::asymptotics::{relative_error_table_with, tunnel_probability_asym, uniform_psi_approx, Form, TableRow, UniformOrders};
use tunnel_core::oscillator::eval_psi;
use tunnel_core::quadrature::{check_tolerance, tunnel_probability_quadrature, DEFAULT_TOL};
use tunnel_core::series::{
    derive_a1_series, derive_beta_series, derive_inversion_series, derive_phi_series, derive_weight_series,
    derive_zeta_series, TruncatedSeries, MAX_ORDER,
};
use tunnel_core::OscillatorMode;

pub const TABLE_NS: [u32; 8] = [10, 20, 50, 100, 200, 400, 500, 800];

#[derive(Debug, Parser)]
#[command(name = "tunnel", version, about = "Harmonic-oscillator tunnelling probability: quadrature and large-n asymptotics")]
pub struct Cli {
    /// Quadrature tolerance, in [1e-15, 1e-3].
    #[arg(long, global = true, default_value_t = DEFAULT_TOL, value_parser = parse_tol)]
    pub tol: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tunnelling probability by quadrature of the exact density.
    Exact {
        /// Quantum numbers (space or comma separated).
        #[arg(required = true, value_delimiter = ',')]
        ns: Vec<u32>,
    },
    /// Asymptotic expansion with its term-by-term breakdown.
    Asym {
        #[arg(required = true, value_delimiter = ',')]
        ns: Vec<u32>,
        #[arg(long, default_value = "eq42", value_parser = parse_form)]
        form: Form,
    },
    /// Quadrature against the asymptotic form, with relative errors.
    Table {
        #[arg(long, value_delimiter = ',', default_values_t = TABLE_NS)]
        ns: Vec<u32>,
        #[arg(long, default_value = "eq42", value_parser = parse_form)]
        form: Form,
        /// Also write the table as CSV (`-` writes CSV to stdout instead of text).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Exact expansion coefficients.
    Coeffs {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u16).range(1..=MAX_ORDER as i64))]
        order: u16,
    },
    /// Pointwise check of the uniform approximation against the recurrence.
    Validate {
        #[arg(long, value_delimiter = ',', default_values_t = [100u32, 400])]
        ns: Vec<u32>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    /// φ(ζ) = Σ α_m ζ^m
    Alpha,
    /// −φ(ζ) b0(ζ) = Σ β_m ζ^m
    Beta,
    /// a1(ζ)
    A1,
    /// x(ζ)
    Inversion,
    /// −φ(1 + 1152 f2)/576
    Weight,
    /// ζ(x) in powers of x − 1
    Zeta,
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let tol: f64 = s.parse().map_err(|e| format!("{e}"))?;
    check_tolerance(tol).map_err(|e| e.to_string())?;
    Ok(tol)
}

fn parse_form(s: &str) -> Result<Form, String> {
    s.parse()
}

#[derive(Debug)]
pub enum CliError {
    Core(tunnel_core::Error),
    Io(io::Error),
    Csv(csv::Error),
}

impl CliError {
    /// 3 for quadrature failure, 2 for arguments outside a domain, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(tunnel_core::Error::NonConvergence { .. }) => 3,
            CliError::Core(tunnel_core::Error::Domain { .. } | tunnel_core::Error::InvalidTolerance(_)) => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::Csv(e) => write!(f, "csv error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<tunnel_core::Error> for CliError {
    fn from(e: tunnel_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Csv(e)
    }
}

/// `v` with ten significant digits, in positional notation.
pub fn format_decimal(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let digits = (9 - v.abs().log10().floor() as i32).max(0) as usize;
    format!("{v:.digits$}")
}

/// `v` with ten significant digits, in scientific notation.
pub fn format_scientific(v: f64) -> String {
    format!("{v:.9e}")
}

fn ser_decimal<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_decimal(*v))
}

fn ser_scientific<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_scientific(*v))
}

/// One CSV row; values are already rounded to what the CSV carries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CsvRecord {
    pub n: u32,
    #[serde(serialize_with = "ser_decimal")]
    pub p_exact: f64,
    #[serde(serialize_with = "ser_decimal")]
    pub p_asym: f64,
    #[serde(serialize_with = "ser_scientific")]
    pub rel_error: f64,
}

impl From<&TableRow> for CsvRecord {
    fn from(row: &TableRow) -> Self {
        let round = |s: String| s.parse::<f64>().expect("formatted float");
        CsvRecord {
            n: row.n,
            p_exact: round(format_decimal(row.p_exact)),
            p_asym: round(format_decimal(row.p_asym)),
            rel_error: round(format_scientific(row.rel_error)),
        }
    }
}

pub fn write_csv<W: Write>(records: &[CsvRecord], out: W) -> Result<(), CliError> {
    let mut writer = csv::Writer::from_writer(out);
    for r in records {
        writer.serialize(r)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_csv<R: io::Read>(input: R) -> Result<Vec<CsvRecord>, CliError> {
    let mut reader = csv::Reader::from_reader(input);
    reader.deserialize().map(|r| r.map_err(CliError::from)).collect()
}

fn coefficient_series(which: Which, order: usize) -> tunnel_core::Result<TruncatedSeries> {
    match which {
        Which::Alpha => derive_phi_series(order),
        Which::Beta => derive_beta_series(order),
        Which::A1 => derive_a1_series(order),
        Which::Inversion => derive_inversion_series(order),
        Which::Weight => derive_weight_series(order),
        Which::Zeta => derive_zeta_series(order),
    }
}

pub fn run<W: Write>(cli: &Cli, out: &mut W) -> Result<(), CliError> {
    match &cli.command {
        Command::Exact { ns } => {
            for &n in ns {
                let r = tunnel_probability_quadrature(OscillatorMode::new(n), cli.tol)?;
                writeln!(
                    out,
                    "{n} {:.15} (error estimate {:.1e}, {} panels)",
                    r.value, r.abs_error_estimate, r.panels_used
                )?;
            }
        }
        Command::Asym { ns, form } => {
            for &n in ns {
                let r = tunnel_probability_asym(OscillatorMode::new(n), *form)?;
                writeln!(out, "n = {n}, form = {form}")?;
                writeln!(out, "{r}")?;
            }
        }
        Command::Table { ns, form, csv } => {
            let rows = relative_error_table_with(ns, cli.tol, *form)?;
            let records: Vec<CsvRecord> = rows.iter().map(CsvRecord::from).collect();
            match csv.as_deref() {
                Some(path) if path.as_os_str() == "-" => write_csv(&records, &mut *out)?,
                other => {
                    writeln!(out, "n, P_tun, rel_error")?;
                    for row in &rows {
                        writeln!(out, "{}, {:.7}, {:.3e}", row.n, row.p_exact, row.rel_error)?;
                    }
                    if let Some(path) = other {
                        write_csv(&records, File::create(path)?)?;
                    }
                }
            }
        }
        Command::Coeffs { which, order } => {
            let series = coefficient_series(*which, usize::from(*order))?;
            let exact: Vec<String> = series.coeffs().iter().map(ToString::to_string).collect();
            writeln!(out, "{}", exact.join(", "))?;
            for (k, c) in series.coeffs().iter().enumerate() {
                writeln!(out, "{k:>3}  {:<36} {:+.16e}", c.to_string(), c.to_f64())?;
            }
        }
        Command::Validate { ns } => {
            let xs = [1.0, 1.05, 1.1, 1.25, 1.5, 2.0, 2.5, 3.0];
            writeln!(out, "{:>6} {:>6} {:>12}", "n", "x/nu", "rel_dev")?;
            let mut worst: f64 = 0.0;
            for &n in ns {
                let mode = OscillatorMode::new(n);
                for &x in &xs {
                    let exact = eval_psi(mode, x * mode.nu());
                    let approx = uniform_psi_approx(mode, x, UniformOrders::FULL)?;
                    let dev = approx.relative_deviation(&exact);
                    worst = worst.max(dev);
                    writeln!(out, "{n:>6} {x:>6.2} {dev:>12.3e}")?;
                }
            }
            writeln!(out, "max relative deviation {worst:.3e}")?;
        }
    }
    Ok(())
}
