//! Command-line surface, kept in the library so it can be driven in-process.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 bad flags, domain
//! error or bad config, 3 I/O error.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;

use crate::coherent::{self, Hamiltonian, PhasePoint, SectorPolicy, WINDOW_TAIL};
use crate::hilbert::{Sector, Truncation};
use crate::theta::{self, SeriesControl, ThetaArg, ThetaKind};
use crate::verify::{self, VerifyConfig};

pub const CONFIG_ENV: &str = "CIRCLE_CS_CONFIG";

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "circle-cs", version, about = "Coherent states on the circle")]
pub struct Cli {
    /// Significant digits in printed numbers.
    #[arg(long, global = true, default_value_t = 9, value_parser = clap::value_parser!(u8).range(1..=17))]
    pub digits: u8,
    /// Output format; CSV by default, JSON for `evolve`.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Observable {
    #[value(name = "J")]
    J,
    #[value(name = "U")]
    U,
    #[value(name = "relU")]
    RelU,
    #[value(name = "QP")]
    Qp,
    #[value(name = "expJ")]
    ExpJ,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanObservable {
    /// `⟨Ĵ⟩` against `l ∓ 2πe^{−π²} sin 2πl`.
    #[value(name = "J")]
    J,
    /// `|⟨U⟩|` against `e^{−¼}`.
    #[value(name = "U")]
    U,
    /// `⟨ξ|ξ⟩` against `√π e^{l²}` (bosons) or its fermion analogue.
    #[value(name = "norm")]
    Norm,
    /// `⟨e^{sĴ}⟩` against `e^{s²/4 + sl}`.
    #[value(name = "expJ")]
    ExpJ,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HamiltonianKind {
    Free,
    Linear,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate θ₂, θ₃ or θ₄ at (v | i·tau_im).
    Theta {
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=4))]
        kind: u8,
        /// Real part of v.
        #[arg(long, allow_hyphen_values = true)]
        v: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        v_im: f64,
        #[arg(long, allow_hyphen_values = true)]
        tau_im: f64,
    },
    /// Exact value, approximation and deviation of an observable.
    Expect {
        #[arg(long, allow_hyphen_values = true)]
        l: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        phi: f64,
        #[arg(long, default_value = "boson")]
        sector: Sector,
        #[arg(long)]
        obs: Observable,
        /// Reference point for relU.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        ref_l: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        ref_phi: f64,
        /// Exponent s for expJ.
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        s: f64,
    },
    /// Tabulate an observable over an l grid.
    Scan {
        #[arg(long)]
        obs: ScanObservable,
        #[arg(long, allow_hyphen_values = true)]
        l_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        l_max: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "boson")]
        sector: Sector,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        s: f64,
        /// Write here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evolve a coherent state and print the state vector.
    Evolve {
        #[arg(long, allow_hyphen_values = true)]
        l: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        phi: f64,
        #[arg(long, default_value = "boson")]
        sector: Sector,
        #[arg(long, value_enum, default_value_t = HamiltonianKind::Free)]
        hamiltonian: HamiltonianKind,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        omega: f64,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        #[arg(long)]
        two_jmax: Option<i32>,
    },
    /// Free-rotor level probabilities in a coherent state.
    Distribution {
        #[arg(long, allow_hyphen_values = true)]
        l: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        phi: f64,
        #[arg(long, default_value = "boson")]
        sector: Sector,
        /// Required for the fermion sector.
        #[arg(long)]
        allow_fermion: bool,
        #[arg(long)]
        two_jmax: Option<i32>,
    },
    /// Run the verification suite and print the JSON report.
    Verify {
        /// Config file; defaults to $CIRCLE_CS_CONFIG.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn io(e: impl std::fmt::Display) -> CliError {
    CliError::Io(e.to_string())
}

/// Formats `x` with `digits` significant digits, `%g` style.
pub fn fmt_sig(x: f64, digits: u8) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let p = digits as i32;
    let sci = format!("{:.*e}", (p - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let e: i32 = exp.parse().expect("integer exponent");
    if e < -4 || e >= p {
        format!("{}e{}", trim_zeros(mantissa), e)
    } else {
        trim_zeros(&format!("{:.*}", (p - 1 - e).max(0) as usize, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<f64>>,
    labels: Option<(&'static str, Vec<String>)>,
}

impl Table {
    fn render(&self, format: Format, digits: u8) -> String {
        let mut out = String::new();
        match format {
            Format::Csv => {
                let mut head: Vec<&str> = Vec::new();
                if let Some((name, _)) = &self.labels {
                    head.push(name);
                }
                head.extend(&self.header);
                out.push_str(&head.join(","));
                out.push('\n');
                for (k, row) in self.rows.iter().enumerate() {
                    let mut cells: Vec<String> = Vec::new();
                    if let Some((_, labels)) = &self.labels {
                        cells.push(labels[k].clone());
                    }
                    cells.extend(row.iter().map(|v| fmt_sig(*v, digits)));
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
            }
            Format::Json => {
                for (k, row) in self.rows.iter().enumerate() {
                    let mut obj = serde_json::Map::new();
                    if let Some((name, labels)) = &self.labels {
                        obj.insert(name.to_string(), json!(labels[k]));
                    }
                    for (h, v) in self.header.iter().zip(row) {
                        let rounded: f64 = fmt_sig(*v, digits).parse().unwrap_or(f64::NAN);
                        obj.insert(h.to_string(), json!(rounded));
                    }
                    let _ = writeln!(out, "{}", serde_json::Value::Object(obj));
                }
            }
        }
        out
    }
}

fn point(l: f64, phi: f64) -> Result<PhasePoint, CliError> {
    PhasePoint::new(l, phi).map_err(usage)
}

fn window(l: f64, explicit: Option<i32>) -> Result<Truncation, CliError> {
    match explicit {
        Some(t) => Truncation::new(t).map_err(usage),
        None => {
            let auto = coherent::window_for(l, WINDOW_TAIL).two_jmax();
            Truncation::new(auto.max(40)).map_err(usage)
        }
    }
}

fn cmd_theta(kind: u8, v: Complex64, tau_im: f64) -> Result<Table, CliError> {
    let kind = ThetaKind::from_index(kind).ok_or_else(|| usage("kind must be 2, 3 or 4"))?;
    let arg = ThetaArg::imaginary(v, tau_im).map_err(usage)?;
    let value = theta::theta(kind, arg, SeriesControl::default()).map_err(usage)?;
    Ok(Table {
        header: vec!["re", "im"],
        rows: vec![vec![value.re, value.im]],
        labels: None,
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_expect(
    l: f64,
    phi: f64,
    sector: Sector,
    obs: Observable,
    ref_l: f64,
    ref_phi: f64,
    s: f64,
) -> Result<Table, CliError> {
    let p = point(l, phi)?;
    let (name, exact, approx) = match obs {
        Observable::J => {
            let exact = coherent::expect_j(p, sector);
            ("J", Complex64::new(exact, 0.0), Complex64::new(coherent::expect_j_approx(l, sector), 0.0))
        }
        Observable::U => ("U", coherent::expect_u(p, sector), coherent::expect_u_approx(p)),
        Observable::RelU => {
            let r = point(ref_l, ref_phi)?;
            let exact = coherent::relative_expect_u(p, r, sector).map_err(usage)?;
            ("relU", exact, Complex64::from_polar(1.0, p.phi() - r.phi()))
        }
        Observable::Qp => {
            let trunc = window(l, None)?;
            let state = coherent::coherent_state(p, sector, trunc).map_err(usage)?;
            let u = coherent::uncertainty_of_state(&state).map_err(usage)?;
            ("QP", Complex64::new(u.product(), 0.0), Complex64::new(u.bound, 0.0))
        }
        Observable::ExpJ => {
            let v = coherent::expect_exp_j(s, p, sector).map_err(usage)?;
            ("expJ", Complex64::new(v.exact, 0.0), Complex64::new(v.approx, 0.0))
        }
    };
    Ok(Table {
        header: vec!["exact_re", "exact_im", "approx_re", "approx_im", "deviation"],
        rows: vec![vec![exact.re, exact.im, approx.re, approx.im, (exact - approx).norm()]],
        labels: Some(("obs", vec![name.to_string()])),
    })
}

fn cmd_scan(obs: ScanObservable, l_min: f64, l_max: f64, n: usize, sector: Sector, s: f64) -> Result<Table, CliError> {
    if n < 2 {
        return Err(usage(format!("scan needs n >= 2 (got {n})")));
    }
    if !(l_min.is_finite() && l_max.is_finite()) {
        return Err(usage("l range must be finite"));
    }
    let mut rows = Vec::with_capacity(n);
    for k in 0..n {
        let l = l_min + (l_max - l_min) * k as f64 / (n - 1) as f64;
        let p = point(l, 0.0)?;
        let (exact, approx) = match obs {
            ScanObservable::J => (coherent::expect_j(p, sector), coherent::expect_j_approx(l, sector)),
            ScanObservable::U => (coherent::expect_u(p, sector).norm(), (-0.25f64).exp()),
            ScanObservable::Norm => (coherent::norm_sq(p, sector), std::f64::consts::PI.sqrt() * (l * l).exp()),
            ScanObservable::ExpJ => {
                let v = coherent::expect_exp_j(s, p, sector).map_err(usage)?;
                (v.exact, v.approx)
            }
        };
        let reference = match obs {
            // Deviation from the lattice value l, whose size the approximation predicts.
            ScanObservable::J => l,
            _ => approx,
        };
        rows.push(vec![l, exact, approx, (exact - reference).abs()]);
    }
    Ok(Table {
        header: vec!["l", "exact", "approx", "deviation"],
        rows,
        labels: None,
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_evolve(
    l: f64,
    phi: f64,
    sector: Sector,
    hamiltonian: HamiltonianKind,
    omega: f64,
    t: f64,
    two_jmax: Option<i32>,
    format: Format,
    digits: u8,
) -> Result<String, CliError> {
    if !(t.is_finite() && omega.is_finite()) {
        return Err(usage("t and omega must be finite"));
    }
    let p = point(l, phi)?;
    let state = coherent::coherent_state(p, sector, window(l, two_jmax)?).map_err(usage)?;
    let h = match hamiltonian {
        HamiltonianKind::Free => Hamiltonian::FreeRotor,
        HamiltonianKind::Linear => Hamiltonian::Linear { omega },
    };
    let evolved = coherent::evolve(&state, h, t);
    Ok(match format {
        Format::Json => format!("{}\n", serde_json::to_string(&evolved).expect("state serializes")),
        Format::Csv => {
            let rows = evolved.iter().map(|(tj, c)| vec![0.5 * tj as f64, c.re, c.im]).collect();
            Table {
                header: vec!["j", "re", "im"],
                rows,
                labels: None,
            }
            .render(Format::Csv, digits)
        }
    })
}

fn cmd_distribution(l: f64, phi: f64, sector: Sector, allow_fermion: bool, two_jmax: Option<i32>) -> Result<Table, CliError> {
    let p = point(l, phi)?;
    let policy = if allow_fermion {
        SectorPolicy::AllowFermion
    } else {
        SectorPolicy::BosonOnly
    };
    let levels = coherent::energy_distribution(p, sector, window(l, two_jmax)?, policy).map_err(usage)?;
    Ok(Table {
        header: vec!["j", "energy", "prob", "gaussian"],
        rows: levels.iter().map(|e| vec![e.j, e.energy, e.prob, e.gaussian]).collect(),
        labels: None,
    })
}

fn load_config(path: Option<PathBuf>) -> Result<VerifyConfig, CliError> {
    let path = path.or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    match path {
        None => Ok(VerifyConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(&p).map_err(|e| io(format!("{}: {e}", p.display())))?;
            VerifyConfig::from_json(&text).map_err(usage)
        }
    }
}

/// Executes a parsed command, writing to `out`; returns the exit code.
pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let (fmt, digits) = (cli.format.unwrap_or(Format::Csv), cli.digits);
    let text = match cli.command {
        Command::Theta { kind, v, v_im, tau_im } => cmd_theta(kind, Complex64::new(v, v_im), tau_im)?.render(fmt, digits),
        Command::Expect {
            l,
            phi,
            sector,
            obs,
            ref_l,
            ref_phi,
            s,
        } => cmd_expect(l, phi, sector, obs, ref_l, ref_phi, s)?.render(fmt, digits),
        Command::Scan {
            obs,
            l_min,
            l_max,
            n,
            sector,
            s,
            out: path,
        } => {
            let text = cmd_scan(obs, l_min, l_max, n, sector, s)?.render(fmt, digits);
            if let Some(path) = path {
                std::fs::write(&path, text).map_err(|e| io(format!("{}: {e}", path.display())))?;
                return Ok(EXIT_OK);
            }
            text
        }
        Command::Evolve {
            l,
            phi,
            sector,
            hamiltonian,
            omega,
            t,
            two_jmax,
        } => {
            let format = cli.format.unwrap_or(Format::Json);
            cmd_evolve(l, phi, sector, hamiltonian, omega, t, two_jmax, format, digits)?
        }
        Command::Distribution {
            l,
            phi,
            sector,
            allow_fermion,
            two_jmax,
        } => cmd_distribution(l, phi, sector, allow_fermion, two_jmax)?.render(fmt, digits),
        Command::Verify { config } => {
            let cfg = load_config(config)?;
            let report = verify::run(&cfg).map_err(usage)?;
            writeln!(out, "{}", report.to_json()).map_err(io)?;
            return Ok(if report.all_passed() { EXIT_OK } else { EXIT_CHECK_FAILED });
        }
    };
    out.write_all(text.as_bytes()).map_err(io)?;
    Ok(EXIT_OK)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = write!(err, "{e}");
            return code;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            e.exit_code()
        }
    }
}
