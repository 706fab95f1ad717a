//! Command-line front end. Exit status 0 means everything requested was
//! certified, 1 means a check failed, 2 means bad usage or input.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;

use crate::curves::{curves, to_csv};
use crate::explorer::{explore, TetraCase, DEFAULT_MAX_DEPTH};
use crate::exprops::rewrite;
use crate::geometry::TypeTag;
use crate::interval::parse_rational;
use crate::lemma_checks::{check_face_lemmas, sliding_table};
use crate::local_opt::{certify, certify_published, published_epsilon, LocalCertificate};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "fmtetra", version, about = "Certified density bounds for tetrahedra of binary sphere packings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Explore one of the nine one-contact cases.
    Check(CheckArgs),
    /// Certify the neighbourhoods of the locally optimal tetrahedra.
    Local(LocalArgs),
    /// Run the sliding inequalities and the randomized face checks.
    Lemmas(LemmaArgs),
    /// Emit density curves of the extremal tetrahedra as CSV.
    Curves(CurveArgs),
    /// Rewrite polynomials, one per line, to reduce variable occurrences.
    Exprops(ExpropsArgs),
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Case as type/tight-edge, e.g. 1111/11 or 111r/1r.
    #[arg(long, value_parser = parse_case)]
    pub case: TetraCase,
    #[arg(long, default_value_t = default_workers(), value_parser = clap::value_parser!(u32).range(1..))]
    pub workers: u32,
    #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
    pub max_depth: u32,
}

#[derive(Debug, Args)]
pub struct LocalArgs {
    /// Type to certify; all five plus the constant-α variant when omitted.
    #[arg(long = "type", value_parser = parse_type)]
    pub tag: Option<TypeTag>,
    /// Neighbourhood size as a rational, e.g. 1/46.
    #[arg(long, value_parser = parse_epsilon, requires = "tag")]
    pub epsilon: Option<BigRational>,
    /// Six comma-separated exponents for α.
    #[arg(long, value_parser = parse_k, requires = "tag")]
    pub k: Option<[i32; 6]>,
}

#[derive(Debug, Args)]
pub struct LemmaArgs {
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(long, default_value_t = 0.05)]
    pub r_min: f64,
    #[arg(long, default_value_t = 0.95)]
    pub r_max: f64,
    #[arg(long, default_value_t = 91)]
    pub steps: usize,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExpropsArgs {
    /// Input file; standard input when omitted or `-`.
    pub input: Option<PathBuf>,
}

fn default_workers() -> u32 {
    std::thread::available_parallelism().map_or(1, |n| n.get() as u32)
}

fn parse_case(s: &str) -> Result<TetraCase, String> {
    s.parse()
}

fn parse_type(s: &str) -> Result<TypeTag, String> {
    s.parse().map_err(|_| format!("unknown type `{s}` (expected 1111, 111r, 11rr, 1rrr or rrrr)"))
}

fn parse_epsilon(s: &str) -> Result<BigRational, String> {
    let q = parse_rational(s).map_err(|e| e.to_string())?;
    if q <= BigRational::from_integer(0.into()) {
        return Err(format!("epsilon must be positive, got {s}"));
    }
    Ok(q)
}

fn parse_k(s: &str) -> Result<[i32; 6], String> {
    let parts: Vec<i32> = s.split(',').map(|p| p.trim().parse::<i32>().map_err(|e| format!("`{p}`: {e}"))).collect::<Result<_, _>>()?;
    parts.try_into().map_err(|v: Vec<i32>| format!("expected 6 exponents, got {}", v.len()))
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Check(a) => cmd_check(&a, out, err),
        Command::Local(a) => cmd_local(&a, out),
        Command::Lemmas(a) => cmd_lemmas(&a, out),
        Command::Curves(a) => cmd_curves(&a, out, err),
        Command::Exprops(a) => cmd_exprops(&a, out, err),
    };
    result.unwrap_or_else(|e| {
        let _ = writeln!(err, "error: {e}");
        EXIT_FAILED
    })
}

pub fn cmd_check(a: &CheckArgs, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<i32> {
    match explore(&a.case, a.workers as usize, a.max_depth) {
        Ok(stats) => {
            writeln!(out, "{}", stats.summary_line(&a.case))?;
            Ok(EXIT_OK)
        }
        Err(e) => {
            writeln!(err, "case={} failed: {e}", a.case.name())?;
            Ok(EXIT_FAILED)
        }
    }
}

fn report(cert: &LocalCertificate, out: &mut dyn Write, all_ok: &mut bool) -> io::Result<()> {
    writeln!(out, "{cert}")?;
    *all_ok &= cert.verdict;
    Ok(())
}

pub fn cmd_local(a: &LocalArgs, out: &mut dyn Write) -> io::Result<i32> {
    let mut ok = true;
    match a.tag {
        Some(tag) => {
            let (n, published_k) = published_epsilon(tag);
            let eps = a.epsilon.clone().unwrap_or_else(|| BigRational::new(1.into(), n.into()));
            report(&certify(tag, &eps, a.k.or(published_k)), out, &mut ok)?;
        }
        None => {
            for tag in TypeTag::ALL {
                report(&certify_published(tag), out, &mut ok)?;
            }
            let eps = BigRational::new(1.into(), 2963.into());
            report(&certify(TypeTag::Trrrr, &eps, Some([0; 6])), out, &mut ok)?;
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_FAILED })
}

pub fn cmd_lemmas(a: &LemmaArgs, out: &mut dyn Write) -> io::Result<i32> {
    let rows = sliding_table();
    for row in &rows {
        writeln!(out, "sliding {row}")?;
    }
    let failed = rows.iter().filter(|r| !r.result.holds).count();
    writeln!(out, "sliding total={} failed={}", rows.len(), failed)?;
    let face = check_face_lemmas(a.samples, a.seed);
    writeln!(out, "face {face}")?;
    for f in &face.failures {
        writeln!(out, "face failure: {f}")?;
    }
    let ok = failed == 0 && face.passes() && face.both_e_signs();
    Ok(if ok { EXIT_OK } else { EXIT_FAILED })
}

pub fn cmd_curves(a: &CurveArgs, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<i32> {
    if !(a.r_min > 0.0 && a.r_min <= a.r_max && a.r_max < 1.0) {
        writeln!(err, "error: need 0 < r-min <= r-max < 1")?;
        return Ok(EXIT_USAGE);
    }
    let csv = to_csv(&curves(a.r_min, a.r_max, a.steps));
    match &a.output {
        Some(path) => fs::write(path, csv)?,
        None => out.write_all(csv.as_bytes())?,
    }
    Ok(EXIT_OK)
}

pub fn cmd_exprops(a: &ExpropsArgs, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<i32> {
    let text = match &a.input {
        Some(p) if p.as_os_str() != "-" => fs::read_to_string(p)?,
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    match rewrite(&text) {
        Ok(rows) => {
            let mut ok = true;
            for row in rows {
                writeln!(out, "{row}")?;
                ok &= row.verified;
            }
            Ok(if ok { EXIT_OK } else { EXIT_FAILED })
        }
        Err(e) => {
            writeln!(err, "error: {e}")?;
            Ok(EXIT_USAGE)
        }
    }
}
