//! The `iwasawa` command line front end.
//!
//! Every subcommand reads JSON files, runs one operation and writes JSON
//! (or, for `invariants --table`, a text table). Exit status is 0 on
//! success, 1 on a mathematical error and 2 on an input error; errors are
//! reported as `{"error": {"kind": ..., "message": ...}}` on standard
//! output.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::coleman::{coleman_tilde_certified, is_norm_coherent, ColemanSeries};
use crate::cyclotomic::invariant_identity_check;
use crate::error::{Error, Result};
use crate::galois::{iwasawa_function, lp_value, lp_value_by_series, CharacterOfH};
use crate::json::{
    coeff_strings, error_json, measure_json, parse_exponents, parse_scenario, series_json, GaloisFile, MatrixFile,
    Overrides, SeriesFile,
};
use crate::mahler::UnitMeasure;
use crate::padic::{PadicContext, PadicInt};
use crate::series::{Coeff, IwasawaSeries};
use crate::weierstrass::{weierstrass_divide, weierstrass_prepare, weierstrass_prepare_polynomial};

const DEFAULT_DIGITS: u32 = 64;
const DEFAULT_TDEG: usize = 32;

#[derive(Debug, Parser)]
#[command(name = "iwasawa", version, about = "p-adic measures, Iwasawa series and Kolyvagin derivatives")]
struct Cli {
    /// The prime, replacing the one in input files.
    #[arg(long, global = true)]
    p: Option<u64>,
    /// p-adic digits N, replacing the one in input files.
    #[arg(long, global = true)]
    digits: Option<u32>,
    /// Truncation degree M in T, replacing the one in input files.
    #[arg(long, global = true)]
    tdeg: Option<usize>,
    /// Topological generator kappa(gamma_0); defaults to 5 for p = 2 and 1 + p otherwise.
    #[arg(long = "kappa-gen", global = true, allow_hyphen_values = true)]
    kappa_gen: Option<i64>,
    /// Seed for randomised constructions, replacing the one in scenario files.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Check {
    Telescope,
    Invariance,
    Kappa,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Weierstrass preparation F = p^mu P U.
    Prepare {
        #[arg(long)]
        series: PathBuf,
    },
    /// The mu and lambda invariants.
    Mulam {
        #[arg(long)]
        series: PathBuf,
    },
    /// Division with remainder by a distinguished polynomial.
    Divide {
        #[arg(long)]
        series: PathBuf,
        /// Series file holding the distinguished polynomial.
        #[arg(long)]
        by: PathBuf,
    },
    /// A Dirac measure, or a summary of a measure.
    Mahler {
        #[arg(long, allow_hyphen_values = true, conflicts_with = "measure")]
        dirac: Option<i64>,
        #[arg(long, required_unless_present = "dirac")]
        measure: Option<PathBuf>,
        /// Number of moments in the summary.
        #[arg(long, default_value_t = 4)]
        moments: usize,
    },
    /// Restriction to the units, or to the class a + p^k Z_p.
    Restrict {
        #[arg(long)]
        measure: PathBuf,
        #[arg(long, allow_hyphen_values = true, requires = "level")]
        class: Option<i64>,
        #[arg(long, requires = "class")]
        level: Option<u32>,
    },
    /// Pushforward along x -> u x.
    Pushforward {
        #[arg(long)]
        measure: PathBuf,
        /// `a` or `a/b`.
        #[arg(long, allow_hyphen_values = true)]
        by: String,
    },
    /// Moments integral x^k d nu.
    Moment {
        #[arg(long)]
        measure: PathBuf,
        #[arg(long, default_value_t = 0)]
        k: usize,
        /// Report the moments 0..count instead.
        #[arg(long)]
        count: Option<usize>,
    },
    /// The measure attached to a unit power series.
    Coleman {
        #[arg(long)]
        series: PathBuf,
    },
    /// L_p(s, chi) by moments, cross-checked by evaluation of F(w, chi).
    Lp {
        #[arg(long)]
        measure: PathBuf,
        /// Exponents of chi, e.g. "1,2".
        #[arg(long, allow_hyphen_values = true)]
        chi: String,
        #[arg(long, allow_hyphen_values = true)]
        s: i64,
    },
    /// The series F(w, chi).
    Iwfun {
        #[arg(long)]
        measure: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        chi: String,
    },
    /// Characteristic ideal of the cokernel of a square matrix.
    Charideal {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Kolyvagin derivative checks on a synthetic Euler system.
    Euler {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, value_enum)]
        check: Check,
        /// Squarefree product of prime labels, e.g. q1q2; `1` for the trivial ideal.
        #[arg(long)]
        r: Option<String>,
    },
    /// mu phi(p^n) + lambda against ord_p of the norm of F(zeta_{p^n} - 1).
    Invariants {
        #[arg(long)]
        series: PathBuf,
        /// Inclusive range `a..b`, or a single level.
        #[arg(long, default_value = "1..4")]
        levels: String,
        /// Print a text table instead of JSON.
        #[arg(long)]
        table: bool,
    },
}

enum Report {
    Json(Value),
    Text(String),
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

impl Cli {
    fn overrides(&self) -> Overrides {
        Overrides { p: self.p, digits: self.digits, tdeg: self.tdeg }
    }

    fn bare_context(&self) -> Result<PadicContext> {
        PadicContext::new(self.p.unwrap_or(2), self.digits.unwrap_or(DEFAULT_DIGITS))
    }

    fn series(&self, path: &Path) -> Result<(IwasawaSeries, bool)> {
        let f = SeriesFile::parse(&read(path)?)?;
        Ok((f.series(&self.overrides())?, f.polynomial()))
    }

    fn measure(&self, path: &Path) -> Result<UnitMeasure> {
        SeriesFile::parse(&read(path)?)?.measure(&self.overrides())
    }

    fn kappa0(&self, ctx: &PadicContext) -> PadicInt {
        let p = ctx.p() as i64;
        ctx.from_i64(self.kappa_gen.unwrap_or(if p == 2 { 5 } else { 1 + p }))
    }
}

fn parse_ratio(ctx: &PadicContext, text: &str) -> Result<PadicInt> {
    let bad = || Error::Parse(format!("cannot read {text:?} as a p-adic number"));
    match text.split_once('/') {
        Some((a, b)) => {
            let a = a.trim().parse::<i64>().map_err(|_| bad())?;
            let b = b.trim().parse::<i64>().map_err(|_| bad())?;
            ctx.from_ratio(a, b)
        }
        None => PadicInt::parse_in(ctx, text),
    }
}

fn parse_levels(text: &str) -> Result<Vec<u32>> {
    let bad = || Error::Parse(format!("levels must look like 2..6, got {text:?}"));
    let (a, b) = match text.split_once("..") {
        Some((a, b)) => (a.trim().parse::<u32>().map_err(|_| bad())?, b.trim_start_matches('=').trim().parse::<u32>().map_err(|_| bad())?),
        None => {
            let n = text.trim().parse::<u32>().map_err(|_| bad())?;
            (n, n)
        }
    };
    if a > b {
        return Err(bad());
    }
    Ok((a..=b).collect())
}

fn dispatch(cli: &Cli) -> Result<Report> {
    let ov = cli.overrides();
    let out = match &cli.command {
        Command::Prepare { series } => {
            let (f, poly) = cli.series(series)?;
            let w = if poly { weierstrass_prepare_polynomial(&f)? } else { weierstrass_prepare(&f)? };
            let p: Vec<String> = w.poly.iter().map(|c| c.to_string()).collect();
            json!({ "mu": w.mu, "lambda": w.lambda(), "P": p, "unit": series_json(&w.unit) })
        }
        Command::Mulam { series } => {
            let (f, _) = cli.series(series)?;
            let ml = f.mu_lambda()?;
            json!({ "mu": ml.mu, "lambda": ml.lambda, "at_window_edge": ml.at_window_edge })
        }
        Command::Divide { series, by } => {
            let (f, _) = cli.series(series)?;
            let (g, _) = cli.series(by)?;
            let mut poly = g.coeffs().to_vec();
            while poly.len() > 1 && poly.last().is_some_and(|c| c.is_zero()) {
                poly.pop();
            }
            let (q, r) = weierstrass_divide(&f, &poly)?;
            json!({ "quotient": series_json(&q), "remainder": coeff_strings(&r) })
        }
        Command::Mahler { dirac: Some(a), .. } => {
            let ctx = cli.bare_context()?;
            measure_json(&UnitMeasure::dirac_int(&ctx, *a, cli.tdeg.unwrap_or(DEFAULT_TDEG)))
        }
        Command::Mahler { measure, moments, .. } => {
            let path = measure.as_ref().ok_or_else(|| Error::Parse("--measure or --dirac is required".into()))?;
            let nu = cli.measure(path)?;
            let atoms = nu.atoms().map(|a| a.iter().map(|c| c.to_string()).collect::<Vec<_>>());
            let ms: Vec<String> = nu.moments(*moments)?.iter().map(|c| c.to_string()).collect();
            json!({
                "total_mass": nu.total_mass().to_string(),
                "unit_supported": nu.is_unit_supported()?,
                "finite": nu.finite,
                "point_masses": atoms,
                "moments": ms,
            })
        }
        Command::Restrict { measure, class, level } => {
            let nu = cli.measure(measure)?;
            let r = match (class, level) {
                (Some(a), Some(k)) => nu.restrict_to_class(*a, *k)?,
                _ => nu.restrict_to_units()?,
            };
            measure_json(&r)
        }
        Command::Pushforward { measure, by } => {
            let nu = cli.measure(measure)?;
            let u = parse_ratio(nu.context(), by)?;
            measure_json(&nu.pushforward_scale(&u)?)
        }
        Command::Moment { measure, k, count } => {
            let nu = cli.measure(measure)?;
            match count {
                Some(c) => {
                    let ms: Vec<String> = nu.moments(*c)?.iter().map(|x| x.to_string()).collect();
                    json!({ "moments": ms })
                }
                None => json!({ "k": k, "value": nu.moment(*k)?.to_string() }),
            }
        }
        Command::Coleman { series } => {
            let (g, poly) = cli.series(series)?;
            let g = ColemanSeries::new(g, poly)?;
            let (nu, fixed) = coleman_tilde_certified(&g)?;
            let mut v = measure_json(&nu);
            v["unit_support_certified"] = json!(fixed);
            v["norm_coherent"] = json!(is_norm_coherent(&g)?);
            v
        }
        Command::Lp { measure, chi, s } => {
            let nu = GaloisFile::parse(&read(measure)?)?.pseudo_measure(&ov)?;
            let chi = CharacterOfH::new(&nu.numerator.group, &parse_exponents(chi)?)?;
            let ctx = nu.numerator.context().clone();
            let kappa0 = cli.kappa0(&ctx);
            let s_p = ctx.from_i64(*s);
            let a = lp_value(&nu, &chi, &s_p, &kappa0)?;
            let b = lp_value_by_series(&nu, &chi, &s_p, &kappa0)?;
            json!({
                "chi": chi.to_string(),
                "s": s,
                "value": a.to_string(),
                "by_series": b.to_string(),
                "agree": a.agrees_with(&b),
            })
        }
        Command::Iwfun { measure, chi } => {
            let nu = GaloisFile::parse(&read(measure)?)?.pseudo_measure(&ov)?;
            let chi = CharacterOfH::new(&nu.numerator.group, &parse_exponents(chi)?)?;
            let f = iwasawa_function(&nu, &chi)?;
            json!({ "chi": chi.to_string(), "M": f.len(), "coeffs": coeff_strings(&f) })
        }
        Command::Charideal { matrix } => {
            let m = MatrixFile::parse(&read(matrix)?)?.module(&ov)?;
            let c = m.char_ideal()?;
            let p: Vec<String> = c.poly.iter().map(|x| x.to_string()).collect();
            json!({ "mu": c.mu, "lambda": c.lambda(), "P": p })
        }
        Command::Euler { scenario, check, r } => {
            let mut sc = parse_scenario(&read(scenario)?)?;
            if let Some(seed) = cli.seed {
                sc.seed = seed;
            }
            let sys = sc.build()?;
            let g = sys.group();
            let r_text = r.clone().unwrap_or_else(|| "1".into());
            let ideal = g.parse_ideal(&r_text)?;
            match check {
                Check::Telescope => {
                    let primes: Vec<usize> = if r.is_some() { ideal.clone() } else { (0..g.s()).collect() };
                    for i in primes {
                        if !g.telescope_check(&g.primes()[i])? {
                            return Err(Error::DomainError(format!("telescope identity fails at {}", g.primes()[i])));
                        }
                    }
                    json!("ok")
                }
                Check::Invariance => json!({ "r": r_text, "invariant": sys.invariance_check(&ideal)? }),
                Check::Kappa => {
                    let k = sys.kolyvagin_derivative(&ideal)?;
                    json!({ "r": r_text, "modulus": k.modulus, "is_zero": k.is_zero(), "representative": k.representative })
                }
            }
        }
        Command::Invariants { series, levels, table } => {
            let (f, _) = cli.series(series)?;
            let rows = parse_levels(levels)?
                .into_iter()
                .map(|n| invariant_identity_check(&f, n))
                .collect::<Result<Vec<_>>>()?;
            if *table {
                let mut s = String::from("n\tlhs\trhs\tmatch\n");
                for r in &rows {
                    s.push_str(&format!("{}\t{}\t{}\t{}\n", r.n, r.lhs, r.rhs, r.matches));
                }
                return Ok(Report::Text(s));
            }
            serde_json::to_value(rows).expect("serializable")
        }
    };
    Ok(Report::Json(out))
}

fn exit_code(err: &Error) -> i32 {
    if err.is_input_error() {
        2
    } else {
        1
    }
}

fn emit(text: &str, path: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(|e| Error::Io(e.to_string())),
    }
}

/// Runs the command line `args` (program name first), writing the report
/// to `stdout` unless `--out` is given. Returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let err = Error::Parse(e.to_string().trim().to_string());
            let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&error_json(&err)).expect("serializable"));
            return 2;
        }
    };
    let result = dispatch(&cli).and_then(|report| {
        let text = match report {
            Report::Json(v) => format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable")),
            Report::Text(s) => s,
        };
        emit(&text, cli.out.as_deref(), stdout)
    });
    match result {
        Ok(()) => 0,
        Err(err) => {
            let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&error_json(&err)).expect("serializable"));
            exit_code(&err)
        }
    }
}
