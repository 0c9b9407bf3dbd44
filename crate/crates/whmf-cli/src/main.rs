//! `mfzl` — exact q-expansions, j-polynomial reduction, zero location and
//! CM classification for weakly holomorphic modular forms.
//!
//! Subcommands:
//!
//! * `expand` — exact rational q-expansion of a form expression;
//! * `jpoly` — reduction of a form to its polynomial in the j-function,
//!   with an integrality report;
//! * `zeros` — high-precision zero location on a boundary locus (unit-circle
//!   arcs, Fricke arcs, or the vertical lines), each zero classified as CM
//!   or transcendental candidate;
//! * `cm` — enumeration of the CM points on a locus in exact surd notation;
//! * `classify` — classification of a single point of the upper half plane;
//! * `transport` — the determinant-2 and determinant-3 maps between the
//!   unit circle and the vertical lines;
//! * `verify` — regenerate every built-in reference list and compare it
//!   byte-for-byte against the checked-in goldens.
//!
//! Exit codes: 0 success, 1 reference-list mismatch, 2 pipeline or usage
//! error.  Output is byte-deterministic for a fixed configuration.

mod parser;
mod render;
mod targets;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_rational::BigRational;
use rug::{Complex, Float};
use whmf::classify::{Classifier, Verdict};
use whmf::cm;
use whmf::forms::expand;
use whmf::locator::{
    find_zeros_on_arc, find_zeros_on_line, line_profile_direct, line_profile_pullback,
    restricted_real_profile, suggested_truncation, transport, EvalContext, LineId, TransportMap,
    ZeroRecord,
};
use whmf::qseries::Expo;

use render::{dec, evidence_label, point_rows, zero_rows, Format, Record, Rows};

type CliError = Box<dyn std::error::Error>;

#[derive(Parser)]
#[command(name = "mfzl", version, about = "modular form zero location and CM classification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact q-expansion of a form expression.
    Expand {
        /// Form expression, e.g. "mul(Delta, sub(J, const(1728)))".
        #[arg(long)]
        form: String,
        /// Print terms with exponent below this bound (series are computed
        /// to at least 8).
        #[arg(long, default_value = "16", value_parser = parse_expo_arg)]
        truncation: Expo,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Polynomial in the j-function attached to a form, with integrality.
    Jpoly {
        #[arg(long)]
        form: String,
        /// Weight override; inferred from the expression when omitted.
        #[arg(long)]
        weight: Option<i64>,
        /// Series truncation used for the extraction (minimum 8).
        #[arg(long, default_value = "48", value_parser = parse_expo_arg)]
        truncation: Expo,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Locate and classify the zeros of a form on a boundary locus.
    Zeros {
        #[arg(long)]
        form: String,
        /// Locus: A, A2, A3, Ap (with --p), L or R.
        #[arg(long)]
        locus: String,
        /// Prime level for the Ap locus.
        #[arg(long)]
        p: Option<u32>,
        /// Weight override; inferred from the expression when omitted.
        #[arg(long)]
        weight: Option<i64>,
        /// Working precision in bits.
        #[arg(long, env = "MFZL_PRECISION", default_value_t = 256,
              value_parser = clap::value_parser!(u32).range(64..))]
        precision: u32,
        /// Series truncation; chosen from the precision when omitted.
        #[arg(long, value_parser = parse_expo_arg)]
        truncation: Option<Expo>,
        /// Sample points for the sign scan.
        #[arg(long, default_value_t = 192)]
        samples: usize,
        /// Upper end of the scanned segment on L or R.
        #[arg(long, default_value_t = 2.0)]
        height: f64,
        /// On L or R, scan the level-1 form transported from the arc
        /// instead of evaluating it on the line directly.
        #[arg(long)]
        via_arc: bool,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Enumerate the CM points on a locus in exact surd notation.
    Cm {
        /// Locus: A, A2, A3, Ap (with --p), L, R, or C (corner images,
        /// with --p).
        #[arg(long)]
        locus: String,
        /// Prime level for the Ap and C loci.
        #[arg(long)]
        p: Option<u32>,
        /// Height bound (exclusive) for the line loci, as a rational.
        #[arg(long, default_value = "2")]
        height: String,
        /// Label discriminant bound for the line loci.
        #[arg(long, default_value_t = 1000)]
        dbound: i64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Classify one point as CM or transcendental candidate.
    Classify {
        /// Real part, decimal.
        #[arg(long, allow_hyphen_values = true)]
        re: String,
        /// Imaginary part, decimal.
        #[arg(long)]
        im: String,
        #[arg(long, env = "MFZL_PRECISION", default_value_t = 256,
              value_parser = clap::value_parser!(u32).range(64..))]
        precision: u32,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Apply a circle↔line transport map to a point.
    Transport {
        /// Which map: L (determinant 3, fixes ρ) or R (determinant 2).
        #[arg(long)]
        map: String,
        /// Apply the inverse (line → circle) direction.
        #[arg(long)]
        inverse: bool,
        #[arg(long, allow_hyphen_values = true)]
        re: String,
        #[arg(long)]
        im: String,
        #[arg(long, env = "MFZL_PRECISION", default_value_t = 256,
              value_parser = clap::value_parser!(u32).range(64..))]
        precision: u32,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Regenerate the reference lists and compare against the goldens.
    Verify {
        /// Run a single named target.
        #[arg(long)]
        only: Option<String>,
        /// Read golden files from this directory instead of the built-ins.
        #[arg(long)]
        golden_dir: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Expand { form, truncation, format } => {
            print!("{}", run_expand(&form, truncation, format)?);
        }
        Command::Jpoly { form, weight, truncation, format } => {
            print!("{}", run_jpoly(&form, weight, truncation, format)?);
        }
        Command::Zeros {
            form,
            locus,
            p,
            weight,
            precision,
            truncation,
            samples,
            height,
            via_arc,
            format,
        } => {
            let out = run_zeros(ZerosConfig {
                form,
                locus,
                p,
                weight,
                precision,
                truncation,
                samples,
                height,
                via_arc,
                format,
            })?;
            print!("{out}");
        }
        Command::Cm { locus, p, height, dbound, format } => {
            print!("{}", run_cm(&locus, p, &height, dbound, format)?);
        }
        Command::Classify { re, im, precision, format } => {
            print!("{}", run_classify(&re, &im, precision, format)?);
        }
        Command::Transport { map, inverse, re, im, precision, format } => {
            print!("{}", run_transport(&map, inverse, &re, &im, precision, format)?);
        }
        Command::Verify { only, golden_dir } => {
            return run_verify(only.as_deref(), golden_dir.as_deref());
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Parses a truncation exponent `n` or `n/d` and enforces the minimum of 8.
fn parse_expo_arg(s: &str) -> Result<Expo, String> {
    let e = parse_expo(s)?;
    if e < Expo::from_integer(8) {
        return Err(format!("truncation {e} is below the minimum of 8"));
    }
    Ok(e)
}

fn parse_expo(s: &str) -> Result<Expo, String> {
    match s.split_once('/') {
        None => s.trim().parse::<i64>().map(Expo::from_integer).map_err(|e| e.to_string()),
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|e: std::num::ParseIntError| e.to_string())?;
            let d: i64 = d.trim().parse().map_err(|e: std::num::ParseIntError| e.to_string())?;
            if d == 0 {
                return Err("zero denominator".to_string());
            }
            Ok(Expo::new(n, d))
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational, CliError> {
    Ok(s.trim().parse::<BigRational>()?)
}

fn parse_float(s: &str, prec: u32) -> Result<Float, CliError> {
    Ok(Float::with_val(prec, Float::parse(s.trim())?))
}

fn run_expand(form: &str, truncation: Expo, format: Format) -> Result<String, CliError> {
    let expr = parser::parse_form(form)?;
    let work = truncation.max(Expo::from_integer(8));
    let series = expand(&expr, work)?;
    let rows = Rows {
        header: vec!["n", "coefficient"],
        rows: series
            .iter()
            .filter(|(e, _)| **e < truncation)
            .map(|(e, c)| vec![e.to_string(), c.to_string()])
            .collect(),
    };
    Ok(rows.render(format))
}

fn run_jpoly(
    form: &str,
    weight: Option<i64>,
    truncation: Expo,
    format: Format,
) -> Result<String, CliError> {
    let expr = parser::parse_form(form)?;
    let weight = match weight {
        Some(k) => k,
        None => expr.weight()?,
    };
    let series = expand(&expr, truncation)?;
    let poly = whmf::jpoly::extract_pf(&series, weight)?;
    let report = whmf::jpoly::integrality_report(&poly);
    let mut record = Record { fields: Vec::new() };
    record.push("weight", poly.weight.to_string());
    record.push("degree", poly.degree().to_string());
    record.push("n0", poly.n0.to_string());
    record.push("leading_is_integer", report.leading_is_integer.to_string());
    record.push("all_integral", report.all_integral.to_string());
    record.push(
        "non_integral_indices",
        report
            .offending_indices
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    for (m, c) in poly.coeffs.iter().enumerate() {
        record.push(format!("j^{m}"), c.to_string());
    }
    Ok(record.render(format))
}

/// The locus of a `zeros` or `cm` request.
enum LocusSpec {
    Arc(u32),
    Line(LineId),
    Corners(u32),
}

fn parse_locus(s: &str, p: Option<u32>, corners_allowed: bool) -> Result<LocusSpec, CliError> {
    let need_p = || p.ok_or_else(|| format!("locus {s} requires --p"));
    match s.to_ascii_uppercase().as_str() {
        "A" => Ok(LocusSpec::Arc(1)),
        "A2" => Ok(LocusSpec::Arc(2)),
        "A3" => Ok(LocusSpec::Arc(3)),
        "AP" => Ok(LocusSpec::Arc(need_p()?)),
        "L" => Ok(LocusSpec::Line(LineId::L)),
        "R" => Ok(LocusSpec::Line(LineId::R)),
        "C" if corners_allowed => Ok(LocusSpec::Corners(need_p()?)),
        other => Err(format!("unknown locus '{other}'").into()),
    }
}

struct ZerosConfig {
    form: String,
    locus: String,
    p: Option<u32>,
    weight: Option<i64>,
    precision: u32,
    truncation: Option<Expo>,
    samples: usize,
    height: f64,
    via_arc: bool,
    format: Format,
}

fn run_zeros(cfg: ZerosConfig) -> Result<String, CliError> {
    let expr = parser::parse_form(&cfg.form)?;
    expr.validate()?;
    let weight = match cfg.weight {
        Some(k) => k,
        None => expr.weight()?,
    };
    let locus = parse_locus(&cfg.locus, cfg.p, false)?;
    let ctx = EvalContext::new(cfg.precision);

    // Deepest point of the locus controls the truncation demand.
    let y_min = match &locus {
        LocusSpec::Arc(p) if *p > 1 => (1.0 / f64::from(*p) - 0.25).sqrt(),
        LocusSpec::Arc(_) => 0.866,
        LocusSpec::Line(_) if cfg.via_arc => 0.866,
        LocusSpec::Line(LineId::L) => 0.866,
        LocusSpec::Line(LineId::R) => 1.0,
        LocusSpec::Corners(_) => unreachable!("corners are not a zeros locus"),
    };
    let poly_exponent = u32::try_from(weight.unsigned_abs().max(12)).unwrap_or(u32::MAX);
    let trunc = cfg
        .truncation
        .unwrap_or_else(|| suggested_truncation(cfg.precision, y_min, poly_exponent));
    let series = expand(&expr, trunc)?;

    let records: Vec<ZeroRecord> = match locus {
        LocusSpec::Arc(p) => {
            let profile = restricted_real_profile(&series, weight, p, &ctx)?;
            find_zeros_on_arc(&profile, cfg.samples, weight, &cfg.form)?
        }
        LocusSpec::Line(line) => {
            let profile = if cfg.via_arc {
                line_profile_pullback(&series, weight, line, &ctx)?
            } else {
                line_profile_direct(&series, weight, line, &ctx)?
            };
            if cfg.height <= profile.base().to_f64() {
                return Err(format!(
                    "--height {} does not reach above the base of the segment",
                    cfg.height
                )
                .into());
            }
            find_zeros_on_line(&profile, cfg.height, cfg.samples, weight, &cfg.form)?
        }
        LocusSpec::Corners(_) => unreachable!("rejected by parse_locus"),
    };

    let classifier = Classifier::new(cfg.precision);
    let verdicts: Vec<Verdict> = records.iter().map(|r| classifier.classify_zero(&r.z)).collect();
    Ok(zero_rows(&records, &verdicts).render(cfg.format))
}

fn run_cm(
    locus: &str,
    p: Option<u32>,
    height: &str,
    dbound: i64,
    format: Format,
) -> Result<String, CliError> {
    let spec = parse_locus(locus, p, true)?;
    let points = match spec {
        LocusSpec::Arc(1) => cm::enumerate_arc_a(),
        LocusSpec::Arc(p) => cm::enumerate_fricke_arc(p)?,
        LocusSpec::Line(line) => {
            let h = parse_rational(height)?;
            match line {
                LineId::L => cm::enumerate_line_l(dbound, &h),
                LineId::R => cm::enumerate_line_r(dbound, &h),
            }
        }
        LocusSpec::Corners(p) => cm::coset_corner_images(p)?,
    };
    Ok(point_rows(&points).render(format))
}

fn classification_record(z: &Complex, prec: u32, verdict: &Verdict) -> Record {
    let mut record = Record { fields: Vec::new() };
    record.push("re", dec(&Float::with_val(prec, z.real())));
    record.push("im", dec(&Float::with_val(prec, z.imag())));
    match verdict {
        Verdict::Cm { disc, form, evidence } => {
            record.push("verdict", "CM");
            record.push("disc", disc.to_string());
            record.push("form", format!("({},{},{})", form.a, form.b, form.c));
            record.push("evidence", evidence_label(evidence));
        }
        Verdict::TranscendentalCandidate { quad_height, prec } => {
            record.push("verdict", "transcendental-candidate");
            record.push("quad_height", quad_height.to_string());
            record.push("precision", prec.to_string());
        }
        Verdict::Unresolved { reason } => {
            record.push("verdict", "unresolved");
            record.push("reason", reason.clone());
        }
    }
    record
}

fn run_classify(re: &str, im: &str, precision: u32, format: Format) -> Result<String, CliError> {
    let z = Complex::with_val(
        precision,
        (parse_float(re, precision)?, parse_float(im, precision)?),
    );
    let classifier = Classifier::new(precision);
    let verdict = classifier.classify_zero(&z);
    Ok(classification_record(&z, precision, &verdict).render(format))
}

fn run_transport(
    map: &str,
    inverse: bool,
    re: &str,
    im: &str,
    precision: u32,
    format: Format,
) -> Result<String, CliError> {
    let which = match map.to_ascii_uppercase().as_str() {
        "L" => TransportMap::GammaL,
        "R" => TransportMap::GammaR,
        other => return Err(format!("unknown map '{other}'; expected L or R").into()),
    };
    let z = Complex::with_val(
        precision,
        (parse_float(re, precision)?, parse_float(im, precision)?),
    );
    let image = transport(&z, which, inverse, precision);
    let m = which.matrix(inverse);
    let mut record = Record { fields: Vec::new() };
    record.push("matrix", format!("[[{},{}],[{},{}]]", m[0][0], m[0][1], m[1][0], m[1][1]));
    record.push("re", dec(&Float::with_val(precision, image.real())));
    record.push("im", dec(&Float::with_val(precision, image.imag())));
    Ok(record.render(format))
}

/// First line where the two texts disagree, for mismatch reports.
fn first_difference(expected: &str, actual: &str) -> String {
    for (idx, (e, a)) in expected.lines().zip(actual.lines()).enumerate() {
        if e != a {
            return format!("line {}: expected {e:?}, got {a:?}", idx + 1);
        }
    }
    let (el, al) = (expected.lines().count(), actual.lines().count());
    format!("expected {el} line(s), got {al}")
}

fn run_verify(only: Option<&str>, golden_dir: Option<&std::path::Path>) -> Result<ExitCode, CliError> {
    let targets = targets::all_targets();
    let selected: Vec<_> = match only {
        None => targets.iter().collect(),
        Some(name) => {
            let hit: Vec<_> = targets.iter().filter(|t| t.name == name).collect();
            if hit.is_empty() {
                let names: Vec<_> = targets.iter().map(|t| t.name).collect();
                return Err(format!(
                    "unknown target '{name}'; available: {}",
                    names.join(", ")
                )
                .into());
            }
            hit
        }
    };

    let mut failed = 0usize;
    for target in &selected {
        let expected = match golden_dir {
            None => target.golden.to_string(),
            Some(dir) => {
                let path = dir.join(format!("{}.txt", target.name));
                match std::fs::read_to_string(&path) {
                    Ok(text) => text,
                    Err(e) => {
                        println!("FAIL {} (golden unreadable: {e})", target.name);
                        failed += 1;
                        continue;
                    }
                }
            }
        };
        let actual = (target.generate)().map_err(|e| format!("{}: {e}", target.name))?;
        if actual == expected {
            println!("ok {}", target.name);
        } else {
            println!("FAIL {} ({})", target.name, first_difference(&expected, &actual));
            failed += 1;
        }
    }
    println!("{} passed, {} failed", selected.len() - failed, failed);
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
