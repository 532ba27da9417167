//! Command-line front end. [`run`] parses arguments, dispatches, and returns
//! the exit status with the emitted text, so the binary is a thin wrapper.
//!
//! Exit status: 0 on success, 1 when a check fails, 2 on usage or input
//! errors.

pub mod ap;
pub mod checks;
pub mod config;
pub mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::engine::predict;
use crate::error::{Error, Result};
use crate::field::ResidueField;
use crate::galois::{GaloisRep, Lambda, Summand};
use crate::gamma::{
    dim_theta_filtration, dim_theta_filtration_formula, jh_factor_labels, jh_max_index,
    verify_subquotient_iso,
};
use crate::hecke::{CoeffRing, QMat, TreeFunction};
use crate::llc::{ll_inverse, ll_map, parse_labels};
use crate::padic::PadicContext;

pub use ap::{ap_value, parse_ap, ApExpression};
pub use config::Config;

#[derive(Debug, Parser)]
#[command(name = "zigzag", version, about = "Predicted mod p reductions of crystalline representations")]
pub struct Cli {
    /// Configuration file (key = value lines).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Working precision M in p-adic digits.
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    /// Degree f of the residue field.
    #[arg(long = "residue-degree", global = true)]
    pub residue_degree: Option<usize>,
    /// Exponent s0 of the p-adic disks around small weights.
    #[arg(long = "caveat-disk-exponent", global = true)]
    pub caveat_disk_exponent: Option<u32>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    LocalConstancy,
    Blz,
    Breuil,
    Theta,
    Irreducibility,
    Determinant,
    Gr19,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Predict the reduction for one weight and one a_p.
    Predict {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: i64,
        #[arg(long, allow_hyphen_values = true)]
        ap: String,
        #[arg(long, conflicts_with = "md")]
        json: bool,
        #[arg(long)]
        md: bool,
    },
    /// Predict over a range of weights.
    Sweep {
        #[arg(long)]
        p: u64,
        /// Inclusive range `A..B`.
        #[arg(long = "k-range")]
        k_range: String,
        #[arg(long, allow_hyphen_values = true)]
        ap: String,
        #[arg(long, value_enum, default_value = "csv")]
        emit: Emit,
        /// Keep only weights in the exceptional class of the slope.
        #[arg(long)]
        exceptional_only: bool,
    },
    /// Dimensions and Jordan-Hölder factors of the theta filtration of Sym^r.
    Filtration {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        imax: u64,
    },
    /// Translate between Galois labels and smooth labels.
    Llc {
        #[arg(long)]
        p: u64,
        /// Galois label: JSON, `ind(C)`, `ind(C,Z)` or `red(A,L;A2,L2)`.
        #[arg(long, conflicts_with = "unmap", required_unless_present = "unmap")]
        map: Option<String>,
        /// Smooth labels `pi(r,l,s[,z])`, joined by `+`.
        #[arg(long)]
        unmap: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Apply T^N to an elementary function [1, v].
    Hecke {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        r: usize,
        /// Coefficients of v by increasing power of Y, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        #[arg(long = "apply-t", default_value_t = 1)]
        apply_t: u32,
        /// Coefficients are taken modulo p^exponent.
        #[arg(long, default_value_t = 1)]
        exponent: u32,
        #[arg(long)]
        json: bool,
    },
    /// Run a consistency suite.
    Check {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Restrict to one prime (default: the suite's own list).
        #[arg(long)]
        p: Option<u64>,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: 0, stdout, stderr: String::new() }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome::ok(text)
            };
        }
    };
    match dispatch(&cli) {
        Ok(out) => out,
        Err(e) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn load_config(cli: &Cli) -> Result<Config> {
    let mut cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    if let Some(m) = cli.precision {
        cfg.precision = m;
    }
    if let Some(f) = cli.residue_degree {
        cfg.residue_degree = f;
    }
    if let Some(s) = cli.caveat_disk_exponent {
        cfg.engine.caveat_disk_exponent = s;
    }
    Ok(cfg)
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let cfg = load_config(cli)?;
    match &cli.command {
        Command::Predict { p, k, ap, json, md } => {
            let ctx = PadicContext::new(*p, cfg.residue_degree, cfg.precision)?;
            let a_p = ap_value(ap, &ctx)?;
            let pred = predict(*k, &a_p, &cfg.engine)?;
            let text = if *json {
                format!("{}\n", pred.to_json())
            } else if *md {
                output::prediction_markdown(&pred, ap)
            } else {
                output::prediction_text(&pred, ap)
            };
            Ok(Outcome::ok(text))
        }
        Command::Sweep { p, k_range, ap, emit, exceptional_only } => {
            let (lo, hi) = parse_range(k_range)?;
            let ctx = PadicContext::new(*p, cfg.residue_degree, cfg.precision)?;
            let a_p = ap_value(ap, &ctx)?;
            let rows = output::sweep_rows(lo..=hi, &a_p, ap, &cfg.engine, *exceptional_only);
            let text = match emit {
                Emit::Csv => output::rows_csv(&rows)?,
                Emit::Json => format!("{}\n", serde_json::to_string(&rows).expect("plain data")),
            };
            Ok(Outcome::ok(text))
        }
        Command::Filtration { p, r, imax } => Ok(Outcome::ok(filtration_table(*p, *r, *imax)?)),
        Command::Llc { p, map, unmap, json } => {
            let field = ResidueField::new(*p, cfg.residue_degree)?;
            let text = match (map, unmap) {
                (Some(text), _) => {
                    let rep = parse_galois(text, &field)?;
                    let labels = ll_map(&rep)?;
                    if *json {
                        let v: Vec<String> = labels.iter().map(|l| l.to_text(&field)).collect();
                        format!("{}\n", serde_json::json!({"rep": rep.to_json(), "labels": v}))
                    } else {
                        let v: Vec<String> = labels.iter().map(|l| l.format(&field)).collect();
                        let mut out = format!("{rep} ↦ {}\n", v.join(" ⊕ "));
                        for l in labels.iter().filter(|l| !l.is_irreducible(&field)) {
                            out.push_str(&format!(
                                "note: {} is reducible with constituents {}\n",
                                l.format(&field),
                                l.constituents(&field).join(", ")
                            ));
                        }
                        out
                    }
                }
                (None, Some(text)) => {
                    let labels = parse_labels(text, &field)?;
                    let rep = ll_inverse(&field, &labels)?;
                    if *json {
                        format!("{}\n", rep.to_json())
                    } else {
                        format!("{rep}\n")
                    }
                }
                (None, None) => unreachable!("clap requires one of --map, --unmap"),
            };
            Ok(Outcome::ok(text))
        }
        Command::Hecke { p, r, coeffs, apply_t, exponent, json } => {
            let ring = CoeffRing::mod_prime_power(*p, *exponent)?;
            let v = coeffs
                .split(',')
                .map(|s| s.trim().parse::<i64>().map(|n| ring.from_int(n)))
                .collect::<std::result::Result<Vec<u64>, _>>()
                .map_err(|_| Error::InvalidInput(format!("bad coefficient list `{coeffs}`")))?;
            if v.len() != r + 1 {
                return Err(Error::WrongDegree(v.len().saturating_sub(1)));
            }
            let f = TreeFunction::elementary(ring, &QMat::identity(), &v)?.apply_t_power(*apply_t)?;
            let text = if *json {
                format!("{}\n", f.to_json())
            } else {
                output::hecke_text(&f, *apply_t)
            };
            Ok(Outcome::ok(text))
        }
        Command::Check { suite, p } => {
            let report = checks::run_suite(*suite, *p, &cfg)?;
            let code = if report.passed { 0 } else { 1 };
            Ok(Outcome { code, stdout: report.text, stderr: String::new() })
        }
    }
}

/// `A..B` or `A:B`, inclusive.
pub fn parse_range(text: &str) -> Result<(i64, i64)> {
    let (a, b) = text
        .split_once("..")
        .or_else(|| text.split_once(':'))
        .ok_or_else(|| Error::InvalidInput(format!("expected A..B, got `{text}`")))?;
    let num = |s: &str| {
        s.trim().parse::<i64>().map_err(|_| Error::InvalidInput(format!("bad bound `{s}`")))
    };
    let (a, b) = (num(a)?, num(b)?);
    if a > b {
        return Err(Error::InvalidInput(format!("empty range {a}..{b}")));
    }
    Ok((a, b))
}

/// Galois labels as JSON or in the short forms `ind(C)`, `ind(C,Z)`,
/// `red(A,L;A2,L2)`.
pub fn parse_galois(text: &str, field: &ResidueField) -> Result<GaloisRep> {
    let t = text.trim();
    if t.starts_with('{') {
        let v: serde_json::Value = serde_json::from_str(t)
            .map_err(|e| Error::MalformedLabel(format!("bad JSON: {e}")))?;
        return GaloisRep::from_json(&v, field);
    }
    let int = |s: &str| {
        s.trim().parse::<i64>().map_err(|_| Error::MalformedLabel(format!("bad integer `{s}`")))
    };
    if let Some(body) = t.strip_prefix("ind(").and_then(|b| b.strip_suffix(')')) {
        return match body.split_once(',') {
            None => Ok(GaloisRep::induced(field, int(body)?)),
            Some((c, z)) => GaloisRep::irreducible(field, int(c)?, Lambda::parse(z, field)?),
        };
    }
    if let Some(body) = t.strip_prefix("red(").and_then(|b| b.strip_suffix(')')) {
        let parts: Vec<&str> = body.split(';').collect();
        if parts.len() != 2 {
            return Err(Error::MalformedLabel(format!("`{t}` needs two summands")));
        }
        let mut s = Vec::with_capacity(2);
        for part in parts {
            let (a, l) = part
                .split_once(',')
                .ok_or_else(|| Error::MalformedLabel(format!("summand `{part}` needs A,L")))?;
            s.push(Summand { a: int(a)?, lambda: Lambda::parse(l, field)? });
        }
        return Ok(GaloisRep::reducible(field, s[0], s[1]));
    }
    Err(Error::MalformedLabel(format!("unrecognized Galois label `{t}`")))
}

fn filtration_table(p: u64, r: u64, imax: u64) -> Result<String> {
    if !crate::arith::is_prime(p) || p < 3 {
        return Err(Error::InvalidInput(format!("p = {p} must be an odd prime")));
    }
    let b = match r % (p - 1) {
        0 => p - 1,
        x => x,
    };
    let mut out = format!("# p = {p}, r = {r}, b = {b}\n");
    out.push_str("i\tdim\tformula\tiso\tJ_2i\tJ_2i+1\tsum\n");
    for i in 0..=imax {
        let dim = dim_theta_filtration(p, r, i);
        let formula = dim_theta_filtration_formula(p, r, i);
        let iso = if r >= i * (p + 1) {
            verify_subquotient_iso(p, r, i)?.to_string()
        } else {
            "-".to_string()
        };
        let (j0, j1, sum) = if i <= jh_max_index(b) {
            let pair = jh_factor_labels(p, b, i)?;
            let sum = pair.sub.dim() + pair.quotient.dim();
            (pair.sub.to_string(), pair.quotient.to_string(), sum.to_string())
        } else {
            ("-".into(), "-".into(), "-".into())
        };
        out.push_str(&format!("{i}\t{dim}\t{formula}\t{iso}\t{j0}\t{j1}\t{sum}\n"));
    }
    Ok(out)
}
