//! Command-line front end. The binary only parses the environment and
//! forwards here, so every command is testable in-process.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource
//! limit.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bench::bench;
use crate::config::{Config, OutputMode};
use crate::error::{Error, Result};
use crate::generator::GeneratorRule;
use crate::numeric::fractal_p_capped;
use crate::oracle::{build_table_capped, build_table_pentagonal_capped};
use crate::quasi::QuasiPoly2;
use crate::recurrence::{
    classify_pentagonal, derive_recurrence, mine, parse_inline_terms, verify, CatalogRecord,
    Recurrence,
};
use crate::selftest::run_selftest;
use crate::symbolic::{empirical_lower_bound, expand_symbolic, render_expansion, ValidRange};
use crate::trace::{build_trace_with, render_trace};
use crate::variant::TailVariant;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Tail {
    None,
    One,
    Two,
}

impl From<Tail> for TailVariant {
    fn from(t: Tail) -> Self {
        match t {
            Tail::None => TailVariant::Full,
            Tail::One => TailVariant::OneSub,
            Tail::Two => TailVariant::TwoSub,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "partfrac",
    about = "Fractal expansion of the partition function and its recurrences"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// p(n) by the generator, the parts DP and the pentagonal recurrence.
    Eval { n: usize },
    /// Step-by-step bracket expansion of p(n).
    Trace {
        n: usize,
        #[arg(long, value_enum, default_value = "none")]
        tail: Tail,
    },
    /// Symbolic expansion of p(n) valid for n up to the cap.
    Expand {
        #[arg(long)]
        cap: usize,
        #[arg(long, value_enum, default_value = "one")]
        tail: Tail,
    },
    /// Recurrence from the expansions of p(n) and p(n-1).
    Derive {
        #[arg(long)]
        cap: usize,
        #[arg(long, value_enum)]
        pn: Tail,
        #[arg(long, value_enum)]
        pn1: Tail,
    },
    /// Check a recurrence against exact p(n) values.
    Verify {
        /// Catalog-format record (first non-empty line is used).
        #[arg(long, conflicts_with = "coeffs", required_unless_present = "coeffs")]
        file: Option<PathBuf>,
        /// Inline `offset:coef` list, e.g. `1:1,2:1,5:-1,7:-1`.
        #[arg(long, allow_hyphen_values = true)]
        coeffs: Option<String>,
        /// Claimed range for inline recurrences, `lo..hi`.
        #[arg(long)]
        claimed: Option<String>,
        /// Start of the scan window (defaults to the claimed lower bound).
        #[arg(long)]
        from: Option<usize>,
        /// End of the scan window.
        #[arg(long)]
        to: usize,
    },
    /// Derive, verify and deduplicate recurrences over many caps.
    Mine {
        /// Caps as `lo..hi` or a comma list.
        #[arg(long, default_value = "12..24")]
        caps: String,
        /// Highest n checked for empirical validity.
        #[arg(long, default_value_t = 60)]
        scan: usize,
        /// Write the catalog (one JSON record per line) here.
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// Time the three evaluation methods.
    Bench {
        ns: Vec<usize>,
        /// Leave the generator out.
        #[arg(long)]
        no_fractal: bool,
    },
    /// Run the built-in acceptance checks.
    Selftest,
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::ResourceLimit { .. } | Error::TableTooSmall { .. } => EXIT_LIMIT,
        _ => EXIT_USAGE,
    }
}

fn parse_range(text: &str) -> Result<ValidRange> {
    let (a, b) = text
        .split_once("..")
        .ok_or_else(|| Error::Parse(format!("expected lo..hi, got {text:?}")))?;
    let lo = a
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad bound {a:?}")))?;
    let hi = b
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad bound {b:?}")))?;
    if lo > hi {
        return Err(Error::Parse(format!("empty range {text:?}")));
    }
    Ok(ValidRange::new(lo, hi))
}

fn parse_caps(text: &str) -> Result<Vec<usize>> {
    if text.contains("..") {
        let r = parse_range(text)?;
        return Ok(r.iter().collect());
    }
    text.split(',')
        .map(|c| {
            c.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad cap {c:?}")))
        })
        .collect()
}

struct Ctx<'a> {
    config: &'a Config,
    machine: bool,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn emit(&mut self, text: &str, machine: serde_json::Value) -> Result<()> {
        if self.machine {
            writeln!(self.out, "{machine}")?;
        } else {
            write!(self.out, "{text}")?;
        }
        Ok(())
    }
}

fn cmd_eval(ctx: &mut Ctx, n: usize) -> Result<i32> {
    let limits = &ctx.config.limits;
    let fractal = fractal_p_capped(n, limits.max_fractal)?;
    let dp = build_table_capped(n, limits.max_table)?[n].clone();
    let pent = build_table_pentagonal_capped(n, limits.max_table)?[n].clone();
    let agree = fractal == dp && dp == pent;
    let text = format!(
        "n = {n}\nfractal    = {fractal}\nparts-dp   = {dp}\npentagonal = {pent}\nagree      = {agree}\n"
    );
    ctx.emit(
        &text,
        json!({
            "command": "eval",
            "n": n,
            "fractal": fractal.to_string(),
            "parts_dp": dp.to_string(),
            "pentagonal": pent.to_string(),
            "agree": agree,
        }),
    )?;
    Ok(if agree { EXIT_OK } else { EXIT_VERIFY })
}

fn cmd_trace(ctx: &mut Ctx, n: usize, tail: Tail) -> Result<i32> {
    let doc = build_trace_with(
        n,
        tail.into(),
        ctx.config.limits.max_trace_nodes,
        GeneratorRule::STANDARD,
    )?;
    let text = render_trace(&doc);
    let mut machine = doc.to_json();
    machine["command"] = json!("trace");
    ctx.emit(&text, machine)?;
    Ok(EXIT_OK)
}

fn cmd_expand(ctx: &mut Ctx, cap: usize, tail: Tail) -> Result<i32> {
    let variant: TailVariant = tail.into();
    let form = expand_symbolic(cap, variant)?;
    let table = build_table_capped(cap, ctx.config.limits.max_table)?;
    let lower = empirical_lower_bound(&form, &table)?;
    let display = render_expansion(cap, variant)?;
    let text = format!(
        "{display}\n{form}\nempirical lower bound: {}\n",
        lower.map_or("none".to_string(), |l| l.to_string())
    );
    ctx.emit(
        &text,
        json!({
            "command": "expand",
            "form": form,
            "empirical_lower_bound": lower,
        }),
    )?;
    Ok(EXIT_OK)
}

fn recurrence_json(rec: &Recurrence) -> serde_json::Value {
    json!({
        "terms": rec.rhs().coeffs().iter().map(|(k, c)| [*k as i64, *c]).collect::<Vec<_>>(),
        "tail": rec.tail(),
        "claimed": rec.claimed(),
        "provenance": rec.provenance(),
        "classification": classify_pentagonal(rec),
        "key": rec.canonical_key(),
    })
}

fn cmd_derive(ctx: &mut Ctx, cap: usize, pn: Tail, pn1: Tail) -> Result<i32> {
    let rec = derive_recurrence(cap, pn.into(), pn1.into())?;
    let text = format!("{rec}\nclassification: {}\n", classify_pentagonal(&rec));
    let mut machine = recurrence_json(&rec);
    machine["command"] = json!("derive");
    ctx.emit(&text, machine)?;
    Ok(EXIT_OK)
}

fn load_recurrence(
    file: Option<PathBuf>,
    coeffs: Option<String>,
    claimed: Option<String>,
) -> Result<Recurrence> {
    if let Some(path) = file {
        let body =
            fs::read_to_string(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let line = body
            .lines()
            .find(|l| !l.trim().is_empty())
            .ok_or_else(|| Error::Parse(format!("{} holds no record", path.display())))?;
        return CatalogRecord::from_line(line)?.to_recurrence();
    }
    let terms = parse_inline_terms(coeffs.as_deref().unwrap_or_default())?;
    let max_offset = terms.iter().map(|t| t.0).max().unwrap_or(2);
    let claimed = match claimed {
        Some(text) => parse_range(&text)?,
        None => ValidRange::new(2, max_offset.max(2)),
    };
    Recurrence::external(terms, QuasiPoly2::ZERO, claimed)
}

fn cmd_verify(ctx: &mut Ctx, rec: Recurrence, from: Option<usize>, to: usize) -> Result<i32> {
    let limits = &ctx.config.limits;
    crate::config::Limits::check("scan", to, limits.scan_limit)?;
    let table = build_table_capped(to, limits.max_table)?;
    let from = from.unwrap_or(rec.claimed().lo);
    if from > to {
        return Err(Error::Precondition(format!(
            "window start {from} is past its end {to}"
        )));
    }
    let report = verify(&rec, ValidRange::new(from, to), &table)?;
    let mut text = format!("{rec}\nwindow: {}\n", report.window);
    match report.valid_range {
        Some(r) => text.push_str(&format!("claim holds; valid on {r}\n")),
        None => text.push_str("claim FAILS\n"),
    }
    match &report.first_failure {
        Some(m) => text.push_str(&format!(
            "first failure: n = {} (p(n) = {}, rhs = {})\n",
            m.n, m.lhs, m.rhs
        )),
        None => text.push_str("no failure in window\n"),
    }
    ctx.emit(
        &text,
        json!({
            "command": "verify",
            "recurrence": recurrence_json(&rec),
            "window": report.window,
            "claim_holds": report.claim_holds(),
            "valid_range": report.valid_range,
            "first_failure": report.first_failure,
            "failures": report.failures().collect::<Vec<_>>(),
        }),
    )?;
    Ok(if report.claim_holds() {
        EXIT_OK
    } else {
        EXIT_VERIFY
    })
}

fn cmd_mine(ctx: &mut Ctx, caps: &str, scan: usize, catalog_path: Option<PathBuf>) -> Result<i32> {
    let limits = &ctx.config.limits;
    let caps = parse_caps(caps)?;
    let max_cap = caps.iter().copied().max().unwrap_or(0);
    let scan = scan.max(max_cap);
    crate::config::Limits::check("scan", scan, limits.scan_limit)?;
    let table = build_table_capped(scan, limits.max_table)?;
    let pairs: Vec<_> = TailVariant::all_pairs().collect();
    let catalog = mine(&caps, &pairs, scan, &table);

    let path = catalog_path.or_else(|| ctx.config.catalog_path.clone());
    if let Some(path) = &path {
        fs::write(path, catalog.to_jsonl())
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    }

    let mut text = format!(
        "{} jobs, {} distinct recurrences, {} anomalies, {} errors\n",
        catalog.jobs,
        catalog.entries.len(),
        catalog.anomalies.len(),
        catalog.errors.len()
    );
    for entry in &catalog.entries {
        let empirical = entry
            .empirical
            .map_or("-".to_string(), |r| format!("{}..{}", r.lo, r.hi));
        text.push_str(&format!(
            "{}\n    empirical {empirical}, {}, from {}\n",
            entry.recurrence,
            entry.classification,
            entry
                .recurrence
                .provenance()
                .iter()
                .map(|d| format!("({d})"))
                .collect::<Vec<_>>()
                .join(" ")
        ));
    }
    for anomaly in &catalog.anomalies {
        text.push_str(&format!(
            "ANOMALY {}: {} fails at n = {}\n",
            anomaly.derivation, anomaly.recurrence, anomaly.failure.n
        ));
    }
    for err in &catalog.errors {
        text.push_str(&format!("ERROR {}: {}\n", err.derivation, err.error));
    }
    ctx.emit(
        &text,
        json!({
            "command": "mine",
            "jobs": catalog.jobs,
            "entries": catalog.entries.iter().map(|e| e.to_record()).collect::<Vec<_>>(),
            "anomalies": catalog.anomalies.iter().map(|a| json!({
                "derivation": a.derivation,
                "failure": a.failure,
            })).collect::<Vec<_>>(),
            "errors": catalog.errors.iter().map(|e| json!({
                "derivation": e.derivation,
                "error": e.error.to_string(),
            })).collect::<Vec<_>>(),
        }),
    )?;
    Ok(
        if catalog.anomalies.is_empty() && catalog.errors.is_empty() {
            EXIT_OK
        } else {
            EXIT_VERIFY
        },
    )
}

fn cmd_bench(ctx: &mut Ctx, ns: &[usize], no_fractal: bool) -> Result<i32> {
    let table = bench(ns, !no_fractal, &ctx.config.limits)?;
    let mut machine = serde_json::to_value(&table).expect("bench rows are plain data");
    machine["command"] = json!("bench");
    ctx.emit(&table.render(), machine)?;
    Ok(if table.disagreements.is_empty() {
        EXIT_OK
    } else {
        EXIT_VERIFY
    })
}

fn cmd_selftest(ctx: &mut Ctx) -> Result<i32> {
    let report = run_selftest(GeneratorRule::STANDARD);
    let mut machine = serde_json::to_value(&report).expect("report is plain data");
    machine["command"] = json!("selftest");
    machine["passed"] = json!(report.passed());
    ctx.emit(&report.render(), machine)?;
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_VERIFY
    })
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code.
pub fn run<I, T>(args: I, config: &Config, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    let machine = match cli.format {
        Some(Format::Machine) => true,
        Some(Format::Text) => false,
        None => config.output == OutputMode::Machine,
    };
    let mut ctx = Ctx {
        config,
        machine,
        out,
    };
    let result = match cli.command {
        Command::Eval { n } => cmd_eval(&mut ctx, n),
        Command::Trace { n, tail } => cmd_trace(&mut ctx, n, tail),
        Command::Expand { cap, tail } => cmd_expand(&mut ctx, cap, tail),
        Command::Derive { cap, pn, pn1 } => cmd_derive(&mut ctx, cap, pn, pn1),
        Command::Verify {
            file,
            coeffs,
            claimed,
            from,
            to,
        } => load_recurrence(file, coeffs, claimed)
            .and_then(|rec| cmd_verify(&mut ctx, rec, from, to)),
        Command::Mine {
            caps,
            scan,
            catalog,
        } => cmd_mine(&mut ctx, &caps, scan, catalog),
        Command::Bench { ns, no_fractal } => cmd_bench(&mut ctx, &ns, no_fractal),
        Command::Selftest => cmd_selftest(&mut ctx),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
