//! The `skein` command line: evaluation, relation checks, normal forms and
//! the distinguished-monomial table.

use std::fmt::Write as _;

use clap::{Parser, Subcommand};
use serde::Serialize;

use skein::presentation::table::{check_table_row, table};
use skein::presentation::{build_catalog, Engine, RewriteError};
use skein::{parse_expression, Evaluator, SkeinError};

pub use skein::{parse_expression as parse, ParseError};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_VERIFY: u8 = 2;
pub const EXIT_IRREDUCIBLE: u8 = 3;
pub const EXIT_INTERNAL: u8 = 4;

/// Seed for the random specializations of the table rank checks.
const TABLE_SEED: u64 = 2024;

#[derive(Parser, Debug)]
#[command(name = "skein", version, about = "Kauffman bracket skein algebra of the 5-punctured sphere")]
pub struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Number of punctures besides the one at infinity (eval only).
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Report wall-clock milliseconds (makes output run-dependent).
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate an expression in the multicurve basis.
    Eval { expression: String },
    /// Check catalog relations against the oracle (all, or those named).
    Verify { names: Vec<String> },
    /// Rewrite an expression into distinguished monomials.
    Nf {
        expression: String,
        /// Check every rewrite step against the oracle.
        #[arg(long)]
        checked: bool,
    },
    /// Check the table of distinguished monomials (all rows, or one).
    Table {
        #[arg(long)]
        row: Option<String>,
    },
    /// List the relation catalog.
    Catalog,
}

/// What a run printed and its exit status.
#[derive(Debug, Default)]
pub struct Output {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn fail(code: u8, msg: impl std::fmt::Display) -> Self {
        Output { code, stdout: String::new(), stderr: format!("error: {}\n", msg) }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("serializable");
    s.push('\n');
    s
}

fn internal(e: SkeinError) -> Output {
    match e {
        SkeinError::WrongPunctureCount(_) | SkeinError::InvalidSubset { .. } => Output::fail(EXIT_USAGE, e),
        _ => Output::fail(EXIT_INTERNAL, e),
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Output { code, stdout: text, stderr: String::new() }
            } else {
                Output { code, stdout: String::new(), stderr: text }
            };
        }
    };
    execute(&cli)
}

pub fn execute(cli: &Cli) -> Output {
    let n = cli.n.unwrap_or(4);
    if !matches!(cli.command, Command::Eval { .. }) && n != 4 {
        return Output::fail(EXIT_USAGE, "--n applies to eval only; other commands need n = 4");
    }
    match &cli.command {
        Command::Eval { expression } => eval(cli, expression, n),
        Command::Verify { names } => verify(cli, names),
        Command::Nf { expression, checked } => nf(cli, expression, *checked),
        Command::Table { row } => table_cmd(cli, row.as_deref()),
        Command::Catalog => catalog(cli),
    }
}

fn parse_or_fail(src: &str, n: usize) -> Result<skein::GenPolynomial, Output> {
    parse_expression(src, n).map_err(|e| {
        let mut msg = format!("{}\n  {}\n  ", e, src);
        msg.push_str(&" ".repeat(e.position().min(src.len())));
        msg.push('^');
        Output::fail(EXIT_USAGE, msg)
    })
}

fn eval(cli: &Cli, src: &str, n: usize) -> Output {
    if !(1..=9).contains(&n) {
        return Output::fail(EXIT_USAGE, format!("--n must be between 1 and 9, got {}", n));
    }
    let p = match parse_or_fail(src, n) {
        Ok(p) => p,
        Err(o) => return o,
    };
    match Evaluator::new(n).evaluate(&p) {
        Ok(e) => Output { stdout: if cli.json { json(&e) } else { format!("{}\n", e) }, ..Default::default() },
        Err(e) => internal(e),
    }
}

fn verify(cli: &Cli, names: &[String]) -> Output {
    let cat = build_catalog();
    let mut selected = Vec::new();
    for name in names {
        match cat.get(name) {
            Some(r) => selected.push(r.clone()),
            None => return Output::fail(EXIT_USAGE, format!("no relation named {:?}", name)),
        }
    }
    if names.is_empty() {
        selected = cat.relations.clone();
    }
    let sub = skein::presentation::catalog::RelationCatalog { relations: selected };
    let mut reports = match sub.verify_all(&Evaluator::new(4)) {
        Ok(r) => r,
        Err(e) => return internal(e),
    };
    if !cli.timings {
        reports.iter_mut().for_each(|r| r.ms = 0.0);
    }
    let failed = reports.iter().filter(|r| !r.zero).count();
    let code = if failed == 0 { EXIT_OK } else { EXIT_VERIFY };
    let stdout = if cli.json {
        json(&reports)
    } else {
        let mut s = String::new();
        for r in &reports {
            if !r.zero {
                writeln!(s, "FAIL {}: residual {}", r.name, r.residual).unwrap();
            } else if cli.timings {
                writeln!(s, "ok   {} ({:.1} ms)", r.name, r.ms).unwrap();
            }
        }
        if failed == 0 {
            writeln!(s, "all {} relations verified", reports.len()).unwrap();
        } else {
            writeln!(s, "{} of {} relations failed", failed, reports.len()).unwrap();
        }
        s
    };
    Output { code, stdout, stderr: String::new() }
}

fn nf(cli: &Cli, src: &str, checked: bool) -> Output {
    let p = match parse_or_fail(src, 4) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let engine = match Engine::new() {
        Ok(e) => e,
        Err(e) => return Output::fail(EXIT_INTERNAL, e),
    };
    let nf = match engine.normal_form_poly(&p, checked) {
        Ok(nf) => nf,
        Err(e @ RewriteError::StepFailed { .. }) => return Output::fail(EXIT_VERIFY, e),
        Err(e) => return Output::fail(EXIT_INTERNAL, e),
    };
    let code = if nf.irreducible.is_empty() { EXIT_OK } else { EXIT_IRREDUCIBLE };
    let stdout = if cli.json {
        json(&nf)
    } else {
        let mut s = format!("{}\n", nf.result);
        for m in &nf.irreducible {
            writeln!(s, "irreducible: {}", skein::GenPolynomial::monomial(m.clone())).unwrap();
        }
        if checked {
            writeln!(s, "{} steps, {} checked", nf.steps, nf.checked).unwrap();
        }
        s
    };
    Output { code, stdout, stderr: String::new() }
}

fn table_cmd(cli: &Cli, row: Option<&str>) -> Output {
    let rows = table();
    let selected: Vec<_> = match row {
        Some(id) => match rows.iter().find(|r| r.id == id) {
            Some(r) => vec![r.clone()],
            None => return Output::fail(EXIT_USAGE, format!("no table row {:?} (rows are R1..R{})", id, rows.len())),
        },
        None => rows,
    };
    let ev = Evaluator::new(4);
    let mut reports = Vec::new();
    for (i, r) in selected.iter().enumerate() {
        match check_table_row(&ev, r, TABLE_SEED + i as u64) {
            Ok(mut rep) => {
                if !cli.timings {
                    rep.ms = 0.0;
                }
                reports.push(rep)
            }
            Err(e) => return internal(e),
        }
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    let code = if failed == 0 { EXIT_OK } else { EXIT_VERIFY };
    let stdout = if cli.json {
        json(&reports)
    } else {
        let mut s = String::new();
        for r in &reports {
            let md: Vec<String> = r.multidegree.iter().map(|d| d.to_string()).collect();
            let monos: Vec<&str> = r.monomials.iter().map(|m| m.monomial.as_str()).collect();
            write!(s, "{:<4} ({}) {:<5} {}", r.id, md.join(","), if r.pass { "ok" } else { "FAIL" }, monos.join(", ")).unwrap();
            if cli.timings {
                write!(s, " ({:.1} ms)", r.ms).unwrap();
            }
            s.push('\n');
        }
        writeln!(s, "{} of {} rows pass", reports.len() - failed, reports.len()).unwrap();
        s
    };
    Output { code, stdout, stderr: String::new() }
}

fn catalog(cli: &Cli) -> Output {
    let cat = build_catalog();
    let stdout = if cli.json {
        cat.to_jsonl()
    } else {
        cat.relations.iter().map(|r| format!("{}\n", r)).collect()
    };
    Output { stdout, ..Default::default() }
}
