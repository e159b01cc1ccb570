use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::{
    budget_from_env, compute, run_all_identity_checks, sweep_to_files, BoundId, Fault,
    IdentityGrid, ReportRow, Result, SweepConfig, SweepReport,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use klsp4_auxiliary::{table_rows, table_to_markdown};
use klsp4_explicit::terms;
use klsp4_group::{CellParams, CharacterPair, WeylWord};
use klsp4_oracle::{cells_to_terms, enumerate_x_with_budget, DenominatorCap};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "klsp4",
    about = "Exact Sp(4) Kloosterman sums: evaluation, sweeps and checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CellArgs {
    #[arg(long)]
    prime: u64,
    #[arg(long)]
    weyl: WeylWord,
    #[arg(long, default_value_t = 0)]
    r: u32,
    #[arg(long, default_value_t = 0)]
    s: u32,
}

#[derive(Args)]
struct CharArgs {
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    m1: i64,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    m2: i64,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    n1: i64,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    n2: i64,
}

impl CharArgs {
    fn pair(&self) -> CharacterPair {
        CharacterPair::new(self.m1, self.m2, self.n1, self.n2)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one cell at one character.
    Compute {
        #[command(flatten)]
        cell: CellArgs,
        #[command(flatten)]
        chars: CharArgs,
        /// Bound to compare against; defaults to the one for the cell type.
        #[arg(long)]
        bound: Option<BoundId>,
        #[arg(long)]
        budget_terms: Option<u128>,
        #[arg(long)]
        timings: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Evaluate a grid described by a TOML config.
    Sweep {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        budget_terms: Option<u128>,
        #[command(flatten)]
        output: Output,
    },
    /// Run the identity suite.
    Verify {
        /// TOML grid; defaults to the full acceptance grid.
        #[arg(long)]
        grid: Option<PathBuf>,
        /// Corrupt one hat congruence of this cell type first.
        #[arg(long)]
        inject_fault: Option<WeylWord>,
        #[command(flatten)]
        output: Output,
    },
    /// Compare the explicit sum with the brute-force oracle on one cell.
    OracleDiff {
        #[command(flatten)]
        cell: CellArgs,
        /// Character entries to combine; the sum is compared on every 4-tuple.
        #[arg(long, value_delimiter = ',', default_values_t = vec![0, 1, 2], allow_negative_numbers = true)]
        values: Vec<i64>,
        #[arg(long)]
        budget_terms: Option<u128>,
        #[command(flatten)]
        output: Output,
    },
    /// Emit the well-definedness table of the auxiliary sums.
    Table {
        #[arg(long, default_value_t = 2)]
        prime: u64,
        #[command(flatten)]
        output: Output,
    },
}

fn budget(flag: Option<u128>, config: Option<u64>) -> Result<u128> {
    match (flag, config) {
        (Some(b), _) => Ok(b),
        (None, Some(b)) if std::env::var_os("KLSP4_BUDGET").is_none() => Ok(b as u128),
        _ => budget_from_env(),
    }
}

fn emit(output: &Output, body: &[u8], stdout: &mut dyn Write) -> Result<()> {
    match &output.out {
        Some(path) => std::fs::write(path, body)?,
        None => stdout.write_all(body)?,
    }
    Ok(())
}

fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut v = serde_json::to_vec_pretty(value)?;
    v.push(b'\n');
    Ok(v)
}

fn row_text(row: &ReportRow) -> String {
    let c = row.cell;
    let head = format!("{}[p={}, r={}, s={}] {}", c.w, c.p, c.r, c.s, row.chars);
    match (&row.error, row.magnitude, row.ratio) {
        (Some(e), _, _) => format!("{head}: error: {e}\n"),
        (None, Some(m), Some(ratio)) => {
            let alt = row
                .bound
                .alternate
                .map(|a| format!(" (adjacent case {a})"))
                .unwrap_or_default();
            format!(
                "{head}: |Kl| = {m}, terms = {}, bound[{}] = {}{alt}, ratio = {ratio}\n",
                row.term_count.unwrap_or(0),
                row.bound.id,
                row.bound.value
            )
        }
        _ => format!("{head}: no value\n"),
    }
}

fn report_bytes(report: &SweepReport, format: Format) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    match format {
        Format::Json => report.write_jsonl(&mut buf)?,
        Format::Csv => report.write_csv(&mut buf)?,
        Format::Text => {
            for row in &report.rows {
                buf.extend(row_text(row).into_bytes());
            }
        }
    }
    Ok(buf)
}

fn dispatch(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Compute {
            cell,
            chars,
            bound,
            budget_terms,
            timings,
            output,
        } => {
            let c = CellParams::new(cell.weyl, cell.prime, cell.r, cell.s)?;
            let id = bound.unwrap_or(BoundId::for_word(c.w()));
            let row = compute(&c, &chars.pair(), id, budget(budget_terms, None)?, timings)?;
            let report = SweepReport {
                rows: vec![row],
                skipped: Vec::new(),
            };
            emit(&output, &report_bytes(&report, output.format)?, stdout)?;
            Ok(0)
        }
        Command::Sweep {
            config,
            budget_terms,
            output,
        } => {
            let mut cfg = match &config {
                Some(path) => SweepConfig::load(path)?,
                None => SweepConfig::default(),
            };
            let b = budget(budget_terms, cfg.budget_terms)?;
            if output.out.is_some() {
                cfg.jsonl = None;
                cfg.csv = None;
            }
            let report = sweep_to_files(&cfg, b)?;
            if output.out.is_some() || (cfg.jsonl.is_none() && cfg.csv.is_none()) {
                emit(&output, &report_bytes(&report, output.format)?, stdout)?;
            }
            for s in &report.skipped {
                writeln!(
                    stderr,
                    "skipped {}[p={}, r={}, s={}]: {}",
                    s.cell.w, s.cell.p, s.cell.r, s.cell.s, s.reason
                )?;
            }
            for row in report.failures() {
                write!(stderr, "failed {}", row_text(row))?;
            }
            let violations: Vec<&ReportRow> = report.trivial_violations().collect();
            for row in &violations {
                write!(stderr, "above p^(r+s): {}", row_text(row))?;
            }
            for (id, m) in report.max_ratios() {
                writeln!(
                    stderr,
                    "max ratio {id}: {} at {}[p={}, r={}, s={}] {}",
                    m.ratio, m.cell.w, m.cell.p, m.cell.r, m.cell.s, m.chars
                )?;
            }
            Ok(if violations.is_empty() { 0 } else { 1 })
        }
        Command::Verify {
            grid,
            inject_fault,
            output,
        } => {
            let grid = match &grid {
                Some(path) => load_grid(path)?,
                None => IdentityGrid::default(),
            };
            let summary =
                run_all_identity_checks(&grid, inject_fault.map(|w| Fault::PerturbHat { w }));
            for w in &summary.warnings {
                writeln!(stderr, "warning: {w}")?;
            }
            let body = match output.format {
                Format::Text => {
                    let mut s = String::new();
                    for o in &summary.outcomes {
                        let tag = if o.passed { "PASS" } else { "FAIL" };
                        s += &format!(
                            "{tag} {:?}: {} cases, {} failures\n",
                            o.name, o.cases, o.failures
                        );
                        if let Some(c) = &o.counterexample {
                            s += &format!("  first counterexample: {c}\n");
                        }
                    }
                    s.into_bytes()
                }
                _ => json_bytes(&summary)?,
            };
            emit(&output, &body, stdout)?;
            Ok(if summary.passed() { 0 } else { 1 })
        }
        Command::OracleDiff {
            cell,
            values,
            budget_terms,
            output,
        } => {
            let c = CellParams::new(cell.weyl, cell.prime, cell.r, cell.s)?;
            let cells = enumerate_x_with_budget(
                &c,
                DenominatorCap::default_for(&c),
                budget(budget_terms, None)?,
            )?;
            let oracle = cells_to_terms(&cells, c.p())?;
            let explicit = terms(&c)?;
            let mut diffs = Vec::new();
            let chars = CharacterPair::grid(&values);
            for ch in &chars {
                let (a, b) = (explicit.evaluate(ch), oracle.evaluate(ch));
                if !a.eq_exact(&b) {
                    diffs.push(serde_json::json!({"chars": ch, "explicit": a.tally.to_string(), "oracle": b.tally.to_string()}));
                }
            }
            let summary = serde_json::json!({
                "cell": {"w": c.w(), "p": c.p(), "r": c.r(), "s": c.s()},
                "cells": cells.len(),
                "explicit_terms": explicit.len(),
                "skipped_unsolvable": explicit.skipped_unsolvable(),
                "characters": chars.len(),
                "mismatches": diffs,
            });
            let ok = diffs.is_empty() && explicit.skipped_unsolvable() == 0;
            let body = match output.format {
                Format::Text => format!(
                    "{c}: |X| = {}, {} explicit terms, {} characters, {} mismatches\n",
                    cells.len(),
                    explicit.len(),
                    chars.len(),
                    summary["mismatches"].as_array().map_or(0, Vec::len)
                )
                .into_bytes(),
                _ => json_bytes(&summary)?,
            };
            emit(&output, &body, stdout)?;
            Ok(if ok { 0 } else { 1 })
        }
        Command::Table { prime, output } => {
            let rows = table_rows(prime)?;
            let body = match output.format {
                Format::Text => table_to_markdown(&rows).into_bytes(),
                _ => json_bytes(&rows)?,
            };
            emit(&output, &body, stdout)?;
            Ok(0)
        }
    }
}

fn load_grid(path: &Path) -> Result<IdentityGrid> {
    Ok(toml::from_str(&std::fs::read_to_string(path)?)?)
}

/// Runs `klsp4` with `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
