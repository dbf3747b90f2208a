//! `verify`: residual report over the identity grids.

use clap::{Args, ValueEnum};
use qzeta_core::verify::{self as checks, Grid, VerifyReport};
use serde::Serialize;

use crate::failure::{input, Failure, EXIT_VERIFY};
use crate::literal::format_real;
use crate::output::{csv_text, json_line, plain_table, Format};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GridArg {
    Small,
    Full,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// `small` runs the four identity blocks; `full` adds the oracle blocks.
    #[arg(long, value_enum, default_value_t = GridArg::Small)]
    pub grid: GridArg,
    /// Tolerance for the identity blocks.
    #[arg(long, default_value_t = checks::DEFAULT_TOLERANCE)]
    pub tol: f64,
}

#[derive(Serialize)]
struct Output<'a> {
    #[serde(flatten)]
    report: &'a VerifyReport,
    passed: bool,
}

pub fn run(args: &VerifyArgs, format: Format) -> Result<(String, u8), Failure> {
    if !(args.tol.is_finite() && args.tol > 0.0) {
        return Err(input(format!(
            "tolerance must be positive and finite, got {}",
            args.tol
        )));
    }
    let grid = match args.grid {
        GridArg::Small => Grid::Small,
        GridArg::Full => Grid::Full,
    };
    let report = checks::verify(grid, args.tol)?;
    let passed = report.passed();
    let text = match format {
        Format::Json => json_line(&Output {
            report: &report,
            passed,
        })?,
        Format::Csv | Format::Plain => {
            let header = [
                "block",
                "cases",
                "max_residual",
                "tolerance",
                "result",
                "worst_case",
            ]
            .map(String::from)
            .to_vec();
            let rows: Vec<Vec<String>> = report
                .blocks
                .iter()
                .map(|b| {
                    vec![
                        b.name.clone(),
                        b.cases.to_string(),
                        format_real(b.max_residual),
                        format_real(b.tolerance),
                        if b.passed { "pass" } else { "FAIL" }.to_string(),
                        b.worst_case.clone(),
                    ]
                })
                .collect();
            if format == Format::Csv {
                csv_text(&header, &rows)?
            } else {
                let mut text = plain_table(&header, &rows);
                text.push_str(if passed {
                    "all blocks passed\n"
                } else {
                    "verification FAILED\n"
                });
                text
            }
        }
    };
    Ok((text, if passed { 0 } else { EXIT_VERIFY }))
}
