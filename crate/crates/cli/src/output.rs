use clap::ValueEnum;
use qzeta_core::Complex64;
use serde::Serialize;

use crate::failure::{input, Failure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

/// JSON shape of a complex number.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Cplx {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Cplx {
    fn from(z: Complex64) -> Self {
        Cplx { re: z.re, im: z.im }
    }
}

pub fn json_line<S: Serialize>(value: &S) -> Result<String, Failure> {
    let mut text = serde_json::to_string(value).map_err(|e| input(format!("json output: {e}")))?;
    text.push('\n');
    Ok(text)
}

/// Writes `header` and `rows` as CSV.
pub fn csv_text(header: &[String], rows: &[Vec<String>]) -> Result<String, Failure> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(header)?;
    for row in rows {
        writer.write_record(row)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| input(format!("csv output: {e}")))?;
    String::from_utf8(bytes).map_err(|e| input(format!("csv output: {e}")))
}

/// Left-aligned columns separated by two spaces.
pub fn plain_table(header: &[String], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        let mut l = padded.join("  ").trim_end().to_string();
        l.push('\n');
        l
    };
    let mut text = line(header);
    for row in rows {
        text.push_str(&line(row));
    }
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quotes_when_needed() {
        let text = csv_text(
            &["a".into(), "b".into()],
            &[vec!["1".into(), "x, y".into()]],
        )
        .unwrap();
        assert_eq!(text, "a,b\n1,\"x, y\"\n");
    }

    #[test]
    fn plain_columns_align() {
        let text = plain_table(
            &["n".into(), "value".into()],
            &[vec!["10".into(), "1".into()]],
        );
        assert_eq!(text, "n   value\n10  1\n");
    }
}
