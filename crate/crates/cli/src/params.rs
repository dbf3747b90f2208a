//! Flags shared by the evaluation subcommands.

use std::path::PathBuf;

use clap::Args;
use qzeta_core::{Character, CharacterSpec, Complex64, Context, Order};
use serde::Serialize;

use crate::failure::{input, Failure};
use crate::literal::{format_complex, format_real};
use crate::output::Cplx;

#[derive(Args, Debug, Clone)]
pub struct Tuning {
    /// Absolute tolerance for series tails.
    #[arg(long, default_value_t = Context::DEFAULT_TOL)]
    pub tol: f64,
    /// Term budget per series.
    #[arg(long, default_value_t = Context::DEFAULT_MAX_TERMS)]
    pub max_terms: usize,
}

impl Tuning {
    pub fn context(&self, q: Complex64) -> Result<Context, Failure> {
        Ok(Context::new(q)?
            .with_tolerance(self.tol)?
            .with_max_terms(self.max_terms)?)
    }

    /// Rejects a bad `--tol` or `--max-terms` before any evaluation.
    pub fn check(&self) -> Result<(), Failure> {
        self.context(Complex64::new(0.5, 0.0)).map(|_| ())
    }
}

#[derive(Args, Debug, Clone, Default)]
pub struct ChiArgs {
    /// Character file (`{"modulus", "values"}` table or `{"modulus", "index"}`).
    #[arg(long, conflicts_with_all = ["chi_modulus", "chi_index"])]
    pub chi_file: Option<PathBuf>,
    /// Modulus of a generator-built character (1 or an odd prime).
    #[arg(long, requires = "chi_index")]
    pub chi_modulus: Option<u32>,
    /// Index j of the generator-built character.
    #[arg(long, requires = "chi_modulus")]
    pub chi_index: Option<u32>,
}

impl ChiArgs {
    pub fn resolve(&self) -> Result<Option<Character>, Failure> {
        if let Some(path) = &self.chi_file {
            let spec = read_spec(path)?;
            return Ok(Some(Character::new(&spec)?));
        }
        match (self.chi_modulus, self.chi_index) {
            (Some(1), Some(0)) => Ok(Some(Character::principal(1)?)),
            (Some(f), Some(j)) => Ok(Some(Character::from_generator(f, j, None)?)),
            _ => Ok(None),
        }
    }

    pub fn require(&self) -> Result<Character, Failure> {
        self.resolve()?.ok_or_else(|| {
            input("a character is required (--chi-file, or --chi-modulus with --chi-index)")
        })
    }
}

pub fn read_spec(path: &PathBuf) -> Result<CharacterSpec, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| input(format!("malformed character file {}: {e}", path.display())))
}

pub fn order(r: u32) -> Result<Order, Failure> {
    Ok(Order::new(r)?)
}

/// Echo of every resolved input.
#[derive(Clone, Debug, Serialize)]
pub struct Params {
    pub function: &'static str,
    pub q: Cplx,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<Cplx>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<Cplx>,
    pub x: Cplx,
    pub r: u32,
    pub tol: f64,
    pub max_terms: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi: Option<CharacterSpec>,
}

impl Params {
    /// `(name, value)` pairs in the JSON field order, for CSV and plain output.
    pub fn fields(&self) -> Vec<(&'static str, String)> {
        let c = |z: Cplx| format_complex(Complex64::new(z.re, z.im));
        let mut out = vec![("function", self.function.to_string()), ("q", c(self.q))];
        if let Some(s) = self.s {
            out.push(("s", c(s)));
        }
        if let Some(n) = self.n {
            out.push(("n", n.to_string()));
        }
        if let Some(t) = self.t {
            out.push(("t", c(t)));
        }
        out.push(("x", c(self.x)));
        out.push(("r", self.r.to_string()));
        out.push(("tol", format_real(self.tol)));
        out.push(("max_terms", self.max_terms.to_string()));
        if let Some(chi) = &self.chi {
            out.push(("chi", serde_json::to_string(chi).unwrap_or_default()));
        }
        out
    }
}
