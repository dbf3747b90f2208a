//! `characters`: enumerate, build and validate Dirichlet characters.

use std::path::PathBuf;

use clap::{ArgGroup, Args};
use qzeta_core::{enumerate_prime_characters, Character, CharacterSpec, Complex64};
use serde::{Deserialize, Serialize};

use crate::failure::{input, Failure};
use crate::literal::{format_complex, format_real};
use crate::output::{csv_text, json_line, Format};

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("source").required(true).args(["modulus", "validate"])))]
pub struct CharactersArgs {
    /// Odd modulus.
    #[arg(long)]
    pub modulus: Option<u32>,
    /// List every character of the (prime) modulus.
    #[arg(long, requires = "modulus", conflicts_with = "index")]
    pub list: bool,
    /// Build the character with this index from the least primitive root.
    #[arg(long, requires = "modulus")]
    pub index: Option<u32>,
    /// Validate a character file (one description or an array of them).
    #[arg(long, conflicts_with = "modulus")]
    pub validate: Option<PathBuf>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(CharacterSpec),
    Many(Vec<CharacterSpec>),
}

#[derive(Serialize)]
struct Entry {
    #[serde(skip_serializing_if = "Option::is_none")]
    index: Option<u32>,
    modulus: u32,
    order: u32,
    values: Vec<[f64; 2]>,
}

fn entry(index: Option<u32>, chi: &Character) -> Entry {
    Entry {
        index,
        modulus: chi.modulus(),
        order: chi.order(),
        values: chi.values().iter().map(|v| [v.re, v.im]).collect(),
    }
}

fn collect(args: &CharactersArgs) -> Result<Vec<Entry>, Failure> {
    if let Some(path) = &args.validate {
        let text = std::fs::read_to_string(path)
            .map_err(|e| input(format!("cannot read {}: {e}", path.display())))?;
        let specs = match serde_json::from_str(&text) {
            Ok(OneOrMany::One(spec)) => vec![spec],
            Ok(OneOrMany::Many(specs)) => specs,
            Err(e) => {
                return Err(input(format!(
                    "malformed character file {}: {e}",
                    path.display()
                )))
            }
        };
        return specs
            .iter()
            .map(|spec| Ok(entry(None, &Character::new(spec)?)))
            .collect();
    }
    let f = args
        .modulus
        .ok_or_else(|| input("--modulus or --validate is required"))?;
    if f % 2 == 0 {
        return Err(input(format!("modulus must be odd, got {f}")));
    }
    if let Some(j) = args.index {
        let chi = if f == 1 && j == 0 {
            Character::principal(1)?
        } else {
            Character::from_generator(f, j, None)?
        };
        return Ok(vec![entry(Some(j), &chi)]);
    }
    let all: Vec<Character> = if f == 1 {
        vec![Character::principal(1)?]
    } else {
        enumerate_prime_characters(f)?
    };
    Ok(all
        .iter()
        .enumerate()
        .map(|(j, c)| entry(Some(j as u32), c))
        .collect())
}

pub fn run(args: &CharactersArgs, format: Format) -> Result<String, Failure> {
    let entries = collect(args)?;
    match format {
        Format::Json => json_line(&entries),
        Format::Csv => {
            let header = ["index", "modulus", "order", "a", "re", "im"]
                .map(String::from)
                .to_vec();
            let mut rows = Vec::new();
            for e in &entries {
                for (a, [re, im]) in e.values.iter().enumerate() {
                    rows.push(vec![
                        e.index.map(|j| j.to_string()).unwrap_or_default(),
                        e.modulus.to_string(),
                        e.order.to_string(),
                        a.to_string(),
                        format_real(*re),
                        format_real(*im),
                    ]);
                }
            }
            csv_text(&header, &rows)
        }
        Format::Plain => {
            let mut text = String::new();
            for e in &entries {
                let label = e.index.map(|j| format!("index {j}, ")).unwrap_or_default();
                let values: Vec<String> = e
                    .values
                    .iter()
                    .map(|&[re, im]| format_complex(Complex64::new(re, im)))
                    .collect();
                text.push_str(&format!(
                    "{label}modulus {}, order {}: [{}]\n",
                    e.modulus,
                    e.order,
                    values.join(", ")
                ));
            }
            Ok(text)
        }
    }
}
