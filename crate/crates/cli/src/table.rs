//! `table`: evaluate one function over a grid with up to two ranged axes.

use clap::{Args, ValueEnum};
use qzeta_core::{Character, Complex64, Context, Error, Order, PolyIndex, Series};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::failure::{input, Failure};
use crate::literal::{format_real, parse_complex_axis, parse_integer_axis, parse_real_axis, Axis};
use crate::output::{csv_text, json_line, plain_table, Format};
use crate::params::{order, ChiArgs, Tuning};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Function {
    Zeta,
    L,
    Euler,
    Genfn,
}

impl Function {
    fn name(self) -> &'static str {
        match self {
            Function::Zeta => "zeta",
            Function::L => "l",
            Function::Euler => "euler",
            Function::Genfn => "genfn",
        }
    }
}

/// Every axis takes a single value or a range: `a:b:k` (k evenly spaced
/// points) for real axes, `a:b` for `n`.
#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(long = "fn", value_enum)]
    pub function: Function,
    #[arg(long, allow_hyphen_values = true)]
    pub q: String,
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    #[arg(long, default_value_t = 1)]
    pub r: u32,
    /// Real part of s (zeta, l).
    #[arg(long, allow_hyphen_values = true)]
    pub s_real: Option<String>,
    /// Imaginary part of s (zeta, l); defaults to 0.
    #[arg(long, allow_hyphen_values = true)]
    pub s_imag: Option<String>,
    /// Polynomial index (euler).
    #[arg(long)]
    pub n: Option<String>,
    /// Generating-function argument (genfn).
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<String>,
    #[command(flatten)]
    pub chi: ChiArgs,
    #[command(flatten)]
    pub tuning: Tuning,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
struct Point {
    n: u32,
    s: Complex64,
    x: Complex64,
    q: Complex64,
    t: Complex64,
}

/// Resolved grid: per-axis values in canonical order `n, s_real, s_imag, x, q, t`.
struct Grid {
    n: Axis<u32>,
    s_real: Axis<f64>,
    s_imag: Axis<f64>,
    x: Axis<Complex64>,
    q: Axis<Complex64>,
    t: Axis<Complex64>,
}

impl Grid {
    fn ranged_names(&self) -> Vec<&'static str> {
        let flags = [
            ("n", self.n.is_range()),
            ("s_real", self.s_real.is_range()),
            ("s_imag", self.s_imag.is_range()),
            ("x", self.x.is_range()),
            ("q", self.q.is_range()),
            ("t", self.t.is_range()),
        ];
        flags.iter().filter(|(_, r)| *r).map(|(n, _)| *n).collect()
    }

    /// Points in lexicographic order, the first axis varying slowest.
    fn points(&self) -> Vec<Point> {
        let mut out = Vec::new();
        for n in self.n.values() {
            for sr in self.s_real.values() {
                for si in self.s_imag.values() {
                    for x in self.x.values() {
                        for q in self.q.values() {
                            for t in self.t.values() {
                                out.push(Point {
                                    n,
                                    s: Complex64::new(sr, si),
                                    x,
                                    q,
                                    t,
                                });
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

fn unused(name: &str, value: &Option<String>, function: Function) -> Result<(), Failure> {
    if value.is_some() {
        return Err(input(format!(
            "--{name} does not apply to --fn {}",
            function.name()
        )));
    }
    Ok(())
}

fn required<'a>(
    name: &str,
    value: &'a Option<String>,
    function: Function,
) -> Result<&'a str, Failure> {
    value
        .as_deref()
        .ok_or_else(|| input(format!("--fn {} requires --{name}", function.name())))
}

fn build_grid(args: &TableArgs) -> Result<Grid, Failure> {
    let f = args.function;
    let real_axis = |t: &str| parse_real_axis(t).map_err(input);
    let complex_axis = |t: &str| parse_complex_axis(t).map_err(input);
    let mut grid = Grid {
        n: Axis::Fixed(0),
        s_real: Axis::Fixed(0.0),
        s_imag: Axis::Fixed(0.0),
        x: complex_axis(&args.x)?,
        q: complex_axis(&args.q)?,
        t: Axis::Fixed(Complex64::new(0.0, 0.0)),
    };
    match f {
        Function::Zeta | Function::L => {
            unused("n", &args.n, f)?;
            unused("t", &args.t, f)?;
            grid.s_real = real_axis(required("s-real", &args.s_real, f)?)?;
            if let Some(si) = &args.s_imag {
                grid.s_imag = real_axis(si)?;
            }
        }
        Function::Euler => {
            unused("s-real", &args.s_real, f)?;
            unused("s-imag", &args.s_imag, f)?;
            unused("t", &args.t, f)?;
            grid.n = parse_integer_axis(required("n", &args.n, f)?).map_err(input)?;
        }
        Function::Genfn => {
            unused("s-real", &args.s_real, f)?;
            unused("s-imag", &args.s_imag, f)?;
            unused("n", &args.n, f)?;
            grid.t = complex_axis(required("t", &args.t, f)?)?;
        }
    }
    let ranged = grid.ranged_names();
    if ranged.len() > 2 {
        return Err(input(format!(
            "at most two ranged axes are allowed, got {} ({})",
            ranged.len(),
            ranged.join(", ")
        )));
    }
    Ok(grid)
}

fn evaluate(
    f: Function,
    p: &Point,
    r: Order,
    chi: Option<&Character>,
    tuning: &Tuning,
) -> Result<Series, Error> {
    let ctx = Context::new(p.q)?
        .with_tolerance(tuning.tol)?
        .with_max_terms(tuning.max_terms)?;
    match (f, chi) {
        (Function::Zeta, _) => qzeta_core::zeta_r(p.s, r, p.x, &ctx),
        (Function::L, Some(c)) => qzeta_core::l_r(p.s, r, p.x, c, &ctx),
        (Function::L, None) => Err(Error::Domain("--fn l requires a character".into())),
        (Function::Euler, c) => {
            let n = PolyIndex::new(p.n)?;
            let value = match c {
                Some(c) => qzeta_core::euler_poly_chi_r(n, r, p.x, c, &ctx)?,
                None => qzeta_core::euler_poly_r(n, r, p.x, &ctx)?,
            };
            Ok(Series::exact(value, p.n as usize + 1))
        }
        (Function::Genfn, Some(c)) => qzeta_core::gen_fn_chi(p.t, r, p.x, c, &ctx),
        (Function::Genfn, None) => qzeta_core::gen_fn(p.t, r, p.x, &ctx),
    }
}

fn axis_cell(name: &str, p: &Point) -> String {
    match name {
        "n" => p.n.to_string(),
        "s_real" => format_real(p.s.re),
        "s_imag" => format_real(p.s.im),
        "x" => format_real(p.x.re),
        "q" => format_real(p.q.re),
        _ => format_real(p.t.re),
    }
}

fn axis_json(name: &str, p: &Point) -> Value {
    match name {
        "n" => json!(p.n),
        "s_real" => json!(p.s.re),
        "s_imag" => json!(p.s.im),
        "x" => json!(p.x.re),
        "q" => json!(p.q.re),
        _ => json!(p.t.re),
    }
}

fn fixed_params(args: &TableArgs, grid: &Grid, chi: Option<&Character>) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("function".into(), json!(args.function.name()));
    m.insert("r".into(), json!(args.r));
    m.insert("tol".into(), json!(args.tuning.tol));
    m.insert("max_terms".into(), json!(args.tuning.max_terms));
    let c = |z: Complex64| json!({"re": z.re, "im": z.im});
    if let Axis::Fixed(q) = grid.q {
        m.insert("q".into(), c(q));
    }
    if let Axis::Fixed(x) = grid.x {
        m.insert("x".into(), c(x));
    }
    match args.function {
        Function::Zeta | Function::L => {
            if let Axis::Fixed(v) = grid.s_real {
                m.insert("s_real".into(), json!(v));
            }
            if let Axis::Fixed(v) = grid.s_imag {
                m.insert("s_imag".into(), json!(v));
            }
        }
        Function::Euler => {
            if let Axis::Fixed(n) = grid.n {
                m.insert("n".into(), json!(n));
            }
        }
        Function::Genfn => {
            if let Axis::Fixed(t) = grid.t {
                m.insert("t".into(), c(t));
            }
        }
    }
    if let Some(chi) = chi {
        m.insert(
            "chi".into(),
            serde_json::to_value(chi.to_spec()).unwrap_or(Value::Null),
        );
    }
    m
}

pub fn run(args: &TableArgs, format: Format) -> Result<String, Failure> {
    args.tuning.check()?;
    let r = order(args.r)?;
    let grid = build_grid(args)?;
    let chi = args.chi.resolve()?;
    if args.function == Function::L && chi.is_none() {
        return Err(input(
            "--fn l requires a character (--chi-file, or --chi-modulus with --chi-index)",
        ));
    }
    let axes = grid.ranged_names();
    let points = grid.points();
    let results: Vec<Result<Series, Error>> = points
        .par_iter()
        .map(|p| evaluate(args.function, p, r, chi.as_ref(), &args.tuning))
        .collect();

    match format {
        Format::Json => {
            let rows: Vec<Value> = points
                .iter()
                .zip(&results)
                .map(|(p, res)| {
                    let mut row = Map::new();
                    for name in &axes {
                        row.insert((*name).into(), axis_json(name, p));
                    }
                    match res {
                        Ok(v) => {
                            row.insert("value".into(), json!({"re": v.value.re, "im": v.value.im}));
                            row.insert("err_estimate".into(), json!(v.err_estimate));
                            row.insert("terms_used".into(), json!(v.terms_used));
                            row.insert("error".into(), Value::Null);
                        }
                        Err(e) => {
                            row.insert("error".into(), json!(e.to_string()));
                        }
                    }
                    Value::Object(row)
                })
                .collect();
            json_line(&json!({
                "axes": axes,
                "params": Value::Object(fixed_params(args, &grid, chi.as_ref())),
                "rows": rows,
            }))
        }
        Format::Csv | Format::Plain => {
            let mut header: Vec<String> = axes.iter().map(|s| s.to_string()).collect();
            header.extend(
                [
                    "value_re",
                    "value_im",
                    "err_estimate",
                    "terms_used",
                    "error",
                ]
                .map(String::from),
            );
            let rows: Vec<Vec<String>> = points
                .iter()
                .zip(&results)
                .map(|(p, res)| {
                    let mut row: Vec<String> = axes.iter().map(|a| axis_cell(a, p)).collect();
                    match res {
                        Ok(v) => row.extend([
                            format_real(v.value.re),
                            format_real(v.value.im),
                            format_real(v.err_estimate),
                            v.terms_used.to_string(),
                            String::new(),
                        ]),
                        Err(e) => {
                            row.extend(std::iter::repeat_n(String::new(), 4));
                            row.push(e.to_string());
                        }
                    }
                    row
                })
                .collect();
            if format == Format::Csv {
                csv_text(&header, &rows)
            } else {
                Ok(plain_table(&header, &rows))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_order_is_lexicographic() {
        let grid = Grid {
            n: Axis::Fixed(0),
            s_real: Axis::Range(vec![0.0, 1.0]),
            s_imag: Axis::Fixed(0.0),
            x: Axis::Range(vec![Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)]),
            q: Axis::Fixed(Complex64::new(0.5, 0.0)),
            t: Axis::Fixed(Complex64::new(0.0, 0.0)),
        };
        let pts: Vec<(f64, f64)> = grid.points().iter().map(|p| (p.s.re, p.x.re)).collect();
        assert_eq!(pts, vec![(0.0, 1.0), (0.0, 2.0), (1.0, 1.0), (1.0, 2.0)]);
        assert_eq!(grid.ranged_names(), vec!["s_real", "x"]);
    }
}
