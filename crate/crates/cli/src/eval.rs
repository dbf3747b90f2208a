//! `eval-zeta`, `eval-l`, `eval-euler`, `eval-genfn`.

use clap::Args;
use qzeta_core::{Complex64, PolyIndex, Series};
use serde::Serialize;

use crate::failure::Failure;
use crate::literal::{format_complex, format_real, parse_complex};
use crate::output::{csv_text, json_line, Cplx, Format};
use crate::params::{order, ChiArgs, Params, Tuning};

#[derive(Args, Debug)]
pub struct ZetaArgs {
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub q: Complex64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub s: Complex64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub x: Complex64,
    #[arg(long, default_value_t = 1)]
    pub r: u32,
    #[command(flatten)]
    pub tuning: Tuning,
}

#[derive(Args, Debug)]
pub struct LArgs {
    #[command(flatten)]
    pub point: ZetaArgs,
    #[command(flatten)]
    pub chi: ChiArgs,
}

#[derive(Args, Debug)]
pub struct EulerArgs {
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub q: Complex64,
    #[arg(long)]
    pub n: u32,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub x: Complex64,
    #[arg(long, default_value_t = 1)]
    pub r: u32,
    #[command(flatten)]
    pub chi: ChiArgs,
    #[command(flatten)]
    pub tuning: Tuning,
}

#[derive(Args, Debug)]
pub struct GenFnArgs {
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub q: Complex64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub t: Complex64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub x: Complex64,
    #[arg(long, default_value_t = 1)]
    pub r: u32,
    #[command(flatten)]
    pub chi: ChiArgs,
    #[command(flatten)]
    pub tuning: Tuning,
}

#[derive(Serialize)]
struct EvalOutput<'a> {
    value: Cplx,
    err_estimate: f64,
    terms_used: usize,
    params: &'a Params,
}

fn params(function: &'static str, q: Complex64, x: Complex64, r: u32, tuning: &Tuning) -> Params {
    Params {
        function,
        q: q.into(),
        s: None,
        n: None,
        t: None,
        x: x.into(),
        r,
        tol: tuning.tol,
        max_terms: tuning.max_terms,
        chi: None,
    }
}

pub fn zeta(args: &ZetaArgs, format: Format) -> Result<String, Failure> {
    let ctx = args.tuning.context(args.q)?;
    let result = qzeta_core::zeta_r(args.s, order(args.r)?, args.x, &ctx)?;
    let mut p = params("zeta", args.q, args.x, args.r, &args.tuning);
    p.s = Some(args.s.into());
    render(&result, &p, format)
}

pub fn l(args: &LArgs, format: Format) -> Result<String, Failure> {
    let a = &args.point;
    let chi = args.chi.require()?;
    let ctx = a.tuning.context(a.q)?;
    let result = qzeta_core::l_r(a.s, order(a.r)?, a.x, &chi, &ctx)?;
    let mut p = params("l", a.q, a.x, a.r, &a.tuning);
    p.s = Some(a.s.into());
    p.chi = Some(chi.to_spec());
    render(&result, &p, format)
}

pub fn euler(args: &EulerArgs, format: Format) -> Result<String, Failure> {
    let ctx = args.tuning.context(args.q)?;
    let n = PolyIndex::new(args.n)?;
    let r = order(args.r)?;
    let chi = args.chi.resolve()?;
    let value = match &chi {
        Some(c) => qzeta_core::euler_poly_chi_r(n, r, args.x, c, &ctx)?,
        None => qzeta_core::euler_poly_r(n, r, args.x, &ctx)?,
    };
    let result = Series::exact(value, args.n as usize + 1);
    let mut p = params("euler", args.q, args.x, args.r, &args.tuning);
    p.n = Some(args.n);
    p.chi = chi.map(|c| c.to_spec());
    render(&result, &p, format)
}

pub fn gen_fn(args: &GenFnArgs, format: Format) -> Result<String, Failure> {
    let ctx = args.tuning.context(args.q)?;
    let r = order(args.r)?;
    let chi = args.chi.resolve()?;
    let result = match &chi {
        Some(c) => qzeta_core::gen_fn_chi(args.t, r, args.x, c, &ctx)?,
        None => qzeta_core::gen_fn(args.t, r, args.x, &ctx)?,
    };
    let mut p = params("genfn", args.q, args.x, args.r, &args.tuning);
    p.t = Some(args.t.into());
    p.chi = chi.map(|c| c.to_spec());
    render(&result, &p, format)
}

fn render(result: &Series, params: &Params, format: Format) -> Result<String, Failure> {
    match format {
        Format::Json => json_line(&EvalOutput {
            value: result.value.into(),
            err_estimate: result.err_estimate,
            terms_used: result.terms_used,
            params,
        }),
        Format::Csv => {
            let mut header: Vec<String> = ["value_re", "value_im", "err_estimate", "terms_used"]
                .map(String::from)
                .to_vec();
            let mut row = vec![
                format_real(result.value.re),
                format_real(result.value.im),
                format_real(result.err_estimate),
                result.terms_used.to_string(),
            ];
            for (name, value) in params.fields() {
                header.push(name.to_string());
                row.push(value);
            }
            csv_text(&header, &[row])
        }
        Format::Plain => {
            let mut text = format!(
                "value: {}\nerr_estimate: {}\nterms_used: {}\n",
                format_complex(result.value),
                format_real(result.err_estimate),
                result.terms_used
            );
            for (name, value) in params.fields() {
                text.push_str(&format!("{name}: {value}\n"));
            }
            Ok(text)
        }
    }
}
