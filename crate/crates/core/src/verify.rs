//! Residual suites for the special-value and distribution identities, plus
//! the oracle cross-checks, evaluated in parallel over parameter grids.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::characters::{enumerate_prime_characters, DirichletCharacter};
use crate::error::Result;
use crate::qcore::EvalContext;
use crate::qeuler::{
    abel_oracle, character_closed_form, character_distribution_rhs, distribution_closed_form,
    distribution_rhs, euler_poly_chi_r, euler_poly_r, neville, Order, PolyIndex,
};
use crate::qzeta::{l_r, mellin_oracle, special_value_residual, zeta_r};

type Chi = DirichletCharacter<f64>;
type Ctx = EvalContext<f64>;

/// Default tolerance for the identity blocks.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const ABEL_TOLERANCE: f64 = 1e-6;
pub const MELLIN_TOLERANCE: f64 = 1e-5;
pub const CLASSICAL_TOLERANCE: f64 = 1e-6;
pub const ENTIRETY_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Grid {
    Small,
    Full,
}

/// Parameter ranges shared by the identity blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub special_n_max: u32,
    pub special_r_max: u32,
    pub special_xs: Vec<f64>,
    pub n_max: u32,
    pub r_max: u32,
    pub l_r_max: u32,
    pub qs: Vec<Complex64>,
    pub xs: Vec<f64>,
    pub conductors: Vec<u32>,
    pub moduli: Vec<u32>,
}

impl GridSpec {
    pub fn small() -> Self {
        let qs = vec![Complex64::new(0.5, 0.0), Complex64::new(0.4, 0.3)];
        Self {
            special_n_max: 4,
            special_r_max: 2,
            special_xs: vec![0.5, 1.0],
            n_max: 4,
            r_max: 2,
            l_r_max: 2,
            qs,
            xs: vec![0.5, 1.0],
            conductors: vec![1, 3],
            moduli: vec![1, 3],
        }
    }

    pub fn full() -> Self {
        let qs = vec![
            Complex64::new(0.3, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.9, 0.0),
            Complex64::new(0.4, 0.3),
        ];
        Self {
            special_n_max: 8,
            special_r_max: 3,
            special_xs: vec![0.5, 1.0, 2.0],
            n_max: 6,
            r_max: 3,
            l_r_max: 2,
            qs,
            xs: vec![0.0, 0.5, 1.0, 2.0],
            conductors: vec![1, 3, 5],
            moduli: vec![1, 3, 5],
        }
    }

    pub fn for_grid(grid: Grid) -> Self {
        match grid {
            Grid::Small => Self::small(),
            Grid::Full => Self::full(),
        }
    }
}

/// Outcome of one residual block.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlockReport {
    pub name: String,
    pub cases: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    /// Parameters of the case attaining `max_residual`.
    pub worst_case: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub grid: Grid,
    pub blocks: Vec<BlockReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.blocks.iter().all(|b| b.passed)
    }
}

/// Runs the four identity blocks at `tol`; the full grid also runs the oracle
/// blocks at their own fixed tolerances.
pub fn verify(grid: Grid, tol: f64) -> Result<VerifyReport> {
    let spec = GridSpec::for_grid(grid);
    let mut blocks = vec![
        zeta_special_values(&spec, tol)?,
        distribution_relation(&spec, tol)?,
        character_distribution(&spec, tol)?,
        l_special_values(&spec, tol)?,
    ];
    if grid == Grid::Full {
        blocks.push(abel_agreement()?);
        blocks.push(mellin_agreement()?);
        blocks.push(classical_limit()?);
        blocks.push(entirety_probe()?);
    }
    Ok(VerifyReport { grid, blocks })
}

/// Evaluates every case in parallel and keeps the largest residual; ties go
/// to the earliest case so the report is deterministic.
fn run_block<C, F>(name: &str, tolerance: f64, cases: Vec<C>, eval: F) -> Result<BlockReport>
where
    C: Send + Sync,
    F: Fn(&C) -> Result<(f64, String)> + Send + Sync,
{
    let results: Vec<(f64, String)> = cases.par_iter().map(&eval).collect::<Result<_>>()?;
    let mut max_residual = 0.0;
    let mut worst_case = String::new();
    for (residual, label) in &results {
        let residual = if residual.is_nan() {
            f64::INFINITY
        } else {
            *residual
        };
        if worst_case.is_empty() || residual > max_residual {
            max_residual = residual;
            worst_case = label.clone();
        }
    }
    Ok(BlockReport {
        name: name.to_string(),
        cases: results.len(),
        max_residual,
        tolerance,
        worst_case,
        passed: max_residual <= tolerance,
    })
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / (1.0 + a.norm())
}

/// Characters modulo each listed modulus (1 or an odd prime).
pub fn character_set(moduli: &[u32]) -> Result<Vec<Chi>> {
    let mut out = Vec::new();
    for &m in moduli {
        if m == 1 {
            out.push(Chi::principal(1)?);
        } else {
            out.extend(enumerate_prime_characters(m)?);
        }
    }
    Ok(out)
}

fn contexts(qs: &[Complex64]) -> Result<Vec<Ctx>> {
    qs.iter().map(|&q| Ctx::new(q)).collect()
}

/// `ζ_{r,q}(-n, x) = E_{n,q}^{(r)}(x)`.
pub fn zeta_special_values(spec: &GridSpec, tol: f64) -> Result<BlockReport> {
    let mut cases = Vec::new();
    for ctx in contexts(&spec.qs)? {
        for r in 1..=spec.special_r_max {
            for n in 0..=spec.special_n_max {
                for &x in &spec.special_xs {
                    cases.push((ctx, n, r, x));
                }
            }
        }
    }
    run_block("zeta_special_values", tol, cases, |&(ctx, n, r, x)| {
        let res = special_value_residual(
            PolyIndex::new(n)?,
            Order::new(r)?,
            Complex64::new(x, 0.0),
            &ctx,
            None,
        )?;
        Ok((res, format!("q={} n={n} r={r} x={x}", ctx.q())))
    })
}

/// Both forms of the distribution relation for `E_{n,q}^{(r)}`.
pub fn distribution_relation(spec: &GridSpec, tol: f64) -> Result<BlockReport> {
    let mut cases = Vec::new();
    for ctx in contexts(&spec.qs)? {
        for &f in &spec.conductors {
            for r in 1..=spec.r_max {
                for n in 0..=spec.n_max {
                    for &x in &spec.xs {
                        cases.push((ctx, f, n, r, x));
                    }
                }
            }
        }
    }
    run_block("distribution_relation", tol, cases, |&(ctx, f, n, r, x)| {
        let (n, r, x) = (PolyIndex::new(n)?, Order::new(r)?, Complex64::new(x, 0.0));
        let lhs = euler_poly_r(n, r, x, &ctx)?;
        let shifted = distribution_rhs(n, r, x, f, &ctx)?;
        let closed = distribution_closed_form(n, r, x, f, &ctx)?;
        let res = rel(lhs, shifted).max(rel(lhs, closed));
        Ok((res, format!("q={} f={f} n={n} r={r} x={x}", ctx.q())))
    })
}

/// Both forms of the distribution relation for `E_{n,χ,q}^{(r)}`.
pub fn character_distribution(spec: &GridSpec, tol: f64) -> Result<BlockReport> {
    let chars = character_set(&spec.moduli)?;
    let mut cases = Vec::new();
    for ctx in contexts(&spec.qs)? {
        for (ci, chi) in chars.iter().enumerate() {
            for r in 1..=spec.r_max {
                for n in 0..=spec.n_max {
                    for &x in &spec.xs {
                        cases.push((ctx, ci, chi, n, r, x));
                    }
                }
            }
        }
    }
    run_block(
        "character_distribution",
        tol,
        cases,
        |&(ctx, ci, chi, n, r, x)| {
            let (n, r, x) = (PolyIndex::new(n)?, Order::new(r)?, Complex64::new(x, 0.0));
            let lhs = euler_poly_chi_r(n, r, x, chi, &ctx)?;
            let shifted = character_distribution_rhs(n, r, x, chi, &ctx)?;
            let closed = character_closed_form(n, r, x, chi, &ctx)?;
            let res = rel(lhs, shifted).max(rel(lhs, closed));
            Ok((
                res,
                format!(
                    "q={} chi=#{ci} mod {} n={n} r={r} x={x}",
                    ctx.q(),
                    chi.modulus()
                ),
            ))
        },
    )
}

/// `l_q^{(r)}(-n, x | χ) = E_{n,χ,q}^{(r)}(x)`.
pub fn l_special_values(spec: &GridSpec, tol: f64) -> Result<BlockReport> {
    let chars = character_set(&spec.moduli)?;
    let mut cases = Vec::new();
    for ctx in contexts(&spec.qs)? {
        for (ci, chi) in chars.iter().enumerate() {
            for r in 1..=spec.l_r_max {
                for n in 0..=spec.n_max {
                    for &x in &spec.xs {
                        cases.push((ctx, ci, chi, n, r, x));
                    }
                }
            }
        }
    }
    run_block(
        "l_special_values",
        tol,
        cases,
        |&(ctx, ci, chi, n, r, x)| {
            let res = special_value_residual(
                PolyIndex::new(n)?,
                Order::new(r)?,
                Complex64::new(x, 0.0),
                &ctx,
                Some(chi),
            )?;
            Ok((
                res,
                format!(
                    "q={} chi=#{ci} mod {} n={n} r={r} x={x}",
                    ctx.q(),
                    chi.modulus()
                ),
            ))
        },
    )
}

/// Abel summation against the closed form, relative residual.
pub fn abel_agreement() -> Result<BlockReport> {
    let mut cases = Vec::new();
    for q in [0.3, 0.5, 0.7] {
        for r in 1..=3 {
            for n in 0..=6 {
                for x in [0.0, 0.5, 1.0, 2.0] {
                    cases.push((q, n, r, x));
                }
            }
        }
    }
    run_block("abel_oracle", ABEL_TOLERANCE, cases, |&(q, n, r, x)| {
        let ctx = Ctx::real(q)?;
        let (n, r, x) = (PolyIndex::new(n)?, Order::new(r)?, Complex64::new(x, 0.0));
        let closed = euler_poly_r(n, r, x, &ctx)?;
        let abel = abel_oracle(n, r, x, &ctx)?;
        Ok((rel(closed, abel), format!("q={q} n={n} r={r} x={x}")))
    })
}

/// Arguments `s` of the Mellin cross-check.
pub fn mellin_s_grid() -> Vec<Complex64> {
    vec![
        Complex64::new(0.5, 0.0),
        Complex64::new(1.5, 0.0),
        Complex64::new(2.5, 0.0),
        Complex64::new(1.0, 1.0),
        Complex64::new(2.0, -0.5),
    ]
}

/// Mellin quadrature against the series, absolute residual; without a
/// character and with the nonprincipal characters mod 3 and one mod 5.
pub fn mellin_agreement() -> Result<BlockReport> {
    let mut chars: Vec<Option<Chi>> = vec![None];
    chars.push(Some(enumerate_prime_characters(3)?.remove(1)));
    chars.push(Some(enumerate_prime_characters(5)?.remove(1)));
    let mut cases = Vec::new();
    for chi in &chars {
        for q in [0.3, 0.5, 0.7] {
            for s in mellin_s_grid() {
                for r in 1..=2 {
                    for x in [0.5, 1.0, 2.0] {
                        cases.push((chi.as_ref(), q, s, r, x));
                    }
                }
            }
        }
    }
    run_block(
        "mellin_oracle",
        MELLIN_TOLERANCE,
        cases,
        |&(chi, q, s, r, x)| {
            let ctx = Ctx::real(q)?;
            let (r, x) = (Order::new(r)?, Complex64::new(x, 0.0));
            let series = match chi {
                Some(c) => l_r(s, r, x, c, &ctx)?,
                None => zeta_r(s, r, x, &ctx)?,
            };
            let quad = mellin_oracle(s, r, x, &ctx, chi)?;
            let label = match chi {
                Some(c) => format!("mod {} q={q} s={s} r={r} x={x}", c.modulus()),
                None => format!("q={q} s={s} r={r} x={x}"),
            };
            Ok(((quad - series.value).norm(), label))
        },
    )
}

/// Classical Euler polynomial `E_n(x)` from the Euler numbers `E_n(0)`.
pub fn classical_euler(n: u32, x: f64) -> f64 {
    const AT_ZERO: [f64; 6] = [1.0, -0.5, 0.0, 0.25, 0.0, -0.5];
    assert!(n <= 5, "classical table covers n <= 5");
    let mut binom = 1.0;
    let mut sum = 0.0;
    for k in 0..=n {
        if k > 0 {
            binom = binom * (n - k + 1) as f64 / k as f64;
        }
        sum += binom * AT_ZERO[k as usize] * x.powi((n - k) as i32);
    }
    sum
}

/// Step sizes `ε` of the `q = 1 - ε` extrapolation.
pub const CLASSICAL_STEPS: [f64; 3] = [1e-2, 1e-3, 1e-4];

/// `lim_{q→1} E_{n,q}(x)` by polynomial extrapolation in `ε = 1 - q`.
pub fn classical_extrapolation(n: u32, x: f64) -> Result<f64> {
    let mut values = Vec::with_capacity(CLASSICAL_STEPS.len());
    for eps in CLASSICAL_STEPS {
        let ctx = Ctx::real(1.0 - eps)?;
        values.push(euler_poly_r(PolyIndex::new(n)?, Order::ONE, Complex64::new(x, 0.0), &ctx)?.re);
    }
    Ok(neville(&CLASSICAL_STEPS, &values, 0.0))
}

/// Extrapolated `q → 1` limits against the classical polynomials.
pub fn classical_limit() -> Result<BlockReport> {
    let mut cases = Vec::new();
    for n in 0..=5 {
        for x in [0.0, 0.25, 0.5, 1.0] {
            cases.push((n, x));
        }
    }
    run_block("classical_limit", CLASSICAL_TOLERANCE, cases, |&(n, x)| {
        let limit = classical_extrapolation(n, x)?;
        Ok((
            (limit - classical_euler(n, x)).abs(),
            format!("n={n} x={x}"),
        ))
    })
}

/// The complex `s` grid of the entirety probe: 21 × 21 points on [-6, 6]².
pub fn entirety_s_grid() -> Vec<Complex64> {
    let axis: Vec<f64> = (0..21).map(|i| -6.0 + 0.6 * i as f64).collect();
    axis.iter()
        .flat_map(|&re| axis.iter().map(move |&im| Complex64::new(re, im)))
        .collect()
}

/// `ζ_{r,q}(s, 1)` at `q = 1/2` over the entirety grid; the residual is the
/// reported truncation error.
pub fn entirety_probe() -> Result<BlockReport> {
    let ctx = Ctx::real(0.5)?;
    let mut cases = Vec::new();
    for r in 1..=3 {
        for s in entirety_s_grid() {
            cases.push((s, r));
        }
    }
    run_block("entirety_probe", ENTIRETY_TOLERANCE, cases, |&(s, r)| {
        let v = zeta_r(s, Order::new(r)?, Complex64::new(1.0, 0.0), &ctx)?;
        let err = if v.value.re.is_finite() && v.value.im.is_finite() {
            v.err_estimate
        } else {
            f64::INFINITY
        };
        Ok((err, format!("s={s} r={r}")))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_polynomials() {
        assert_eq!(classical_euler(1, 0.3), 0.3 - 0.5);
        assert!((classical_euler(2, 0.7) - (0.49 - 0.7)).abs() < 1e-15);
        assert!((classical_euler(3, 2.0) - (8.0 - 6.0 + 0.25)).abs() < 1e-14);
    }

    #[test]
    fn small_grid_passes() {
        let report = verify(Grid::Small, DEFAULT_TOLERANCE).unwrap();
        assert_eq!(report.blocks.len(), 4);
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn impossible_tolerance_fails() {
        let report = verify(Grid::Small, 1e-30).unwrap();
        assert!(!report.passed());
    }

    #[test]
    fn character_set_sizes() {
        assert_eq!(character_set(&[1, 3, 5]).unwrap().len(), 1 + 2 + 4);
    }

    #[test]
    fn grid_shape() {
        let g = entirety_s_grid();
        assert_eq!(g.len(), 441);
        assert_eq!(g[0], Complex64::new(-6.0, -6.0));
        assert!((g[440] - Complex64::new(6.0, 6.0)).norm() < 1e-12);
    }
}
