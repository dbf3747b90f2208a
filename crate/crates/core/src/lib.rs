//! Multiple q-Euler zeta functions, Dirichlet-type q-Euler l-functions and the
//! q-Euler polynomials of higher order that give their values at the
//! nonpositive integers.
//!
//! Every routine is generic over the real scalar type ([`Real`], implemented
//! for `f32` and `f64`); the aliases at the crate root fix it to `f64`.
//!
//! ```
//! use qzeta_core::{euler_poly_r, zeta_r, Complex64, Context, Order, PolyIndex};
//!
//! let ctx = Context::real(0.5).unwrap();
//! let x = Complex64::new(1.0, 0.0);
//! let z = zeta_r(Complex64::new(-1.0, 0.0), Order::ONE, x, &ctx).unwrap();
//! let e = euler_poly_r(PolyIndex::new(1).unwrap(), Order::ONE, x, &ctx).unwrap();
//! assert!((z.value - e).norm() < 1e-14);
//! assert!((e.re - 0.5).abs() < 1e-14);
//! ```

pub mod characters;
pub mod error;
pub mod qcore;
pub mod qeuler;
pub mod quadrature;
pub mod qzeta;
pub mod scalar;
mod series;
pub mod verify;

pub use characters::{
    alternating_weights, chi_at, conductor_weights, enumerate_prime_characters, CharacterSpec,
    DirichletCharacter, MAX_MODULUS,
};
pub use error::{Error, Result};
pub use num_complex::{Complex, Complex64};
pub use qcore::{
    complex_pow, gamma, gen_binomial, q_number, validate_domain, EvalContext, GenBinomials,
    SeriesResult,
};
pub use qeuler::{
    abel_oracle, character_closed_form, character_distribution_rhs, distribution_closed_form,
    distribution_rhs, euler_poly_chi_r, euler_poly_r, gen_fn, gen_fn_chi, Order, PolyIndex,
};
pub use qzeta::{l, l_r, mellin_oracle, special_value_residual, zeta, zeta_r, ZetaQuery};
pub use scalar::Real;

pub type Context = EvalContext<f64>;
pub type Character = DirichletCharacter<f64>;
pub type Series = SeriesResult<f64>;
pub type Query = ZetaQuery<f64>;
