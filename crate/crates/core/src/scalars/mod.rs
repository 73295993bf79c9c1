//! Exact scalars: rationals, cyclotomic field elements and p-local helpers.

mod cyclo;
mod field;
mod rational;
mod reconstruct;

pub use cyclo::{cyclotomic_polynomial, euler_phi, CycloElement};
pub use field::Field;
pub use rational::{
    format_rational, is_p_integral, p_valuation, parse_rational, rat, rat_int, PContent, Rational,
};
pub use reconstruct::rational_reconstruct;

/// Minimum p-adic valuation of a scalar (power-basis coefficients for cyclotomic values).
pub fn p_content(x: &CycloElement, p: u64) -> PContent {
    x.p_content(p)
}

/// Canonical representative of `poly(ζ_m)`.
pub fn cyclo_reduce(poly: &[Rational], m: u64) -> CycloElement {
    CycloElement::from_poly(m, poly)
}
