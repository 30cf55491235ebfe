//! Exact integer and integer-polynomial arithmetic.

pub mod arith;
pub mod cyclotomic;
pub mod factor;
pub mod intpoly;
pub mod resultant;

pub use cyclotomic::{cyclotomic, real_cyclotomic, real_cyclotomic_mod, unfold_real};
pub use factor::{
    factorize, is_probable_prime, isqrt, mult_order, FactorBudget, Factorization, PrimePower,
};
pub use intpoly::IntPoly;
pub use resultant::{resultant, resultant_mod, sylvester_resultant};
