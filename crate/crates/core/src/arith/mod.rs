//! Exact arithmetic: integers, rationals, quadratic residues and the fields Q(i), Q(sqrt 3).

pub mod factor;
pub mod quad;
pub mod residue;
pub mod ring;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

pub use factor::{
    factorize, factorize_u64, greatest_prime_factor, greatest_prime_factor_u64, is_prime,
    is_prime_u64, is_squarefree, is_squarefree_u64, odd_primes_up_to, primes_below,
    squarefree_decompose, squarefree_part_i64, SquarefreeDecomp,
};
pub use quad::{QuadElem, QuadField};
pub use residue::{is_square_mod, jacobi_symbol, legendre_i64, legendre_u64, sqrt_mod_prime};
pub use ring::{
    factor_in_ring, is_square_in_field, normalize_associate, primes_above, quad_int_gcd,
    squarefree_class, valuation,
};

pub type BigRat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("zero input")]
    Zero,
    #[error("expected a positive integer, got {0}")]
    NotPositive(BigInt),
    #[error("{0} is not an odd prime")]
    NotOddPrime(BigInt),
    #[error("field mismatch: D={0} vs D={1}")]
    FieldMismatch(i64, i64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not an algebraic integer")]
    NotIntegral(String),
    #[error("unsupported field D={0}")]
    UnsupportedField(i64),
    #[error("cannot parse field element {0:?}")]
    Parse(String),
}
