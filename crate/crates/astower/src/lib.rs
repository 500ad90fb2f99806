//! Exact arithmetic for towers M/L/F over a local function field
//! F = F_q((t)) of characteristic p: enumeration of the tame cyclic
//! layers L/F, Artin-Schreier classes for the wild step M/L, Galois
//! group identification, discriminant censuses for both permutation
//! degrees, and the associated rational Dirichlet series with exact
//! pole data.
//!
//! Everything is exact: field arithmetic is table driven, counts are
//! arbitrary-precision integers, series coefficients and poles are
//! rationals.

pub mod aschreier;
pub mod census;
pub mod cyclofactor;
pub mod dirichlet;
pub mod discriminant;
pub mod gf;
pub mod modstruct;
pub mod poly;
pub mod tame;
pub mod verify;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field of size {size} exceeds the supported limit {limit}")]
    FieldTooLarge { size: u128, limit: u64 },
    #[error("characteristic {p} divides {what}")]
    CharDivides { p: u64, what: String },
    #[error("no suitable omega_0 exists (p divides the inertia degree)")]
    NoOmega0,
    #[error("the class lies in wp(L): no extension")]
    ZeroClass,
    #[error("exponent {0} outside the configured window")]
    Window(i64),
    #[error("enumeration budget exceeded: need {required} elements, budget is {budget}")]
    Budget { required: u128, budget: u64 },
    #[error("valuation bound {bound} too small: factor {factor} has no nonzero stratum")]
    ValBound { bound: u32, factor: usize },
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// Prime factors of `n`, ascending, without multiplicity.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut k = 2u64;
    while k * k <= n {
        if n % k == 0 {
            out.push(k);
            while n % k == 0 {
                n /= k;
            }
        }
        k += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}
