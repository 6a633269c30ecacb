//! Rational maps over the rationals: iteration, critical and periodic
//! orbits, preimage polynomials and tree shapes, Chebyshev identities, and
//! a mod-p Frobenius lower bound for Galois degrees.

mod chebyshev;
mod map;
pub mod modp;
mod orbit;
pub mod parse;
mod poly;
mod shape;

pub use chebyshev::{
    chebyshev, chebyshev_identities, laurent_identity_holds, nesting_holds, parity_holds, sign_identity_holds,
    ChebyshevReport,
};
pub use map::{CriticalPoints, PreimagePoly, ProjPoint, RationalMap, DEFAULT_BIT_CAP};
pub use modp::{first_primes, frobenius_bound, primes_up_to, rational_roots, FrobeniusBound, PrimeSample};
pub use orbit::{is_exceptional, is_periodic, is_postcritical, CriticalOrbits};
pub use parse::{parse_map, parse_point, parse_poly};
pub use poly::{gcd, Poly};
pub use shape::{level_sizes, tree_shape, TreeShape, MAX_SHAPE_VERTICES};

use crate::error::{Error, Result};

/// Frobenius lower bound for `[K(f^(-n)(α)) : Q]`: the lcm of factor
/// degrees of the preimage polynomial modulo each good prime in `primes`.
pub fn frobenius_lower_bound(
    f: &RationalMap,
    alpha: &ProjPoint,
    n: usize,
    primes: &[u64],
    bit_cap: u64,
) -> Result<FrobeniusBound> {
    let pp = f.preimage_polynomial(n, alpha, bit_cap)?;
    if primes.is_empty() {
        return Err(Error::NoGoodPrimes("empty prime list".into()));
    }
    frobenius_bound(&pp.poly, primes, 0)
}
