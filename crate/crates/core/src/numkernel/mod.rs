//! Deterministic arithmetic and special-function primitives.
//!
//! Everything here is a pure function of its arguments; no module in this
//! layer holds state beyond the immutable [`PrimeTable`].

mod arith;
mod bessel;
mod chebyshev;
mod cutoff;
mod gamma;
mod kloosterman;
mod primes;

pub use arith::{gcd, is_prime, legendre, mod_inverse, mod_pow};
pub use bessel::bessel_j1;
pub use chebyshev::{chebyshev_u, chebyshev_u_all};
pub use cutoff::{cutoff, cutoff_eval};
pub use gamma::{gamma, ln_gamma};
pub use kloosterman::{kloosterman, kloosterman_complex, kloosterman_multiplicative};
pub use primes::{divisor_counts, factor, primes_up_to, PrimeTable};
