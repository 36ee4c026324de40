//! Integer kernel: sieve and factorization, multiplicative weights and
//! Dirichlet convolution, prime-reciprocal sums and the scalar functionals
//! `D`, `L_x`, `F_rho` used throughout the crate.

mod functionals;
mod multiplicative;
mod sieve;

pub use functionals::{
    big_d, big_d_at_most, coprime_quotient, f_rho, f_rho_extended, l_sum, l_sum_f64,
    mertens_sum, pm_decompose, primes_in_range, primes_up_to, quotient_primes, ratio_valuation,
    reciprocal_sum, EpsilonParams, PlusMinusDecomposition,
};
pub use multiplicative::{
    certify_admissible, dirichlet_convolve, ensure_admissible, Admissibility,
    MultiplicativeWeight,
};
pub use sieve::{
    euler_phi, factorize, is_prime, valuation, Factorization, Sieve, DEFAULT_SIEVE_LIMIT,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ArithError {
    #[error("|nu_{prime}(v/N)| = {} exceeds 1", valuation.abs())]
    ValuationTooLarge { prime: u64, valuation: i64 },
    #[error("F_rho needs x > 1, got {0}")]
    FRhoDomain(f64),
    #[error("epsilon must lie in (0, 1/2), got {0}")]
    EpsilonRange(String),
}
