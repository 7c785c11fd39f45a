//! Binomial coefficient class sums modulo prime powers.
//!
//! `[n r]_m(a)` is the sum of `C(n,k) a^k` over `0 <= k <= n` with
//! `k = r (mod m)`. This crate computes these sums exactly modulo `q^N`,
//! the explicit period `nu_m(q)` and the minimal period `mu_m(a, q)` of
//! `n -> [n r]_m(a) mod q`, and checks the congruences these quantities
//! satisfy.
//!
//! The computational core is exponentiation in `(Z/M)[x]/(x^m - 1)`: the
//! coefficient vector of `(1 + a x)^n` there is exactly the list of class
//! sums `[n r]_m(a)` for `r = 0..m`.

pub mod class_sums;
pub mod congruence_suite;
pub mod cyclotomic_ring;
pub mod error;
pub mod intnum;
pub mod periods;

pub use class_sums::{
    aks_polynomial_check, class_sum, class_sum_checked, class_sum_oracle, class_sum_profile, signed_class_sum,
    AksReport, ClassSumQuery,
};
pub use congruence_suite::{
    verify_identity, Classical, CongruenceReport, IdentityId, IdentityParams, QNormalDecomposition,
};
pub use cyclotomic_ring::{CyclicPoly, Modulus};
pub use error::{Error, Precondition, Result};
pub use intnum::PrimePowerFactorization;
pub use periods::{admissible, conjecture_sweep, mu, nu, Admissibility, PeriodReport, SweepReport, SweepVerdict};
