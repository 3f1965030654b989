//! Explicit grids carrying many rich lines in general position.
//!
//! [`folner`] builds the integer set `Y = ⋃_k N^k·(N^N + [0, N^N))` with the
//! line family `ℓ_k(x) = N^k x + k N^{N-1}`. [`klawe`] plans the prime-power
//! slope family over 𝔽_p and picks intercepts greedily so that every new line
//! meets the earlier ones in fresh points. [`primes`] holds the sieve and the
//! prime-counting estimates the planner relies on.

pub mod folner;
pub mod klawe;
pub mod primes;

pub use folner::{folner_det, folner_grid, folner_lines, FolnerGrid, FolnerParams};
pub use klawe::{
    klawe_condition_value, klawe_select_lines, klawe_slopes, prime_params, KlaweParams,
};
