//! Möbius sieve, Mertens prefix sums and certified prefix series.

mod cache;
mod eval;
mod series;
mod sieve;

pub use cache::{cache_path, find_cached, load_table, save_table, CACHE_ENV};
pub use eval::{abel_residual, evaluate, EvaluationPoint, Tables};
pub use series::{ell_series, m_series, PrefixSeries};
pub use sieve::{abs_mertens_prefix_integral, sieve_mu, sieve_mu_with, MuTable, SieveOptions};
