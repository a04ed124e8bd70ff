//! Elliptic curves over Q with large Tamagawa products.
//!
//! The library constructs twisted Frey-Hellegouarch curves from good
//! abc-triples, walks their isogeny neighbourhoods, and computes conductors
//! and Tamagawa products with a self-contained Tate's algorithm, looking for
//! curves with a large Tamagawa quality
//! `q_tau = log(tau) * log(log N) / log N`.

pub mod abc;
pub mod arith;
pub mod curve;
pub mod isogeny;
pub mod pipeline;
pub mod reduction;
pub mod real;

pub use arith::{factor, factor_unbounded, is_prime, radical, Factorization, StepBudget};
