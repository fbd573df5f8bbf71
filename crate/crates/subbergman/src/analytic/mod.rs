//! Coefficient-level analytic function machinery: truncated power series,
//! Möbius disk automorphisms, finite Blaschke products and rational quotients
//! with certified zero-free denominators.

mod maps;
mod rational;
mod series;

pub use maps::{BlaschkeProduct, DiskSymbol, MoebiusMap};
pub use rational::{count_zeros_in_disk, RationalFn};
pub use series::{geometric_tail_estimate, PowerSeries};
