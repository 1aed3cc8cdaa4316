//! Exact computation of the space of conjugacy classes of subgroups of a
//! toral compact Lie group.
//!
//! A toral group is presented by a finite group `W`, an integral
//! representation of `W` on the lattice of its central torus, and an
//! extension class in `H^3(W; Λ)`. From that data the crate computes
//! subgroup classifications, the block decomposition of the class space,
//! and Cantor-Bendixson ranks, all over exact integer arithmetic.

pub mod linalg;
pub mod group;
pub mod cohomology;
pub mod torus;
pub mod qlinalg;
pub mod poly;
pub mod isotypic;
pub mod atlas;
pub mod grassmannian;

mod error;

pub use error::Error;

/// Desk-scale caps. Inputs beyond these are rejected, never truncated.
pub mod caps {
    /// Largest supported component group order.
    pub const MAX_GROUP_ORDER: usize = 12;
    /// Largest supported torus rank.
    pub const MAX_RANK: usize = 6;
    /// Largest supported cohomological degree.
    pub const MAX_DEGREE: usize = 3;
    /// Aggregate index bound for sublattice enumeration.
    pub const MAX_INDEX: u64 = 10_000;
    /// Degree cap for rational polynomial factorization.
    pub const MAX_FACTOR_DEGREE: usize = 8;
}
