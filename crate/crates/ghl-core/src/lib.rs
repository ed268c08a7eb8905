//! Exact kernel for the forested-graph chain complex of the quotient spines
//! of Outer space and Auter space.
//!
//! The crate computes with isomorphism classes of pairs `(G, F)` where `G` is
//! a finite connected multigraph with no separating valence restrictions
//! beyond minimality and `F` is an ordered forest of edges orienting the
//! corresponding cube in the spine. Everything is exact: coefficients are
//! arbitrary-precision rationals and all identities are certified as chain
//! equalities, never numerically.
//!
//! Module map:
//!
//! * [`halfedge`] — dart-based multigraphs (loops and parallel edges) and the
//!   surgeries used everywhere else: collapse, blow-up, stem attachment.
//! * [`canon`] — canonical labeling of forested multigraphs, automorphism
//!   counting, orientation-reversal detection, and the injective [`canon::CellKey`].
//! * [`complex`] — oriented cells, sparse rational chains, the boundary
//!   operators `d_R`/`d_C`, the coboundaries, and the pairing.
//! * [`morita`] — admissible vertex-oriented graphs, polygon blow-ups, the
//!   cycles `z(gamma)`, the cocycle `mu`, and the pairing-constant check.
//! * [`stab`] — the basepoint stabilization machinery and the explicit
//!   bounding chain `W` with `boundary(W) = Z+`.
//! * [`homology`] — enumeration of cell bases, exact sparse boundary
//!   matrices, Betti numbers, and boundary-witness solving.
//!
//! The crate is `no_std` (with `alloc`); IO, parallel drivers, and the CLI
//! live in the companion `ghl` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod canon;
pub mod complex;
pub mod fixtures;
pub mod halfedge;
pub mod homology;
pub mod morita;
pub mod stab;

mod error;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = core::result::Result<T, Error>;

/// Exact rational scalar used for all chain and matrix coefficients.
pub type Rat = num_rational::BigRational;

/// Convenience constructor for small rational constants.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(num.into(), den.into())
}
