//! Crystal graphs of integrable highest-weight representations for the
//! classical and affine types A and D, realized on four combinatorial models
//! (semistandard tableaux, type-D tableaux with spin columns, Young pyramids,
//! Young walls) and on explicit string representations of the doubled quiver
//! with exact rational arithmetic.
//!
//! The crate is organized around a single [`crystal::CrystalElement`] contract:
//! each model supplies weights, string statistics and Kashiwara operators, and
//! the generic machinery in [`crystal`] produces deduplicated, deterministic
//! crystal graphs, validates the crystal axioms, and compares graphs against
//! the independent character oracles in [`characters`].

pub mod cartan;
pub mod characters;
pub mod crystal;
pub mod error;
pub mod linalg;
pub mod pyramids;
pub mod quiver;
pub mod tableaux_a;
pub mod tableaux_d;
pub mod walls;

pub use cartan::{CartanKind, CartanSpec, EpsWeight, WeightCoords};
pub use crystal::{
    generate, graphs_isomorphic, reduce_signature, tensor_apply, CrystalElement, CrystalGraph,
    Direction, SignedWord, Validator, Violation,
};
pub use error::{Error, Result};
pub use linalg::{Gf5, Mat, Rat, Scalar};
pub use quiver::{CrossMapSpace, QuiverRep};
