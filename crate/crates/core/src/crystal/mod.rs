//! Model-independent crystal machinery: the signature/tensor-product rule,
//! graph generation with deduplication, axiom validation, and graph
//! isomorphism.

mod element;
mod generate;
mod graph;
mod signature;
mod validate;

pub use element::{CrystalElement, Direction};
pub use generate::generate;
pub use graph::{graphs_isomorphic, CrystalGraph, EdgeRec, GraphSpec, NodeRec};
pub use signature::{reduce_signature, tensor_apply, SignedFactor, SignedWord};
pub use validate::{Validator, Violation};
