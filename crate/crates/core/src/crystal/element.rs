use crate::cartan::{CartanSpec, WeightCoords};
use crate::error::Result;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Direction {
    Raise,
    Lower,
}

/// Contract every combinatorial model implements: weights, string statistics
/// and Kashiwara operators, plus a canonical serialization key used for
/// deduplication independent of the generation path.
pub trait CrystalElement: Clone + Send + Sync {
    /// Cartan data of the algebra this element lives over.
    fn cartan(&self) -> CartanSpec;

    /// Weight as (dominant part, drop vector).
    fn weight(&self) -> WeightCoords;

    /// (eps_i, phi_i).
    fn string_lengths(&self, i: usize) -> Result<(i64, i64)>;

    /// Lowering operator f~_i.
    fn lower(&self, i: usize) -> Result<Option<Self>>;

    /// Raising operator e~_i.
    fn raise(&self, i: usize) -> Result<Option<Self>>;

    /// Canonical key over the element's normal form.
    fn canonical_key(&self) -> String;

    /// JSON payload for graph serialization.
    fn payload(&self) -> serde_json::Value;

    /// Short model tag stored with every node ("tableaux", "dtableaux",
    /// "pyramid", "wall").
    fn model(&self) -> &'static str;

    /// Human-readable rendering used for DOT labels and text output.
    fn render(&self) -> String;
}
