//! Colored modular operads over sets: decorated graphs and the free-graph monad, free operads on
//! graphs, finite tabulated operads, and maps between them.

pub mod decorated;
pub mod free;
pub mod maps;
pub mod tabulated;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::involutive::{ColoredObject, InvolutiveSet, Name};
use crate::substitution::SubstitutionError;

pub use decorated::{decorated_equal, monad_mult, monad_unit, relabel_decorated, Deco, DecoratedGraph};
pub use free::{embedding_to_element, free_elements, FreeModularOperad};
pub use maps::{compose_operad_maps, j_functor, jk_homset, maps_from_free, OperadMap};
pub use tabulated::{biased_gamma, check_algebra_laws, reindex, TabulatedOperad};

/// An operation, written canonically relative to the profile of its fiber.
pub type Elem = String;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperadError {
    #[error("colors disagree: {0}")]
    ColorMismatch(String),
    #[error("element `{0}` is not in the expected fiber")]
    NotInFiber(String),
    #[error("malformed decorated graph: {0}")]
    Shape(String),
    #[error("malformed element `{0}`")]
    BadElement(String),
    #[error("arity {0} is beyond the tabulated range")]
    ArityBeyondTable(usize),
    #[error("no table entry for {0}")]
    MissingEntry(String),
    #[error("contraction orders disagree: {0}")]
    OrderDependence(String),
    #[error("no site object or active map for {0}")]
    MissingActiveMap(String),
    #[error("segal condition fails: {0}")]
    SegalFailure(String),
    #[error(transparent)]
    Substitution(#[from] SubstitutionError),
}

/// A colored modular operad presented by its fibers, its bijection action, and its structure map.
///
/// Implementations are pure: equal inputs give equal outputs.
pub trait Operad {
    fn colors(&self) -> &InvolutiveSet;

    /// The sorted fiber at a profile; may be truncated for infinite operads.
    fn fiber(&self, profile: &ColoredObject) -> Result<Vec<Elem>, OperadError>;

    /// Transports `x` along a color-preserving bijection `f: from -> to`.
    fn relabel(
        &self,
        x: &Elem,
        from: &ColoredObject,
        f: &BTreeMap<Name, Name>,
        to: &ColoredObject,
    ) -> Result<Elem, OperadError>;

    /// The structure map on a graph decorated by atoms of this operad.
    fn gamma(&self, d: &DecoratedGraph) -> Result<Elem, OperadError>;
}
