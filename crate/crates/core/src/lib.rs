//! D-relations on finite sets.
//!
//! A D-relation is a quaternary relation `D(wx;yz)`, read "the pair wx is
//! separated from the pair yz". The leaves of any tree without binary inner
//! nodes carry one (path disjointness), and every finite D-set arises this
//! way. This crate checks the axioms, converts between D-sets and trees,
//! computes splittings, quantifier-free types and partial isomorphisms, and
//! analyses indiscernible windows.

pub mod axioms;
pub mod dset;
pub mod error;
pub mod generators;
pub mod homtypes;
pub mod indiscernible;
pub mod iso;
pub mod json;
pub mod splitting;
pub mod tree;

mod bits;

pub use axioms::{check_axioms, AxiomReport, Verdict};
pub use dset::{ColorId, DSet, ElementId, Quad};
pub use error::{Error, Result};
pub use iso::{are_isomorphic, are_isomorphic_with, IsoOptions};
pub use splitting::{Sector, Splitting, SplittingKind};
pub use tree::{LeafTree, NodeId};
