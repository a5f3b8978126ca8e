//! Combinatorial level trees for height-function foliations of marked spheres.
//!
//! A [`LevelTree`] is a Reeb-style tree: extrema are leaves, saddles are
//! trivalent vertices whose ports are split into a *pair* side (the two wedge
//! circles) and a *join* side (the merged circle). Edges are monotone annuli or
//! disks and carry the marked points (punctures) that lie on them.
//!
//! On top of the data model the crate provides the saddle taxonomy and
//! admissibility predicate ([`predicates`]), the tree rewrites that create or
//! cancel saddles ([`moves`]), an exhaustive census of admissible trees
//! ([`census`]) and the bridge-number bookkeeping for tangle products
//! ([`accounting`]).
//!
//! Every valid level tree is assumed to be realizable by an embedded Morse
//! sphere respecting the heights; the library never constructs embeddings.

pub mod accounting;
pub mod canonical;
pub mod census;
pub mod dot;
mod error;
pub mod fixtures;
pub mod level_tree;
pub mod moves;
pub mod predicates;
mod topology;

pub use canonical::{canonical_form, canonical_representative, CanonicalCode};
pub use error::{Error, Result};
pub use level_tree::{
    flip, height_assignment, stats, validate, Edge, Endpoint, FoliationStats, Germ, LevelTree,
    MarkPoint, Port, Side, ValidationReport, Vertex, VertexKind, Violation, ViolationKind,
};
