//! p-local commensurability graphs of finite permutation groups.
//!
//! Two subgroups `A`, `B` of a finite group `G` are adjacent in `Γ_p(G)` when
//! `[A : A∩B]·[B : A∩B]` is a power of the prime `p`. This crate enumerates
//! subgroup lattices, builds these graphs, analyzes their components, and
//! checks structural facts about them, including the classified components
//! of `Γ_p(Alt_X)`.

pub mod alt;
mod bits;
pub mod cache;
pub mod catalog;
pub mod error;
pub mod graph;
pub mod group;
pub mod lattice;
pub mod perm;
pub mod verify;

pub use bits::BitSet;
pub use catalog::{parse_descriptor, GroupDescriptor};
pub use error::{Error, Result};
pub use graph::{CommGraph, ComponentReport};
pub use group::{FiniteGroup, Limits};
pub use lattice::{Index, Lattice, Subgroup};
pub use perm::Perm;
