//! Finite groups given by multiplication tables, their subgroup lattices,
//! formations and subgroup embedding properties, plus a checker that runs
//! structural statements over a corpus of small groups.

pub mod bitset;
pub mod cache;
pub mod cli;
pub mod context;
pub mod embedding;
pub mod error;
pub mod expr;
pub mod formation;
pub mod group;
pub mod lattice;
pub mod named;
pub mod numbers;
pub mod quotient;
pub mod subgroup;
pub mod theorems;

pub use bitset::ElemSet;
pub use error::{Error, Result};
pub use group::{Caps, Group};
pub use lattice::SubgroupLattice;
pub use subgroup::Subgroup;
