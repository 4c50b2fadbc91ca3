//! Equivariant homology, weight spectral sequences and additive invariants
//! for finite groups acting on filtered chain complexes over GF(2).

pub mod complexes;
pub mod corpus;
pub mod error;
pub mod gf2;
pub mod groups;
pub mod lfunctor;
pub mod model;
pub mod smithhat;
pub mod specseq;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
