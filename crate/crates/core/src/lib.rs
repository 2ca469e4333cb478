//! Exact imset calculus for conditional-independence structures.

pub mod ci;
pub mod error;
pub mod face;
pub mod ground;
pub mod imset;
pub mod linalg;
pub mod markov;
pub mod membership;
pub mod relations;
pub mod supermodular;
pub mod verify;

pub use error::{ImsetError, Result};
pub use ground::{ElementaryIndex, GroundSet, Subset, Triplet};
pub use imset::{Configuration, Imset, Orientation};
