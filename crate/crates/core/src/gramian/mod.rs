//! Cross-Gramian between Walsh sampling functions and a scaling basis, and
//! Walsh decay of scaling-function pieces.

mod assemble;
mod decay;

pub use assemble::{assemble, assemble_with_basis, Gramian, Method};
pub use decay::{decay_profile, piece_transform, DecayProfile};
