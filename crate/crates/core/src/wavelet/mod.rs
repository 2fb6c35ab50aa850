//! Daubechies filters, scaling-function evaluation, and orthonormal
//! boundary-corrected scaling bases on `[0,1]^d`.

mod basis;
mod cascade;
mod edge;
mod filter;
mod pieces;

pub use basis::{AxisKind, ScalingBasis, SparseColumn, WaveletSpec};
pub use cascade::{cascade, ScalingFunction};
pub use edge::{edge_functions, edge_stencil, EdgeFunctions, Side};
pub use filter::{daub_filter, DaubFilter, MAX_ORDER};
pub use pieces::{split_pieces, PieceSet};
