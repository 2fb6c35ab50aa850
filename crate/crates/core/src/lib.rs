//! Reconstruction from binary (Walsh) measurements in boundary-corrected
//! Daubechies wavelet spaces.

// `!(a <= b)` is used on purpose so that NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dyadic;
pub mod error;
pub mod gramian;
pub mod grid;
pub mod io;
pub mod signals;
pub mod solver;
pub mod walsh;
pub mod wavelet;

pub use dyadic::{dyadic_add, to_dyadic, DyadicNumber};
pub use error::{Error, Result};
pub use gramian::{assemble, Gramian, Method};
pub use grid::GridSignal;
pub use signals::Signal;
pub use walsh::{WalshOrdering, WalshSpec};
pub use wavelet::{ScalingBasis, WaveletSpec};
