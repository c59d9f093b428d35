//! Exact computations in the free-boson vertex algebra `M(1)` with central
//! charge `c_{p,1}`: Fock-space mode actions, lattice exponentials and the
//! screening operators `Q = e^{α}_0` and `Q̃ = e^{-β}_0`, the `W(2, 2p-1)`
//! algebra `ker Q̃`, and its Zhu algebra `C[x, y] / <P(x, y)>`.
//!
//! Everything is computed with exact rationals at a finite graded
//! truncation.

pub mod error;
pub mod exactlin;
pub mod fock;
pub mod vertexops;
pub mod walgebra;
pub mod zhu;

pub use error::{Error, Result};
