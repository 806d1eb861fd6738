//! Double cosets of the n-symmetric group as labeled checker-board
//! surfaces, their category structure, and the checker TFT built from a
//! symbol tensor.

#![allow(clippy::needless_range_loop)]

pub mod board;
mod canon;
pub mod chips;
pub mod coset;
pub mod error;
pub mod exec;
pub mod perm;
pub mod quasidual;
pub mod sample;
pub mod tft;
pub mod verify;

pub use board::{CheckerBoard, ComponentStats, Vertex};
pub use chips::{chip_from_coset, chip_to_coset, compose_chips, thoma_character, thoma_vs_phi, Chip, ThomaParams};
pub use coset::{CanonicalForm, CosetBoard, Morphism};
pub use error::{Error, Result};
pub use perm::{compose, shift_involution, CycleType, GroupElement, Permutation};
pub use quasidual::{check_duality_n3, QuasidualComplex};
pub use tft::{operator, oracle_operator, phi, phi_super, MatrixOperator, SymbolTensor};
