//! Exact rank-one decompositions of the matrix multiplication tensor.
//!
//! The library builds finite sets of unit vectors satisfying the 2-design
//! conditions (they sum to zero and their averaged outer products give a
//! multiple of the identity), turns each verified design into an explicit
//! rank-one decomposition of the order-3 matrix multiplication tensor, checks
//! every identity in exact arithmetic, and executes the resulting bilinear
//! algorithms, counting scalar multiplications along the way.
//!
//! The crate is `no_std`-compatible (`alloc` is required). Float math comes
//! from `std` by default; enable the `libm` feature instead for `no_std`
//! targets.

#![cfg_attr(not(feature = "std"), no_std)]

#[cfg(not(any(feature = "std", feature = "libm")))]
compile_error!("orbitmul-core needs either the `std` or the `libm` feature");

extern crate alloc;

pub mod bilinear;
pub mod decomp;
pub mod design;
mod error;
pub mod scalar;
pub mod tensor;

pub use bilinear::{naive_multiply, BilinearAlgorithm, MultCounter};
pub use decomp::{
    cyclic_sum_check, design_decomposition, diagonal_sum_check, mixed_cancellation_checks,
    strassen_reference, verify_decomposition, CheckOutcome, DecompReport, Decomposition,
    RankOneTerm, MIXED_PATTERNS,
};
pub use design::{
    orbit_design, polygon_design, polygon_design_exact, rotation_generator, simplex_design,
    symmetric_group_generators, triangle_design, Design, DesignReport, Embedding, GeneratorSet,
    OrbitOptions,
};
pub use error::Error;
pub use scalar::{ComplexFloat, QuadExt, Rational, Scalar, ScalarError};
pub use tensor::{Matrix, Tensor3, Vector};

// The numeric identity traits are part of this crate's public vocabulary
// (every Scalar implements them), so spare downstream crates the import.
pub use num_traits::{One, Zero};
