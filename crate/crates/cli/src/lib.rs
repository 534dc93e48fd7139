//! Command-line companion to `orbitmul-core`: JSON artifact files for
//! designs and decompositions, and seeded random test matrices.

pub mod artifact;
pub mod rng;
