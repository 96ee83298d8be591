//! Binary linear codes with arbitrary locality `r` and availability `t`.
//!
//! The parity-check matrix `H(m, t)`, `m = r + t`, is the incidence matrix
//! between the (t-1)-subsets and the t-subsets of `{1, ..., m}`. The code has
//! length `C(m, t)`, rate `r / (r + t)` and minimum distance `t + 1`, and every
//! coordinate has `t` disjoint repair groups of size `r`.
//!
//! Modules, bottom up:
//!
//! - [`gf2`]: bit-packed matrices and vectors over GF(2).
//! - [`combinatorics`]: lexicographic subset ranking.
//! - [`constructions`]: `H(m, t)`, its reduced form, the direct product and
//!   simplex codes, and 1-design checks.
//! - [`analysis`]: availability certificates, exact minimum distance,
//!   structural checks and rate bounds.
//! - [`codec`]: encoding, peeling repair and Gaussian-elimination decoding.
//! - [`sim`]: seeded repair and hot-read experiments.
//! - [`cli`]: the `lrc-avail` command line.

pub mod analysis;
pub mod cli;
pub mod codec;
pub mod combinatorics;
pub mod constructions;
pub mod gf2;
pub mod sim;
