//! Compressed suffix structures built from batched rank queries.
//!
//! The crate builds, for a text over an integer alphabet terminated by a
//! unique smallest sentinel `0`:
//!
//! - the Burrows-Wheeler transform ([`bwt`]),
//! - the compact suffix-tree topology ([`topology`]),
//! - the permuted LCP array ([`plcp`]),
//! - an FM-style index over the reversed text ([`fm`]),
//! - an on-disk format ([`format`]) and the end-to-end pipeline ([`index`]).
//!
//! The building blocks are batched rank structures over static
//! ([`batch_static`]) and growing ([`batch_dynamic`]) sequences, plus the
//! rank extensions in [`rank_ext`]. Brute-force reference implementations
//! live in [`oracle`].
//!
//! Rank is inclusive throughout: `rank(a, i)` counts occurrences of `a` in
//! `S[0..=i]`. Select is 1-based in `k`.

pub mod batch_dynamic;
pub mod batch_static;
pub mod bits;
pub mod bwt;
pub mod error;
pub mod fm;
pub mod format;
pub mod index;
pub mod listlabel;
pub mod oracle;
pub mod plcp;
pub mod rank_ext;
pub mod topology;
mod util;

pub use error::{Error, Result};

/// Alphabet symbol. Symbol `0` is reserved for the sentinel in texts.
pub type Symbol = u32;
