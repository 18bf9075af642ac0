//! Exact, finite-scale executable versions of the classical constructions
//! around Suslin's problem.
//!
//! * [`ordinal`]: ordinals below `w^w` in Cantor normal form.
//! * [`rat`] and [`order`]: exact rationals and countable linear orders
//!   presented by an enumeration plus a comparison rule.
//! * [`backforth`]: the back-and-forth isomorphism, embeddings into `Q`, and
//!   extension of an isomorphism to Dedekind cuts.
//! * [`ratseq`]: bounded strictly increasing transfinite rational sequences.
//! * [`tree`]: finite trees with ordinal-labelled levels, antichains and
//!   normalization.
//! * [`aronszajn`]: a certified finite fragment of the special Aronszajn tree.
//! * [`suslin`]: the line/tree correspondence in both directions.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod aronszajn;
pub mod backforth;
pub mod order;
pub mod ordinal;
pub mod rat;
pub mod ratseq;
pub mod suslin;
pub mod tree;

pub use ordinal::Ordinal;
pub use rat::Rat;
