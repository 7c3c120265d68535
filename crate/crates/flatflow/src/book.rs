//! The user guide, compiled into the API documentation.
//!
//! Each module below includes one chapter of the mdBook sources under
//! `book/src/` verbatim, so the rendered guide and these doc pages share a
//! single text — and, more importantly, `cargo test` executes every Rust
//! snippet in the book as a documentation test. The guide cannot drift from
//! the library without the build going red.
//!
//! Read it as a book (`mdbook serve book/`) or straight through here; the
//! chapter order below is the book's.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod overview {}

#[doc = include_str!("../../../book/src/potentials.md")]
pub mod construction {}

#[doc = include_str!("../../../book/src/associativity.md")]
pub mod associativity {}

#[doc = include_str!("../../../book/src/stabilization.md")]
pub mod stabilization {}

#[doc = include_str!("../../../book/src/hierarchy.md")]
pub mod flows {}

#[doc = include_str!("../../../book/src/identities.md")]
pub mod identities {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
