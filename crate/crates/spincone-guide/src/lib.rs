//! The book under `book/` is the narrative guide to `spincone`. mdBook
//! cannot run Rust snippets as tests, so each chapter is also included
//! here as a doc comment: `cargo test --doc -p spincone-guide` compiles
//! and runs every code block, keeping the book in sync with the library.
//!
//! Render the HTML book with `mdbook build book/` from the repository
//! root if you have mdBook installed; nothing in the test suite needs it.

#[doc = include_str!("../../../book/src/intro.md")]
pub mod intro {}

#[doc = include_str!("../../../book/src/charts.md")]
pub mod charts {}

#[doc = include_str!("../../../book/src/oracle.md")]
pub mod oracle {}

#[doc = include_str!("../../../book/src/clifford.md")]
pub mod clifford {}

#[doc = include_str!("../../../book/src/spinors.md")]
pub mod spinors {}

#[doc = include_str!("../../../book/src/warped.md")]
pub mod warped {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
