//! The guide in `book/` is written for mdbook, which cannot run listings
//! that depend on a workspace crate. Each chapter is included here as the
//! docs of an empty module, so `cargo test --doc` compiles and runs every
//! `rust` block against the current `tabnoise`.

#[doc = include_str!("../../../book/src/intro.md")]
pub mod intro {}
#[doc = include_str!("../../../book/src/tables.md")]
pub mod tables {}
#[doc = include_str!("../../../book/src/records.md")]
pub mod records {}
#[doc = include_str!("../../../book/src/noise.md")]
pub mod noise {}
#[doc = include_str!("../../../book/src/datasets.md")]
pub mod datasets {}
#[doc = include_str!("../../../book/src/linearization.md")]
pub mod linearization {}
#[doc = include_str!("../../../book/src/metrics.md")]
pub mod metrics {}
#[doc = include_str!("../../../book/src/losses.md")]
pub mod losses {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
