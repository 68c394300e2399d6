//! Robustness tooling for controlled table-to-text generation.
//!
//! Generators for ToTTo-style data are trained on carefully chosen
//! highlight sets. Real users select cells less carefully: they grab headers,
//! neighbouring cells, random cells, or skip relevant ones. This crate
//! simulates those selections, builds the noise-augmented training and
//! evaluation sets, and scores generator output with BLEU-based robustness
//! summaries.
//!
//! * [`table`]: span-aware table model and grid resolution
//! * [`totto`]: JSONL records
//! * [`noise`]: the four noise operators and their invariants
//! * [`dataset`]: augmented and ablation datasets, trainer config
//! * [`linearize`]: tagged model inputs
//! * [`metrics`]: BLEU, noise average/variance, covered cells
//! * [`losses`]: LM / REINFORCE / mixed sequence losses
//! * [`compare`]: user vs reference selection analytics

pub mod compare;
pub mod dataset;
pub mod error;
pub mod linearize;
pub mod losses;
pub mod metrics;
pub mod noise;
pub mod table;
pub mod totto;

pub use error::{DatasetError, LossError, MetricError, RecordError, TableError};
pub use noise::{Amount, CorruptionRecord, NoiseOptions, NoiseParams, NoiseType};
pub use table::{resolve_grid, Cell, CellLoc, GridIndex, HighlightSet, Table};
pub use totto::{parse_record, serialize_record, Example, SentenceAnnotation};
