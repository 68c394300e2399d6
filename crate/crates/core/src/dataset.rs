//! Noise-augmented datasets.
//!
//! Every builder maps clean examples to [`DatasetRecord`]s, one per output
//! line. Records whose operator could not change `H` are kept with
//! `applied = false`, which makes the size identities exact:
//! `|final| = 5|D|`, `|final - D_i| = 4|D|`, `|mix| = |D|`.

use std::fmt;
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{DatasetError, TableError};
use crate::noise::{
    add_mixture, check_invariants, corrupt, record_rng, resolve_and_union, Amount, NoiseOptions, NoiseParams,
    NoiseType, Violation,
};
use crate::table::HighlightSet;
use crate::totto::{serialize_tagged, Example};

/// Value of the `noise_type` key on dataset records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Tag {
    Clean,
    Noise(NoiseType),
    Mix,
}

impl Tag {
    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Clean => "clean",
            Tag::Noise(t) => t.as_str(),
            Tag::Mix => "mix",
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Tag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "clean" => Ok(Tag::Clean),
            "mix" => Ok(Tag::Mix),
            other => other.parse().map(Tag::Noise),
        }
    }
}

impl From<Tag> for String {
    fn from(t: Tag) -> String {
        t.as_str().to_string()
    }
}

impl TryFrom<String> for Tag {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetRecord {
    pub example: Example,
    pub tag: Tag,
    pub applied: bool,
}

impl DatasetRecord {
    pub fn to_line(&self) -> String {
        serialize_tagged(&self.example, self.tag, self.applied)
    }
}

/// Which dataset to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recipe {
    Single {
        noise_type: NoiseType,
        amount: Amount,
    },
    Final,
    FinalMinus(NoiseType),
    Mix,
    /// Mixture-mode dev corruption with `k` added cells.
    KSweep {
        k: usize,
    },
}

impl Recipe {
    pub fn name(&self) -> String {
        match self {
            Recipe::Single { noise_type, .. } => noise_type.to_string(),
            Recipe::Final => "final".into(),
            Recipe::FinalMinus(t) => format!("final-minus-{t}"),
            Recipe::Mix => "mix".into(),
            Recipe::KSweep { .. } => "ksweep".into(),
        }
    }
}

fn clean_block(examples: &[Example]) -> Vec<DatasetRecord> {
    examples
        .iter()
        .map(|e| DatasetRecord {
            example: e.clone(),
            tag: Tag::Clean,
            applied: false,
        })
        .collect()
}

fn corrupt_one(example: &Example, params: &NoiseParams, options: &NoiseOptions) -> Result<DatasetRecord, TableError> {
    let rec = corrupt(example, params, options)?;
    Ok(DatasetRecord {
        example: rec.corrupted_example(),
        tag: Tag::Noise(params.noise_type),
        applied: rec.applied,
    })
}

/// `D_i`: every example corrupted by one operator.
pub fn build_noisy_dataset(
    examples: &[Example],
    noise_type: NoiseType,
    amount: Amount,
    seed: u64,
    options: &NoiseOptions,
) -> Result<Vec<DatasetRecord>, TableError> {
    let params = NoiseParams {
        noise_type,
        amount,
        seed,
    };
    examples.par_iter().map(|e| corrupt_one(e, &params, options)).collect()
}

fn standard_block(
    examples: &[Example],
    noise_type: NoiseType,
    seed: u64,
    options: &NoiseOptions,
) -> Result<Vec<DatasetRecord>, TableError> {
    let p = NoiseParams::standard(noise_type, seed);
    build_noisy_dataset(examples, noise_type, p.amount, seed, options)
}

/// `D ∥ D1 ∥ D2 ∥ D3 ∥ D4` with k = 1 for N1-N3 and remove-all for N4.
pub fn build_final(examples: &[Example], seed: u64, options: &NoiseOptions) -> Result<Vec<DatasetRecord>, TableError> {
    build_final_without(examples, None, seed, options)
}

/// The final dataset with one noise block left out.
pub fn build_final_minus(
    examples: &[Example],
    dropped: NoiseType,
    seed: u64,
    options: &NoiseOptions,
) -> Result<Vec<DatasetRecord>, TableError> {
    build_final_without(examples, Some(dropped), seed, options)
}

fn build_final_without(
    examples: &[Example],
    dropped: Option<NoiseType>,
    seed: u64,
    options: &NoiseOptions,
) -> Result<Vec<DatasetRecord>, TableError> {
    let mut out = clean_block(examples);
    for t in NoiseType::ALL {
        if Some(t) != dropped {
            out.extend(standard_block(examples, t, seed, options)?);
        }
    }
    Ok(out)
}

/// Part (0..5) assigned to each input position: parts 0-3 get N1-N4, part 4
/// stays clean. Part sizes differ by at most one.
pub fn mix_partition(n: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut record_rng(seed, 0, "mix-partition"));
    let mut part = vec![0; n];
    for (rank, idx) in order.into_iter().enumerate() {
        part[idx] = rank % 5;
    }
    part
}

/// Same-size mixed dataset: a random fifth stays clean, the other four
/// fifths get one noise type each. Output keeps input order.
pub fn build_mix(examples: &[Example], seed: u64, options: &NoiseOptions) -> Result<Vec<DatasetRecord>, DatasetError> {
    if examples.len() < 5 {
        return Err(DatasetError::TooSmall(examples.len()));
    }
    let parts = mix_partition(examples.len(), seed);
    let out = examples
        .par_iter()
        .zip(parts.par_iter())
        .map(|(e, &part)| match NoiseType::from_index(part + 1) {
            Some(t) => corrupt_one(e, &NoiseParams::standard(t, seed), options),
            None => Ok(DatasetRecord {
                example: e.clone(),
                tag: Tag::Clean,
                applied: false,
            }),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(out)
}

/// Output of [`corrupt_dev_k`].
#[derive(Debug, Clone, PartialEq)]
pub struct KSweep {
    pub k: usize,
    /// `k` cells drawn from the union of the N1-N3 pools, tagged `mix`.
    pub mixture: Vec<DatasetRecord>,
    /// Pure-type variants N1..N4, each with amount `k`.
    pub by_type: Vec<(NoiseType, Vec<DatasetRecord>)>,
    /// Mixture records that received fewer than `k` cells.
    pub shortfall: usize,
}

pub fn corrupt_dev_k(
    examples: &[Example],
    k: usize,
    seed: u64,
    options: &NoiseOptions,
) -> Result<KSweep, DatasetError> {
    if k == 0 {
        return Err(DatasetError::ZeroK);
    }
    let mixed: Vec<(DatasetRecord, bool)> = examples
        .par_iter()
        .map(|e| {
            let (h, _) = add_mixture(e, k, seed, options)?;
            let added = h.len() - e.highlights.len();
            Ok((
                DatasetRecord {
                    example: e.with_highlights(h),
                    tag: Tag::Mix,
                    applied: added > 0,
                },
                added < k,
            ))
        })
        .collect::<Result<_, TableError>>()?;
    let shortfall = mixed.iter().filter(|(_, short)| *short).count();
    let by_type = NoiseType::ALL
        .into_iter()
        .map(|t| Ok((t, build_noisy_dataset(examples, t, Amount::Count(k), seed, options)?)))
        .collect::<Result<_, TableError>>()?;
    Ok(KSweep {
        k,
        mixture: mixed.into_iter().map(|(r, _)| r).collect(),
        by_type,
        shortfall,
    })
}

/// Builds any recipe. For [`Recipe::KSweep`] this returns the mixture set.
pub fn build(
    recipe: Recipe,
    examples: &[Example],
    seed: u64,
    options: &NoiseOptions,
) -> Result<Vec<DatasetRecord>, DatasetError> {
    Ok(match recipe {
        Recipe::Single { noise_type, amount } => build_noisy_dataset(examples, noise_type, amount, seed, options)?,
        Recipe::Final => build_final(examples, seed, options)?,
        Recipe::FinalMinus(t) => build_final_minus(examples, t, seed, options)?,
        Recipe::Mix => build_mix(examples, seed, options)?,
        Recipe::KSweep { k } => corrupt_dev_k(examples, k, seed, options)?.mixture,
    })
}

pub fn write_dataset<W: Write>(records: &[DatasetRecord], mut out: W) -> io::Result<()> {
    for r in records {
        writeln!(out, "{}", r.to_line())?;
    }
    out.flush()
}

/// Expected (source index, tag) for each output position of a recipe.
fn layout(recipe: Recipe, n: usize, seed: u64) -> Vec<(usize, Tag)> {
    let block = |tag: Tag| (0..n).map(move |i| (i, tag));
    match recipe {
        Recipe::Single { noise_type, .. } => block(Tag::Noise(noise_type)).collect(),
        Recipe::Final | Recipe::FinalMinus(_) => {
            let dropped = match recipe {
                Recipe::FinalMinus(t) => Some(t),
                _ => None,
            };
            let mut v: Vec<_> = block(Tag::Clean).collect();
            for t in NoiseType::ALL {
                if Some(t) != dropped {
                    v.extend(block(Tag::Noise(t)));
                }
            }
            v
        }
        Recipe::Mix => mix_partition(n, seed)
            .into_iter()
            .enumerate()
            .map(|(i, p)| (i, NoiseType::from_index(p + 1).map_or(Tag::Clean, Tag::Noise)))
            .collect(),
        Recipe::KSweep { .. } => block(Tag::Mix).collect(),
    }
}

fn amount_for(recipe: Recipe, noise_type: NoiseType) -> Amount {
    match recipe {
        Recipe::Single { amount, .. } => amount,
        _ => NoiseParams::standard(noise_type, 0).amount,
    }
}

/// Re-verification pass over a built dataset.
///
/// Checks the record count and tag layout implied by the recipe, recomputes
/// every operator pool from the clean source and checks the noise
/// invariants, and regenerates each noisy record to confirm it is exactly
/// what the seed produces.
pub fn verify_dataset(
    source: &[Example],
    recipe: Recipe,
    records: &[DatasetRecord],
    seed: u64,
    options: &NoiseOptions,
) -> Vec<Violation> {
    let expected = layout(recipe, source.len(), seed);
    let mut out = Vec::new();
    if expected.len() != records.len() {
        out.push(Violation {
            example_id: -1,
            noise_type: NoiseType::N1,
            message: format!("expected {} records, found {}", expected.len(), records.len()),
        });
        return out;
    }
    let per_record: Vec<Vec<Violation>> = expected
        .par_iter()
        .zip(records.par_iter())
        .map(|(&(idx, tag), rec)| verify_one(&source[idx], recipe, tag, rec, seed, options))
        .collect();
    out.extend(per_record.into_iter().flatten());
    out
}

fn verify_one(
    clean: &Example,
    recipe: Recipe,
    tag: Tag,
    rec: &DatasetRecord,
    seed: u64,
    options: &NoiseOptions,
) -> Vec<Violation> {
    let violation = |noise_type, message: String| Violation {
        example_id: clean.example_id,
        noise_type,
        message,
    };
    if rec.tag != tag {
        return vec![violation(
            NoiseType::N1,
            format!("tag {} where {} was expected", rec.tag, tag),
        )];
    }
    let same_content = rec.example.with_highlights(clean.highlights.clone()) == *clean;
    if !same_content {
        return vec![violation(NoiseType::N1, "table, metadata or reference changed".into())];
    }
    let h = &rec.example.highlights;
    match tag {
        Tag::Clean => {
            if h != &clean.highlights || rec.applied {
                vec![violation(NoiseType::N1, "clean record was altered".into())]
            } else {
                Vec::new()
            }
        }
        Tag::Noise(t) => {
            let amount = amount_for(recipe, t);
            let mut v = check_invariants(clean, t, amount, h, rec.applied, options);
            let params = NoiseParams {
                noise_type: t,
                amount,
                seed,
            };
            match corrupt(clean, &params, options) {
                Ok(again) if again.corrupted_highlights == *h => {}
                Ok(_) => v.push(violation(t, "record does not match its seeded regeneration".into())),
                Err(e) => v.push(violation(t, e.to_string())),
            }
            v
        }
        Tag::Mix => {
            let Recipe::KSweep { k } = recipe else {
                return vec![violation(NoiseType::N1, "mix tag outside a k-sweep".into())];
            };
            verify_mixture(clean, k, h, rec.applied, seed, options)
                .into_iter()
                .map(|m| violation(NoiseType::N1, m))
                .collect()
        }
    }
}

fn verify_mixture(
    clean: &Example,
    k: usize,
    h: &HighlightSet,
    applied: bool,
    seed: u64,
    options: &NoiseOptions,
) -> Vec<String> {
    let mut msgs = Vec::new();
    let pool = match resolve_and_union(clean, options) {
        Ok(p) => p,
        Err(e) => return vec![e.to_string()],
    };
    if !clean.highlights.is_subset(h) {
        msgs.push("clean highlights not contained in mixture result".into());
    }
    let added: Vec<_> = h.iter().filter(|l| !clean.highlights.contains(*l)).collect();
    if added.len() != k.min(pool.len()) {
        msgs.push(format!("added {} cells, expected {}", added.len(), k.min(pool.len())));
    }
    if added.iter().any(|l| !pool.contains(*l)) {
        msgs.push("added cell outside the union pool".into());
    }
    if applied == added.is_empty() {
        msgs.push("applied flag disagrees with added cells".into());
    }
    match add_mixture(clean, k, seed, options) {
        Ok((again, _)) if again == *h => {}
        Ok(_) => msgs.push("mixture record does not match its seeded regeneration".into()),
        Err(e) => msgs.push(e.to_string()),
    }
    msgs
}

/// Trainer hyperparameters, written as `key=value` lines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingRecipe {
    pub learning_rate: f64,
    pub batch_size: u32,
    pub lm_steps: u64,
    pub mix_steps: u64,
    pub optimizer: String,
}

impl Default for TrainingRecipe {
    fn default() -> Self {
        TrainingRecipe {
            learning_rate: 2e-5,
            batch_size: 32,
            lm_steps: 100_000,
            mix_steps: 50_000,
            optimizer: "adam".into(),
        }
    }
}

impl TrainingRecipe {
    pub fn to_config(&self) -> String {
        format!(
            "learning_rate={:e}\nbatch_size={}\nlm_steps={}\nmix_steps={}\noptimizer={}\n",
            self.learning_rate, self.batch_size, self.lm_steps, self.mix_steps, self.optimizer
        )
    }

    /// Parses `key=value` lines; blank lines and `#` comments are skipped,
    /// missing keys keep their defaults.
    pub fn from_config<R: BufRead>(reader: R) -> Result<Self, DatasetError> {
        let mut recipe = TrainingRecipe::default();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |reason: String| DatasetError::Config { line: i + 1, reason };
            let (key, value) = line.split_once('=').ok_or_else(|| err("missing '='".into()))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |_| err(format!("bad value {value:?} for {key}"));
            match key {
                "learning_rate" => {
                    recipe.learning_rate = value
                        .parse()
                        .map_err(|e: std::num::ParseFloatError| bad(e.to_string()))?
                }
                "batch_size" => {
                    recipe.batch_size = value.parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?
                }
                "lm_steps" => {
                    recipe.lm_steps = value.parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?
                }
                "mix_steps" => {
                    recipe.mix_steps = value.parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?
                }
                "optimizer" => recipe.optimizer = value.to_string(),
                other => return Err(err(format!("unknown key {other:?}"))),
            }
        }
        Ok(recipe)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.learning_rate.is_nan()
            || self.learning_rate <= 0.0
            || self.batch_size == 0
            || self.lm_steps == 0
            || self.mix_steps == 0
        {
            return Err("training recipe values must be positive".into());
        }
        Ok(())
    }
}

pub fn emit_training_config(recipe: &TrainingRecipe, path: &std::path::Path) -> Result<(), DatasetError> {
    std::fs::write(path, recipe.to_config())?;
    Ok(())
}
