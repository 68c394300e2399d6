//! Simulated user noise over highlight sets.
//!
//! Four operators turn a clean selection `H` into a noisy one:
//!
//! * [`NoiseType::N1`] adds `k` random cells from anywhere in the table.
//! * [`NoiseType::N2`] adds `k` headers of highlighted cells.
//! * [`NoiseType::N3`] adds `k` cells sharing a row or column with `H`.
//! * [`NoiseType::N4`] drops highlighted cells whose content does not appear
//!   in the reference sentence.
//!
//! Each record draws from its own ChaCha stream keyed on
//! `(seed, example_id, stream label)`, so results do not depend on the order
//! or thread in which records are processed.

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::TableError;
use crate::table::{headers_of, resolve_grid, row_col_neighbors, CellLoc, GridIndex, HighlightSet};
use crate::totto::Example;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseType {
    N1,
    N2,
    N3,
    N4,
}

impl NoiseType {
    pub const ALL: [NoiseType; 4] = [NoiseType::N1, NoiseType::N2, NoiseType::N3, NoiseType::N4];

    pub fn as_str(self) -> &'static str {
        match self {
            NoiseType::N1 => "n1",
            NoiseType::N2 => "n2",
            NoiseType::N3 => "n3",
            NoiseType::N4 => "n4",
        }
    }

    /// 1-based index.
    pub fn index(self) -> usize {
        self as usize + 1
    }

    pub fn from_index(i: usize) -> Option<NoiseType> {
        NoiseType::ALL.get(i.checked_sub(1)?).copied()
    }
}

impl fmt::Display for NoiseType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NoiseType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "n1" => Ok(NoiseType::N1),
            "n2" => Ok(NoiseType::N2),
            "n3" => Ok(NoiseType::N3),
            "n4" => Ok(NoiseType::N4),
            _ => Err(format!("unknown noise type {s:?}")),
        }
    }
}

/// How many cells an operator adds or removes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Amount {
    Count(usize),
    /// Remove every irrelevant cell. Only meaningful for N4; the additive
    /// operators treat it as "the whole pool".
    All,
}

impl Amount {
    fn take(self, available: usize) -> usize {
        match self {
            Amount::Count(k) => k.min(available),
            Amount::All => available,
        }
    }
}

impl fmt::Display for Amount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Amount::Count(k) => write!(f, "{k}"),
            Amount::All => f.write_str("all"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoiseParams {
    pub noise_type: NoiseType,
    pub amount: Amount,
    pub seed: u64,
}

impl NoiseParams {
    pub fn new(noise_type: NoiseType, k: usize, seed: u64) -> Self {
        NoiseParams {
            noise_type,
            amount: Amount::Count(k),
            seed,
        }
    }

    /// The augmentation defaults: one added cell for N1-N3, remove-all for N4.
    pub fn standard(noise_type: NoiseType, seed: u64) -> Self {
        let amount = match noise_type {
            NoiseType::N4 => Amount::All,
            _ => Amount::Count(1),
        };
        NoiseParams {
            noise_type,
            amount,
            seed,
        }
    }
}

/// Switches for choices the operators leave open.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseOptions {
    pub noise1_include_headers: bool,
    pub noise3_include_headers: bool,
    pub relevance_threshold: f64,
    /// Count a cell as relevant if it is relevant to any reference, not just
    /// the first.
    pub any_reference: bool,
}

impl Default for NoiseOptions {
    fn default() -> Self {
        NoiseOptions {
            noise1_include_headers: true,
            noise3_include_headers: false,
            relevance_threshold: DEFAULT_RELEVANCE_THRESHOLD,
            any_reference: false,
        }
    }
}

pub const DEFAULT_RELEVANCE_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub pool_size: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorruptionRecord {
    pub example: Example,
    pub corrupted_highlights: HighlightSet,
    pub noise_type: NoiseType,
    /// `false` when the operator left `H` unchanged.
    pub applied: bool,
    pub provenance: Provenance,
}

impl CorruptionRecord {
    pub fn corrupted_example(&self) -> Example {
        self.example.with_highlights(self.corrupted_highlights.clone())
    }
}

/// Deterministic per-record generator.
pub fn record_rng(seed: u64, example_id: i64, stream: &str) -> ChaCha8Rng {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update(example_id.to_le_bytes());
    hasher.update(stream.as_bytes());
    let digest: [u8; 32] = hasher.finalize().into();
    ChaCha8Rng::from_seed(digest)
}

/// Picks `n` members of `pool` without replacement, returned in pool order.
pub(crate) fn sample_from(pool: &HighlightSet, n: usize, rng: &mut ChaCha8Rng) -> Vec<CellLoc> {
    let mut picked = index::sample(rng, pool.len(), n).into_vec();
    picked.sort_unstable();
    picked.into_iter().map(|i| pool.as_slice()[i]).collect()
}

/// Lowercased whitespace tokens with leading and trailing punctuation
/// stripped; tokens that are all punctuation vanish.
pub fn content_tokens(text: &str) -> Vec<String> {
    text.split_whitespace()
        .map(|t| t.trim_matches(|c: char| !c.is_alphanumeric()).to_lowercase())
        .filter(|t| !t.is_empty())
        .collect()
}

/// Whether a cell's content is expressed in `sentence`: at least half of
/// the cell's distinct content tokens occur in the sentence.
pub fn relevance(cell_value: &str, sentence: &str) -> bool {
    relevance_with(cell_value, sentence, DEFAULT_RELEVANCE_THRESHOLD)
}

pub fn relevance_with(cell_value: &str, sentence: &str, threshold: f64) -> bool {
    let mut cell = content_tokens(cell_value);
    cell.sort();
    cell.dedup();
    if cell.is_empty() {
        return false;
    }
    let sent: std::collections::HashSet<String> = content_tokens(sentence).into_iter().collect();
    let hits = cell.iter().filter(|t| sent.contains(*t)).count();
    hits as f64 / cell.len() as f64 >= threshold
}

/// Highlighted cells whose content is not expressed in the reference.
pub fn irrelevant_cells(example: &Example, options: &NoiseOptions) -> HighlightSet {
    let refs: Vec<&str> = if options.any_reference {
        example.references().collect()
    } else {
        example.reference().into_iter().collect()
    };
    example
        .highlights
        .iter()
        .filter(|h| {
            let value = &example.table.cell(*h).value;
            !refs
                .iter()
                .any(|s| relevance_with(value, s, options.relevance_threshold))
        })
        .collect()
}

/// The candidate pool an operator draws from. For N4 this is the set of
/// irrelevant highlighted cells.
pub fn candidate_pool(
    example: &Example,
    grid: &GridIndex,
    noise_type: NoiseType,
    options: &NoiseOptions,
) -> HighlightSet {
    let table = &example.table;
    let h = &example.highlights;
    match noise_type {
        NoiseType::N1 => noise1_pool(example, options),
        NoiseType::N2 => h
            .iter()
            .flat_map(|loc| headers_of(grid, table, loc).as_slice().to_vec())
            .filter(|l| !h.contains(*l))
            .collect(),
        NoiseType::N3 => row_col_neighbors(grid, table, h, options.noise3_include_headers),
        NoiseType::N4 => irrelevant_cells(example, options),
    }
}

/// Union of the N1, N2 and N3 pools in (row, cell) order.
pub fn union_pool(example: &Example, grid: &GridIndex, options: &NoiseOptions) -> HighlightSet {
    let mut all: Vec<CellLoc> = [NoiseType::N1, NoiseType::N2, NoiseType::N3]
        .into_iter()
        .flat_map(|t| candidate_pool(example, grid, t, options).as_slice().to_vec())
        .collect();
    all.sort();
    all.into_iter().collect()
}

pub fn resolve_and_union(example: &Example, options: &NoiseOptions) -> Result<HighlightSet, TableError> {
    let grid = resolve_grid(&example.table)?;
    Ok(union_pool(example, &grid, options))
}

fn noise1_pool(example: &Example, options: &NoiseOptions) -> HighlightSet {
    let table = &example.table;
    table
        .locs()
        .filter(|l| !example.highlights.contains(*l))
        .filter(|l| options.noise1_include_headers || !table.cell(*l).is_header)
        .collect()
}

fn add_from_pool(example: &Example, params: &NoiseParams, pool: HighlightSet, stream: &str) -> CorruptionRecord {
    let mut rng = record_rng(params.seed, example.example_id, stream);
    let n = params.amount.take(pool.len());
    let added = sample_from(&pool, n, &mut rng);
    let mut corrupted = example.highlights.clone();
    for loc in &added {
        corrupted.insert(*loc);
    }
    CorruptionRecord {
        example: example.clone(),
        corrupted_highlights: corrupted,
        noise_type: params.noise_type,
        applied: !added.is_empty(),
        provenance: Provenance {
            seed: params.seed,
            pool_size: pool.len(),
        },
    }
}

pub fn noise1_add_random(example: &Example, params: &NoiseParams, options: &NoiseOptions) -> CorruptionRecord {
    let pool = noise1_pool(example, options);
    add_from_pool(example, params, pool, params.noise_type.as_str())
}

pub fn noise2_add_headers(
    example: &Example,
    params: &NoiseParams,
    options: &NoiseOptions,
) -> Result<CorruptionRecord, TableError> {
    let grid = resolve_grid(&example.table)?;
    let pool = candidate_pool(example, &grid, NoiseType::N2, options);
    Ok(add_from_pool(example, params, pool, params.noise_type.as_str()))
}

pub fn noise3_add_similar(
    example: &Example,
    params: &NoiseParams,
    options: &NoiseOptions,
) -> Result<CorruptionRecord, TableError> {
    let grid = resolve_grid(&example.table)?;
    let pool = candidate_pool(example, &grid, NoiseType::N3, options);
    Ok(add_from_pool(example, params, pool, params.noise_type.as_str()))
}

/// Removes irrelevant highlighted cells, never leaving `H` empty.
pub fn noise4_remove_irrelevant(example: &Example, params: &NoiseParams, options: &NoiseOptions) -> CorruptionRecord {
    let irrelevant = irrelevant_cells(example, options);
    let n = params.amount.take(irrelevant.len());
    let mut rng = record_rng(params.seed, example.example_id, params.noise_type.as_str());
    let removed = sample_from(&irrelevant, n, &mut rng);

    let mut corrupted = example.highlights.clone();
    for loc in &removed {
        corrupted.remove(*loc);
    }
    let applied = !removed.is_empty() && !corrupted.is_empty();
    CorruptionRecord {
        example: example.clone(),
        corrupted_highlights: if applied { corrupted } else { example.highlights.clone() },
        noise_type: params.noise_type,
        applied,
        provenance: Provenance {
            seed: params.seed,
            pool_size: irrelevant.len(),
        },
    }
}

pub fn corrupt(
    example: &Example,
    params: &NoiseParams,
    options: &NoiseOptions,
) -> Result<CorruptionRecord, TableError> {
    match params.noise_type {
        NoiseType::N1 => Ok(noise1_add_random(example, params, options)),
        NoiseType::N2 => noise2_add_headers(example, params, options),
        NoiseType::N3 => noise3_add_similar(example, params, options),
        NoiseType::N4 => Ok(noise4_remove_irrelevant(example, params, options)),
    }
}

/// Adds `k` cells drawn from the union of the N1-N3 pools. Returns the
/// corrupted set, whether anything was added, and the pool size.
pub fn add_mixture(
    example: &Example,
    k: usize,
    seed: u64,
    options: &NoiseOptions,
) -> Result<(HighlightSet, usize), TableError> {
    let pool = resolve_and_union(example, options)?;
    let mut rng = record_rng(seed, example.example_id, "mix");
    let added = sample_from(&pool, k.min(pool.len()), &mut rng);
    let mut corrupted = example.highlights.clone();
    for loc in added {
        corrupted.insert(loc);
    }
    Ok((corrupted, pool.len()))
}

/// A broken noise invariant found by [`check_invariants`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub example_id: i64,
    pub noise_type: NoiseType,
    pub message: String,
}

/// Recomputes the operator's pool from the clean example and checks that
/// `corrupted` is a legal output for it. Does not check which members were
/// sampled.
pub fn check_invariants(
    clean: &Example,
    noise_type: NoiseType,
    amount: Amount,
    corrupted: &HighlightSet,
    applied: bool,
    options: &NoiseOptions,
) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut fail = |msg: String| {
        out.push(Violation {
            example_id: clean.example_id,
            noise_type,
            message: msg,
        })
    };
    let h = &clean.highlights;
    if let Some(bad) = corrupted.iter().find(|l| !clean.table.contains(*l)) {
        fail(format!("cell {bad} is outside the table"));
        return out;
    }
    let grid = match resolve_grid(&clean.table) {
        Ok(g) => g,
        Err(e) => {
            fail(format!("table does not resolve: {e}"));
            return out;
        }
    };
    let pool = candidate_pool(clean, &grid, noise_type, options);

    match noise_type {
        NoiseType::N1 | NoiseType::N2 | NoiseType::N3 => {
            if !h.is_subset(corrupted) {
                fail("clean highlights not contained in result".into());
            }
            let added: Vec<CellLoc> = corrupted.iter().filter(|l| !h.contains(*l)).collect();
            let expected = amount.take(pool.len());
            if added.len() != expected {
                fail(format!("added {} cells, expected {expected}", added.len()));
            }
            if applied != !added.is_empty() {
                fail(format!(
                    "applied flag {applied} disagrees with {} added cells",
                    added.len()
                ));
            }
            for loc in &added {
                if !pool.contains(*loc) {
                    fail(format!("added cell {loc} is not in the candidate pool"));
                }
                if noise_type == NoiseType::N2 {
                    let is_header_of_h = clean.table.cell(*loc).is_header
                        && h.iter().any(|x| headers_of(&grid, &clean.table, x).contains(*loc));
                    if !is_header_of_h {
                        fail(format!("added cell {loc} is not a header of any highlight"));
                    }
                }
                if noise_type == NoiseType::N3 {
                    let r = grid.rect_of(*loc);
                    let shares = h.iter().any(|x| {
                        let hr = grid.rect_of(x);
                        hr.rows_intersect(&r) || hr.cols_intersect(&r)
                    });
                    if !shares {
                        fail(format!("added cell {loc} shares no row or column with H"));
                    }
                }
            }
        }
        NoiseType::N4 => {
            if !corrupted.is_subset(h) {
                fail("result is not a subset of the clean highlights".into());
            }
            if corrupted.is_empty() && !h.is_empty() {
                fail("result is empty".into());
            }
            let removed: Vec<CellLoc> = h.iter().filter(|l| !corrupted.contains(*l)).collect();
            for loc in &removed {
                if !pool.contains(*loc) {
                    fail(format!("removed cell {loc} is relevant to the reference"));
                }
            }
            let wanted = amount.take(pool.len());
            let guarded = wanted == h.len() && wanted > 0;
            let expected = if guarded { 0 } else { wanted };
            if removed.len() != expected {
                fail(format!("removed {} cells, expected {expected}", removed.len()));
            }
            if applied != !removed.is_empty() {
                fail(format!(
                    "applied flag {applied} disagrees with {} removed cells",
                    removed.len()
                ));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::{Cell, Table};
    use crate::totto::SentenceAnnotation;

    fn year_team(h: &[(usize, usize)], sentence: &str) -> Example {
        Example {
            example_id: 42,
            table: Table::new(vec![
                vec![Cell::header("Year"), Cell::header("Team")],
                vec![Cell::new("2004"), Cell::new("A")],
                vec![Cell::new("2005"), Cell::new("B")],
            ])
            .unwrap(),
            page_title: "P".into(),
            section_title: "Sec".into(),
            section_text: String::new(),
            webpage_url: String::new(),
            highlights: h.iter().map(|&p| CellLoc::from(p)).collect(),
            annotations: vec![SentenceAnnotation::uniform(sentence)],
            overlap_subset: None,
        }
    }

    const OPTS: NoiseOptions = NoiseOptions {
        noise1_include_headers: true,
        noise3_include_headers: false,
        relevance_threshold: 0.5,
        any_reference: false,
    };

    fn loc(r: usize, c: usize) -> CellLoc {
        CellLoc::new(r, c)
    }

    #[test]
    fn zero_k_is_identity() {
        let e = year_team(&[(1, 0)], "x");
        for t in [NoiseType::N1, NoiseType::N2, NoiseType::N3] {
            let r = corrupt(&e, &NoiseParams::new(t, 0, 3), &OPTS).unwrap();
            assert_eq!(r.corrupted_highlights, e.highlights);
            assert!(!r.applied);
        }
    }

    #[test]
    fn noise1_adds_one_from_pool() {
        let e = year_team(&[(1, 0)], "x");
        let pool = [loc(0, 0), loc(0, 1), loc(1, 1), loc(2, 0), loc(2, 1)];
        for seed in 0..50 {
            let r = noise1_add_random(&e, &NoiseParams::new(NoiseType::N1, 1, seed), &OPTS);
            assert_eq!(r.corrupted_highlights.len(), 2);
            assert_eq!(r.corrupted_highlights.as_slice()[0], loc(1, 0));
            assert!(pool.contains(&r.corrupted_highlights.as_slice()[1]));
            assert_eq!(r.provenance.pool_size, 5);
        }
    }

    #[test]
    fn noise1_full_table_has_empty_pool() {
        let all: Vec<(usize, usize)> = (0..3).flat_map(|r| (0..2).map(move |c| (r, c))).collect();
        let e = year_team(&all, "x");
        let r = noise1_add_random(&e, &NoiseParams::new(NoiseType::N1, 1, 0), &OPTS);
        assert!(!r.applied);
        assert_eq!(r.corrupted_highlights, e.highlights);
    }

    #[test]
    fn noise1_can_exclude_headers() {
        let e = year_team(&[(1, 0)], "x");
        let opts = NoiseOptions {
            noise1_include_headers: false,
            ..OPTS
        };
        let g = resolve_grid(&e.table).unwrap();
        let pool = candidate_pool(&e, &g, NoiseType::N1, &opts);
        assert_eq!(pool.as_slice(), &[loc(1, 1), loc(2, 0), loc(2, 1)]);
    }

    #[test]
    fn noise2_single_header() {
        let e = year_team(&[(1, 0)], "x");
        let r = noise2_add_headers(&e, &NoiseParams::new(NoiseType::N2, 1, 9), &OPTS).unwrap();
        assert_eq!(r.corrupted_highlights.as_slice(), &[loc(1, 0), loc(0, 0)]);
        assert!(r.applied);
    }

    #[test]
    fn noise2_no_headers() {
        let mut e = year_team(&[(1, 0)], "x");
        e.table = Table::new(vec![vec![Cell::new("a"), Cell::new("b")]]).unwrap();
        e.highlights = [loc(0, 0)].into_iter().collect();
        let r = noise2_add_headers(&e, &NoiseParams::new(NoiseType::N2, 1, 9), &OPTS).unwrap();
        assert!(!r.applied);
    }

    #[test]
    fn noise3_same_row_or_column() {
        let e = year_team(&[(1, 0)], "x");
        for seed in 0..30 {
            let r = noise3_add_similar(&e, &NoiseParams::new(NoiseType::N3, 1, seed), &OPTS).unwrap();
            let added = r.corrupted_highlights.as_slice()[1];
            assert!(added == loc(1, 1) || added == loc(2, 0));
        }
    }

    #[test]
    fn noise3_single_column() {
        let mut e = year_team(&[], "x");
        e.table = Table::new(vec![
            vec![Cell::header("Year")],
            vec![Cell::new("2001")],
            vec![Cell::new("2002")],
            vec![Cell::new("2003")],
        ])
        .unwrap();
        e.highlights = [loc(1, 0)].into_iter().collect();
        let g = resolve_grid(&e.table).unwrap();
        let pool = candidate_pool(&e, &g, NoiseType::N3, &OPTS);
        assert_eq!(pool.as_slice(), &[loc(2, 0), loc(3, 0)]);
    }

    #[test]
    fn relevance_examples() {
        assert!(relevance("2004", "In 2004 the team finished 14th."));
        assert!(!relevance("", "anything"));
        assert!(relevance(
            "Super Aguri Fernandez Racing",
            "drove for Super Aguri Fernandez Racing in 2005"
        ));
        assert!(!relevance("B", "In 2004 the team finished 14th."));
        assert!(!relevance("--", "-- appears"));
        // half the tokens is enough
        assert!(relevance("Team Lotus", "Lotus won."));
        assert!(!relevance("Team Lotus Racing", "Lotus won."));
        assert!(relevance_with("Team Lotus Racing", "Lotus won.", 0.3));
    }

    #[test]
    fn noise4_removes_irrelevant() {
        let e = year_team(&[(1, 0), (2, 1)], "In 2004 the team finished 14th.");
        let r = noise4_remove_irrelevant(&e, &NoiseParams::standard(NoiseType::N4, 0), &OPTS);
        assert_eq!(r.corrupted_highlights.as_slice(), &[loc(1, 0)]);
        assert!(r.applied);
    }

    #[test]
    fn noise4_all_relevant_or_all_irrelevant() {
        let e = year_team(&[(1, 0)], "In 2004 the team finished 14th.");
        let r = noise4_remove_irrelevant(&e, &NoiseParams::standard(NoiseType::N4, 0), &OPTS);
        assert!(!r.applied);
        let e = year_team(&[(1, 1), (2, 1)], "In 2004 the team finished 14th.");
        let r = noise4_remove_irrelevant(&e, &NoiseParams::standard(NoiseType::N4, 0), &OPTS);
        assert!(!r.applied);
        assert_eq!(r.corrupted_highlights, e.highlights);
        // an explicit k that leaves something behind is fine
        let r = noise4_remove_irrelevant(&e, &NoiseParams::new(NoiseType::N4, 1, 0), &OPTS);
        assert!(r.applied);
        assert_eq!(r.corrupted_highlights.len(), 1);
    }

    #[test]
    fn any_reference_flag() {
        let mut e = year_team(&[(1, 0), (2, 1)], "In 2004 the team finished 14th.");
        e.annotations.push(SentenceAnnotation::uniform("Team B was there."));
        let first_only = irrelevant_cells(&e, &OPTS);
        assert_eq!(first_only.as_slice(), &[loc(2, 1)]);
        let any = irrelevant_cells(
            &e,
            &NoiseOptions {
                any_reference: true,
                ..OPTS
            },
        );
        assert!(any.is_empty());
    }

    #[test]
    fn deterministic_per_record() {
        let e = year_team(&[(1, 0)], "x");
        let p = NoiseParams::new(NoiseType::N1, 2, 77);
        assert_eq!(noise1_add_random(&e, &p, &OPTS), noise1_add_random(&e, &p, &OPTS));
    }

    #[test]
    fn invariant_checker_catches_bad_output() {
        let e = year_team(&[(1, 0)], "x");
        let bad: HighlightSet = [loc(1, 0), loc(2, 1)].into_iter().collect();
        let v = check_invariants(&e, NoiseType::N3, Amount::Count(1), &bad, true, &OPTS);
        assert!(!v.is_empty());
        let good: HighlightSet = [loc(1, 0), loc(2, 0)].into_iter().collect();
        assert!(check_invariants(&e, NoiseType::N3, Amount::Count(1), &good, true, &OPTS).is_empty());
    }

    #[test]
    fn noise_type_labels() {
        for t in NoiseType::ALL {
            assert_eq!(t.as_str().parse::<NoiseType>().unwrap(), t);
            assert_eq!(NoiseType::from_index(t.index()), Some(t));
        }
        assert_eq!(NoiseType::from_index(0), None);
    }
}
