//! Random tables and fixture corpora shared by the integration suites.
#![allow(dead_code)]

pub mod bleu_cases;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use tabnoise::noise::{relevance, NoiseType};
use tabnoise::table::Rect;
use tabnoise::{resolve_grid, Cell, CellLoc, Example, HighlightSet, SentenceAnnotation, Table};

const WORDS: &[&str] = &[
    "",
    "2004",
    "2005",
    "Team",
    "Lotus",
    "Super Aguri",
    "14th",
    "3rd",
    "Year",
    "Ret",
    "Alice",
    "Bob",
    "12.5",
    "1,200",
    "Montréal",
    "–",
    "N/A",
    "Ferrari",
    "Points",
    "Round 1",
];

/// A random table that tiles a `height x width` grid with spanning cells,
/// plus the rectangle each generated cell was given.
pub fn random_table<R: Rng>(rng: &mut R, max_dim: usize) -> (Table, Vec<Vec<Rect>>) {
    let height = rng.random_range(1..=max_dim);
    let width = rng.random_range(1..=max_dim);
    let mut taken = vec![vec![false; width]; height];
    let mut rows: Vec<Vec<(Rect, Cell)>> = vec![Vec::new(); height];
    for r in 0..height {
        for c in 0..width {
            if taken[r][c] {
                continue;
            }
            let mut max_cs = 0;
            while c + max_cs < width && !taken[r][c + max_cs] && max_cs < 3 {
                max_cs += 1;
            }
            let col_span = if rng.random_bool(0.2) {
                rng.random_range(1..=max_cs)
            } else {
                1
            };
            let mut row_span = 1;
            if rng.random_bool(0.2) {
                let want = rng.random_range(1..=3);
                while row_span < want && r + row_span < height && (c..c + col_span).all(|cc| !taken[r + row_span][cc]) {
                    row_span += 1;
                }
            }
            for line in &mut taken[r..r + row_span] {
                line[c..c + col_span].fill(true);
            }
            let value = WORDS.choose(rng).unwrap().to_string();
            let cell = Cell {
                value,
                is_header: r == 0 || rng.random_bool(0.15),
                row_span,
                col_span,
            };
            let rect = Rect {
                top: r,
                left: c,
                bottom: r + row_span - 1,
                right: c + col_span - 1,
            };
            rows[r].push((rect, cell));
        }
    }
    let rects = rows.iter().map(|row| row.iter().map(|(r, _)| *r).collect()).collect();
    let cells = rows
        .into_iter()
        .map(|row| row.into_iter().map(|(_, c)| c).collect())
        .collect();
    (Table::new(cells).unwrap(), rects)
}

pub fn random_highlights<R: Rng>(rng: &mut R, table: &Table, max: usize) -> HighlightSet {
    let mut locs: Vec<CellLoc> = table.locs().collect();
    locs.shuffle(rng);
    let n = rng.random_range(0..=max.min(locs.len()));
    locs.into_iter().take(n).collect()
}

/// A sentence mentioning some highlighted values and some filler.
pub fn random_sentence<R: Rng>(rng: &mut R, table: &Table, h: &HighlightSet) -> String {
    let mut parts: Vec<String> = vec!["In".into()];
    for loc in h.iter() {
        if rng.random_bool(0.6) {
            parts.push(table.cell(loc).value.clone());
        }
    }
    parts.push(WORDS.choose(rng).unwrap().to_string());
    parts.push("finished .".into());
    parts.join(" ")
}

pub fn random_example<R: Rng>(rng: &mut R, id: i64, max_dim: usize) -> Example {
    let (table, _) = random_table(rng, max_dim);
    let highlights = random_highlights(rng, &table, 5);
    let sentence = random_sentence(rng, &table, &highlights);
    Example {
        example_id: id,
        page_title: format!("Page {id} – “quoted”"),
        section_title: WORDS.choose(rng).unwrap().to_string(),
        section_text: if rng.random_bool(0.5) {
            String::new()
        } else {
            "Some \"text\"\nwith newline".into()
        },
        webpage_url: format!("http://en.wikipedia.org/wiki/Page_{id}"),
        table,
        highlights,
        annotations: vec![SentenceAnnotation {
            original_sentence: format!("orig {sentence}"),
            sentence_after_deletion: sentence.clone(),
            sentence_after_ambiguity: sentence.clone(),
            final_sentence: sentence,
        }],
        overlap_subset: match rng.random_range(0..3) {
            0 => None,
            1 => Some(true),
            _ => Some(false),
        },
    }
}

/// Year/Team/Position corpus: every record has a header row and at least one
/// highlighted data cell, so N2 always has a candidate.
pub fn fixture_corpus(n: usize) -> Vec<Example> {
    let teams = ["Lotus", "Ferrari", "Super Aguri", "Minardi", "Jordan"];
    (0..n)
        .map(|i| {
            let rows_n = 2 + i % 4;
            let mut rows = vec![vec![Cell::header("Year"), Cell::header("Team"), Cell::header("Pos")]];
            for r in 0..rows_n {
                rows.push(vec![
                    Cell::new(format!("{}", 1990 + (i + r) % 30)),
                    Cell::new(teams[(i + r) % teams.len()]),
                    Cell::new(format!("{}th", 4 + (i * 7 + r) % 20)),
                ]);
            }
            let table = Table::new(rows).unwrap();
            let h: HighlightSet = [CellLoc::new(1, 0), CellLoc::new(1, 2), CellLoc::new(2, 1)]
                .into_iter()
                .take(1 + i % 3)
                .collect();
            let year = &table.cell(CellLoc::new(1, 0)).value;
            let pos = &table.cell(CellLoc::new(1, 2)).value;
            let sentence = format!("In {year} the driver finished {pos} .");
            Example {
                example_id: 1_000_000 + i as i64,
                table,
                page_title: format!("Driver {i}"),
                section_title: "Career".into(),
                section_text: String::new(),
                webpage_url: format!("http://en.wikipedia.org/wiki/Driver_{i}"),
                highlights: h,
                annotations: vec![SentenceAnnotation::uniform(sentence)],
                overlap_subset: Some(i % 2 == 0),
            }
        })
        .collect()
}

/// Pool membership recomputed by brute force over the grid occupancy, not
/// through the library's lookup functions.
pub fn brute_pool(e: &Example, t: NoiseType) -> Vec<CellLoc> {
    let grid = resolve_grid(&e.table).unwrap();
    let h = &e.highlights;
    let cells_at = |pred: &dyn Fn(usize, usize) -> bool| {
        let mut v: Vec<CellLoc> = Vec::new();
        for r in 0..grid.height() {
            for c in 0..grid.width() {
                if let Some(l) = grid.occupant_of(r, c) {
                    if pred(r, c) && !v.contains(&l) {
                        v.push(l);
                    }
                }
            }
        }
        v
    };
    match t {
        NoiseType::N1 => e.table.locs().filter(|l| !h.contains(*l)).collect(),
        NoiseType::N2 => {
            let mut out = Vec::new();
            for hl in h.iter() {
                let hr = grid.rect_of(hl);
                let above = cells_at(&|r, c| r < hr.top && c >= hr.left && c <= hr.right);
                let left = cells_at(&|r, c| c < hr.left && r >= hr.top && r <= hr.bottom);
                for l in above.into_iter().chain(left) {
                    let lr = grid.rect_of(l);
                    let strictly = lr.bottom < hr.top || lr.right < hr.left;
                    if e.table.cell(l).is_header && strictly && !h.contains(l) && !out.contains(&l) {
                        out.push(l);
                    }
                }
            }
            out
        }
        NoiseType::N3 => {
            let mut out = Vec::new();
            for hl in h.iter() {
                let hr = grid.rect_of(hl);
                for l in cells_at(&|r, c| (r >= hr.top && r <= hr.bottom) || (c >= hr.left && c <= hr.right)) {
                    if !e.table.cell(l).is_header && !h.contains(l) && !out.contains(&l) {
                        out.push(l);
                    }
                }
            }
            out
        }
        NoiseType::N4 => {
            let s = e.reference().unwrap();
            h.iter().filter(|l| !relevance(&e.table.cell(*l).value, s)).collect()
        }
    }
}
