//! Flattening `(table, highlights)` into the tagged string a generator reads.
//!
//! ```text
//! <page_title> P </page_title> <section_title> Sec </section_title> <table>
//!   <cell> v <col_header> h </col_header> <row_header> r </row_header> </cell> ...
//! </table>
//! ```
//!
//! (on one line, tokens separated by single spaces). One `<cell>` block is
//! written per highlighted cell in (row, cell) order; its headers come from
//! [`headers_of`], column headers first.

use serde::Serialize;

use crate::error::TableError;
use crate::table::{headers_of, resolve_grid, CellLoc, GridIndex, HighlightSet, Rect};
use crate::totto::Example;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Mode {
    /// Only highlighted cells and their headers.
    #[default]
    Subtable,
    /// Every cell of the table.
    FullTable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearizedInput {
    pub text: String,
    pub source_id: i64,
    pub highlight_signature: Vec<[usize; 2]>,
}

pub fn linearize(example: &Example, highlights: &HighlightSet) -> Result<LinearizedInput, TableError> {
    linearize_with(example, highlights, Mode::Subtable)
}

pub fn linearize_with(example: &Example, highlights: &HighlightSet, mode: Mode) -> Result<LinearizedInput, TableError> {
    let grid = resolve_grid(&example.table)?;
    let cells = match mode {
        Mode::Subtable => highlights.sorted(),
        Mode::FullTable => example.table.locs().collect(),
    };

    let mut parts: Vec<&str> = vec![
        "<page_title>",
        &example.page_title,
        "</page_title>",
        "<section_title>",
        &example.section_title,
        "</section_title>",
        "<table>",
    ];
    for loc in &cells {
        push_cell(&mut parts, example, &grid, *loc);
    }
    parts.push("</table>");

    Ok(LinearizedInput {
        text: parts.join(" "),
        source_id: example.example_id,
        highlight_signature: highlights.sorted().into_iter().map(|l| [l.row, l.cell]).collect(),
    })
}

fn push_cell<'a>(parts: &mut Vec<&'a str>, example: &'a Example, grid: &GridIndex, loc: CellLoc) {
    let table = &example.table;
    let target = grid.rect_of(loc);
    parts.push("<cell>");
    parts.push(&table.cell(loc).value);
    for h in headers_of(grid, table, loc).iter() {
        let (open, close) = if is_column_header(&grid.rect_of(h), &target) {
            ("<col_header>", "</col_header>")
        } else {
            ("<row_header>", "</row_header>")
        };
        parts.push(open);
        parts.push(&table.cell(h).value);
        parts.push(close);
    }
    parts.push("</cell>");
}

fn is_column_header(header: &Rect, target: &Rect) -> bool {
    header.bottom < target.top
}
