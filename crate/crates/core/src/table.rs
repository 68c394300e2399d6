//! Span-aware table model.
//!
//! ToTTo stores a table as a list of rows, each a list of cells that may
//! span several grid rows or columns. Before we can ask "which headers sit
//! above this cell" or "which cells share its row", the nested lists have to
//! be placed on an absolute grid. [`resolve_grid`] does that using the
//! standard HTML placement rules.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::TableError;

/// One table cell as stored in the corpus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub value: String,
    pub is_header: bool,
    pub row_span: usize,
    pub col_span: usize,
}

impl Cell {
    pub fn new(value: impl Into<String>) -> Self {
        Cell {
            value: value.into(),
            is_header: false,
            row_span: 1,
            col_span: 1,
        }
    }

    pub fn header(value: impl Into<String>) -> Self {
        Cell {
            is_header: true,
            ..Cell::new(value)
        }
    }

    pub fn with_spans(mut self, row_span: usize, col_span: usize) -> Self {
        self.row_span = row_span;
        self.col_span = col_span;
        self
    }
}

/// Position of a cell in the nested row/cell lists (not grid coordinates).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellLoc {
    pub row: usize,
    pub cell: usize,
}

impl CellLoc {
    pub const fn new(row: usize, cell: usize) -> Self {
        CellLoc { row, cell }
    }
}

impl From<(usize, usize)> for CellLoc {
    fn from((row, cell): (usize, usize)) -> Self {
        CellLoc { row, cell }
    }
}

impl std::fmt::Display for CellLoc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.row, self.cell)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    rows: Vec<Vec<Cell>>,
}

impl Table {
    /// Builds a table, rejecting an empty row list and zero spans.
    pub fn new(rows: Vec<Vec<Cell>>) -> Result<Self, TableError> {
        if rows.is_empty() {
            return Err(TableError::Empty);
        }
        for (r, row) in rows.iter().enumerate() {
            for (c, cell) in row.iter().enumerate() {
                if cell.row_span == 0 || cell.col_span == 0 {
                    return Err(TableError::ZeroSpan(CellLoc::new(r, c)));
                }
            }
        }
        Ok(Table { rows })
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn get(&self, loc: CellLoc) -> Option<&Cell> {
        self.rows.get(loc.row).and_then(|r| r.get(loc.cell))
    }

    /// Panics if `loc` is out of bounds.
    pub fn cell(&self, loc: CellLoc) -> &Cell {
        &self.rows[loc.row][loc.cell]
    }

    pub fn contains(&self, loc: CellLoc) -> bool {
        self.get(loc).is_some()
    }

    /// Every cell location in (row, cell) order.
    pub fn locs(&self) -> impl Iterator<Item = CellLoc> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| (0..row.len()).map(move |c| CellLoc::new(r, c)))
    }

    pub fn num_cells(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }
}

/// Inclusive rectangle in absolute grid coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub top: usize,
    pub left: usize,
    pub bottom: usize,
    pub right: usize,
}

impl Rect {
    pub fn rows_intersect(&self, other: &Rect) -> bool {
        self.top <= other.bottom && other.top <= self.bottom
    }

    pub fn cols_intersect(&self, other: &Rect) -> bool {
        self.left <= other.right && other.left <= self.right
    }

    pub fn height(&self) -> usize {
        self.bottom - self.top + 1
    }

    pub fn width(&self) -> usize {
        self.right - self.left + 1
    }
}

/// Resolved geometry of a [`Table`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridIndex {
    width: usize,
    height: usize,
    rects: Vec<Vec<Rect>>,
    occupants: Vec<Option<CellLoc>>,
}

impl GridIndex {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn rect_of(&self, loc: CellLoc) -> Rect {
        self.rects[loc.row][loc.cell]
    }

    /// The cell covering grid position `(row, col)`, if any. Ragged tables
    /// leave holes.
    pub fn occupant_of(&self, row: usize, col: usize) -> Option<CellLoc> {
        if row >= self.height || col >= self.width {
            return None;
        }
        self.occupants[row * self.width + col]
    }
}

/// Places every cell on an absolute grid.
///
/// Rows are scanned top to bottom; each cell goes to the leftmost column of
/// its grid row not already claimed by a row-spanning cell from above, and
/// claims its whole `row_span x col_span` rectangle.
pub fn resolve_grid(table: &Table) -> Result<GridIndex, TableError> {
    let mut occupied: Vec<Vec<Option<CellLoc>>> = Vec::new();
    let mut rects = Vec::with_capacity(table.rows.len());

    for (r, row) in table.rows.iter().enumerate() {
        let mut col = 0;
        let mut row_rects = Vec::with_capacity(row.len());
        for (c, cell) in row.iter().enumerate() {
            let loc = CellLoc::new(r, c);
            while is_taken(&occupied, r, col) {
                col += 1;
            }
            let rect = Rect {
                top: r,
                left: col,
                bottom: r + cell.row_span - 1,
                right: col + cell.col_span - 1,
            };
            for gr in rect.top..=rect.bottom {
                for gc in rect.left..=rect.right {
                    if let Some(other) = occupant(&occupied, gr, gc) {
                        return Err(TableError::Overlap {
                            cell: loc,
                            other,
                            row: gr,
                            col: gc,
                        });
                    }
                    if occupied.len() <= gr {
                        occupied.resize_with(gr + 1, Vec::new);
                    }
                    let line = &mut occupied[gr];
                    if line.len() <= gc {
                        line.resize(gc + 1, None);
                    }
                    line[gc] = Some(loc);
                }
            }
            row_rects.push(rect);
            col = rect.right + 1;
        }
        rects.push(row_rects);
    }

    let height = occupied.len().max(table.rows.len());
    let width = occupied.iter().map(Vec::len).max().unwrap_or(0);
    let mut occupants = vec![None; width * height];
    for (gr, line) in occupied.iter().enumerate() {
        for (gc, slot) in line.iter().enumerate() {
            occupants[gr * width + gc] = *slot;
        }
    }
    Ok(GridIndex {
        width,
        height,
        rects,
        occupants,
    })
}

fn occupant(occupied: &[Vec<Option<CellLoc>>], row: usize, col: usize) -> Option<CellLoc> {
    occupied.get(row).and_then(|l| l.get(col)).copied().flatten()
}

fn is_taken(occupied: &[Vec<Option<CellLoc>>], row: usize, col: usize) -> bool {
    occupant(occupied, row, col).is_some()
}

/// Insertion-ordered, duplicate-free set of cell locations.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HighlightSet {
    locs: Vec<CellLoc>,
}

impl HighlightSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns `false` if `loc` was already present.
    pub fn insert(&mut self, loc: CellLoc) -> bool {
        if self.locs.contains(&loc) {
            false
        } else {
            self.locs.push(loc);
            true
        }
    }

    pub fn remove(&mut self, loc: CellLoc) -> bool {
        match self.locs.iter().position(|l| *l == loc) {
            Some(i) => {
                self.locs.remove(i);
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, loc: CellLoc) -> bool {
        self.locs.contains(&loc)
    }

    pub fn len(&self) -> usize {
        self.locs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.locs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = CellLoc> + '_ {
        self.locs.iter().copied()
    }

    pub fn as_slice(&self) -> &[CellLoc] {
        &self.locs
    }

    /// Locations in (row, cell) order.
    pub fn sorted(&self) -> Vec<CellLoc> {
        let mut v = self.locs.clone();
        v.sort();
        v
    }

    pub fn is_subset(&self, other: &HighlightSet) -> bool {
        self.locs.iter().all(|l| other.contains(*l))
    }

    /// Same members, ignoring order.
    pub fn same_members(&self, other: &HighlightSet) -> bool {
        self.len() == other.len() && self.is_subset(other)
    }
}

impl FromIterator<CellLoc> for HighlightSet {
    fn from_iter<I: IntoIterator<Item = CellLoc>>(iter: I) -> Self {
        let mut set = HighlightSet::new();
        for loc in iter {
            set.insert(loc);
        }
        set
    }
}

impl<'a> IntoIterator for &'a HighlightSet {
    type Item = &'a CellLoc;
    type IntoIter = std::slice::Iter<'a, CellLoc>;

    fn into_iter(self) -> Self::IntoIter {
        self.locs.iter()
    }
}

/// All header cells that correspond to `loc`: column headers strictly above
/// it that overlap its columns (top to bottom), then row headers strictly to
/// its left that overlap its rows (left to right).
pub fn headers_of(grid: &GridIndex, table: &Table, loc: CellLoc) -> HighlightSet {
    let target = grid.rect_of(loc);
    let mut above = Vec::new();
    let mut left = Vec::new();
    for other in table.locs() {
        if other == loc || !table.cell(other).is_header {
            continue;
        }
        let rect = grid.rect_of(other);
        if rect.bottom < target.top && rect.cols_intersect(&target) {
            above.push((rect.top, rect.left, other));
        } else if rect.right < target.left && rect.rows_intersect(&target) {
            left.push((rect.left, rect.top, other));
        }
    }
    above.sort();
    left.sort();
    above.into_iter().chain(left).map(|(_, _, l)| l).collect()
}

/// Cells outside `highlights` that share a grid row or column range with
/// some highlighted cell, in (row, cell) order. Header cells are skipped
/// unless `include_headers` is set.
pub fn row_col_neighbors(
    grid: &GridIndex,
    table: &Table,
    highlights: &HighlightSet,
    include_headers: bool,
) -> HighlightSet {
    let anchors: Vec<Rect> = highlights.iter().map(|h| grid.rect_of(h)).collect();
    let member: HashSet<CellLoc> = highlights.iter().collect();
    table
        .locs()
        .filter(|l| !member.contains(l))
        .filter(|l| include_headers || !table.cell(*l).is_header)
        .filter(|l| {
            let rect = grid.rect_of(*l);
            anchors
                .iter()
                .any(|a| a.rows_intersect(&rect) || a.cols_intersect(&rect))
        })
        .collect()
}
