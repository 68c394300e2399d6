//! Comparing a user's highlight selection against the reference one.
//!
//! Each disagreement is labelled with the noise type it resembles: an extra
//! header of a reference cell looks like N2, an extra cell sharing a row or
//! column with the reference looks like N3, any other extra cell looks like
//! N1, and a missed reference cell looks like N4.

use serde::Serialize;

use crate::error::TableError;
use crate::noise::NoiseType;
use crate::table::{headers_of, resolve_grid, CellLoc, HighlightSet, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DiscrepancyKind {
    Extra,
    Missing,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub cell: [usize; 2],
    pub kind: DiscrepancyKind,
    /// `"n1-like"` .. `"n4-like"`.
    pub classification: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub precision: f64,
    pub recall: f64,
    pub discrepancies: Vec<Discrepancy>,
}

fn like(t: NoiseType) -> String {
    format!("{t}-like")
}

pub fn compare_highlights(
    table: &Table,
    reference: &HighlightSet,
    submitted: &HighlightSet,
) -> Result<Comparison, TableError> {
    let grid = resolve_grid(table)?;
    let hits = submitted.iter().filter(|l| reference.contains(*l)).count();
    let ratio = |den: usize| if den == 0 { 0.0 } else { hits as f64 / den as f64 };

    let ref_headers: HighlightSet = reference
        .iter()
        .flat_map(|r| headers_of(&grid, table, r).as_slice().to_vec())
        .collect();
    let shares_line = |loc: CellLoc| {
        let rect = grid.rect_of(loc);
        reference.iter().any(|r| {
            let rr = grid.rect_of(r);
            rr.rows_intersect(&rect) || rr.cols_intersect(&rect)
        })
    };

    let mut discrepancies = Vec::new();
    for loc in submitted.sorted() {
        if reference.contains(loc) {
            continue;
        }
        let t = if ref_headers.contains(loc) {
            NoiseType::N2
        } else if shares_line(loc) {
            NoiseType::N3
        } else {
            NoiseType::N1
        };
        discrepancies.push(Discrepancy {
            cell: [loc.row, loc.cell],
            kind: DiscrepancyKind::Extra,
            classification: like(t),
        });
    }
    for loc in reference.sorted() {
        if !submitted.contains(loc) {
            discrepancies.push(Discrepancy {
                cell: [loc.row, loc.cell],
                kind: DiscrepancyKind::Missing,
                classification: like(NoiseType::N4),
            });
        }
    }
    Ok(Comparison {
        precision: ratio(submitted.len()),
        recall: ratio(reference.len()),
        discrepancies,
    })
}
