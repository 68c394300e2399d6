//! ToTTo JSONL records.
//!
//! Parsing keeps text untouched and highlight order intact; duplicate
//! highlight pairs collapse to their first occurrence and are counted.
//! Serialization writes one line of JSON with keys in sorted order, so
//! `parse_record(serialize_record(e)) == e` for every valid example.

use std::io::BufRead;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::Tag;
use crate::error::RecordError;
use crate::table::{resolve_grid, Cell, CellLoc, HighlightSet, Table};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceAnnotation {
    pub original_sentence: String,
    pub sentence_after_deletion: String,
    pub sentence_after_ambiguity: String,
    pub final_sentence: String,
}

impl SentenceAnnotation {
    /// Annotation whose every stage equals `sentence`.
    pub fn uniform(sentence: impl Into<String>) -> Self {
        let s = sentence.into();
        SentenceAnnotation {
            original_sentence: s.clone(),
            sentence_after_deletion: s.clone(),
            sentence_after_ambiguity: s.clone(),
            final_sentence: s,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Example {
    pub example_id: i64,
    pub table: Table,
    pub page_title: String,
    pub section_title: String,
    pub section_text: String,
    pub webpage_url: String,
    pub highlights: HighlightSet,
    pub annotations: Vec<SentenceAnnotation>,
    pub overlap_subset: Option<bool>,
}

impl Example {
    /// The reference sentence: `final_sentence` of the first annotation.
    pub fn reference(&self) -> Option<&str> {
        self.annotations.first().map(|a| a.final_sentence.as_str())
    }

    pub fn references(&self) -> impl Iterator<Item = &str> {
        self.annotations.iter().map(|a| a.final_sentence.as_str())
    }

    pub fn with_highlights(&self, highlights: HighlightSet) -> Example {
        Example {
            highlights,
            ..self.clone()
        }
    }
}

/// One parsed line: the example, dataset tags if present, and how many
/// duplicate highlight pairs were dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedRecord {
    pub example: Example,
    pub tag: Option<Tag>,
    pub applied: Option<bool>,
    pub duplicate_highlights: usize,
}

#[derive(Deserialize)]
struct RawCell {
    value: String,
    is_header: bool,
    row_span: usize,
    column_span: usize,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawId {
    Int(i64),
    Text(String),
}

#[derive(Deserialize)]
struct RawRecord {
    table: Vec<Vec<RawCell>>,
    table_webpage_url: String,
    table_page_title: String,
    table_section_title: String,
    table_section_text: String,
    highlighted_cells: Vec<(usize, usize)>,
    example_id: RawId,
    sentence_annotations: Vec<SentenceAnnotation>,
    #[serde(default)]
    overlap_subset: Option<bool>,
    #[serde(default)]
    noise_type: Option<String>,
    #[serde(default)]
    noise_applied: Option<bool>,
}

pub fn parse_record(line: &str) -> Result<Example, RecordError> {
    parse_line(line).map(|p| p.example)
}

/// Parses one JSONL line, keeping the dataset tag keys and the duplicate
/// highlight count.
pub fn parse_line(line: &str) -> Result<ParsedRecord, RecordError> {
    let raw: RawRecord = serde_json::from_str(line)?;
    let example_id = match raw.example_id {
        RawId::Int(i) => i,
        RawId::Text(s) => s
            .parse()
            .map_err(|_| RecordError::Parse(format!("example_id {s:?} is not an integer")))?,
    };
    let rows = raw
        .table
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|c| Cell {
                    value: c.value,
                    is_header: c.is_header,
                    row_span: c.row_span,
                    col_span: c.column_span,
                })
                .collect()
        })
        .collect();
    let table = Table::new(rows)?;
    // every downstream stage needs the grid; reject unplaceable spans here
    resolve_grid(&table)?;

    let mut highlights = HighlightSet::new();
    let mut duplicate_highlights = 0;
    for (row, cell) in raw.highlighted_cells {
        let loc = CellLoc::new(row, cell);
        if !table.contains(loc) {
            return Err(RecordError::Bounds(loc));
        }
        if !highlights.insert(loc) {
            duplicate_highlights += 1;
        }
    }
    let tag = raw
        .noise_type
        .map(|t| {
            t.parse::<Tag>()
                .map_err(|_| RecordError::Parse(format!("unknown noise_type {t:?}")))
        })
        .transpose()?;

    Ok(ParsedRecord {
        example: Example {
            example_id,
            table,
            page_title: raw.table_page_title,
            section_title: raw.table_section_title,
            section_text: raw.table_section_text,
            webpage_url: raw.table_webpage_url,
            highlights,
            annotations: raw.sentence_annotations,
            overlap_subset: raw.overlap_subset,
        },
        tag,
        applied: raw.noise_applied,
        duplicate_highlights,
    })
}

// Field order is alphabetical: that is the canonical key order on output.
#[derive(Serialize)]
struct OutCell<'a> {
    column_span: usize,
    is_header: bool,
    row_span: usize,
    value: &'a str,
}

#[derive(Serialize)]
struct OutRecord<'a> {
    example_id: i64,
    highlighted_cells: Vec<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    noise_applied: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    noise_type: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    overlap_subset: Option<bool>,
    sentence_annotations: &'a [SentenceAnnotation],
    table: Vec<Vec<OutCell<'a>>>,
    table_page_title: &'a str,
    table_section_text: &'a str,
    table_section_title: &'a str,
    table_webpage_url: &'a str,
}

pub fn serialize_record(example: &Example) -> String {
    write_record(example, None)
}

/// Serializes with the two dataset keys `noise_type` and `noise_applied`.
pub fn serialize_tagged(example: &Example, tag: Tag, applied: bool) -> String {
    write_record(example, Some((tag, applied)))
}

fn write_record(e: &Example, tag: Option<(Tag, bool)>) -> String {
    let out = OutRecord {
        example_id: e.example_id,
        highlighted_cells: e.highlights.iter().map(|l| [l.row, l.cell]).collect(),
        noise_applied: tag.map(|t| t.1),
        noise_type: tag.map(|t| t.0.as_str()),
        overlap_subset: e.overlap_subset,
        sentence_annotations: &e.annotations,
        table: e
            .table
            .rows()
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| OutCell {
                        column_span: c.col_span,
                        is_header: c.is_header,
                        row_span: c.row_span,
                        value: &c.value,
                    })
                    .collect()
            })
            .collect(),
        table_page_title: &e.page_title,
        table_section_text: &e.section_text,
        table_section_title: &e.section_title,
        table_webpage_url: &e.webpage_url,
    };
    serde_json::to_string(&out).expect("record serialization cannot fail")
}

/// A line that could not be parsed. Streaming reads skip these.
#[derive(Debug)]
pub struct SkippedLine {
    /// 1-based.
    pub line: usize,
    pub error: RecordError,
}

#[derive(Debug, Default)]
pub struct CorpusReport {
    pub lines_read: usize,
    pub skipped: Vec<SkippedLine>,
    pub duplicate_highlights: usize,
}

#[derive(Debug, Default)]
pub struct Corpus {
    /// Parsed records in input order.
    pub records: Vec<ParsedRecord>,
    pub report: CorpusReport,
}

impl Corpus {
    pub fn examples(&self) -> impl Iterator<Item = &Example> {
        self.records.iter().map(|r| &r.example)
    }

    pub fn into_examples(self) -> Vec<Example> {
        self.records.into_iter().map(|r| r.example).collect()
    }
}

/// Reads a whole JSONL corpus. Lines are parsed in parallel; output keeps
/// input order. Blank lines are ignored, bad lines are reported and skipped.
pub fn read_corpus<R: BufRead>(reader: R) -> std::io::Result<Corpus> {
    let lines: Vec<(usize, String)> = reader
        .lines()
        .enumerate()
        .map(|(i, l)| l.map(|l| (i + 1, l)))
        .collect::<Result<_, _>>()?;
    let lines_read = lines.len();
    let parsed: Vec<(usize, Result<ParsedRecord, RecordError>)> = lines
        .into_par_iter()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(n, l)| (n, parse_line(&l)))
        .collect();

    let mut corpus = Corpus {
        records: Vec::with_capacity(parsed.len()),
        report: CorpusReport {
            lines_read,
            ..Default::default()
        },
    };
    for (line, result) in parsed {
        match result {
            Ok(rec) => {
                corpus.report.duplicate_highlights += rec.duplicate_highlights;
                corpus.records.push(rec);
            }
            Err(error) => corpus.report.skipped.push(SkippedLine { line, error }),
        }
    }
    Ok(corpus)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"table": [[{"value": "x", "is_header": false, "row_span": 1, "column_span": 1}]], "table_webpage_url": "http://w", "table_page_title": "P", "table_section_title": "S", "table_section_text": "", "highlighted_cells": [[0, 0]], "example_id": 1, "sentence_annotations": [{"original_sentence": "o", "sentence_after_deletion": "d", "sentence_after_ambiguity": "a", "final_sentence": "f"}]}"#;

    #[test]
    fn minimal_record() {
        let e = parse_record(MINIMAL).unwrap();
        assert_eq!(e.highlights.len(), 1);
        assert_eq!(e.reference(), Some("f"));
        assert_eq!(e.overlap_subset, None);
        assert_eq!(parse_record(&serialize_record(&e)).unwrap(), e);
    }

    #[test]
    fn out_of_range_highlight() {
        let line = MINIMAL.replace("[[0, 0]]", "[[5, 0]]");
        assert!(matches!(
            parse_record(&line),
            Err(RecordError::Bounds(CellLoc { row: 5, cell: 0 }))
        ));
    }

    #[test]
    fn duplicate_highlights_counted() {
        let line = MINIMAL.replace("[[0, 0]]", "[[0, 0], [0, 0]]");
        let p = parse_line(&line).unwrap();
        assert_eq!(p.example.highlights.len(), 1);
        assert_eq!(p.duplicate_highlights, 1);
    }

    #[test]
    fn missing_key_and_wrong_type() {
        let no_table = MINIMAL.replace("\"table\"", "\"tabel\"");
        assert!(matches!(parse_record(&no_table), Err(RecordError::Parse(_))));
        let bad_type = MINIMAL.replace("\"is_header\": false", "\"is_header\": \"no\"");
        assert!(matches!(parse_record(&bad_type), Err(RecordError::Parse(_))));
        assert!(matches!(parse_record("{not json"), Err(RecordError::Parse(_))));
    }

    #[test]
    fn empty_highlights_emitted() {
        let mut e = parse_record(MINIMAL).unwrap();
        e.highlights = HighlightSet::new();
        assert!(serialize_record(&e).contains("\"highlighted_cells\":[]"));
    }

    #[test]
    fn keys_sorted_and_text_untouched() {
        let line = MINIMAL.replace("\"value\": \"x\"", "\"value\": \"  Ünïcode X \"");
        let e = parse_record(&line).unwrap();
        assert_eq!(e.table.cell(CellLoc::new(0, 0)).value, "  Ünïcode X ");
        let out = serialize_record(&e);
        assert!(out.starts_with("{\"example_id\":1,\"highlighted_cells\""));
        assert!(out.contains("{\"column_span\":1,\"is_header\":false,\"row_span\":1,\"value\""));
        assert!(!out.contains('\n'));
    }

    #[test]
    fn streaming_skips_bad_lines() {
        let bad = MINIMAL.replace("[[0, 0]]", "[[0, 3]]");
        let input = format!("{MINIMAL}\n\n{bad}\n{MINIMAL}\n");
        let corpus = read_corpus(input.as_bytes()).unwrap();
        assert_eq!(corpus.records.len(), 2);
        assert_eq!(corpus.report.skipped.len(), 1);
        assert_eq!(corpus.report.skipped[0].line, 3);
    }
}
