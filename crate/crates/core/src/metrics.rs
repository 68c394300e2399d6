//! BLEU and the robustness summaries built on it.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::MetricError;
use crate::noise::{relevance, NoiseType};
use crate::table::HighlightSet;
use crate::totto::Example;

pub const MAX_ORDER: usize = 4;

/// Evaluation tokenizer: case preserved, every character that is not a
/// letter, digit or whitespace becomes its own token, except `.` and `,`
/// between two digits.
pub fn tokenize_eval(s: &str) -> Vec<String> {
    let chars: Vec<char> = s.chars().collect();
    let mut spaced = String::with_capacity(s.len() + 8);
    for (i, &c) in chars.iter().enumerate() {
        if c.is_alphanumeric() || c.is_whitespace() {
            spaced.push(c);
            continue;
        }
        let numeric_sep = (c == '.' || c == ',')
            && i > 0
            && chars[i - 1].is_ascii_digit()
            && chars.get(i + 1).is_some_and(|n| n.is_ascii_digit());
        if numeric_sep {
            spaced.push(c);
        } else {
            spaced.push(' ');
            spaced.push(c);
            spaced.push(' ');
        }
    }
    spaced.split_whitespace().map(str::to_string).collect()
}

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], usize> {
    let mut counts = HashMap::new();
    if tokens.len() >= n {
        for w in tokens.windows(n) {
            *counts.entry(w).or_insert(0) += 1;
        }
    }
    counts
}

/// Sufficient statistics for BLEU; sums of these are associative.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct BleuStats {
    pub matches: [usize; MAX_ORDER],
    pub totals: [usize; MAX_ORDER],
    pub hyp_len: usize,
    pub ref_len: usize,
}

impl BleuStats {
    /// Statistics for one hypothesis against one or more references
    /// (clipped by the maximum reference count; reference length is the
    /// closest one, shorter wins ties).
    pub fn from_tokens(hyp: &[String], refs: &[Vec<String>]) -> BleuStats {
        let mut stats = BleuStats {
            hyp_len: hyp.len(),
            ref_len: closest_ref_len(hyp.len(), refs),
            ..Default::default()
        };
        for n in 1..=MAX_ORDER {
            let hyp_counts = ngram_counts(hyp, n);
            let ref_counts: Vec<_> = refs.iter().map(|r| ngram_counts(r, n)).collect();
            stats.totals[n - 1] = hyp.len().saturating_sub(n - 1);
            stats.matches[n - 1] = hyp_counts
                .iter()
                .map(|(g, &c)| {
                    let max_ref = ref_counts
                        .iter()
                        .map(|rc| rc.get(g).copied().unwrap_or(0))
                        .max()
                        .unwrap_or(0);
                    c.min(max_ref)
                })
                .sum();
        }
        stats
    }

    pub fn merge(mut self, other: BleuStats) -> BleuStats {
        for n in 0..MAX_ORDER {
            self.matches[n] += other.matches[n];
            self.totals[n] += other.totals[n];
        }
        self.hyp_len += other.hyp_len;
        self.ref_len += other.ref_len;
        self
    }

    /// Unsmoothed BLEU-4.
    pub fn score(&self) -> BleuScore {
        let precisions: [f64; MAX_ORDER] = std::array::from_fn(|n| {
            if self.totals[n] == 0 {
                0.0
            } else {
                self.matches[n] as f64 / self.totals[n] as f64
            }
        });
        let bp = brevity_penalty(self.hyp_len, self.ref_len);
        let score = if precisions.contains(&0.0) {
            0.0
        } else {
            let log_mean = precisions.iter().map(|p| p.ln()).sum::<f64>() / MAX_ORDER as f64;
            100.0 * bp * log_mean.exp()
        };
        BleuScore {
            score,
            precisions,
            brevity_penalty: bp,
            hyp_len: self.hyp_len,
            ref_len: self.ref_len,
        }
    }
}

fn closest_ref_len(hyp_len: usize, refs: &[Vec<String>]) -> usize {
    refs.iter()
        .map(Vec::len)
        .min_by_key(|&r| (r.abs_diff(hyp_len), r))
        .unwrap_or(0)
}

fn brevity_penalty(c: usize, r: usize) -> f64 {
    if c > r {
        1.0
    } else if c == 0 {
        0.0
    } else {
        (1.0 - r as f64 / c as f64).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BleuScore {
    /// On [0, 100].
    pub score: f64,
    pub precisions: [f64; MAX_ORDER],
    pub brevity_penalty: f64,
    pub hyp_len: usize,
    pub ref_len: usize,
}

/// Corpus BLEU-4 with one reference per hypothesis.
pub fn corpus_bleu<H: AsRef<str> + Sync, R: AsRef<str> + Sync>(
    hypotheses: &[H],
    references: &[R],
) -> Result<BleuScore, MetricError> {
    check_lengths(hypotheses.len(), references.len())?;
    let stats = hypotheses
        .par_iter()
        .zip(references.par_iter())
        .map(|(h, r)| BleuStats::from_tokens(&tokenize_eval(h.as_ref()), &[tokenize_eval(r.as_ref())]))
        .reduce(BleuStats::default, BleuStats::merge);
    Ok(stats.score())
}

/// Corpus BLEU-4 where each hypothesis may have several references.
pub fn corpus_bleu_multi<H: AsRef<str> + Sync, R: AsRef<str> + Sync>(
    hypotheses: &[H],
    references: &[Vec<R>],
) -> Result<BleuScore, MetricError> {
    check_lengths(hypotheses.len(), references.len())?;
    let stats = hypotheses
        .par_iter()
        .zip(references.par_iter())
        .map(|(h, rs)| {
            let refs: Vec<Vec<String>> = rs.iter().map(|r| tokenize_eval(r.as_ref())).collect();
            BleuStats::from_tokens(&tokenize_eval(h.as_ref()), &refs)
        })
        .reduce(BleuStats::default, BleuStats::merge);
    Ok(stats.score())
}

fn check_lengths(h: usize, r: usize) -> Result<(), MetricError> {
    if h != r {
        return Err(MetricError::LengthMismatch {
            hypotheses: h,
            references: r,
        });
    }
    if h == 0 {
        return Err(MetricError::EmptyCorpus);
    }
    Ok(())
}

/// Sentence BLEU-4 on [0, 1]. Orders n >= 2 with no matches use
/// `(0 + 1) / (total + 1)`; an empty hypothesis scores 0.
pub fn sentence_bleu_smoothed(hyp: &str, reference: &str) -> f64 {
    let h = tokenize_eval(hyp);
    if h.is_empty() {
        return 0.0;
    }
    let stats = BleuStats::from_tokens(&h, &[tokenize_eval(reference)]);
    let mut log_sum = 0.0;
    for n in 0..MAX_ORDER {
        let (m, t) = (stats.matches[n], stats.totals[n]);
        let p = if m == 0 && n >= 1 {
            1.0 / (t as f64 + 1.0)
        } else if m == 0 {
            return 0.0;
        } else {
            m as f64 / t as f64
        };
        log_sum += p.ln();
    }
    brevity_penalty(stats.hyp_len, stats.ref_len) * (log_sum / MAX_ORDER as f64).exp()
}

/// Mean and sample variance (n - 1 denominator) of the four noisy-set scores.
pub fn noise_summary(scores: &[f64]) -> Result<(f64, f64), MetricError> {
    if scores.len() != 4 {
        return Err(MetricError::Arity(scores.len()));
    }
    let n = scores.len() as f64;
    let mean = scores.iter().sum::<f64>() / n;
    let var = scores.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok((mean, var))
}

/// Fraction of highlighted cells whose value the candidate expresses.
pub fn covered_cells(candidate: &str, example: &Example, highlights: &HighlightSet) -> Result<f64, MetricError> {
    if highlights.is_empty() {
        return Err(MetricError::EmptyHighlights);
    }
    let covered = highlights
        .iter()
        .filter(|h| relevance(&example.table.cell(*h).value, candidate))
        .count();
    Ok(covered as f64 / highlights.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupScore {
    pub records: usize,
    pub bleu: BleuScore,
}

/// Scores over a whole evaluation run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub overall: BleuScore,
    pub records: usize,
    /// Per `noise_type` group; empty unless grouping was requested.
    pub groups: BTreeMap<String, GroupScore>,
    pub clean: Option<f64>,
    pub noise_avg: Option<f64>,
    pub noise_var: Option<f64>,
    pub covered_cells: Option<f64>,
}

impl EvalReport {
    pub fn new(
        overall: BleuScore,
        records: usize,
        groups: BTreeMap<String, GroupScore>,
        covered_cells: Option<f64>,
    ) -> EvalReport {
        let clean = if groups.is_empty() {
            Some(overall.score)
        } else {
            groups.get("clean").map(|g| g.bleu.score)
        };
        let noisy: Option<Vec<f64>> = NoiseType::ALL
            .iter()
            .map(|t| groups.get(t.as_str()).map(|g| g.bleu.score))
            .collect();
        let (noise_avg, noise_var) = match noisy.map(|s| noise_summary(&s)) {
            Some(Ok((a, v))) => (Some(a), Some(v)),
            _ => (None, None),
        };
        EvalReport {
            overall,
            records,
            groups,
            clean,
            noise_avg,
            noise_var,
            covered_cells,
        }
    }

    /// Aligned text table: Clean, Noise1..Noise4, Noise Avg., Noise Var.
    pub fn render_table(&self) -> String {
        let fmt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |x| format!("{x:.3}"));
        let mut headers = vec!["Clean".to_string()];
        let mut values = vec![fmt(self.clean)];
        for t in NoiseType::ALL {
            headers.push(format!("Noise{}", t.index()));
            values.push(fmt(self.groups.get(t.as_str()).map(|g| g.bleu.score)));
        }
        headers.push("Noise Avg.".into());
        values.push(fmt(self.noise_avg));
        headers.push("Noise Var.".into());
        values.push(fmt(self.noise_var));
        if let Some(cc) = self.covered_cells {
            headers.push("CC".into());
            values.push(format!("{cc:.3}"));
        }
        let widths: Vec<usize> = headers.iter().zip(&values).map(|(h, v)| h.len().max(v.len())).collect();
        let mut out = String::new();
        for (row, cells) in [&headers, &values].into_iter().enumerate() {
            let line: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
            let _ = writeln!(out, "{}", line.join(" | "));
            if row == 0 {
                let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
                let _ = writeln!(out, "{}", rule.join("-+-"));
            }
        }
        out
    }
}
