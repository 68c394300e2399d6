use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::str::FromStr;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, ValueEnum};
use serde_json::json;
use tabnoise::dataset::{self, DatasetRecord, Recipe, Tag, TrainingRecipe};
use tabnoise::linearize::{linearize_with, Mode};
use tabnoise::losses::{evaluate_row, LossRow, Reduction};
use tabnoise::metrics::{corpus_bleu, corpus_bleu_multi, covered_cells, EvalReport, GroupScore};
use tabnoise::noise::{Amount, NoiseOptions, NoiseType, Violation, DEFAULT_RELEVANCE_THRESHOLD};
use tabnoise::totto::{parse_line, read_corpus, Corpus};
use tabnoise::Example;

use crate::manifest::{sibling, RunManifest, Verification};

/// Value of `--noise`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseArg {
    Single(NoiseType),
    Final,
    FinalMinus(NoiseType),
    Mix,
    KSweep,
}

impl FromStr for NoiseArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "final" => Ok(NoiseArg::Final),
            "mix" => Ok(NoiseArg::Mix),
            "ksweep" => Ok(NoiseArg::KSweep),
            _ => {
                if let Some(t) = s.strip_prefix("final-minus-") {
                    return t.parse().map(NoiseArg::FinalMinus);
                }
                s.parse()
                    .map(NoiseArg::Single)
                    .map_err(|_| format!("expected n1|n2|n3|n4|final|final-minus-n1..n4|mix|ksweep, got {s:?}"))
            }
        }
    }
}

#[derive(Debug, Args)]
pub struct NoiseFlags {
    /// Leave header cells out of the Noise 1 pool.
    #[arg(long)]
    pub n1_exclude_headers: bool,
    /// Allow header cells in the Noise 3 pool.
    #[arg(long)]
    pub n3_include_headers: bool,
    /// Minimum fraction of a cell's tokens that must appear in the reference.
    #[arg(long, default_value_t = DEFAULT_RELEVANCE_THRESHOLD)]
    pub relevance_threshold: f64,
    /// A cell is relevant if any annotation mentions it, not just the first.
    #[arg(long)]
    pub any_reference: bool,
}

impl NoiseFlags {
    pub fn options(&self) -> NoiseOptions {
        NoiseOptions {
            noise1_include_headers: !self.n1_exclude_headers,
            noise3_include_headers: self.n3_include_headers,
            relevance_threshold: self.relevance_threshold,
            any_reference: self.any_reference,
        }
    }
}

#[derive(Debug, Args)]
pub struct CorruptArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long)]
    pub noise: NoiseArg,
    /// Cells to add (n1-n3, ksweep) or remove (n4; default removes all
    /// irrelevant cells). Ignored by final, final-minus and mix, which use
    /// the standard amounts.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, env = "TABNOISE_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Re-read the output and check every noise invariant.
    #[arg(long)]
    pub verify: bool,
    #[command(flatten)]
    pub flags: NoiseFlags,
}

fn open_corpus(path: &Path) -> Result<Corpus> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let corpus = read_corpus(BufReader::new(file)).with_context(|| format!("cannot read {}", path.display()))?;
    for s in &corpus.report.skipped {
        eprintln!("warning: {}:{}: skipped: {}", path.display(), s.line, s.error);
    }
    if corpus.report.duplicate_highlights > 0 {
        eprintln!(
            "warning: {}: dropped {} duplicate highlight pairs",
            path.display(),
            corpus.report.duplicate_highlights
        );
    }
    Ok(corpus)
}

fn write_records(path: &Path, records: &[DatasetRecord]) -> Result<()> {
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    dataset::write_dataset(records, BufWriter::new(file))?;
    Ok(())
}

fn read_records(path: &Path) -> Result<Vec<DatasetRecord>> {
    let file = File::open(path)?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let p = parse_line(&line).with_context(|| format!("{}:{}", path.display(), i + 1))?;
        let tag = p
            .tag
            .with_context(|| format!("{}:{}: missing noise_type", path.display(), i + 1))?;
        out.push(DatasetRecord {
            example: p.example,
            tag,
            applied: p.applied.unwrap_or(false),
        });
    }
    Ok(out)
}

fn applied_false(records: &[DatasetRecord]) -> usize {
    records.iter().filter(|r| r.tag != Tag::Clean && !r.applied).count()
}

fn verify_file(
    path: &Path,
    source: &[Example],
    recipe: Recipe,
    seed: u64,
    options: &NoiseOptions,
) -> Result<(usize, Vec<Violation>)> {
    let records = read_records(path)?;
    let violations = dataset::verify_dataset(source, recipe, &records, seed, options);
    Ok((records.len(), violations))
}

pub fn cmd_corrupt(args: &CorruptArgs) -> Result<()> {
    let Corpus { records, report } = open_corpus(&args.input)?;
    let parsed = records.len();
    let examples: Vec<Example> = records.into_iter().map(|r| r.example).collect();
    let options = args.flags.options();
    let seed = args.seed;

    let recipe = match args.noise {
        NoiseArg::Single(t) => Recipe::Single {
            noise_type: t,
            amount: match (t, args.k) {
                (NoiseType::N4, None) => Amount::All,
                (_, k) => Amount::Count(k.unwrap_or(1)),
            },
        },
        NoiseArg::Final => Recipe::Final,
        NoiseArg::FinalMinus(t) => Recipe::FinalMinus(t),
        NoiseArg::Mix => Recipe::Mix,
        NoiseArg::KSweep => Recipe::KSweep { k: args.k.unwrap_or(1) },
    };

    let mut outputs: Vec<(PathBuf, Recipe, Vec<DatasetRecord>)> = Vec::new();
    let mut shortfall = None;
    if let Recipe::KSweep { k } = recipe {
        let sweep = dataset::corrupt_dev_k(&examples, k, seed, &options)?;
        shortfall = Some(sweep.shortfall);
        outputs.push((args.output.clone(), recipe, sweep.mixture));
        for (t, recs) in sweep.by_type {
            let single = Recipe::Single {
                noise_type: t,
                amount: Amount::Count(k),
            };
            outputs.push((sibling(&args.output, &format!("{t}.jsonl")), single, recs));
        }
    } else {
        let records = dataset::build(recipe, &examples, seed, &options)?;
        outputs.push((args.output.clone(), recipe, records));
    }

    let mut manifest = RunManifest::new(
        "corrupt",
        &args.input,
        &args.output,
        Some(seed),
        json!({
            "noise": recipe.name(),
            "k": args.k,
            "options": options,
            "extra_outputs": outputs.iter().skip(1).map(|o| o.0.clone()).collect::<Vec<_>>(),
            "ksweep_shortfall": shortfall,
        }),
    );
    manifest.record_input(&report, parsed);
    manifest.counts.written = outputs[0].2.len();
    manifest.counts.applied_false = applied_false(&outputs[0].2);
    for (path, _, records) in &outputs {
        write_records(path, records)?;
    }

    let mut failures = 0;
    if args.verify {
        let mut checked = 0;
        for (path, r, _) in &outputs {
            let (n, violations) = verify_file(path, &examples, *r, seed, &options)?;
            checked += n;
            for v in &violations {
                eprintln!(
                    "violation: {}: example {} ({}): {}",
                    path.display(),
                    v.example_id,
                    v.noise_type,
                    v.message
                );
            }
            failures += violations.len();
        }
        eprintln!("verified {checked} records: {failures} violations");
        manifest.verification = Some(Verification {
            records_checked: checked,
            violations: failures,
        });
    }
    manifest.write()?;
    eprintln!(
        "wrote {} records to {} ({} skipped input lines)",
        manifest.counts.written,
        args.output.display(),
        manifest.counts.skipped
    );
    ensure!(failures == 0, "verification found {failures} violations");
    Ok(())
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// Reference JSONL (ToTTo schema, optionally with noise_type tags).
    #[arg(long)]
    pub refs: PathBuf,
    /// One hypothesis per line, aligned with --refs.
    #[arg(long, required_unless_present = "generator_cmd", conflicts_with = "generator_cmd")]
    pub hyps: Option<PathBuf>,
    /// Shell command that reads linearized inputs on stdin (one per line)
    /// and writes one sentence per line.
    #[arg(long)]
    pub generator_cmd: Option<String>,
    /// Group by noise_type and report Noise Avg. / Noise Var.
    #[arg(long)]
    pub per_noise: bool,
    /// Report the covered-cells proxy.
    #[arg(long)]
    pub covered_cells: bool,
    /// Score against every annotation instead of only the first.
    #[arg(long)]
    pub multi_ref: bool,
}

fn run_generator(cmd: &str, inputs: Vec<String>) -> Result<Vec<String>> {
    let mut child = Command::new("sh")
        .arg("-c")
        .arg(cmd)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .with_context(|| format!("cannot start generator {cmd:?}"))?;
    let mut stdin = child.stdin.take().expect("piped stdin");
    let feeder = std::thread::spawn(move || -> std::io::Result<()> {
        let mut w = BufWriter::new(&mut stdin);
        for line in inputs {
            writeln!(w, "{line}")?;
        }
        w.flush()
    });
    let mut out = String::new();
    child.stdout.take().expect("piped stdout").read_to_string(&mut out)?;
    let status = child.wait()?;
    feeder.join().expect("feeder thread").context("writing to generator")?;
    ensure!(status.success(), "generator exited with {status}");
    Ok(out.lines().map(str::to_string).collect())
}

pub fn cmd_score(args: &ScoreArgs) -> Result<EvalReport> {
    let corpus = open_corpus(&args.refs)?;
    ensure!(
        corpus.report.skipped.is_empty(),
        "{} unparseable reference lines; hypotheses cannot be aligned",
        corpus.report.skipped.len()
    );
    let records = corpus.records;
    ensure!(!records.is_empty(), "no reference records in {}", args.refs.display());

    let hyps: Vec<String> = match (&args.hyps, &args.generator_cmd) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
            text.lines().map(str::to_string).collect()
        }
        (None, Some(cmd)) => {
            let inputs = records
                .iter()
                .map(|r| linearize_with(&r.example, &r.example.highlights, Mode::Subtable).map(|l| l.text))
                .collect::<Result<Vec<_>, _>>()?;
            run_generator(cmd, inputs)?
        }
        (None, None) => bail!("either --hyps or --generator-cmd is required"),
    };
    ensure!(
        hyps.len() == records.len(),
        "alignment mismatch: {} hypotheses for {} references",
        hyps.len(),
        records.len()
    );

    let refs: Vec<Vec<String>> = records
        .iter()
        .map(|r| {
            let all: Vec<String> = r.example.references().map(str::to_string).collect();
            ensure!(!all.is_empty(), "example {} has no annotation", r.example.example_id);
            Ok(if args.multi_ref { all } else { all[..1].to_vec() })
        })
        .collect::<Result<_>>()?;
    let score = |idx: &[usize]| {
        let h: Vec<&str> = idx.iter().map(|&i| hyps[i].as_str()).collect();
        if args.multi_ref {
            let r: Vec<Vec<String>> = idx.iter().map(|&i| refs[i].clone()).collect();
            corpus_bleu_multi(&h, &r)
        } else {
            let r: Vec<&str> = idx.iter().map(|&i| refs[i][0].as_str()).collect();
            corpus_bleu(&h, &r)
        }
    };

    let all: Vec<usize> = (0..records.len()).collect();
    let overall = score(&all)?;
    let mut groups = BTreeMap::new();
    if args.per_noise {
        let mut by_tag: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (i, r) in records.iter().enumerate() {
            let tag = r.tag.unwrap_or(Tag::Clean);
            by_tag.entry(tag.to_string()).or_default().push(i);
        }
        for (tag, idx) in by_tag {
            groups.insert(
                tag,
                GroupScore {
                    records: idx.len(),
                    bleu: score(&idx)?,
                },
            );
        }
    }
    let covered = if args.covered_cells {
        let fractions: Vec<f64> = records
            .iter()
            .zip(&hyps)
            .filter(|(r, _)| !r.example.highlights.is_empty())
            .map(|(r, h)| covered_cells(h, &r.example, &r.example.highlights))
            .collect::<Result<_, _>>()?;
        (!fractions.is_empty()).then(|| fractions.iter().sum::<f64>() / fractions.len() as f64)
    } else {
        None
    };
    Ok(EvalReport::new(overall, records.len(), groups, covered))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Tsv,
    Jsonl,
}

#[derive(Debug, Args)]
pub struct LinearizeArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value_t = OutputFormat::Tsv)]
    pub format: OutputFormat,
    /// Emit every table cell instead of the highlighted subtable.
    #[arg(long)]
    pub full_table: bool,
}

fn tsv_field(s: &str) -> String {
    s.replace(['\t', '\n', '\r'], " ")
}

pub fn cmd_linearize(args: &LinearizeArgs) -> Result<()> {
    let corpus = open_corpus(&args.input)?;
    let mode = if args.full_table {
        Mode::FullTable
    } else {
        Mode::Subtable
    };
    let file = File::create(&args.output).with_context(|| format!("cannot create {}", args.output.display()))?;
    let mut out = BufWriter::new(file);
    let mut written = 0;
    for rec in &corpus.records {
        let e = &rec.example;
        let lin = linearize_with(e, &e.highlights, mode)?;
        let reference = e.reference().unwrap_or("");
        match args.format {
            OutputFormat::Tsv => writeln!(out, "{}\t{}", tsv_field(&lin.text), tsv_field(reference))?,
            OutputFormat::Jsonl => {
                let row = json!({
                    "linearized_input": lin.text,
                    "reference": reference,
                    "example_id": e.example_id,
                    "noise_type": rec.tag.unwrap_or(Tag::Clean).as_str(),
                });
                writeln!(out, "{row}")?;
            }
        }
        written += 1;
    }
    out.flush()?;
    let mut manifest = RunManifest::new(
        "linearize",
        &args.input,
        &args.output,
        None,
        json!({ "format": format!("{:?}", args.format).to_lowercase(), "full_table": args.full_table }),
    );
    manifest.record_input(&corpus.report, corpus.records.len());
    manifest.counts.written = written;
    manifest.write()?;
    Ok(())
}

#[derive(Debug, Args)]
pub struct LossesArgs {
    /// JSONL rows with logprobs, sampled_logprobs, reference, sample.
    #[arg(long)]
    pub input: PathBuf,
    /// Divide by token count instead of summing.
    #[arg(long)]
    pub mean: bool,
}

pub fn cmd_losses<W: Write>(args: &LossesArgs, mut out: W) -> Result<()> {
    let reduction = if args.mean { Reduction::Mean } else { Reduction::Sum };
    let file = File::open(&args.input).with_context(|| format!("cannot open {}", args.input.display()))?;
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row: LossRow = serde_json::from_str(&line).with_context(|| format!("line {}", i + 1))?;
        let result = evaluate_row(&row, reduction).with_context(|| format!("line {}", i + 1))?;
        writeln!(out, "{}", serde_json::to_string(&result)?)?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long)]
    pub learning_rate: Option<f64>,
    #[arg(long)]
    pub batch_size: Option<u32>,
    #[arg(long)]
    pub lm_steps: Option<u64>,
    #[arg(long)]
    pub mix_steps: Option<u64>,
}

pub fn cmd_config(args: &ConfigArgs) -> Result<TrainingRecipe> {
    let d = TrainingRecipe::default();
    let recipe = TrainingRecipe {
        learning_rate: args.learning_rate.unwrap_or(d.learning_rate),
        batch_size: args.batch_size.unwrap_or(d.batch_size),
        lm_steps: args.lm_steps.unwrap_or(d.lm_steps),
        mix_steps: args.mix_steps.unwrap_or(d.mix_steps),
        optimizer: d.optimizer,
    };
    recipe.validate().map_err(anyhow::Error::msg)?;
    dataset::emit_training_config(&recipe, &args.output)?;
    Ok(recipe)
}
