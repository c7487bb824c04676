//! File formats: JSONL adversarial records, CSV/JSON evaluation reports,
//! and the plain-text explanation and substitution inputs used by `compare`.
//!
//! Record lines carry `id`, `original_text`, `perturbed_text`,
//! `original_explanation`, `perturbed_explanation`, `substitutions`
//! (`{iteration, original, replacement}` objects), `guiding_measure`,
//! `threshold` and an optional `final_similarity`. Unknown fields are ignored.

use std::collections::HashSet;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::explanation::{AdversarialRecord, RankedExplanation, SubstitutionEvent};
use crate::harness::{EvaluationReport, ReportRow};
use crate::measures::MeasureId;

pub const REPORT_HEADER: [&str; 10] = [
    "dataset",
    "measure",
    "provider",
    "tau",
    "base_rate",
    "syn_rate",
    "base_avg_sim",
    "syn_avg_sim",
    "n",
    "skipped",
];

/// Placeholder for an average over zero successes.
pub const ABSENT: &str = "-";

#[derive(Serialize, Deserialize)]
struct SubstitutionLine {
    iteration: u32,
    original: String,
    replacement: String,
}

#[derive(Serialize, Deserialize)]
struct RecordLine {
    id: String,
    #[serde(default)]
    original_text: String,
    #[serde(default)]
    perturbed_text: String,
    original_explanation: Vec<String>,
    perturbed_explanation: Vec<String>,
    #[serde(default)]
    substitutions: Vec<SubstitutionLine>,
    guiding_measure: MeasureId,
    #[serde(deserialize_with = "fraction_or_percent")]
    threshold: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    final_similarity: Option<f64>,
}

/// Accepts `0.3`, `"0.3"` or `"30%"`.
fn fraction_or_percent<'de, D: Deserializer<'de>>(deserializer: D) -> std::result::Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Number(f64),
        Text(String),
    }
    match Raw::deserialize(deserializer)? {
        Raw::Number(x) => Ok(x),
        Raw::Text(s) => {
            let s = s.trim();
            let parsed = match s.strip_suffix('%') {
                Some(pct) => pct.trim().parse::<f64>().map(|x| x / 100.0),
                None => s.parse::<f64>(),
            };
            parsed.map_err(serde::de::Error::custom)
        }
    }
}

impl RecordLine {
    fn into_record(self) -> Result<AdversarialRecord> {
        let substitutions = self
            .substitutions
            .iter()
            .map(|s| SubstitutionEvent::new(s.iteration, &s.original, &s.replacement))
            .collect::<Result<Vec<_>>>()?;
        let record = AdversarialRecord {
            id: self.id,
            original_text: self.original_text,
            perturbed_text: self.perturbed_text,
            original_explanation: RankedExplanation::parse(&self.original_explanation)?,
            perturbed_explanation: RankedExplanation::parse(&self.perturbed_explanation)?,
            substitutions,
            guiding_measure: self.guiding_measure,
            threshold: self.threshold,
            final_similarity: self.final_similarity,
        };
        record.validate()?;
        Ok(record)
    }

    fn from_record(r: &AdversarialRecord) -> Self {
        Self {
            id: r.id.clone(),
            original_text: r.original_text.clone(),
            perturbed_text: r.perturbed_text.clone(),
            original_explanation: r.original_explanation.tokens(),
            perturbed_explanation: r.perturbed_explanation.tokens(),
            substitutions: r
                .substitutions
                .iter()
                .map(|s| SubstitutionLine {
                    iteration: s.iteration,
                    original: s.original.surface().to_owned(),
                    replacement: s.replacement.surface().to_owned(),
                })
                .collect(),
            guiding_measure: r.guiding_measure,
            threshold: r.threshold,
            final_similarity: r.final_similarity,
        }
    }
}

/// Parses JSONL records. Blank lines are skipped; errors carry the 1-based
/// line number.
pub fn parse_records<R: BufRead>(reader: R) -> Result<Vec<AdversarialRecord>> {
    let mut records = Vec::new();
    let mut ids = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let malformed = |cause: String| Error::MalformedLine {
            line: line_no,
            cause,
        };
        let line = line.map_err(|e| malformed(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RecordLine = serde_json::from_str(&line).map_err(|e| malformed(e.to_string()))?;
        let record = raw.into_record().map_err(|e| malformed(e.to_string()))?;
        if !ids.insert(record.id.clone()) {
            return Err(Error::DuplicateId {
                id: record.id,
                line: line_no,
            });
        }
        records.push(record);
    }
    Ok(records)
}

pub fn read_records(path: impl AsRef<Path>) -> Result<Vec<AdversarialRecord>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_records(BufReader::new(file))
}

pub fn record_to_json(record: &AdversarialRecord) -> String {
    serde_json::to_string(&RecordLine::from_record(record)).expect("record serialises")
}

pub fn render_records(records: &[AdversarialRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&record_to_json(r));
        out.push('\n');
    }
    out
}

pub fn write_records(path: impl AsRef<Path>, records: &[AdversarialRecord]) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, render_records(records)).map_err(|e| Error::io(path, e))
}

fn read_to_string(path: &Path) -> Result<String> {
    let mut s = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut s))
        .map_err(|e| Error::io(path, e))?;
    Ok(s)
}

/// Parses one token per line; blank lines are ignored.
pub fn parse_explanation(text: &str) -> Result<RankedExplanation> {
    let tokens: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    RankedExplanation::parse(&tokens)
}

pub fn read_explanation(path: impl AsRef<Path>) -> Result<RankedExplanation> {
    parse_explanation(&read_to_string(path.as_ref())?)
}

/// Parses `iteration<TAB>original<TAB>replacement` lines. Blank lines and
/// lines starting with `#` are ignored.
pub fn parse_substitutions(text: &str) -> Result<Vec<SubstitutionEvent>> {
    let mut events = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let malformed = |cause: String| Error::MalformedLine {
            line: line_no,
            cause,
        };
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split('\t').collect();
        let [iteration, original, replacement] = fields[..] else {
            return Err(malformed(format!("expected 3 tab-separated fields, found {}", fields.len())));
        };
        let iteration = iteration
            .trim()
            .parse::<u32>()
            .map_err(|e| malformed(format!("bad iteration: {e}")))?;
        events.push(SubstitutionEvent::new(iteration, original, replacement).map_err(|e| malformed(e.to_string()))?);
    }
    Ok(events)
}

pub fn read_substitutions(path: impl AsRef<Path>) -> Result<Vec<SubstitutionEvent>> {
    parse_substitutions(&read_to_string(path.as_ref())?)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ReportFormat {
    #[default]
    Csv,
    Json,
}

fn fixed4(x: f64) -> String {
    format!("{x:.4}")
}

fn fixed4_or_absent(x: Option<f64>) -> String {
    x.map_or_else(|| ABSENT.to_owned(), fixed4)
}

pub fn render_csv(report: &EvaluationReport) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(REPORT_HEADER)?;
    for row in &report.rows {
        writer.write_record([
            row.dataset.clone(),
            row.measure.to_string(),
            row.provider.clone(),
            fixed4(row.tau),
            fixed4(row.base_rate),
            fixed4(row.syn_rate),
            fixed4_or_absent(row.base_avg_sim),
            fixed4_or_absent(row.syn_avg_sim),
            row.n.to_string(),
            row.skipped.to_string(),
        ])?;
    }
    let bytes = writer.into_inner().map_err(|e| Error::InvalidValue(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn render_json(report: &EvaluationReport) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    Ok(s)
}

pub fn write_report(report: &EvaluationReport, path: impl AsRef<Path>, format: ReportFormat) -> Result<()> {
    let path = path.as_ref();
    let text = match format {
        ReportFormat::Csv => render_csv(report)?,
        ReportFormat::Json => render_json(report)?,
    };
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Reads rows back from the CSV format. Values are rounded to 4 decimals
/// and success counts are reconstructed from rate × n.
pub fn parse_report_csv<R: Read>(reader: R) -> Result<Vec<ReportRow>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if header != REPORT_HEADER {
        return Err(Error::MalformedLine {
            line: 1,
            cause: format!("unexpected header {}", header.join(",")),
        });
    }
    let mut rows = Vec::new();
    for (idx, rec) in rdr.records().enumerate() {
        let line = idx + 2;
        let rec = rec?;
        let malformed = |cause: String| Error::MalformedLine { line, cause };
        let num = |i: usize| -> Result<f64> {
            rec[i]
                .parse::<f64>()
                .map_err(|e| malformed(format!("{}: {e}", REPORT_HEADER[i])))
        };
        let opt = |i: usize| -> Result<Option<f64>> {
            if &rec[i] == ABSENT {
                Ok(None)
            } else {
                num(i).map(Some)
            }
        };
        let count = |i: usize| -> Result<usize> {
            rec[i]
                .parse::<usize>()
                .map_err(|e| malformed(format!("{}: {e}", REPORT_HEADER[i])))
        };
        let n = count(8)?;
        let base_rate = num(4)?;
        let syn_rate = num(5)?;
        rows.push(ReportRow {
            dataset: rec[0].to_owned(),
            measure: rec[1].parse().map_err(|e: Error| malformed(e.to_string()))?,
            provider: rec[2].to_owned(),
            tau: num(3)?,
            base_rate,
            syn_rate,
            base_avg_sim: opt(6)?,
            syn_avg_sim: opt(7)?,
            n,
            n_success_base: (base_rate * n as f64).round() as usize,
            n_success_syn: (syn_rate * n as f64).round() as usize,
            skipped: count(9)?,
        });
    }
    Ok(rows)
}

pub fn parse_report_json(text: &str) -> Result<EvaluationReport> {
    Ok(serde_json::from_str(text)?)
}

/// Human-readable table of a report, one line per cell.
pub fn render_table(report: &EvaluationReport) -> String {
    let width = |header: &str, cells: &mut dyn Iterator<Item = usize>| cells.fold(header.len(), usize::max);
    let dw = width("dataset", &mut report.rows.iter().map(|r| r.dataset.len()));
    let mw = width("measure", &mut report.rows.iter().map(|r| r.measure.to_string().len()));
    let pw = width("provider", &mut report.rows.iter().map(|r| r.provider.len()));
    let mut out = format!(
        "{:<dw$} {:<mw$} {:<pw$} {:>6} {:>9} {:>9} {:>9} {:>9} {:>6}\n",
        "dataset", "measure", "provider", "tau", "base_rate", "syn_rate", "base_sim", "syn_sim", "n"
    );
    for r in &report.rows {
        out.push_str(&format!(
            "{:<dw$} {:<mw$} {:<pw$} {:>6.2} {:>9.4} {:>9.4} {:>9} {:>9} {:>6}\n",
            r.dataset,
            r.measure.to_string(),
            r.provider,
            r.tau,
            r.base_rate,
            r.syn_rate,
            fixed4_or_absent(r.base_avg_sim),
            fixed4_or_absent(r.syn_avg_sim),
            r.n
        ));
    }
    if !report.skipped.is_empty() {
        out.push_str(&format!("skipped {} record(s):\n", report.skipped.len()));
        for s in &report.skipped {
            out.push_str(&format!("  {}: {}\n", s.id, s.reason));
        }
    }
    out
}
