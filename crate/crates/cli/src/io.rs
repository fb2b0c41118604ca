use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{Map, Value};
use tailor_core::srl::{parse_corpus, Corpus, SrlError, Warning};

/// One record that could not be processed. The batch carries on.
#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frame: Option<usize>,
    pub error: String,
}

impl Failure {
    pub fn at(line: usize, frame: Option<usize>, error: impl ToString) -> Self {
        Failure { line: Some(line), frame, error: error.to_string() }
    }
}

/// Run report printed to stderr as one JSON object.
#[derive(Debug, Default, Serialize)]
pub struct Summary {
    pub command: String,
    pub records_out: usize,
    pub failed: usize,
    pub skipped: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<Failure>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub skips: Vec<Failure>,
    #[serde(flatten)]
    pub extra: Map<String, Value>,
}

impl Summary {
    pub fn new(command: &str) -> Self {
        Summary { command: command.to_string(), ..Default::default() }
    }

    pub fn fail(&mut self, f: Failure) {
        self.failed += 1;
        self.failures.push(f);
    }

    pub fn skip(&mut self, f: Failure) {
        self.skipped += 1;
        self.skips.push(f);
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        self.extra.insert(key.to_string(), serde_json::to_value(value).expect("summary values serialize"));
    }
}

/// What each input record produced.
#[derive(Debug, Default)]
pub struct Outcome {
    pub records: Vec<Value>,
    pub failures: Vec<Failure>,
    pub skips: Vec<Failure>,
}

impl Outcome {
    pub fn failed(f: Failure) -> Self {
        Outcome { failures: vec![f], ..Default::default() }
    }
}

pub struct Output {
    inner: BufWriter<Box<dyn Write>>,
}

impl Output {
    pub fn open(path: Option<&Path>) -> Result<Self> {
        let sink: Box<dyn Write> = match path {
            Some(p) => Box::new(File::create(p).with_context(|| format!("creating {}", p.display()))?),
            None => Box::new(io::stdout().lock()),
        };
        Ok(Output { inner: BufWriter::new(sink) })
    }

    pub fn write(&mut self, record: &impl Serialize) -> Result<()> {
        serde_json::to_writer(&mut self.inner, record)?;
        self.inner.write_all(b"\n")?;
        Ok(())
    }

    /// Writes every outcome in order and folds it into the summary.
    pub fn drain(&mut self, outcomes: Vec<Outcome>, summary: &mut Summary) -> Result<()> {
        for o in outcomes {
            for r in &o.records {
                self.write(r)?;
                summary.records_out += 1;
            }
            o.failures.into_iter().for_each(|f| summary.fail(f));
            o.skips.into_iter().for_each(|f| summary.skip(f));
        }
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.inner.flush()?;
        Ok(())
    }
}

/// Reads a corpus one line at a time so a malformed line fails only itself.
pub fn read_corpus(path: &Path, summary: &mut Summary) -> Result<Corpus> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading corpus {}", path.display()))?;
    let mut corpus = Corpus::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        match parse_corpus(raw) {
            Ok(one) => {
                corpus.sentences.extend(one.sentences);
                corpus.lines.extend(one.lines.iter().map(|_| line));
                corpus.warnings.extend(one.warnings.into_iter().map(|w| Warning { line, ..w }));
                for r in one.rejections {
                    summary.fail(Failure::at(line, None, format!("rejected: {}", r.reason)));
                }
            }
            Err(SrlError::Malformed { message, .. }) => {
                summary.fail(Failure::at(line, None, format!("malformed record: {message}")))
            }
            Err(e) => summary.fail(Failure::at(line, None, e)),
        }
    }
    summary.set("sentences", corpus.sentences.len());
    Ok(corpus)
}

/// JSON Lines records with their 1-based line numbers. A line that is not a
/// JSON object becomes a failure.
pub fn read_records(path: &PathBuf, summary: &mut Summary) -> Result<Vec<(usize, Map<String, Value>)>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.with_context(|| format!("reading {}", path.display()))?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<Value>(&line) {
            Ok(Value::Object(m)) => out.push((i + 1, m)),
            Ok(_) => summary.fail(Failure::at(i + 1, None, "record is not a JSON object")),
            Err(e) => summary.fail(Failure::at(i + 1, None, e)),
        }
    }
    Ok(out)
}

/// Non-empty lines of a text file, trimmed.
pub fn read_lines(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(text.lines().map(|l| l.trim().to_string()).collect())
}
