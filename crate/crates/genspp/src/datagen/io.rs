//! JSONL persistence for dataset splits plus the annotator mask merge.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{DatasetSplits, Vocab};
use crate::error::{Error, Result};
use crate::rationalizer::Example;

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum TokenRepr {
    Id(u32),
    Text(String),
}

#[derive(Serialize, Deserialize)]
struct Row {
    tokens: Vec<TokenRepr>,
    label: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    rationale: Option<Vec<u8>>,
}

fn write_split(path: &Path, split: &[Example]) -> Result<()> {
    let mut out = Vec::new();
    for ex in split {
        let row = Row {
            tokens: ex.tokens.iter().map(|&t| TokenRepr::Id(t)).collect(),
            label: ex.label,
            rationale: ex.gold_mask.clone(),
        };
        serde_json::to_writer(&mut out, &row)
            .map_err(|e| Error::InvalidInput(format!("serialize row: {e}")))?;
        out.push(b'\n');
    }
    write_atomic(path, &out)
}

/// Writes via a sibling temp file and rename so readers never observe a
/// half-written file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Lays out `dir/{train,validation,test}.jsonl` plus `dir/vocab.txt`
/// (token per line, id = line number).
pub fn save_jsonl(splits: &DatasetSplits, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    for (name, split) in splits.splits() {
        write_split(&dir.join(format!("{name}.jsonl")), split)?;
    }
    let mut vocab = String::new();
    for t in splits.vocab.tokens() {
        vocab.push_str(t);
        vocab.push('\n');
    }
    write_atomic(&dir.join("vocab.txt"), vocab.as_bytes())
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        msg: msg.into(),
    }
}

fn read_split(path: &Path, vocab: &Vocab) -> Result<Vec<Example>> {
    let file = fs::File::open(path)?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row: Row =
            serde_json::from_str(&line).map_err(|e| parse_err(path, lineno, e.to_string()))?;
        let tokens: Vec<u32> = row
            .tokens
            .iter()
            .map(|t| match t {
                TokenRepr::Id(id) if (*id as usize) < vocab.len() => Ok(*id),
                TokenRepr::Id(id) => Err(parse_err(
                    path,
                    lineno,
                    format!("token id {id} outside vocabulary of size {}", vocab.len()),
                )),
                TokenRepr::Text(s) => vocab
                    .id(s)
                    .ok_or_else(|| parse_err(path, lineno, format!("unknown token {s:?}"))),
            })
            .collect::<Result<_>>()?;
        if let Some(r) = &row.rationale {
            if r.len() != tokens.len() {
                return Err(parse_err(
                    path,
                    lineno,
                    format!("rationale length {} vs {} tokens", r.len(), tokens.len()),
                ));
            }
            if r.iter().any(|&v| v > 1) {
                return Err(parse_err(path, lineno, "rationale entries must be 0/1"));
            }
        }
        out.push(Example {
            tokens,
            label: row.label,
            gold_mask: row.rationale,
        });
    }
    Ok(out)
}

pub fn load_jsonl(dir: &Path) -> Result<DatasetSplits> {
    let vocab_path = dir.join("vocab.txt");
    let raw = fs::read_to_string(&vocab_path)?;
    let vocab = Vocab::new(raw.lines().map(str::to_string).collect());
    if vocab.len() == 0 {
        return Err(parse_err(&vocab_path, 1, "empty vocabulary"));
    }
    Ok(DatasetSplits {
        train: read_split(&dir.join("train.jsonl"), &vocab)?,
        validation: read_split(&dir.join("validation.jsonl"), &vocab)?,
        test: read_split(&dir.join("test.jsonl"), &vocab)?,
        vocab,
    })
}

/// Merges annotator masks position-wise: 1 iff strictly more than half of
/// the annotators selected the position.
pub fn majority_vote_mask(annotations: &[Vec<u8>]) -> Result<Vec<u8>> {
    let first = annotations
        .first()
        .ok_or_else(|| Error::InvalidInput("majority vote needs >= 1 annotation".into()))?;
    if annotations.iter().any(|a| a.len() != first.len()) {
        return Err(Error::InvalidInput("annotation lengths differ".into()));
    }
    let half = annotations.len() as f64 / 2.0;
    Ok((0..first.len())
        .map(|i| {
            let votes = annotations.iter().filter(|a| a[i] == 1).count() as f64;
            u8::from(votes > half)
        })
        .collect())
}
