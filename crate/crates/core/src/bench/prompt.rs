//! Prompt construction for the six shots-by-format configurations.

use std::fmt;
use std::fs::File;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;
use std::sync::{Arc, LazyLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::Entry;

const ARABIC_GLOSS: &str = include_str!("../../data/prompts/arabic_gloss.txt");
const ARABIC_GLOSS_EXAMPLES: &str = include_str!("../../data/prompts/arabic_gloss_examples.txt");
const ARABIC_ONLY: &str = include_str!("../../data/prompts/arabic_only.txt");
const ARABIC_ONLY_EXAMPLES: &str = include_str!("../../data/prompts/arabic_only_examples.txt");
pub const DEFAULT_EXAMPLES_TSV: &str = include_str!("../../data/fewshot.tsv");

/// Number of examples in the few-shot setting.
pub const FEW_SHOT_COUNT: usize = 80;

static BUNDLED_EXAMPLES: LazyLock<Arc<[FewShotExample]>> = LazyLock::new(|| {
    read_examples(DEFAULT_EXAMPLES_TSV.as_bytes())
        .expect("bundled examples are valid")
        .into()
});

#[derive(Debug, Error)]
pub enum PromptError {
    #[error("{needed} examples needed, {available} available")]
    InsufficientExamples { needed: usize, available: usize },
    #[error("batch has {got} entries, configured batch size is {expected}")]
    BatchSizeMismatch { expected: usize, got: usize },
    #[error("batch size must be positive")]
    ZeroBatchSize,
    #[error("examples file line {line}: expected input, gloss and output columns")]
    MalformedExample { line: u64 },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shots {
    Zero,
    One,
    Few(usize),
}

impl Shots {
    pub fn count(self) -> usize {
        match self {
            Shots::Zero => 0,
            Shots::One => 1,
            Shots::Few(n) => n,
        }
    }
}

impl fmt::Display for Shots {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shots::Zero => f.write_str("zero"),
            Shots::One => f.write_str("one"),
            Shots::Few(FEW_SHOT_COUNT) => f.write_str("few"),
            Shots::Few(n) => write!(f, "few:{n}"),
        }
    }
}

impl FromStr for Shots {
    type Err = String;

    /// `zero`, `one`, `few` or `few:N`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "zero" => Ok(Shots::Zero),
            "one" => Ok(Shots::One),
            "few" => Ok(Shots::Few(FEW_SHOT_COUNT)),
            _ => s
                .strip_prefix("few:")
                .and_then(|n| n.parse().ok())
                .filter(|&n| n > 0)
                .map(Shots::Few)
                .ok_or_else(|| format!("unknown shots {s:?} (expected zero, one, few or few:N)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InputFormat {
    #[serde(rename = "arabic+gloss")]
    ArabicGloss,
    #[serde(rename = "arabic-only")]
    ArabicOnly,
}

impl fmt::Display for InputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InputFormat::ArabicGloss => "arabic+gloss",
            InputFormat::ArabicOnly => "arabic-only",
        })
    }
}

impl FromStr for InputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "arabic+gloss" | "gloss" => Ok(InputFormat::ArabicGloss),
            "arabic-only" | "arabic" => Ok(InputFormat::ArabicOnly),
            _ => Err(format!("unknown format {s:?} (expected arabic+gloss or arabic-only)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FewShotExample {
    pub input: String,
    pub gloss: String,
    pub output: String,
}

pub fn read_examples<R: Read>(reader: R) -> Result<Vec<FewShotExample>, PromptError> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .quoting(false)
        .comment(Some(b'#'))
        .flexible(true)
        .from_reader(reader);
    let mut out = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        match (record.get(0), record.get(1), record.get(2)) {
            (Some(i), Some(g), Some(o)) if !i.trim().is_empty() && !o.trim().is_empty() => out.push(FewShotExample {
                input: i.trim().to_string(),
                gloss: g.trim().to_string(),
                output: o.trim().to_string(),
            }),
            _ => return Err(PromptError::MalformedExample { line }),
        }
    }
    Ok(out)
}

pub fn load_examples(path: impl AsRef<Path>) -> Result<Vec<FewShotExample>, PromptError> {
    read_examples(File::open(path)?)
}

/// The bundled 80-example pool.
pub fn bundled_examples() -> Arc<[FewShotExample]> {
    BUNDLED_EXAMPLES.clone()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PromptConfig {
    pub shots: Shots,
    pub input_format: InputFormat,
    pub batch_size: usize,
    /// Examples are taken from the front of this pool, in order.
    pub examples: Arc<[FewShotExample]>,
}

impl PromptConfig {
    /// Batch size 1 with the bundled examples.
    pub fn new(shots: Shots, input_format: InputFormat) -> PromptConfig {
        PromptConfig {
            shots,
            input_format,
            batch_size: 1,
            examples: bundled_examples(),
        }
    }

    /// Named configurations such as `few_gloss` or `zero_arabic`.
    pub fn preset(name: &str) -> Option<PromptConfig> {
        let (shots, format) = name.split_once('_')?;
        let shots = shots.parse().ok()?;
        let format = match format {
            "gloss" => InputFormat::ArabicGloss,
            "arabic" => InputFormat::ArabicOnly,
            _ => return None,
        };
        Some(PromptConfig::new(shots, format))
    }

    pub fn label(&self) -> String {
        let format = match self.input_format {
            InputFormat::ArabicGloss => "gloss",
            InputFormat::ArabicOnly => "arabic",
        };
        format!("{}_{format}", self.shots)
    }

    pub fn check(&self) -> Result<(), PromptError> {
        if self.batch_size == 0 {
            return Err(PromptError::ZeroBatchSize);
        }
        let needed = self.shots.count();
        if needed > self.examples.len() {
            return Err(PromptError::InsufficientExamples {
                needed,
                available: self.examples.len(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Prompt {
    pub system: String,
    pub user: String,
}

fn cell(text: &str) -> String {
    text.replace('|', "\\|").replace(['\n', '\r'], " ")
}

fn table(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut out = format!("| {} |\n", header.join(" | "));
    out.push_str(&format!("|{}\n", " --- |".repeat(header.len())));
    for row in rows {
        let cells: Vec<String> = row.iter().map(|c| cell(c)).collect();
        out.push_str(&format!("| {} |\n", cells.join(" | ")));
    }
    out
}

/// Build the system and user messages. The batch may be shorter than the
/// configured size only for the final batch of a run.
pub fn build_prompt(config: &PromptConfig, batch: &[Entry]) -> Result<Prompt, PromptError> {
    config.check()?;
    if batch.is_empty() || batch.len() > config.batch_size {
        return Err(PromptError::BatchSizeMismatch {
            expected: config.batch_size,
            got: batch.len(),
        });
    }
    let rows = batch.len().to_string();
    let (template, intro) = match config.input_format {
        InputFormat::ArabicGloss => (ARABIC_GLOSS, ARABIC_GLOSS_EXAMPLES),
        InputFormat::ArabicOnly => (ARABIC_ONLY, ARABIC_ONLY_EXAMPLES),
    };
    let mut system = template.trim_end().replace("{rows}", &rows);
    let n = config.shots.count();
    if n > 0 {
        let examples = config.examples[..n].iter().map(|e| match config.input_format {
            InputFormat::ArabicGloss => vec![e.input.clone(), e.gloss.clone(), e.output.clone()],
            InputFormat::ArabicOnly => vec![e.input.clone(), e.output.clone()],
        });
        let header: &[&str] = match config.input_format {
            InputFormat::ArabicGloss => &["Input", "Gloss", "Output"],
            InputFormat::ArabicOnly => &["Input", "Output"],
        };
        system.push_str("\n\n");
        system.push_str(intro.trim_end());
        system.push_str("\n\n");
        system.push_str(table(header, examples).trim_end());
    }
    let user = match config.input_format {
        InputFormat::ArabicGloss => table(
            &["Input", "Gloss"],
            batch.iter().map(|e| vec![e.arabic_input.clone(), e.gloss.clone()]),
        ),
        InputFormat::ArabicOnly => table(&["Input"], batch.iter().map(|e| vec![e.arabic_input.clone()])),
    };
    Ok(Prompt {
        system,
        user: user.trim_end().to_string(),
    })
}
