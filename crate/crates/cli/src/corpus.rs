use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::input::{read_graph, Format};
use crate::report::{build, Failure, Options, Report};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub file: String,
    pub outcome: Result<Report, Failure>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorLine {
    pub file: String,
    pub kind: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Summary {
    pub files: usize,
    pub analyzed: usize,
    pub distance_biregular: usize,
    pub agreements: usize,
    pub disagreements: Vec<String>,
    pub errors: Vec<ErrorLine>,
}

impl Summary {
    pub fn exit_code(&self) -> u8 {
        if !self.disagreements.is_empty() {
            1
        } else if !self.errors.is_empty() {
            2
        } else {
            0
        }
    }
}

/// Regular files in `dir`, sorted by name.
pub fn list(dir: &Path) -> Result<Vec<PathBuf>, Failure> {
    let read = fs::read_dir(dir)
        .map_err(|e| Failure::new("IoError", format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = read
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.is_file())
        .collect();
    files.sort();
    Ok(files)
}

/// Analyzes every file on at most `jobs` threads; entries come back in
/// input order.
pub fn run(files: &[PathBuf], format: Option<Format>, opts: &Options, jobs: usize) -> Vec<Entry> {
    let analyze = |path: &PathBuf| {
        let file = path.file_name().map_or_else(
            || path.display().to_string(),
            |f| f.to_string_lossy().into_owned(),
        );
        let outcome = read_graph(path, format).and_then(|g| Ok(build(&g, &file, opts)?));
        Entry { file, outcome }
    };
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(|| files.par_iter().map(analyze).collect()),
        Err(_) => files.iter().map(analyze).collect(),
    }
}

pub fn summarize(entries: &[Entry]) -> Summary {
    let mut s = Summary {
        files: entries.len(),
        ..Summary::default()
    };
    for e in entries {
        match &e.outcome {
            Ok(r) => {
                s.analyzed += 1;
                if r.distance_biregular {
                    s.distance_biregular += 1;
                }
                if r.agreement {
                    s.agreements += 1;
                } else {
                    s.disagreements.push(e.file.clone());
                }
            }
            Err(f) => s.errors.push(ErrorLine {
                file: e.file.clone(),
                kind: f.kind.clone(),
                message: f.message.clone(),
            }),
        }
    }
    s
}

pub fn render_table(entries: &[Entry], summary: &Summary) -> String {
    let mut out = format!(
        "{:<28} {:>5} {:>5} {:>5} {:>4} {:>12} {:>8} {:>8}\n",
        "file", "n", "n1", "n2", "case", "gap", "spectral", "oracle"
    );
    for e in entries {
        match &e.outcome {
            Ok(r) => out.push_str(&format!(
                "{:<28} {:>5} {:>5} {:>5} {:>4} {:>12.3e} {:>8} {:>8}{}\n",
                e.file,
                r.graph.n,
                r.graph.n1,
                r.graph.n2,
                r.verdict.case.to_string(),
                r.verdict.condition_gap,
                r.distance_biregular,
                r.oracle.distance_biregular,
                if r.agreement { "" } else { "  DISAGREE" }
            )),
            Err(f) => out.push_str(&format!("{:<28} error {}: {}\n", e.file, f.kind, f.message)),
        }
    }
    out.push_str(&format!(
        "files {}, analyzed {}, distance-biregular {}, agreements {}, disagreements {}, errors {}\n",
        summary.files,
        summary.analyzed,
        summary.distance_biregular,
        summary.agreements,
        summary.disagreements.len(),
        summary.errors.len()
    ));
    out
}
