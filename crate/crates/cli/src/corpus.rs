//! `verify-corpus`: every `*.toml` entry in a directory, in parallel.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::analysis;
use crate::checks::{self, Row, RowStatus};
use crate::error::{CliError, Exit};
use crate::spec;

#[derive(Debug, Clone)]
pub struct CorpusReport {
    pub rows: Vec<Row>,
}

impl CorpusReport {
    pub fn count(&self, s: RowStatus) -> usize {
        self.rows.iter().filter(|r| r.status == s).count()
    }

    pub fn failures(&self) -> Vec<&Row> {
        self.rows.iter().filter(|r| r.status == RowStatus::Fail).collect()
    }

    pub fn exit(&self) -> Exit {
        if self.count(RowStatus::Fail) > 0 {
            Exit::CorpusFailure
        } else {
            Exit::Ok
        }
    }

    pub fn render(&self) -> String {
        let mut o = String::new();
        let w_entry = self.rows.iter().map(|r| r.entry.len()).max().unwrap_or(0);
        let w_check = self.rows.iter().map(|r| r.check.len() + args_of(r).len()).max().unwrap_or(0);
        for r in &self.rows {
            let check = format!("{}{}", r.check, args_of(r));
            let _ = writeln!(o, "{:<7} {:<w_entry$}  {:<w_check$}  [{}] {}", r.status.label(), r.entry, check, r.cite, r.detail);
        }
        let _ = writeln!(
            o,
            "\n{} rows: {} passed, {} failed, {} flagged",
            self.rows.len(),
            self.count(RowStatus::Pass),
            self.count(RowStatus::Fail),
            self.count(RowStatus::Flagged)
        );
        o
    }
}

fn args_of(r: &Row) -> String {
    if r.args.is_empty() {
        return String::new();
    }
    let a = r.args.join(", ");
    // long argument lists (complex frames) would stretch the whole table
    if a.chars().count() > 40 {
        format!("({}...)", a.chars().take(37).collect::<String>())
    } else {
        format!("({a})")
    }
}

pub fn entries(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let rd = std::fs::read_dir(dir).map_err(|e| CliError::Usage(format!("{}: {e}", dir.display())))?;
    let mut files = Vec::new();
    for e in rd {
        let p = e?.path();
        if p.extension().is_some_and(|x| x == "toml") {
            files.push(p);
        }
    }
    files.sort();
    if files.is_empty() {
        return Err(CliError::Usage(format!("{}: no corpus entries (*.toml)", dir.display())));
    }
    Ok(files)
}

fn failed(entry: String, check: &str, detail: String) -> Row {
    Row { entry, check: check.into(), args: Vec::new(), cite: "corpus harness".into(), status: RowStatus::Fail, detail }
}

pub fn verify_entry(path: &Path) -> Vec<Row> {
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let loaded = match spec::load_file(path) {
        Ok(l) => l,
        Err(e) => return vec![failed(name, "load", e.to_string())],
    };
    if loaded.spec.expect.is_empty() {
        return vec![failed(loaded.spec.id.clone(), "load", "entry has no expectations".into())];
    }
    let out = match analysis::analyze(&loaded, None) {
        Ok(o) => o,
        Err(e) => return vec![failed(loaded.spec.id.clone(), "analyze", e.to_string())],
    };
    loaded.spec.expect.iter().map(|e| checks::evaluate(&loaded, &out, e)).collect()
}

pub fn verify(dir: &Path, jobs: Option<usize>) -> Result<CorpusReport, CliError> {
    let files = entries(dir)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        builder = builder.num_threads(n.max(1));
    }
    let pool = builder.build().map_err(|e| CliError::Usage(e.to_string()))?;
    // collect keeps file order, so the table is deterministic
    let per_entry: Vec<Vec<Row>> = pool.install(|| files.par_iter().map(|p| verify_entry(p)).collect());
    Ok(CorpusReport { rows: per_entry.into_iter().flatten().collect() })
}
