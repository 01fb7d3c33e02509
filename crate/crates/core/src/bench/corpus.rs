use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::pddl::{parse_domain_str, parse_problem_str, Domain, Problem};

/// Canonical column order for the five evaluation domains.
pub const DOMAIN_ORDER: &[&str] = &["barman", "blocks", "elevator", "satellite", "tidybot"];

#[derive(Debug, Clone)]
pub struct BenchmarkSet {
    pub name: String,
    pub domain_file: PathBuf,
    pub problem_files: Vec<PathBuf>,
    pub domain: Domain,
}

impl BenchmarkSet {
    /// Problem identifier used in results: the file stem (`p01`).
    pub fn problem_id(path: &Path) -> String {
        path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
    }

    pub fn load_problem(&self, path: &Path) -> Result<Problem, CorpusError> {
        let text = read(path)?;
        parse_problem_str(&text, &self.domain).map_err(|e| CorpusError::ParseFailure { file: path.to_path_buf(), detail: e.to_string() })
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("benchmark root {0} is not a readable directory")]
    BadRoot(PathBuf),
    #[error("benchmark set `{0}` has no domain.pddl")]
    MissingDomainFile(String),
    #[error("benchmark set `{0}` has no p*.pddl problem files")]
    NoProblems(String),
    #[error("{file}: {detail}")]
    ParseFailure { file: PathBuf, detail: String },
    #[error("{file}: {detail}")]
    Io { file: PathBuf, detail: String },
}

fn read(path: &Path) -> Result<String, CorpusError> {
    fs::read_to_string(path).map_err(|e| CorpusError::Io { file: path.to_path_buf(), detail: e.to_string() })
}

/// Sort key placing the known domains first, in canonical order.
pub fn domain_rank(name: &str) -> (usize, &str) {
    (DOMAIN_ORDER.iter().position(|d| *d == name).unwrap_or(DOMAIN_ORDER.len()), name)
}

pub fn load_benchmark_set(dir: &Path) -> Result<BenchmarkSet, CorpusError> {
    let name = dir.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let domain_file = dir.join("domain.pddl");
    if !domain_file.is_file() {
        return Err(CorpusError::MissingDomainFile(name));
    }
    let domain = parse_domain_str(&read(&domain_file)?)
        .map_err(|e| CorpusError::ParseFailure { file: domain_file.clone(), detail: e.to_string() })?;
    let mut problem_files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| CorpusError::Io { file: dir.to_path_buf(), detail: e.to_string() })?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            let file = p.file_name().and_then(|f| f.to_str()).unwrap_or("");
            file.starts_with('p') && file.ends_with(".pddl") && p.is_file()
        })
        .collect();
    problem_files.sort_by_key(|p| p.file_name().map(|f| f.to_owned()));
    if problem_files.is_empty() {
        return Err(CorpusError::NoProblems(name));
    }
    let set = BenchmarkSet { name, domain_file, problem_files, domain };
    for p in &set.problem_files {
        set.load_problem(p)?;
    }
    Ok(set)
}

/// Every subdirectory of `root` is a set; sets come back in canonical order.
pub fn load_benchmark_sets(root: &Path) -> Result<Vec<BenchmarkSet>, CorpusError> {
    let entries = fs::read_dir(root).map_err(|_| CorpusError::BadRoot(root.to_path_buf()))?;
    let mut dirs: Vec<PathBuf> = entries.filter_map(|e| e.ok().map(|e| e.path())).filter(|p| p.is_dir()).collect();
    dirs.sort_by(|a, b| {
        let (a, b) = (a.file_name().unwrap().to_string_lossy(), b.file_name().unwrap().to_string_lossy());
        domain_rank(&a).cmp(&domain_rank(&b))
    });
    dirs.iter().map(|d| load_benchmark_set(d)).collect()
}
