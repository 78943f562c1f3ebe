//! Batch driver: load a session config, run its analyses in a worker pool and
//! write one JSON report per analysis plus a markdown summary.

pub mod analyses;
pub mod config;

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::json;

pub use config::{ConfigError, Session, SessionConfig};

/// Command-line overrides.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Analysis ids or kinds to keep; empty keeps all.
    pub only: Vec<String>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub max_dim: Option<usize>,
}

/// Guard on `|W|³` for restricted-algebra work.
pub const DEFAULT_MAX_DIM: usize = cherednik::restricted::CENTRE_GUARD;

#[derive(Debug)]
pub struct AnalysisResult {
    pub id: String,
    pub kind: &'static str,
    pub file: PathBuf,
    /// `None` on success, else what went wrong.
    pub error: Option<String>,
}

#[derive(Debug)]
pub struct RunSummary {
    pub out_dir: PathBuf,
    pub results: Vec<AnalysisResult>,
}

impl RunSummary {
    pub fn failed(&self) -> impl Iterator<Item = &AnalysisResult> {
        self.results.iter().filter(|r| r.error.is_some())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot write {0}: {1}")]
    Io(PathBuf, std::io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Config(_) => 2,
            RunError::Io(..) => 1,
        }
    }
}

fn file_stem(i: usize, id: &str) -> String {
    let clean: String = id
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect();
    format!("{:02}-{clean}", i + 1)
}

/// Loads and runs `config`, writing reports. Computation failures are
/// recorded per analysis; only config and I/O errors abort.
pub fn run(config: &Path, opts: &RunOptions) -> Result<RunSummary, RunError> {
    let session = Session::load(config)?;
    run_session(&session, opts)
}

pub fn run_session(session: &Session, opts: &RunOptions) -> Result<RunSummary, RunError> {
    let specs = &session.config.analyses;
    for want in &opts.only {
        if !specs.iter().any(|s| s.id() == want || s.kind() == want) {
            return Err(ConfigError::Invalid(format!(
                "--only {want:?} matches no analysis in the config"
            ))
            .into());
        }
    }
    let out_dir = match (&opts.out, &session.config.output) {
        (Some(o), _) => o.clone(),
        (None, Some(o)) => session.base_dir.join(o),
        (None, None) => session.base_dir.join("reports"),
    };
    let limits = analyses::Limits {
        seed: opts.seed.unwrap_or(session.config.seed),
        max_dim: opts.max_dim.unwrap_or(DEFAULT_MAX_DIM),
    };
    let chosen: Vec<usize> = (0..specs.len())
        .filter(|&i| {
            opts.only.is_empty()
                || opts
                    .only
                    .iter()
                    .any(|w| specs[i].id() == w || specs[i].kind() == w)
        })
        .collect();

    let outcomes: Vec<_> = chosen
        .par_iter()
        .map(|&i| analyses::run(session, &session.analyses[i], &limits))
        .collect();

    std::fs::create_dir_all(&out_dir).map_err(|e| RunError::Io(out_dir.clone(), e))?;
    let g = &session.group;
    let mut summary = format!(
        "# Session report\n\nGroup {} (|W| = {}, conductor {}), c = ({}), seed {}\n",
        g.name(),
        g.order(),
        session.conductor,
        session
            .param
            .values()
            .iter()
            .enumerate()
            .map(|(i, v)| format!("{}: {v}", g.reflection_class_label(i)))
            .collect::<Vec<_>>()
            .join(", "),
        limits.seed
    );
    let mut results = Vec::new();
    for (&i, outcome) in chosen.iter().zip(outcomes) {
        let spec = &specs[i];
        let file = out_dir.join(format!("{}.json", file_stem(i, spec.id())));
        let (body, error) = match outcome {
            Ok(o) => {
                summary.push_str(&format!(
                    "\n## {} ({})\n\n{}",
                    spec.id(),
                    spec.kind(),
                    o.markdown
                ));
                if let Some(f) = &o.failure {
                    summary.push_str(&format!("\n**FAILED**: {f}\n"));
                }
                let status = if o.failure.is_some() { "failed" } else { "ok" };
                (
                    json!({"id": spec.id(), "analysis": spec.kind(), "status": status, "failure": o.failure, "report": o.report}),
                    o.failure,
                )
            }
            Err(e) => {
                let msg = e.to_string();
                summary.push_str(&format!(
                    "\n## {} ({})\n\n**FAILED**: {msg}\n",
                    spec.id(),
                    spec.kind()
                ));
                (
                    json!({"id": spec.id(), "analysis": spec.kind(), "status": "failed", "failure": msg, "report": null}),
                    Some(msg),
                )
            }
        };
        let text = serde_json::to_string_pretty(&body).expect("serializable") + "\n";
        std::fs::write(&file, text).map_err(|e| RunError::Io(file.clone(), e))?;
        results.push(AnalysisResult {
            id: spec.id().to_string(),
            kind: spec.kind(),
            file,
            error,
        });
    }
    let md = out_dir.join("summary.md");
    std::fs::write(&md, summary).map_err(|e| RunError::Io(md.clone(), e))?;
    Ok(RunSummary { out_dir, results })
}
