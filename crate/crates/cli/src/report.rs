//! Check records and their text, JSON and LaTeX renderings.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::registry::{find, Env, Params, CHECKS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub params: Params,
    pub status: Status,
    pub residual: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ms: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub version: String,
    pub config: RunConfig,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn failed(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn all_passed(&self) -> bool {
        self.failed().next().is_none()
    }

    pub fn get(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            1
        }
    }
}

fn run_one(id: &str, env: &Env) -> CheckRecord {
    let def = find(id).expect("validated check id");
    let mut params = Params::new();
    let start = Instant::now();
    let (status, residual) = match def.skip_reason(env.config) {
        Some(reason) => (Status::Skipped, reason),
        None => match def.run(env, &mut params) {
            Ok(()) => (Status::Pass, String::new()),
            Err(e) => (Status::Fail, e.to_string()),
        },
    };
    let ms = env.config.timings.then(|| start.elapsed().as_millis() as u64);
    CheckRecord { id: id.to_string(), params, status, residual, ms }
}

/// Run the selected checks (all of them when none are selected) and
/// collect the records sorted by id.
pub fn run_verify(config: &RunConfig) -> Report {
    let ids: Vec<&str> = if config.checks.is_empty() {
        CHECKS.iter().map(|c| c.id).collect()
    } else {
        config.checks.iter().map(String::as_str).collect()
    };
    let env = Env::new(config);
    let mut checks: Vec<CheckRecord> = ids.par_iter().map(|id| run_one(id, &env)).collect();
    checks.sort_by(|a, b| a.id.cmp(&b.id));
    checks.dedup_by(|a, b| a.id == b.id);
    Report { version: env!("CARGO_PKG_VERSION").to_string(), config: config.clone(), seed: config.seed, checks }
}

fn params_text(p: &Params) -> String {
    p.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

fn latex_escape(s: &str) -> String {
    s.replace('\\', "\\textbackslash{}").replace('_', "\\_").replace('^', "\\^{}").replace('&', "\\&").replace('#', "\\#")
}

pub fn emit_report(report: &Report, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("report serializes") + "\n",
        Format::Text => {
            let mut out = String::new();
            for c in &report.checks {
                let status = match c.status {
                    Status::Pass => "pass",
                    Status::Fail => "FAIL",
                    Status::Skipped => "skipped",
                };
                out.push_str(&format!("{status:<8} {:<18} {}", c.id, params_text(&c.params)));
                if let Some(ms) = c.ms {
                    out.push_str(&format!(" [{ms} ms]"));
                }
                if !c.residual.is_empty() {
                    out.push_str(&format!("\n         {}", c.residual));
                }
                out.push('\n');
            }
            let failed = report.failed().count();
            out.push_str(&format!("{} checks, {} failed (seed {})\n", report.checks.len(), failed, report.seed));
            out
        }
        Format::Latex => {
            let mut out = String::from("\\begin{tabular}{lll}\n\\hline\ncheck & status & residual \\\\\n\\hline\n");
            for c in &report.checks {
                let status = format!("{:?}", c.status).to_lowercase();
                out.push_str(&format!(
                    "\\texttt{{{}}} & {} & {} \\\\\n",
                    latex_escape(&c.id),
                    status,
                    latex_escape(&c.residual)
                ));
            }
            out.push_str("\\hline\n\\end{tabular}\n");
            out
        }
    }
}
