//! Machine-readable run reports: one JSON document per run, CSV files for
//! curves and tables. Payloads are deterministic given (config, seed):
//! no timestamps, no map iteration order, atomic write-then-rename.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use simalg::collapse::{AxiomVerdict, CurvePoint, RateFit};
use simalg::error::{Error, Result};
use simalg::structures::AxiomDefectReport;

#[derive(Debug, Serialize)]
pub struct ReportDocument {
    pub tool_version: String,
    pub config_digest: String,
    pub seed_override: Option<u64>,
    pub tasks: Vec<TaskReport>,
    pub overall_pass: bool,
}

#[derive(Debug, Serialize)]
pub struct TaskReport {
    pub name: String,
    #[serde(rename = "type")]
    pub task_type: String,
    pub seed: Option<u64>,
    pub status: TaskStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<TaskDetail>,
    /// CSV files this task wrote, relative to the output directory.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub files: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaskStatus {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaskDetail {
    Audit(AuditDetail),
    Collapse(CollapseDetail),
    Bracket(BracketDetail),
    C1(C1Detail),
    Fuzzy(FuzzyDetail),
    Morphism(MorphismDetail),
}

#[derive(Debug, Serialize)]
pub struct AuditDetail {
    pub structure: String,
    pub kind: String,
    pub bound: f64,
    pub certified_eps: f64,
    pub overall_pass: bool,
    pub axioms: Vec<AxiomRow>,
}

#[derive(Debug, Serialize)]
pub struct AxiomRow {
    pub axiom: String,
    pub max_defect: f64,
    pub mean_defect: f64,
    pub pass: bool,
    pub skipped: usize,
}

impl AuditDetail {
    pub fn from_report(report: &AxiomDefectReport, bound: f64) -> Self {
        AuditDetail {
            structure: report.label.clone(),
            kind: report.kind.name().to_string(),
            bound,
            certified_eps: report.certified_eps,
            overall_pass: report.overall_pass,
            axioms: report
                .entries
                .iter()
                .map(|e| AxiomRow {
                    axiom: e.axiom.clone(),
                    max_defect: e.stats.max_defect,
                    mean_defect: e.stats.mean_defect,
                    pass: e.pass,
                    skipped: e.skipped,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CollapseDetail {
    pub family: String,
    pub grid: Vec<f64>,
    pub verdicts: Vec<VerdictRow>,
    pub all_pass: bool,
}

#[derive(Debug, Serialize)]
pub struct VerdictRow {
    pub axiom: String,
    pub pass: bool,
    pub degenerate: bool,
    pub nonincreasing: bool,
    pub final_eps: f64,
    pub final_defect: f64,
    pub rate: RateRow,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RateRow {
    ExactIdentity,
    Inconclusive { points_used: usize },
    Slope { slope: f64, r_squared: f64, points_used: usize },
}

impl From<&AxiomVerdict> for VerdictRow {
    fn from(v: &AxiomVerdict) -> Self {
        let rate = match v.rate {
            RateFit::ExactIdentity => RateRow::ExactIdentity,
            RateFit::TooFewPoints { points_used } => RateRow::Inconclusive { points_used },
            RateFit::Fitted(fit) if !fit.is_conclusive() => RateRow::Inconclusive {
                points_used: fit.points_used,
            },
            RateFit::Fitted(fit) => RateRow::Slope {
                slope: fit.slope,
                r_squared: fit.r_squared,
                points_used: fit.points_used,
            },
        };
        VerdictRow {
            axiom: v.axiom.clone(),
            pass: v.pass,
            degenerate: v.degenerate,
            nonincreasing: v.nonincreasing,
            final_eps: v.final_eps,
            final_defect: v.final_defect,
            rate,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct BracketDetail {
    pub n: usize,
    pub eps: f64,
    pub t: f64,
    pub pairs: usize,
    pub max_relative_error: f64,
    pub threshold: f64,
}

#[derive(Debug, Serialize)]
pub struct C1Detail {
    pub n: usize,
    pub h: f64,
    pub rows: Vec<(f64, f64)>,
    pub slope: Option<f64>,
    pub r_squared: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct FuzzyDetail {
    pub elements: usize,
    pub tnorm: String,
    pub triples_checked: usize,
    pub embedding_bound_holds: bool,
    pub worst_gap: f64,
    pub max_derived_epsilon: f64,
    pub rosenfeld_violations: usize,
}

#[derive(Debug, Serialize)]
pub struct MorphismDetail {
    pub map: String,
    pub source: String,
    pub target: String,
    pub eps: f64,
    pub similarity_preserving: bool,
    pub worst_margin: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hom_defect_add: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hom_defect_mul: Option<f64>,
    pub passes_at_eps: bool,
}

/// FNV-1a 64 digest of the raw config bytes, hex-encoded.
pub fn config_digest(bytes: &[u8]) -> String {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("fnv1a64:{hash:016x}")
}

/// Write bytes atomically (write to a sibling temp file, then rename).
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    let io = |e: std::io::Error| Error::Config(format!("write {}: {e}", path.display()));
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(io)?;
    }
    let mut f = fs::File::create(&tmp).map_err(io)?;
    f.write_all(bytes).map_err(io)?;
    f.sync_all().map_err(io)?;
    drop(f);
    fs::rename(&tmp, path).map_err(io)?;
    Ok(())
}

/// Curve CSV: one row per grid point, columns epsilon,max_defect,mean_defect.
pub fn curve_csv(points: &[CurvePoint]) -> String {
    let mut out = String::from("epsilon,max_defect,mean_defect\n");
    for p in points {
        out.push_str(&format!("{:e},{:e},{:e}\n", p.eps, p.max_defect, p.mean_defect));
    }
    out
}

/// Jacobian-gap CSV: columns epsilon,gap.
pub fn gap_csv(rows: &[(f64, f64)]) -> String {
    let mut out = String::from("epsilon,gap\n");
    for (eps, gap) in rows {
        out.push_str(&format!("{eps:e},{gap:e}\n"));
    }
    out
}

/// Sanitized file stem for an axiom name.
pub fn file_stem(base: &str, suffix: &str) -> PathBuf {
    PathBuf::from(format!("{base}_{suffix}.csv"))
}
