//! Task execution: each config task runs against the kernel and produces a
//! report entry plus optional CSV files.

use std::path::Path;

use simalg::collapse::{fit_rate, verify_collapse, CollapseCurve, RateFit};
use simalg::error::Result;
use simalg::liegroup::{bracket_recovery_error, c1_convergence, BilinearPerturbation, PerturbedMatrixGroup};
use simalg::morphisms::{check_approx_homomorphism, MorphismDescriptor};
use simalg::sample::{Domain, SampleSet};
use simalg::structures::audit;

use crate::config::{FamilyConfig, RunConfig, TaskConfig};
use crate::report::*;

/// Run one task; returns (status, detail, files).
pub fn run_task(
    task: &TaskConfig,
    seed: u64,
    out_dir: &Path,
) -> Result<(bool, TaskDetail, Vec<String>)> {
    match task {
        TaskConfig::Audit {
            structure,
            samples,
            bound,
            expect_pass,
            ..
        } => {
            let mut desc = structure.build()?;
            if let Some(b) = bound {
                desc.eps = *b;
            }
            let sample_set = desc.carrier.sample(seed, *samples)?;
            let report = audit(&desc, &sample_set)?;
            let detail = AuditDetail::from_report(&report, desc.eps);
            let pass = report.overall_pass == *expect_pass;
            Ok((pass, TaskDetail::Audit(detail), Vec::new()))
        }

        TaskConfig::Collapse {
            family,
            grid,
            samples,
            output,
            expect_pass,
            name,
            ..
        } => {
            let fam = family.build()?;
            let grid = match grid {
                Some(g) => g.build()?,
                None => family.default_grid(),
            };
            let sample_set = sample_for_family(family, seed, *samples)?;
            let verdicts = verify_collapse(&fam, &grid, &sample_set)?;
            let mut files = Vec::new();
            let stem = output.clone().unwrap_or_else(|| name.clone());
            for v in &verdicts {
                let file = file_stem(&stem, &v.axiom);
                write_atomic(&out_dir.join(&file), curve_csv(&v.curve.points).as_bytes())?;
                files.push(file.display().to_string());
            }
            let all_pass = verdicts.iter().all(|v| v.pass);
            let detail = CollapseDetail {
                family: fam.name.clone(),
                grid,
                verdicts: verdicts.iter().map(VerdictRow::from).collect(),
                all_pass,
            };
            Ok((all_pass == *expect_pass, TaskDetail::Collapse(detail), files))
        }

        TaskConfig::Bracket {
            n, eps, t, pairs, ..
        } => {
            let grp = PerturbedMatrixGroup::new(*n, *eps, BilinearPerturbation::Commutator)?;
            let max_rel = bracket_recovery_error(&grp, *t, *pairs, seed)?;
            let threshold = 0.05 + 10.0 * eps;
            let detail = BracketDetail {
                n: *n,
                eps: *eps,
                t: *t,
                pairs: *pairs,
                max_relative_error: max_rel,
                threshold,
            };
            Ok((max_rel <= threshold, TaskDetail::Bracket(detail), Vec::new()))
        }

        TaskConfig::C1 {
            n,
            phi,
            grid,
            h,
            probes,
            output,
            name,
            ..
        } => {
            let n = *n;
            let phi = phi.clone();
            let grid = match grid {
                Some(g) => g.build()?,
                None => simalg::collapse::geometric_grid(1e-2, 1e-6, 8),
            };
            let half_width = simalg::liegroup::DEFAULT_CARRIER_RADIUS / n as f64;
            let domain = Domain::matrix_near_identity(n, half_width)?;
            let probe_set = SampleSet::generate(seed, domain, *probes)?;
            let phi_built = phi.build()?;
            let family = move |eps: f64| {
                PerturbedMatrixGroup::new(n, eps, phi_built.clone()).expect("valid dims")
            };
            let table = c1_convergence(family, &grid, &probe_set, *h)?;
            let rows: Vec<(f64, f64)> = table.iter().map(|g| (g.eps, g.gap)).collect();
            let curve = CollapseCurve {
                axiom: "jacobian-gap".into(),
                points: rows
                    .iter()
                    .map(|&(eps, gap)| simalg::collapse::CurvePoint {
                        eps,
                        max_defect: gap,
                        mean_defect: gap,
                    })
                    .collect(),
                degenerate: rows.iter().all(|&(_, g)| g <= 1e-12),
            };
            let (slope, r2, pass) = match fit_rate(&curve) {
                RateFit::Fitted(fit) => (
                    Some(fit.slope),
                    Some(fit.r_squared),
                    (fit.slope - 1.0).abs() <= 0.1 && fit.r_squared >= 0.99,
                ),
                _ => (None, None, false),
            };
            let stem = output.clone().unwrap_or_else(|| name.clone());
            let file = file_stem(&stem, "gaps");
            write_atomic(&out_dir.join(&file), gap_csv(&rows).as_bytes())?;
            let detail = C1Detail {
                n,
                h: *h,
                rows,
                slope,
                r_squared: r2,
            };
            Ok((pass, TaskDetail::C1(detail), vec![file.display().to_string()]))
        }

        TaskConfig::FuzzyEmbed {
            elements,
            membership,
            tnorm,
            op,
            expect_pass,
            ..
        } => {
            let fs = membership.build(elements)?;
            let t = simalg::fuzzy::TNorm::parse(tnorm)?;
            let op = op.build();
            let bound = simalg::fuzzy::check_embedding_bound(&fs, t, &*op)?;
            let rosenfeld = simalg::fuzzy::check_rosenfeld(&fs, &*op, t)?;
            let mut max_eps = 0.0_f64;
            for &a in fs.elements() {
                for &b in fs.elements() {
                    for &c in fs.elements() {
                        max_eps =
                            max_eps.max(simalg::fuzzy::derived_epsilon(&fs, t, &*op, a, b, c)?);
                    }
                }
            }
            let detail = FuzzyDetail {
                elements: fs.len(),
                tnorm: t.name().to_string(),
                triples_checked: bound.triples_checked,
                embedding_bound_holds: bound.holds,
                worst_gap: bound.worst_gap,
                max_derived_epsilon: max_eps,
                rosenfeld_violations: rosenfeld.violations.len(),
            };
            Ok((bound.holds == *expect_pass, TaskDetail::Fuzzy(detail), Vec::new()))
        }

        TaskConfig::Morphism {
            source,
            target,
            map,
            eps,
            samples,
            expect_pass,
            ..
        } => {
            let src = std::sync::Arc::new(source.build()?);
            let tgt = match target {
                Some(t) => std::sync::Arc::new(t.build()?),
                None => src.clone(),
            };
            let eps = eps.unwrap_or(tgt.eps);
            let morphism =
                MorphismDescriptor::new(src.clone(), tgt.clone(), map.build(), map.describe());
            let sample_set = src.carrier.sample(seed, *samples)?;
            let report = check_approx_homomorphism(&morphism, eps, &sample_set)?;
            let detail = MorphismDetail {
                map: morphism.name.clone(),
                source: src.label.clone(),
                target: tgt.label.clone(),
                eps,
                similarity_preserving: report.similarity_preserving.pass,
                worst_margin: report.similarity_preserving.worst_margin,
                hom_defect_add: report.hom_defect_add.as_ref().map(|d| d.max_defect),
                hom_defect_mul: report.hom_defect_mul.as_ref().map(|d| d.max_defect),
                passes_at_eps: report.passes_at_eps,
            };
            Ok((
                report.passes_at_eps == *expect_pass,
                TaskDetail::Morphism(detail),
                Vec::new(),
            ))
        }
    }
}

fn sample_for_family(family: &FamilyConfig, seed: u64, count: usize) -> Result<SampleSet> {
    SampleSet::generate(seed, family.sample_domain()?, count)
}

/// Execute every task in order; returns the report document and whether all
/// pass-conditions held.
pub fn run_all(
    config: &RunConfig,
    config_bytes: &[u8],
    cli_seed: Option<u64>,
    out_dir: &Path,
) -> (ReportDocument, bool, bool) {
    let mut tasks = Vec::new();
    let mut all_pass = true;
    let mut any_error = false;
    for task in &config.tasks {
        let seed = match config.task_seed(task, cli_seed) {
            Ok(s) => Some(s),
            Err(e) => {
                any_error = true;
                all_pass = false;
                tasks.push(TaskReport {
                    name: task.name().to_string(),
                    task_type: task.kind_name().to_string(),
                    seed: None,
                    status: TaskStatus::Error,
                    error: Some(e.to_string()),
                    detail: None,
                    files: Vec::new(),
                });
                continue;
            }
        };
        match run_task(task, seed.unwrap(), out_dir) {
            Ok((pass, detail, files)) => {
                if !pass {
                    all_pass = false;
                }
                tasks.push(TaskReport {
                    name: task.name().to_string(),
                    task_type: task.kind_name().to_string(),
                    seed,
                    status: if pass { TaskStatus::Pass } else { TaskStatus::Fail },
                    error: None,
                    detail: Some(detail),
                    files,
                });
            }
            Err(e) => {
                any_error = true;
                all_pass = false;
                tasks.push(TaskReport {
                    name: task.name().to_string(),
                    task_type: task.kind_name().to_string(),
                    seed,
                    status: TaskStatus::Error,
                    error: Some(e.to_string()),
                    detail: None,
                    files: Vec::new(),
                });
            }
        }
    }
    let doc = ReportDocument {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config_digest: config_digest(config_bytes),
        seed_override: cli_seed,
        tasks,
        overall_pass: all_pass,
    };
    (doc, all_pass, any_error)
}
