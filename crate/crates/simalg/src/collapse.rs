//! Classical-limit verification: sweep the tolerance over a grid, measure
//! per-axiom defects on one shared sample set, fit log-log convergence
//! rates, and grade whether every axiom's defect vanishes as eps -> 0.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::sample::SampleSet;
use crate::structures::{axiom_catalog, axiom_defect, StructureDescriptor};

/// Defects below this are considered exactly zero up to binary64 rounding;
/// a whole curve below it is degenerate (an exact identity, no rate to fit).
pub const DEGENERACY_FLOOR: f64 = 1e-12;

/// Points below this are excluded from log-log fits (rounding noise would
/// corrupt the slope).
pub const FIT_FLOOR: f64 = 1e-13;

/// Relative slack for the nonincreasing check: max-defect over a finite
/// sample is itself an estimator.
pub const MONOTONE_SLACK: f64 = 0.10;

/// A verdict requires the final defect to be within this factor of the final
/// tolerance; the factor absorbs the bounded constants axiom defects carry on
/// a fixed box.
pub const COLLAPSE_FACTOR: f64 = 10.0;

/// A structure family indexed by tolerance, with its declared classical
/// limit. The member at eps = 0 must agree with the classical limit
/// pointwise (checked within rounding by tests).
#[derive(Clone)]
pub struct EpsilonFamily {
    pub name: String,
    make: Arc<dyn Fn(f64) -> Result<StructureDescriptor> + Send + Sync>,
    classical: Arc<dyn Fn() -> Result<StructureDescriptor> + Send + Sync>,
}

impl EpsilonFamily {
    pub fn new(
        name: impl Into<String>,
        make: impl Fn(f64) -> Result<StructureDescriptor> + Send + Sync + 'static,
        classical: impl Fn() -> Result<StructureDescriptor> + Send + Sync + 'static,
    ) -> Self {
        EpsilonFamily {
            name: name.into(),
            make: Arc::new(make),
            classical: Arc::new(classical),
        }
    }

    pub fn at(&self, eps: f64) -> Result<StructureDescriptor> {
        (self.make)(eps)
    }

    pub fn classical_limit(&self) -> Result<StructureDescriptor> {
        (self.classical)()
    }
}

impl std::fmt::Debug for EpsilonFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "EpsilonFamily({})", self.name)
    }
}

/// One measurement on a collapse curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvePoint {
    pub eps: f64,
    pub max_defect: f64,
    pub mean_defect: f64,
}

/// Measured defect of one axiom across the tolerance grid.
#[derive(Clone, Debug)]
pub struct CollapseCurve {
    pub axiom: String,
    pub points: Vec<CurvePoint>,
    /// Set when every defect sits at the rounding floor: the axiom is an
    /// exact identity of the family, not an approximate one.
    pub degenerate: bool,
}

/// Least-squares line through (log eps, log defect).
#[derive(Clone, Copy, Debug)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points_used: usize,
}

impl SlopeFit {
    /// A rate claim needs a good linear fit; otherwise report inconclusive.
    pub fn is_conclusive(&self) -> bool {
        self.r_squared >= 0.9
    }
}

/// Outcome of rate fitting.
#[derive(Clone, Copy, Debug)]
pub enum RateFit {
    /// The curve is an exact identity: nothing to fit.
    ExactIdentity,
    /// Fewer than 3 points above the fit floor.
    TooFewPoints { points_used: usize },
    Fitted(SlopeFit),
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Input("tolerance grid is empty".into()));
    }
    for w in grid.windows(2) {
        if w[1] >= w[0] {
            return Err(Error::Input("tolerance grid must be strictly decreasing".into()));
        }
    }
    if grid.iter().any(|&e| e <= 0.0) {
        return Err(Error::Input("tolerance grid must be positive".into()));
    }
    Ok(())
}

/// Default grid: 8 points, geometric from 1e-1 down to 1e-6.
pub fn default_grid() -> Vec<f64> {
    geometric_grid(1e-1, 1e-6, 8)
}

pub fn geometric_grid(hi: f64, lo: f64, points: usize) -> Vec<f64> {
    assert!(points >= 2 && hi > lo && lo > 0.0);
    let ratio = (lo / hi).powf(1.0 / (points - 1) as f64);
    (0..points).map(|i| hi * ratio.powi(i as i32)).collect()
}

/// Measure one axiom's defect at every tolerance in the grid, reusing the
/// same sample set throughout (paired comparison: curves of families whose
/// defect has a smooth leading term come out monotone).
pub fn collapse_curve(
    family: &EpsilonFamily,
    axiom_name: &str,
    grid: &[f64],
    samples: &SampleSet,
) -> Result<CollapseCurve> {
    validate_grid(grid)?;
    let kind = family.at(grid[0])?.kind;
    let axiom = axiom_catalog(kind)
        .into_iter()
        .find(|a| a.name == axiom_name)
        .ok_or_else(|| {
            Error::Input(format!("kind {} has no axiom `{axiom_name}`", kind.name()))
        })?;
    let mut points = Vec::with_capacity(grid.len());
    for &eps in grid {
        let desc = family.at(eps)?;
        let (stats, _) = axiom_defect(&desc, &axiom, samples)
            .map_err(|e| Error::Input(format!("at eps = {eps}: {e}")))?;
        points.push(CurvePoint {
            eps,
            max_defect: stats.max_defect,
            mean_defect: stats.mean_defect,
        });
    }
    let degenerate = points.iter().all(|p| p.max_defect <= DEGENERACY_FLOOR);
    Ok(CollapseCurve {
        axiom: axiom_name.to_string(),
        points,
        degenerate,
    })
}

/// Fit the empirical convergence order of a curve.
pub fn fit_rate(curve: &CollapseCurve) -> RateFit {
    if curve.degenerate {
        return RateFit::ExactIdentity;
    }
    let usable: Vec<(f64, f64)> = curve
        .points
        .iter()
        .filter(|p| p.max_defect > FIT_FLOOR)
        .map(|p| (p.eps.ln(), p.max_defect.ln()))
        .collect();
    if usable.len() < 3 {
        return RateFit::TooFewPoints {
            points_used: usable.len(),
        };
    }
    let n = usable.len() as f64;
    let mean_x = usable.iter().map(|(x, _)| x).sum::<f64>() / n;
    let mean_y = usable.iter().map(|(_, y)| y).sum::<f64>() / n;
    let sxx: f64 = usable.iter().map(|(x, _)| (x - mean_x).powi(2)).sum();
    let sxy: f64 = usable.iter().map(|(x, y)| (x - mean_x) * (y - mean_y)).sum();
    let syy: f64 = usable.iter().map(|(_, y)| (y - mean_y).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res: f64 = usable
        .iter()
        .map(|(x, y)| (y - (slope * x + intercept)).powi(2))
        .sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    RateFit::Fitted(SlopeFit {
        slope,
        intercept,
        r_squared,
        points_used: usable.len(),
    })
}

/// Per-axiom collapse verdict. An axiom passes when its curve is degenerate
/// (exact identity) or its defects are nonincreasing within slack and the
/// final defect is within [`COLLAPSE_FACTOR`] of the final tolerance.
#[derive(Clone, Debug)]
pub struct AxiomVerdict {
    pub axiom: String,
    pub pass: bool,
    pub degenerate: bool,
    pub nonincreasing: bool,
    pub final_eps: f64,
    pub final_defect: f64,
    pub rate: RateFit,
    pub curve: CollapseCurve,
}

fn nonincreasing_within_slack(points: &[CurvePoint]) -> bool {
    points.windows(2).all(|w| {
        w[1].max_defect <= w[0].max_defect * (1.0 + MONOTONE_SLACK) + FIT_FLOOR
    })
}

/// Grade one curve.
pub fn verdict_for(curve: CollapseCurve) -> AxiomVerdict {
    let last = *curve.points.last().expect("curve has points");
    let nonincreasing = nonincreasing_within_slack(&curve.points);
    let pass = curve.degenerate
        || (nonincreasing && last.max_defect <= COLLAPSE_FACTOR * last.eps + FIT_FLOOR);
    let rate = fit_rate(&curve);
    AxiomVerdict {
        axiom: curve.axiom.clone(),
        pass,
        degenerate: curve.degenerate,
        nonincreasing,
        final_eps: last.eps,
        final_defect: last.max_defect,
        rate,
        curve,
    }
}

/// Sweep every axiom of the family's kind across the grid and grade each.
/// The verdict table is the empirical statement that the family collapses to
/// its classical limit.
pub fn verify_collapse(
    family: &EpsilonFamily,
    grid: &[f64],
    samples: &SampleSet,
) -> Result<Vec<AxiomVerdict>> {
    validate_grid(grid)?;
    let kind = family.at(grid[0])?.kind;
    let mut verdicts = Vec::new();
    for axiom in axiom_catalog(kind) {
        let curve = collapse_curve(family, axiom.name, grid, samples)?;
        verdicts.push(verdict_for(curve));
    }
    Ok(verdicts)
}
