//! Defect measurement: how far two expressions are from agreeing under a
//! metric, aggregated over a sample set.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metric::Metric;
use crate::point::Point;
use crate::sample::SampleSet;

/// Aggregate defect over a sample set. The defect of a tuple is the metric
/// distance between the two compared expressions evaluated on it.
///
/// Axioms are universally quantified, so `max_defect` is the faithful check;
/// `mean_defect` is diagnostic. `argmax_witness` is the tuple achieving the
/// max and re-evaluates to it exactly.
#[derive(Clone, Debug)]
pub struct DefectStatistics {
    pub max_defect: f64,
    pub mean_defect: f64,
    pub argmax_witness: Vec<Point>,
    /// Number of tuples actually measured.
    pub count: usize,
}

/// Reduce per-tuple defect values (in tuple order, so the mean is
/// independent of evaluation scheduling).
pub(crate) fn reduce_defects(
    defects: &[f64],
    witness: impl Fn(usize) -> Vec<Point>,
) -> Result<DefectStatistics> {
    if defects.is_empty() {
        return Err(Error::Estimation("no tuples to measure".into()));
    }
    let mut max = f64::NEG_INFINITY;
    let mut argmax = 0usize;
    let mut sum = 0.0;
    for (i, &d) in defects.iter().enumerate() {
        sum += d;
        if d > max {
            max = d;
            argmax = i;
        }
    }
    Ok(DefectStatistics {
        max_defect: max,
        mean_defect: sum / defects.len() as f64,
        argmax_witness: witness(argmax),
        count: defects.len(),
    })
}

/// Measure the defect between two evaluable expressions over a sample set.
///
/// Both are evaluated on every tuple of the given arity; the distance between
/// their outputs is the tuple's defect. Deterministic given the samples.
pub fn defect<F, G>(
    f: F,
    g: G,
    arity: usize,
    samples: &SampleSet,
    metric: &Metric,
) -> Result<DefectStatistics>
where
    F: Fn(&[Point]) -> Result<Point> + Sync,
    G: Fn(&[Point]) -> Result<Point> + Sync,
{
    let tuples = samples.tuple_indices(arity)?;
    let evaluated: Vec<Result<f64>> = tuples
        .par_iter()
        .map(|idx| {
            let args = samples.tuple(idx);
            let fv = f(&args)?;
            let gv = g(&args)?;
            let d = metric.distance(&fv, &gv)?;
            if !d.is_finite() {
                return Err(Error::Eval {
                    witness: args,
                    reason: format!("non-finite defect {d}"),
                });
            }
            Ok(d)
        })
        .collect();
    let mut defects = Vec::with_capacity(evaluated.len());
    for r in evaluated {
        defects.push(r?);
    }
    reduce_defects(&defects, |i| samples.tuple(&tuples[i]))
}

/// Sampled lower bound on the Lipschitz constant of a binary operation:
/// the max over sampled pairs of input pairs of
/// d(op(x,y), op(x',y')) / (d(x,x') + d(y,y')), skipping zero denominators.
///
/// This is an estimate from below, never a certified upper bound.
pub fn estimate_lipschitz<F>(
    op: F,
    samples: &SampleSet,
    metric: &Metric,
    trials: usize,
) -> Result<f64>
where
    F: Fn(&Point, &Point) -> Result<Point> + Sync,
{
    if trials == 0 {
        return Err(Error::Input("trials must be >= 1".into()));
    }
    if samples.len() < 2 {
        return Err(Error::Input("need at least 2 sample points".into()));
    }
    let n = samples.len();
    let stride = (n / 4).max(1);
    let points = samples.points();
    let ratios: Vec<Result<Option<f64>>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let x = &points[i % n];
            let y = &points[(i + stride) % n];
            let x2 = &points[(i + 2 * stride) % n];
            let y2 = &points[(i + 3 * stride) % n];
            let denom = metric.distance(x, x2)? + metric.distance(y, y2)?;
            if denom == 0.0 {
                return Ok(None);
            }
            let num = metric.distance(&op(x, y)?, &op(x2, y2)?)?;
            Ok(Some(num / denom))
        })
        .collect();
    let mut best: Option<f64> = None;
    for r in ratios {
        if let Some(v) = r? {
            best = Some(best.map_or(v, |b| b.max(v)));
        }
    }
    best.ok_or_else(|| Error::Estimation("all sampled pairs were degenerate".into()))
}
