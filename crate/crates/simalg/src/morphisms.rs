//! Maps between similarity structures: similarity preservation, approximate
//! homomorphism defects, composition and identity laws, and the discrete
//! embedding of classical algebra.

use std::sync::Arc;

use crate::defect::DefectStatistics;
use crate::error::{Error, Result};
use crate::metric::{similarity_threshold, Metric, SimilarityMode};
use crate::point::Point;
use crate::sample::SampleSet;
use crate::structures::{audit, BinaryOp, StructureDescriptor};

pub type PointMap = Arc<dyn Fn(&Point) -> Result<Point> + Send + Sync>;

/// A map between two structures. Checks are elementwise over samples.
#[derive(Clone)]
pub struct MorphismDescriptor {
    pub source: Arc<StructureDescriptor>,
    pub target: Arc<StructureDescriptor>,
    pub map: PointMap,
    pub name: String,
}

impl MorphismDescriptor {
    pub fn new(
        source: Arc<StructureDescriptor>,
        target: Arc<StructureDescriptor>,
        map: PointMap,
        name: impl Into<String>,
    ) -> Self {
        MorphismDescriptor {
            source,
            target,
            map,
            name: name.into(),
        }
    }

    pub fn apply(&self, p: &Point) -> Result<Point> {
        (self.map)(p)
    }
}

impl std::fmt::Debug for MorphismDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "MorphismDescriptor({}: {} -> {})",
            self.name, self.source.label, self.target.label
        )
    }
}

/// Ready-made maps for configs and tests.
pub mod maps {
    use super::*;

    pub fn identity() -> PointMap {
        Arc::new(|p| Ok(p.clone()))
    }

    pub fn scaling(c: f64) -> PointMap {
        Arc::new(move |p| Ok(p.exact_scale(c)))
    }

    /// x -> a*x + b on scalars.
    pub fn affine(a: f64, b: f64) -> PointMap {
        Arc::new(move |p| match p {
            Point::Scalar(x) => Ok(Point::scalar(a * x + b)),
            other => Err(Error::Input(format!("affine map expects scalars, got {}", other.shape()))),
        })
    }

    /// x -> (c*x) mod k on scalar-encoded residues.
    pub fn mod_linear(c: f64, k: f64) -> PointMap {
        Arc::new(move |p| match p {
            Point::Scalar(x) => Ok(Point::scalar((c * x).rem_euclid(k))),
            other => Err(Error::Input(format!("modular map expects scalars, got {}", other.shape()))),
        })
    }

    /// Tabulated map on a finite scalar carrier (exact lookup).
    pub fn tabulated(pairs: Vec<(f64, f64)>) -> PointMap {
        Arc::new(move |p| match p {
            Point::Scalar(x) => pairs
                .iter()
                .find(|(from, _)| from == x)
                .map(|(_, to)| Point::scalar(*to))
                .ok_or_else(|| Error::Input(format!("{x} is not in the tabulated domain"))),
            other => Err(Error::Input(format!("tabulated map expects scalars, got {}", other.shape()))),
        })
    }
}

/// Result of the similarity-preservation check s_A(x,y) <= s_B(f(x), f(y)).
#[derive(Clone, Debug)]
pub struct PreservationReport {
    pub pass: bool,
    /// min over sampled pairs of s_B - s_A; preservation means >= 0 (up to
    /// rounding slack).
    pub worst_margin: f64,
    pub witness: Option<(Point, Point)>,
    pub pairs_checked: usize,
}

const PRESERVATION_SLACK: f64 = 1e-12;

fn similarity_score(d: f64, mode: SimilarityMode) -> f64 {
    // Monotone decreasing in d in both modes; for the bounded mode the
    // affine form is kept even when d > 1 so comparisons stay meaningful on
    // wide boxes.
    match mode {
        SimilarityMode::Bounded => 1.0 - d,
        SimilarityMode::Unbounded => 1.0 / (1.0 + d),
    }
}

/// Verify that the map never destroys similarity on sampled pairs.
pub fn check_similarity_preserving(
    m: &MorphismDescriptor,
    samples: &SampleSet,
) -> Result<PreservationReport> {
    if m.source.similarity_mode != m.target.similarity_mode {
        return Err(Error::Config(
            "source and target must use the same similarity mode".into(),
        ));
    }
    let mode = m.source.similarity_mode;
    let pairs = samples.tuple_indices(2)?;
    let mut worst = f64::INFINITY;
    let mut witness = None;
    for idx in &pairs {
        let pts = samples.tuple(idx);
        let s_a = similarity_score(m.source.metric.distance(&pts[0], &pts[1])?, mode);
        let fx = m.apply(&pts[0])?;
        let fy = m.apply(&pts[1])?;
        let s_b = similarity_score(m.target.metric.distance(&fx, &fy)?, mode);
        let margin = s_b - s_a;
        if margin < worst {
            worst = margin;
            witness = Some((pts[0].clone(), pts[1].clone()));
        }
    }
    Ok(PreservationReport {
        pass: worst >= -PRESERVATION_SLACK,
        worst_margin: worst,
        witness,
        pairs_checked: pairs.len(),
    })
}

/// Homomorphism defects of a map, one per operation shared by both
/// structures, measured in the target's metric.
#[derive(Clone, Debug)]
pub struct MorphismReport {
    pub similarity_preserving: PreservationReport,
    pub hom_defect_add: Option<DefectStatistics>,
    pub hom_defect_mul: Option<DefectStatistics>,
    /// Both measured defects satisfy the similarity-form bound
    /// s_B >= threshold(eps), i.e. d_B within the tolerance.
    pub passes_at_eps: bool,
}

fn hom_defect(
    m: &MorphismDescriptor,
    src_op: &BinaryOp,
    tgt_op: &BinaryOp,
    samples: &SampleSet,
) -> Result<DefectStatistics> {
    let f = |args: &[Point]| m.apply(&src_op(&args[0], &args[1])?);
    let g = |args: &[Point]| tgt_op(&m.apply(&args[0])?, &m.apply(&args[1])?);
    crate::defect::defect(f, g, 2, samples, &m.target.metric)
}

/// Measure d_B(f(x o y), f(x) o f(y)) for each shared operation; the map
/// passes at `eps` when every defect converts to a similarity of at least
/// the eps threshold. Multiplicative defects are measured only when both
/// sides expose `mul` (one-operation morphisms have nothing to compare).
pub fn check_approx_homomorphism(
    m: &MorphismDescriptor,
    eps: f64,
    samples: &SampleSet,
) -> Result<MorphismReport> {
    let mode = m.target.similarity_mode;
    let preservation = check_similarity_preserving(m, samples)?;

    let mut defects = Vec::new();
    let hom_defect_add = match (&m.source.ops.add, &m.target.ops.add) {
        (Some(s), Some(t)) => {
            let d = hom_defect(m, s, t, samples)?;
            defects.push(d.max_defect);
            Some(d)
        }
        _ => None,
    };
    let hom_defect_mul = match (&m.source.ops.mul, &m.target.ops.mul) {
        (Some(s), Some(t)) => {
            let d = hom_defect(m, s, t, samples)?;
            defects.push(d.max_defect);
            Some(d)
        }
        _ => None,
    };
    if defects.is_empty() {
        return Err(Error::Config(
            "structures share no operation to compare".into(),
        ));
    }
    let threshold = similarity_threshold(eps, mode);
    let passes_at_eps = defects
        .iter()
        .all(|&d| similarity_score(d, mode) >= threshold - PRESERVATION_SLACK);
    Ok(MorphismReport {
        similarity_preserving: preservation,
        hom_defect_add,
        hom_defect_mul,
        passes_at_eps,
    })
}

fn descriptors_compatible(a: &StructureDescriptor, b: &StructureDescriptor) -> bool {
    a.kind == b.kind
        && a.metric == b.metric
        && a.eps == b.eps
        && a.similarity_mode == b.similarity_mode
        && a.carrier.shape() == b.carrier.shape()
}

/// Compose two morphisms; the first map's target must be the second's
/// source.
pub fn compose(m1: &MorphismDescriptor, m2: &MorphismDescriptor) -> Result<MorphismDescriptor> {
    if !descriptors_compatible(&m1.target, &m2.source) {
        return Err(Error::Config(format!(
            "cannot compose: target of `{}` differs from source of `{}`",
            m1.name, m2.name
        )));
    }
    let f = m1.map.clone();
    let g = m2.map.clone();
    Ok(MorphismDescriptor::new(
        m1.source.clone(),
        m2.target.clone(),
        Arc::new(move |p| g(&f(p)?)),
        format!("{} . {}", m2.name, m1.name),
    ))
}

/// Re-equip an exactly classical structure (audit defects at the rounding
/// floor) with the discrete metric at tolerance 0. Under that embedding a
/// map passes the homomorphism check at eps = 0 exactly when it is an exact
/// homomorphism on the samples.
pub fn embed_classical(
    desc: &StructureDescriptor,
    samples: &SampleSet,
) -> Result<StructureDescriptor> {
    let report = audit(desc, samples)?;
    if report.certified_eps > 1e-12 {
        let offender = report
            .entries
            .iter()
            .max_by(|a, b| a.stats.max_defect.total_cmp(&b.stats.max_defect))
            .expect("non-empty catalog");
        return Err(Error::NotClassical(format!(
            "axiom `{}` has defect {:.3e}",
            offender.axiom, offender.stats.max_defect
        )));
    }
    let mut embedded = desc.clone();
    embedded.metric = Metric::Discrete;
    embedded.eps = 0.0;
    embedded.label = format!("{} (discrete embedding)", desc.label);
    Ok(embedded)
}
