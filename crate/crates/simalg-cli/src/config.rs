//! Declarative run configuration: structures, families, maps, and tasks.

use serde::Deserialize;
use std::sync::Arc;

use simalg::collapse::EpsilonFamily;
use simalg::error::{Error, Result};
use simalg::instances::{FloatInstance, FloatPrecision, PerturbedRealField, PerturbedVectorSpace};
use simalg::liegroup::{BilinearPerturbation, PerturbedMatrixGroup};
use simalg::morphisms::{maps, PointMap};
use simalg::point::Point;
use simalg::sample::Domain;
use simalg::structures::{Carrier, OperationTable, StructureDescriptor, StructureKind};
use simalg::Metric;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Default seed for every task. No wall-clock fallback: some seed must
    /// be present here, on the task, or via --seed.
    pub seed: Option<u64>,
    pub tasks: Vec<TaskConfig>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig> {
        let config: RunConfig = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("config parse error: {e}")))?;
        if config.tasks.is_empty() {
            return Err(Error::Config("config has no tasks".into()));
        }
        Ok(config)
    }

    /// The seed a task should use, honoring a CLI override.
    pub fn task_seed(&self, task: &TaskConfig, cli_seed: Option<u64>) -> Result<u64> {
        cli_seed
            .or(task.seed())
            .or(self.seed)
            .ok_or_else(|| Error::Config(format!("task `{}` has no seed (and no default)", task.name())))
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TaskConfig {
    /// Audit every axiom of a structure against a bound.
    Audit {
        name: String,
        structure: StructureConfig,
        seed: Option<u64>,
        #[serde(default = "default_samples")]
        samples: usize,
        /// Grading bound; defaults to the structure's own tolerance.
        bound: Option<f64>,
        #[serde(default = "default_true")]
        expect_pass: bool,
    },
    /// Sweep a family across a tolerance grid and grade every axiom.
    Collapse {
        name: String,
        family: FamilyConfig,
        grid: Option<GridConfig>,
        seed: Option<u64>,
        #[serde(default = "default_samples")]
        samples: usize,
        output: Option<String>,
        #[serde(default = "default_true")]
        expect_pass: bool,
    },
    /// Compare extracted brackets against the direct commutator.
    Bracket {
        name: String,
        n: usize,
        eps: f64,
        t: f64,
        #[serde(default = "default_pairs")]
        pairs: usize,
        seed: Option<u64>,
    },
    /// Jacobian-gap table for a matrix-group family, with rate fit.
    C1 {
        name: String,
        n: usize,
        #[serde(default)]
        phi: PhiConfig,
        grid: Option<GridConfig>,
        #[serde(default = "default_fd_step")]
        h: f64,
        #[serde(default = "default_probes")]
        probes: usize,
        seed: Option<u64>,
        output: Option<String>,
    },
    /// Fuzzy carrier: induced similarity, embedding bound, and the
    /// fuzzy-associativity inequalities.
    FuzzyEmbed {
        name: String,
        elements: Vec<f64>,
        membership: MembershipConfig,
        tnorm: String,
        op: FuzzyOpConfig,
        #[serde(default = "default_true")]
        expect_pass: bool,
    },
    /// Similarity preservation and homomorphism defects of a map.
    Morphism {
        name: String,
        source: StructureConfig,
        target: Option<StructureConfig>,
        map: MapConfig,
        eps: Option<f64>,
        seed: Option<u64>,
        #[serde(default = "default_samples")]
        samples: usize,
        #[serde(default = "default_true")]
        expect_pass: bool,
    },
}

fn default_samples() -> usize {
    simalg::DEFAULT_SAMPLE_COUNT
}

fn default_pairs() -> usize {
    20
}

fn default_probes() -> usize {
    8
}

fn default_fd_step() -> f64 {
    1e-5
}

fn default_true() -> bool {
    true
}

impl TaskConfig {
    pub fn name(&self) -> &str {
        match self {
            TaskConfig::Audit { name, .. }
            | TaskConfig::Collapse { name, .. }
            | TaskConfig::Bracket { name, .. }
            | TaskConfig::C1 { name, .. }
            | TaskConfig::FuzzyEmbed { name, .. }
            | TaskConfig::Morphism { name, .. } => name,
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            TaskConfig::Audit { seed, .. }
            | TaskConfig::Collapse { seed, .. }
            | TaskConfig::Bracket { seed, .. }
            | TaskConfig::C1 { seed, .. }
            | TaskConfig::Morphism { seed, .. } => *seed,
            TaskConfig::FuzzyEmbed { .. } => Some(0),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            TaskConfig::Audit { .. } => "audit",
            TaskConfig::Collapse { .. } => "collapse",
            TaskConfig::Bracket { .. } => "bracket",
            TaskConfig::C1 { .. } => "c1",
            TaskConfig::FuzzyEmbed { .. } => "fuzzy-embed",
            TaskConfig::Morphism { .. } => "morphism",
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum StructureConfig {
    PerturbedField {
        eps: f64,
        #[serde(rename = "box")]
        carrier_box: [f64; 2],
        exclusion_radius: Option<f64>,
        as_kind: Option<String>,
    },
    PerturbedVectorSpace {
        eps: f64,
        dim: usize,
        #[serde(rename = "box")]
        carrier_box: [f64; 2],
        scalar_box: Option<[f64; 2]>,
    },
    Float {
        precision: String,
        #[serde(rename = "box")]
        carrier_box: [f64; 2],
        as_kind: Option<String>,
    },
    MatrixGroup {
        n: usize,
        eps: f64,
        #[serde(default)]
        phi: PhiConfig,
        radius: Option<f64>,
    },
    /// Integers mod `modulus` under addition: a finite classical carrier
    /// with the discrete metric.
    ModularAdd { modulus: u64 },
}

impl StructureConfig {
    pub fn build(&self) -> Result<StructureDescriptor> {
        match self {
            StructureConfig::PerturbedField {
                eps,
                carrier_box,
                exclusion_radius,
                as_kind,
            } => {
                let mut field = PerturbedRealField::new(*eps, carrier_box[0], carrier_box[1])?;
                if let Some(r) = exclusion_radius {
                    field = field.with_exclusion_radius(*r);
                }
                let kind = match as_kind {
                    Some(k) => StructureKind::parse(k)?,
                    None => StructureKind::Field,
                };
                field.as_structure(kind)
            }
            StructureConfig::PerturbedVectorSpace {
                eps,
                dim,
                carrier_box,
                scalar_box,
            } => {
                let vs = PerturbedVectorSpace::new(*dim, *eps, carrier_box[0], carrier_box[1])?;
                let mut desc = vs.as_structure(StructureKind::VectorSpace)?;
                if let Some([lo, hi]) = scalar_box {
                    desc = desc.with_scalar_box(*lo, *hi);
                }
                Ok(desc)
            }
            StructureConfig::Float {
                precision,
                carrier_box,
                as_kind,
            } => {
                let precision = match precision.as_str() {
                    "binary32" => FloatPrecision::Binary32,
                    "binary64" => FloatPrecision::Binary64,
                    other => return Err(Error::Config(format!("unknown precision `{other}`"))),
                };
                let inst = FloatInstance::new(precision, carrier_box[0], carrier_box[1])?;
                let kind = match as_kind {
                    Some(k) => StructureKind::parse(k)?,
                    None => StructureKind::Monoid,
                };
                inst.as_structure(kind)
            }
            StructureConfig::MatrixGroup { n, eps, phi, radius } => {
                let mut grp = PerturbedMatrixGroup::new(*n, *eps, phi.build()?)?;
                if let Some(r) = radius {
                    grp = grp.with_radius(*r);
                }
                grp.as_structure()
            }
            StructureConfig::ModularAdd { modulus } => modular_add_structure(*modulus),
        }
    }
}

pub fn modular_add_structure(modulus: u64) -> Result<StructureDescriptor> {
    if modulus == 0 {
        return Err(Error::Config("modulus must be positive".into()));
    }
    let m = modulus as f64;
    let ops = OperationTable::builder()
        .mul(move |x, y| {
            let (a, b) = (scalar(x)?, scalar(y)?);
            Ok(Point::scalar((a + b).rem_euclid(m)))
        })
        .one(Point::scalar(0.0))
        .inv(move |x| Ok(Point::scalar((-scalar(x)?).rem_euclid(m))))
        .build();
    let elements: Vec<Point> = (0..modulus).map(|k| Point::scalar(k as f64)).collect();
    Ok(StructureDescriptor::new(
        StructureKind::AbelianGroup,
        Carrier::finite(elements),
        Metric::Discrete,
        0.0,
        ops,
    )
    .with_label(format!("integers-mod-{modulus}")))
}

fn scalar(p: &Point) -> Result<f64> {
    p.as_scalar()
        .ok_or_else(|| Error::Input(format!("expected a scalar point, got {}", p.shape())))
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FamilyConfig {
    PerturbedField {
        #[serde(rename = "box")]
        carrier_box: [f64; 2],
        /// Kept independent of the grid so inverse-axiom sampling is paired
        /// across tolerances.
        #[serde(default = "default_exclusion_radius")]
        exclusion_radius: f64,
    },
    PerturbedVectorSpace {
        dim: usize,
        #[serde(rename = "box")]
        carrier_box: [f64; 2],
    },
    MatrixGroup {
        n: usize,
        #[serde(default)]
        phi: PhiConfig,
        radius: Option<f64>,
    },
    /// Synthetic family whose identity element is shifted by a constant
    /// offset at every tolerance; its identity axioms never collapse.
    ConstantDefect { offset: f64 },
}

fn default_exclusion_radius() -> f64 {
    0.25
}

impl FamilyConfig {
    pub fn build(&self) -> Result<EpsilonFamily> {
        match self {
            FamilyConfig::PerturbedField {
                carrier_box,
                exclusion_radius,
            } => {
                let [lo, hi] = *carrier_box;
                let radius = *exclusion_radius;
                Ok(EpsilonFamily::new(
                    "perturbed-field",
                    move |eps| {
                        PerturbedRealField::new(eps, lo, hi)?
                            .with_exclusion_radius(radius)
                            .as_structure(StructureKind::Field)
                    },
                    move || {
                        PerturbedRealField::new(0.0, lo, hi)?
                            .with_exclusion_radius(radius)
                            .as_structure(StructureKind::Field)
                    },
                ))
            }
            FamilyConfig::PerturbedVectorSpace { dim, carrier_box } => {
                let [lo, hi] = *carrier_box;
                let dim = *dim;
                Ok(EpsilonFamily::new(
                    "perturbed-vector-space",
                    move |eps| {
                        PerturbedVectorSpace::new(dim, eps, lo, hi)?
                            .as_structure(StructureKind::VectorSpace)
                    },
                    move || {
                        PerturbedVectorSpace::new(dim, 0.0, lo, hi)?
                            .as_structure(StructureKind::VectorSpace)
                    },
                ))
            }
            FamilyConfig::MatrixGroup { n, phi, radius } => {
                let n = *n;
                let phi = phi.clone();
                let radius = *radius;
                let make = move |eps: f64| {
                    let mut grp = PerturbedMatrixGroup::new(n, eps, phi.build()?)?;
                    if let Some(r) = radius {
                        grp = grp.with_radius(r);
                    }
                    grp.as_structure()
                };
                let make_classical = make.clone();
                Ok(EpsilonFamily::new(
                    "matrix-group",
                    make,
                    move || make_classical(0.0),
                ))
            }
            FamilyConfig::ConstantDefect { offset } => {
                let offset = *offset;
                let make = move |_eps: f64| {
                    let ops = OperationTable::builder()
                        .mul(|x, y| Ok(Point::scalar(scalar(x)? + scalar(y)?)))
                        .one(Point::scalar(offset))
                        .build();
                    Ok(StructureDescriptor::new(
                        StructureKind::Monoid,
                        Carrier::boxed(Domain::scalar(-1.0, 1.0)?),
                        Metric::AbsoluteDifference,
                        0.0,
                        ops,
                    )
                    .with_label("constant-defect"))
                };
                Ok(EpsilonFamily::new("constant-defect", make, move || make(0.0)))
            }
        }
    }

    /// Default tolerance grid for this family. Matrix-group grids start at
    /// 1e-2 so the inverse solver's contraction precondition holds on the
    /// default carrier ball.
    pub fn default_grid(&self) -> Vec<f64> {
        match self {
            FamilyConfig::MatrixGroup { .. } => simalg::collapse::geometric_grid(1e-2, 1e-6, 8),
            _ => simalg::collapse::default_grid(),
        }
    }

    /// Sample domain matching the family's carrier.
    pub fn sample_domain(&self) -> Result<Domain> {
        match self {
            FamilyConfig::PerturbedField { carrier_box, .. } => {
                Domain::scalar(carrier_box[0], carrier_box[1])
            }
            FamilyConfig::PerturbedVectorSpace { dim, carrier_box } => {
                Domain::vector(*dim, carrier_box[0], carrier_box[1])
            }
            FamilyConfig::MatrixGroup { n, radius, .. } => {
                let r = radius.unwrap_or(simalg::liegroup::DEFAULT_CARRIER_RADIUS);
                Domain::matrix_near_identity(*n, r / *n as f64)
            }
            FamilyConfig::ConstantDefect { .. } => Domain::scalar(-1.0, 1.0),
        }
    }
}

#[derive(Clone, Debug, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum PhiConfig {
    #[default]
    Commutator,
    ScaledCommutator(f64),
    TracelessProduct,
}

impl PhiConfig {
    pub fn build(&self) -> Result<BilinearPerturbation> {
        Ok(match self {
            PhiConfig::Commutator => BilinearPerturbation::Commutator,
            PhiConfig::ScaledCommutator(c) => BilinearPerturbation::ScaledCommutator(*c),
            PhiConfig::TracelessProduct => BilinearPerturbation::TracelessProduct,
        })
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub hi: f64,
    pub lo: f64,
    pub points: usize,
}

impl GridConfig {
    pub fn build(&self) -> Result<Vec<f64>> {
        if !(self.points >= 2 && self.hi > self.lo && self.lo > 0.0) {
            return Err(Error::Config("grid needs points >= 2 and hi > lo > 0".into()));
        }
        Ok(simalg::collapse::geometric_grid(self.hi, self.lo, self.points))
    }
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MembershipConfig {
    /// Explicit per-element membership values.
    Table(Vec<f64>),
    /// Named formula evaluated on elements (and on operation outputs).
    Formula(String),
}

impl MembershipConfig {
    pub fn build(&self, elements: &[f64]) -> Result<simalg::fuzzy::FuzzySet> {
        match self {
            MembershipConfig::Table(mu) => {
                simalg::fuzzy::FuzzySet::from_table(elements.to_vec(), mu.clone())
            }
            MembershipConfig::Formula(name) => match name.as_str() {
                "inv-one-plus-abs" => simalg::fuzzy::FuzzySet::from_formula(
                    elements.to_vec(),
                    |x| 1.0 / (1.0 + x.abs()),
                ),
                "full" => simalg::fuzzy::FuzzySet::from_formula(elements.to_vec(), |_| 1.0),
                other => Err(Error::Config(format!("unknown membership formula `{other}`"))),
            },
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FuzzyOpConfig {
    /// Addition mod k.
    ModularAdd(f64),
    /// Plain addition (use with a formula membership, since sums may leave
    /// the element list).
    Add,
}

impl FuzzyOpConfig {
    pub fn build(&self) -> Arc<dyn Fn(f64, f64) -> f64 + Send + Sync> {
        match self {
            FuzzyOpConfig::ModularAdd(k) => {
                let k = *k;
                Arc::new(move |x, y| (x + y).rem_euclid(k))
            }
            FuzzyOpConfig::Add => Arc::new(|x, y| x + y),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapConfig {
    Identity,
    Scaling(f64),
    Affine([f64; 2]),
    ModLinear { factor: f64, modulus: f64 },
    Tabulated(Vec<[f64; 2]>),
}

impl MapConfig {
    pub fn build(&self) -> PointMap {
        match self {
            MapConfig::Identity => maps::identity(),
            MapConfig::Scaling(c) => maps::scaling(*c),
            MapConfig::Affine([a, b]) => maps::affine(*a, *b),
            MapConfig::ModLinear { factor, modulus } => maps::mod_linear(*factor, *modulus),
            MapConfig::Tabulated(pairs) => {
                maps::tabulated(pairs.iter().map(|[a, b]| (*a, *b)).collect())
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            MapConfig::Identity => "identity".into(),
            MapConfig::Scaling(c) => format!("scaling({c})"),
            MapConfig::Affine([a, b]) => format!("affine({a}, {b})"),
            MapConfig::ModLinear { factor, modulus } => format!("{factor}x mod {modulus}"),
            MapConfig::Tabulated(_) => "tabulated".into(),
        }
    }
}
