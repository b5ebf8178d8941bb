//! Structure kinds, their axiom catalogs, and the auditor.
//!
//! A [`StructureDescriptor`] is the executable form of an approximate
//! algebraic structure: a carrier, a metric, a tolerance, and a table of
//! named operations. [`axiom_catalog`] lists, for every kind in the hierarchy
//! semigroup .. field / module .. Lie algebra, the defining axioms as pairs of
//! expression trees; [`audit`] measures the metric defect of each axiom over
//! a sample set and grades it against the tolerance.

use std::sync::Arc;

use rayon::prelude::*;

use crate::defect::{reduce_defects, DefectStatistics};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::metric::{Metric, SimilarityMode};
use crate::point::{Point, PointShape};
use crate::sample::{scalar_stream, Domain, SampleSet};

pub type BinaryOp = Arc<dyn Fn(&Point, &Point) -> Result<Point> + Send + Sync>;
pub type UnaryOp = Arc<dyn Fn(&Point) -> Result<Point> + Send + Sync>;
pub type ExclusionFn = Arc<dyn Fn(&Point) -> bool + Send + Sync>;

/// Named operations of a structure. Group-like kinds keep their single
/// operation in the `mul` slot with identity `one` and inverse `inv`;
/// ring-like kinds use both slots.
#[derive(Clone, Default)]
pub struct OperationTable {
    pub add: Option<BinaryOp>,
    pub mul: Option<BinaryOp>,
    pub zero: Option<Point>,
    pub one: Option<Point>,
    /// Approximate additive inverse.
    pub neg: Option<UnaryOp>,
    /// Approximate multiplicative inverse; undefined exactly on the
    /// exclusion set.
    pub inv: Option<UnaryOp>,
    /// Predicate for points where `inv` is not defined (e.g. near-zero field
    /// elements). Axioms referencing `inv` skip excluded tuples.
    pub inv_exclusion: Option<ExclusionFn>,
    pub scalar_action: Option<BinaryOp>,
    pub bracket: Option<BinaryOp>,
}

impl OperationTable {
    pub fn builder() -> OperationTableBuilder {
        OperationTableBuilder::default()
    }

    fn has(&self, sym: &str) -> bool {
        match sym {
            "add" => self.add.is_some(),
            "mul" => self.mul.is_some(),
            "zero" => self.zero.is_some(),
            "one" => self.one.is_some(),
            "neg" => self.neg.is_some(),
            "inv" => self.inv.is_some(),
            "scalar_action" => self.scalar_action.is_some(),
            "bracket" => self.bracket.is_some(),
            _ => false,
        }
    }

    pub fn is_excluded(&self, p: &Point) -> bool {
        self.inv_exclusion.as_ref().is_some_and(|f| f(p))
    }
}

impl std::fmt::Debug for OperationTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let present: Vec<&str> = [
            "add", "mul", "zero", "one", "neg", "inv", "scalar_action", "bracket",
        ]
        .into_iter()
        .filter(|s| self.has(s))
        .collect();
        write!(f, "OperationTable{present:?}")
    }
}

#[derive(Default)]
pub struct OperationTableBuilder {
    table: OperationTable,
}

#[allow(clippy::should_implement_trait)]
impl OperationTableBuilder {
    pub fn add(mut self, f: impl Fn(&Point, &Point) -> Result<Point> + Send + Sync + 'static) -> Self {
        self.table.add = Some(Arc::new(f));
        self
    }

    pub fn mul(mut self, f: impl Fn(&Point, &Point) -> Result<Point> + Send + Sync + 'static) -> Self {
        self.table.mul = Some(Arc::new(f));
        self
    }

    pub fn zero(mut self, p: Point) -> Self {
        self.table.zero = Some(p);
        self
    }

    pub fn one(mut self, p: Point) -> Self {
        self.table.one = Some(p);
        self
    }

    pub fn neg(mut self, f: impl Fn(&Point) -> Result<Point> + Send + Sync + 'static) -> Self {
        self.table.neg = Some(Arc::new(f));
        self
    }

    pub fn inv(mut self, f: impl Fn(&Point) -> Result<Point> + Send + Sync + 'static) -> Self {
        self.table.inv = Some(Arc::new(f));
        self
    }

    pub fn inv_exclusion(mut self, f: impl Fn(&Point) -> bool + Send + Sync + 'static) -> Self {
        self.table.inv_exclusion = Some(Arc::new(f));
        self
    }

    pub fn scalar_action(
        mut self,
        f: impl Fn(&Point, &Point) -> Result<Point> + Send + Sync + 'static,
    ) -> Self {
        self.table.scalar_action = Some(Arc::new(f));
        self
    }

    pub fn bracket(
        mut self,
        f: impl Fn(&Point, &Point) -> Result<Point> + Send + Sync + 'static,
    ) -> Self {
        self.table.bracket = Some(Arc::new(f));
        self
    }

    pub fn build(self) -> OperationTable {
        self.table
    }
}

/// The structure hierarchy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StructureKind {
    Semigroup,
    Monoid,
    AbelianMonoid,
    Group,
    AbelianGroup,
    Semiring,
    Ring,
    Field,
    Module,
    VectorSpace,
    LieAlgebra,
}

impl StructureKind {
    pub const ALL: [StructureKind; 11] = [
        StructureKind::Semigroup,
        StructureKind::Monoid,
        StructureKind::AbelianMonoid,
        StructureKind::Group,
        StructureKind::AbelianGroup,
        StructureKind::Semiring,
        StructureKind::Ring,
        StructureKind::Field,
        StructureKind::Module,
        StructureKind::VectorSpace,
        StructureKind::LieAlgebra,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            StructureKind::Semigroup => "semigroup",
            StructureKind::Monoid => "monoid",
            StructureKind::AbelianMonoid => "abelian-monoid",
            StructureKind::Group => "group",
            StructureKind::AbelianGroup => "abelian-group",
            StructureKind::Semiring => "semiring",
            StructureKind::Ring => "ring",
            StructureKind::Field => "field",
            StructureKind::Module => "module",
            StructureKind::VectorSpace => "vector-space",
            StructureKind::LieAlgebra => "lie-algebra",
        }
    }

    pub fn parse(s: &str) -> Result<StructureKind> {
        StructureKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown structure kind `{s}`")))
    }

    /// Whether scalar variables (and hence a scalar box) are involved.
    pub fn needs_scalars(&self) -> bool {
        matches!(
            self,
            StructureKind::Module | StructureKind::VectorSpace | StructureKind::LieAlgebra
        )
    }
}

/// One axiom: the two expressions whose defect is measured, plus arities.
#[derive(Clone, Debug)]
pub struct AxiomSpec {
    pub name: &'static str,
    pub lhs: Expr,
    pub rhs: Expr,
    /// Number of carrier variables.
    pub carrier_arity: usize,
    /// Number of scalar variables (drawn from the scalar box).
    pub scalar_arity: usize,
    /// Axioms referencing the partial inverse skip excluded tuples.
    pub uses_inv: bool,
}

impl AxiomSpec {
    fn new(name: &'static str, lhs: Expr, rhs: Expr, carrier_arity: usize, scalar_arity: usize) -> Self {
        let uses_inv = lhs.uses_inv() || rhs.uses_inv();
        AxiomSpec {
            name,
            lhs,
            rhs,
            carrier_arity,
            scalar_arity,
            uses_inv,
        }
    }

    pub fn required_symbols(&self) -> Vec<&'static str> {
        let mut syms = Vec::new();
        self.lhs.symbols(&mut syms);
        self.rhs.symbols(&mut syms);
        syms.sort_unstable();
        syms.dedup();
        syms
    }
}

fn v(i: usize) -> Expr {
    Expr::var(i)
}

fn sv(i: usize) -> Expr {
    Expr::svar(i)
}

// Group-like axioms over the single operation in the `mul` slot.
fn group_like(commutative: bool, with_inverse: bool) -> Vec<AxiomSpec> {
    let mut axioms = vec![AxiomSpec::new(
        "associativity",
        v(0).mul(v(1)).mul(v(2)),
        v(0).mul(v(1).mul(v(2))),
        3,
        0,
    )];
    axioms.push(AxiomSpec::new("left-identity", Expr::One.mul(v(0)), v(0), 1, 0));
    axioms.push(AxiomSpec::new("right-identity", v(0).mul(Expr::One), v(0), 1, 0));
    if commutative {
        axioms.push(AxiomSpec::new(
            "commutativity",
            v(0).mul(v(1)),
            v(1).mul(v(0)),
            2,
            0,
        ));
    }
    if with_inverse {
        axioms.push(AxiomSpec::new(
            "left-inverse",
            v(0).inv().mul(v(0)),
            Expr::One,
            1,
            0,
        ));
        axioms.push(AxiomSpec::new(
            "right-inverse",
            v(0).mul(v(0).inv()),
            Expr::One,
            1,
            0,
        ));
    }
    axioms
}

// The additive Abelian monoid / group part of ring-like kinds.
fn additive_axioms(with_inverse: bool) -> Vec<AxiomSpec> {
    let mut axioms = vec![
        AxiomSpec::new(
            "additive-commutativity",
            v(0).add(v(1)),
            v(1).add(v(0)),
            2,
            0,
        ),
        AxiomSpec::new(
            "additive-associativity",
            v(0).add(v(1)).add(v(2)),
            v(0).add(v(1).add(v(2))),
            3,
            0,
        ),
        AxiomSpec::new("additive-left-identity", Expr::Zero.add(v(0)), v(0), 1, 0),
        AxiomSpec::new("additive-right-identity", v(0).add(Expr::Zero), v(0), 1, 0),
    ];
    if with_inverse {
        axioms.push(AxiomSpec::new(
            "additive-left-inverse",
            v(0).neg().add(v(0)),
            Expr::Zero,
            1,
            0,
        ));
        axioms.push(AxiomSpec::new(
            "additive-right-inverse",
            v(0).add(v(0).neg()),
            Expr::Zero,
            1,
            0,
        ));
    }
    axioms
}

fn multiplicative_monoid_axioms() -> Vec<AxiomSpec> {
    vec![
        AxiomSpec::new(
            "multiplicative-associativity",
            v(0).mul(v(1)).mul(v(2)),
            v(0).mul(v(1).mul(v(2))),
            3,
            0,
        ),
        AxiomSpec::new(
            "multiplicative-left-identity",
            Expr::One.mul(v(0)),
            v(0),
            1,
            0,
        ),
        AxiomSpec::new(
            "multiplicative-right-identity",
            v(0).mul(Expr::One),
            v(0),
            1,
            0,
        ),
    ]
}

fn distributivity() -> AxiomSpec {
    AxiomSpec::new(
        "distributivity",
        v(0).mul(v(1).add(v(2))),
        v(0).mul(v(1)).add(v(0).mul(v(2))),
        3,
        0,
    )
}

fn scalar_distributivity() -> AxiomSpec {
    AxiomSpec::new(
        "scalar-distributivity",
        sv(0).act_on(v(0).add(v(1))),
        sv(0).act_on(v(0)).add(sv(0).act_on(v(1))),
        2,
        1,
    )
}

fn bracket_axioms() -> Vec<AxiomSpec> {
    vec![
        AxiomSpec::new(
            "bracket-left-bilinearity",
            sv(0)
                .exact_scale(v(0))
                .add(sv(1).exact_scale(v(1)))
                .bracket(v(2)),
            sv(0)
                .exact_scale(v(0).bracket(v(2)))
                .exact_add(sv(1).exact_scale(v(1).bracket(v(2)))),
            3,
            2,
        ),
        AxiomSpec::new(
            "bracket-right-bilinearity",
            v(2).bracket(sv(0).exact_scale(v(0)).add(sv(1).exact_scale(v(1)))),
            sv(0)
                .exact_scale(v(2).bracket(v(0)))
                .exact_add(sv(1).exact_scale(v(2).bracket(v(1)))),
            3,
            2,
        ),
        AxiomSpec::new(
            "bracket-antisymmetry",
            v(0).bracket(v(1)),
            v(1).bracket(v(0)).exact_neg(),
            2,
            0,
        ),
        AxiomSpec::new(
            "jacobi-identity",
            v(0).bracket(v(1).bracket(v(2)))
                .add(v(1).bracket(v(2).bracket(v(0))))
                .add(v(2).bracket(v(0).bracket(v(1)))),
            Expr::Zero,
            3,
            0,
        ),
    ]
}

/// The ordered axiom list defining a structure kind. Catalogs are monotone
/// along the hierarchy: every weaker kind's list is a prefix-subset of its
/// refinements (semigroup through group, semiring through field).
pub fn axiom_catalog(kind: StructureKind) -> Vec<AxiomSpec> {
    match kind {
        StructureKind::Semigroup => group_like(false, false)
            .into_iter()
            .take(1)
            .collect(),
        StructureKind::Monoid => group_like(false, false),
        StructureKind::AbelianMonoid => group_like(true, false),
        StructureKind::Group => group_like(false, true),
        StructureKind::AbelianGroup => group_like(true, true),
        StructureKind::Semiring => {
            let mut axioms = additive_axioms(false);
            axioms.extend(multiplicative_monoid_axioms());
            axioms.push(distributivity());
            axioms
        }
        StructureKind::Ring => {
            let mut axioms = additive_axioms(true);
            axioms.extend(multiplicative_monoid_axioms());
            axioms.push(distributivity());
            axioms
        }
        StructureKind::Field => {
            let mut axioms = additive_axioms(true);
            axioms.extend(multiplicative_monoid_axioms());
            axioms.push(AxiomSpec::new(
                "multiplicative-commutativity",
                v(0).mul(v(1)),
                v(1).mul(v(0)),
                2,
                0,
            ));
            axioms.push(AxiomSpec::new(
                "multiplicative-left-inverse",
                v(0).inv().mul(v(0)),
                Expr::One,
                1,
                0,
            ));
            axioms.push(AxiomSpec::new(
                "multiplicative-right-inverse",
                v(0).mul(v(0).inv()),
                Expr::One,
                1,
                0,
            ));
            axioms.push(distributivity());
            axioms
        }
        StructureKind::Module | StructureKind::VectorSpace => {
            let mut axioms = additive_axioms(true);
            axioms.push(scalar_distributivity());
            axioms
        }
        StructureKind::LieAlgebra => {
            let mut axioms = additive_axioms(true);
            axioms.push(scalar_distributivity());
            axioms.extend(bracket_axioms());
            axioms
        }
    }
}

/// Where carrier points come from: a compact sampling box, or an explicit
/// finite element list (checks over those are exhaustive).
#[derive(Clone, Debug)]
pub enum CarrierSet {
    Box(Domain),
    Finite(Vec<Point>),
}

/// The carrier of a structure, plus the (possibly widened) box its operations
/// are expected to stay epsilon-close to.
#[derive(Clone, Debug)]
pub struct Carrier {
    pub set: CarrierSet,
    /// Box used by closure checks; defaults to the sampling box.
    pub closure_box: Option<Domain>,
}

impl Carrier {
    pub fn boxed(domain: Domain) -> Self {
        Carrier {
            set: CarrierSet::Box(domain),
            closure_box: None,
        }
    }

    pub fn finite(points: Vec<Point>) -> Self {
        Carrier {
            set: CarrierSet::Finite(points),
            closure_box: None,
        }
    }

    pub fn with_closure_box(mut self, domain: Domain) -> Self {
        self.closure_box = Some(domain);
        self
    }

    pub fn shape(&self) -> PointShape {
        match &self.set {
            CarrierSet::Box(d) => d.shape,
            CarrierSet::Finite(pts) => pts[0].shape(),
        }
    }

    /// A sample set matching this carrier: seeded uniform draws from a box,
    /// or the exhaustive element list.
    pub fn sample(&self, seed: u64, count: usize) -> Result<SampleSet> {
        match &self.set {
            CarrierSet::Box(d) => SampleSet::generate(seed, d.clone(), count),
            CarrierSet::Finite(pts) => SampleSet::exhaustive(pts.clone()),
        }
    }
}

/// Executable description of a similarity structure.
#[derive(Clone, Debug)]
pub struct StructureDescriptor {
    pub kind: StructureKind,
    pub carrier: Carrier,
    pub metric: Metric,
    pub eps: f64,
    pub ops: OperationTable,
    /// Interval scalars are drawn from for module / vector-space / Lie
    /// axioms. Defaults to [-1, 1].
    pub scalar_box: (f64, f64),
    pub similarity_mode: SimilarityMode,
    /// Human-readable tag used in reports.
    pub label: String,
}

impl StructureDescriptor {
    pub fn new(kind: StructureKind, carrier: Carrier, metric: Metric, eps: f64, ops: OperationTable) -> Self {
        StructureDescriptor {
            kind,
            carrier,
            metric,
            eps,
            ops,
            scalar_box: (-1.0, 1.0),
            similarity_mode: SimilarityMode::Bounded,
            label: kind.name().to_string(),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_scalar_box(mut self, lo: f64, hi: f64) -> Self {
        self.scalar_box = (lo, hi);
        self
    }

    pub fn with_similarity_mode(mut self, mode: SimilarityMode) -> Self {
        self.similarity_mode = mode;
        self
    }

    /// Check that the operation table covers the kind's catalog.
    pub fn validate(&self) -> Result<()> {
        for axiom in axiom_catalog(self.kind) {
            for sym in axiom.required_symbols() {
                if !self.ops.has(sym) {
                    return Err(Error::Config(format!(
                        "axiom `{}` needs operation `{sym}`, absent from the table",
                        axiom.name
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Per-axiom audit entry.
#[derive(Clone, Debug)]
pub struct AxiomEntry {
    pub axiom: String,
    pub stats: DefectStatistics,
    /// The tolerance the defect is graded against (the structure's eps).
    pub bound: f64,
    pub pass: bool,
    /// Tuples skipped because a variable fell in the inverse exclusion set.
    pub skipped: usize,
}

/// Result of auditing every axiom of a structure kind.
#[derive(Clone, Debug)]
pub struct AxiomDefectReport {
    pub label: String,
    pub kind: StructureKind,
    pub entries: Vec<AxiomEntry>,
    pub overall_pass: bool,
    /// Smallest tolerance at which every axiom passes on this sample set:
    /// the max over axioms of their max defect.
    pub certified_eps: f64,
}

impl AxiomDefectReport {
    pub fn entry(&self, axiom: &str) -> Option<&AxiomEntry> {
        self.entries.iter().find(|e| e.axiom == axiom)
    }
}

/// Measure one axiom's defect over a sample set.
pub fn axiom_defect(
    desc: &StructureDescriptor,
    axiom: &AxiomSpec,
    samples: &SampleSet,
) -> Result<(DefectStatistics, usize)> {
    let tuples = samples.tuple_indices(axiom.carrier_arity)?;
    let scalars = if axiom.scalar_arity > 0 {
        scalar_stream(
            samples.seed(),
            desc.scalar_box.0,
            desc.scalar_box.1,
            tuples.len() * axiom.scalar_arity,
        )
    } else {
        Vec::new()
    };

    // Exclusion applies only to axioms referencing the partial inverse.
    let kept: Vec<usize> = (0..tuples.len())
        .filter(|&i| {
            !axiom.uses_inv
                || !tuples[i]
                    .iter()
                    .any(|&p| desc.ops.is_excluded(&samples.points()[p]))
        })
        .collect();
    let skipped = tuples.len() - kept.len();
    if kept.is_empty() {
        return Err(Error::Estimation(format!(
            "axiom `{}`: every sample tuple fell in the exclusion set",
            axiom.name
        )));
    }

    let evaluated: Vec<Result<f64>> = kept
        .par_iter()
        .map(|&i| {
            let args = samples.tuple(&tuples[i]);
            let svals = &scalars[i * axiom.scalar_arity..(i + 1) * axiom.scalar_arity];
            let l = axiom.lhs.eval(&args, svals, &desc.ops).map_err(|e| wrap_eval(e, &args))?;
            let r = axiom.rhs.eval(&args, svals, &desc.ops).map_err(|e| wrap_eval(e, &args))?;
            let d = desc.metric.distance(&l, &r)?;
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
    let stats = reduce_defects(&defects, |i| samples.tuple(&tuples[kept[i]]))?;
    Ok((stats, skipped))
}

fn wrap_eval(err: Error, args: &[Point]) -> Error {
    match err {
        e @ Error::Eval { .. } => e,
        e @ Error::Config(_) => e,
        other => Error::Eval {
            witness: args.to_vec(),
            reason: other.to_string(),
        },
    }
}

/// Evaluate every axiom of the descriptor's kind against its tolerance.
pub fn audit(desc: &StructureDescriptor, samples: &SampleSet) -> Result<AxiomDefectReport> {
    desc.validate()?;
    let catalog = axiom_catalog(desc.kind);
    let mut entries = Vec::with_capacity(catalog.len());
    for axiom in &catalog {
        let (stats, skipped) = axiom_defect(desc, axiom, samples)?;
        let pass = stats.max_defect <= desc.eps;
        entries.push(AxiomEntry {
            axiom: axiom.name.to_string(),
            stats,
            bound: desc.eps,
            pass,
            skipped,
        });
    }
    let certified_eps = entries
        .iter()
        .map(|e| e.stats.max_defect)
        .fold(0.0_f64, f64::max);
    let overall_pass = entries.iter().all(|e| e.pass);
    Ok(AxiomDefectReport {
        label: desc.label.clone(),
        kind: desc.kind,
        entries,
        overall_pass,
        certified_eps,
    })
}

/// Approximate-closure check: how far each binary operation's output strays
/// from the declared carrier box (0 if inside). Passes when the worst
/// excursion is within the tolerance.
#[derive(Clone, Debug)]
pub struct ClosureReport {
    pub pass: bool,
    pub worst_excursion: f64,
    /// (operation name, inputs, output) for the worst excursion.
    pub witness: Option<(String, Vec<Point>, Point)>,
}

pub fn check_closure(desc: &StructureDescriptor, samples: &SampleSet) -> Result<ClosureReport> {
    let target = match (&desc.carrier.closure_box, &desc.carrier.set) {
        (Some(d), _) => d.clone(),
        (None, CarrierSet::Box(d)) => d.clone(),
        (None, CarrierSet::Finite(_)) => {
            return Err(Error::Config(
                "closure check over a finite carrier needs a declared closure box".into(),
            ))
        }
    };
    let ops: Vec<(&str, &BinaryOp)> = [("add", desc.ops.add.as_ref()), ("mul", desc.ops.mul.as_ref())]
        .into_iter()
        .filter_map(|(n, f)| f.map(|f| (n, f)))
        .collect();
    if ops.is_empty() {
        return Err(Error::Config("no binary operation to check closure of".into()));
    }
    let pairs = samples.tuple_indices(2)?;
    let mut worst = 0.0_f64;
    let mut witness = None;
    for (name, op) in ops {
        for idx in &pairs {
            let args = samples.tuple(idx);
            let out = op(&args[0], &args[1]).map_err(|e| wrap_eval(e, &args))?;
            let excursion = target.distance_outside(&out, &desc.metric)?;
            if excursion > worst {
                worst = excursion;
                witness = Some((name.to_string(), args, out));
            }
        }
    }
    Ok(ClosureReport {
        pass: worst <= desc.eps,
        worst_excursion: worst,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_sizes() {
        assert_eq!(axiom_catalog(StructureKind::Semigroup).len(), 1);
        assert_eq!(axiom_catalog(StructureKind::Monoid).len(), 3);
        assert_eq!(axiom_catalog(StructureKind::Group).len(), 5);
        assert_eq!(axiom_catalog(StructureKind::AbelianGroup).len(), 6);
        assert_eq!(axiom_catalog(StructureKind::Semiring).len(), 8);
        assert_eq!(axiom_catalog(StructureKind::Ring).len(), 10);
        assert_eq!(axiom_catalog(StructureKind::Field).len(), 13);
        assert_eq!(axiom_catalog(StructureKind::Module).len(), 7);
        assert_eq!(axiom_catalog(StructureKind::LieAlgebra).len(), 11);
    }

    #[test]
    fn group_catalog_names() {
        let names: Vec<&str> = axiom_catalog(StructureKind::Group)
            .iter()
            .map(|a| a.name)
            .collect();
        assert_eq!(
            names,
            [
                "associativity",
                "left-identity",
                "right-identity",
                "left-inverse",
                "right-inverse"
            ]
        );
    }

    #[test]
    fn catalogs_are_monotone_along_the_hierarchy() {
        let chains = [
            vec![
                StructureKind::Semigroup,
                StructureKind::Monoid,
                StructureKind::Group,
            ],
            vec![StructureKind::Semiring, StructureKind::Ring, StructureKind::Field],
        ];
        for chain in chains {
            for pair in chain.windows(2) {
                let weaker: Vec<&str> = axiom_catalog(pair[0]).iter().map(|a| a.name).collect();
                let stronger: Vec<&str> = axiom_catalog(pair[1]).iter().map(|a| a.name).collect();
                for name in weaker {
                    assert!(stronger.contains(&name), "{name} lost between {:?} and {:?}", pair[0], pair[1]);
                }
            }
        }
    }

    fn classical_real_field(lo: f64, hi: f64) -> StructureDescriptor {
        let ops = OperationTable::builder()
            .add(|x, y| Ok(Point::scalar(x.as_scalar().unwrap() + y.as_scalar().unwrap())))
            .mul(|x, y| Ok(Point::scalar(x.as_scalar().unwrap() * y.as_scalar().unwrap())))
            .zero(Point::scalar(0.0))
            .one(Point::scalar(1.0))
            .neg(|x| Ok(Point::scalar(-x.as_scalar().unwrap())))
            .inv(|x| {
                let v = x.as_scalar().unwrap();
                if v == 0.0 {
                    return Err(Error::Singularity("reciprocal of zero".into()));
                }
                Ok(Point::scalar(1.0 / v))
            })
            .inv_exclusion(|x| x.as_scalar().unwrap().abs() < 1e-3)
            .build();
        StructureDescriptor::new(
            StructureKind::Field,
            Carrier::boxed(Domain::scalar(lo, hi).unwrap()),
            Metric::AbsoluteDifference,
            1e-9,
            ops,
        )
    }

    #[test]
    fn classical_field_audit_is_exact() {
        let desc = classical_real_field(-2.0, 2.0);
        let samples = desc.carrier.sample(42, 2048).unwrap();
        let report = audit(&desc, &samples).unwrap();
        assert!(report.overall_pass, "{report:?}");
        // Exact-zero assertions get floating-point slack relative to
        // operand magnitude.
        assert!(report.certified_eps <= 1e-12 * (1.0 + 8.0));
    }

    #[test]
    fn missing_operation_is_a_config_error() {
        let ops = OperationTable::builder()
            .mul(|x, y| Ok(Point::scalar(x.as_scalar().unwrap() * y.as_scalar().unwrap())))
            .build();
        let desc = StructureDescriptor::new(
            StructureKind::Monoid,
            Carrier::boxed(Domain::scalar(-1.0, 1.0).unwrap()),
            Metric::AbsoluteDifference,
            0.0,
            ops,
        );
        let samples = desc.carrier.sample(1, 32).unwrap();
        let err = audit(&desc, &samples).unwrap_err();
        assert!(matches!(err, Error::Config(_)), "{err}");
    }

    #[test]
    fn audit_pass_is_sharp_at_certified_eps() {
        // Shifted identity: the identity axioms have constant defect 0.1.
        let ops = OperationTable::builder()
            .mul(|x, y| Ok(Point::scalar(x.as_scalar().unwrap() + y.as_scalar().unwrap())))
            .one(Point::scalar(0.1))
            .build();
        let base = StructureDescriptor::new(
            StructureKind::Monoid,
            Carrier::boxed(Domain::scalar(-1.0, 1.0).unwrap()),
            Metric::AbsoluteDifference,
            0.0,
            ops,
        );
        let samples = base.carrier.sample(11, 512).unwrap();

        let mut at_certified = base.clone();
        at_certified.eps = audit(&base, &samples).unwrap().certified_eps;
        assert!(audit(&at_certified, &samples).unwrap().overall_pass);

        let mut below = base;
        below.eps = 0.05;
        let report = audit(&below, &samples).unwrap();
        assert!(!report.entry("left-identity").unwrap().pass);
    }

    #[test]
    fn exhaustive_finite_carrier_discrete_audit() {
        // Integers mod 6 under addition: classical, so every defect is 0
        // under the discrete metric.
        let ops = OperationTable::builder()
            .mul(|x, y| {
                let (a, b) = (x.as_scalar().unwrap(), y.as_scalar().unwrap());
                Ok(Point::scalar((a + b).rem_euclid(6.0)))
            })
            .one(Point::scalar(0.0))
            .inv(|x| Ok(Point::scalar((-x.as_scalar().unwrap()).rem_euclid(6.0))))
            .build();
        let elements: Vec<Point> = (0..6).map(|k| Point::scalar(k as f64)).collect();
        let desc = StructureDescriptor::new(
            StructureKind::AbelianGroup,
            Carrier::finite(elements),
            Metric::Discrete,
            0.0,
            ops,
        );
        let samples = desc.carrier.sample(0, 0).unwrap();
        let report = audit(&desc, &samples).unwrap();
        assert!(report.overall_pass);
        assert_eq!(report.certified_eps, 0.0);
    }

    #[test]
    fn closure_of_exact_addition() {
        let desc = classical_real_field(-1.0, 1.0);
        let mut desc = desc;
        desc.carrier = desc
            .carrier
            .with_closure_box(Domain::scalar(-2.0, 2.0).unwrap());
        let samples = desc.carrier.sample(5, 256).unwrap();
        let report = check_closure(&desc, &samples).unwrap();
        assert_eq!(report.worst_excursion, 0.0);
        assert!(report.pass);
    }
}
