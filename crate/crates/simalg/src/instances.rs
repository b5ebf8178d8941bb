//! Concrete similarity structures: the perturbed real field, a perturbed
//! vector space over it, and rounded machine arithmetic.

use crate::error::{Error, Result};
use crate::metric::Metric;
use crate::point::{Point, PointShape};
use crate::sample::Domain;
use crate::structures::{Carrier, OperationTable, StructureDescriptor, StructureKind};

/// Perturbed addition x + y + eps*x*y.
///
/// Exactly associative and commutative for every eps (both association
/// orders expand to x + y + z + eps(xy + xz + yz) + eps^2 xyz), with exact
/// identity 0.
pub fn perturbed_add(x: f64, y: f64, eps: f64) -> f64 {
    x + y + eps * x * y
}

/// Perturbed multiplication x*y + eps*x^2*y. Not commutative for eps > 0:
/// the defect is eps*|x^2 y - x y^2|.
pub fn perturbed_mul(x: f64, y: f64, eps: f64) -> f64 {
    x * y + eps * x * x * y
}

/// Exact solution w of x (+_eps) w = 0, namely -x / (1 + eps*x); the
/// additive-inverse axiom defect of this instance is therefore 0.
pub fn perturbed_add_inverse(x: f64, eps: f64) -> Result<f64> {
    let denom = 1.0 + eps * x;
    if denom == 0.0 {
        return Err(Error::Singularity(format!("1 + eps*x vanishes at x = {x}")));
    }
    Ok(-x / denom)
}

/// Exact solution w of x (*_eps) w = 1, namely 1 / (x (1 + eps*x)).
pub fn perturbed_mul_inverse(x: f64, eps: f64) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::Singularity("multiplicative inverse of zero".into()));
    }
    let denom = 1.0 + eps * x;
    if denom == 0.0 {
        return Err(Error::Singularity(format!("1 + eps*x vanishes at x = {x}")));
    }
    Ok(1.0 / (x * denom))
}

/// Scalar action r.v = r*v + eps*r^2*v, the componentwise vector analog of
/// the perturbed multiplication.
pub fn scalar_action(r: f64, v: &[f64], eps: f64) -> Vec<f64> {
    let c = r + eps * r * r;
    v.iter().map(|x| c * x).collect()
}

/// The perturbed real field: carrier interval, tolerance, and the closed-form
/// inverses above. Requires 1 + eps*x != 0 on the whole carrier box.
#[derive(Clone, Debug)]
pub struct PerturbedRealField {
    pub eps: f64,
    pub lo: f64,
    pub hi: f64,
    /// Elements with |x| below this radius are excluded from
    /// multiplicative-inverse sampling (approximate zeros are
    /// ill-conditioned). Defaults to 10*eps.
    pub exclusion_radius: f64,
}

impl PerturbedRealField {
    pub fn new(eps: f64, lo: f64, hi: f64) -> Result<Self> {
        if eps < 0.0 {
            return Err(Error::Input(format!("tolerance must be >= 0, got {eps}")));
        }
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Input(format!("invalid carrier box [{lo}, {hi}]")));
        }
        // 1 + eps*x is affine in x, so it has no zero on [lo, hi] iff its
        // endpoint values share a sign.
        if (1.0 + eps * lo) * (1.0 + eps * hi) <= 0.0 {
            return Err(Error::Input(format!(
                "1 + eps*x vanishes inside [{lo}, {hi}] for eps = {eps}"
            )));
        }
        Ok(PerturbedRealField {
            eps,
            lo,
            hi,
            exclusion_radius: 10.0 * eps,
        })
    }

    pub fn with_exclusion_radius(mut self, radius: f64) -> Self {
        self.exclusion_radius = radius;
        self
    }

    pub fn add(&self, x: f64, y: f64) -> f64 {
        perturbed_add(x, y, self.eps)
    }

    pub fn mul(&self, x: f64, y: f64) -> f64 {
        perturbed_mul(x, y, self.eps)
    }

    pub fn add_inverse(&self, x: f64) -> Result<f64> {
        perturbed_add_inverse(x, self.eps)
    }

    pub fn mul_inverse(&self, x: f64) -> Result<f64> {
        perturbed_mul_inverse(x, self.eps)
    }

    fn table(&self) -> OperationTable {
        let eps = self.eps;
        let radius = self.exclusion_radius;
        OperationTable::builder()
            .add(move |x, y| Ok(Point::scalar(perturbed_add(scalar(x)?, scalar(y)?, eps))))
            .mul(move |x, y| Ok(Point::scalar(perturbed_mul(scalar(x)?, scalar(y)?, eps))))
            .zero(Point::scalar(0.0))
            .one(Point::scalar(1.0))
            .neg(move |x| Ok(Point::scalar(perturbed_add_inverse(scalar(x)?, eps)?)))
            .inv(move |x| Ok(Point::scalar(perturbed_mul_inverse(scalar(x)?, eps)?)))
            .inv_exclusion(move |x| x.as_scalar().is_none_or(|v| v.abs() < radius))
            .build()
    }

    /// Additive structure only (the honest group of this instance): the
    /// single group-like operation slot gets the perturbed addition.
    fn additive_table(&self) -> OperationTable {
        let eps = self.eps;
        OperationTable::builder()
            .mul(move |x, y| Ok(Point::scalar(perturbed_add(scalar(x)?, scalar(y)?, eps))))
            .one(Point::scalar(0.0))
            .inv(move |x| Ok(Point::scalar(perturbed_add_inverse(scalar(x)?, eps)?)))
            .build()
    }

    /// Analytically widened box the perturbed operations stay inside when
    /// applied to carrier points: |x (+) y| <= 2B + eps B^2 and
    /// |x (*) y| <= B^2 (1 + eps B) for |x|, |y| <= B.
    fn widened_box(&self) -> Result<Domain> {
        let b = self.lo.abs().max(self.hi.abs());
        let reach = (2.0 * b + self.eps * b * b)
            .max(b * b * (1.0 + self.eps * b))
            .max(b);
        Domain::scalar(-reach, reach)
    }

    /// Adapt the instance to the auditor for a declared kind. Ring-like kinds
    /// use both operations; group-like kinds audit the additive structure.
    pub fn as_structure(&self, kind: StructureKind) -> Result<StructureDescriptor> {
        let carrier = Carrier::boxed(Domain::scalar(self.lo, self.hi)?)
            .with_closure_box(self.widened_box()?);
        let ops = match kind {
            StructureKind::Field | StructureKind::Ring | StructureKind::Semiring => self.table(),
            StructureKind::Semigroup
            | StructureKind::Monoid
            | StructureKind::AbelianMonoid
            | StructureKind::Group
            | StructureKind::AbelianGroup => self.additive_table(),
            other => {
                return Err(Error::Config(format!(
                    "perturbed real field cannot be audited as {}",
                    other.name()
                )))
            }
        };
        Ok(
            StructureDescriptor::new(kind, carrier, Metric::AbsoluteDifference, self.eps, ops)
                .with_label(format!("perturbed-field(eps={})", self.eps)),
        )
    }
}

fn scalar(p: &Point) -> Result<f64> {
    p.as_scalar()
        .ok_or_else(|| Error::Input(format!("expected a scalar point, got {}", p.shape())))
}

/// Vector space over the perturbed field: componentwise perturbed addition
/// and the scalar action r*v + eps*r^2*v.
#[derive(Clone, Debug)]
pub struct PerturbedVectorSpace {
    pub dim: usize,
    pub eps: f64,
    pub lo: f64,
    pub hi: f64,
}

impl PerturbedVectorSpace {
    pub fn new(dim: usize, eps: f64, lo: f64, hi: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Input("dimension must be positive".into()));
        }
        if eps < 0.0 || !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Input("invalid tolerance or box".into()));
        }
        if (1.0 + eps * lo) * (1.0 + eps * hi) <= 0.0 {
            return Err(Error::Input("1 + eps*x vanishes inside the box".into()));
        }
        Ok(PerturbedVectorSpace { dim, eps, lo, hi })
    }

    pub fn as_structure(&self, kind: StructureKind) -> Result<StructureDescriptor> {
        if !matches!(kind, StructureKind::Module | StructureKind::VectorSpace) {
            return Err(Error::Config(format!(
                "perturbed vector space can only be audited as module or vector-space, not {}",
                kind.name()
            )));
        }
        let eps = self.eps;
        let dim = self.dim;
        let ops = OperationTable::builder()
            .add(move |x, y| componentwise(x, y, |a, b| perturbed_add(a, b, eps)))
            .zero(Point::vector(vec![0.0; dim]))
            .neg(move |x| match x {
                Point::Vector(v) => {
                    let coords: Result<Vec<f64>> =
                        v.iter().map(|&a| perturbed_add_inverse(a, eps)).collect();
                    Ok(Point::vector(coords?))
                }
                other => Err(Error::Input(format!("expected a vector, got {}", other.shape()))),
            })
            .scalar_action(move |r, v| {
                let r = scalar(r)?;
                match v {
                    Point::Vector(v) => {
                        let coords: Vec<f64> = v.iter().copied().collect();
                        Ok(Point::vector(scalar_action(r, &coords, eps)))
                    }
                    other => Err(Error::Input(format!("expected a vector, got {}", other.shape()))),
                }
            })
            .build();
        let carrier = Carrier::boxed(Domain::vector(self.dim, self.lo, self.hi)?);
        Ok(
            StructureDescriptor::new(kind, carrier, Metric::Euclidean, self.eps, ops)
                .with_label(format!("perturbed-vector-space(dim={}, eps={})", self.dim, self.eps)),
        )
    }
}

fn componentwise(x: &Point, y: &Point, f: impl Fn(f64, f64) -> f64) -> Result<Point> {
    match (x, y) {
        (Point::Vector(a), Point::Vector(b)) if a.len() == b.len() => {
            Ok(Point::vector(a.iter().zip(b.iter()).map(|(&p, &q)| f(p, q)).collect()))
        }
        _ => Err(Error::ShapeMismatch(x.shape(), y.shape())),
    }
}

/// Rounding precision of machine arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FloatPrecision {
    Binary32,
    Binary64,
}

impl FloatPrecision {
    fn add(&self, x: f64, y: f64) -> f64 {
        match self {
            FloatPrecision::Binary32 => (x as f32 + y as f32) as f64,
            FloatPrecision::Binary64 => x + y,
        }
    }

    fn mul(&self, x: f64, y: f64) -> f64 {
        match self {
            FloatPrecision::Binary32 => (x as f32 * y as f32) as f64,
            FloatPrecision::Binary64 => x * y,
        }
    }
}

/// Machine floating-point arithmetic as a similarity structure: the
/// operations are the hardware's rounded add and multiply. Ships as a
/// monoid / semiring demo only; rounded arithmetic has no exact inverses,
/// so it is never a field. Auditing it shows certified-tolerance estimation
/// on real hardware arithmetic.
///
/// One caveat worth knowing: box-uniform samples are dyadic rationals at a
/// common scale, and binary64 addition of those is exactly associative
/// (intermediate sums stay representable). Rounded multiplication, and
/// binary32 addition of binary64 inputs, show the generic rounding defects.
#[derive(Clone, Debug)]
pub struct FloatInstance {
    pub precision: FloatPrecision,
    pub lo: f64,
    pub hi: f64,
}

impl FloatInstance {
    pub fn new(precision: FloatPrecision, lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Input(format!("invalid carrier box [{lo}, {hi}]")));
        }
        Ok(FloatInstance { precision, lo, hi })
    }

    pub fn as_structure(&self, kind: StructureKind) -> Result<StructureDescriptor> {
        let p = self.precision;
        let ops = match kind {
            // Group-like kinds audit rounded addition.
            StructureKind::Semigroup | StructureKind::Monoid | StructureKind::AbelianMonoid => {
                OperationTable::builder()
                    .mul(move |x, y| Ok(Point::scalar(p.add(scalar(x)?, scalar(y)?))))
                    .one(Point::scalar(0.0))
                    .build()
            }
            StructureKind::Semiring => OperationTable::builder()
                .add(move |x, y| Ok(Point::scalar(p.add(scalar(x)?, scalar(y)?))))
                .mul(move |x, y| Ok(Point::scalar(p.mul(scalar(x)?, scalar(y)?))))
                .zero(Point::scalar(0.0))
                .one(Point::scalar(1.0))
                .build(),
            other => {
                return Err(Error::Config(format!(
                    "machine floats have no exact inverses; cannot audit as {}",
                    other.name()
                )))
            }
        };
        let carrier = Carrier::boxed(Domain::scalar(self.lo, self.hi)?);
        let label = match p {
            FloatPrecision::Binary32 => "float(binary32)",
            FloatPrecision::Binary64 => "float(binary64)",
        };
        Ok(
            StructureDescriptor::new(kind, carrier, Metric::AbsoluteDifference, 0.0, ops)
                .with_label(label),
        )
    }
}

/// Where a sampled point's shape should land for a given instance (used by
/// config validation).
pub fn default_shape_for(kind: StructureKind, dim: usize) -> PointShape {
    match kind {
        StructureKind::Module | StructureKind::VectorSpace => PointShape::Vector(dim),
        StructureKind::LieAlgebra => PointShape::Matrix(dim),
        _ => PointShape::Scalar,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::audit;

    const SLACK: f64 = 1e-12;

    #[test]
    fn perturbed_op_values() {
        assert!((perturbed_add(1.0, 2.0, 0.1) - 3.2).abs() < 1e-15);
        assert_eq!(perturbed_add(2.0, 3.0, 0.0), 5.0);
        assert_eq!(perturbed_add(1.7, 0.0, 0.3), 1.7);
        assert!((perturbed_mul(2.0, 3.0, 0.1) - 7.2).abs() < 1e-15);
        assert_eq!(perturbed_mul(2.0, 3.0, 0.0), 6.0);
        let x = 1.3;
        let eps = 0.2;
        assert!((perturbed_mul(x, 1.0, eps) - (x + eps * x * x)).abs() < 1e-15);
    }

    #[test]
    fn inverse_closed_forms_solve_exactly() {
        let w = perturbed_add_inverse(1.0, 0.1).unwrap();
        assert!((w + 1.0 / 1.1).abs() < 1e-15);
        assert!(perturbed_add(1.0, w, 0.1).abs() < 1e-15);
        assert_eq!(perturbed_add_inverse(0.0, 0.3).unwrap(), 0.0);
        assert_eq!(perturbed_add_inverse(2.5, 0.0).unwrap(), -2.5);

        let w = perturbed_mul_inverse(2.0, 0.1).unwrap();
        assert!((w - 1.0 / 2.4).abs() < 1e-15);
        assert!((perturbed_mul(2.0, w, 0.1) - 1.0).abs() < 1e-15);
        assert_eq!(perturbed_mul_inverse(1.0, 0.0).unwrap(), 1.0);
        assert_eq!(perturbed_mul_inverse(4.0, 0.0).unwrap(), 0.25);
        assert!(perturbed_mul_inverse(0.0, 0.1).is_err());
    }

    #[test]
    fn scalar_action_values() {
        assert_eq!(scalar_action(3.0, &[0.0, 0.0], 0.2), vec![0.0, 0.0]);
        let v = scalar_action(1.0, &[1.0, 2.0], 0.1);
        assert!((v[0] - 1.1).abs() < 1e-15 && (v[1] - 2.2).abs() < 1e-15);
        assert_eq!(scalar_action(2.0, &[1.0, 0.0], 0.0), vec![2.0, 0.0]);
    }

    #[test]
    fn conjugacy_identity() {
        // 1 + eps*(x (+) y) = (1 + eps*x)(1 + eps*y)
        let eps = 0.07;
        for (x, y) in [(0.3, -1.2), (2.0, 2.0), (-0.5, 0.9)] {
            let lhs = 1.0 + eps * perturbed_add(x, y, eps);
            let rhs = (1.0 + eps * x) * (1.0 + eps * y);
            assert!((lhs - rhs).abs() < 1e-14);
        }
    }

    #[test]
    fn perturbed_add_is_exactly_associative_and_commutative() {
        let eps = 0.1;
        let mut rng = crate::sample::SplitMix64::new(99);
        for _ in 0..1000 {
            let x = rng.next_in(-2.0, 2.0);
            let y = rng.next_in(-2.0, 2.0);
            let z = rng.next_in(-2.0, 2.0);
            let l = perturbed_add(perturbed_add(x, y, eps), z, eps);
            let r = perturbed_add(x, perturbed_add(y, z, eps), eps);
            assert!((l - r).abs() <= SLACK * (1.0 + l.abs()));
            let c = (perturbed_add(x, y, eps) - perturbed_add(y, x, eps)).abs();
            assert!(c <= SLACK * (1.0 + x.abs() + y.abs()));
        }
    }

    #[test]
    fn perturbed_mul_is_not_commutative() {
        let eps = 0.1;
        let d = (perturbed_mul(2.0, 1.0, eps) - perturbed_mul(1.0, 2.0, eps)).abs();
        assert!((d - eps * (4.0 - 2.0_f64).abs()).abs() < 1e-15);
        assert!(d > 0.0);
    }

    #[test]
    fn field_descriptor_has_full_catalog_and_exact_axioms_degenerate() {
        let field = PerturbedRealField::new(0.1, -2.0, 2.0).unwrap();
        let desc = field.as_structure(StructureKind::Field).unwrap();
        let samples = desc.carrier.sample(42, 2048).unwrap();
        let report = audit(&desc, &samples).unwrap();
        assert_eq!(report.entries.len(), 13);
        for name in [
            "additive-commutativity",
            "additive-associativity",
            "additive-left-identity",
            "additive-right-identity",
            "additive-left-inverse",
            "additive-right-inverse",
            "multiplicative-right-inverse",
        ] {
            let e = report.entry(name).unwrap();
            assert!(e.stats.max_defect <= SLACK * 10.0, "{name}: {}", e.stats.max_defect);
        }
        // Multiplicative associativity genuinely fails at eps on this box.
        assert!(!report.entry("multiplicative-associativity").unwrap().pass);
    }

    #[test]
    fn classical_limit_audits_clean() {
        let field = PerturbedRealField::new(0.0, -2.0, 2.0).unwrap();
        // eps = 0 excludes nothing but |x| < radius: keep a tiny radius so
        // reciprocals stay conditioned on the sampled box.
        let desc = field
            .with_exclusion_radius(1e-2)
            .as_structure(StructureKind::Field)
            .unwrap();
        let samples = desc.carrier.sample(7, 2048).unwrap();
        let report = audit(&desc, &samples).unwrap();
        assert!(report.certified_eps <= 1e-10, "{}", report.certified_eps);
    }

    #[test]
    fn vector_space_additive_axioms_are_exact() {
        let vs = PerturbedVectorSpace::new(3, 0.1, -1.0, 1.0).unwrap();
        let desc = vs.as_structure(StructureKind::VectorSpace).unwrap();
        let samples = desc.carrier.sample(13, 1024).unwrap();
        let report = audit(&desc, &samples).unwrap();
        assert_eq!(report.entries.len(), 7);
        for e in &report.entries {
            if e.axiom != "scalar-distributivity" {
                assert!(e.stats.max_defect <= 1e-12, "{}: {}", e.axiom, e.stats.max_defect);
            }
        }
        // Scalar distributivity has leading defect eps*|x_i y_i r (1 - r)|.
        let sd = report.entry("scalar-distributivity").unwrap();
        assert!(sd.stats.max_defect > 0.0 && sd.stats.max_defect < 10.0 * 0.1);
    }

    #[test]
    fn float_instance_certifies_near_machine_epsilon() {
        // Rounded multiplication needs twice the mantissa, so the semiring
        // audit sees genuine binary64 rounding defects.
        let inst = FloatInstance::new(FloatPrecision::Binary64, -1.0, 1.0).unwrap();
        let desc = inst.as_structure(StructureKind::Semiring).unwrap();
        let samples = desc.carrier.sample(3, 4096).unwrap();
        let report = audit(&desc, &samples).unwrap();
        assert!(report.certified_eps > 1e-18, "{}", report.certified_eps);
        assert!(report.certified_eps < 1e-14, "{}", report.certified_eps);
        let assoc = report.entry("multiplicative-associativity").unwrap();
        assert!(assoc.stats.max_defect > 0.0);
    }

    #[test]
    fn float_instance_binary32_matches_coarse_grid_oracle() {
        // Independent oracle: exhaustive associativity-defect search of
        // rounded binary32 addition over a coarse grid. The step 1/14 is not
        // a power of two, so grid values carry full mantissas and the sums
        // genuinely round.
        let mut oracle = 0.0_f64;
        let grid: Vec<f64> = (0..29).map(|i| -1.0 + i as f64 / 14.0).collect();
        for &x in &grid {
            for &y in &grid {
                for &z in &grid {
                    let l = ((x as f32 + y as f32) + z as f32) as f64;
                    let r = (x as f32 + (y as f32 + z as f32)) as f64;
                    oracle = oracle.max((l - r).abs());
                }
            }
        }
        let inst = FloatInstance::new(FloatPrecision::Binary32, -1.0, 1.0).unwrap();
        let desc = inst.as_structure(StructureKind::Monoid).unwrap();
        let samples = desc.carrier.sample(17, 4096).unwrap();
        let report = audit(&desc, &samples).unwrap();
        let measured = report.entry("associativity").unwrap().stats.max_defect;
        // Same order of magnitude as the grid oracle, near binary32 epsilon.
        assert!(measured >= oracle / 10.0 && measured <= oracle * 10.0,
            "measured {measured}, oracle {oracle}");
        assert!(measured > 1e-9 && measured < 1e-6);
    }

    #[test]
    fn float_instance_is_never_a_field() {
        let inst = FloatInstance::new(FloatPrecision::Binary64, -1.0, 1.0).unwrap();
        assert!(matches!(
            inst.as_structure(StructureKind::Field),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn closure_holds_on_widened_box() {
        let field = PerturbedRealField::new(0.1, -1.0, 1.0).unwrap();
        let desc = field.as_structure(StructureKind::Field).unwrap();
        let samples = desc.carrier.sample(23, 512).unwrap();
        let report = crate::structures::check_closure(&desc, &samples).unwrap();
        assert_eq!(report.worst_excursion, 0.0);
    }
}
