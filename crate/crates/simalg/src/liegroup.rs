//! Perturbed matrix Lie groups: multiplication deformed by a bilinear map,
//! an implicitly defined inverse solved by fixed-point iteration (with an
//! independent dense linear-solve cross-check), numerical Lie-bracket
//! extraction at the identity, and C1 convergence diagnostics.

use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::metric::Metric;
use crate::point::Point;
use crate::sample::{scalar_stream, Domain, SampleSet};
use crate::structures::{
    audit, AxiomDefectReport, AxiomEntry, Carrier, OperationTable, StructureDescriptor,
    StructureKind,
};

pub type Matrix = DMatrix<f64>;
pub type BilinearFn = Arc<dyn Fn(&Matrix, &Matrix) -> Matrix + Send + Sync>;

/// The bilinear map deforming matrix multiplication. Every kind vanishes
/// when either argument is the identity and satisfies
/// ||phi(A,B)||_F <= C ||A||_F ||B||_F with the stated constant.
#[derive(Clone)]
pub enum BilinearPerturbation {
    /// AB - BA; the canonical choice, C = 2.
    Commutator,
    /// c (AB - BA); C = 2|c|.
    ScaledCommutator(f64),
    /// (A - (tr A / n) I)(B - (tr B / n) I); C = 4. Unlike commutator-built
    /// maps it does not vanish on (A, A^-1), so the implicit inverse
    /// genuinely differs from the classical one.
    TracelessProduct,
    /// User-supplied bilinear map with a declared bound constant.
    Custom { map: BilinearFn, bound_constant: f64 },
}

impl BilinearPerturbation {
    pub fn eval(&self, a: &Matrix, b: &Matrix) -> Matrix {
        match self {
            BilinearPerturbation::Commutator => a * b - b * a,
            BilinearPerturbation::ScaledCommutator(c) => (a * b - b * a) * *c,
            BilinearPerturbation::TracelessProduct => {
                let n = a.nrows() as f64;
                let id = Matrix::identity(a.nrows(), a.ncols());
                let ta = a - &id * (a.trace() / n);
                let tb = b - &id * (b.trace() / n);
                ta * tb
            }
            BilinearPerturbation::Custom { map, .. } => map(a, b),
        }
    }

    pub fn bound_constant(&self) -> f64 {
        match self {
            BilinearPerturbation::Commutator => 2.0,
            BilinearPerturbation::ScaledCommutator(c) => 2.0 * c.abs(),
            BilinearPerturbation::TracelessProduct => 4.0,
            BilinearPerturbation::Custom { bound_constant, .. } => *bound_constant,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BilinearPerturbation::Commutator => "commutator",
            BilinearPerturbation::ScaledCommutator(_) => "scaled-commutator",
            BilinearPerturbation::TracelessProduct => "traceless-product",
            BilinearPerturbation::Custom { .. } => "custom",
        }
    }

    /// Sampled check of the three defining conditions: vanishing on the
    /// identity, the norm bound, and bilinearity in both slots.
    pub fn validate(&self, samples: &SampleSet, tol: f64) -> Result<()> {
        let pairs = samples.tuple_indices(2)?;
        let id = match samples.shape() {
            crate::point::PointShape::Matrix(n) => Matrix::identity(n, n),
            other => return Err(Error::Input(format!("expected matrix samples, got {other}"))),
        };
        let c = self.bound_constant();
        let mut coeffs = scalar_stream(samples.seed(), -2.0, 2.0, 2 * pairs.len()).into_iter();
        for idx in &pairs {
            let pts = samples.tuple(idx);
            let (a, b) = (as_matrix(&pts[0])?, as_matrix(&pts[1])?);
            if self.eval(&id, a).norm() > tol || self.eval(a, &id).norm() > tol {
                return Err(Error::Input("perturbation does not vanish on the identity".into()));
            }
            if self.eval(a, b).norm() > c * a.norm() * b.norm() + tol {
                return Err(Error::Input("perturbation violates its norm bound".into()));
            }
            let (alpha, beta) = (coeffs.next().unwrap(), coeffs.next().unwrap());
            let left = self.eval(&(a * alpha + b * beta), b);
            let right = self.eval(a, b) * alpha + self.eval(b, b) * beta;
            if (left - right).norm() > tol * (1.0 + a.norm() + b.norm()).powi(2) {
                return Err(Error::Input("perturbation is not bilinear in its first slot".into()));
            }
            let left = self.eval(a, &(a * alpha + b * beta));
            let right = self.eval(a, a) * alpha + self.eval(a, b) * beta;
            if (left - right).norm() > tol * (1.0 + a.norm() + b.norm()).powi(2) {
                return Err(Error::Input("perturbation is not bilinear in its second slot".into()));
            }
        }
        Ok(())
    }
}

impl std::fmt::Debug for BilinearPerturbation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BilinearPerturbation::{}", self.name())
    }
}

fn as_matrix(p: &Point) -> Result<&Matrix> {
    p.as_matrix()
        .ok_or_else(|| Error::Input(format!("expected a matrix point, got {}", p.shape())))
}

/// A family member: dimension, tolerance, perturbation, and the carrier ball
/// (matrices within Frobenius distance `radius` of the identity, which keeps
/// every sample invertible and the inverse solver contractive for small eps).
#[derive(Clone, Debug)]
pub struct PerturbedMatrixGroup {
    pub n: usize,
    pub eps: f64,
    pub phi: BilinearPerturbation,
    pub radius: f64,
}

/// Default Frobenius-ball radius around the identity.
pub const DEFAULT_CARRIER_RADIUS: f64 = 0.5;

impl PerturbedMatrixGroup {
    pub fn new(n: usize, eps: f64, phi: BilinearPerturbation) -> Result<Self> {
        if n == 0 {
            return Err(Error::Input("matrix dimension must be positive".into()));
        }
        if eps < 0.0 {
            return Err(Error::Input(format!("tolerance must be >= 0, got {eps}")));
        }
        Ok(PerturbedMatrixGroup {
            n,
            eps,
            phi,
            radius: DEFAULT_CARRIER_RADIUS,
        })
    }

    pub fn with_radius(mut self, radius: f64) -> Self {
        self.radius = radius;
        self
    }

    pub fn identity(&self) -> Matrix {
        Matrix::identity(self.n, self.n)
    }

    /// Perturbed multiplication AB + eps*phi(A, B). Since phi vanishes on the
    /// identity, A (*) I = I (*) A = A exactly.
    pub fn mul_eps(&self, a: &Matrix, b: &Matrix) -> Matrix {
        a * b + self.phi.eval(a, b) * self.eps
    }

    /// The classical multiplication this family collapses to.
    pub fn mul_classical(&self, a: &Matrix, b: &Matrix) -> Matrix {
        a * b
    }

    /// Sampling box for carrier matrices: entries of I + D with
    /// |D_ij| <= radius / n, which keeps the whole box inside the
    /// Frobenius ball.
    pub fn carrier_domain(&self) -> Result<Domain> {
        Domain::matrix_near_identity(self.n, self.radius / self.n as f64)
    }

    /// Residual of a candidate inverse: ||A (*) X - I||_F.
    pub fn inverse_residual(&self, a: &Matrix, x: &Matrix) -> f64 {
        (self.mul_eps(a, x) - self.identity()).norm()
    }

    /// Solve A (*) X = I by fixed-point iteration
    /// X_{k+1} = A^{-1}(I - eps*phi(A, X_k)) from X_0 = A^{-1}.
    ///
    /// The iteration map contracts with factor eps*C*||A^{-1}||*||A||, which
    /// is checked up front.
    pub fn inverse_eps(&self, a: &Matrix, tol: f64, max_iters: usize) -> Result<Matrix> {
        if tol <= 0.0 || max_iters == 0 {
            return Err(Error::Input("tolerance and iteration cap must be positive".into()));
        }
        let a_inv = a.clone().try_inverse().ok_or_else(|| {
            Error::Singularity("carrier matrix is not invertible".into())
        })?;
        let contraction = self.eps * self.phi.bound_constant() * a_inv.norm() * a.norm();
        if contraction >= 1.0 {
            return Err(Error::Conditioning(format!(
                "eps*C*||A^-1||*||A|| = {contraction:.3} >= 1; fixed point need not contract"
            )));
        }
        let id = self.identity();
        let mut x = a_inv.clone();
        for _ in 0..max_iters {
            let residual = self.inverse_residual(a, &x);
            if residual <= tol {
                return Ok(x);
            }
            x = &a_inv * (&id - self.phi.eval(a, &x) * self.eps);
        }
        Err(Error::Convergence {
            iters: max_iters,
            residual: self.inverse_residual(a, &x),
        })
    }

    /// Independent cross-check for the implicit inverse: assemble the
    /// n^2 x n^2 linear operator X |-> A X + eps*phi(A, X) column by column
    /// on the matrix-unit basis and solve it densely against vec(I).
    ///
    /// Shares no code path with `inverse_eps`.
    pub fn inverse_dense(&self, a: &Matrix) -> Result<Matrix> {
        let n = self.n;
        let mut system = Matrix::zeros(n * n, n * n);
        for col in 0..n * n {
            let mut basis = Matrix::zeros(n, n);
            basis[(col % n, col / n)] = 1.0; // column-major flattening
            let image = a * &basis + self.phi.eval(a, &basis) * self.eps;
            for row in 0..n * n {
                system[(row, col)] = image[(row % n, row / n)];
            }
        }
        let rhs = nalgebra::DVector::from_iterator(
            n * n,
            (0..n * n).map(|k| if k % n == k / n { 1.0 } else { 0.0 }),
        );
        let solution = system
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::Singularity("dense inverse system is singular".into()))?;
        Ok(Matrix::from_iterator(n, n, solution.iter().copied()))
    }

    /// Extract the Lie bracket at the identity from the group commutator of
    /// g = I + tX and h = I + tY:
    /// (g (*) h (*) g^-1 (*) h^-1 - I) / t^2, grouped left to right (the
    /// grouping matters: (*) is only approximately associative).
    ///
    /// Converges to the deformed bracket XY - YX + O(eps) with O(t)
    /// discretization error as t -> 0.
    pub fn extract_bracket(&self, x: &Matrix, y: &Matrix, t: f64) -> Result<Matrix> {
        if t <= 0.0 {
            return Err(Error::Input(format!("step t must be positive, got {t}")));
        }
        if t * x.norm() > self.radius || t * y.norm() > self.radius {
            return Err(Error::Input(
                "t too large: I + tX or I + tY leaves the carrier ball".into(),
            ));
        }
        let id = self.identity();
        let g = &id + x * t;
        let h = &id + y * t;
        let tol = 1e-14 * (1.0 + g.norm());
        let g_inv = self.inverse_eps(&g, tol, 100)?;
        let h_inv = self.inverse_eps(&h, tol, 100)?;
        let w = self.mul_eps(&self.mul_eps(&self.mul_eps(&g, &h), &g_inv), &h_inv);
        Ok((w - id) / (t * t))
    }

    /// View as a group descriptor so the generic auditor and collapse sweeps
    /// apply. The inverse slot runs the fixed-point solver.
    pub fn as_structure(&self) -> Result<StructureDescriptor> {
        let grp = self.clone();
        let grp_inv = self.clone();
        let ops = OperationTable::builder()
            .mul(move |a, b| Ok(Point::matrix(grp.mul_eps(as_matrix(a)?, as_matrix(b)?))))
            .one(Point::matrix(self.identity()))
            .inv(move |a| {
                let m = as_matrix(a)?;
                // Solve well below the collapse degeneracy floor so the
                // solved-side inverse axiom reads as an exact identity
                // rather than solver noise.
                let tol = 1e-13 * (1.0 + m.norm());
                Ok(Point::matrix(grp_inv.inverse_eps(m, tol, 200)?))
            })
            .build();
        let carrier = Carrier::boxed(self.carrier_domain()?);
        Ok(
            StructureDescriptor::new(StructureKind::Group, carrier, Metric::Frobenius, self.eps, ops)
                .with_label(format!(
                    "matrix-group(n={}, eps={}, phi={})",
                    self.n,
                    self.eps,
                    self.phi.name()
                )),
        )
    }
}

/// Defects of the three bracket axioms (bilinearity in both slots with
/// sampled scalars, antisymmetry against the exact negation, and the Jacobi
/// sum against zero) for an arbitrary bracket, graded against eps.
///
/// The bracket is the only approximate operation here; sums and scalar
/// multiples are exact matrix arithmetic.
pub fn lie_algebra_defects<F>(
    bracket: F,
    samples: &SampleSet,
    eps: f64,
) -> Result<AxiomDefectReport>
where
    F: Fn(&Matrix, &Matrix) -> Result<Matrix> + Send + Sync + 'static,
{
    let br = move |x: &Point, y: &Point| -> Result<Point> {
        Ok(Point::matrix(bracket(as_matrix(x)?, as_matrix(y)?)?))
    };
    let n = match samples.shape() {
        crate::point::PointShape::Matrix(n) => n,
        other => return Err(Error::Input(format!("expected matrix samples, got {other}"))),
    };
    let ops = OperationTable::builder()
        .bracket(br)
        .add(|x, y| {
            x.exact_add(y)
                .ok_or_else(|| Error::ShapeMismatch(x.shape(), y.shape()))
        })
        .zero(Point::matrix(Matrix::zeros(n, n)))
        .build();
    let carrier = Carrier::boxed(Domain::matrix(n, -1.0, 1.0)?);
    let desc = StructureDescriptor::new(StructureKind::LieAlgebra, carrier, Metric::Frobenius, eps, ops)
        .with_label("bracket-axioms");

    let catalog = crate::structures::axiom_catalog(StructureKind::LieAlgebra);
    let mut entries = Vec::new();
    for axiom in catalog.iter().filter(|a| a.name.starts_with("bracket-") || a.name == "jacobi-identity") {
        let (stats, skipped) = crate::structures::axiom_defect(&desc, axiom, samples)?;
        let pass = stats.max_defect <= eps;
        entries.push(AxiomEntry {
            axiom: axiom.name.to_string(),
            stats,
            bound: eps,
            pass,
            skipped,
        });
    }
    let certified_eps = entries.iter().map(|e| e.stats.max_defect).fold(0.0, f64::max);
    let overall_pass = entries.iter().all(|e| e.pass);
    Ok(AxiomDefectReport {
        label: "bracket-axioms".into(),
        kind: StructureKind::LieAlgebra,
        entries,
        overall_pass,
        certified_eps,
    })
}

/// One row of a C1 convergence table: tolerance and the worst Jacobian gap.
#[derive(Clone, Copy, Debug)]
pub struct JacobianGap {
    pub eps: f64,
    pub gap: f64,
}

/// Central-difference Jacobian of the multiplication map at (a, b), as an
/// n^2 x 2n^2 matrix over flattened (row-major) inputs.
fn multiplication_jacobian(
    grp: &PerturbedMatrixGroup,
    a: &Matrix,
    b: &Matrix,
    h: f64,
) -> Matrix {
    let n = grp.n;
    let dims = n * n;
    let mut jac = Matrix::zeros(dims, 2 * dims);
    let eval = |a: &Matrix, b: &Matrix| grp.mul_eps(a, b);
    for input in 0..2 * dims {
        let (is_b, k) = (input >= dims, input % dims);
        let (i, j) = (k / n, k % n);
        let mut ap = a.clone();
        let mut am = a.clone();
        let mut bp = b.clone();
        let mut bm = b.clone();
        if is_b {
            bp[(i, j)] += h;
            bm[(i, j)] -= h;
        } else {
            ap[(i, j)] += h;
            am[(i, j)] -= h;
        }
        let diff = (eval(&ap, &bp) - eval(&am, &bm)) / (2.0 * h);
        for out in 0..dims {
            jac[(out, input)] = diff[(out / n, out % n)];
        }
    }
    jac
}

/// For each tolerance in the grid, the max over probe pairs of the Frobenius
/// gap between the finite-difference Jacobians of the perturbed and the
/// classical multiplication maps. The table is expected to decay linearly in
/// eps (the two maps differ by eps*phi exactly).
pub fn c1_convergence<F>(
    family: F,
    eps_grid: &[f64],
    probes: &SampleSet,
    h: f64,
) -> Result<Vec<JacobianGap>>
where
    F: Fn(f64) -> PerturbedMatrixGroup,
{
    if h <= 0.0 {
        return Err(Error::Input("finite-difference step must be positive".into()));
    }
    let pairs = probes.tuple_indices(2)?;
    let classical = family(0.0);
    let mut table = Vec::with_capacity(eps_grid.len());
    for &eps in eps_grid {
        let grp = family(eps);
        if grp.n != classical.n {
            return Err(Error::Input("family members must share a dimension".into()));
        }
        let mut worst = 0.0_f64;
        for idx in &pairs {
            let pts = probes.tuple(idx);
            let (a, b) = (as_matrix(&pts[0])?, as_matrix(&pts[1])?);
            let j_eps = multiplication_jacobian(&grp, a, b, h);
            let j_zero = multiplication_jacobian(&classical, a, b, h);
            worst = worst.max((j_eps - j_zero).norm());
        }
        table.push(JacobianGap { eps, gap: worst });
    }
    Ok(table)
}

/// Audit the group axiom catalog of one family member.
pub fn audit_group(grp: &PerturbedMatrixGroup, samples: &SampleSet) -> Result<AxiomDefectReport> {
    audit(&grp.as_structure()?, samples)
}

/// Max relative Frobenius error of extracted brackets against the direct
/// commutator XY - YX over seeded random unit-norm pairs.
pub fn bracket_recovery_error(
    grp: &PerturbedMatrixGroup,
    t: f64,
    pairs: usize,
    seed: u64,
) -> Result<f64> {
    if pairs == 0 {
        return Err(Error::Input("need at least one pair".into()));
    }
    let mut rng = crate::sample::SplitMix64::new(seed);
    let n = grp.n;
    let unit_matrix = |rng: &mut crate::sample::SplitMix64| {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = rng.next_in(-1.0, 1.0);
            }
        }
        let norm = m.norm();
        m / norm
    };
    let mut worst = 0.0_f64;
    for _ in 0..pairs {
        let x = unit_matrix(&mut rng);
        let y = unit_matrix(&mut rng);
        let exact = &x * &y - &y * &x;
        let extracted = grp.extract_bracket(&x, &y, t)?;
        let rel = (extracted - &exact).norm() / exact.norm();
        worst = worst.max(rel);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(n: usize, eps: f64) -> PerturbedMatrixGroup {
        PerturbedMatrixGroup::new(n, eps, BilinearPerturbation::Commutator).unwrap()
    }

    fn carrier_samples(grp: &PerturbedMatrixGroup, seed: u64, count: usize) -> SampleSet {
        SampleSet::generate(seed, grp.carrier_domain().unwrap(), count).unwrap()
    }

    #[test]
    fn mul_eps_identity_is_exact() {
        let grp = group(3, 1e-2);
        let samples = carrier_samples(&grp, 42, 50);
        let id = grp.identity();
        for p in samples.points() {
            let a = p.as_matrix().unwrap();
            assert_eq!(grp.mul_eps(a, &id), *a);
            assert_eq!(grp.mul_eps(&id, a), *a);
        }
    }

    #[test]
    fn mul_eps_hand_example() {
        let eps = 0.25;
        let grp = group(2, eps);
        let a = Matrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        let b = Matrix::from_row_slice(2, 2, &[1.0, 0.0, 1.0, 1.0]);
        // AB = [[2,1],[1,1]], BA = [[1,1],[1,2]], AB - BA = [[1,0],[0,-1]].
        let expected = Matrix::from_row_slice(2, 2, &[2.0 + eps, 1.0, 1.0, 1.0 - eps]);
        assert!((grp.mul_eps(&a, &b) - expected).norm() < 1e-15);
        let classical = group(2, 0.0);
        assert_eq!(classical.mul_eps(&a, &b), &a * &b);
    }

    #[test]
    fn carrier_samples_are_well_conditioned() {
        // Frobenius ball of radius r < 1 around the identity: singular
        // values sit in [1 - r, 1 + r], so cond stays under (1+r)/(1-r).
        for n in [2, 3] {
            let grp = group(n, 1e-3);
            let cap = (1.0 + grp.radius) / (1.0 - grp.radius);
            let samples = carrier_samples(&grp, 19, 100);
            for p in samples.points() {
                let a = p.as_matrix().unwrap();
                let svd = a.clone().svd(false, false);
                let (max, min) = (
                    svd.singular_values.max(),
                    svd.singular_values.min(),
                );
                assert!(max / min <= cap, "cond {} exceeds cap {cap}", max / min);
            }
        }
    }

    #[test]
    fn phi_kinds_validate() {
        let grp = group(3, 0.0);
        let samples = carrier_samples(&grp, 7, 40);
        for phi in [
            BilinearPerturbation::Commutator,
            BilinearPerturbation::ScaledCommutator(0.5),
            BilinearPerturbation::TracelessProduct,
        ] {
            phi.validate(&samples, 1e-10).unwrap();
        }
    }

    #[test]
    fn inverse_identity_and_classical_limit() {
        let grp = group(3, 1e-3);
        let id = grp.identity();
        let inv = grp.inverse_eps(&id, 1e-14, 10).unwrap();
        assert!((inv - &id).norm() < 1e-14);

        let classical = group(3, 0.0);
        let a = &id + Matrix::from_fn(3, 3, |i, j| 0.1 / (1.0 + (i + 2 * j) as f64));
        let inv = classical.inverse_eps(&a, 1e-13, 10).unwrap();
        assert!((inv - a.clone().try_inverse().unwrap()).norm() < 1e-12);
    }

    #[test]
    fn inverse_matches_dense_oracle() {
        // The traceless-product perturbation makes the implicit inverse
        // genuinely differ from the classical one.
        let grp = PerturbedMatrixGroup::new(3, 1e-3, BilinearPerturbation::TracelessProduct)
            .unwrap();
        let samples = carrier_samples(&grp, 11, 25);
        for p in samples.points() {
            let a = p.as_matrix().unwrap();
            let x = grp.inverse_eps(a, 1e-13, 20).unwrap();
            let oracle = grp.inverse_dense(a).unwrap();
            assert!((x.clone() - &oracle).norm() < 1e-10, "{}", (x - oracle).norm());
            // And it is not the classical inverse.
            let classical = a.clone().try_inverse().unwrap();
            assert!((oracle - classical).norm() > 1e-6);
        }
    }

    #[test]
    fn diagonal_example_against_oracle() {
        let grp = group(2, 1e-3);
        let a = Matrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]);
        let x = grp.inverse_eps(&a, 1e-12, 10).unwrap();
        assert!(grp.inverse_residual(&a, &x) <= 1e-12);
        let oracle = grp.inverse_dense(&a).unwrap();
        assert!((x - oracle).norm() < 1e-10);
    }

    #[test]
    fn non_contractive_input_is_rejected() {
        let grp = group(2, 0.5);
        let a = Matrix::from_row_slice(2, 2, &[4.0, 0.0, 0.0, 0.25]);
        assert!(matches!(
            grp.inverse_eps(&a, 1e-12, 50),
            Err(Error::Conditioning(_))
        ));
    }

    #[test]
    fn bracket_of_equal_fields_vanishes() {
        let grp = group(2, 0.0);
        let x = Matrix::from_row_slice(2, 2, &[0.3, -0.1, 0.2, 0.4]);
        let b = grp.extract_bracket(&x, &x, 1e-3).unwrap();
        assert!(b.norm() < 1e-2 * (1.0 + x.norm().powi(2)), "{}", b.norm());
    }

    #[test]
    fn bracket_recovers_sl2_commutator() {
        let grp = group(2, 0.0);
        let e12 = Matrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let e21 = Matrix::from_row_slice(2, 2, &[0.0, 0.0, 1.0, 0.0]);
        let expected = Matrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let b = grp.extract_bracket(&e12, &e21, 1e-3).unwrap();
        let rel = (b - &expected).norm() / expected.norm();
        assert!(rel < 0.05, "relative error {rel}");
    }

    #[test]
    fn bracket_antisymmetry_estimate() {
        let grp = group(2, 1e-4);
        let t = 1e-3;
        let x = Matrix::from_row_slice(2, 2, &[0.1, 0.7, -0.3, 0.2]);
        let y = Matrix::from_row_slice(2, 2, &[-0.4, 0.2, 0.5, 0.1]);
        let bxy = grp.extract_bracket(&x, &y, t).unwrap();
        let byx = grp.extract_bracket(&y, &x, t).unwrap();
        let c = 20.0 * (1.0 + x.norm() * y.norm()).powi(2);
        let anti = (bxy + byx).norm();
        assert!(anti <= c * (t + grp.eps), "{anti}");
    }

    #[test]
    fn exact_commutator_passes_bracket_axioms() {
        let domain = Domain::matrix(2, -1.0, 1.0).unwrap();
        let samples = SampleSet::generate(5, domain, 300).unwrap();
        let report = lie_algebra_defects(|x, y| Ok(x * y - y * x), &samples, 1e-9).unwrap();
        assert_eq!(report.entries.len(), 4);
        assert!(report.certified_eps <= 1e-12, "{}", report.certified_eps);
    }

    #[test]
    fn biased_bracket_antisymmetry_defect_matches_hand_expansion() {
        // [x,y] = xy - yx + eps*x gives [x,y] + [y,x] = eps(x + y).
        let eps = 1e-2;
        let domain = Domain::matrix(2, -1.0, 1.0).unwrap();
        let samples = SampleSet::generate(6, domain, 400).unwrap();
        let report =
            lie_algebra_defects(move |x, y| Ok(x * y - y * x + x * eps), &samples, 1.0).unwrap();
        let anti = report
            .entries
            .iter()
            .find(|e| e.axiom == "bracket-antisymmetry")
            .unwrap();
        let pairs = samples.tuple_indices(2).unwrap();
        let oracle = pairs
            .iter()
            .map(|idx| {
                let pts = samples.tuple(idx);
                let (x, y) = (pts[0].as_matrix().unwrap().clone(), pts[1].as_matrix().unwrap());
                eps * (x + y).norm()
            })
            .fold(0.0_f64, f64::max);
        assert!((anti.stats.max_defect - oracle).abs() < 1e-12);
    }

    #[test]
    fn jacobian_gap_is_linear_in_eps_and_h_robust() {
        let probes = SampleSet::generate(
            21,
            Domain::matrix_near_identity(2, 0.2).unwrap(),
            12,
        )
        .unwrap();
        let family = |eps: f64| group(2, eps);
        let grid = [1e-2, 1e-3, 1e-4];
        let table = c1_convergence(family, &grid, &probes, 1e-5).unwrap();
        for w in table.windows(2) {
            let ratio = w[0].gap / w[1].gap;
            assert!((ratio - 10.0).abs() < 0.1, "ratio {ratio}");
        }
        let halved = c1_convergence(family, &grid, &probes, 5e-6).unwrap();
        for (a, b) in table.iter().zip(&halved) {
            assert!((a.gap - b.gap).abs() / a.gap < 0.01);
        }
        // eps = 0 means the same map: gap 0.
        let zero = c1_convergence(family, &[0.0], &probes, 1e-5).unwrap();
        assert!(zero[0].gap < 1e-9);
    }

    #[test]
    fn group_audit_identity_axioms_degenerate() {
        let grp = group(2, 1e-3);
        let samples = carrier_samples(&grp, 33, 500);
        let report = audit_group(&grp, &samples).unwrap();
        for name in ["left-identity", "right-identity"] {
            assert!(report.entry(name).unwrap().stats.max_defect <= 1e-13);
        }
        // Associativity defect is genuinely order eps.
        let assoc = report.entry("associativity").unwrap().stats.max_defect;
        assert!(assoc > 1e-5 && assoc < 10.0 * grp.eps, "{assoc}");
    }
}
