//! The fuzzy-algebra bridge: t-norms, membership functions, the induced
//! similarity/dissimilarity pair, the per-triple tolerance the embedding
//! derives, and the fuzzy-associativity (Rosenfeld-style) inequalities.
//!
//! Carriers here are finite element lists so every check is exhaustive.
//! Note the induced d(a,b) = 1 - T(mu(a), mu(b)) generally has d(a,a) > 0,
//! so it is a dissimilarity, not a metric; only the tolerance bounds are
//! ever asserted against it.

use std::sync::Arc;

use crate::error::{Error, Result};

/// Triangular norms on [0, 1].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TNorm {
    Minimum,
    Product,
    Lukasiewicz,
}

impl TNorm {
    pub const ALL: [TNorm; 3] = [TNorm::Minimum, TNorm::Product, TNorm::Lukasiewicz];

    pub fn name(&self) -> &'static str {
        match self {
            TNorm::Minimum => "minimum",
            TNorm::Product => "product",
            TNorm::Lukasiewicz => "lukasiewicz",
        }
    }

    pub fn parse(s: &str) -> Result<TNorm> {
        TNorm::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown t-norm `{s}`")))
    }

    pub fn eval(&self, a: f64, b: f64) -> Result<f64> {
        for v in [a, b] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Domain(format!("t-norm operand {v} outside [0,1]")));
            }
        }
        Ok(match self {
            TNorm::Minimum => a.min(b),
            TNorm::Product => a * b,
            TNorm::Lukasiewicz => (a + b - 1.0).max(0.0),
        })
    }

    /// Ternary application by associative nesting T(T(a,b),c).
    pub fn eval3(&self, a: f64, b: f64, c: f64) -> Result<f64> {
        self.eval(self.eval(a, b)?, c)
    }
}

/// Evaluate a t-norm; operands must lie in [0, 1].
pub fn tnorm_eval(t: TNorm, a: f64, b: f64) -> Result<f64> {
    t.eval(a, b)
}

/// Membership degrees over a finite carrier: tabulated per element, or a
/// formula (which also covers points an operation may produce outside the
/// listed elements).
#[derive(Clone)]
pub enum Membership {
    Table(Vec<f64>),
    Formula(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

/// A fuzzy set: finite element list plus membership function into [0, 1].
#[derive(Clone)]
pub struct FuzzySet {
    elements: Vec<f64>,
    membership: Membership,
}

impl FuzzySet {
    pub fn from_table(elements: Vec<f64>, mu: Vec<f64>) -> Result<Self> {
        if elements.is_empty() || elements.len() != mu.len() {
            return Err(Error::Input(
                "element and membership lists must be nonempty and equal-length".into(),
            ));
        }
        if mu.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::Input("membership values must lie in [0,1]".into()));
        }
        Ok(FuzzySet {
            elements,
            membership: Membership::Table(mu),
        })
    }

    pub fn from_formula(
        elements: Vec<f64>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::Input("element list must be nonempty".into()));
        }
        if elements.iter().any(|&x| !(0.0..=1.0).contains(&f(x))) {
            return Err(Error::Input("membership values must lie in [0,1]".into()));
        }
        Ok(FuzzySet {
            elements,
            membership: Membership::Formula(Arc::new(f)),
        })
    }

    pub fn elements(&self) -> &[f64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Membership of a point. For tabulated sets the point must be one of
    /// the listed elements; anything else is a closure error.
    pub fn mu(&self, x: f64) -> Result<f64> {
        match &self.membership {
            Membership::Table(values) => self
                .elements
                .iter()
                .position(|&e| e == x)
                .map(|i| values[i])
                .ok_or_else(|| {
                    Error::Closure(format!("{x} is not an element of the tabulated carrier"))
                }),
            Membership::Formula(f) => {
                let v = f(x);
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::Domain(format!("membership {v} outside [0,1] at {x}")));
                }
                Ok(v)
            }
        }
    }

    pub fn is_crisp(&self) -> bool {
        self.elements
            .iter()
            .all(|&x| matches!(self.mu(x), Ok(v) if v == 0.0 || v == 1.0))
    }
}

impl std::fmt::Debug for FuzzySet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FuzzySet({} elements)", self.elements.len())
    }
}

/// The similarity/dissimilarity pair a fuzzy set induces:
/// s(a,b) = T(mu(a), mu(b)) and d(a,b) = 1 - s(a,b).
#[derive(Clone, Debug)]
pub struct InducedSimilarity {
    pub source: FuzzySet,
    pub tnorm: TNorm,
}

impl InducedSimilarity {
    pub fn s(&self, a: f64, b: f64) -> Result<f64> {
        self.tnorm.eval(self.source.mu(a)?, self.source.mu(b)?)
    }

    pub fn d(&self, a: f64, b: f64) -> Result<f64> {
        Ok(1.0 - self.s(a, b)?)
    }
}

/// Build the induced similarity of a fuzzy set under a t-norm. With a crisp
/// membership and the minimum t-norm, s(a,b) = 1 exactly on pairs of
/// full-membership elements.
pub fn embed_fuzzy(fs: &FuzzySet, t: TNorm) -> InducedSimilarity {
    InducedSimilarity {
        source: fs.clone(),
        tnorm: t,
    }
}

/// The tolerance the embedding derives for one associativity instance:
/// 1 - T(T(mu(a*b), mu(c)), T(mu(a), mu(b*c))).
///
/// Whenever the fuzzy-associativity inequalities hold for the triple, the
/// induced dissimilarity of the two association orders is bounded by this.
pub fn derived_epsilon(
    fs: &FuzzySet,
    t: TNorm,
    op: &dyn Fn(f64, f64) -> f64,
    a: f64,
    b: f64,
    c: f64,
) -> Result<f64> {
    let ab = op(a, b);
    let bc = op(b, c);
    let left = t.eval(fs.mu(ab)?, fs.mu(c)?)?;
    let right = t.eval(fs.mu(a)?, fs.mu(bc)?)?;
    Ok(1.0 - t.eval(left, right)?)
}

/// Largest gap found when checking, exhaustively over triples, that the
/// induced associativity dissimilarity is bounded by the derived tolerance.
#[derive(Clone, Debug)]
pub struct EmbeddingBoundReport {
    pub triples_checked: usize,
    /// max over triples of d((a*b)*c, a*(b*c)) - derived epsilon; the bound
    /// holds when this is <= 0.
    pub worst_gap: f64,
    pub worst_triple: Option<(f64, f64, f64)>,
    pub holds: bool,
}

/// Exhaustively verify the embedding bound on every carrier triple.
pub fn check_embedding_bound(
    fs: &FuzzySet,
    t: TNorm,
    op: &dyn Fn(f64, f64) -> f64,
) -> Result<EmbeddingBoundReport> {
    let sim = embed_fuzzy(fs, t);
    let mut worst_gap = f64::NEG_INFINITY;
    let mut worst_triple = None;
    let mut count = 0usize;
    for &a in fs.elements() {
        for &b in fs.elements() {
            for &c in fs.elements() {
                let lhs = op(op(a, b), c);
                let rhs = op(a, op(b, c));
                let d = sim.d(lhs, rhs)?;
                let eps = derived_epsilon(fs, t, op, a, b, c)?;
                let gap = d - eps;
                if gap > worst_gap {
                    worst_gap = gap;
                    worst_triple = Some((a, b, c));
                }
                count += 1;
            }
        }
    }
    Ok(EmbeddingBoundReport {
        triples_checked: count,
        worst_gap,
        worst_triple,
        holds: worst_gap <= 1e-12,
    })
}

/// Membership from a similarity and a reference element: mu(a) = s(a, e).
/// This is the direction in which a similarity structure induces a fuzzy
/// one — fuzziness is similarity constrained to one reference element.
pub fn duality_membership<S>(s: S, e: f64) -> impl Fn(f64) -> Result<f64>
where
    S: Fn(f64, f64) -> Result<f64>,
{
    move |a| s(a, e)
}

/// One violated fuzzy-associativity inequality, with its witness triple.
#[derive(Clone, Debug)]
pub struct RosenfeldViolation {
    pub inequality: &'static str,
    pub triple: (f64, f64, f64),
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug)]
pub struct RosenfeldReport {
    pub triples_checked: usize,
    pub violations: Vec<RosenfeldViolation>,
}

impl RosenfeldReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustively check the two fuzzy-associativity inequalities
/// mu((a*b)*c) >= T(mu(a*b), mu(c)) and mu(a*(b*c)) >= T(mu(a), mu(b*c))
/// over all carrier triples, reporting violations with witnesses.
pub fn check_rosenfeld(
    fs: &FuzzySet,
    op: &dyn Fn(f64, f64) -> f64,
    t: TNorm,
) -> Result<RosenfeldReport> {
    let mut violations = Vec::new();
    let mut count = 0usize;
    for &a in fs.elements() {
        for &b in fs.elements() {
            for &c in fs.elements() {
                count += 1;
                let ab = op(a, b);
                let bc = op(b, c);
                let lhs1 = fs.mu(op(ab, c))?;
                let rhs1 = t.eval(fs.mu(ab)?, fs.mu(c)?)?;
                if lhs1 < rhs1 - 1e-12 {
                    violations.push(RosenfeldViolation {
                        inequality: "mu((a*b)*c) >= T(mu(a*b), mu(c))",
                        triple: (a, b, c),
                        lhs: lhs1,
                        rhs: rhs1,
                    });
                }
                let lhs2 = fs.mu(op(a, bc))?;
                let rhs2 = t.eval(fs.mu(a)?, fs.mu(bc)?)?;
                if lhs2 < rhs2 - 1e-12 {
                    violations.push(RosenfeldViolation {
                        inequality: "mu(a*(b*c)) >= T(mu(a), mu(b*c))",
                        triple: (a, b, c),
                        lhs: lhs2,
                        rhs: rhs2,
                    });
                }
            }
        }
    }
    Ok(RosenfeldReport {
        triples_checked: count,
        violations,
    })
}

/// Word-metric membership on the integers mod `modulus`: mu(x) = base^w(x)
/// where w is the minimum number of +-1 steps reaching x. Subadditivity of w
/// makes this satisfy the fuzzy-associativity inequalities under the product
/// t-norm, so it is a convenient non-crisp test carrier.
pub fn word_metric_membership(modulus: usize, base: f64) -> Result<FuzzySet> {
    if modulus == 0 || !(0.0 < base && base <= 1.0) {
        return Err(Error::Input("need modulus >= 1 and base in (0,1]".into()));
    }
    let elements: Vec<f64> = (0..modulus).map(|k| k as f64).collect();
    let mu: Vec<f64> = (0..modulus)
        .map(|k| {
            let w = k.min(modulus - k) as i32;
            base.powi(w)
        })
        .collect();
    FuzzySet::from_table(elements, mu)
}
