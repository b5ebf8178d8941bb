//! Metrics on carriers, epsilon-approximate equality, and the
//! similarity/dissimilarity conversion.

use crate::error::{Error, Result};
use crate::point::{Point, PointShape};

/// Built-in metric kinds. Each kind is tied to the carrier shapes it makes
/// sense for; `Discrete` (0 on equality, 1 otherwise) applies to any shape.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    /// |x - y| on scalars.
    AbsoluteDifference,
    /// Euclidean norm of the difference, on scalars and vectors.
    Euclidean,
    /// Frobenius norm of the difference, on matrices.
    Frobenius,
    /// 0 if x = y exactly, 1 otherwise; encodes equality as similarity.
    Discrete,
}

impl Metric {
    /// The conventional metric for a carrier shape: absolute difference for
    /// scalars, Euclidean for vectors, Frobenius for matrices.
    pub fn default_for(shape: PointShape) -> Metric {
        match shape {
            PointShape::Scalar => Metric::AbsoluteDifference,
            PointShape::Vector(_) => Metric::Euclidean,
            PointShape::Matrix(_) => Metric::Frobenius,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Metric::AbsoluteDifference => "absolute-difference",
            Metric::Euclidean => "euclidean",
            Metric::Frobenius => "frobenius",
            Metric::Discrete => "discrete",
        }
    }

    /// Distance between two points of the same shape.
    pub fn distance(&self, x: &Point, y: &Point) -> Result<f64> {
        if x.shape() != y.shape() {
            return Err(Error::ShapeMismatch(x.shape(), y.shape()));
        }
        match (self, x, y) {
            (Metric::Discrete, _, _) => Ok(if x == y { 0.0 } else { 1.0 }),
            (Metric::AbsoluteDifference, Point::Scalar(a), Point::Scalar(b)) => Ok((a - b).abs()),
            (Metric::Euclidean, Point::Scalar(a), Point::Scalar(b)) => Ok((a - b).abs()),
            (Metric::Euclidean, Point::Vector(a), Point::Vector(b)) => Ok((a - b).norm()),
            (Metric::Frobenius, Point::Matrix(a), Point::Matrix(b)) => Ok((a - b).norm()),
            _ => Err(Error::Input(format!(
                "metric {} does not apply to {} points",
                self.name(),
                x.shape()
            ))),
        }
    }
}

/// Whether similarity is derived from a bounded metric (s = 1 - d, requires
/// d in \[0,1\]) or an unbounded one (s = 1 / (1 + d)).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimilarityMode {
    Bounded,
    Unbounded,
}

/// Convert a metric value to a similarity score in [0, 1].
///
/// In either mode, d <= eps holds exactly when the similarity is at least
/// [`similarity_threshold`]`(eps, mode)`.
pub fn similarity_from_metric(d_value: f64, mode: SimilarityMode) -> Result<f64> {
    if d_value.is_nan() || d_value < 0.0 {
        return Err(Error::Domain(format!("metric value must be >= 0, got {d_value}")));
    }
    match mode {
        SimilarityMode::Bounded => {
            if d_value > 1.0 {
                return Err(Error::Domain(format!(
                    "bounded similarity requires d in [0,1], got {d_value}"
                )));
            }
            Ok(1.0 - d_value)
        }
        SimilarityMode::Unbounded => Ok(1.0 / (1.0 + d_value)),
    }
}

/// The similarity score equivalent to distance eps: 1 - eps (bounded) or
/// 1 / (1 + eps) (unbounded).
pub fn similarity_threshold(eps: f64, mode: SimilarityMode) -> f64 {
    match mode {
        SimilarityMode::Bounded => 1.0 - eps,
        SimilarityMode::Unbounded => 1.0 / (1.0 + eps),
    }
}

/// Approximate equality: x and y agree within eps under the metric.
pub fn approx_equal(x: &Point, y: &Point, metric: &Metric, eps: f64) -> Result<bool> {
    if eps < 0.0 {
        return Err(Error::Input(format!("tolerance must be >= 0, got {eps}")));
    }
    Ok(metric.distance(x, y)? <= eps)
}
