//! Carrier elements: scalars, vectors, and square matrices over the reals.

use std::fmt;

use nalgebra::{DMatrix, DVector};

/// The shape of a carrier element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointShape {
    Scalar,
    /// Fixed-length real tuple.
    Vector(usize),
    /// Square n-by-n real matrix.
    Matrix(usize),
}

impl PointShape {
    /// Number of real coordinates a point of this shape carries.
    pub fn dims(&self) -> usize {
        match self {
            PointShape::Scalar => 1,
            PointShape::Vector(n) => *n,
            PointShape::Matrix(n) => n * n,
        }
    }
}

impl fmt::Display for PointShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointShape::Scalar => write!(f, "scalar"),
            PointShape::Vector(n) => write!(f, "vector[{n}]"),
            PointShape::Matrix(n) => write!(f, "matrix[{n}x{n}]"),
        }
    }
}

/// An element of a carrier set. All entries are finite by construction.
#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    Scalar(f64),
    Vector(DVector<f64>),
    Matrix(DMatrix<f64>),
}

impl Point {
    /// Scalar point. Panics on NaN or infinity.
    pub fn scalar(x: f64) -> Self {
        assert!(x.is_finite(), "scalar point must be finite, got {x}");
        Point::Scalar(x)
    }

    /// Vector point. Panics on non-finite entries.
    pub fn vector(entries: Vec<f64>) -> Self {
        assert!(
            entries.iter().all(|v| v.is_finite()),
            "vector point must have finite entries"
        );
        Point::Vector(DVector::from_vec(entries))
    }

    /// Square matrix point from row-major entries. Panics if the entry count
    /// is not a perfect square or any entry is non-finite.
    pub fn matrix_from_rows(n: usize, entries: Vec<f64>) -> Self {
        assert_eq!(entries.len(), n * n, "expected {} entries", n * n);
        assert!(
            entries.iter().all(|v| v.is_finite()),
            "matrix point must have finite entries"
        );
        Point::Matrix(DMatrix::from_row_slice(n, n, &entries))
    }

    /// Wrap an existing square matrix. Panics on non-square or non-finite input.
    pub fn matrix(m: DMatrix<f64>) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "matrix point must be square");
        assert!(
            m.iter().all(|v| v.is_finite()),
            "matrix point must have finite entries"
        );
        Point::Matrix(m)
    }

    pub fn shape(&self) -> PointShape {
        match self {
            Point::Scalar(_) => PointShape::Scalar,
            Point::Vector(v) => PointShape::Vector(v.len()),
            Point::Matrix(m) => PointShape::Matrix(m.nrows()),
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Point::Scalar(x) => x.is_finite(),
            Point::Vector(v) => v.iter().all(|x| x.is_finite()),
            Point::Matrix(m) => m.iter().all(|x| x.is_finite()),
        }
    }

    /// Coordinates in flat order (row-major for matrices).
    pub fn coords(&self) -> Vec<f64> {
        match self {
            Point::Scalar(x) => vec![*x],
            Point::Vector(v) => v.iter().copied().collect(),
            Point::Matrix(m) => {
                let n = m.nrows();
                (0..n).flat_map(|i| (0..n).map(move |j| m[(i, j)])).collect()
            }
        }
    }

    /// Rebuild a point of the given shape from flat coordinates (row-major).
    pub fn from_coords(shape: PointShape, coords: &[f64]) -> Self {
        assert_eq!(coords.len(), shape.dims());
        match shape {
            PointShape::Scalar => Point::scalar(coords[0]),
            PointShape::Vector(_) => Point::vector(coords.to_vec()),
            PointShape::Matrix(n) => Point::matrix_from_rows(n, coords.to_vec()),
        }
    }

    /// The zero element of the same shape.
    pub fn zero_like(&self) -> Self {
        match self {
            Point::Scalar(_) => Point::Scalar(0.0),
            Point::Vector(v) => Point::Vector(DVector::zeros(v.len())),
            Point::Matrix(m) => Point::Matrix(DMatrix::zeros(m.nrows(), m.ncols())),
        }
    }

    pub fn as_scalar(&self) -> Option<f64> {
        match self {
            Point::Scalar(x) => Some(*x),
            _ => None,
        }
    }

    pub fn as_matrix(&self) -> Option<&DMatrix<f64>> {
        match self {
            Point::Matrix(m) => Some(m),
            _ => None,
        }
    }

    /// Exact (classical) pointwise sum. Shapes must agree.
    pub fn exact_add(&self, other: &Point) -> Option<Point> {
        match (self, other) {
            (Point::Scalar(a), Point::Scalar(b)) => Some(Point::Scalar(a + b)),
            (Point::Vector(a), Point::Vector(b)) if a.len() == b.len() => {
                Some(Point::Vector(a + b))
            }
            (Point::Matrix(a), Point::Matrix(b)) if a.shape() == b.shape() => {
                Some(Point::Matrix(a + b))
            }
            _ => None,
        }
    }

    /// Exact (classical) scalar multiple.
    pub fn exact_scale(&self, c: f64) -> Point {
        match self {
            Point::Scalar(x) => Point::Scalar(c * x),
            Point::Vector(v) => Point::Vector(v * c),
            Point::Matrix(m) => Point::Matrix(m * c),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coords_round_trip() {
        let p = Point::matrix_from_rows(2, vec![1.0, 2.0, 3.0, 4.0]);
        let q = Point::from_coords(p.shape(), &p.coords());
        assert_eq!(p, q);
    }

    #[test]
    #[should_panic]
    fn rejects_nan() {
        let _ = Point::scalar(f64::NAN);
    }

    #[test]
    fn exact_ops() {
        let a = Point::vector(vec![1.0, 2.0]);
        let b = Point::vector(vec![3.0, -1.0]);
        assert_eq!(a.exact_add(&b).unwrap(), Point::vector(vec![4.0, 1.0]));
        assert_eq!(a.exact_scale(2.0), Point::vector(vec![2.0, 4.0]));
        assert!(a.exact_add(&Point::scalar(1.0)).is_none());
    }
}
