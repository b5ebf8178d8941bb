//! Deterministic sampling over declared compact boxes.
//!
//! Every sweep quantifies over a user-declared box so compactness is explicit
//! and results are reproducible: regenerating a [`SampleSet`] from the same
//! (seed, domain, count) gives the identical point list bit for bit.

use crate::error::{Error, Result};
use crate::metric::Metric;
use crate::point::{Point, PointShape};

/// SplitMix64 stream. Small, fast, and stable across platforms; all sampling
/// in this crate goes through it so reruns are bit-identical.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1) with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi].
    pub fn next_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + self.next_f64() * (hi - lo)
    }
}

/// A compact box of carrier points: per-coordinate bounds in flat
/// (row-major) coordinate order.
#[derive(Clone, Debug, PartialEq)]
pub struct Domain {
    pub shape: PointShape,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Domain {
    pub fn new(shape: PointShape, lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != shape.dims() || hi.len() != shape.dims() {
            return Err(Error::Input(format!(
                "domain bounds must have {} coordinates",
                shape.dims()
            )));
        }
        for (l, h) in lo.iter().zip(&hi) {
            if !l.is_finite() || !h.is_finite() || l > h {
                return Err(Error::Input(format!("invalid bound [{l}, {h}]")));
            }
        }
        Ok(Domain { shape, lo, hi })
    }

    /// Scalar interval [lo, hi].
    pub fn scalar(lo: f64, hi: f64) -> Result<Self> {
        Domain::new(PointShape::Scalar, vec![lo], vec![hi])
    }

    /// Vector box with the same interval in every coordinate.
    pub fn vector(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Domain::new(PointShape::Vector(dim), vec![lo; dim], vec![hi; dim])
    }

    /// Matrix box with the same interval in every entry.
    pub fn matrix(n: usize, lo: f64, hi: f64) -> Result<Self> {
        Domain::new(PointShape::Matrix(n), vec![lo; n * n], vec![hi; n * n])
    }

    /// Box of matrices `I + D` with every entry of `D` in
    /// [-half_width, half_width]. With half_width <= r/n the whole box lies in
    /// the Frobenius ball of radius r around the identity, so every sample is
    /// invertible for r < 1.
    pub fn matrix_near_identity(n: usize, half_width: f64) -> Result<Self> {
        let mut lo = Vec::with_capacity(n * n);
        let mut hi = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let c = if i == j { 1.0 } else { 0.0 };
                lo.push(c - half_width);
                hi.push(c + half_width);
            }
        }
        Domain::new(PointShape::Matrix(n), lo, hi)
    }

    pub fn contains(&self, p: &Point) -> bool {
        if p.shape() != self.shape {
            return false;
        }
        p.coords()
            .iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(c, (l, h))| *c >= *l && *c <= *h)
    }

    /// Nearest point of the box (coordinatewise clamp).
    pub fn clamp(&self, p: &Point) -> Point {
        let coords: Vec<f64> = p
            .coords()
            .iter()
            .zip(self.lo.iter().zip(&self.hi))
            .map(|(c, (l, h))| c.clamp(*l, *h))
            .collect();
        Point::from_coords(self.shape, &coords)
    }

    /// Distance from a point to the box under the given metric
    /// (0 if the point is inside).
    pub fn distance_outside(&self, p: &Point, metric: &Metric) -> Result<f64> {
        metric.distance(p, &self.clamp(p))
    }
}

/// Default sample count for axiom sweeps.
pub const DEFAULT_SAMPLE_COUNT: usize = 4096;

/// A materialized, reproducible set of carrier points.
///
/// Random sets are uniform i.i.d. over the domain box; exhaustive sets list a
/// finite carrier so checks over them enumerate every tuple.
#[derive(Clone, Debug)]
pub struct SampleSet {
    seed: u64,
    domain: Option<Domain>,
    points: Vec<Point>,
    exhaustive: bool,
}

impl SampleSet {
    /// Draw `count` points uniformly from the domain, seeded.
    pub fn generate(seed: u64, domain: Domain, count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::Input("sample count must be positive".into()));
        }
        let mut rng = SplitMix64::new(seed);
        let dims = domain.shape.dims();
        let mut points = Vec::with_capacity(count);
        for _ in 0..count {
            let mut coords = Vec::with_capacity(dims);
            for k in 0..dims {
                coords.push(rng.next_in(domain.lo[k], domain.hi[k]));
            }
            points.push(Point::from_coords(domain.shape, &coords));
        }
        Ok(SampleSet {
            seed,
            domain: Some(domain),
            points,
            exhaustive: false,
        })
    }

    /// Wrap a finite carrier; tuple iteration becomes the full Cartesian
    /// product so checks are exhaustive.
    pub fn exhaustive(points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Input("finite carrier must be nonempty".into()));
        }
        let shape = points[0].shape();
        if points.iter().any(|p| p.shape() != shape) {
            return Err(Error::Input("finite carrier points must share a shape".into()));
        }
        Ok(SampleSet {
            seed: 0,
            domain: None,
            points,
            exhaustive: true,
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_exhaustive(&self) -> bool {
        self.exhaustive
    }

    pub fn domain(&self) -> Option<&Domain> {
        self.domain.as_ref()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn shape(&self) -> PointShape {
        self.points[0].shape()
    }

    /// Index tuples for an axiom of the given arity.
    ///
    /// Exhaustive sets enumerate the full Cartesian product. Random sets
    /// produce one tuple per point by pairing index i with the indices offset
    /// by multiples of len/arity, so tuples reuse the materialized points but
    /// cover the product box; the scheme is a pure function of (len, arity).
    pub fn tuple_indices(&self, arity: usize) -> Result<Vec<Vec<usize>>> {
        if arity == 0 {
            return Err(Error::Input("tuple arity must be positive".into()));
        }
        let n = self.points.len();
        if self.exhaustive {
            let total = n.checked_pow(arity as u32).ok_or_else(|| {
                Error::Input("exhaustive tuple enumeration overflow".into())
            })?;
            if total > 2_000_000 {
                return Err(Error::Input(format!(
                    "exhaustive enumeration of {total} tuples is too large"
                )));
            }
            let mut out = Vec::with_capacity(total);
            let mut idx = vec![0usize; arity];
            loop {
                out.push(idx.clone());
                let mut k = arity;
                loop {
                    if k == 0 {
                        return Ok(out);
                    }
                    k -= 1;
                    idx[k] += 1;
                    if idx[k] < n {
                        break;
                    }
                    idx[k] = 0;
                }
            }
        } else {
            let stride = (n / arity).max(1);
            Ok((0..n)
                .map(|i| (0..arity).map(|j| (i + j * stride) % n).collect())
                .collect())
        }
    }

    /// Materialize the points of a tuple.
    pub fn tuple(&self, indices: &[usize]) -> Vec<Point> {
        indices.iter().map(|&i| self.points[i].clone()).collect()
    }
}

/// Deterministic auxiliary scalar stream tied to a sample set's seed, used
/// when axioms quantify over scalars from a separate scalar box.
pub fn scalar_stream(seed: u64, scalar_lo: f64, scalar_hi: f64, count: usize) -> Vec<f64> {
    let mut rng = SplitMix64::new(seed ^ 0x05CA_1AB1_E0DD_BA11);
    (0..count).map(|_| rng.next_in(scalar_lo, scalar_hi)).collect()
}
