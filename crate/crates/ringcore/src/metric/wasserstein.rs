use crate::error::{Error, Result};
use crate::metric::lap::min_cost_assignment;
use crate::metric::PointId;

/// Store of `l`-point tuples over a Euclidean base space; distances are
/// p-Wasserstein matching costs, solved exactly per pair.
///
/// Tuples are cheap to re-solve at small `l`, so nothing is memoized.
#[derive(Debug, Clone)]
pub struct TupleSpace {
    tuple_len: usize,
    dim: usize,
    p: f64,
    // tuple i occupies flat[i*l*dim .. (i+1)*l*dim], vertex-major
    flat: Vec<f64>,
}

impl TupleSpace {
    pub fn new(tuple_len: usize, dim: usize, p: f64, flat: Vec<f64>) -> Result<Self> {
        if tuple_len == 0 || dim == 0 {
            return Err(Error::Config("tuple length and dim must be positive".into()));
        }
        if p <= 0.0 || !p.is_finite() {
            return Err(Error::Config(format!("wasserstein power p={p} must be positive")));
        }
        if !flat.len().is_multiple_of(tuple_len * dim) {
            return Err(Error::Config(format!(
                "tuple store length {} not a multiple of l*d = {}",
                flat.len(),
                tuple_len * dim
            )));
        }
        Ok(Self {
            tuple_len,
            dim,
            p,
            flat,
        })
    }

    pub fn from_tuples(tuple_len: usize, dim: usize, p: f64, tuples: &[Vec<Vec<f64>>]) -> Result<Self> {
        let mut flat = Vec::with_capacity(tuples.len() * tuple_len * dim);
        for (i, t) in tuples.iter().enumerate() {
            if t.len() != tuple_len {
                return Err(Error::TupleLength {
                    expected: tuple_len,
                    got: t.len(),
                });
            }
            for v in t {
                if v.len() != dim {
                    return Err(Error::Parse {
                        line: i + 1,
                        col: v.len(),
                        msg: format!("expected {dim}-vector inside tuple, got length {}", v.len()),
                    });
                }
                flat.extend_from_slice(v);
            }
        }
        Self::new(tuple_len, dim, p, flat)
    }

    pub fn len(&self) -> usize {
        self.flat.len() / (self.tuple_len * self.dim)
    }

    pub fn is_empty(&self) -> bool {
        self.flat.is_empty()
    }

    pub fn tuple_len(&self) -> usize {
        self.tuple_len
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn power(&self) -> f64 {
        self.p
    }

    #[inline]
    fn vertex(&self, tuple: usize, v: usize) -> &[f64] {
        let base = (tuple * self.tuple_len + v) * self.dim;
        &self.flat[base..base + self.dim]
    }

    /// `(min over bijections of sum dist^p)^(1/p)` via an exact
    /// assignment-problem solve, O(l^3).
    pub fn dist(&self, a: usize, b: usize) -> f64 {
        if a == b {
            return 0.0;
        }
        let p = self.p;
        let (total, _) = min_cost_assignment(self.tuple_len, |i, j| {
            let d = euclid(self.vertex(a, i), self.vertex(b, j));
            if p == 1.0 {
                d
            } else if p == 2.0 {
                d * d
            } else {
                d.powf(p)
            }
        });
        if p == 1.0 {
            total
        } else {
            total.powf(1.0 / p)
        }
    }

    pub fn append(&self, tuples: &[Vec<Vec<f64>>]) -> Result<(Self, Vec<PointId>)> {
        let appended = Self::from_tuples(self.tuple_len, self.dim, self.p, tuples)?;
        let start = self.len();
        let mut flat = self.flat.clone();
        flat.extend_from_slice(&appended.flat);
        Ok((
            Self {
                tuple_len: self.tuple_len,
                dim: self.dim,
                p: self.p,
                flat,
            },
            (start..start + tuples.len()).map(PointId).collect(),
        ))
    }

    /// Raw tuple as a list of vertices, for oracles and serialization.
    pub fn tuple(&self, i: usize) -> Vec<Vec<f64>> {
        (0..self.tuple_len)
            .map(|v| self.vertex(i, v).to_vec())
            .collect()
    }
}

#[inline]
fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}
