use crate::error::{Error, Result};
use crate::metric::PointId;

/// Flat row-major coordinate table.
#[derive(Debug, Clone)]
pub struct EuclideanSpace {
    dim: usize,
    coords: Vec<f64>,
}

impl EuclideanSpace {
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("euclidean dimension must be positive".into()));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::Config(format!(
                "coordinate table length {} is not a multiple of dim {}",
                coords.len(),
                dim
            )));
        }
        Ok(Self { dim, coords })
    }

    pub fn from_rows(dim: usize, rows: &[Vec<f64>]) -> Result<Self> {
        let mut coords = Vec::with_capacity(rows.len() * dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Parse {
                    line: i + 1,
                    col: row.len(),
                    msg: format!("expected {} coordinates, got {}", dim, row.len()),
                });
            }
            coords.extend_from_slice(row);
        }
        Self::new(dim, coords)
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    #[inline]
    pub fn dist(&self, a: usize, b: usize) -> f64 {
        let (pa, pb) = (self.point(a), self.point(b));
        pa.iter()
            .zip(pb)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    }

    pub fn append(&self, pts: &[Vec<f64>]) -> Result<(Self, Vec<PointId>)> {
        let mut coords = self.coords.clone();
        let start = self.len();
        for (i, p) in pts.iter().enumerate() {
            if p.len() != self.dim {
                return Err(Error::Parse {
                    line: i + 1,
                    col: p.len(),
                    msg: format!("expected {} coordinates, got {}", self.dim, p.len()),
                });
            }
            coords.extend_from_slice(p);
        }
        Ok((
            Self {
                dim: self.dim,
                coords,
            },
            (start..start + pts.len()).map(PointId).collect(),
        ))
    }
}
