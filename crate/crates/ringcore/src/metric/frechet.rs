use crate::error::{Error, Result};

/// Store of polygonal curves; distances are discrete Fréchet, computed by the
/// standard O(m1*m2) dynamic program.
#[derive(Debug, Clone)]
pub struct CurveSpace {
    dim: usize,
    // curve i's vertices live at flat[offsets[i]*dim .. offsets[i+1]*dim]
    offsets: Vec<usize>,
    flat: Vec<f64>,
}

impl CurveSpace {
    pub fn from_curves(dim: usize, curves: &[Vec<Vec<f64>>]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("curve dimension must be positive".into()));
        }
        let mut offsets = Vec::with_capacity(curves.len() + 1);
        let mut flat = Vec::new();
        offsets.push(0);
        for (i, c) in curves.iter().enumerate() {
            if c.is_empty() {
                return Err(Error::Parse {
                    line: i + 1,
                    col: 0,
                    msg: "empty polyline".into(),
                });
            }
            for v in c {
                if v.len() != dim {
                    return Err(Error::Parse {
                        line: i + 1,
                        col: v.len(),
                        msg: format!("expected {dim}-vector, got length {}", v.len()),
                    });
                }
                flat.extend_from_slice(v);
            }
            offsets.push(flat.len() / dim);
        }
        Ok(Self { dim, offsets, flat })
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn complexity(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn max_complexity(&self) -> usize {
        (0..self.len()).map(|i| self.complexity(i)).max().unwrap_or(0)
    }

    #[inline]
    fn vertex(&self, curve: usize, v: usize) -> &[f64] {
        let base = (self.offsets[curve] + v) * self.dim;
        &self.flat[base..base + self.dim]
    }

    pub fn dist(&self, a: usize, b: usize) -> f64 {
        if a == b {
            return 0.0;
        }
        let (m1, m2) = (self.complexity(a), self.complexity(b));
        // row[j] = coupling cost up to (i, j); single rolling row.
        let mut row = vec![0.0f64; m2];
        for i in 0..m1 {
            let mut prev_diag = row[0];
            for j in 0..m2 {
                let d = euclid(self.vertex(a, i), self.vertex(b, j));
                let best = match (i, j) {
                    (0, 0) => d,
                    (0, _) => row[j - 1].max(d),
                    (_, 0) => row[0].max(d),
                    (_, _) => prev_diag.min(row[j]).min(row[j - 1]).max(d),
                };
                prev_diag = row[j];
                row[j] = best;
            }
        }
        row[m2 - 1]
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_segments() {
        // Two horizontal segments one unit apart: distance 1.
        let a = vec![vec![0.0, 0.0], vec![4.0, 0.0]];
        let b = vec![vec![0.0, 1.0], vec![4.0, 1.0]];
        let s = CurveSpace::from_curves(2, &[a, b]).unwrap();
        assert!((s.dist(0, 1) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn backtracking_curve_forces_larger_distance() {
        // b revisits the origin mid-curve; the coupling cannot avoid the
        // far pairing.
        let a = vec![vec![0.0, 0.0], vec![2.0, 0.0]];
        let b = vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![0.0, 0.0], vec![2.0, 0.0]];
        let s = CurveSpace::from_curves(2, &[a, b]).unwrap();
        assert!((s.dist(0, 1) - 2.0).abs() < 1e-12);
    }
}
