use rug::Float;

use crate::error::{Error, Result};

/// Dense-or-banded real symmetric matrix of high-precision scalars.
///
/// Only the upper band `i <= j <= i + bandwidth` is stored, packed row by row.
/// A dense matrix is the case `bandwidth == dim - 1`; entries outside the band
/// are structurally zero.
#[derive(Clone, Debug)]
pub struct SymmetricMatrix {
    dim: usize,
    bandwidth: usize,
    row_start: Vec<usize>,
    data: Vec<Float>,
    zero: Float,
}

impl SymmetricMatrix {
    pub fn zeros(dim: usize, bandwidth: usize, prec: u32) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidSpec("matrix dimension must be positive".into()));
        }
        let bandwidth = bandwidth.min(dim - 1);
        let mut row_start = Vec::with_capacity(dim + 1);
        let mut total = 0;
        for i in 0..dim {
            row_start.push(total);
            total += bandwidth.min(dim - 1 - i) + 1;
        }
        row_start.push(total);
        Ok(Self {
            dim,
            bandwidth,
            row_start,
            data: vec![Float::new(prec); total],
            zero: Float::new(prec),
        })
    }

    /// Builds a banded matrix from `f(i, j)` evaluated on the upper band.
    pub fn from_band_fn<F>(dim: usize, bandwidth: usize, prec: u32, mut f: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> Float,
    {
        let mut m = Self::zeros(dim, bandwidth, prec)?;
        for i in 0..dim {
            for j in i..=(i + m.bandwidth).min(dim - 1) {
                let v = f(i, j);
                if !v.is_finite() {
                    return Err(Error::InvalidSpec(format!("non-finite entry at ({i}, {j})")));
                }
                let k = m.row_start[i] + (j - i);
                m.data[k] = v;
            }
        }
        Ok(m)
    }

    pub fn from_fn<F>(dim: usize, prec: u32, f: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> Float,
    {
        Self::from_band_fn(dim, dim.saturating_sub(1), prec, f)
    }

    /// Reads a symmetric matrix from rows of `f64`, using the upper triangle.
    pub fn from_rows_f64(rows: &[Vec<f64>], prec: u32) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidSpec("matrix rows must be square".into()));
        }
        Self::from_fn(n, prec, |i, j| Float::with_val(prec, rows[i][j]))
    }

    pub fn identity(dim: usize, prec: u32) -> Result<Self> {
        Self::from_band_fn(dim, 0, prec, |_, _| Float::with_val(prec, 1))
    }

    pub fn diagonal(values: &[Float]) -> Result<Self> {
        let prec = values.iter().map(Float::prec).max().unwrap_or(64);
        Self::from_band_fn(values.len(), 0, prec, |i, _| Float::with_val(prec, &values[i]))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Declared storage bandwidth (an upper bound on the true one).
    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    pub fn prec(&self) -> u32 {
        self.zero.prec()
    }

    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        assert!(j < self.dim, "index ({i}, {j}) out of range for dim {}", self.dim);
        (j - i <= self.bandwidth).then(|| self.row_start[i] + (j - i))
    }

    pub fn get(&self, i: usize, j: usize) -> &Float {
        match self.slot(i, j) {
            Some(k) => &self.data[k],
            None => &self.zero,
        }
    }

    /// Sets entry `(i, j)` and its mirror. Panics outside the band.
    pub fn set(&mut self, i: usize, j: usize, value: Float) {
        let k = self
            .slot(i, j)
            .unwrap_or_else(|| panic!("({i}, {j}) outside bandwidth {}", self.bandwidth));
        self.data[k] = value;
    }

    /// Iterates the stored upper band as `(i, j, value)`.
    pub fn upper_entries(&self) -> impl Iterator<Item = (usize, usize, &Float)> + '_ {
        (0..self.dim).flat_map(move |i| {
            let start = self.row_start[i];
            let end = self.row_start[i + 1];
            self.data[start..end]
                .iter()
                .enumerate()
                .map(move |(off, v)| (i, i + off, v))
        })
    }

    /// Smallest bandwidth consistent with the nonzero pattern.
    pub fn effective_bandwidth(&self) -> usize {
        self.upper_entries()
            .filter(|(_, _, v)| !v.is_zero())
            .map(|(i, j, _)| j - i)
            .max()
            .unwrap_or(0)
    }

    pub fn trace(&self) -> Float {
        let mut t = Float::new(self.prec());
        for i in 0..self.dim {
            t += &self.data[self.row_start[i]];
        }
        t
    }

    pub fn diagonal_entries(&self) -> Vec<Float> {
        (0..self.dim)
            .map(|i| self.data[self.row_start[i]].clone())
            .collect()
    }

    /// `A x` at the matrix precision; zero entries are skipped.
    pub fn matvec(&self, x: &[Float]) -> Vec<Float> {
        assert_eq!(x.len(), self.dim);
        let prec = self.prec();
        let mut y = vec![Float::new(prec); self.dim];
        for i in 0..self.dim {
            let start = self.row_start[i];
            let row = &self.data[start..self.row_start[i + 1]];
            y[i] += &row[0] * &x[i];
            for (off, a) in row.iter().enumerate().skip(1) {
                if a.is_zero() {
                    continue;
                }
                let j = i + off;
                y[i] += a * &x[j];
                y[j] += a * &x[i];
            }
        }
        y
    }

    /// Full dense copy, row-major.
    pub fn to_dense(&self) -> Vec<Float> {
        let n = self.dim;
        let mut out = vec![Float::new(self.prec()); n * n];
        for (i, j, v) in self.upper_entries() {
            out[i * n + j] = v.clone();
            out[j * n + i] = v.clone();
        }
        out
    }

    pub fn to_f64_dense(&self) -> nalgebra::DMatrix<f64> {
        let n = self.dim;
        let mut out = nalgebra::DMatrix::zeros(n, n);
        for (i, j, v) in self.upper_entries() {
            let f = v.to_f64();
            out[(i, j)] = f;
            out[(j, i)] = f;
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .map(|v| v.to_f64().abs())
            .fold(0.0, f64::max)
    }

    /// Writes `i j value` lines (upper triangle, nonzero entries) in scientific
    /// notation with `digits` significant digits.
    pub fn write_dump<W: std::io::Write>(&self, mut out: W, digits: usize) -> std::io::Result<()> {
        for (i, j, v) in self.upper_entries() {
            if v.is_zero() {
                continue;
            }
            writeln!(out, "{i} {j} {}", super::format_scientific(v, digits))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn band_storage_and_symmetry() {
        let m = SymmetricMatrix::from_band_fn(5, 1, 64, |i, j| Float::with_val(64, 10 * i + j))
            .unwrap();
        assert_eq!(m.get(2, 3).to_f64(), 23.0);
        assert_eq!(m.get(3, 2).to_f64(), 23.0);
        assert!(m.get(0, 4).is_zero());
        assert_eq!(m.trace().to_f64(), 0.0 + 11.0 + 22.0 + 33.0 + 44.0);
        assert_eq!(m.effective_bandwidth(), 1);
        assert_eq!(m.upper_entries().count(), 9);
    }

    #[test]
    fn matvec_matches_dense() {
        let rows = vec![
            vec![2.0, 1.0, 0.5],
            vec![1.0, 3.0, -1.0],
            vec![0.5, -1.0, 4.0],
        ];
        let m = SymmetricMatrix::from_rows_f64(&rows, 80).unwrap();
        let x: Vec<Float> = [1.0, -2.0, 3.0].iter().map(|v| Float::with_val(80, *v)).collect();
        let y: Vec<f64> = m.matvec(&x).iter().map(Float::to_f64).collect();
        assert_eq!(y, vec![1.5, -8.0, 14.5]);
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(SymmetricMatrix::zeros(0, 0, 64).is_err());
    }

    #[test]
    fn dump_lists_nonzero_upper_entries() {
        let m = SymmetricMatrix::identity(3, 64).unwrap();
        let mut buf = Vec::new();
        m.write_dump(&mut buf, 5).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "0 0 1.0000e0\n1 1 1.0000e0\n2 2 1.0000e0\n");
    }
}
