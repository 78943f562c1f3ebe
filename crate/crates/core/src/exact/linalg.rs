//! Dense matrices over ℚ(ζ_N) with exact Gaussian elimination.

use std::fmt;

use crate::error::{Error, Result};
use crate::exact::Cyclotomic;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    conductor: u32,
    rows: usize,
    cols: usize,
    data: Vec<Vec<Cyclotomic>>,
}

impl Matrix {
    pub fn zero(conductor: u32, rows: usize, cols: usize) -> Self {
        Matrix {
            conductor,
            rows,
            cols,
            data: vec![vec![Cyclotomic::zero(conductor); cols]; rows],
        }
    }

    pub fn identity(conductor: u32, n: usize) -> Self {
        let mut m = Self::zero(conductor, n, n);
        for i in 0..n {
            m.data[i][i] = Cyclotomic::one(conductor);
        }
        m
    }

    /// Builds from row vectors; all rows must have length `cols`.
    pub fn from_rows(data: Vec<Vec<Cyclotomic>>, cols: usize) -> Self {
        let conductor = data
            .iter()
            .flat_map(|r| r.first())
            .next()
            .map(|c| c.conductor())
            .unwrap_or(1);
        assert!(data.iter().all(|r| r.len() == cols), "ragged matrix");
        Matrix {
            conductor,
            rows: data.len(),
            cols,
            data,
        }
    }

    pub fn with_conductor(data: Vec<Vec<Cyclotomic>>, cols: usize, conductor: u32) -> Self {
        assert!(data.iter().all(|r| r.len() == cols), "ragged matrix");
        Matrix {
            conductor,
            rows: data.len(),
            cols,
            data,
        }
    }

    pub fn diagonal(entries: &[Cyclotomic]) -> Self {
        let n = entries.len();
        let cond = entries.first().map(|c| c.conductor()).unwrap_or(1);
        let mut m = Self::zero(cond, n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i][i] = e.clone();
        }
        m
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Cyclotomic {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Cyclotomic) {
        self.data[i][j] = v;
    }

    pub fn row(&self, i: usize) -> &[Cyclotomic] {
        &self.data[i]
    }

    pub fn rows(&self) -> &[Vec<Cyclotomic>] {
        &self.data
    }

    pub fn into_rows(self) -> Vec<Vec<Cyclotomic>> {
        self.data
    }

    pub fn column(&self, j: usize) -> Vec<Cyclotomic> {
        self.data.iter().map(|r| r[j].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(Cyclotomic::is_zero))
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Self::zero(self.conductor, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j][i] = self.data[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "matrix shape mismatch");
        let mut out = Self::zero(self.conductor, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o.data[k][j];
                    if !b.is_zero() {
                        out.data[i][j] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Cyclotomic]) -> Vec<Cyclotomic> {
        assert_eq!(self.cols, v.len());
        self.data
            .iter()
            .map(|r| {
                let mut acc = Cyclotomic::zero(self.conductor);
                for (a, b) in r.iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[i][j] += &o.data[i][j];
            }
        }
        out
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[i][j] -= &o.data[i][j];
            }
        }
        out
    }

    pub fn scale(&self, s: &Cyclotomic) -> Matrix {
        let mut out = self.clone();
        for r in out.data.iter_mut() {
            for v in r.iter_mut() {
                *v = &*v * s;
            }
        }
        out
    }

    pub fn trace(&self) -> Cyclotomic {
        let mut acc = Cyclotomic::zero(self.conductor);
        for i in 0..self.rows.min(self.cols) {
            acc += &self.data[i][i];
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Matrix {
        let mut acc = Self::identity(self.conductor, self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.data[i][c].is_zero()) else {
                continue;
            };
            self.data.swap(r, p);
            let inv = self.data[r][c].inv().expect("nonzero pivot");
            if !inv.is_one() {
                for v in self.data[r][c..].iter_mut() {
                    if !v.is_zero() {
                        *v = &*v * &inv;
                    }
                }
            }
            let pivot_row = self.data[r].clone();
            let nz: Vec<usize> = (c..self.cols)
                .filter(|&j| !pivot_row[j].is_zero())
                .collect();
            for i in 0..self.rows {
                if i == r || self.data[i][c].is_zero() {
                    continue;
                }
                let f = self.data[i][c].clone();
                for &j in &nz {
                    let d = &pivot_row[j] * &f;
                    self.data[i][j] -= &d;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let p = m.rref_in_place();
        (m, p)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : M v = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Cyclotomic>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Cyclotomic::zero(self.conductor); self.cols];
                v[f] = Cyclotomic::one(self.conductor);
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -&r.data[row][f];
                }
                v
            })
            .collect()
    }

    /// One solution of `M x = b`, or an error if the system is inconsistent.
    pub fn solve(&self, b: &[Cyclotomic]) -> Result<Vec<Cyclotomic>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zero(self.conductor, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.data[i][j] = self.data[i][j].clone();
            }
            aug.data[i][self.cols] = b[i].clone();
        }
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.cols) {
            return Err(Error::Inconsistent("no solution to linear system".into()));
        }
        let mut x = vec![Cyclotomic::zero(self.conductor); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.data[row][self.cols].clone();
        }
        Ok(x)
    }

    pub fn det(&self) -> Cyclotomic {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let mut m = self.data.clone();
        let n = self.rows;
        let mut det = Cyclotomic::one(self.conductor);
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
                return Cyclotomic::zero(self.conductor);
            };
            if p != c {
                m.swap(p, c);
                det = -det;
            }
            det = &det * &m[c][c];
            let inv = m[c][c].inv().unwrap();
            for i in c + 1..n {
                if m[i][c].is_zero() {
                    continue;
                }
                let f = &m[i][c] * &inv;
                for j in c..n {
                    let d = &m[c][j] * &f;
                    m[i][j] -= &d;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Self::zero(self.conductor, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.data[i][j] = self.data[i][j].clone();
            }
            aug.data[i][n + i] = Cyclotomic::one(self.conductor);
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::DivisionByZero);
        }
        let mut inv = Self::zero(self.conductor, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.data[i][j] = aug.data[i][n + j].clone();
            }
        }
        Ok(inv)
    }

    /// True iff some power of the (square) matrix vanishes.
    pub fn is_nilpotent(&self) -> bool {
        let mut m = self.clone();
        let mut p = 1usize;
        while p < self.rows {
            m = m.mul(&m);
            p *= 2;
            if m.is_zero() {
                return true;
            }
        }
        m.is_zero()
    }
}

/// Rank of a list of row vectors.
pub fn rank_of(rows: &[Vec<Cyclotomic>], cols: usize, conductor: u32) -> usize {
    Matrix::with_conductor(rows.to_vec(), cols, conductor).rank()
}

/// Incrementally maintained row-reduced basis of a subspace; useful for
/// spanning-set computations where vectors arrive one at a time.
#[derive(Clone, Debug)]
pub struct SpanBasis {
    conductor: u32,
    dim: usize,
    /// (pivot column, row with 1 at the pivot, zeros at other pivots)
    rows: Vec<(usize, Vec<Cyclotomic>)>,
}

impl SpanBasis {
    pub fn new(conductor: u32, dim: usize) -> Self {
        SpanBasis {
            conductor,
            dim,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Reduces `v` against the current basis.
    pub fn reduce(&self, v: &[Cyclotomic]) -> Vec<Cyclotomic> {
        let mut v = v.to_vec();
        for (p, r) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (j, x) in r.iter().enumerate() {
                if !x.is_zero() {
                    let d = x * &f;
                    v[j] -= &d;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Cyclotomic]) -> bool {
        self.reduce(v).iter().all(Cyclotomic::is_zero)
    }

    /// Adds `v`; returns true if the span grew.
    pub fn insert(&mut self, v: &[Cyclotomic]) -> bool {
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].inv().unwrap();
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        for (_, r) in self.rows.iter_mut() {
            if r[p].is_zero() {
                continue;
            }
            let f = r[p].clone();
            for (j, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    let d = x * &f;
                    r[j] -= &d;
                }
            }
        }
        self.rows.push((p, v));
        true
    }

    pub fn basis(&self) -> Vec<Vec<Cyclotomic>> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }

    /// Pivot column of each basis row; reduced vectors vanish there.
    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(p, _)| *p).collect()
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for r in &self.data {
            let s: Vec<String> = r.iter().map(|c| c.to_string()).collect();
            writeln!(f, "  [{}]", s.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        let cols = rows[0].len();
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Cyclotomic::from_int(1, v)).collect())
                .collect(),
            cols,
        )
    }

    #[test]
    fn rank_nullspace_det() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(a.mul_vec(&ns[0]).iter().all(Cyclotomic::is_zero));
        assert!(a.det().is_zero());
        let b = m(&[&[2, 1], &[1, 1]]);
        assert!(b.det().is_one());
        assert_eq!(b.mul(&b.inverse().unwrap()), Matrix::identity(1, 2));
    }

    #[test]
    fn solve_and_inconsistency() {
        let a = m(&[&[1, 1], &[1, -1]]);
        let x = a
            .solve(&[Cyclotomic::from_int(1, 3), Cyclotomic::from_int(1, 1)])
            .unwrap();
        assert_eq!(
            x,
            vec![Cyclotomic::from_int(1, 2), Cyclotomic::from_int(1, 1)]
        );
        let s = m(&[&[1, 1], &[2, 2]]);
        assert!(s
            .solve(&[Cyclotomic::from_int(1, 1), Cyclotomic::from_int(1, 1)])
            .is_err());
    }

    #[test]
    fn nilpotency() {
        assert!(m(&[&[0, 1, 5], &[0, 0, 2], &[0, 0, 0]]).is_nilpotent());
        assert!(!m(&[&[0, 1], &[1, 0]]).is_nilpotent());
    }

    #[test]
    fn span_basis_tracks_rank() {
        let mut s = SpanBasis::new(1, 3);
        let v = |a: i64, b: i64, c: i64| {
            vec![
                Cyclotomic::from_int(1, a),
                Cyclotomic::from_int(1, b),
                Cyclotomic::from_int(1, c),
            ]
        };
        assert!(s.insert(&v(1, 2, 3)));
        assert!(s.insert(&v(0, 1, 1)));
        assert!(!s.insert(&v(1, 3, 4)));
        assert!(s.contains(&v(2, 5, 7)));
        assert_eq!(s.rank(), 2);
    }
}
