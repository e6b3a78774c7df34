//! Exact dense linear algebra over the rationals.
//!
//! Everything downstream (intertwiner solves, radical computations, homology
//! ranks) reduces to the operations in this module. All arithmetic uses
//! arbitrary-precision rationals; there is no floating point anywhere in the
//! crate. Echelon forms use the first nonzero entry as pivot, so every result
//! is canonical and reproducible across runs and platforms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

/// Exact scalar type used throughout the crate.
pub type Rat = BigRational;

/// Rational from an integer.
pub fn rat_i(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// Rational `n/d`.
pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Dense matrix of rationals, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RatMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Convenience constructor from integer entries in row-major order.
    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        RatMatrix { rows, cols, data: entries.iter().map(|&n| rat_i(n)).collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        RatMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Rat {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Rat {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rat::is_zero)
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Row-major flattening as a single column vector.
    pub fn vectorize(&self) -> RatMatrix {
        RatMatrix { rows: self.rows * self.cols, cols: 1, data: self.data.clone() }
    }

    pub fn reshape(&self, rows: usize, cols: usize) -> RatMatrix {
        assert_eq!(rows * cols, self.rows * self.cols);
        RatMatrix { rows, cols, data: self.data.clone() }
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut m = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *m.at_mut(c, r) = self.at(r, c).clone();
            }
        }
        m
    }

    pub fn add(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        RatMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in sub");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        RatMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> RatMatrix {
        RatMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, s: &Rat) -> RatMatrix {
        RatMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn matmul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in matmul");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.at(k, c);
                    if !b.is_zero() {
                        let v = out.at_mut(r, c);
                        *v += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Rat {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|i| self.at(i, i).clone()).sum()
    }

    /// Stack horizontally: `[self | other]`.
    pub fn hstack(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.rows, other.rows, "row mismatch in hstack");
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *m.at_mut(r, c) = self.at(r, c).clone();
            }
            for c in 0..other.cols {
                *m.at_mut(r, self.cols + c) = other.at(r, c).clone();
            }
        }
        m
    }

    /// Stack vertically: `[self; other]`.
    pub fn vstack(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.cols, "col mismatch in vstack");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        RatMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Block-diagonal sum of `blocks` (empty blocks contribute nothing).
    pub fn block_diag(blocks: &[&RatMatrix]) -> RatMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    *m.at_mut(r0 + r, c0 + c) = b.at(r, c).clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn submatrix(&self, row0: usize, col0: usize, rows: usize, cols: usize) -> RatMatrix {
        Self::from_fn(rows, cols, |r, c| self.at(row0 + r, col0 + c).clone())
    }

    /// Copy `block` into `self` with top-left corner at `(row0, col0)`.
    pub fn paste(&mut self, row0: usize, col0: usize, block: &RatMatrix) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                *self.at_mut(row0 + r, col0 + c) = block.at(r, c).clone();
            }
        }
    }

    /// Reduced row echelon form together with the pivot column indices.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row >= m.rows {
                break;
            }
            // first nonzero entry from `row` downward keeps the form canonical
            let Some(p) = (row..m.rows).find(|&r| !m.at(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.at(row, col).clone();
            for c in col..m.cols {
                let v = m.at(row, c).clone() / &inv;
                *m.at_mut(row, c) = v;
            }
            for r in 0..m.rows {
                if r == row || m.at(r, col).is_zero() {
                    continue;
                }
                let f = m.at(r, col).clone();
                for c in col..m.cols {
                    let v = m.at(r, c).clone() - &f * m.at(row, c);
                    *m.at_mut(r, c) = v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        self.rref().1.len()
    }

    /// Canonical basis of the right kernel, one column per free variable
    /// (free columns in ascending order, free entry set to 1).
    pub fn kernel_basis(&self) -> RatMatrix {
        if self.cols == 0 {
            return RatMatrix::zeros(0, 0);
        }
        if self.rows == 0 {
            return RatMatrix::identity(self.cols);
        }
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut ker = RatMatrix::zeros(self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            *ker.at_mut(fc, k) = Rat::one();
            for (row, &pc) in pivots.iter().enumerate() {
                *ker.at_mut(pc, k) = -r.at(row, fc).clone();
            }
        }
        ker
    }

    /// Exact solution of `self * x = b` (multiple right-hand sides allowed),
    /// or `None` when inconsistent. Free variables are set to zero in echelon
    /// order, so the answer is deterministic.
    pub fn solve(&self, b: &RatMatrix) -> Option<RatMatrix> {
        assert_eq!(self.rows, b.rows, "rhs row mismatch in solve");
        let aug = self.hstack(b);
        let (r, pivots) = aug.rref();
        // a pivot inside the augmented part means the system is inconsistent
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = RatMatrix::zeros(self.cols, b.cols);
        for (row, &pc) in pivots.iter().enumerate() {
            for c in 0..b.cols {
                *x.at_mut(pc, c) = r.at(row, self.cols + c).clone();
            }
        }
        Some(x)
    }

    /// Exact inverse of a square matrix, or `None` when singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        if self.rank() < self.rows {
            return None;
        }
        self.solve(&RatMatrix::identity(self.rows))
    }

    /// Kronecker product, `(a ⊗ b)(x ⊗ y) = (a x) ⊗ (b y)`.
    pub fn kron(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
        let mut m = Self::zeros(a.rows * b.rows, a.cols * b.cols);
        for ra in 0..a.rows {
            for ca in 0..a.cols {
                let s = a.at(ra, ca);
                if s.is_zero() {
                    continue;
                }
                for rb in 0..b.rows {
                    for cb in 0..b.cols {
                        *m.at_mut(ra * b.rows + rb, ca * b.cols + cb) = s * b.at(rb, cb);
                    }
                }
            }
        }
        m
    }

    /// Canonical form of the row space: nonzero rows of the RREF.
    pub fn row_space_echelon(&self) -> RatMatrix {
        let (r, pivots) = self.rref();
        r.submatrix(0, 0, pivots.len(), self.cols)
    }

    /// Reduce `v` (a single row) against echelon rows; the result is zero
    /// exactly when `v` lies in the row span.
    pub fn reduce_row_against(echelon: &RatMatrix, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(echelon.cols, v.len());
        let mut out: Vec<Rat> = v.to_vec();
        for r in 0..echelon.rows {
            let Some(lead) = (0..echelon.cols).find(|&c| !echelon.at(r, c).is_zero()) else {
                continue;
            };
            if !out[lead].is_zero() {
                let f = out[lead].clone() / echelon.at(r, lead);
                for c in lead..echelon.cols {
                    let delta = &f * echelon.at(r, c);
                    out[c] = &out[c] - &delta;
                }
            }
        }
        out
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|r| {
                let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
                format!("[{}]", row.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// Format a rational without a denominator when it is an integer.
pub fn format_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parse what `format_rat` prints.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(BigRational::from_integer(n))
    }
}
