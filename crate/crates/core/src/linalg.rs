//! Exact linear algebra over a prime field `GF(q)`.
//!
//! Entries are stored as `u8` residues; every routine reduces modulo `q`
//! after each operation so no intermediate value leaves `[0, q)`.

use std::fmt;

use crate::error::{Error, Result};

/// Arithmetic in the prime field `GF(q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    q: u8,
}

impl PrimeField {
    pub fn new(q: u32) -> Result<Self> {
        if !(2..256).contains(&q) || !(2..q).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d)) {
            return Err(Error::NonPrimeCharacteristic(q));
        }
        Ok(Self { q: q as u8 })
    }

    #[inline]
    pub fn order(&self) -> u8 {
        self.q
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        ((a as u16 + b as u16) % self.q as u16) as u8
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        ((a as u16 + self.q as u16 - b as u16) % self.q as u16) as u8
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.sub(0, a)
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        ((a as u16 * b as u16) % self.q as u16) as u8
    }

    pub fn inv(&self, a: u8) -> Result<u8> {
        if a.is_multiple_of(self.q) {
            return Err(Error::ZeroInverse);
        }
        // a^(q-2)
        let mut result = 1u8;
        for _ in 0..self.q - 2 {
            result = self.mul(result, a);
        }
        Ok(result)
    }
}

/// Dense row-major matrix over `GF(q)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BMatrix {
    q: u8,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl fmt::Debug for BMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BMatrix over GF({}) {}x{}:", self.q, self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Result of reducing a matrix to reduced row-echelon form.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub matrix: BMatrix,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl BMatrix {
    pub fn zeros(q: u8, rows: usize, cols: usize) -> Self {
        Self { q, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(q: u8, n: usize) -> Self {
        let mut m = Self::zeros(q, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(q: u8, cols: usize, rows: &[Vec<u8>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::Dimension(format!(
                    "row of length {} in a matrix with {} columns",
                    row.len(),
                    cols
                )));
            }
            for &x in row {
                if x >= q {
                    return Err(Error::DigitOutOfRange { digit: x as u32, q });
                }
                data.push(x);
            }
        }
        Ok(Self { q, rows: rows.len(), cols, data })
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        self.data[r * self.cols + c] = v % self.q;
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<u8> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    /// Columns `range` of every row, as a new matrix.
    pub fn column_block(&self, start: usize, width: usize) -> BMatrix {
        let mut out = BMatrix::zeros(self.q, self.rows, width);
        for r in 0..self.rows {
            for c in 0..width {
                out.set(r, c, self.get(r, start + c));
            }
        }
        out
    }

    pub fn transpose(&self) -> BMatrix {
        let mut out = BMatrix::zeros(self.q, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    /// Indices of columns containing at least one nonzero entry.
    pub fn nonzero_columns(&self) -> Vec<usize> {
        (0..self.cols)
            .filter(|&c| (0..self.rows).any(|r| self.get(r, c) != 0))
            .collect()
    }

    /// Number of nonzero columns, `nz(M)`.
    pub fn nz(&self) -> usize {
        self.nonzero_columns().len()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn rref(&self) -> Echelon {
        let f = PrimeField { q: self.q };
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let Some(p) = (lead..m.rows).find(|&r| m.get(r, c) != 0) else {
                continue;
            };
            m.swap_rows(lead, p);
            let inv = f.inv(m.get(lead, c)).expect("pivot is nonzero");
            for cc in c..m.cols {
                let v = f.mul(m.get(lead, cc), inv);
                m.set(lead, cc, v);
            }
            for r in 0..m.rows {
                let factor = m.get(r, c);
                if r == lead || factor == 0 {
                    continue;
                }
                for cc in c..m.cols {
                    let v = f.sub(m.get(r, cc), f.mul(factor, m.get(lead, cc)));
                    m.set(r, cc, v);
                }
            }
            pivots.push(c);
            lead += 1;
        }
        Echelon { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    /// Basis (as rows) of the right null space `{x : M x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<u8>> {
        let f = PrimeField { q: self.q };
        let ech = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !ech.pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0u8; self.cols];
                v[fc] = 1;
                for (r, &pc) in ech.pivots.iter().enumerate() {
                    v[pc] = f.neg(ech.matrix.get(r, fc));
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Result<BMatrix> {
        if self.rows != self.cols {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = BMatrix::zeros(self.q, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, 1);
        }
        let ech = aug.rref();
        if ech.pivots.len() < n || ech.pivots[n - 1] >= n {
            return Err(Error::DependentRows);
        }
        Ok(ech.matrix.column_block(n, n))
    }

    pub fn mul(&self, other: &BMatrix) -> Result<BMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = PrimeField { q: self.q };
        let mut out = BMatrix::zeros(self.q, self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = 0u8;
                for t in 0..self.cols {
                    acc = f.add(acc, f.mul(self.get(r, t), other.get(t, c)));
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    /// Row vector times matrix: `u M`.
    pub fn left_mul_vec(&self, u: &[u8]) -> Vec<u8> {
        assert_eq!(u.len(), self.rows);
        let f = PrimeField { q: self.q };
        let mut out = vec![0u8; self.cols];
        for (r, &ur) in u.iter().enumerate() {
            if ur == 0 {
                continue;
            }
            for (c, o) in out.iter_mut().enumerate() {
                *o = f.add(*o, f.mul(ur, self.get(r, c)));
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}
