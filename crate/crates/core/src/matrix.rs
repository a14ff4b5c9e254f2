//! Dense matrices over a prime field.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf_poly::PrimeField;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FbMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl FbMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Ones on the anti-diagonal.
    pub fn anti_identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + (n - 1 - i)] = 1;
        }
        m
    }

    pub fn from_rows(field: PrimeField, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::Shape("ragged rows".into()));
            }
            for &x in row {
                data.push(field.check_digit(x)?);
            }
        }
        Ok(Self { field, rows: rows.len(), cols, data })
    }

    /// Row-major entries, each checked against the field.
    pub fn from_vec(field: PrimeField, rows: usize, cols: usize, data: Vec<u8>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        for &x in &data {
            field.check_digit(x as u32)?;
        }
        Ok(Self { field, rows, cols, data })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        debug_assert!((v as u32) < self.field.order());
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u8> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::BaseMismatch {
                left: self.field.order(),
                right: other.field.order(),
            });
        }
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                let src = other.row(l);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &s) in dst.iter_mut().zip(src) {
                    *d = f.add(*d, f.mul(a, s));
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product over F_b.
    pub fn mul_vec(&self, v: &[u8]) -> Vec<u8> {
        assert_eq!(v.len(), self.cols, "vector length");
        let f = self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0u8, |acc, (&a, &x)| f.add(acc, f.mul(a, x)))
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    /// The leading `rows`×`cols` block.
    pub fn top_left(&self, rows: usize, cols: usize) -> Self {
        assert!(rows <= self.rows && cols <= self.cols);
        let mut out = Self::zeros(self.field, rows, cols);
        for i in 0..rows {
            out.data[i * cols..(i + 1) * cols].copy_from_slice(&self.row(i)[..cols]);
        }
        out
    }

    /// Extends with zero rows (or truncates) to exactly `rows` rows.
    pub fn with_rows(&self, rows: usize) -> Self {
        let mut data = self.data.clone();
        data.resize(rows * self.cols, 0);
        Self { field: self.field, rows, cols: self.cols, data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn rank(&self) -> usize {
        let mut basis = EchelonBasis::new(self.field, self.cols);
        (0..self.rows).filter(|&i| basis.insert(self.row(i))).count()
    }

    pub fn is_nonsingular(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }
}

impl fmt::Debug for FbMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FbMatrix[F_{}; {}x{}]", self.field.order(), self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(u8::to_string).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Incrementally built row-echelon basis, used for rank tests that share prefixes.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    field: PrimeField,
    width: usize,
    /// (pivot column, row normalized to a leading 1)
    rows: Vec<(usize, Vec<u8>)>,
}

impl EchelonBasis {
    pub fn new(field: PrimeField, width: usize) -> Self {
        Self { field, width, rows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Adds `v` to the span. Returns false when `v` was already in it.
    pub fn insert(&mut self, v: &[u8]) -> bool {
        debug_assert_eq!(v.len(), self.width);
        let f = self.field;
        let mut v = v.to_vec();
        for (pivot, row) in &self.rows {
            let c = v[*pivot];
            if c != 0 {
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
        match v.iter().position(|&x| x != 0) {
            None => false,
            Some(p) => {
                let inv = f.inv(v[p]);
                for x in &mut v {
                    *x = f.mul(*x, inv);
                }
                // keep the basis fully reduced on existing pivots
                for (_, row) in &mut self.rows {
                    let c = row[p];
                    if c != 0 {
                        for (x, &r) in row.iter_mut().zip(&v) {
                            *x = f.sub(*x, f.mul(c, r));
                        }
                    }
                }
                self.rows.push((p, v));
                true
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_products() {
        let f = PrimeField::new(3).unwrap();
        let a = FbMatrix::from_rows(f, &[vec![1, 2], vec![2, 1]]).unwrap();
        // second row = 2 * first row over F_3
        assert_eq!(a.rank(), 1);
        let i2 = FbMatrix::identity(f, 2);
        assert_eq!(a.mul(&i2).unwrap(), a);
        assert_eq!(a.transpose().transpose(), a);
        let j = FbMatrix::anti_identity(f, 2);
        assert!(j.is_nonsingular());
        assert_eq!(j.mul(&j).unwrap(), i2);
        assert!(a.mul(&FbMatrix::zeros(f, 3, 1)).is_err());
        assert_eq!(a.mul_vec(&[1, 1]), vec![0, 0]);
    }

    #[test]
    fn row_padding() {
        let f = PrimeField::binary();
        let i = FbMatrix::identity(f, 2);
        let p = i.with_rows(4);
        assert_eq!(p.rows(), 4);
        assert_eq!(p.row(3), &[0, 0]);
        assert_eq!(p.top_left(2, 2), i);
    }
}
