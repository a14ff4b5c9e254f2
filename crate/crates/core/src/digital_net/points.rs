use crate::error::{invalid, Error, Result};
use crate::gf_poly::PrimeField;

/// Largest f64 strictly below one. Coordinates are clamped to it so that
/// rounding never pushes a point onto the closed boundary.
const BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;

#[derive(Debug, Clone, PartialEq)]
enum Digits {
    /// b = 2: digit y_i sits at bit (w - i) of the word, so word / 2^w = ψ(y).
    Packed(Vec<u64>),
    /// General base: `w` bytes per coordinate, most significant digit first.
    Bytes(Vec<u8>),
}

/// b^m points in [0,1)^s stored as base-b digit expansions of precision w.
///
/// Equality compares digits, so two point sets are equal exactly when they
/// agree bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    field: PrimeField,
    precision: usize,
    dim: usize,
    len: usize,
    digits: Digits,
}

impl PointSet {
    pub(crate) fn packed(field: PrimeField, precision: usize, dim: usize, words: Vec<u64>) -> Self {
        debug_assert!(field.order() == 2 && precision <= 64);
        let len = words.len() / dim.max(1);
        Self { field, precision, dim, len, digits: Digits::Packed(words) }
    }

    /// Builds a point set from per-coordinate digit vectors laid out as
    /// `[(k * dim + j) * precision + i]`.
    pub fn from_digits(
        field: PrimeField,
        precision: usize,
        dim: usize,
        digits: Vec<u8>,
    ) -> Result<Self> {
        if dim == 0 || precision == 0 || digits.len() % (dim * precision) != 0 {
            return Err(Error::Shape(format!(
                "{} digits do not tile {dim} coordinates of precision {precision}",
                digits.len()
            )));
        }
        for &d in &digits {
            field.check_digit(d as u32)?;
        }
        let len = digits.len() / (dim * precision);
        if field.order() == 2 && precision <= 64 {
            let words = digits
                .chunks_exact(precision)
                .map(|c| c.iter().fold(0u64, |acc, &d| (acc << 1) | d as u64))
                .collect();
            return Ok(Self { field, precision, dim, len, digits: Digits::Packed(words) });
        }
        Ok(Self { field, precision, dim, len, digits: Digits::Bytes(digits) })
    }

    /// Truncates each coordinate to `precision` base-b digits.
    pub fn from_coords(field: PrimeField, precision: usize, points: &[Vec<f64>]) -> Result<Self> {
        let dim = points.first().map_or(0, Vec::len);
        let b = field.order() as f64;
        let mut digits = Vec::with_capacity(points.len() * dim * precision);
        for p in points {
            if p.len() != dim {
                return Err(Error::Shape("points of differing dimension".into()));
            }
            for &x in p {
                if !(0.0..1.0).contains(&x) {
                    return Err(invalid(format!("coordinate {x} outside [0,1)")));
                }
                let mut frac = x;
                for _ in 0..precision {
                    frac *= b;
                    let d = frac.floor();
                    digits.push(d as u8);
                    frac -= d;
                }
            }
        }
        Self::from_digits(field, precision, dim, digits)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Digit y_{i+1} of coordinate j of point k.
    #[inline]
    pub fn digit(&self, k: usize, j: usize, i: usize) -> u8 {
        debug_assert!(i < self.precision);
        match &self.digits {
            Digits::Packed(w) => ((w[k * self.dim + j] >> (self.precision - 1 - i)) & 1) as u8,
            Digits::Bytes(d) => d[(k * self.dim + j) * self.precision + i],
        }
    }

    pub fn digits(&self, k: usize, j: usize) -> Vec<u8> {
        (0..self.precision).map(|i| self.digit(k, j, i)).collect()
    }

    /// The leading `count` digits of a coordinate read as a base-b integer.
    pub fn leading_digits(&self, k: usize, j: usize, count: usize) -> u64 {
        debug_assert!(count <= self.precision);
        match &self.digits {
            Digits::Packed(w) if count == 0 => {
                let _ = w;
                0
            }
            Digits::Packed(w) => w[k * self.dim + j] >> (self.precision - count),
            Digits::Bytes(_) => {
                let b = self.field.order() as u64;
                (0..count).fold(0, |acc, i| acc * b + self.digit(k, j, i) as u64)
            }
        }
    }

    #[inline]
    pub fn coord(&self, k: usize, j: usize) -> f64 {
        let x = match &self.digits {
            Digits::Packed(w) => w[k * self.dim + j] as f64 * (-(self.precision as f64)).exp2(),
            Digits::Bytes(d) => {
                let start = (k * self.dim + j) * self.precision;
                let b = self.field.order() as f64;
                d[start..start + self.precision]
                    .iter()
                    .rev()
                    .fold(0.0, |acc, &y| (acc + y as f64) / b)
            }
        };
        x.min(BELOW_ONE)
    }

    pub fn point_into(&self, k: usize, out: &mut [f64]) {
        for (j, o) in out.iter_mut().enumerate().take(self.dim) {
            *o = self.coord(k, j);
        }
    }

    pub fn point(&self, k: usize) -> Vec<f64> {
        (0..self.dim).map(|j| self.coord(k, j)).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        (0..self.len).map(move |k| self.point(k))
    }
}
