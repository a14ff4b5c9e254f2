use std::path::Path;
use std::sync::OnceLock;

use super::GenMatrixSet;
use crate::error::{Error, Result};
use crate::gf_poly::PrimeField;
use crate::matrix::FbMatrix;

const BUNDLED: &str = include_str!("../../data/new-joe-kuo-6.64");

/// Bits available in a direction integer.
pub const MAX_BITS: usize = 52;

/// One line `d s a m_1 … m_s` of a Joe–Kuo table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SobolDimension {
    pub d: usize,
    /// degree of the primitive polynomial
    pub degree: u32,
    /// interior coefficients a₁…a_{s−1}, a₁ in the most significant bit
    pub coeffs: u64,
    pub initial: Vec<u64>,
}

/// Direction numbers for dimensions 2, 3, …; dimension 1 is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectionNumbers {
    source: String,
    dims: Vec<SobolDimension>,
}

impl DirectionNumbers {
    /// Joe–Kuo `new-joe-kuo-6` data, dimensions up to 64.
    pub fn bundled() -> &'static DirectionNumbers {
        static CELL: OnceLock<DirectionNumbers> = OnceLock::new();
        CELL.get_or_init(|| {
            Self::parse(BUNDLED, "new-joe-kuo-6.64 (bundled)").expect("bundled table parses")
        })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io { path: path.display().to_string(), msg: e.to_string() })?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let mut dims = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            if fields[0].parse::<u64>().is_err() {
                if dims.is_empty() {
                    continue; // header
                }
                return Err(Error::Parse { line: lineno, msg: format!("unexpected `{}`", fields[0]) });
            }
            let nums = fields
                .iter()
                .map(|f| f.parse::<u64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse { line: lineno, msg: e.to_string() })?;
            if nums.len() < 3 {
                return Err(Error::Parse { line: lineno, msg: "expected `d s a m_1 ... m_s`".into() });
            }
            let (d, degree, coeffs) = (nums[0] as usize, nums[1] as u32, nums[2]);
            let initial = nums[3..].to_vec();
            let expect_d = dims.len() + 2;
            if d != expect_d {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("dimension {d} where {expect_d} was expected"),
                });
            }
            if degree == 0 || initial.len() != degree as usize {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("degree {degree} with {} initial values", initial.len()),
                });
            }
            if coeffs >> (degree - 1) != 0 {
                return Err(Error::Parse { line: lineno, msg: format!("a = {coeffs} too wide") });
            }
            for (i, &mi) in initial.iter().enumerate() {
                if mi % 2 == 0 || mi >= 1 << (i + 1) {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("m_{} = {mi} must be odd and below 2^{}", i + 1, i + 1),
                    });
                }
            }
            dims.push(SobolDimension { d, degree, coeffs, initial });
        }
        Ok(Self { source: source.to_string(), dims })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn max_dim(&self) -> usize {
        self.dims.len() + 1
    }

    /// m₁, …, m_bits for 1-based dimension `dim`.
    pub fn direction_integers(&self, dim: usize, bits: usize) -> Result<Vec<u64>> {
        if dim == 0 || dim > self.max_dim() {
            return Err(Error::MissingDimension { requested: dim, available: self.max_dim() });
        }
        if dim == 1 {
            return Ok(vec![1; bits]);
        }
        let e = &self.dims[dim - 2];
        let s = e.degree as usize;
        let mut m: Vec<u64> = e.initial.iter().copied().take(bits).collect();
        for i in s..bits {
            // m_i = 2a₁m_{i−1} ⊕ 4a₂m_{i−2} ⊕ ⋯ ⊕ 2^s m_{i−s} ⊕ m_{i−s}
            let mut v = m[i - s] ^ (m[i - s] << s);
            for k in 1..s {
                if (e.coeffs >> (s - 1 - k)) & 1 == 1 {
                    v ^= m[i - k] << k;
                }
            }
            m.push(v);
        }
        Ok(m)
    }
}

/// Sobol' generating matrices, m×m, from the given direction numbers.
pub fn sobol_matrices(s: usize, m: usize, dirs: &DirectionNumbers) -> Result<GenMatrixSet> {
    if m > MAX_BITS {
        return Err(Error::InvalidArgument(format!("m = {m} exceeds {MAX_BITS} bits")));
    }
    if s == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    if s > dirs.max_dim() {
        return Err(Error::MissingDimension { requested: s, available: dirs.max_dim() });
    }
    let f = PrimeField::binary();
    let mats = (1..=s)
        .map(|dim| {
            let v = dirs.direction_integers(dim, m)?;
            let mut c = FbMatrix::zeros(f, m, m);
            // column i holds the binary digits of m_{i+1} / 2^{i+1}
            for (i, &mi) in v.iter().enumerate() {
                for r in 0..=i {
                    c.set(r, i, ((mi >> (i - r)) & 1) as u8);
                }
            }
            Ok(c)
        })
        .collect::<Result<Vec<_>>>()?;
    GenMatrixSet::new(mats)
}
