//! Random linear scrambling by non-singular lower-triangular matrices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::digital_net::GenMatrixSet;
use crate::error::{invalid, Error, Result};
use crate::gf_poly::PrimeField;
use crate::matrix::FbMatrix;

/// Default number of scrambled rows, matching double precision for b = 2.
pub const DEFAULT_PRECISION: usize = 52;

/// Identifies one independent random stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SeedSpec {
    pub master: u64,
    pub replicate: u64,
    pub dimension: u64,
}

impl SeedSpec {
    pub fn new(master: u64, replicate: u64, dimension: u64) -> Self {
        Self { master, replicate, dimension }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(derive_seed(&[self.master, self.replicate, self.dimension]))
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Hashes a tuple of stream coordinates into one 64-bit seed.
pub fn derive_seed(parts: &[u64]) -> u64 {
    parts.iter().fold(0x6a09_e667_f3bc_c908, |h, &p| splitmix(h ^ splitmix(p)))
}

/// A w×n lower-triangular matrix over F_b with nonzero diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct LowerTriScramble {
    matrix: FbMatrix,
}

impl LowerTriScramble {
    pub fn from_matrix(matrix: FbMatrix) -> Result<Self> {
        if matrix.rows() < matrix.cols() {
            return Err(Error::Shape(format!(
                "scramble of shape {}x{} has fewer rows than columns",
                matrix.rows(),
                matrix.cols()
            )));
        }
        for i in 0..matrix.cols() {
            if matrix.get(i, i) == 0 {
                return Err(invalid(format!("zero diagonal entry at {i}")));
            }
            if (i + 1..matrix.cols()).any(|j| matrix.get(i, j) != 0) {
                return Err(invalid(format!("nonzero entry above the diagonal in row {i}")));
            }
        }
        Ok(Self { matrix })
    }

    pub fn identity(field: PrimeField, w: usize, n: usize) -> Result<Self> {
        let mut m = FbMatrix::zeros(field, w, n);
        if w < n {
            return Err(Error::Shape(format!("w = {w} is below n = {n}")));
        }
        for i in 0..n {
            m.set(i, i, 1);
        }
        Ok(Self { matrix: m })
    }

    pub fn matrix(&self) -> &FbMatrix {
        &self.matrix
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }
}

/// Diagonal uniform on {1,…,b−1}, entries below it uniform on F_b.
pub fn sample_scramble(field: PrimeField, w: usize, n: usize, seed: SeedSpec) -> Result<LowerTriScramble> {
    sample_scramble_with(field, w, n, &mut seed.rng())
}

pub fn sample_scramble_with<R: Rng + ?Sized>(
    field: PrimeField,
    w: usize,
    n: usize,
    rng: &mut R,
) -> Result<LowerTriScramble> {
    if n == 0 || w < n {
        return Err(Error::Shape(format!("cannot sample a {w}x{n} scramble")));
    }
    let b = field.order() as u8;
    let mut m = FbMatrix::zeros(field, w, n);
    for i in 0..w {
        for j in 0..n.min(i + 1) {
            let v = if i == j { rng.gen_range(1..b) } else { rng.gen_range(0..b) };
            m.set(i, j, v);
        }
    }
    Ok(LowerTriScramble { matrix: m })
}

/// L·C over F_b.
pub fn apply_scramble(l: &LowerTriScramble, c: &FbMatrix) -> Result<FbMatrix> {
    l.matrix.mul(c)
}

/// (L₁C₁, …, L_sC_s) with independent w×n scrambles, n the row count of the base.
pub fn draw_scrambled_net(
    base: &GenMatrixSet,
    w: usize,
    master: u64,
    replicate: u64,
) -> Result<GenMatrixSet> {
    let mats = base
        .matrices()
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let l = sample_scramble(base.field(), w, c.rows(), SeedSpec::new(master, replicate, j as u64))?;
            apply_scramble(&l, c)
        })
        .collect::<Result<Vec<_>>>()?;
    GenMatrixSet::new(mats)
}

/// |L_{w,n}|, or None past u64.
pub fn scramble_count(field: PrimeField, w: usize, n: usize) -> Option<u64> {
    let b = field.order() as u64;
    let below: usize = (0..n).map(|j| w - 1 - j).sum();
    (b - 1).checked_pow(n as u32)?.checked_mul(b.checked_pow(below as u32)?)
}

/// Every matrix of L_{w,n}, in a fixed order. Refuses more than 2²⁰ of them.
pub fn enumerate_scrambles(field: PrimeField, w: usize, n: usize) -> Result<Vec<LowerTriScramble>> {
    if n == 0 || w < n {
        return Err(Error::Shape(format!("cannot enumerate {w}x{n} scrambles")));
    }
    let total = scramble_count(field, w, n)
        .filter(|&t| t <= 1 << 20)
        .ok_or_else(|| Error::TooLarge(format!("L_{{{w},{n}}} over F_{}", field.order())))?;
    let b = field.order() as u64;
    let slots: Vec<(usize, usize)> =
        (0..w).flat_map(|i| (0..n.min(i + 1)).map(move |j| (i, j))).collect();
    let mut out = Vec::with_capacity(total as usize);
    let mut digits = vec![0u64; slots.len()];
    loop {
        let mut m = FbMatrix::zeros(field, w, n);
        for (&(i, j), &d) in slots.iter().zip(&digits) {
            m.set(i, j, if i == j { (d + 1) as u8 } else { d as u8 });
        }
        out.push(LowerTriScramble { matrix: m });
        // odometer over diagonal digits in [0, b−1) and the rest in [0, b)
        let mut pos = 0;
        loop {
            if pos == slots.len() {
                return Ok(out);
            }
            let (i, j) = slots[pos];
            let radix = if i == j { b - 1 } else { b };
            digits[pos] += 1;
            if digits[pos] < radix {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}
