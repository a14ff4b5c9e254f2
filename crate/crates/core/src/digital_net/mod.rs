//! Digital nets over F_b: generating matrices, point generation and t-values.

mod niederreiter;
mod points;
mod sobol;
mod tvalue;

pub use niederreiter::niederreiter_matrices;
pub use points::PointSet;
pub use sobol::{sobol_matrices, DirectionNumbers, SobolDimension};
pub use tvalue::{
    dual_member, for_each_dual_vector, is_tms_net_geometric, t_value_dual, t_value_rank,
    t_value_report, TValueMethod, TValueReport, MAX_DUAL_SCAN,
};

use crate::error::{invalid, Error, Result};
use crate::gf_poly::PrimeField;
use crate::matrix::FbMatrix;

/// Largest point count `generate_points` will materialize.
pub const MAX_POINTS: u64 = 1 << 26;

/// The s generating matrices C₁,…,C_s of a digital net, each n×m over F_b.
#[derive(Clone, Debug, PartialEq)]
pub struct GenMatrixSet {
    field: PrimeField,
    rows: usize,
    cols: usize,
    matrices: Vec<FbMatrix>,
}

impl GenMatrixSet {
    pub fn new(matrices: Vec<FbMatrix>) -> Result<Self> {
        let first = matrices
            .first()
            .ok_or_else(|| invalid("a digital net needs at least one matrix"))?;
        let (field, rows, cols) = (first.field(), first.rows(), first.cols());
        for c in &matrices {
            if c.field() != field {
                return Err(Error::BaseMismatch { left: field.order(), right: c.field().order() });
            }
            if (c.rows(), c.cols()) != (rows, cols) {
                return Err(Error::Shape(format!(
                    "matrices of shape {}x{} and {}x{} in one net",
                    rows,
                    cols,
                    c.rows(),
                    c.cols()
                )));
            }
        }
        Ok(Self { field, rows, cols, matrices })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// n, the digit precision of the generated coordinates.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// m, so the net has b^m points.
    pub fn m(&self) -> usize {
        self.cols
    }

    pub fn dim(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrix(&self, j: usize) -> &FbMatrix {
        &self.matrices[j]
    }

    pub fn matrices(&self) -> &[FbMatrix] {
        &self.matrices
    }

    /// Number of points b^m, or None when it overflows u64.
    pub fn num_points(&self) -> Option<u64> {
        self.field.pow(self.cols as u32)
    }

    /// Restriction to the coordinates in `u` (0-based).
    pub fn project(&self, u: &[usize]) -> Result<Self> {
        let mats = u
            .iter()
            .map(|&j| {
                self.matrices.get(j).cloned().ok_or_else(|| {
                    invalid(format!("coordinate {j} out of range for dimension {}", self.dim()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(mats)
    }

    /// Zero-pads (or truncates) every matrix to `rows` rows.
    pub fn with_rows(&self, rows: usize) -> Self {
        Self {
            field: self.field,
            rows,
            cols: self.cols,
            matrices: self.matrices.iter().map(|c| c.with_rows(rows)).collect(),
        }
    }

    /// True when every upper m×m block is non-singular.
    pub fn has_nonsingular_blocks(&self) -> bool {
        self.rows >= self.cols
            && self.matrices.iter().all(|c| c.top_left(self.cols, self.cols).is_nonsingular())
    }
}

/// ψ(y) = Σ yᵢ b⁻ⁱ.
pub fn psi(field: PrimeField, digits: &[u32]) -> Result<f64> {
    let b = field.order() as f64;
    let mut x = 0.0;
    for &d in digits.iter().rev() {
        field.check_digit(d)?;
        x = (x + d as f64) / b;
    }
    Ok(x)
}

/// Points x_k = (ψ(C₁ k⃗), …, ψ(C_s k⃗)) for k = 0, …, b^m − 1, in k-order.
pub fn generate_points(g: &GenMatrixSet) -> Result<PointSet> {
    let n = g
        .num_points()
        .filter(|&n| n <= MAX_POINTS)
        .ok_or_else(|| Error::TooLarge(format!("b^m points with b={}, m={}", g.field.order(), g.cols)))?
        as usize;
    let (s, w, m) = (g.dim(), g.rows, g.cols);
    if w == 0 {
        return Err(invalid("generating matrices need at least one row"));
    }
    if g.field.order() == 2 && w <= 64 {
        return Ok(PointSet::packed(g.field, w, s, binary_words(g, n)));
    }

    let f = g.field;
    let b = f.order() as usize;
    let mut digits = vec![0u8; n * s * w];
    let mut kappa = vec![0u8; m];
    for k in 0..n {
        let mut q = k;
        for d in kappa.iter_mut() {
            *d = (q % b) as u8;
            q /= b;
        }
        for (j, c) in g.matrices.iter().enumerate() {
            let out = &mut digits[(k * s + j) * w..(k * s + j + 1) * w];
            for (i, y) in out.iter_mut().enumerate() {
                *y = c
                    .row(i)
                    .iter()
                    .zip(&kappa)
                    .fold(0u8, |acc, (&a, &x)| f.add(acc, f.mul(a, x)));
            }
        }
    }
    PointSet::from_digits(f, w, s, digits)
}

/// b = 2 fast path: columns packed into words, points by the recurrence
/// Y_k = Y_{k & (k−1)} ⊕ col[tz(k)].
fn binary_words(g: &GenMatrixSet, n: usize) -> Vec<u64> {
    let (s, w, m) = (g.dim(), g.rows, g.cols);
    let cols: Vec<Vec<u64>> = g
        .matrices
        .iter()
        .map(|c| {
            (0..m)
                .map(|r| (0..w).fold(0u64, |acc, i| (acc << 1) | c.get(i, r) as u64))
                .collect()
        })
        .collect();
    let mut words = vec![0u64; n * s];
    for k in 1..n {
        let prev = k & (k - 1);
        let bit = k.trailing_zeros() as usize;
        for j in 0..s {
            words[k * s + j] = words[prev * s + j] ^ cols[j][bit];
        }
    }
    words
}

/// Δ_P(y) = #{x ∈ P : x ∈ [0, y)} / |P| − Π yⱼ.
pub fn local_discrepancy(p: &PointSet, y: &[f64]) -> Result<f64> {
    if y.len() != p.dim() {
        return Err(Error::Shape(format!("anchor of dimension {} for {}-dimensional points", y.len(), p.dim())));
    }
    let mut buf = vec![0.0; p.dim()];
    let mut inside = 0usize;
    for k in 0..p.len() {
        p.point_into(k, &mut buf);
        if buf.iter().zip(y).all(|(x, yj)| x < yj) {
            inside += 1;
        }
    }
    Ok(inside as f64 / p.len() as f64 - y.iter().product::<f64>())
}

/// Σ_{j∈u} (log_b j + log_b log_b(j+b) + 1), with u given 1-based.
pub fn niederreiter_tu_bound(u: &[usize], b: u32) -> Result<f64> {
    if u.is_empty() {
        return Err(invalid("the t_u bound needs a non-empty coordinate set"));
    }
    if b < 2 {
        return Err(invalid(format!("base {b} is below 2")));
    }
    let lnb = (b as f64).ln();
    let mut total = 0.0;
    for &j in u {
        if j == 0 {
            return Err(invalid("coordinates are numbered from 1"));
        }
        let jf = j as f64;
        total += jf.ln() / lnb + ((jf + b as f64).ln() / lnb).ln() / lnb + 1.0;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> PrimeField {
        PrimeField::binary()
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi(f2(), &[1, 0, 1]).unwrap(), 0.625);
        assert_eq!(psi(f2(), &[0, 0, 0, 0]).unwrap(), 0.0);
        let f3 = PrimeField::new(3).unwrap();
        assert!((psi(f3, &[2, 1]).unwrap() - 7.0 / 9.0).abs() < 1e-15);
        assert!(psi(f2(), &[2]).is_err());
    }

    #[test]
    fn identity_net_points() {
        let g = GenMatrixSet::new(vec![FbMatrix::identity(f2(), 2)]).unwrap();
        let p = generate_points(&g).unwrap();
        let xs: Vec<f64> = p.iter().map(|x| x[0]).collect();
        assert_eq!(xs, vec![0.0, 0.5, 0.25, 0.75]);
    }

    #[test]
    fn zero_matrices_give_origin() {
        for b in [2, 3] {
            let f = PrimeField::new(b).unwrap();
            let g = GenMatrixSet::new(vec![FbMatrix::zeros(f, 3, 2); 2]).unwrap();
            let p = generate_points(&g).unwrap();
            assert_eq!(p.len(), (b * b) as usize);
            assert!(p.iter().all(|x| x == vec![0.0, 0.0]));
        }
    }

    #[test]
    fn packed_and_byte_paths_agree() {
        // w = 70 forces the byte layout for b = 2
        let f = f2();
        let mut c = FbMatrix::zeros(f, 70, 3);
        for (i, r) in [(0, 0), (1, 1), (2, 2), (1, 0), (69, 2), (40, 1)] {
            c.set(i, r, 1);
        }
        let wide = generate_points(&GenMatrixSet::new(vec![c.clone()]).unwrap()).unwrap();
        let narrow =
            generate_points(&GenMatrixSet::new(vec![c.top_left(64, 3)]).unwrap()).unwrap();
        for k in 0..8 {
            assert_eq!(wide.digits(k, 0)[..64], narrow.digits(k, 0)[..]);
            assert_eq!(wide.coord(k, 0), narrow.coord(k, 0));
        }
    }

    #[test]
    fn ternary_points() {
        let f = PrimeField::new(3).unwrap();
        let g = GenMatrixSet::new(vec![FbMatrix::identity(f, 2)]).unwrap();
        let p = generate_points(&g).unwrap();
        // k = 5 = (2, 1) in base 3 maps to 2/3 + 1/9
        assert!((p.coord(5, 0) - 7.0 / 9.0).abs() < 1e-15);
        let mut firsts: Vec<u64> = (0..9).map(|k| p.leading_digits(k, 0, 2)).collect();
        firsts.sort_unstable();
        assert_eq!(firsts, (0..9).collect::<Vec<_>>());
    }

    #[test]
    fn local_discrepancy_examples() {
        let pts = |xs: &[f64]| {
            PointSet::from_coords(f2(), 8, &xs.iter().map(|&x| vec![x]).collect::<Vec<_>>())
                .unwrap()
        };
        let two = pts(&[0.0, 0.5]);
        assert_eq!(local_discrepancy(&two, &[0.5]).unwrap(), 0.0);
        assert_eq!(local_discrepancy(&two, &[1.0]).unwrap(), 0.0);
        let four = pts(&[0.0, 0.25, 0.5, 0.75]);
        assert!((local_discrepancy(&four, &[0.3]).unwrap() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn tu_bound_examples() {
        let l = 3f64.log2().log2();
        assert!((niederreiter_tu_bound(&[1], 2).unwrap() - (l + 1.0)).abs() < 1e-12);
        assert!((niederreiter_tu_bound(&[1], 2).unwrap() - 1.6644).abs() < 1e-4);
        assert!((niederreiter_tu_bound(&[1, 2], 2).unwrap() - 4.6644).abs() < 1e-4);
        assert!((niederreiter_tu_bound(&[1], 1_000_000).unwrap() - 1.0).abs() < 1e-3);
        assert!(niederreiter_tu_bound(&[], 2).is_err());
    }

    #[test]
    fn projection_and_padding() {
        let f = f2();
        let g = GenMatrixSet::new(vec![FbMatrix::identity(f, 2), FbMatrix::anti_identity(f, 2)])
            .unwrap();
        let p = g.project(&[1]).unwrap();
        assert_eq!(p.matrix(0), &FbMatrix::anti_identity(f, 2));
        assert!(g.project(&[2]).is_err());
        let padded = g.with_rows(5);
        assert_eq!(padded.rows(), 5);
        assert!(padded.has_nonsingular_blocks());
        let a = generate_points(&g).unwrap();
        let b = generate_points(&padded).unwrap();
        for k in 0..4 {
            assert_eq!(a.point(k), b.point(k));
        }
    }

    #[test]
    fn mismatched_matrices_rejected() {
        let f3 = PrimeField::new(3).unwrap();
        assert!(GenMatrixSet::new(vec![]).is_err());
        assert!(GenMatrixSet::new(vec![FbMatrix::identity(f2(), 2), FbMatrix::identity(f3, 2)])
            .is_err());
        assert!(GenMatrixSet::new(vec![FbMatrix::identity(f2(), 2), FbMatrix::identity(f2(), 3)])
            .is_err());
    }
}
