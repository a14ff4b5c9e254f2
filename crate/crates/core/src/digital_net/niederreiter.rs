use super::GenMatrixSet;
use crate::error::{invalid, Error, Result};
use crate::gf_poly::{enumerate_moduli, laurent_digits, GfPoly, PrimeField};
use crate::matrix::FbMatrix;

/// The first `s` monic irreducibles over F_b ordered by (degree, index).
fn base_polynomials(field: PrimeField, s: usize) -> Result<Vec<GfPoly>> {
    let mut out = Vec::with_capacity(s);
    let mut degree = 1;
    while out.len() < s {
        let mut set = enumerate_moduli(field, degree)?.members().to_vec();
        set.sort_by_key(GfPoly::to_index);
        out.extend(set.into_iter().take(s - out.len()));
        degree += 1;
    }
    Ok(out)
}

/// Niederreiter generating matrices, m×m.
///
/// With e = deg pⱼ and i − 1 = Qe + z, row i holds the Laurent digits
/// u₁…u_m of x^{e−z−1}/pⱼ^{Q+1}. That expansion starts at x^{−i}, so each
/// matrix is unit upper triangular and rows past m vanish on the first m
/// columns; callers that need w > m rows zero-pad.
pub fn niederreiter_matrices(s: usize, m: usize, field: PrimeField) -> Result<GenMatrixSet> {
    if s == 0 {
        return Err(invalid("dimension must be at least 1"));
    }
    let polys = base_polynomials(field, s)?;
    let mats = polys
        .iter()
        .map(|p| {
            let e = p.degree().expect("irreducible has positive degree");
            let mut c = FbMatrix::zeros(field, m, m);
            for i in 0..m {
                let (q, z) = (i / e, i % e);
                let den = p.pow((q + 1) as u32)?;
                let num = GfPoly::monomial(field, e - z - 1);
                for (r, &u) in laurent_digits(&num, &den, m)?.iter().enumerate() {
                    c.set(i, r, u);
                }
            }
            Ok(c)
        })
        .collect::<Result<Vec<_>>>()?;
    let g = GenMatrixSet::new(mats)?;
    if !g.has_nonsingular_blocks() {
        return Err(Error::Shape("Niederreiter block unexpectedly singular".into()));
    }
    Ok(g)
}
