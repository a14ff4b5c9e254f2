//! Polynomial lattice point sets P(p, g) of finite precision w.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::digital_net::{GenMatrixSet, PointSet};
use crate::error::{invalid, Error, Result};
use crate::gf_poly::{
    enumerate_moduli, is_irreducible, laurent_digits, poly_mulmod, GeneratorSet, GfPoly,
    PrimeField,
};
use crate::matrix::FbMatrix;
use crate::scramble::derive_seed;

/// Tag mixed into seeds so lattice draws never share a stream with scrambles.
const PLR_STREAM: u64 = 0x504c_5200;

/// Modulus p ∈ P_m, generators g ∈ G_m^s and output precision w.
#[derive(Clone, Debug, PartialEq)]
pub struct PlrSpec {
    field: PrimeField,
    m: usize,
    modulus: GfPoly,
    generators: Vec<GfPoly>,
    precision: usize,
}

impl PlrSpec {
    pub fn new(modulus: GfPoly, generators: Vec<GfPoly>, precision: usize) -> Result<Self> {
        let field = modulus.field();
        let m = modulus
            .degree()
            .filter(|&d| d >= 1)
            .ok_or_else(|| Error::Degree("modulus must have positive degree".into()))?;
        if !modulus.is_monic() || !is_irreducible(&modulus)? {
            return Err(invalid(format!("modulus {modulus} is not monic irreducible")));
        }
        if generators.is_empty() {
            return Err(invalid("at least one generator is required"));
        }
        for g in &generators {
            if g.field() != field {
                return Err(Error::BaseMismatch { left: field.order(), right: g.field().order() });
            }
            match g.degree() {
                None => return Err(invalid("generators must be nonzero")),
                Some(d) if d >= m => {
                    return Err(Error::Degree(format!("generator {g} has degree ≥ {m}")))
                }
                _ => {}
            }
        }
        if precision < m {
            return Err(invalid(format!("precision {precision} is below m = {m}")));
        }
        Ok(Self { field, m, modulus, generators, precision })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn modulus(&self) -> &GfPoly {
        &self.modulus
    }

    pub fn generators(&self) -> &[GfPoly] {
        &self.generators
    }

    pub fn precision(&self) -> usize {
        self.precision
    }
}

/// p uniform on the degree-m monic irreducibles, each gⱼ uniform on G_m.
pub fn sample_plr(
    field: PrimeField,
    m: usize,
    s: usize,
    w: usize,
    master: u64,
    replicate: u64,
) -> Result<PlrSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(&[master, replicate, PLR_STREAM]));
    sample_plr_with(field, m, s, w, &mut rng)
}

pub fn sample_plr_with<R: Rng + ?Sized>(
    field: PrimeField,
    m: usize,
    s: usize,
    w: usize,
    rng: &mut R,
) -> Result<PlrSpec> {
    let p = enumerate_moduli(field, m)?.sample(rng);
    let gens = GeneratorSet::new(field, m)?;
    let g = (0..s).map(|_| gens.sample(rng)).collect();
    PlrSpec::new(p, g, w)
}

/// Direct construction: coordinate j of point k is ν_w((k·gⱼ mod p)/p).
pub fn plr_points(spec: &PlrSpec) -> Result<PointSet> {
    let f = spec.field;
    let n = f
        .pow(spec.m as u32)
        .filter(|&n| n <= crate::digital_net::MAX_POINTS)
        .ok_or_else(|| Error::TooLarge(format!("b^m points with m = {}", spec.m)))?;
    let (s, w) = (spec.dim(), spec.precision);
    let mut digits = Vec::with_capacity(n as usize * s * w);
    for k in 0..n {
        let kx = GfPoly::from_index(f, k);
        for g in &spec.generators {
            let r = poly_mulmod(&kx, g, &spec.modulus)?;
            digits.extend(laurent_digits(&r, &spec.modulus, w)?);
        }
    }
    PointSet::from_digits(f, w, s, digits)
}

/// w×m Hankel matrices with entry (i, r) = u_{i+r−1} (1-based).
pub fn plr_gen_matrices(spec: &PlrSpec) -> Result<GenMatrixSet> {
    let (w, m) = (spec.precision, spec.m);
    let mats = spec
        .generators
        .iter()
        .map(|g| {
            let u = laurent_digits(g, &spec.modulus, w + m - 1)?;
            let mut c = FbMatrix::zeros(spec.field, w, m);
            for i in 0..w {
                for r in 0..m {
                    c.set(i, r, u[i + r]);
                }
            }
            Ok(c)
        })
        .collect::<Result<Vec<_>>>()?;
    GenMatrixSet::new(mats)
}

/// Σⱼ kⱼ(x) gⱼ(x) ≡ 0 (mod p), with kⱼ read as polynomials without truncation.
pub fn plr_dual_member(k: &[u64], spec: &PlrSpec) -> Result<bool> {
    if k.len() != spec.dim() {
        return Err(Error::Shape(format!("{} indices for a {}-dimensional rule", k.len(), spec.dim())));
    }
    let f = spec.field;
    let mut acc = GfPoly::zero(f);
    for (&kj, g) in k.iter().zip(&spec.generators) {
        let kx = GfPoly::from_index(f, kj).rem(&spec.modulus)?;
        acc = acc.add(&poly_mulmod(&kx, g, &spec.modulus)?)?;
    }
    Ok(acc.rem(&spec.modulus)?.is_zero())
}

/// Every (p, g) ∈ P_m × G_m^s, for exhaustive frequency checks.
pub fn enumerate_plr(field: PrimeField, m: usize, s: usize, w: usize) -> Result<Vec<PlrSpec>> {
    let moduli = enumerate_moduli(field, m)?;
    let gens: Vec<GfPoly> = GeneratorSet::new(field, m)?.iter().collect();
    let total = (moduli.len() as f64) * (gens.len() as f64).powi(s as i32);
    if total > (1u64 << 20) as f64 {
        return Err(Error::TooLarge(format!("{total:.0} polynomial lattice rules")));
    }
    let mut out = Vec::new();
    for p in moduli.members() {
        let mut idx = vec![0usize; s];
        loop {
            let g = idx.iter().map(|&i| gens[i].clone()).collect();
            out.push(PlrSpec::new(p.clone(), g, w)?);
            let mut j = 0;
            loop {
                if j == s {
                    break;
                }
                idx[j] += 1;
                if idx[j] < gens.len() {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
            if j == s {
                break;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digital_net::generate_points;

    fn f2() -> PrimeField {
        PrimeField::binary()
    }

    fn poly(c: &[u32]) -> GfPoly {
        GfPoly::from_coeffs(f2(), c).unwrap()
    }

    fn worked() -> PlrSpec {
        PlrSpec::new(poly(&[1, 1, 1]), vec![poly(&[1])], 4).unwrap()
    }

    #[test]
    fn worked_point_set() {
        let p = plr_points(&worked()).unwrap();
        let xs: Vec<f64> = p.iter().map(|x| x[0]).collect();
        assert_eq!(xs, vec![0.0, 0.375, 0.8125, 0.6875]);
        assert_eq!(p.digits(1, 0), vec![0, 1, 1, 0]);
        assert_eq!(p.digits(2, 0), vec![1, 1, 0, 1]);
        assert_eq!(p.digits(3, 0), vec![1, 0, 1, 1]);
    }

    #[test]
    fn hankel_matrices() {
        let g = plr_gen_matrices(&worked()).unwrap();
        let c = g.matrix(0);
        assert_eq!(c.column(0), vec![0, 1, 1, 0]);
        assert_eq!(c.column(1), vec![1, 1, 0, 1]);
        for i in 1..c.rows() {
            for r in 0..c.cols() - 1 {
                assert_eq!(c.get(i, r), c.get(i - 1, r + 1));
            }
        }
        let lin = PlrSpec::new(poly(&[0, 1]), vec![poly(&[1])], 5).unwrap();
        assert_eq!(plr_gen_matrices(&lin).unwrap().matrix(0).column(0), vec![1, 0, 0, 0, 0]);
    }

    #[test]
    fn constructions_agree() {
        for m in 1..=3 {
            for w in [m, 2 * m, 52] {
                for spec in enumerate_plr(f2(), m, 1, w).unwrap() {
                    let direct = plr_points(&spec).unwrap();
                    let via = generate_points(&plr_gen_matrices(&spec).unwrap()).unwrap();
                    assert_eq!(direct, via);
                }
            }
        }
        let f3 = PrimeField::new(3).unwrap();
        for spec in enumerate_plr(f3, 2, 2, 5).unwrap().iter().step_by(7) {
            let via = generate_points(&plr_gen_matrices(spec).unwrap()).unwrap();
            assert_eq!(plr_points(spec).unwrap(), via);
        }
    }

    #[test]
    fn projections_are_permutations() {
        let f3 = PrimeField::new(3).unwrap();
        for r in 0..5 {
            let spec = sample_plr(f3, 3, 3, 6, 1, r).unwrap();
            let p = plr_points(&spec).unwrap();
            for j in 0..3 {
                let mut v: Vec<u64> = (0..27).map(|k| p.leading_digits(k, j, 3)).collect();
                v.sort_unstable();
                assert_eq!(v, (0..27).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn sampling_frequencies() {
        let a = poly(&[1, 1, 0, 1]);
        let mut hits = 0;
        for r in 0..10_000 {
            let spec = sample_plr(f2(), 3, 2, 3, 99, r).unwrap();
            assert!(spec.generators().iter().all(|g| !g.is_zero()));
            if spec.modulus() == &a {
                hits += 1;
            }
        }
        assert!((hits as f64 - 5000.0).abs() < 5.0 * 50.0);
        assert_eq!(sample_plr(f2(), 5, 3, 8, 4, 4).unwrap(), sample_plr(f2(), 5, 3, 8, 4, 4).unwrap());
    }

    #[test]
    fn dual_membership() {
        let spec = PlrSpec::new(poly(&[1, 1, 1]), vec![poly(&[1]), poly(&[1])], 4).unwrap();
        assert!(plr_dual_member(&[1, 1], &spec).unwrap());
        assert!(plr_dual_member(&[0, 0], &spec).unwrap());
        assert!(!plr_dual_member(&[1, 0], &spec).unwrap());
        let all = enumerate_plr(f2(), 2, 2, 2).unwrap();
        assert_eq!(all.len(), 9);
        let hits = all.iter().filter(|s| plr_dual_member(&[1, 1], s).unwrap()).count();
        assert_eq!(hits, 3);
    }

    #[test]
    fn invalid_specs() {
        assert!(PlrSpec::new(poly(&[1, 0, 1]), vec![poly(&[1])], 4).is_err());
        assert!(PlrSpec::new(poly(&[1, 1, 1]), vec![GfPoly::zero(f2())], 4).is_err());
        assert!(PlrSpec::new(poly(&[1, 1, 1]), vec![poly(&[0, 0, 1])], 4).is_err());
        assert!(PlrSpec::new(poly(&[1, 1, 1]), vec![poly(&[1])], 1).is_err());
    }
}
