use std::collections::HashMap;

use super::{GenMatrixSet, PointSet};
use crate::error::{invalid, Error, Result};
use crate::matrix::EchelonBasis;
use crate::weight_fns::mu1;

/// Dual scans refuse instances with more than this many vectors.
pub const MAX_DUAL_SCAN: u64 = 1 << 24;

/// Upper limit on compositions visited by the rank test.
const MAX_COMPOSITIONS: f64 = 1e9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TValueMethod {
    Rank,
    Dual,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TValueReport {
    pub t: u32,
    pub method: TValueMethod,
    /// (0-based coordinate subset, t_u)
    pub projections: Vec<(Vec<usize>, u32)>,
}

/// Least t such that, for every a₁+⋯+a_s = m−t, the first aⱼ rows of each
/// Cⱼ together are linearly independent.
pub fn t_value_rank(g: &GenMatrixSet) -> Result<u32> {
    let m = g.m();
    if g.rows() < m {
        return Err(Error::Shape(format!("{} rows cannot carry m = {m}", g.rows())));
    }
    let s = g.dim();
    let visits: f64 = (0..=m).map(|r| binomial(r + s - 1, s - 1)).sum();
    if visits > MAX_COMPOSITIONS {
        return Err(Error::TooLarge(format!(
            "rank test over ~{visits:.2e} compositions (m={m}, s={s})"
        )));
    }
    for t in 0..m {
        let basis = EchelonBasis::new(g.field(), m);
        if all_full_rank(g, 0, m - t, &basis) {
            return Ok(t as u32);
        }
    }
    Ok(m as u32)
}

fn all_full_rank(g: &GenMatrixSet, j: usize, remaining: usize, basis: &EchelonBasis) -> bool {
    let c = g.matrix(j);
    let mut b = basis.clone();
    if j + 1 == g.dim() {
        return (0..remaining).all(|i| b.insert(c.row(i)));
    }
    for a in 0..=remaining {
        // once rows 1..a of C_j are dependent, every larger a_j fails too
        if a > 0 && !b.insert(c.row(a - 1)) {
            return false;
        }
        if !all_full_rank(g, j + 1, remaining - a, &b) {
            return false;
        }
    }
    true
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Σⱼ Cⱼᵀ tr_n(kⱼ) = 0, where tr_n keeps the n lowest base-b digits.
pub fn dual_member(g: &GenMatrixSet, k: &[u64]) -> Result<bool> {
    if k.len() != g.dim() {
        return Err(Error::Shape(format!("{} indices for a {}-dimensional net", k.len(), g.dim())));
    }
    let f = g.field();
    let b = f.order() as u64;
    let mut acc = vec![0u8; g.m()];
    for (c, &kj) in g.matrices().iter().zip(k) {
        let mut q = kj;
        for i in 0..g.rows() {
            if q == 0 {
                break;
            }
            let d = (q % b) as u8;
            q /= b;
            if d != 0 {
                for (a, &x) in acc.iter_mut().zip(c.row(i)) {
                    *a = f.add(*a, f.mul(d, x));
                }
            }
        }
    }
    Ok(acc.iter().all(|&x| x == 0))
}

/// Calls `visit` on every nonzero dual vector in [0, b^m)^s.
pub fn for_each_dual_vector(g: &GenMatrixSet, mut visit: impl FnMut(&[u64])) -> Result<()> {
    let f = g.field();
    let b = f.order() as u64;
    let m = g.m();
    let s = g.dim();
    let per_dim = g.num_points().unwrap_or(u64::MAX);
    let total = per_dim.checked_pow(s as u32).unwrap_or(u64::MAX);
    if total > MAX_DUAL_SCAN {
        return Err(Error::TooLarge(format!(
            "dual scan over b^(ms) = {b}^{} vectors exceeds 2^24",
            m * s
        )));
    }
    if g.rows() < m {
        return Err(Error::Shape(format!("{} rows cannot carry m = {m}", g.rows())));
    }

    // images[j][k] = Cⱼᵀ k⃗, encoded as a base-b integer
    let encode = |v: &[u8]| v.iter().rev().fold(0u64, |acc, &d| acc * b + d as u64);
    let images: Vec<Vec<Vec<u8>>> = g
        .matrices()
        .iter()
        .map(|c| {
            (0..per_dim)
                .map(|k| {
                    let mut v = vec![0u8; m];
                    let mut q = k;
                    for i in 0..m {
                        let d = (q % b) as u8;
                        q /= b;
                        if d != 0 {
                            for (a, &x) in v.iter_mut().zip(c.row(i)) {
                                *a = f.add(*a, f.mul(d, x));
                            }
                        }
                    }
                    v
                })
                .collect()
        })
        .collect();
    let mut last: HashMap<u64, Vec<u64>> = HashMap::new();
    for (k, v) in images[s - 1].iter().enumerate() {
        last.entry(encode(v)).or_default().push(k as u64);
    }

    let mut k = vec![0u64; s];
    let mut partial = vec![vec![0u8; m]; s];
    let mut neg = vec![0u8; m];
    loop {
        // partial[s-1] holds Σ_{j<s-1} Cⱼᵀ kⱼ
        for (n, &p) in neg.iter_mut().zip(&partial[s - 1]) {
            *n = f.neg(p);
        }
        if let Some(list) = last.get(&encode(&neg)) {
            let prefix_zero = k[..s - 1].iter().all(|&x| x == 0);
            for &ks in list {
                if prefix_zero && ks == 0 {
                    continue;
                }
                k[s - 1] = ks;
                visit(&k);
            }
            k[s - 1] = 0;
        }
        // advance the prefix counter k₁..k_{s−1}
        let mut j = s - 1;
        loop {
            if j == 0 {
                return Ok(());
            }
            j -= 1;
            k[j] += 1;
            if k[j] < per_dim {
                break;
            }
            k[j] = 0;
        }
        for jj in j..s - 1 {
            let (lo, hi) = partial.split_at_mut(jj + 1);
            for ((o, &a), &x) in hi[0].iter_mut().zip(&lo[jj]).zip(&images[jj][k[jj] as usize]) {
                *o = f.add(a, x);
            }
        }
    }
}

/// t = m − μ + 1 with μ the least NRT weight over the nonzero dual vectors in
/// [0, b^m)^s, capped at m + 1.
pub fn t_value_dual(g: &GenMatrixSet) -> Result<u32> {
    let m = g.m() as u64;
    let b = g.field().order() as u64;
    let mut mu = m + 1;
    for_each_dual_vector(g, |k| {
        let w: u64 = k.iter().map(|&kj| mu1(kj, b) as u64).sum();
        mu = mu.min(w);
    })?;
    Ok((m + 1 - mu) as u32)
}

pub fn t_value_report(
    g: &GenMatrixSet,
    method: TValueMethod,
    subsets: &[Vec<usize>],
) -> Result<TValueReport> {
    let compute = |g: &GenMatrixSet| match method {
        TValueMethod::Rank => t_value_rank(g),
        TValueMethod::Dual => t_value_dual(g),
    };
    let t = compute(g)?;
    let projections = subsets
        .iter()
        .map(|u| Ok((u.clone(), compute(&g.project(u)?)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(TValueReport { t, method, projections })
}

/// Checks that every elementary interval of volume b^{t−m} holds exactly
/// b^t points.
pub fn is_tms_net_geometric(p: &PointSet, t: i64) -> Result<bool> {
    if t < 0 {
        return Err(invalid(format!("t = {t} is negative")));
    }
    let b = p.field().order() as u64;
    let n = p.len() as u64;
    let mut m = 0usize;
    while (b as u128).pow(m as u32) < n as u128 {
        m += 1;
    }
    if (b as u128).pow(m as u32) != n as u128 {
        return Err(invalid(format!("{n} points is not a power of {b}")));
    }
    let t = t as usize;
    if t > m {
        return Err(invalid(format!("t = {t} exceeds m = {m}")));
    }
    let r = m - t;
    if r > p.precision() {
        return Err(invalid(format!("precision {} cannot resolve {r} digits", p.precision())));
    }
    let expected = b.pow(t as u32);
    let cells = b.pow(r as u32) as usize;
    let mut counts = vec![0u64; cells];
    let mut ok = true;
    for_each_composition(r, p.dim(), &mut |a| {
        counts.iter_mut().for_each(|c| *c = 0);
        for k in 0..p.len() {
            let mut idx = 0u64;
            for (j, &aj) in a.iter().enumerate() {
                idx = idx * b.pow(aj as u32) + p.leading_digits(k, j, aj);
            }
            counts[idx as usize] += 1;
        }
        ok = counts.iter().all(|&c| c == expected);
        ok
    });
    Ok(ok)
}

/// Visits compositions of `total` into `parts` non-negative parts until
/// `visit` returns false.
pub(crate) fn for_each_composition(
    total: usize,
    parts: usize,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) {
    fn rec(
        a: &mut Vec<usize>,
        remaining: usize,
        parts: usize,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if a.len() + 1 == parts {
            a.push(remaining);
            let go = visit(a);
            a.pop();
            return go;
        }
        for x in 0..=remaining {
            a.push(x);
            let go = rec(a, remaining - x, parts, visit);
            a.pop();
            if !go {
                return false;
            }
        }
        true
    }
    if parts > 0 {
        rec(&mut Vec::with_capacity(parts), total, parts, visit);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digital_net::generate_points;
    use crate::gf_poly::PrimeField;
    use crate::matrix::FbMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn net(mats: Vec<FbMatrix>) -> GenMatrixSet {
        GenMatrixSet::new(mats).unwrap()
    }

    fn random_net(rng: &mut ChaCha8Rng, b: u32, m: usize, s: usize) -> GenMatrixSet {
        let f = PrimeField::new(b).unwrap();
        let mats = (0..s)
            .map(|_| {
                let data = (0..m * m).map(|_| rng.gen_range(0..b) as u8).collect();
                FbMatrix::from_vec(f, m, m, data).unwrap()
            })
            .collect();
        net(mats)
    }

    #[test]
    fn structured_examples() {
        let f = PrimeField::binary();
        for m in 1..=5 {
            let g = net(vec![FbMatrix::identity(f, m)]);
            assert_eq!(t_value_rank(&g).unwrap(), 0);
            assert_eq!(t_value_dual(&g).unwrap(), 0);
        }
        let g = net(vec![FbMatrix::identity(f, 2), FbMatrix::anti_identity(f, 2)]);
        assert_eq!(t_value_rank(&g).unwrap(), 0);
        assert_eq!(t_value_dual(&g).unwrap(), 0);
        let g = net(vec![FbMatrix::identity(f, 2), FbMatrix::identity(f, 2)]);
        assert_eq!(t_value_rank(&g).unwrap(), 1);
        assert_eq!(t_value_dual(&g).unwrap(), 1);
        assert!(dual_member(&g, &[1, 1]).unwrap());
        let zero = net(vec![FbMatrix::zeros(f, 3, 3)]);
        assert_eq!(t_value_rank(&zero).unwrap(), 3);
        assert_eq!(t_value_dual(&zero).unwrap(), 3);
    }

    #[test]
    fn methods_agree_on_random_nets() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for b in [2, 3] {
            for _ in 0..50 {
                let m = rng.gen_range(1..=if b == 2 { 4 } else { 3 });
                let s = rng.gen_range(1..=3);
                let g = random_net(&mut rng, b, m, s);
                assert_eq!(t_value_rank(&g).unwrap(), t_value_dual(&g).unwrap(), "{g:?}");
            }
        }
    }

    #[test]
    fn geometric_check_matches_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let g = random_net(&mut rng, 2, 4, 2);
            let t = t_value_rank(&g).unwrap() as i64;
            let p = generate_points(&g).unwrap();
            assert!(is_tms_net_geometric(&p, t).unwrap());
            if t > 0 {
                assert!(!is_tms_net_geometric(&p, t - 1).unwrap());
            }
            // coarser interval families pass as well
            for t2 in t..=4 {
                assert!(is_tms_net_geometric(&p, t2).unwrap());
            }
        }
    }

    #[test]
    fn geometric_quarter_points() {
        let f = PrimeField::binary();
        let p = generate_points(&net(vec![FbMatrix::identity(f, 2)])).unwrap();
        assert!(is_tms_net_geometric(&p, 0).unwrap());
        assert!(is_tms_net_geometric(&p, -1).is_err());
    }

    #[test]
    fn large_dual_scan_refused() {
        let f = PrimeField::binary();
        let g = net(vec![FbMatrix::identity(f, 13); 2]);
        assert!(matches!(t_value_dual(&g), Err(Error::TooLarge(_))));
    }

    #[test]
    fn dual_truncation_ignores_high_digits() {
        let f = PrimeField::binary();
        let g = net(vec![FbMatrix::identity(f, 2)]);
        // digits beyond n = 2 are cut off by tr_n
        assert!(dual_member(&g, &[4]).unwrap());
        assert!(!dual_member(&g, &[5]).unwrap());
        // zero-padded rows contribute nothing either
        assert!(dual_member(&g.with_rows(4), &[4]).unwrap());
    }

    #[test]
    fn compositions_are_complete() {
        let mut seen = Vec::new();
        for_each_composition(3, 2, &mut |a| {
            seen.push(a.to_vec());
            true
        });
        assert_eq!(seen, vec![vec![0, 3], vec![1, 2], vec![2, 1], vec![3, 0]]);
    }

    #[test]
    fn report_projections() {
        let f = PrimeField::binary();
        let g = net(vec![
            FbMatrix::identity(f, 2),
            FbMatrix::identity(f, 2),
            FbMatrix::anti_identity(f, 2),
        ]);
        let r = t_value_report(&g, TValueMethod::Rank, &[vec![0, 1], vec![0, 2]]).unwrap();
        assert_eq!(r.projections, vec![(vec![0, 1], 1), (vec![0, 2], 0)]);
        let d = t_value_report(&g, TValueMethod::Dual, &[vec![0, 1], vec![0, 2]]).unwrap();
        assert_eq!(r.t, d.t);
        assert_eq!(r.projections, d.projections);
    }
}
