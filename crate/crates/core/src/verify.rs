//! Exhaustive checks of the combinatorial facts the error analysis rests on.
//!
//! Every check enumerates its probability space completely unless that space
//! exceeds [`MAX_ENUMERATION`]; the scrambled-dual bound then falls back to
//! Monte Carlo with a 5σ allowance and says so in its notes.

use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;


use crate::digital_net::{
    for_each_dual_vector, niederreiter_matrices, sobol_matrices, t_value_dual, t_value_rank,
    DirectionNumbers, GenMatrixSet, MAX_DUAL_SCAN,
};
use crate::error::{invalid, Result};
use crate::gf_poly::PrimeField;
use crate::matrix::FbMatrix;
use crate::poly_lattice::{enumerate_plr, plr_dual_member};
use crate::scramble::{
    apply_scramble, derive_seed, draw_scrambled_net, enumerate_scrambles, sample_scramble_with,
    scramble_count, LowerTriScramble,
};
use crate::weight_fns::mu1;

/// Largest probability space enumerated outright.
pub const MAX_ENUMERATION: u64 = 1 << 20;
pub const RANDOM_NETS: usize = 50;
pub const SCRAMBLE_DRAWS: u64 = 100;
const MC_DRAWS: u64 = 1 << 12;
const MAX_S: usize = 3;
const MAX_M: usize = 4;
/// Polynomial lattice sweeps stop past this many (rule, k) pairs.
const PLR_BUDGET: u64 = 1 << 21;
/// Exhaustive scramble enumeration is abandoned past this many membership tests.
const MEMBERSHIP_BUDGET: u64 = 1 << 26;
const KEEP_FAILURES: usize = 5;

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: u64,
    pub failed: u64,
    /// The first few failures, human-readable.
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl CheckOutcome {
    fn new(name: &'static str) -> Self {
        Self { name, cases: 0, failed: 0, failures: Vec::new(), notes: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0 && self.cases > 0
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < KEEP_FAILURES {
                self.failures.push(describe());
            }
        }
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{tag} {} ({} cases", self.name, self.cases)?;
        if self.failed > 0 {
            write!(f, ", {} failed", self.failed)?;
        }
        write!(f, ")")?;
        for n in &self.notes {
            write!(f, "\n    note: {n}")?;
        }
        for e in &self.failures {
            write!(f, "\n    {e}")?;
        }
        Ok(())
    }
}

fn pow(b: u64, e: usize) -> u64 {
    b.pow(e as u32)
}

fn digits(k: u64, b: u64, len: usize) -> Vec<u8> {
    let mut q = k;
    (0..len)
        .map(|_| {
            let d = (q % b) as u8;
            q /= b;
            d
        })
        .collect()
}

/// i as s coordinates in base `per`, first coordinate least significant.
fn split(i: u64, per: u64, s: usize) -> Vec<u64> {
    (0..s).map(|j| i / per.pow(j as u32) % per).collect()
}

fn undigits(v: &[u8], b: u64) -> u64 {
    v.iter().rev().fold(0, |acc, &d| acc * b + d as u64)
}

fn dual_scan_fits(field: PrimeField, m: usize, s: usize) -> bool {
    (field.order() as f64).powi((m * s) as i32) <= MAX_DUAL_SCAN as f64
}

/// Sobol' (b = 2), Niederreiter, and the two-dimensional (I, anti-I) net.
pub fn structured_nets(field: PrimeField, m: usize, max_s: usize) -> Result<Vec<(String, GenMatrixSet)>> {
    let mut out = Vec::new();
    for s in 1..=max_s {
        if field.order() == 2 {
            out.push((format!("sobol s={s} m={m}"), sobol_matrices(s, m, DirectionNumbers::bundled())?));
        }
        out.push((format!("niederreiter s={s} m={m}"), niederreiter_matrices(s, m, field)?));
    }
    if max_s >= 2 {
        let pair = GenMatrixSet::new(vec![FbMatrix::identity(field, m), FbMatrix::anti_identity(field, m)])?;
        out.push((format!("hammersley m={m}"), pair));
    }
    Ok(out)
}

fn random_net(field: PrimeField, m: usize, s: usize, rng: &mut ChaCha8Rng) -> Result<GenMatrixSet> {
    let b = field.order() as u8;
    let mats = (0..s)
        .map(|_| {
            let data = (0..m * m).map(|_| rng.gen_range(0..b)).collect();
            FbMatrix::from_vec(field, m, m, data)
        })
        .collect::<Result<Vec<_>>>()?;
    GenMatrixSet::new(mats)
}

fn check_max_m(max_m: usize) -> Result<usize> {
    if max_m == 0 {
        return Err(invalid("max m must be at least 1"));
    }
    Ok(max_m.min(MAX_M))
}

/// t by the rank test equals t by dual enumeration.
pub fn t_value_methods_agree(field: PrimeField, max_m: usize, random_nets: usize, seed: u64) -> Result<CheckOutcome> {
    let max_m = check_max_m(max_m)?;
    let mut out = CheckOutcome::new("t-value: rank test == dual enumeration");
    let mut nets = Vec::new();
    for m in 1..=max_m {
        nets.extend(structured_nets(field, m, MAX_S)?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(&[seed, 0x7a]));
    for i in 0..random_nets {
        let m = rng.gen_range(1..=max_m);
        let s = rng.gen_range(1..=MAX_S);
        nets.push((format!("random #{i} s={s} m={m}"), random_net(field, m, s, &mut rng)?));
    }
    let mut skipped = 0;
    for (name, g) in &nets {
        if !dual_scan_fits(field, g.m(), g.dim()) {
            skipped += 1;
            continue;
        }
        let (r, d) = (t_value_rank(g)?, t_value_dual(g)?);
        out.check(r == d, || format!("{name}: rank {r}, dual {d}"));
    }
    if skipped > 0 {
        out.notes.push(format!("{skipped} nets past the 2^24 dual scan skipped"));
    }
    Ok(out)
}

/// Scrambling L₁C₁, …, L_sC_s never changes t.
pub fn scrambling_preserves_t(field: PrimeField, max_m: usize, draws: u64, seed: u64) -> Result<CheckOutcome> {
    let max_m = check_max_m(max_m)?;
    let mut out = CheckOutcome::new("scrambling preserves the t-value");
    for m in 1..=max_m {
        for (name, g) in structured_nets(field, m, MAX_S)? {
            let t = t_value_rank(&g)?;
            for i in 0..draws {
                let scrambled = draw_scrambled_net(&g, m + 2, seed, i)?;
                let ts = t_value_rank(&scrambled.with_rows(m))?;
                out.check(ts == t, || format!("{name}, draw {i}: t {t} became {ts}"));
            }
        }
    }
    Ok(out)
}

/// For L over L_{c,c} and μ₁(k) = c: μ₁(Lᵀk) = c, and each k′ with μ₁(k′) = c
/// is hit by exactly |L| / ((b−1) b^{c−1}) matrices.
pub fn scrambling_probability(field: PrimeField, max_c: usize) -> Result<CheckOutcome> {
    let max_c = check_max_m(max_c)?;
    let b = field.order() as u64;
    let mut out = CheckOutcome::new("scrambling: mu1 invariance and exact conditional probability");
    for c in 1..=max_c {
        let all = enumerate_scrambles(field, c, c)?;
        let expected = all.len() as u64 / ((b - 1) * pow(b, c - 1));
        for k in pow(b, c - 1)..pow(b, c) {
            let kv = digits(k, b, c);
            let mut hits: HashMap<u64, u64> = HashMap::new();
            for l in &all {
                let ell = undigits(&l.matrix().transpose().mul_vec(&kv), b);
                *hits.entry(ell).or_default() += 1;
            }
            for (&ell, _) in hits.iter().filter(|(&ell, _)| mu1(ell, b) != c as u32) {
                out.check(false, || format!("c={c}, k={k}: L^T k = {ell} has mu1 {}", mu1(ell, b)));
            }
            for ell in pow(b, c - 1)..pow(b, c) {
                let n = hits.get(&ell).copied().unwrap_or(0);
                out.check(n == expected, || format!("c={c}, k={k}, k'={ell}: {n} of {} matrices, expected {expected}", all.len()));
            }
        }
    }
    Ok(out)
}

/// The three-case bound on the number of dual vectors with a given NRT
/// profile, and its looser single-term form.
pub fn gain_coefficient_bound(field: PrimeField, max_m: usize, random_nets: usize, seed: u64) -> Result<CheckOutcome> {
    let max_m = check_max_m(max_m)?;
    let b = field.order() as u64;
    let mut out = CheckOutcome::new("gain coefficients: three-case dual count bound");
    let subsets: [&[usize]; 3] = [&[0], &[1], &[0, 1]];
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(&[seed, 0x9c]));
    for m in 1..=max_m {
        if !dual_scan_fits(field, m, 2) {
            out.notes.push(format!("m={m} past the 2^24 dual scan skipped"));
            continue;
        }
        let mut nets: Vec<(String, GenMatrixSet)> =
            structured_nets(field, m, 2)?.into_iter().filter(|(_, g)| g.dim() == 2).collect();
        for i in 0..random_nets {
            nets.push((format!("random #{i} m={m}"), random_net(field, m, 2, &mut rng)?));
        }
        for (name, g) in &nets {
            let t_u: Vec<u32> = subsets.iter().map(|u| t_value_rank(&g.project(u)?)).collect::<Result<_>>()?;
            let mut counts: HashMap<(u32, u32), u64> = HashMap::new();
            for_each_dual_vector(g, |k| {
                *counts.entry((mu1(k[0], b), mu1(k[1], b))).or_default() += 1;
            })?;
            for (ui, u) in subsets.iter().enumerate() {
                let d = m as i64 - t_u[ui] as i64;
                let size = u.len() as i64;
                for c0 in 0..=m as u32 {
                    for c1 in 0..=m as u32 {
                        let profile = [c0, c1];
                        // the support of the profile must be exactly u
                        if (0..2).any(|j| (profile[j] > 0) != u.contains(&j)) {
                            continue;
                        }
                        let total = (c0 + c1) as i64;
                        let bound = if total <= d {
                            0.0
                        } else if total <= d + size {
                            ((b - 1) as f64).powi((total - d) as i32)
                        } else {
                            ((b - 1) as f64).powi(size as i32) * (b as f64).powi((total - d - size) as i32)
                        };
                        let loose = (b - 1) as f64 / b as f64 * (b as f64).powi((total - d) as i32);
                        let n = counts.get(&(c0, c1)).copied().unwrap_or(0);
                        out.check(n as f64 <= bound && bound <= loose * (1.0 + 1e-12), || {
                            format!("{name}, u={u:?}, c=({c0},{c1}), t_u={}: count {n}, bound {bound}, loose {loose}", t_u[ui])
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Calls `visit` on s-tuples of L_{w,n} scrambles: all of them when the
/// product space has at most `limit` elements, else `MC_DRAWS` uniform
/// samples. Returns whether the enumeration was exhaustive.
fn for_each_scramble_tuple(
    field: PrimeField,
    (w, n, s): (usize, usize, usize),
    limit: u64,
    seed: u64,
    mut visit: impl FnMut(&[LowerTriScramble]) -> Result<()>,
) -> Result<bool> {
    let size = scramble_count(field, w, n).and_then(|c| c.checked_pow(s as u32));
    if size.is_some_and(|t| t <= limit.min(MAX_ENUMERATION)) {
        let all = enumerate_scrambles(field, w, n)?;
        let mut idx = vec![0usize; s];
        let mut tuple: Vec<LowerTriScramble> = vec![all[0].clone(); s];
        loop {
            for (t, &i) in tuple.iter_mut().zip(&idx) {
                *t = all[i].clone();
            }
            visit(&tuple)?;
            let mut j = 0;
            while j < s {
                idx[j] += 1;
                if idx[j] < all.len() {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
            if j == s {
                return Ok(true);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(&[seed, w as u64, n as u64, s as u64]));
    for _ in 0..MC_DRAWS {
        let tuple = (0..s).map(|_| sample_scramble_with(field, w, n, &mut rng)).collect::<Result<Vec<_>>>()?;
        visit(&tuple)?;
    }
    Ok(false)
}

fn scrambled(base: &GenMatrixSet, tuple: &[LowerTriScramble]) -> Result<GenMatrixSet> {
    let mats = base.matrices().iter().zip(tuple).map(|(c, l)| apply_scramble(l, c)).collect::<Result<Vec<_>>>()?;
    GenMatrixSet::new(mats)
}

fn five_sigma(p: f64, n: u64) -> f64 {
    5.0 * (p.min(1.0) * (1.0 - p.min(1.0)) / n as f64).sqrt()
}

/// P(k ∈ scrambled dual) ≤ (b/(b−1))^{|u|−1} b^{−m+t_u} when every kⱼ < b^m.
pub fn scrambled_dual_bound(field: PrimeField, max_m: usize, seed: u64) -> Result<CheckOutcome> {
    let max_m = check_max_m(max_m)?;
    let b = field.order() as u64;
    let mut out = CheckOutcome::new("scrambled dual: probability bound for k_j < b^m");
    for m in 1..=max_m {
        for (name, g) in structured_nets(field, m, 2)? {
            let s = g.dim();
            if !dual_scan_fits(field, m, s) {
                continue;
            }
            let per = pow(b, m);
            let mut hits = vec![0u64; per.pow(s as u32) as usize];
            let mut draws = 0u64;
            let exhaustive = for_each_scramble_tuple(field, (m, m, s), MEMBERSHIP_BUDGET / per.pow(s as u32), seed, |tuple| {
                draws += 1;
                for_each_dual_vector(&scrambled(&g, tuple)?, |k| {
                    hits[k.iter().rev().fold(0, |acc, &x| acc * per + x) as usize] += 1;
                })
            })?;
            if !exhaustive {
                out.notes.push(format!("{name}: {draws} Monte Carlo draws, 5 sigma allowance"));
            }
            let mut t_cache: HashMap<Vec<usize>, u32> = HashMap::new();
            for (idx, &n) in hits.iter().enumerate().skip(1) {
                let k = split(idx as u64, per, s);
                let u: Vec<usize> = (0..s).filter(|&j| k[j] != 0).collect();
                let t_u = match t_cache.get(&u) {
                    Some(&t) => t,
                    None => {
                        let t = t_value_rank(&g.project(&u)?)?;
                        t_cache.insert(u.clone(), t);
                        t
                    }
                };
                let bound = (b as f64 / (b - 1) as f64).powi(u.len() as i32 - 1)
                    * (b as f64).powi(t_u as i32 - m as i32);
                let freq = n as f64 / draws as f64;
                let slack = if exhaustive { 1e-12 } else { five_sigma(bound, draws) };
                out.check(freq <= bound + slack, || format!("{name}, k={k:?}: frequency {freq}, bound {bound}"));
            }
        }
    }
    Ok(out)
}

/// Cᵀk⃗ for every k < `count`, encoded base b, together with the encoding of
/// its negation.
fn encoded_images(c: &FbMatrix, count: u64) -> (Vec<u64>, Vec<u64>) {
    let f = c.field();
    let b = f.order() as u64;
    let (mut img, mut neg) = (Vec::with_capacity(count as usize), Vec::with_capacity(count as usize));
    for k in 0..count {
        let kv = digits(k, b, c.rows());
        let v = c.transpose().mul_vec(&kv);
        img.push(undigits(&v, b));
        neg.push(undigits(&v.iter().map(|&x| f.neg(x)).collect::<Vec<_>>(), b));
    }
    (img, neg)
}

/// P(k ∈ scrambled dual) = 1/b^m exactly once some kⱼ ≥ b^m with Cⱼ
/// non-singular; scrambles have m + 1 rows so the high digit is seen. In two
/// dimensions the other coordinate runs over [0, b²).
pub fn scrambled_dual_exact(field: PrimeField, max_m: usize, seed: u64) -> Result<CheckOutcome> {
    let max_m = check_max_m(max_m)?;
    let b = field.order() as u64;
    let mut out = CheckOutcome::new("scrambled dual: exactly 1/b^m once some k_j >= b^m");
    for m in 1..=max_m {
        let (per, big) = (pow(b, m), pow(b, m + 1));
        for (name, g) in structured_nets(field, m, 2)? {
            let s = g.dim();
            let mut ks = std::collections::BTreeSet::new();
            for j in (0..s).filter(|&j| g.matrix(j).is_nonsingular()) {
                for hi in per..big {
                    if s == 1 {
                        ks.insert(vec![hi]);
                    }
                    for lo in (0..b * b).filter(|_| s == 2) {
                        ks.insert(if j == 0 { vec![hi, lo] } else { vec![lo, hi] });
                    }
                }
            }
            let ks: Vec<Vec<u64>> = ks.into_iter().collect();
            let mut hits = vec![0u64; ks.len()];
            let mut draws = 0u64;
            let limit = MEMBERSHIP_BUDGET / (ks.len() as u64 + big * s as u64);
            let exhaustive = for_each_scramble_tuple(field, (m + 1, m, s), limit, seed, |tuple| {
                draws += 1;
                let sg = scrambled(&g, tuple)?;
                let im: Vec<_> = sg.matrices().iter().map(|c| encoded_images(c, big)).collect();
                for (h, k) in hits.iter_mut().zip(&ks) {
                    let member = match k[..] {
                        [k0] => im[0].0[k0 as usize] == 0,
                        [k0, k1] => im[0].0[k0 as usize] == im[1].1[k1 as usize],
                        _ => unreachable!(),
                    };
                    *h += member as u64;
                }
                Ok(())
            })?;
            let target = 1.0 / per as f64;
            if !exhaustive {
                out.notes.push(format!("{name}: {draws} Monte Carlo draws, 5 sigma allowance"));
            }
            for (k, &n) in ks.iter().zip(&hits) {
                let ok = if exhaustive {
                    n * per == draws
                } else {
                    (n as f64 / draws as f64 - target).abs() <= five_sigma(target, draws)
                };
                out.check(ok, || format!("{name}, k={k:?}: {n} of {draws}, expected 1/{per}"));
            }
        }
    }
    Ok(out)
}

fn plr_sweep_fits(rules: usize, ks: u64) -> bool {
    (rules as u64).saturating_mul(ks) <= PLR_BUDGET
}

/// Over all (p, g) ∈ P_m × G_m²: P(k in the dual) ≤ 1/(b^m−1) for kⱼ < b^m,
/// with equality at k = (1, 1).
pub fn plr_dual_small(field: PrimeField, max_m: usize) -> Result<CheckOutcome> {
    let max_m = check_max_m(max_m)?;
    let b = field.order() as u64;
    let mut out = CheckOutcome::new("lattice dual: <= 1/(b^m-1) for k_j < b^m, equality at k=(1,1)");
    for m in 1..=max_m {
        let per = pow(b, m);
        let rules = enumerate_plr(field, m, 2, m)?;
        if !plr_sweep_fits(rules.len(), per * per) {
            out.notes.push(format!("m={m}: {} rules x {} vectors skipped", rules.len(), per * per));
            continue;
        }
        let bound = rules.len() as u64;
        for k in (1..per * per).map(|i| [i % per, i / per]) {
            let mut n = 0u64;
            for spec in &rules {
                n += plr_dual_member(&k, spec)? as u64;
            }
            // n / |rules| vs 1 / (b^m − 1), in integers
            let ok = if k == [1, 1] { n * (per - 1) == bound } else { n * (per - 1) <= bound };
            out.check(ok, || format!("m={m}, k={k:?}: {n} of {bound} rules"));
        }
    }
    Ok(out)
}

/// Over all (p, g) ∈ P_m × G_m²: P(k in the dual) ≤ 3μ₁(k)/(b^m−1) once some
/// kⱼ ≥ b^m, for kⱼ < b^{m+1}.
pub fn plr_dual_large(field: PrimeField, max_m: usize) -> Result<CheckOutcome> {
    let max_m = check_max_m(max_m)?;
    let b = field.order() as u64;
    let mut out = CheckOutcome::new("lattice dual: <= 3 mu1(k)/(b^m-1) once some k_j >= b^m");
    for m in 1..=max_m {
        let (per, top) = (pow(b, m), pow(b, m + 1));
        let rules = enumerate_plr(field, m, 2, m)?;
        if !plr_sweep_fits(rules.len(), top * top) {
            out.notes.push(format!("m={m}: {} rules x {} vectors skipped", rules.len(), top * top));
            continue;
        }
        for k in (0..top * top).map(|i| [i % top, i / top]).filter(|k| k[0] >= per || k[1] >= per) {
            let mut n = 0u64;
            for spec in &rules {
                n += plr_dual_member(&k, spec)? as u64;
            }
            let mu = (mu1(k[0], b) + mu1(k[1], b)) as u64;
            let ok = n * (per - 1) <= 3 * mu * rules.len() as u64;
            out.check(ok, || format!("m={m}, k={k:?}: {n} of {} rules, mu1 {mu}", rules.len()));
        }
    }
    Ok(out)
}

/// Every check, for nets over `field` with m ≤ `max_m` (capped at 4).
pub fn run_all(field: PrimeField, max_m: usize, seed: u64) -> Result<Vec<CheckOutcome>> {
    Ok(vec![
        t_value_methods_agree(field, max_m, RANDOM_NETS, seed)?,
        scrambling_preserves_t(field, max_m, SCRAMBLE_DRAWS, seed)?,
        scrambling_probability(field, max_m)?,
        gain_coefficient_bound(field, max_m, 10, seed)?,
        scrambled_dual_bound(field, max_m, seed)?,
        scrambled_dual_exact(field, max_m, seed)?,
        plr_dual_small(field, max_m)?,
        plr_dual_large(field, max_m)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digital_net::dual_member;

    #[test]
    fn conditional_probability_example() {
        // c = 3: each k′ ∈ [4, 8) is hit by |L_{3,3}| / 4 = 2 matrices
        let out = scrambling_probability(PrimeField::binary(), 3).unwrap();
        assert!(out.passed(), "{out}");
        assert_eq!(out.cases, 1 + 2 * 2 + 4 * 4);
    }

    #[test]
    fn k_one_is_never_in_a_scrambled_identity_dual() {
        let f2 = PrimeField::binary();
        let g = GenMatrixSet::new(vec![FbMatrix::identity(f2, 2)]).unwrap();
        let mut hits = 0;
        for_each_scramble_tuple(f2, (2, 2, 1), u64::MAX, 0, |t| {
            hits += dual_member(&scrambled(&g, t)?, &[1])? as u32;
            Ok(())
        })
        .unwrap();
        assert_eq!(hits, 0);
    }

    #[test]
    fn high_digit_gives_one_in_b_to_the_m() {
        let f2 = PrimeField::binary();
        let g = GenMatrixSet::new(vec![FbMatrix::identity(f2, 2)]).unwrap();
        let (mut hits, mut draws) = (0, 0);
        let exhaustive = for_each_scramble_tuple(f2, (3, 2, 1), u64::MAX, 0, |t| {
            draws += 1;
            hits += dual_member(&scrambled(&g, t)?, &[4])? as u32;
            Ok(())
        })
        .unwrap();
        assert!(exhaustive);
        assert_eq!((hits, draws), (2, 8));
    }

    #[test]
    fn lattice_pair_one_one() {
        let out = plr_dual_small(PrimeField::binary(), 2).unwrap();
        assert!(out.passed(), "{out}");
        let rules = enumerate_plr(PrimeField::binary(), 2, 2, 2).unwrap();
        assert_eq!(rules.len(), 9);
        let n = rules.iter().filter(|r| plr_dual_member(&[1, 1], r).unwrap()).count();
        assert_eq!(n, 3);
    }

    #[test]
    fn failures_are_reported() {
        let mut out = CheckOutcome::new("demo");
        assert!(!out.passed());
        out.check(true, || unreachable!());
        out.check(false, || "bad".into());
        assert!(!out.passed());
        assert_eq!(out.failures, vec!["bad".to_string()]);
        assert!(out.to_string().starts_with("FAIL demo (2 cases, 1 failed)"));
    }

    #[test]
    fn base_two_suite_passes() {
        for o in run_all(PrimeField::binary(), 3, 0).unwrap() {
            assert!(o.passed(), "{o}");
        }
    }
}
