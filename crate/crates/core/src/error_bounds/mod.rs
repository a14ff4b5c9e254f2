//! Probabilistic worst-case error bounds ε(δ) for randomized nets and
//! polynomial lattice rules, and the median amplification.
//!
//! Every evaluator returns the bound itself, including values above 1.
//! Infima are taken numerically; see [`search`].

mod constants;
pub mod search;

pub use constants::{
    a_aq, a_alpha_lambda, a_inf_lambda, c_alpha, constants, gamma, ln_c_series, ln_one_plus_a_inf,
    phi, phi_inv, BoundConstants, Series, VolumeGrowth, C_ALPHA_READING, SERIES_MAX_TERMS,
    SERIES_RTOL,
};

use std::f64::consts::E;

use crate::error::{invalid, Error, Result};
use crate::gf_poly::PrimeField;
use crate::numeric::{log_add_exp, CompensatedSum};
use constants::{ln_phi, ln_phi_inv};
use search::{minimize_1d, minimize_2d, Interval, Minimum, GRID_SPACING};

/// Largest s accepted for explicit weights.
pub const MAX_EXPLICIT_DIM: usize = 20;
/// Grid spacing for the (λ, τ) search of the infinite-smoothness lattice bound.
pub const PLR_INF_GRID_SPACING: f64 = 1e-2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Linearly scrambled digital nets.
    Net,
    /// Random polynomial lattice rules.
    Plr,
}

/// Subset weights γ_u with γ_∅ = 1.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightModel {
    /// γ_u = Π_{j∈u} γⱼ; the sequence may be longer than s.
    Product(Vec<f64>),
    /// γ_u indexed by the bitmask of u (bit j−1 for coordinate j).
    Explicit { s: usize, gamma: Vec<f64> },
}

impl WeightModel {
    pub fn product(gamma: Vec<f64>) -> Result<Self> {
        if let Some(g) = gamma.iter().find(|g| !(0.0..=1.0).contains(*g)) {
            return Err(invalid(format!("product weight {g} outside [0, 1]")));
        }
        Ok(Self::Product(gamma))
    }

    /// γⱼ = f(j) for j = 1..=s.
    pub fn product_fn(s: usize, f: impl Fn(usize) -> f64) -> Result<Self> {
        Self::product((1..=s).map(f).collect())
    }

    pub fn explicit(s: usize, gamma: Vec<f64>) -> Result<Self> {
        if s > MAX_EXPLICIT_DIM {
            return Err(Error::TooLarge(format!("explicit weights for s = {s} > {MAX_EXPLICIT_DIM}")));
        }
        if gamma.len() != 1 << s {
            return Err(Error::Shape(format!("{} weights for 2^{s} subsets", gamma.len())));
        }
        if gamma[0] != 1.0 {
            return Err(invalid("γ_∅ must be 1"));
        }
        if let Some(g) = gamma.iter().find(|g| !(0.0..=1.0).contains(*g)) {
            return Err(invalid(format!("weight {g} outside [0, 1]")));
        }
        Ok(Self::Explicit { s, gamma })
    }

    /// γ_u = f(u) with u listed as 1-based coordinates in increasing order.
    pub fn explicit_fn(s: usize, f: impl Fn(&[usize]) -> f64) -> Result<Self> {
        if s > MAX_EXPLICIT_DIM {
            return Err(Error::TooLarge(format!("explicit weights for s = {s} > {MAX_EXPLICIT_DIM}")));
        }
        let gamma = (0..1usize << s)
            .map(|mask| {
                if mask == 0 {
                    return 1.0;
                }
                let u: Vec<usize> = (0..s).filter(|j| mask >> j & 1 == 1).map(|j| j + 1).collect();
                f(&u)
            })
            .collect();
        Self::explicit(s, gamma)
    }

    /// Expands product weights over the first s coordinates.
    pub fn to_explicit(&self, s: usize) -> Result<Self> {
        match self {
            Self::Explicit { s: t, .. } if *t == s => Ok(self.clone()),
            Self::Explicit { s: t, .. } => Err(Error::Shape(format!("weights for s = {t}, not {s}"))),
            Self::Product(g) => {
                let g = product_prefix(g, s)?;
                Self::explicit_fn(s, |u| u.iter().map(|&j| g[j - 1]).product())
            }
        }
    }

    fn check_dim(&self, s: usize) -> Result<()> {
        match self {
            Self::Product(g) => product_prefix(g, s).map(|_| ()),
            Self::Explicit { s: t, .. } if *t == s => Ok(()),
            Self::Explicit { s: t, .. } => Err(Error::Shape(format!("weights for s = {t}, not {s}"))),
        }
    }
}

fn product_prefix(g: &[f64], s: usize) -> Result<&[f64]> {
    g.get(..s)
        .ok_or_else(|| Error::Shape(format!("{} product weights for s = {s}", g.len())))
}

/// Smoothness sequence u₁ ≥ u₂ ≥ ⋯ > 0 and its exponents aⱼ = −log_b(C_b uⱼ / m_b).
#[derive(Clone, Debug, PartialEq)]
pub struct SmoothWeightSeq {
    b: u32,
    u: Vec<f64>,
    a: Vec<f64>,
}

impl SmoothWeightSeq {
    pub fn from_u(b: u32, u: Vec<f64>) -> Result<Self> {
        let c = constants(b, None)?;
        if u.is_empty() || u.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
            return Err(invalid("smoothness weights must be positive and finite"));
        }
        if u.windows(2).any(|w| w[1] > w[0]) {
            return Err(invalid("smoothness weights must be non-increasing"));
        }
        let lnb = (b as f64).ln();
        let a = u.iter().map(|&x| -(c.c_b * x / c.m_b).ln() / lnb).collect();
        Ok(Self { b, u, a })
    }

    /// The sequence whose exponents are exactly `a`.
    pub fn from_a(b: u32, a: Vec<f64>) -> Result<Self> {
        let c = constants(b, None)?;
        if a.is_empty() || a.iter().any(|x| !x.is_finite()) || a.windows(2).any(|w| w[1] < w[0]) {
            return Err(invalid("exponents must be finite and non-decreasing"));
        }
        let u = a.iter().map(|&x| c.m_b / c.c_b * (b as f64).powf(-x)).collect();
        Ok(Self { b, u, a })
    }

    pub fn base(&self) -> u32 {
        self.b
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }
}

/// Which constant bounds the lattice-rule series for infinite smoothness.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Regime {
    /// aⱼ = a for all j.
    Unweighted { a: f64 },
    /// aⱼ ≥ a (j−1)^q.
    Weighted { a: f64, q: f64 },
}

/// Parameters shared by every bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundSetup {
    pub b: u32,
    pub m: u32,
    pub s: usize,
    pub delta: f64,
    pub family: Family,
}

impl BoundSetup {
    pub fn new(b: u32, m: u32, s: usize, delta: f64, family: Family) -> Result<Self> {
        PrimeField::new(b)?;
        if m == 0 || s == 0 {
            return Err(invalid("m and s must be positive"));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(invalid(format!("δ = {delta} outside (0, 1)")));
        }
        if !(b as f64).powi(m as i32).is_finite() {
            return Err(invalid(format!("b^m overflows for m = {m}")));
        }
        Ok(Self { b, m, s, delta, family })
    }

    fn points(&self) -> f64 {
        (self.b as f64).powi(self.m as i32)
    }

    fn lnb(&self) -> f64 {
        (self.b as f64).ln()
    }

    /// ln(j log_b(j + b)) for j = 1..=s.
    fn ln_tu_factors(&self) -> Vec<f64> {
        (1..=self.s)
            .map(|j| {
                let j = j as f64;
                (j * (j + self.b as f64).ln() / self.lnb()).ln()
            })
            .collect()
    }
}

/// A minimised bound with its minimiser.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bound {
    pub epsilon: f64,
    pub lambda: Option<f64>,
    pub tau: Option<f64>,
}

impl Bound {
    fn from_min(m: Option<Minimum>) -> Self {
        match m {
            Some(m) => Self { epsilon: m.value.exp(), lambda: Some(m.x), tau: m.y },
            None => Self { epsilon: f64::INFINITY, lambda: None, tau: None },
        }
    }

    pub fn is_vacuous(&self) -> bool {
        self.epsilon > 1.0
    }
}

/// Failure probability C(r, (r+1)/2) δ^{(r+1)/2} of the median of r draws.
pub fn amplify(delta: f64, r: u32) -> Result<f64> {
    check_amplify(delta, r)?;
    let k = r.div_ceil(2);
    let mut binom = 1.0;
    for i in 0..k {
        binom = binom * (r - i) as f64 / (i + 1) as f64;
    }
    Ok(binom * delta.powi(k as i32))
}

/// The looser (4δ)^{(r+1)/2}/4.
pub fn amplify_loose(delta: f64, r: u32) -> Result<f64> {
    check_amplify(delta, r)?;
    Ok((4.0 * delta).powi(r.div_ceil(2) as i32) / 4.0)
}

fn check_amplify(delta: f64, r: u32) -> Result<()> {
    if r % 2 == 0 {
        return Err(invalid(format!("r = {r} must be odd")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid(format!("δ = {delta} outside (0, 1)")));
    }
    Ok(())
}

/// ln(e^L − 1) for L ≥ 0.
fn ln_expm1(l: f64) -> f64 {
    if l > 30.0 {
        l + (-(-l).exp()).ln_1p()
    } else {
        l.exp_m1().ln()
    }
}

/// ln(1 + e^t).
fn softplus(t: f64) -> f64 {
    if t > 0.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

/// ln Σ_{u≠∅} γ_u^λ X^{|u|} Π_{j∈u} wⱼ, split so that X can vary cheaply.
enum SubsetSums {
    /// λ ln γⱼ + ln wⱼ
    Product(Vec<f64>),
    /// ln Σ_{|u|=k} γ_u^λ Π wⱼ for k = 0..=s (entry 0 unused)
    Grouped(Vec<f64>),
}

impl SubsetSums {
    fn new(w: &WeightModel, s: usize, lambda: f64, ln_w: &[f64]) -> Self {
        match w {
            WeightModel::Product(g) => {
                Self::Product(g[..s].iter().zip(ln_w).map(|(&g, &lw)| lambda * g.ln() + lw).collect())
            }
            WeightModel::Explicit { gamma, .. } => {
                let mut lw = vec![0.0; gamma.len()];
                let mut groups = vec![f64::NEG_INFINITY; s + 1];
                for mask in 1..gamma.len() {
                    lw[mask] = lw[mask & (mask - 1)] + ln_w[mask.trailing_zeros() as usize];
                    if gamma[mask] > 0.0 {
                        let k = mask.count_ones() as usize;
                        groups[k] = log_add_exp(groups[k], lambda * gamma[mask].ln() + lw[mask]);
                    }
                }
                Self::Grouped(groups)
            }
        }
    }

    fn ln_total(&self, ln_x: f64) -> f64 {
        match self {
            Self::Product(t) => {
                let l: f64 = t.iter().map(|&t| softplus(t + ln_x)).sum();
                if l == 0.0 {
                    f64::NEG_INFINITY
                } else {
                    ln_expm1(l)
                }
            }
            Self::Grouped(g) => g
                .iter()
                .enumerate()
                .skip(1)
                .fold(f64::NEG_INFINITY, |acc, (k, &gk)| log_add_exp(acc, gk + k as f64 * ln_x)),
        }
    }
}

/// First-order Sobolev space: the closed form, no free parameters.
pub fn eps_sob1(setup: &BoundSetup, weights: &WeightModel) -> Result<f64> {
    weights.check_dim(setup.s)?;
    let bb = setup.points();
    let (b, m) = (setup.b as f64, setup.m as f64);
    let ln_q = (-1.0 / bb).ln_1p();
    let z: Vec<f64> = (1..=setup.s)
        .map(|j| {
            let j = j as f64;
            m * b * (b + 1.0) / 3.0 * j * (j + b).ln() / b.ln()
        })
        .collect();
    let m_beta = m * (b * b - 1.0) / (3.0 * b);
    let bracket = match weights {
        WeightModel::Product(g) => {
            let g = &g[..setup.s];
            let ln_p: f64 = g.iter().map(|g| g.ln_1p()).sum();
            let p = ln_p.exp();
            // Σγ_u(1 − q^{|u|})
            let d = -g.iter().map(|g| (-g / (bb * (1.0 + g))).ln_1p()).sum::<f64>().exp_m1();
            let first = p * d;
            let size = p * g.iter().map(|g| g / (1.0 + g)).sum::<f64>() / bb;
            match setup.family {
                Family::Net => {
                    let tail = g.iter().zip(&z).map(|(g, z)| (g * (1.0 + z)).ln_1p()).sum::<f64>().exp_m1();
                    first - ln_p.exp_m1() / bb + size + tail / bb
                }
                Family::Plr => {
                    let growth = g.iter().map(|g| (g * m_beta / (1.0 + g)).ln_1p()).sum::<f64>().exp_m1();
                    first + size + p * growth / (bb - 1.0)
                }
            }
        }
        WeightModel::Explicit { gamma, .. } => {
            let mut ln_z = vec![0.0; gamma.len()];
            let mut acc = CompensatedSum::new();
            for mask in 1..gamma.len() {
                let j = mask.trailing_zeros() as usize;
                ln_z[mask] = ln_z[mask & (mask - 1)] + z[j].ln_1p();
                if gamma[mask] == 0.0 {
                    continue;
                }
                let k = mask.count_ones() as f64;
                let one_minus_qk = -(k * ln_q).exp_m1();
                let term = match setup.family {
                    Family::Net => one_minus_qk - 1.0 / bb + k / bb + ln_z[mask].exp() / bb,
                    Family::Plr => one_minus_qk + k / bb + (k * m_beta.ln_1p()).exp_m1() / (bb - 1.0),
                };
                acc.add(gamma[mask] * term);
            }
            acc.value()
        }
    };
    Ok(bracket / setup.delta)
}

fn check_alpha(alpha: u32) -> Result<()> {
    if alpha < 2 {
        return Err(invalid(format!("α = {alpha} must be at least 2")));
    }
    Ok(())
}

/// Row objective ln ε(λ, ·) for the order-α bound.
fn alpha_row<'a>(
    setup: &'a BoundSetup,
    alpha: u32,
    weights: &'a WeightModel,
    ln_c_alpha: f64,
    ln_w: &'a [f64],
    lambda: f64,
) -> impl Fn(f64) -> f64 + 'a {
    let sums = SubsetSums::new(weights, setup.s, lambda, ln_w);
    let (bf, lnb) = (setup.b as f64, setup.lnb());
    let bb = setup.points();
    move |tau: f64| {
        let ln = match setup.family {
            Family::Net => {
                let Ok(a) = a_alpha_lambda(setup.b, alpha, lambda) else { return f64::INFINITY };
                let ln_x = (bf * bf / (bf - 1.0)).ln() + lambda * ln_c_alpha + a.ln();
                sums.ln_total(ln_x) - setup.delta.ln() - setup.m as f64 * lnb
            }
            Family::Plr => {
                let Ok(a) = a_alpha_lambda(setup.b, alpha, lambda - tau) else { return f64::INFINITY };
                let ln_x = lambda * ln_c_alpha + a.ln();
                3f64.ln() - (bb - 1.0).ln() - setup.delta.ln() - (tau * E * lnb).ln() + sums.ln_total(ln_x)
            }
        };
        ln / lambda
    }
}

fn alpha_parts(setup: &BoundSetup, alpha: u32, weights: &WeightModel) -> Result<(f64, Vec<f64>)> {
    check_alpha(alpha)?;
    weights.check_dim(setup.s)?;
    let ln_w = match setup.family {
        Family::Net => setup.ln_tu_factors(),
        Family::Plr => vec![0.0; setup.s],
    };
    Ok((c_alpha(setup.b, alpha)?.ln(), ln_w))
}

/// Order-α Sobolev space at fixed λ (and τ for lattice rules).
///
/// The space's q index never enters.
pub fn eps_sob_alpha_at(
    setup: &BoundSetup,
    alpha: u32,
    weights: &WeightModel,
    lambda: f64,
    tau: Option<f64>,
) -> Result<f64> {
    let (ln_c, ln_w) = alpha_parts(setup, alpha, weights)?;
    let tau = match setup.family {
        Family::Net => 0.0,
        Family::Plr => {
            let t = tau.ok_or_else(|| invalid("lattice-rule bound needs τ"))?;
            if !(t > 0.0 && t < lambda - 1.0 / alpha as f64) {
                return Err(invalid(format!("τ = {t} outside (0, λ − 1/α)")));
            }
            t
        }
    };
    a_alpha_lambda(setup.b, alpha, lambda)?;
    let row = alpha_row(setup, alpha, weights, ln_c, &ln_w, lambda);
    let v = row(tau);
    Ok(v.exp())
}

/// Order-α Sobolev space, infimum over λ ∈ (1/α, 1] and, for lattice rules, τ ∈ (0, λ − 1/α).
pub fn eps_sob_alpha(setup: &BoundSetup, alpha: u32, weights: &WeightModel) -> Result<Bound> {
    let (ln_c, ln_w) = alpha_parts(setup, alpha, weights)?;
    let lambdas = Interval::left_open(1.0 / alpha as f64, 1.0);
    let min = match setup.family {
        Family::Net => minimize_1d(
            |l| alpha_row(setup, alpha, weights, ln_c, &ln_w, l)(0.0),
            lambdas,
            GRID_SPACING,
        ),
        Family::Plr => minimize_2d(
            |l| {
                let row = alpha_row(setup, alpha, weights, ln_c, &ln_w, l);
                move |t: f64, _best: f64| row(t)
            },
            lambdas,
            |l| Interval::open(0.0, l - 1.0 / alpha as f64),
            GRID_SPACING,
        ),
    };
    Ok(Bound::from_min(min))
}

fn check_regime(setup: &BoundSetup, seq: &SmoothWeightSeq, regime: Regime) -> Result<()> {
    if seq.base() != setup.b {
        return Err(Error::BaseMismatch { left: setup.b, right: seq.base() });
    }
    if seq.a().len() < setup.s {
        return Err(Error::Shape(format!("{} smoothness weights for s = {}", seq.a().len(), setup.s)));
    }
    if setup.family == Family::Net {
        return Ok(());
    }
    if setup.b == 2 {
        return Err(Error::Unsupported("the infinite-smoothness lattice-rule bound needs b ≥ 3".into()));
    }
    let a = &seq.a()[..setup.s];
    let tol = |x: f64| 1e-9 * x.abs().max(1.0);
    if a[0] < -tol(0.0) {
        return Err(invalid(format!("a₁ = {} is negative", a[0])));
    }
    match regime {
        Regime::Unweighted { a: c } => {
            if c < 0.0 || a.iter().any(|&x| (x - c).abs() > tol(c)) {
                return Err(invalid(format!("unweighted regime needs every aⱼ = {c} ≥ 0")));
            }
        }
        Regime::Weighted { a: c, q } => {
            a_aq(setup.b, c, q)?;
            if let Some(j) = (0..setup.s).find(|&j| a[j] < c * (j as f64).powf(q) - tol(a[j])) {
                return Err(invalid(format!("a_{} = {} is below a(j−1)^q", j + 1, a[j])));
            }
        }
    }
    Ok(())
}

fn inf_net_objective(setup: &BoundSetup, a: &[f64], ln_w: &[f64], lambda: f64) -> f64 {
    let Ok(series) = ln_one_plus_a_inf(setup.b, lambda) else { return f64::INFINITY };
    let ln_p = series.ln_or_inf();
    if !ln_p.is_finite() {
        return f64::INFINITY;
    }
    let (bf, lnb) = (setup.b as f64, setup.lnb());
    let ln_x = (bf / (bf - 1.0)).ln() + ln_expm1(ln_p);
    let l: f64 = a.iter().zip(ln_w).map(|(&aj, &lw)| softplus(ln_x - lambda * aj * lnb + lw)).sum();
    (ln_expm1(l) - setup.delta.ln() - setup.m as f64 * lnb) / lambda
}

fn growth(setup: &BoundSetup, regime: Regime) -> VolumeGrowth {
    match regime {
        Regime::Unweighted { .. } => VolumeGrowth::Unweighted { s: setup.s },
        Regime::Weighted { a, q } => VolumeGrowth::Weighted { a, q },
    }
}

/// ln Y − ln C: everything in φ's argument except the series.
fn inf_plr_offset(setup: &BoundSetup, tau: f64) -> f64 {
    3f64.ln() - (setup.points() - 1.0).ln() - setup.delta.ln() - (tau * E * setup.lnb()).ln() / tau
}

fn inf_plr_objective(setup: &BoundSetup, g: VolumeGrowth, lambda: f64, tau: f64, best: f64) -> f64 {
    let offset = inf_plr_offset(setup, tau);
    let abort = best.is_finite().then(|| ln_phi(best, lambda, setup.b) - offset);
    match ln_c_series(setup.b, g, lambda, tau, abort) {
        Ok(c) => ln_phi_inv(c.ln_or_inf() + offset, lambda, setup.b),
        Err(_) => f64::INFINITY,
    }
}

fn inf_ranges(setup: &BoundSetup, regime: Regime) -> (Interval, impl Fn(f64) -> Interval) {
    let lo = match regime {
        Regime::Unweighted { .. } => 0.5,
        Regime::Weighted { q, .. } => (q + 1.0) / (2.0 * q + 1.0),
    };
    let cap = 1.0 / setup.lnb();
    (Interval::open(lo, 1.0), move |l: f64| Interval::open(0.0, l.min(cap)))
}

/// Infinite smoothness at fixed λ (and τ for lattice rules).
pub fn eps_inf_at(
    setup: &BoundSetup,
    seq: &SmoothWeightSeq,
    regime: Regime,
    lambda: f64,
    tau: Option<f64>,
) -> Result<f64> {
    check_regime(setup, seq, regime)?;
    match setup.family {
        Family::Net => {
            if !(lambda > 0.0 && lambda <= 1.0) {
                return Err(invalid(format!("λ = {lambda} outside (0, 1]")));
            }
            let v = inf_net_objective(setup, &seq.a()[..setup.s], &setup.ln_tu_factors(), lambda);
            Ok(v.exp())
        }
        Family::Plr => {
            let t = tau.ok_or_else(|| invalid("lattice-rule bound needs τ"))?;
            let (ls, ts) = inf_ranges(setup, regime);
            if !(lambda > ls.lo && lambda < ls.hi) {
                return Err(invalid(format!("λ = {lambda} outside ({}, 1)", ls.lo)));
            }
            if !(t > 0.0 && t < ts(lambda).hi) {
                return Err(invalid(format!("τ = {t} outside (0, {})", ts(lambda).hi)));
            }
            let v = inf_plr_objective(setup, growth(setup, regime), lambda, t, f64::INFINITY);
            Ok(v.exp())
        }
    }
}

/// Infinite smoothness, infimum over λ (and τ for lattice rules).
///
/// The net bound ignores `regime`. Grid cells whose series hit the term cap
/// count as +∞.
pub fn eps_inf(setup: &BoundSetup, seq: &SmoothWeightSeq, regime: Regime) -> Result<Bound> {
    check_regime(setup, seq, regime)?;
    let min = match setup.family {
        Family::Net => {
            let (a, ln_w) = (&seq.a()[..setup.s], setup.ln_tu_factors());
            minimize_1d(
                |l| inf_net_objective(setup, a, &ln_w, l),
                Interval::left_open(0.0, 1.0),
                GRID_SPACING,
            )
        }
        Family::Plr => {
            let g = growth(setup, regime);
            let (ls, ts) = inf_ranges(setup, regime);
            minimize_2d(
                |l| move |t: f64, best: f64| inf_plr_objective(setup, g, l, t, best),
                ls,
                ts,
                PLR_INF_GRID_SPACING,
            )
        }
    };
    Ok(Bound::from_min(min))
}
