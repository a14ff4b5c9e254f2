//! Digit-position weights on non-negative integers.
//!
//! Writing k = κ₁ b^{c₁−1} + ⋯ + κ_v b^{c_v−1} with c₁ > ⋯ > c_v > 0 and
//! nonzero digits κᵢ, the NRT weight is c₁, the Dick weight μ_α sums the α
//! largest cᵢ and μ_{∞,a} sums cᵢ + a over all of them.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};

/// Nonzero base-b digits of k, most significant first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitProfile {
    pub k: u64,
    pub base: u64,
    /// c₁ > c₂ > ⋯ > c_v
    pub positions: Vec<u32>,
    /// κ₁, …, κ_v
    pub digits: Vec<u64>,
}

impl DigitProfile {
    pub fn new(k: u64, base: u64) -> Self {
        assert!(base >= 2, "base below 2");
        let mut positions = Vec::new();
        let mut digits = Vec::new();
        let mut q = k;
        let mut c = 1;
        while q > 0 {
            let d = q % base;
            if d != 0 {
                positions.push(c);
                digits.push(d);
            }
            q /= base;
            c += 1;
        }
        positions.reverse();
        digits.reverse();
        Self { k, base, positions, digits }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Σ κᵢ b^{cᵢ−1}.
    pub fn reconstruct(&self) -> u64 {
        self.positions
            .iter()
            .zip(&self.digits)
            .map(|(&c, &d)| d * self.base.pow(c - 1))
            .sum()
    }
}

/// μ₁(k): position of the leading base-b digit, 0 for k = 0.
#[inline]
pub fn mu1(k: u64, b: u64) -> u32 {
    let mut c = 0;
    let mut q = k;
    while q > 0 {
        q /= b;
        c += 1;
    }
    c
}

pub fn mu1_vec(k: &[u64], b: u64) -> u32 {
    k.iter().map(|&x| mu1(x, b)).sum()
}

/// μ_α(k) = c₁ + ⋯ + c_{min(α, v)}.
pub fn mu_alpha(k: u64, alpha: u32, b: u64) -> Result<u32> {
    if alpha < 2 {
        return Err(invalid(format!("μ_α needs α ≥ 2, got {alpha}; use mu1")));
    }
    Ok(DigitProfile::new(k, b).positions.iter().take(alpha as usize).sum())
}

/// μ_∞(k): sum of all nonzero digit positions.
pub fn mu_inf(k: u64, b: u64) -> u32 {
    DigitProfile::new(k, b).positions.iter().sum()
}

/// μ_{∞,a}(k) = Σᵢ (cᵢ + a).
pub fn mu_inf_a(k: u64, a: f64, b: u64) -> f64 {
    let p = DigitProfile::new(k, b);
    p.positions.iter().map(|&c| c as f64 + a).sum()
}

/// Σⱼ μ_{∞,aⱼ}(kⱼ).
pub fn mu_inf_a_vec(k: &[u64], a: &[f64], b: u64) -> Result<f64> {
    if k.len() != a.len() {
        return Err(Error::Shape(format!("{} indices against {} shifts", k.len(), a.len())));
    }
    Ok(k.iter().zip(a).map(|(&kj, &aj)| mu_inf_a(kj, aj, b)).sum())
}

/// r̃_b(k) = b^{−a} sin(π κ/b)^{−2} with a = μ₁(k) and κ the leading digit;
/// r̃_b(0) = 1.
pub fn rtilde(k: u64, b: u64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let a = mu1(k, b);
    let lead = k / b.pow(a - 1);
    let s = (PI * lead as f64 / b as f64).sin();
    (b as f64).powi(-(a as i32)) / (s * s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::CompensatedSum;

    #[test]
    fn examples() {
        assert_eq!(mu1(0, 2), 0);
        assert_eq!(mu1(6, 2), 3);
        assert_eq!(mu1_vec(&[6, 1, 0], 2), 4);
        assert_eq!(mu_alpha(6, 2, 2).unwrap(), 5);
        assert_eq!(mu_alpha(1, 2, 2).unwrap(), 1);
        assert_eq!(mu_alpha(7, 3, 2).unwrap(), 6);
        assert!(mu_alpha(7, 1, 2).is_err());
        assert_eq!(mu_inf_a(6, 1.0, 2), 7.0);
        assert_eq!(mu_inf_a(13, 0.0, 2), mu_inf(13, 2) as f64);
        assert_eq!(mu_inf_a(0, 2.5, 3), 0.0);
        assert_eq!(mu_inf_a_vec(&[6, 1], &[1.0, 0.5], 2).unwrap(), 8.5);
    }

    #[test]
    fn rtilde_examples() {
        assert_eq!(rtilde(0, 2), 1.0);
        assert_eq!(rtilde(5, 2), 0.125);
        assert!((rtilde(2, 3) - 4.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn rtilde_level_sums() {
        for b in [2u64, 3, 5] {
            for m in 1..=8u32 {
                let total = (1..b.pow(m)).map(|k| rtilde(k, b)).collect::<CompensatedSum>().value();
                let expected = m as f64 * (b * b - 1) as f64 / (3 * b) as f64;
                assert!((total - expected).abs() <= 1e-12 * expected, "b={b} m={m}");
            }
        }
        assert_eq!((1..4).map(|k| rtilde(k, 2)).sum::<f64>(), 1.0);
    }

    #[test]
    fn weights_are_ordered() {
        for k in 0..=(1u64 << 16) {
            let m1 = mu1(k, 2);
            let inf = mu_inf(k, 2);
            let mut prev = m1;
            for alpha in 2..=4 {
                let ma = mu_alpha(k, alpha, 2).unwrap();
                assert!(prev <= ma && ma <= inf);
                prev = ma;
            }
        }
    }

    #[test]
    fn profile_of_zero_is_empty() {
        let p = DigitProfile::new(0, 3);
        assert!(p.is_empty());
        assert_eq!(p.reconstruct(), 0);
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn profile_reconstructs(k in 0u64..(1 << 40), b in prop::sample::select(vec![2u64, 3, 5, 7])) {
                let p = DigitProfile::new(k, b);
                prop_assert_eq!(p.reconstruct(), k);
                prop_assert!(p.positions.windows(2).all(|w| w[0] > w[1]));
                prop_assert_eq!(p.positions.first().copied().unwrap_or(0), mu1(k, b));
            }
        }
    }
}
