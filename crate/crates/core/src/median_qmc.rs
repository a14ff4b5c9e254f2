//! QMC means and the median of r independently randomized draws.

use rayon::prelude::*;

use crate::digital_net::{generate_points, GenMatrixSet, PointSet};
use crate::error::{invalid, Error, Result};
use crate::gf_poly::PrimeField;
use crate::numeric::CompensatedSum;
use crate::poly_lattice::{plr_gen_matrices, sample_plr};
use crate::scramble::draw_scrambled_net;

#[derive(Clone, Debug, PartialEq)]
pub enum RuleFamily {
    /// L₁C₁, …, L_sC_s with fresh scrambles per draw.
    ScrambledNet(GenMatrixSet),
    /// A uniformly random polynomial lattice rule per draw.
    Plr,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RuleSpec {
    family: RuleFamily,
    field: PrimeField,
    m: usize,
    s: usize,
    w: usize,
    r: u32,
    seed: u64,
}

fn check_r(r: u32) -> Result<()> {
    if r % 2 == 0 {
        return Err(invalid(format!("the number of draws r = {r} must be odd")));
    }
    Ok(())
}

impl RuleSpec {
    pub fn scrambled_net(base: GenMatrixSet, w: usize, r: u32, seed: u64) -> Result<Self> {
        check_r(r)?;
        if w < base.rows() {
            return Err(invalid(format!("w = {w} is below the {} rows of the base net", base.rows())));
        }
        let (field, m, s) = (base.field(), base.m(), base.dim());
        Ok(Self { family: RuleFamily::ScrambledNet(base), field, m, s, w, r, seed })
    }

    pub fn plr(field: PrimeField, m: usize, s: usize, w: usize, r: u32, seed: u64) -> Result<Self> {
        check_r(r)?;
        if m == 0 || s == 0 || w < m {
            return Err(invalid(format!("inconsistent lattice rule m = {m}, s = {s}, w = {w}")));
        }
        Ok(Self { family: RuleFamily::Plr, field, m, s, w, r, seed })
    }

    pub fn family(&self) -> &RuleFamily {
        &self.family
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.s
    }

    pub fn precision(&self) -> usize {
        self.w
    }

    pub fn draws(&self) -> u32 {
        self.r
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The point set of draw `replicate`.
    pub fn draw(&self, replicate: u64) -> Result<PointSet> {
        let g = match &self.family {
            RuleFamily::ScrambledNet(base) => draw_scrambled_net(base, self.w, self.seed, replicate)?,
            RuleFamily::Plr => {
                let spec = sample_plr(self.field, self.m, self.s, self.w, self.seed, replicate)?;
                plr_gen_matrices(&spec)?
            }
        };
        generate_points(&g)
    }
}

/// (1/N) Σ_k f(x_k), k ascending, compensated.
pub fn qmc_mean<F>(p: &PointSet, f: &F) -> Result<f64>
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    if p.is_empty() {
        return Err(invalid("empty point set"));
    }
    let mut buf = vec![0.0; p.dim()];
    let mut acc = CompensatedSum::new();
    for k in 0..p.len() {
        p.point_into(k, &mut buf);
        let v = f(&buf);
        if !v.is_finite() {
            return Err(Error::NonFiniteIntegrand { point: buf, value: v });
        }
        acc.add(v);
    }
    Ok(acc.value() / p.len() as f64)
}

/// Middle order statistic of an odd number of values.
pub fn median(values: &[f64]) -> Result<f64> {
    if values.len() % 2 == 0 {
        return Err(invalid(format!("median of {} values is not a single order statistic", values.len())));
    }
    if let Some(v) = values.iter().find(|v| v.is_nan()) {
        return Err(invalid(format!("cannot order {v}")));
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v[v.len() / 2])
}

#[derive(Clone, Debug, PartialEq)]
pub struct MedianEstimate {
    pub value: f64,
    pub replicate_values: Vec<f64>,
    pub rule: RuleSpec,
}

impl MedianEstimate {
    pub fn abs_error(&self, exact: f64) -> f64 {
        (self.value - exact).abs()
    }

    /// Median of the per-draw absolute errors; never below `abs_error`.
    pub fn median_replicate_error(&self, exact: f64) -> f64 {
        let errs: Vec<f64> = self.replicate_values.iter().map(|v| (v - exact).abs()).collect();
        median(&errs).expect("odd number of finite replicates")
    }
}

/// M_r(f): the median of r independent randomized QMC means.
pub fn median_estimate<F>(rule: &RuleSpec, f: &F) -> Result<MedianEstimate>
where
    F: Fn(&[f64]) -> f64 + Sync + ?Sized,
{
    let replicate_values = (0..rule.r as u64)
        .into_par_iter()
        .map(|i| qmc_mean(&rule.draw(i)?, f))
        .collect::<Result<Vec<_>>>()?;
    Ok(MedianEstimate { value: median(&replicate_values)?, replicate_values, rule: rule.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digital_net::{sobol_matrices, DirectionNumbers};
    use crate::scramble::DEFAULT_PRECISION;

    fn sobol(s: usize, m: usize) -> GenMatrixSet {
        sobol_matrices(s, m, DirectionNumbers::bundled()).unwrap()
    }

    #[test]
    fn mean_examples() {
        let f2 = PrimeField::binary();
        let p = PointSet::from_coords(f2, 4, &[vec![0.0], vec![0.5]]).unwrap();
        assert_eq!(qmc_mean(&p, &|x: &[f64]| x[0]).unwrap(), 0.25);
        let q = generate_points(&sobol(3, 6)).unwrap();
        assert_eq!(qmc_mean(&q, &|_: &[f64]| 0.7).unwrap(), 0.7);
        // left endpoints i/2^10 of √x
        let grid = generate_points(&sobol(1, 10)).unwrap();
        let err = (qmc_mean(&grid, &|x: &[f64]| x[0].sqrt()).unwrap() - 2.0 / 3.0).abs();
        assert!(err > 1e-4 && err < 1e-3, "{err}");
    }

    #[test]
    fn non_finite_values_report_the_point() {
        let f2 = PrimeField::binary();
        let p = PointSet::from_coords(f2, 4, &[vec![0.5], vec![0.0]]).unwrap();
        match qmc_mean(&p, &|x: &[f64]| 1.0 / x[0]) {
            Err(Error::NonFiniteIntegrand { point, value }) => {
                assert_eq!(point, vec![0.0]);
                assert_eq!(value, f64::INFINITY);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn median_order_statistic() {
        assert_eq!(median(&[1.0, 2.0, 100.0]).unwrap(), 2.0);
        assert_eq!(median(&[100.0, 1.0, 2.0]).unwrap(), 2.0);
        assert!(median(&[1.0, 2.0]).is_err());
        assert!(median(&[1.0, f64::NAN, 2.0]).is_err());
    }

    #[test]
    fn single_draw_equals_its_mean() {
        let rule = RuleSpec::scrambled_net(sobol(2, 6), DEFAULT_PRECISION, 1, 3).unwrap();
        let f = |x: &[f64]| x[0] * x[1];
        let est = median_estimate(&rule, &f).unwrap();
        assert_eq!(est.value, qmc_mean(&rule.draw(0).unwrap(), &f).unwrap());
        assert_eq!(est.replicate_values.len(), 1);
    }

    #[test]
    fn constants_are_exact_and_runs_repeat() {
        let f2 = PrimeField::binary();
        for rule in [
            RuleSpec::scrambled_net(sobol(3, 5), DEFAULT_PRECISION, 7, 11).unwrap(),
            RuleSpec::plr(f2, 5, 3, DEFAULT_PRECISION, 7, 11).unwrap(),
        ] {
            let one = median_estimate(&rule, &|_: &[f64]| 1.0).unwrap();
            assert_eq!(one.value, 1.0);
            let f = |x: &[f64]| (x[0] + x[1] * x[2]).exp();
            let a = median_estimate(&rule, &f).unwrap();
            let b = median_estimate(&rule, &f).unwrap();
            assert_eq!(a, b);
            let mut shuffled = a.replicate_values.clone();
            shuffled.reverse();
            assert_eq!(median(&shuffled).unwrap(), a.value);
        }
    }

    #[test]
    fn jensen_for_medians() {
        let rule = RuleSpec::scrambled_net(sobol(2, 8), DEFAULT_PRECISION, 15, 5).unwrap();
        let exact = (1f64.exp() - 1.0).powi(2);
        let est = median_estimate(&rule, &|x: &[f64]| (x[0] + x[1]).exp()).unwrap();
        assert!(est.abs_error(exact) <= est.median_replicate_error(exact));
    }

    #[test]
    fn rule_validation() {
        assert!(RuleSpec::scrambled_net(sobol(2, 6), DEFAULT_PRECISION, 4, 0).is_err());
        assert!(RuleSpec::scrambled_net(sobol(2, 6), 4, 3, 0).is_err());
        assert!(RuleSpec::plr(PrimeField::binary(), 6, 2, 5, 3, 0).is_err());
    }
}
