//! Test integrands with known integrals, convergence sweeps and slope fits.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::digital_net::{generate_points, sobol_matrices, DirectionNumbers};
use crate::error::{invalid, Error, Result};
use crate::gf_poly::PrimeField;
use crate::median_qmc::{median_estimate, qmc_mean, RuleSpec};
use crate::scramble::derive_seed;

/// Smallest m used by `fit_slope`.
pub const FIT_MIN_M: usize = 6;
/// Errors below this are treated as the double-precision floor.
pub const FIT_ERROR_FLOOR: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TestFunction {
    /// √x
    F1,
    /// x²(ln x + 1/3)
    F2,
    /// x eˣ
    F3,
    /// Π_j [1 + e^{−⌈c⌉j}(x_j^c − 1/(1+c))], c > 0
    F4 { s: usize, c: f64 },
    /// exp(−Σ_j x_j / 2^{j^c}), c ≥ 0
    F5 { s: usize, c: f64 },
}

impl TestFunction {
    pub fn f4(s: usize, c: f64) -> Result<Self> {
        if s == 0 || !(c > 0.0 && c.is_finite()) {
            return Err(invalid(format!("f4 needs s ≥ 1 and c > 0 (s = {s}, c = {c})")));
        }
        Ok(Self::F4 { s, c })
    }

    pub fn f5(s: usize, c: f64) -> Result<Self> {
        if s == 0 || !(c >= 0.0 && c.is_finite()) {
            return Err(invalid(format!("f5 needs s ≥ 1 and c ≥ 0 (s = {s}, c = {c})")));
        }
        Ok(Self::F5 { s, c })
    }

    /// Builds a function from its id; `s` and `c` default to 20/5 and 1.
    pub fn from_parts(id: &str, s: Option<usize>, c: Option<f64>) -> Result<Self> {
        let one_dim = |f: Self| match s {
            Some(s) if s != 1 => Err(invalid(format!("{id} is one-dimensional, got s = {s}"))),
            _ => Ok(f),
        };
        match id {
            "f1" => one_dim(Self::F1),
            "f2" => one_dim(Self::F2),
            "f3" => one_dim(Self::F3),
            "f4" => Self::f4(s.unwrap_or(20), c.unwrap_or(1.0)),
            "f5" => Self::f5(s.unwrap_or(5), c.unwrap_or(1.0)),
            _ => Err(invalid(format!("unknown test function {id:?}"))),
        }
    }

    pub fn id(&self) -> &'static str {
        match self {
            Self::F1 => "f1",
            Self::F2 => "f2",
            Self::F3 => "f3",
            Self::F4 { .. } => "f4",
            Self::F5 { .. } => "f5",
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            Self::F4 { s, .. } | Self::F5 { s, .. } => s,
            _ => 1,
        }
    }

    pub fn param(&self) -> Option<f64> {
        match *self {
            Self::F4 { c, .. } | Self::F5 { c, .. } => Some(c),
            _ => None,
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match *self {
            Self::F1 => x[0].sqrt(),
            Self::F2 => {
                let t = x[0];
                if t == 0.0 {
                    0.0
                } else {
                    t * t * (t.ln() + 1.0 / 3.0)
                }
            }
            Self::F3 => x[0] * x[0].exp(),
            Self::F4 { s, c } => {
                let k = c.ceil();
                let mean = 1.0 / (1.0 + c);
                (1..=s).map(|j| 1.0 + (-k * j as f64).exp() * (x[j - 1].powf(c) - mean)).product()
            }
            Self::F5 { s, c } => {
                let e: f64 = (1..=s).map(|j| x[j - 1] * (-(j as f64).powf(c)).exp2()).sum();
                (-e).exp()
            }
        }
    }

    pub fn exact_integral(&self) -> f64 {
        match *self {
            Self::F1 => 2.0 / 3.0,
            Self::F2 => 0.0,
            Self::F3 | Self::F4 { .. } => 1.0,
            Self::F5 { s, c } => (1..=s)
                .map(|j| {
                    let t = (-(j as f64).powf(c)).exp2();
                    if t == 0.0 {
                        1.0
                    } else {
                        -(-t).exp_m1() / t
                    }
                })
                .product(),
        }
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.param() {
            Some(c) => write!(f, "{}(s={}, c={c})", self.id(), self.dim()),
            None => f.write_str(self.id()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RuleKind {
    /// The first b^m Sobol' points, no randomization.
    Sobol,
    /// Median of r linearly scrambled Sobol' nets.
    MedianSobol,
    /// Median of r random polynomial lattice rules.
    MedianPlr,
}

impl RuleKind {
    pub fn id(&self) -> &'static str {
        match self {
            Self::Sobol => "sobol",
            Self::MedianSobol => "median-sobol",
            Self::MedianPlr => "median-plr",
        }
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for RuleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sobol" => Ok(Self::Sobol),
            "median-sobol" | "median-scrambled-sobol" => Ok(Self::MedianSobol),
            "median-plr" => Ok(Self::MedianPlr),
            _ => Err(invalid(format!("unknown rule {s:?}"))),
        }
    }
}

/// Everything a sweep needs besides the integrand and the m values.
#[derive(Clone, Debug)]
pub struct ConvergenceSetup<'a> {
    pub rule: RuleKind,
    /// Base for lattice rules; Sobol' rules are always binary.
    pub b: u32,
    pub r: u32,
    pub w: usize,
    pub seed: u64,
    pub dirs: &'a DirectionNumbers,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRecord {
    pub rule: RuleKind,
    pub function: &'static str,
    pub c: Option<f64>,
    pub s: usize,
    pub b: u32,
    pub m: usize,
    pub n: u64,
    pub r: u32,
    pub w: usize,
    pub seed: u64,
    pub abs_error: f64,
    pub replicate_errors: Vec<f64>,
}

/// One record per m, computed in parallel.
pub fn run_convergence(
    setup: &ConvergenceSetup<'_>,
    tf: &TestFunction,
    ms: &[usize],
) -> Result<Vec<ConvergenceRecord>> {
    if ms.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("m values must be strictly ascending"));
    }
    ms.par_iter().map(|&m| convergence_point(setup, tf, m)).collect()
}

fn convergence_point(setup: &ConvergenceSetup<'_>, tf: &TestFunction, m: usize) -> Result<ConvergenceRecord> {
    let s = tf.dim();
    let exact = tf.exact_integral();
    let f = |x: &[f64]| tf.eval(x);
    let seed = derive_seed(&[setup.seed, m as u64]);
    let (b, r, w, value, replicate_errors) = match setup.rule {
        RuleKind::Sobol => {
            let p = generate_points(&sobol_matrices(s, m, setup.dirs)?)?;
            let v = qmc_mean(&p, &f)?;
            (2, 1, m, v, vec![(v - exact).abs()])
        }
        RuleKind::MedianSobol | RuleKind::MedianPlr => {
            let rule = if setup.rule == RuleKind::MedianSobol {
                RuleSpec::scrambled_net(sobol_matrices(s, m, setup.dirs)?, setup.w, setup.r, seed)?
            } else {
                RuleSpec::plr(PrimeField::new(setup.b)?, m, s, setup.w, setup.r, seed)?
            };
            let est = median_estimate(&rule, &f)?;
            let errs = est.replicate_values.iter().map(|v| (v - exact).abs()).collect();
            (rule.field().order(), setup.r, setup.w, est.value, errs)
        }
    };
    let n = (b as u64)
        .checked_pow(m as u32)
        .ok_or_else(|| Error::TooLarge(format!("{b}^{m} points")))?;
    Ok(ConvergenceRecord {
        rule: setup.rule,
        function: tf.id(),
        c: tf.param(),
        s,
        b,
        m,
        n,
        r,
        w,
        seed: setup.seed,
        abs_error: (value - exact).abs(),
        replicate_errors,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlopeFit {
    /// Least-squares slope of log₂(error) against m.
    pub slope: f64,
    pub intercept: f64,
    pub used: usize,
    /// Records skipped for m < `FIT_MIN_M` or error below `FIT_ERROR_FLOOR`.
    pub dropped: usize,
}

pub fn fit_slope(records: &[ConvergenceRecord]) -> Result<SlopeFit> {
    let pts: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.m >= FIT_MIN_M && r.abs_error >= FIT_ERROR_FLOOR)
        .map(|r| (r.m as f64, r.abs_error.log2()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::FitRefused(format!(
            "{} usable records (need m ≥ {FIT_MIN_M} and error ≥ {FIT_ERROR_FLOOR:e})",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Ok(SlopeFit { slope, intercept: my - slope * mx, used: pts.len(), dropped: records.len() - pts.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn evaluation_examples() {
        assert_eq!(TestFunction::F3.eval(&[1.0]), E);
        assert_eq!(TestFunction::F2.eval(&[0.0]), 0.0);
        for c in [0.5, 1.5, 2.5] {
            let f = TestFunction::f4(20, c).unwrap();
            let x = vec![(1.0 / (1.0 + c)).powf(1.0 / c); 20];
            assert!((f.eval(&x) - 1.0).abs() < 1e-15);
        }
        let f5 = TestFunction::f5(3, 0.0).unwrap();
        assert!((f5.eval(&[1.0, 1.0, 1.0]) - (-1.5f64).exp()).abs() < 1e-15);
    }

    /// Composite Simpson rule with n (even) intervals.
    fn simpson(f: impl Fn(f64) -> f64, n: usize) -> f64 {
        let h = 1.0 / n as f64;
        let inner: f64 = (1..n).map(|i| f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 }).sum();
        (f(0.0) + f(1.0) + inner) * h / 3.0
    }

    #[test]
    fn integrals_match_quadrature() {
        assert!(simpson(|x| TestFunction::F2.eval(&[x]), 1 << 16).abs() < 1e-9);
        assert!((simpson(|x| x * x.exp(), 1 << 10) - 1.0).abs() < 1e-12);
        for c in [0.0, 1.0, 2.0] {
            let s = 5;
            let by_coordinate: f64 = (1..=s)
                .map(|j| {
                    let t = (-(j as f64).powf(c)).exp2();
                    simpson(|x| (-x * t).exp(), 1_000_000)
                })
                .product();
            let exact = TestFunction::f5(s, c).unwrap().exact_integral();
            assert!((exact - by_coordinate).abs() < 1e-12, "c = {c}");
        }
        assert_eq!(TestFunction::f4(7, 1.3).unwrap().exact_integral(), 1.0);
    }

    #[test]
    fn parsing() {
        assert_eq!(TestFunction::from_parts("f4", None, None).unwrap().dim(), 20);
        assert_eq!(TestFunction::from_parts("f5", None, Some(0.0)).unwrap().dim(), 5);
        assert!(TestFunction::from_parts("f1", Some(2), None).is_err());
        assert!(TestFunction::from_parts("f6", None, None).is_err());
        assert!(TestFunction::f4(3, 0.0).is_err());
        assert_eq!("median-plr".parse::<RuleKind>().unwrap(), RuleKind::MedianPlr);
    }

    fn record(m: usize, err: f64) -> ConvergenceRecord {
        ConvergenceRecord {
            rule: RuleKind::Sobol,
            function: "f1",
            c: None,
            s: 1,
            b: 2,
            m,
            n: 1 << m,
            r: 1,
            w: m,
            seed: 0,
            abs_error: err,
            replicate_errors: vec![err],
        }
    }

    #[test]
    fn slope_fit() {
        let recs: Vec<_> = (4..=12).map(|m| record(m, 3.0 * 2f64.powi(-2 * m as i32))).collect();
        let fit = fit_slope(&recs).unwrap();
        assert!((fit.slope + 2.0).abs() < 1e-12);
        assert_eq!((fit.used, fit.dropped), (7, 2));
        let zeros: Vec<_> = (6..=10).map(|m| record(m, 0.0)).collect();
        assert!(matches!(fit_slope(&zeros), Err(Error::FitRefused(_))));
    }

    #[test]
    fn plain_sobol_on_sqrt() {
        let dirs = DirectionNumbers::bundled();
        let setup = ConvergenceSetup { rule: RuleKind::Sobol, b: 2, r: 1, w: 52, seed: 0, dirs };
        let recs = run_convergence(&setup, &TestFunction::F1, &(6..=16).collect::<Vec<_>>()).unwrap();
        let slope = fit_slope(&recs).unwrap().slope;
        assert!((-1.3..=-0.8).contains(&slope), "{slope}");
        assert!(recs.iter().all(|r| r.n == 1 << r.m));
    }

    #[test]
    fn median_error_lies_between_replicates() {
        let dirs = DirectionNumbers::bundled();
        let setup = ConvergenceSetup { rule: RuleKind::MedianSobol, b: 2, r: 3, w: 52, seed: 1, dirs };
        let f = TestFunction::f5(2, 0.0).unwrap();
        let recs = run_convergence(&setup, &f, &[6, 7, 8]).unwrap();
        for r in &recs {
            let lo = r.replicate_errors.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = r.replicate_errors.iter().cloned().fold(0.0, f64::max);
            assert!(lo <= r.abs_error && r.abs_error <= hi);
        }
        assert!(run_convergence(&setup, &f, &[7, 6]).is_err());
    }
}
