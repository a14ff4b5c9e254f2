//! Grid-then-golden minimisation over the free parameters of a bound.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

pub const GRID_SPACING: f64 = 1e-3;
/// Open endpoints are moved inward by this much.
pub const EDGE_SHRINK: f64 = 1e-6;
pub const REFINE_TOL: f64 = 1e-8;

const INV_PHI: f64 = 0.618_033_988_749_894_9;
const MAX_ALTERNATIONS: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl Interval {
    pub fn open(lo: f64, hi: f64) -> Self {
        Self { lo, hi, lo_open: true, hi_open: true }
    }

    /// (lo, hi]
    pub fn left_open(lo: f64, hi: f64) -> Self {
        Self { lo, hi, lo_open: true, hi_open: false }
    }

    /// Endpoints actually searched.
    fn effective(&self) -> Option<(f64, f64)> {
        let a = if self.lo_open { self.lo + EDGE_SHRINK } else { self.lo };
        let b = if self.hi_open { self.hi - EDGE_SHRINK } else { self.hi };
        (a <= b).then_some((a, b))
    }

    fn grid(&self, spacing: f64) -> Vec<f64> {
        let Some((a, b)) = self.effective() else { return Vec::new() };
        let n = ((b - a) / spacing).ceil().max(1.0) as usize;
        (0..=n).map(|i| if i == n { b } else { a + (b - a) * i as f64 / n as f64 }).collect()
    }

    fn contains(&self, x: f64) -> bool {
        self.effective().is_some_and(|(a, b)| x >= a && x <= b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub y: Option<f64>,
    pub value: f64,
}

fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

fn golden(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (sanitize(f(c)), sanitize(f(d)));
    while b - a > REFINE_TOL {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = sanitize(f(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = sanitize(f(d));
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Minimises `f` over `iv`. Returns None when `f` is +∞ on every grid point.
pub fn minimize_1d<F>(f: F, iv: Interval, spacing: f64) -> Option<Minimum>
where
    F: Fn(f64) -> f64 + Sync,
{
    let grid = iv.grid(spacing);
    let values: Vec<f64> = grid.par_iter().map(|&x| sanitize(f(x))).collect();
    let (i, &v) = values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_finite())
        .min_by(|a, b| a.1.total_cmp(b.1))?;
    let lo = grid[i.saturating_sub(1)];
    let hi = grid[(i + 1).min(grid.len() - 1)];
    let (x, fx) = golden(&f, lo, hi);
    Some(if fx < v { Minimum { x, y: None, value: fx } } else { Minimum { x: grid[i], y: None, value: v } })
}

/// Minimises `f(x, y, best)` over x ∈ `xs`, y ∈ `ys(x)`.
///
/// `best` is the smallest value seen so far; `f` may return +∞ early for
/// points it can prove are no better. Each x row is built once via `row`.
pub fn minimize_2d<R, G, Y>(row: R, xs: Interval, ys: Y, spacing: f64) -> Option<Minimum>
where
    R: Fn(f64) -> G + Sync,
    G: Fn(f64, f64) -> f64,
    Y: Fn(f64) -> Interval + Sync,
{
    let best = AtomicU64::new(f64::INFINITY.to_bits());
    let current = || f64::from_bits(best.load(Ordering::Relaxed));
    let record = |v: f64| {
        let mut old = best.load(Ordering::Relaxed);
        while v < f64::from_bits(old) {
            match best.compare_exchange_weak(old, v.to_bits(), Ordering::Relaxed, Ordering::Relaxed) {
                Ok(_) => break,
                Err(o) => old = o,
            }
        }
    };
    let scan = |x: f64| {
        let g = row(x);
        let mut local: Option<(f64, f64, f64)> = None;
        for y in ys(x).grid(spacing) {
            let v = sanitize(g(y, current()));
            if v.is_finite() && local.map_or(true, |l| v < l.2) {
                local = Some((x, y, v));
                record(v);
            }
        }
        local
    };
    let xgrid = xs.grid(spacing);
    // rows near the top and middle first, so later rows can be pruned
    let n = xgrid.len();
    let seeds: Vec<usize> = if n > 2 { vec![n - 1, n / 2] } else { Vec::new() };
    let mut cells: Vec<(f64, f64, f64)> = seeds.iter().filter_map(|&i| scan(xgrid[i])).collect();
    cells.extend(
        xgrid
            .par_iter()
            .enumerate()
            .filter(|(i, _)| !seeds.contains(i))
            .filter_map(|(_, &x)| scan(x))
            .collect::<Vec<_>>(),
    );
    let (mut x, mut y, mut v) = cells
        .into_iter().min_by(|a, b| a.2.total_cmp(&b.2).then(a.0.total_cmp(&b.0)))?;

    let xstep = xgrid.get(1).map_or(spacing, |&x1| x1 - xgrid[0]);
    let (mut hx, mut hy) = (xstep, spacing);
    for _ in 0..MAX_ALTERNATIONS {
        let before = v;
        let yi = ys(x);
        if let Some((a, b)) = yi.effective() {
            let g = row(x);
            let (ny, nv) = golden(&|t| g(t, f64::INFINITY), (y - hy).max(a), (y + hy).min(b));
            if nv < v {
                y = ny;
                v = nv;
            }
        }
        if let Some((a, b)) = xs.effective() {
            let along = |s: f64| if ys(s).contains(y) { row(s)(y, f64::INFINITY) } else { f64::INFINITY };
            let (nx, nv) = golden(&along, (x - hx).max(a), (x + hx).min(b));
            if nv < v {
                x = nx;
                v = nv;
            }
        }
        hx *= 0.5;
        hy *= 0.5;
        if before - v <= 1e-14 * v.abs() {
            break;
        }
    }
    Some(Minimum { x, y: Some(y), value: v })
}
