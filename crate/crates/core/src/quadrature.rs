//! Gauss-Legendre rules and their tensor products over boxes.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

/// Nodes and weights of an `n`-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Roots of `P_n` by Newton iteration from the Chebyshev-like initial
    /// guess, weights `2 / ((1 - x^2) P_n'(x)^2)`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one point");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let half = n.div_ceil(2);
        for i in 0..half {
            let mut x = libm::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if libm::fabs(dx) < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped onto `[lo, hi]`.
    pub fn mapped(&self, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
        let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        (
            self.nodes.iter().map(|x| mid + half * x).collect(),
            self.weights.iter().map(|w| half * w).collect(),
        )
    }

    pub fn integrate(&self, lo: f64, hi: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let (x, w) = self.mapped(lo, hi);
        x.iter().zip(&w).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Composite rule over `panels` equal sub-intervals of `[lo, hi]`.
    pub fn integrate_composite(
        &self,
        lo: f64,
        hi: f64,
        panels: usize,
        mut f: impl FnMut(f64) -> f64,
    ) -> f64 {
        let width = (hi - lo) / panels as f64;
        (0..panels)
            .map(|j| {
                let a = lo + width * j as f64;
                let b = if j + 1 == panels { hi } else { a + width };
                self.integrate(a, b, &mut f)
            })
            .sum()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// Tensor-product Gauss-Legendre integral of `f` over the box spanned by
/// `intervals`, `points` nodes per axis. The closure receives one point with
/// `intervals.len()` coordinates; summation order is fixed.
pub fn tensor_integrate(
    intervals: &[(f64, f64)],
    points: usize,
    mut f: impl FnMut(&[f64]) -> f64,
) -> f64 {
    let rule = GaussLegendre::new(points);
    let mapped: Vec<(Vec<f64>, Vec<f64>)> =
        intervals.iter().map(|&(lo, hi)| rule.mapped(lo, hi)).collect();
    let d = intervals.len();
    if d == 0 {
        return f(&[]);
    }
    let mut index = vec![0usize; d];
    let mut x: Vec<f64> = mapped.iter().map(|(xs, _)| xs[0]).collect();
    let mut total = 0.0;
    loop {
        let w: f64 = (0..d).map(|i| mapped[i].1[index[i]]).product();
        total += w * f(&x);
        // odometer increment, last axis fastest
        let mut axis = d;
        loop {
            if axis == 0 {
                return total;
            }
            axis -= 1;
            index[axis] += 1;
            if index[axis] < points {
                x[axis] = mapped[axis].0[index[axis]];
                break;
            }
            index[axis] = 0;
            x[axis] = mapped[axis].0[0];
        }
    }
}
