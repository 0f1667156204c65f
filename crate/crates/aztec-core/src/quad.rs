//! Contour quadrature: offset trapezoid rules on circles (exponentially
//! accurate for integrands analytic in an annulus) and Gauss-Legendre
//! panels for arcs. All rules double the node count until two successive
//! estimates agree to tolerance.
//!
//! Nodes are placed at half-offset angles `theta_k = 2 pi (k + 1/2) / N`,
//! which keeps them off the coordinate axes and hence away from the branch
//! cuts of the integrands used in this crate.

use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{domain, AccuracyError, Error, Result};
use crate::C64;

/// Rule parameters for the circle quadratures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Starting node count; doubled until convergence. At least 64.
    pub node_count: usize,
    /// Hard cap on nodes per axis.
    pub max_nodes: usize,
    /// Requested absolute-or-relative tolerance between refinements.
    pub tolerance: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            node_count: 64,
            max_nodes: 8192,
            tolerance: 1e-10,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tolerance(tol: f64) -> Self {
        QuadratureSpec {
            tolerance: tol,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.node_count < 64 {
            return Err(domain("node_count must be at least 64"));
        }
        if !self.node_count.is_power_of_two() {
            return Err(domain("node_count must be a power of two"));
        }
        Ok(())
    }
}

/// Convergent quadrature value with its error estimate.
#[derive(Debug, Clone, Copy)]
pub struct QuadValue {
    pub value: C64,
    pub error: f64,
    pub nodes: usize,
}

/// Mean of `f` over `N` half-offset nodes of the circle of radius `r`:
/// approximates `(1/2 pi i) contour-int f(u) du / u`.
pub fn circle_mean_n<F: FnMut(C64) -> C64>(n: usize, r: f64, mut f: F) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..n {
        let th = 2.0 * core::f64::consts::PI * (k as f64 + 0.5) / n as f64;
        acc += f(C64::from_polar(r, th));
    }
    acc / n as f64
}

/// Convenience unit-circle version used by tests.
pub fn unit_circle_mean<F: FnMut(C64) -> C64>(n: usize, f: F) -> C64 {
    circle_mean_n(n, 1.0, f)
}

/// `(1/2 pi i) contour-int f(u) du/u` on the circle of radius `r`,
/// node-doubling until converged.
pub fn circle_mean<F: FnMut(C64) -> C64>(r: f64, spec: &QuadratureSpec, mut f: F) -> Result<QuadValue> {
    spec.validate()?;
    let mut n = spec.node_count;
    let mut prev = circle_mean_n(n, r, &mut f);
    loop {
        n *= 2;
        let cur = circle_mean_n(n, r, &mut f);
        let err = (cur - prev).norm();
        if err <= spec.tolerance * (1.0 + cur.norm()) {
            return Ok(QuadValue {
                value: cur,
                error: err,
                nodes: n,
            });
        }
        if n >= spec.max_nodes {
            return Err(Error::Accuracy(AccuracyError {
                what: String::from("circle quadrature did not converge"),
                value_re: cur.re,
                value_im: cur.im,
                estimate: err,
                requested: spec.tolerance,
            }));
        }
        prev = cur;
    }
}

/// `(1/2 pi i) contour-int f(w) dw` on the circle of radius `r` (no `1/w`).
pub fn circle_int<F: FnMut(C64) -> C64>(r: f64, spec: &QuadratureSpec, mut f: F) -> Result<QuadValue> {
    // dw = i w dtheta, so this is circle_mean of f(w) * w.
    circle_mean(r, spec, |w| f(w) * w)
}

/// Double circle mean: `(1/2 pi i)^2 contour-ints f(u1, u2) du1/u1 du2/u2`
/// over `Gamma_{r1} x Gamma_{r2}` with joint node doubling.
pub fn torus_mean<F: FnMut(C64, C64) -> C64>(
    r1: f64,
    r2: f64,
    spec: &QuadratureSpec,
    mut f: F,
) -> Result<QuadValue> {
    spec.validate()?;
    let eval = |n: usize, f: &mut F| -> C64 {
        let nodes1: Vec<C64> = (0..n)
            .map(|k| C64::from_polar(r1, 2.0 * core::f64::consts::PI * (k as f64 + 0.5) / n as f64))
            .collect();
        let nodes2: Vec<C64> = (0..n)
            .map(|k| C64::from_polar(r2, 2.0 * core::f64::consts::PI * (k as f64 + 0.5) / n as f64))
            .collect();
        let mut acc = C64::new(0.0, 0.0);
        for &u1 in &nodes1 {
            let mut row = C64::new(0.0, 0.0);
            for &u2 in &nodes2 {
                row += f(u1, u2);
            }
            acc += row;
        }
        acc / (n * n) as f64
    };
    let mut n = spec.node_count;
    let mut prev = eval(n, &mut f);
    loop {
        n *= 2;
        let cur = eval(n, &mut f);
        let err = (cur - prev).norm();
        if err <= spec.tolerance * (1.0 + cur.norm()) {
            return Ok(QuadValue {
                value: cur,
                error: err,
                nodes: n,
            });
        }
        if n >= spec.max_nodes {
            return Err(Error::Accuracy(AccuracyError {
                what: String::from("torus quadrature did not converge"),
                value_re: cur.re,
                value_im: cur.im,
                estimate: err,
                requested: spec.tolerance,
            }));
        }
        prev = cur;
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on
/// the Legendre polynomial. Deterministic and accurate to machine epsilon.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = Vec::with_capacity(n);
    let mut w = Vec::with_capacity(n);
    for i in 0..n {
        // Tricomi initial guess
        let mut t = (core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            // evaluate P_n and P_n' by recurrence
            let (mut p0, mut p1) = (1.0f64, t);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (t * p1 - p0) / (t * t - 1.0);
            let dt = p1 / dp;
            t -= dt;
            if dt.abs() < 1e-15 {
                break;
            }
        }
        let (mut p0, mut p1) = (1.0f64, t);
        for k in 2..=n {
            let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
            p0 = p1;
            p1 = p2;
        }
        let dp = n as f64 * (t * p1 - p0) / (t * t - 1.0);
        x.push(t);
        w.push(2.0 / ((1.0 - t * t) * dp * dp));
    }
    (x, w)
}

/// Integral of a complex function over a real interval by composite
/// Gauss-Legendre panels with panel doubling.
pub fn real_interval_int<F: FnMut(f64) -> C64>(
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
    mut f: F,
) -> Result<QuadValue> {
    let (gx, gw) = gauss_legendre(32);
    let eval = |panels: usize, f: &mut F| -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        let h = (hi - lo) / panels as f64;
        for p in 0..panels {
            let a = lo + p as f64 * h;
            let mid = a + 0.5 * h;
            let half = 0.5 * h;
            for (t, wt) in gx.iter().zip(&gw) {
                acc += f(mid + half * t) * *wt * half;
            }
        }
        acc
    };
    let mut panels = 2usize;
    let mut prev = eval(panels, &mut f);
    loop {
        panels *= 2;
        let cur = eval(panels, &mut f);
        let err = (cur - prev).norm();
        if err <= spec.tolerance * (1.0 + cur.norm()) {
            return Ok(QuadValue {
                value: cur,
                error: err,
                nodes: panels * 32,
            });
        }
        if panels * 32 >= spec.max_nodes * 4 {
            return Err(Error::Accuracy(AccuracyError {
                what: String::from("interval quadrature did not converge"),
                value_re: cur.re,
                value_im: cur.im,
                estimate: err,
                requested: spec.tolerance,
            }));
        }
        prev = cur;
    }
}

/// `(1/2 pi i) int_arc f(w) dw/w` on the unit-circle arc
/// `theta in [th_lo, th_hi]`, positively oriented.
pub fn unit_arc_mean<F: FnMut(C64) -> C64>(
    th_lo: f64,
    th_hi: f64,
    spec: &QuadratureSpec,
    mut f: F,
) -> Result<QuadValue> {
    // w = e^{i th}: dw/w = i dth, so (1/2pi i) int f i dth = (1/2pi) int f dth.
    let v = real_interval_int(th_lo, th_hi, spec, |th| f(C64::from_polar(1.0, th)))?;
    Ok(QuadValue {
        value: v.value / (2.0 * core::f64::consts::PI),
        error: v.error / (2.0 * core::f64::consts::PI),
        nodes: v.nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{c_of_a, g_fun};

    const TWO_PI_I: C64 = C64::new(0.0, core::f64::consts::TAU);

    #[test]
    fn residue_of_inverse() {
        // contour-int dz/z = 2 pi i, i.e. mean of 1 is 1.
        let spec = QuadratureSpec::default();
        let v = circle_mean(1.0, &spec, |_| C64::new(1.0, 0.0)).unwrap();
        assert!((v.value - C64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn analytic_integrand_vanishes() {
        // contour-int z^3 dz on radius 2 = 0.
        let spec = QuadratureSpec::default();
        let v = circle_int(2.0, &spec, |z| z.powi(3)).unwrap();
        assert!((v.value * TWO_PI_I).norm() < 1e-10);
    }

    #[test]
    fn g_constant_term() {
        // The cut of G passes through the origin, so the radius-0.95 circle
        // lives in the outer annulus where G is analytic up to infinity with
        // G(inf) = 0; the mean over the circle is that constant term.
        let c = c_of_a(0.5);
        let spec = QuadratureSpec::default();
        let v = circle_mean(0.95, &spec, |w| g_fun(w, c).unwrap()).unwrap();
        assert!(v.value.norm() < 1e-12, "{}", v.value);
    }

    #[test]
    fn doubling_reports_failure() {
        // An unattainable tolerance must produce an accuracy error.
        let spec = QuadratureSpec {
            node_count: 64,
            max_nodes: 128,
            tolerance: 1e-30,
        };
        let r = circle_mean(1.0, &spec, |z| (z - C64::new(1.01, 0.0)).inv());
        assert!(matches!(r, Err(Error::Accuracy(_))));
    }

    #[test]
    fn gauss_legendre_polynomial_exactness() {
        let (x, w) = gauss_legendre(16);
        // integrates x^k exactly for k <= 31
        for k in [0usize, 1, 2, 7, 16, 31] {
            let got: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(k as i32)).sum();
            let want = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
            assert!((got - want).abs() < 1e-13, "k = {k}: {got} vs {want}");
        }
    }

    #[test]
    fn arc_mean_full_circle() {
        let spec = QuadratureSpec::default();
        let v = unit_arc_mean(0.0, core::f64::consts::TAU, &spec, |w| w.inv()).unwrap();
        // (1/2pi i) int w^{-1} dw/w = coefficient extraction -> 0
        assert!(v.value.norm() < 1e-12);
        let v = unit_arc_mean(0.0, core::f64::consts::TAU, &spec, |_| C64::new(1.0, 0.0)).unwrap();
        assert!((v.value - C64::new(1.0, 0.0)).norm() < 1e-12);
    }
}
