//! Scalar special functions of the contour formulas.
//!
//! Everything is built on one square root
//!
//! ```text
//! sqrt(w^2 + 2c) = exp( log(w + i sqrt(2c))/2 + log(w - i sqrt(2c))/2 )
//! ```
//!
//! with logarithm arguments in `(-pi/2, 3pi/2)`, so the effective cut is the
//! segment `i[-sqrt(2c), sqrt(2c)]`. `G(1/w)`-type functions inherit the
//! complementary cuts `i(-inf, -1/sqrt(2c)]` and `i[1/sqrt(2c), inf)`.
//! `G(1/w)` is always the same square root evaluated at `1/w`, never `1/G(w)`.

use num_traits::Float;

use crate::error::{domain, Result};
use crate::C64;

/// Distance below which an argument counts as sitting on a cut.
pub const CUT_TOL: f64 = 1e-12;

#[inline]
pub fn c_of_a(a: f64) -> f64 {
    a / (1.0 + a * a)
}

/// `i^k` computed exactly from `k mod 4`.
pub fn i_pow(k: i64) -> C64 {
    match k.rem_euclid(4) {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

/// `(-1)^k`.
pub fn neg_pow(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Logarithm with argument in `(-pi/2, 3pi/2)` (cut on the negative
/// imaginary axis).
pub fn log_upper(z: C64) -> C64 {
    let mut arg = z.im.atan2(z.re);
    if arg <= -core::f64::consts::FRAC_PI_2 {
        arg += 2.0 * core::f64::consts::PI;
    }
    C64::new(z.norm().ln(), arg)
}

fn on_inner_cut(w: C64, c: f64) -> bool {
    w.re.abs() < CUT_TOL && w.im.abs() <= (2.0 * c).sqrt() + CUT_TOL
}

fn on_outer_cut(w: C64, c: f64) -> bool {
    w.re.abs() < CUT_TOL && w.im.abs() >= 1.0 / (2.0 * c).sqrt() - CUT_TOL
}

/// `sqrt(w^2 + 2c)` with the branch described in the module docs.
/// Errors when `w` is on the inner cut.
pub fn branch_sqrt(w: C64, c: f64) -> Result<C64> {
    if on_inner_cut(w, c) {
        return Err(domain("branch_sqrt: argument on the cut i[-sqrt(2c), sqrt(2c)]"));
    }
    Ok(branch_sqrt_unchecked(w, c))
}

pub fn branch_sqrt_unchecked(w: C64, c: f64) -> C64 {
    let s = C64::new(0.0, (2.0 * c).sqrt());
    (0.5 * (log_upper(w + s) + log_upper(w - s))).exp()
}

/// `G(w) = (w - sqrt(w^2 + 2c)) / sqrt(2c)`.
pub fn g_fun(w: C64, c: f64) -> Result<C64> {
    Ok((w - branch_sqrt(w, c)?) / (2.0 * c).sqrt())
}

pub fn g_fun_unchecked(w: C64, c: f64) -> C64 {
    (w - branch_sqrt_unchecked(w, c)) / (2.0 * c).sqrt()
}

/// `G(1/w)`; errors when `w` is on the outer cuts.
pub fn g_inv(w: C64, c: f64) -> Result<C64> {
    if on_outer_cut(w, c) {
        return Err(domain("G(1/w): argument on an outer cut"));
    }
    Ok(g_fun_unchecked(w.inv(), c))
}

/// `s(G(w)) = w sqrt(w^{-2} + 2c)`, computed stably as the principal root
/// of `1 + 2c w^2` (they agree away from the outer cuts, including w = 0).
pub fn s_of_g(w: C64, c: f64) -> C64 {
    (C64::new(1.0, 0.0) + 2.0 * c * w * w).sqrt()
}

/// `s(G(1/w)) = (1/w) sqrt(w^2 + 2c)`, the principal root of `1 + 2c/w^2`.
pub fn s_of_g_inv(w: C64, c: f64) -> C64 {
    (C64::new(1.0, 0.0) + 2.0 * c / (w * w)).sqrt()
}

/// `mu(u) = 1 - sqrt(1 + c^2 (u - 1/u)^2)` and `s(u) = 1 - mu(u)` with the
/// principal square root. On the evaluation sets used by the integrands the
/// principal branch is the analytic one; it satisfies
/// `s(G(w)) = w sqrt(w^{-2} + 2c)`.
pub fn mu_s(u: C64, c: f64) -> Result<(C64, C64)> {
    if u.norm() == 0.0 {
        return Err(domain("mu(u): u must be nonzero"));
    }
    let t = u - u.inv();
    let s = (C64::new(1.0, 0.0) + c * c * t * t).sqrt();
    Ok((C64::new(1.0, 0.0) - s, s))
}

/// `s(-iu) = sqrt(1 - c^2 (u + 1/u)^2)` (principal), analytic on the
/// annulus `a < |u| < 1/a` and positive at `u = i`.
pub fn s_minus_iu(u: C64, c: f64) -> C64 {
    let t = u + u.inv();
    (C64::new(1.0, 0.0) - c * c * t * t).sqrt()
}

/// One factor of the size-`m` exponential term of the finite-size integral:
/// `u^2 (2 - mu(-iu))^2 / (2c) = u^2 (1 + s(-iu))^2 / (2c)`.
pub fn lambda4_factor(u: C64, c: f64) -> C64 {
    let s = s_minus_iu(u, c);
    let t = C64::new(1.0, 0.0) + s;
    u * u * t * t / (2.0 * c)
}

/// Characteristic polynomial `P(z,w) = -2 - 2a^2 - a/w - aw - a/z - az`.
pub fn char_poly(z: C64, w: C64, a: f64) -> Result<C64> {
    if z.norm() == 0.0 || w.norm() == 0.0 {
        return Err(domain("P(z,w): arguments must be nonzero"));
    }
    Ok(C64::new(-2.0 - 2.0 * a * a, 0.0) - a * (w.inv() + w + z.inv() + z))
}

/// `c~(u,v) = 2(1+a^2) + a (u + 1/u)(v + 1/v)`; satisfies
/// `c~(sqrt(z/w), sqrt(wz)) = -P(z,w)`.
pub fn c_tilde(u: C64, v: C64, a: f64) -> C64 {
    C64::new(2.0 * (1.0 + a * a), 0.0) + a * (u + u.inv()) * (v + v.inv())
}

/// `f_{a,b}(u,v)`, the denominator of the y-coefficients.
pub fn f_ab(a: f64, b: f64, u: C64, v: C64) -> C64 {
    let p = 2.0 * (a * a + b * b) * u * v;
    let q = a * b * (u * u - C64::new(1.0, 0.0)) * (v * v - C64::new(1.0, 0.0));
    (p - q) * (p + q)
}

/// Numerators `y * f_{a,b}` of the four explicit coefficients with
/// epsilon = (0,0); gamma indexes the pair `(g1, g2)`.
fn yf00(g1: u8, g2: u8, a: f64, b: f64, u: C64, v: C64) -> C64 {
    let (a2, b2) = (a * a, b * b);
    let (u2, v2) = (u * u, v * v);
    let one = C64::new(1.0, 0.0);
    match (g1, g2) {
        (0, 0) => {
            let a3 = a2 * a;
            let a5 = a3 * a2;
            let a7 = a5 * a2;
            let b4 = b2 * b2;
            let b6 = b4 * b2;
            let u4 = u2 * u2;
            let v4 = v2 * v2;
            let t1 = 2.0 * a7 * u2 * v2;
            let t2 = a5 * b2 * (one + u4 + u2 * v2 - u4 * v2 + v4 - u2 * v4);
            let t3 = a3
                * b4
                * (one + 3.0 * u2 + 3.0 * v2 + 2.0 * u2 * v2 + u4 * v2 + u2 * v4 - u4 * v4);
            let t4 = a * b6 * (one + v2 + u2 + 3.0 * u2 * v2);
            (t1 - t2 - t3 - t4) / (4.0 * (a2 + b2) * (a2 + b2))
        }
        (0, 1) => {
            a * (b2 + a2 * u2) * (2.0 * a2 * v2 + b2 * (one + v2 - u2 + u2 * v2))
                / (4.0 * (a2 + b2))
        }
        (1, 0) => {
            a * (b2 + a2 * v2) * (2.0 * a2 * u2 + b2 * (one - v2 + u2 + u2 * v2))
                / (4.0 * (a2 + b2))
        }
        (1, 1) => a * (2.0 * a2 * u2 * v2 + b2 * (-one + v2 + u2 + u2 * v2)) / 4.0,
        _ => unreachable!(),
    }
}

/// `y^{e1,e2}_{g1,g2}(a,b,u,v) * f_{a,b}(u,v)`, with the poles of `y`
/// factored away. The epsilon reflections are
/// `y^{0,1}(a,b,u,v) = y^{0,0}(b,a,u,1/v)/v^2` and its mirror images,
/// which at the `yf` level pick up `v^2`, `u^2`, `u^2 v^2` respectively.
pub fn yf(e1: u8, e2: u8, g1: u8, g2: u8, a: f64, b: f64, u: C64, v: C64) -> C64 {
    match (e1, e2) {
        (0, 0) => yf00(g1, g2, a, b, u, v),
        (0, 1) => v * v * yf00(g1, g2, b, a, u, v.inv()),
        (1, 0) => u * u * yf00(g1, g2, b, a, u.inv(), v),
        (1, 1) => u * u * v * v * yf00(g1, g2, a, b, u.inv(), v.inv()),
        _ => unreachable!(),
    }
}

/// The rational coefficient `y^{e1,e2}_{g1,g2}(a,b,u,v)` itself.
pub fn y_coefficient(e1: u8, e2: u8, g1: u8, g2: u8, a: f64, b: f64, u: C64, v: C64) -> Result<C64> {
    let f = f_ab(a, b, u, v);
    if f.norm() < 1e-300 {
        return Err(domain("y coefficient evaluated at a pole of f_{a,b}"));
    }
    Ok(yf(e1, e2, g1, g2, a, b, u, v) / f)
}

/// `Y^{e1,e2}_{g1,g2}(u1,u2)` of the finite-size theorem, weights `(a, 1)`.
pub fn y_cap(e1: u8, e2: u8, g1: u8, g2: u8, a: f64, u1: C64, u2: C64) -> C64 {
    let c = c_of_a(a);
    let pref = (1.0 + a * a) * (1.0 + a * a)
        * neg_pow((e1 * e2 + g1 * (1 + e2) + g2 * (1 + e1)) as i64);
    let mi = C64::new(0.0, -1.0);
    let s1 = s_minus_iu(u1, c);
    let s2 = s_minus_iu(u2, c);
    let sfac = powb(s1, g1) * powb(s2, g2);
    let f = f_ab(a, 1.0, mi * u1, mi * u2);
    let yv = yf(e1, e2, g1, g2, a, 1.0, mi * u1, mi * u2) / f;
    pref * sfac * yv * powb(u1, e1) * powb(u2, e2)
}

#[inline]
fn powb(z: C64, e: u8) -> C64 {
    if e == 0 {
        C64::new(1.0, 0.0)
    } else {
        z
    }
}

/// `x^{e1,e2}_{g1,g2}(alpha, beta)` with the `(1 - w1^2 w2^2)/f` cancellation
/// already performed:
/// `x = yf(a,1,G(alpha),G(beta)) / (4 (1+a^2)^2 G(alpha) G(beta) B(alpha) B(beta))`
/// where `B(w) = sqrt(w^2+2c) sqrt(w^{-2}+2c)`.
pub fn x_coefficient(e1: u8, e2: u8, g1: u8, g2: u8, a: f64, alpha: C64, beta: C64) -> C64 {
    let c = c_of_a(a);
    let ga = g_fun_unchecked(alpha, c);
    let gb = g_fun_unchecked(beta, c);
    let prod = branch_sqrt_unchecked(alpha, c)
        * branch_sqrt_unchecked(alpha.inv(), c)
        * branch_sqrt_unchecked(beta, c)
        * branch_sqrt_unchecked(beta.inv(), c);
    let denom = 4.0 * (1.0 + a * a) * (1.0 + a * a) * ga * gb * prod;
    yf(e1, e2, g1, g2, a, 1.0, ga, gb) / denom
}

/// `Q^{e1,e2}_{g1,g2}(w1, w2)` of the saddle-point form.
pub fn q_coefficient(e1: u8, e2: u8, g1: u8, g2: u8, a: f64, w1: C64, w2: C64) -> C64 {
    let c = c_of_a(a);
    let sgn = neg_pow((e1 + e2 + e1 * e2 + g1 * (1 + e2) + g2 * (1 + e1)) as i64);
    let s1 = powb(s_of_g(w1, c), g1);
    let s2 = powb(s_of_g_inv(w2, c), g2);
    let ge = powb(g_fun_unchecked(w1, c), e1) * powb(g_fun_unchecked(w2.inv(), c), e2);
    sgn * s1 * s2 * ge * x_coefficient(e1, e2, g1, g2, a, w1, w2.inv())
}

/// `Z_{e1,e2}(w1,w2) = sum over gamma of Q`.
pub fn z_sum(e1: u8, e2: u8, a: f64, w1: C64, w2: C64) -> C64 {
    let mut z = C64::new(0.0, 0.0);
    for g1 in 0..2u8 {
        for g2 in 0..2u8 {
            z += q_coefficient(e1, e2, g1, g2, a, w1, w2);
        }
    }
    z
}

/// `V_{e1,e2}(w1,w2) = (Z(w1,w2) + (-1)^{e2+1} Z(w1,-w2)) / 2`.
pub fn v_sym(e1: u8, e2: u8, a: f64, w1: C64, w2: C64) -> C64 {
    0.5 * (z_sum(e1, e2, a, w1, w2) + neg_pow(e2 as i64 + 1) * z_sum(e1, e2, a, w1, -w2))
}

/// `h(e1, e2) = e1 XOR e2`.
pub fn h_eps(e1: u8, e2: u8) -> u8 {
    e1 ^ e2
}

/// Closed form of the diagonal `V_{e1,e2}(w, w)`.
pub fn v_diag(e1: u8, e2: u8, a: f64, w: C64) -> C64 {
    let c = c_of_a(a);
    let h = h_eps(e1, e2);
    let g = g_fun_unchecked(w, c);
    let gi = g_fun_unchecked(w.inv(), c);
    let num = neg_pow(1 + h as i64) * a.powi(e2 as i32) * powb(gi, h)
        + a.powi(1 - e2 as i32) * g * powb(gi, 1 - h);
    num / (2.0 * (1.0 + a * a) * branch_sqrt_unchecked(w, c) * branch_sqrt_unchecked(w.inv(), c))
}

/// Closed form of `F_s(w)` for weights `(a, 1)`:
/// with `w = i omega / sqrt(2c)`,
/// `F_s = i^{|s|} G(1/omega)^{|s|} / ((1+a^2) omega sqrt(omega^{-2}+2c))`.
pub fn f_closed(s: i64, w: C64, a: f64) -> Result<C64> {
    let c = c_of_a(a);
    // omega = -i sqrt(2c) w
    let omega = C64::new(0.0, -(2.0 * c).sqrt()) * w;
    if on_outer_cut(omega, c) {
        return Err(domain("F_s: w maps onto a cut"));
    }
    let k = s.unsigned_abs() as i32;
    // omega * sqrt(omega^{-2} + 2c) = s_of_g(omega)
    let denom = (1.0 + a * a) * s_of_g(omega, c);
    let g = if omega.norm() < 1e-8 {
        // G(1/omega) ~ -sqrt(c/2) omega near 0; only the s = 0 case can
        // contribute at machine scale, and there G^0 = 1.
        if k == 0 {
            C64::new(1.0, 0.0)
        } else {
            (-(c / 2.0).sqrt() * omega).powi(k)
        }
    } else {
        g_fun_unchecked(omega.inv(), c).powi(k)
    };
    Ok(i_pow(k as i64) * g / denom)
}

/// `F_s(nu(u))` with `nu(u) = (u + 1/u)/2`, the form used by the
/// finite-size integrand.
pub fn f_at_nu(s: i64, u: C64, a: f64) -> Result<C64> {
    f_closed(s, 0.5 * (u + u.inv()), a)
}

/// `log H_{x1,x2}(w) = 2m log w + (2m - x1/2) log G(w) - (2m - x2/2) log G(1/w)`.
/// All exponents are integers, so the branch of each log drops out once the
/// caller exponentiates a difference of two such logs.
pub fn h_log(x1: i64, x2: i64, m: i64, w: C64, c: f64) -> Result<C64> {
    if x1.rem_euclid(2) != 0 || x2.rem_euclid(2) != 0 {
        return Err(domain("H exponents x1, x2 must be even"));
    }
    let g = g_fun(w, c)?;
    let gi = g_inv(w, c)?;
    if g.norm() == 0.0 {
        return Err(domain("H: G(w) = 0 with finite exponent"));
    }
    Ok((2 * m) as f64 * log_upper(w) + (2 * m - x1 / 2) as f64 * log_upper(g)
        - (2 * m - x2 / 2) as f64 * log_upper(gi))
}

/// `H_{x1,x2}(w)` evaluated directly (small exponents only).
pub fn h_direct(x1: i64, x2: i64, m: i64, w: C64, c: f64) -> Result<C64> {
    let g = g_fun(w, c)?;
    let gi = g_inv(w, c)?;
    Ok(w.powi(2 * m as i32) * g.powi((2 * m - x1 / 2) as i32) / gi.powi((2 * m - x2 / 2) as i32))
}

/// The boundary coefficient tables.
///
/// `kind = Gas` returns the liquid-gas table, `kind = Solid` the
/// solid-liquid one. They satisfy `g = -2i V(i,i)` and `s = 2 V(1,1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryKind {
    Gas,
    Solid,
}

pub fn boundary_coefficient(kind: BoundaryKind, e1: u8, e2: u8, a: f64) -> C64 {
    let r = (a * a + 1.0).sqrt();
    match kind {
        BoundaryKind::Gas => match (e1, e2) {
            (0, 0) => C64::new(0.0, (r + a) / (1.0 - a)),
            (0, 1) => C64::new((r + a - 1.0) / ((2.0 * a).sqrt() * (1.0 - a)), 0.0),
            (1, 0) => C64::new(-(r + a - 1.0) / ((2.0 * a).sqrt() * (1.0 - a)), 0.0),
            _ => C64::new(0.0, (r - 1.0) / ((1.0 - a) * a)),
        },
        // The solid table is normalized so that s = 2 V(1,1) holds, matching
        // the gas normalization g = -2i V(i,i) and the saddle-point
        // derivation that doubles the two real critical points.
        BoundaryKind::Solid => match (e1, e2) {
            (0, 0) => C64::new((a - r) / (a + 1.0), 0.0),
            (0, 1) | (1, 0) => C64::new((r - a - 1.0) / ((2.0 * a).sqrt() * (a + 1.0)), 0.0),
            _ => C64::new((1.0 - r) / (a * (a + 1.0)), 0.0),
        },
    }
}
