//! Kasteleyn matrix, dense inversion oracle, and Kenyon correlations.
//!
//! Rows are blacks, columns are whites, both in the lexicographic order of
//! [`crate::lattice::enumerate_vertices`]. The nonzero pattern follows the
//! four cases
//!
//! ```text
//! K(x, x+e1) = a(1-j) + b j          x in B_j
//! K(x, x+e2) = (a j + b(1-j)) i
//! K(x, x-e1) = a j + b(1-j)
//! K(x, x-e2) = (a(1-j) + b j) i
//! ```

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{domain, AccuracyError, Error, Result};
use crate::lattice::{
    enumerate_vertices, is_edge, AztecParams, DimerEdge, LatticeVertex, E1, E2,
};
use crate::C64;

/// Dense complex matrix in row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<C64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> CMat {
        CMat {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: C64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows);
        let mut out = CMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += aik * other.get(k, j);
                }
            }
        }
        out
    }
}

/// The signed complex Kasteleyn matrix together with its vertex orderings.
#[derive(Debug, Clone)]
pub struct KasteleynMatrix {
    pub params: AztecParams,
    /// Weight pair actually used: normally `(a, 1)`, but the reflection
    /// identities need the swapped matrix `K_{b,a}` as well.
    pub weights: (f64, f64),
    pub whites: Vec<LatticeVertex>,
    pub blacks: Vec<LatticeVertex>,
    /// Entries indexed (black row, white column).
    pub mat: CMat,
}

/// Builds `K_{a,b}` for the size-`n` diamond with `(a, b) = weights`.
pub fn build_matrix_ab(params: &AztecParams, weights: (f64, f64)) -> KasteleynMatrix {
    let (whites, blacks) = enumerate_vertices(params.n).expect("n >= 1");
    let dim = whites.len();
    let mut widx = alloc::collections::BTreeMap::new();
    for (i, w) in whites.iter().enumerate() {
        widx.insert(*w, i);
    }
    let (a, b) = weights;
    let i_unit = C64::new(0.0, 1.0);
    let mut mat = CMat::zeros(dim, dim);
    for (r, &bl) in blacks.iter().enumerate() {
        let j = bl.class_index() as f64;
        let cases = [
            (E1, C64::new(a * (1.0 - j) + b * j, 0.0)),
            (E2, (a * j + b * (1.0 - j)) * i_unit),
            ((-E1.0, -E1.1), C64::new(a * j + b * (1.0 - j), 0.0)),
            ((-E2.0, -E2.1), (a * (1.0 - j) + b * j) * i_unit),
        ];
        for (d, v) in cases {
            let w = bl.shift(d);
            if let Some(&c) = widx.get(&w) {
                mat.set(r, c, v);
            }
        }
    }
    KasteleynMatrix {
        params: *params,
        weights,
        whites,
        blacks,
        mat,
    }
}

/// Builds the standard `K_{a,1}` matrix.
pub fn build_matrix(params: &AztecParams) -> KasteleynMatrix {
    build_matrix_ab(params, (params.a, params.b))
}

/// LU factorization with partial pivoting of a square complex matrix.
pub struct Lu {
    lu: CMat,
    piv: Vec<usize>,
    sign_flips: usize,
}

impl Lu {
    pub fn factor(m: &CMat) -> Result<Lu> {
        if m.rows != m.cols {
            return Err(domain("LU needs a square matrix"));
        }
        let n = m.rows;
        let mut lu = m.clone();
        let mut piv: Vec<usize> = (0..n).collect();
        let mut sign_flips = 0usize;
        for k in 0..n {
            // pivot search
            let mut p = k;
            let mut best = lu.get(k, k).norm();
            for r in k + 1..n {
                let v = lu.get(r, k).norm();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            if best == 0.0 {
                return Err(Error::Accuracy(AccuracyError {
                    what: String::from("LU factorization: exactly singular matrix"),
                    value_re: 0.0,
                    value_im: 0.0,
                    estimate: f64::infinity(),
                    requested: 0.0,
                }));
            }
            if p != k {
                for c in 0..n {
                    let t = lu.get(k, c);
                    lu.set(k, c, lu.get(p, c));
                    lu.set(p, c, t);
                }
                piv.swap(k, p);
                sign_flips += 1;
            }
            let inv = C64::new(1.0, 0.0) / lu.get(k, k);
            for r in k + 1..n {
                let f = lu.get(r, k) * inv;
                lu.set(r, k, f);
                if f != C64::new(0.0, 0.0) {
                    for c in k + 1..n {
                        let v = lu.get(r, c) - f * lu.get(k, c);
                        lu.set(r, c, v);
                    }
                }
            }
        }
        Ok(Lu {
            lu,
            piv,
            sign_flips,
        })
    }

    /// Rough condition estimate: ratio of extreme pivot magnitudes.
    pub fn condition_estimate(&self) -> f64 {
        let n = self.lu.rows;
        let mut lo = f64::infinity();
        let mut hi = 0.0f64;
        for k in 0..n {
            let d = self.lu.get(k, k).norm();
            lo = lo.min(d);
            hi = hi.max(d);
        }
        if lo == 0.0 {
            f64::infinity()
        } else {
            hi / lo
        }
    }

    /// log|det| and the phase of det.
    pub fn log_det(&self) -> (f64, C64) {
        let n = self.lu.rows;
        let mut logmod = 0.0f64;
        let mut phase = if self.sign_flips % 2 == 1 {
            C64::new(-1.0, 0.0)
        } else {
            C64::new(1.0, 0.0)
        };
        for k in 0..n {
            let d = self.lu.get(k, k);
            logmod += d.norm().ln();
            phase *= d / d.norm();
        }
        (logmod, phase)
    }

    /// Solves `A x = rhs` for a single right-hand side given as a slice.
    pub fn solve_vec(&self, rhs: &[C64]) -> Vec<C64> {
        let n = self.lu.rows;
        let mut x: Vec<C64> = self.piv.iter().map(|&p| rhs[p]).collect();
        for k in 0..n {
            for r in k + 1..n {
                let f = self.lu.get(r, k);
                if f != C64::new(0.0, 0.0) {
                    let t = x[k];
                    x[r] -= f * t;
                }
            }
        }
        for k in (0..n).rev() {
            x[k] /= self.lu.get(k, k);
            for r in 0..k {
                let f = self.lu.get(r, k);
                if f != C64::new(0.0, 0.0) {
                    let t = x[k];
                    x[r] -= f * t;
                }
            }
        }
        x
    }

    /// Full inverse.
    pub fn inverse(&self) -> CMat {
        let n = self.lu.rows;
        let mut out = CMat::zeros(n, n);
        let mut e = vec![C64::new(0.0, 0.0); n];
        for c in 0..n {
            e.fill(C64::new(0.0, 0.0));
            e[c] = C64::new(1.0, 0.0);
            let col = self.solve_vec(&e);
            for r in 0..n {
                out.set(r, c, col[r]);
            }
        }
        out
    }
}

/// Dense inverse indexed `(white row, black column)`, i.e. `Kinv(w, b)`.
pub struct InverseKasteleyn {
    pub k: KasteleynMatrix,
    /// `inv.get(i, j) = K^{-1}(white_i, black_j)`.
    pub inv: CMat,
    pub condition: f64,
}

/// Direct dense inversion; errors if the factorization looks too
/// ill-conditioned to deliver 1e-10 residuals.
pub fn invert_direct(k: &KasteleynMatrix) -> Result<InverseKasteleyn> {
    let lu = Lu::factor(&k.mat)?;
    let cond = lu.condition_estimate();
    if cond > 1e12 {
        return Err(Error::Accuracy(AccuracyError {
            what: alloc::format!("Kasteleyn inversion, condition estimate {cond:e}"),
            value_re: 0.0,
            value_im: 0.0,
            estimate: cond * f64::epsilon(),
            requested: 1e-10,
        }));
    }
    let inv = lu.inverse();
    Ok(InverseKasteleyn {
        k: k.clone(),
        inv,
        condition: cond,
    })
}

impl InverseKasteleyn {
    pub fn white_index(&self, w: LatticeVertex) -> Option<usize> {
        self.k.whites.binary_search(&w).ok()
    }

    pub fn black_index(&self, b: LatticeVertex) -> Option<usize> {
        self.k.blacks.binary_search(&b).ok()
    }

    /// `K^{-1}(w, b)`.
    pub fn entry(&self, w: LatticeVertex, b: LatticeVertex) -> Result<C64> {
        let wi = self
            .white_index(w)
            .ok_or_else(|| domain("white vertex outside graph"))?;
        let bi = self
            .black_index(b)
            .ok_or_else(|| domain("black vertex outside graph"))?;
        Ok(self.inv.get(wi, bi))
    }

    /// `K(b, w)`.
    pub fn kentry(&self, b: LatticeVertex, w: LatticeVertex) -> Result<C64> {
        let wi = self
            .white_index(w)
            .ok_or_else(|| domain("white vertex outside graph"))?;
        let bi = self
            .black_index(b)
            .ok_or_else(|| domain("black vertex outside graph"))?;
        Ok(self.k.mat.get(bi, wi))
    }
}

/// `|det K|`, the weighted tiling sum. Accumulated in log form and
/// exponentiated at the end.
pub fn partition_function(k: &KasteleynMatrix) -> Result<f64> {
    Ok(log_partition_function(k)?.exp())
}

/// `log |det K|`.
pub fn log_partition_function(k: &KasteleynMatrix) -> Result<f64> {
    let lu = Lu::factor(&k.mat)?;
    Ok(lu.log_det().0)
}

/// A set of distinct edges whose joint occupation probability is wanted.
#[derive(Debug, Clone)]
pub struct CorrelationQuery {
    pub edges: Vec<DimerEdge>,
}

impl CorrelationQuery {
    pub fn new(edges: Vec<DimerEdge>) -> Result<CorrelationQuery> {
        for (i, e) in edges.iter().enumerate() {
            for f in &edges[..i] {
                if e.black == f.black && e.white == f.white {
                    return Err(domain("correlation query edges must be distinct"));
                }
            }
        }
        Ok(CorrelationQuery { edges })
    }
}

/// Kenyon's local statistics: probability that all query edges are dimers,
/// `det [ K(b_i, w_i) K^{-1}(w_j, b_i) ]_{i,j}`.
pub fn kenyon_correlation(q: &CorrelationQuery, kinv: &InverseKasteleyn) -> Result<f64> {
    if q.edges.is_empty() {
        return Err(domain("correlation query must be nonempty"));
    }
    let n = q.edges.len();
    for e in &q.edges {
        if !is_edge(e.black, e.white, kinv.k.params.n) {
            return Err(domain("query edge not in graph"));
        }
    }
    let mut l = CMat::zeros(n, n);
    for i in 0..n {
        let kbw = kinv.kentry(q.edges[i].black, q.edges[i].white)?;
        for j in 0..n {
            let v = kbw * kinv.entry(q.edges[j].white, q.edges[i].black)?;
            l.set(i, j, v);
        }
    }
    let det = small_det(&l);
    if det.im.abs() > 1e-10 {
        return Err(Error::Accuracy(AccuracyError {
            what: String::from("Kenyon determinant has imaginary residue"),
            value_re: det.re,
            value_im: det.im,
            estimate: det.im.abs(),
            requested: 1e-10,
        }));
    }
    Ok(det.re)
}

fn small_det(m: &CMat) -> C64 {
    match Lu::factor(m) {
        Ok(lu) => {
            let (logmod, phase) = lu.log_det();
            phase * logmod.exp()
        }
        Err(_) => C64::new(0.0, 0.0),
    }
}

/// Covariance of two distinct dimers:
/// `P(both) - P(e1) P(e2) = -L(e1,e2) L(e2,e1)`.
pub fn dimer_covariance(
    e1: &DimerEdge,
    e2: &DimerEdge,
    kinv: &InverseKasteleyn,
) -> Result<f64> {
    if e1.black == e2.black && e1.white == e2.white {
        return Err(domain("covariance needs two distinct edges"));
    }
    let q = CorrelationQuery::new(vec![*e1, *e2])?;
    let joint = kenyon_correlation(&q, kinv)?;
    let p1 = kenyon_correlation(&CorrelationQuery::new(vec![*e1])?, kinv)?;
    let p2 = kenyon_correlation(&CorrelationQuery::new(vec![*e2])?, kinv)?;
    Ok(joint - p1 * p2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::classify_vertex;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn entries_follow_cases() {
        let params = AztecParams::new(1, 0.5).unwrap();
        let k = build_matrix(&params);
        // b in B0 with w = b + e1 gives 0.5
        let b = LatticeVertex(2, 3); // 2+3=5 -> B0
        assert_eq!(b.class_index(), 0);
        let w = b.shift(E1);
        let bi = k.blacks.binary_search(&b).unwrap();
        let wi = k.whites.binary_search(&w).unwrap();
        assert_eq!(k.mat.get(bi, wi), C64::new(0.5, 0.0));
        // b in B1 with w = b + e2 gives 0.5 i
        let b = LatticeVertex(4, 3); // 4+3=7 -> B1
        assert_eq!(b.class_index(), 1);
        let w = b.shift(E2);
        let bi = k.blacks.binary_search(&b).unwrap();
        let wi = k.whites.binary_search(&w).unwrap();
        assert_eq!(k.mat.get(bi, wi), C64::new(0.0, 0.5));
        // non-edge pair is zero
        let bi = k.blacks.binary_search(&LatticeVertex(0, 1)).unwrap();
        let wi = k.whites.binary_search(&LatticeVertex(5, 4)).unwrap();
        assert_eq!(k.mat.get(bi, wi), C64::new(0.0, 0.0));
    }

    #[test]
    fn inverse_residual() {
        let params = AztecParams::new(1, 0.5).unwrap();
        let k = build_matrix(&params);
        let inv = invert_direct(&k).unwrap();
        // K * Kinv = I: note Kinv rows are whites, K rows are blacks, so the
        // product K (black x white) * inv (white x black) is black x black.
        let prod = k.mat.mul(&inv.inv);
        for r in 0..prod.rows {
            for c in 0..prod.cols {
                let want = if r == c { 1.0 } else { 0.0 };
                let v = prod.get(r, c);
                assert!(
                    (v - C64::new(want, 0.0)).norm() < 1e-10,
                    "residual at ({r},{c}): {v}"
                );
            }
        }
    }

    #[test]
    fn partition_function_small() {
        // n = 1: two tilings, and all four edges border the center a-face,
        // so both tilings weigh a^2 and Z = 2 a^2.
        let params = AztecParams::with_size(1, 0.5).unwrap();
        let k = build_matrix(&params);
        let z = partition_function(&k).unwrap();
        assert!(close(z, 0.5, 1e-12), "z = {z}");
        // n = 2 at a ~ 1: 8 tilings of weight ~1. Use the raw builder with
        // both weights equal to 1 to check the classical count 2^{n(n+1)/2}.
        let params = AztecParams::with_size(2, 0.5).unwrap();
        let k = build_matrix_ab(&params, (1.0, 1.0));
        let z = partition_function(&k).unwrap();
        assert!(close(z, 8.0, 1e-9), "z = {z}");
    }

    #[test]
    fn single_edge_probabilities_sum_to_one() {
        for a in [0.25, 0.5, 0.8] {
            let params = AztecParams::new(1, a).unwrap();
            let k = build_matrix(&params);
            let kinv = invert_direct(&k).unwrap();
            for &w in &kinv.k.whites {
                let mut total = 0.0;
                for b in crate::lattice::black_neighbors(w, params.n) {
                    let e = DimerEdge::new(b, w, &params).unwrap();
                    let p =
                        kenyon_correlation(&CorrelationQuery::new(vec![e]).unwrap(), &kinv)
                            .unwrap();
                    assert!(p >= -1e-10 && p <= 1.0 + 1e-10, "p = {p}");
                    total += p;
                }
                assert!(close(total, 1.0, 1e-10), "sum = {total}");
            }
        }
    }

    #[test]
    fn covariance_equals_cross_term() {
        let params = AztecParams::new(1, 0.5).unwrap();
        let k = build_matrix(&params);
        let kinv = invert_direct(&k).unwrap();
        let e1 = DimerEdge::new(LatticeVertex(2, 1), LatticeVertex(1, 2), &params).unwrap();
        let e2 = DimerEdge::new(LatticeVertex(4, 3), LatticeVertex(5, 4), &params).unwrap();
        let cov = dimer_covariance(&e1, &e2, &kinv).unwrap();
        let l12 = kinv.kentry(e1.black, e1.white).unwrap()
            * kinv.entry(e2.white, e1.black).unwrap();
        let l21 = kinv.kentry(e2.black, e2.white).unwrap()
            * kinv.entry(e1.white, e2.black).unwrap();
        let cross = -(l12 * l21);
        assert!(cross.im.abs() < 1e-10);
        assert!(close(cov, cross.re, 1e-10));
        // identical edges rejected
        assert!(dimer_covariance(&e1, &e1, &kinv).is_err());
    }

    #[test]
    fn reflection_identities_lemma() {
        // K^{-1}_{a,b}(w,b) = (-1)^{(w1+w2-b1-b2)/2} (-i) K^{-1}_{b,a}(Tr w, Tr b)
        // and the composed identity for T2 T1.
        let params = AztecParams::new(1, 0.5).unwrap();
        let n = params.n;
        let kab = invert_direct(&build_matrix_ab(&params, (params.a, params.b))).unwrap();
        let kba = invert_direct(&build_matrix_ab(&params, (params.b, params.a))).unwrap();
        for &w in &kab.k.whites {
            for &b in &kab.k.blacks {
                let lhs = kab.entry(w, b).unwrap();
                let sgn = if ((w.0 + w.1 - b.0 - b.1) / 2).rem_euclid(2) == 0 {
                    1.0
                } else {
                    -1.0
                };
                for r in [1u8, 2u8] {
                    let rw = crate::lattice::reflect(w, r, n);
                    let rb = crate::lattice::reflect(b, r, n);
                    assert!(classify_vertex(rw, n).is_some());
                    let rhs =
                        C64::new(0.0, -1.0) * sgn * kba.entry(rw, rb).unwrap();
                    assert!((lhs - rhs).norm() < 1e-10, "r={r} w={w:?} b={b:?}");
                }
                let rw = crate::lattice::reflect(crate::lattice::reflect(w, 1, n), 2, n);
                let rb = crate::lattice::reflect(crate::lattice::reflect(b, 1, n), 2, n);
                let sgn2 = if (w.1 - b.1).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                let rhs = -sgn2 * kab.entry(rw, rb).unwrap();
                assert!((lhs - rhs).norm() < 1e-10);
            }
        }
    }
}
