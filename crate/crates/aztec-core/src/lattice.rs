//! The Aztec diamond graph with the two-periodic edge weighting.
//!
//! Vertices live at integer points of the `[0, 2n] x [0, 2n]` box:
//! whites have odd first and even second coordinate, blacks the opposite.
//! Edges join a black `b` to the four whites `b ± e1`, `b ± e2` with
//! `e1 = (1,1)` and `e2 = (-1,1)`. Faces are indexed by their integer
//! centers (both coordinates of equal parity); every edge borders exactly
//! one face with two odd coordinates, and that face decides the edge
//! weight: `a` when the center coordinates sum to 2 mod 4, `b` when they
//! sum to 0 mod 4.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{domain, Result};

/// e1 = (1,1) as a coordinate step.
pub const E1: (i64, i64) = (1, 1);
/// e2 = (-1,1) as a coordinate step.
pub const E2: (i64, i64) = (-1, 1);

/// A vertex of the Aztec diamond graph, `(x1, x2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeVertex(pub i64, pub i64);

impl LatticeVertex {
    pub fn shift(self, d: (i64, i64)) -> LatticeVertex {
        LatticeVertex(self.0 + d.0, self.1 + d.1)
    }

    /// True for white parity: odd first coordinate, even second.
    pub fn is_white_parity(self) -> bool {
        self.0.rem_euclid(2) == 1 && self.1.rem_euclid(2) == 0
    }

    /// True for black parity: even first coordinate, odd second.
    pub fn is_black_parity(self) -> bool {
        self.0.rem_euclid(2) == 0 && self.1.rem_euclid(2) == 1
    }

    /// Sub-lattice index `i` with `x1 + x2 = 2i + 1 (mod 4)`.
    /// Only meaningful on white/black parity points.
    pub fn class_index(self) -> u8 {
        (((self.0 + self.1).rem_euclid(4) - 1) / 2) as u8
    }
}

/// The four vertex types of the two-periodic weighting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexClass {
    W0,
    W1,
    B0,
    B1,
}

impl VertexClass {
    pub fn is_white(self) -> bool {
        matches!(self, VertexClass::W0 | VertexClass::W1)
    }

    /// The epsilon index (0 or 1) of the class.
    pub fn epsilon(self) -> u8 {
        match self {
            VertexClass::W0 | VertexClass::B0 => 0,
            VertexClass::W1 | VertexClass::B1 => 1,
        }
    }
}

/// Model parameters: size `n = 4m`, weights `a` and `b = 1`, and the
/// combination `c = a / (1 + a^2)` used by every contour formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AztecParams {
    pub m: u32,
    pub n: u32,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl AztecParams {
    /// Parameters for a diamond of size `n = 4m`.
    pub fn new(m: u32, a: f64) -> Result<AztecParams> {
        if m == 0 {
            return Err(domain("m must be positive"));
        }
        if !(a > 0.0 && a < 1.0) {
            return Err(domain("weight a must lie in (0,1)"));
        }
        Ok(AztecParams {
            m,
            n: 4 * m,
            a,
            b: 1.0,
            c: a / (1.0 + a * a),
        })
    }

    /// Parameters for an arbitrary size `n >= 1` (the sampler accepts any
    /// size; the contour formulas require `n = 4m`).
    pub fn with_size(n: u32, a: f64) -> Result<AztecParams> {
        if n == 0 {
            return Err(domain("n must be positive"));
        }
        if !(a > 0.0 && a < 1.0) {
            return Err(domain("weight a must lie in (0,1)"));
        }
        Ok(AztecParams {
            m: n / 4,
            n,
            a,
            b: 1.0,
            c: a / (1.0 + a * a),
        })
    }

    /// Errors unless `n = 4m`.
    pub fn require_multiple_of_four(&self) -> Result<()> {
        if self.n % 4 != 0 {
            Err(domain(alloc::format!(
                "n = {} is not a multiple of 4; the contour formulas need n = 4m",
                self.n
            )))
        } else {
            Ok(())
        }
    }
}

/// Classifies a coordinate pair as a vertex of the size-`n` diamond.
/// Returns `None` for points outside the vertex set or of face parity.
pub fn classify_vertex(v: LatticeVertex, n: u32) -> Option<VertexClass> {
    let n = n as i64;
    if v.is_white_parity() {
        if v.0 >= 1 && v.0 <= 2 * n - 1 && v.1 >= 0 && v.1 <= 2 * n {
            return Some(if v.class_index() == 0 {
                VertexClass::W0
            } else {
                VertexClass::W1
            });
        }
        return None;
    }
    if v.is_black_parity() {
        if v.0 >= 0 && v.0 <= 2 * n && v.1 >= 1 && v.1 <= 2 * n - 1 {
            return Some(if v.class_index() == 0 {
                VertexClass::B0
            } else {
                VertexClass::B1
            });
        }
    }
    None
}

/// All whites and blacks of the size-`n` diamond in lexicographic order
/// (first coordinate, then second). This ordering fixes all matrix indices.
pub fn enumerate_vertices(n: u32) -> Result<(Vec<LatticeVertex>, Vec<LatticeVertex>)> {
    if n == 0 {
        return Err(domain("n must be positive"));
    }
    let n = n as i64;
    let mut whites = Vec::new();
    for x1 in (1..=2 * n - 1).step_by(2) {
        for x2 in (0..=2 * n).step_by(2) {
            whites.push(LatticeVertex(x1, x2));
        }
    }
    let mut blacks = Vec::new();
    for x1 in (0..=2 * n).step_by(2) {
        for x2 in (1..=2 * n - 1).step_by(2) {
            blacks.push(LatticeVertex(x1, x2));
        }
    }
    Ok((whites, blacks))
}

/// True if `(b, w)` is an edge of the size-`n` graph.
pub fn is_edge(b: LatticeVertex, w: LatticeVertex, n: u32) -> bool {
    if classify_vertex(b, n).map(VertexClass::is_white) != Some(false) {
        return false;
    }
    if classify_vertex(w, n).map(VertexClass::is_white) != Some(true) {
        return false;
    }
    let d = (w.0 - b.0, w.1 - b.1);
    d == E1 || d == E2 || d == (-E1.0, -E1.1) || d == (-E2.0, -E2.1)
}

/// Center of the unique odd-odd face bordering the edge `(b, w)`.
pub fn odd_face_of_edge(b: LatticeVertex, w: LatticeVertex) -> LatticeVertex {
    // The two faces touching the edge are the midpoint +/- half the
    // rotated edge vector; exactly one of them has both coordinates odd.
    let mx2 = b.0 + w.0; // twice the midpoint
    let my2 = b.1 + w.1;
    let dx = w.0 - b.0;
    let dy = w.1 - b.1;
    // rotate (dx,dy) by 90 degrees: (-dy, dx); candidate face centers
    // ((mx2 +/- -dy)/2, (my2 +/- dx)/2).
    let f1 = LatticeVertex((mx2 - dy) / 2, (my2 + dx) / 2);
    let f2 = LatticeVertex((mx2 + dy) / 2, (my2 - dx) / 2);
    if f1.0.rem_euclid(2) == 1 && f1.1.rem_euclid(2) == 1 {
        f1
    } else {
        debug_assert!(f2.0.rem_euclid(2) == 1 && f2.1.rem_euclid(2) == 1);
        f2
    }
}

/// Weight of the edge `(b, w)`: `a` when the bordering odd-odd face has
/// coordinate sum 2 mod 4, else `b`.
pub fn edge_weight(b: LatticeVertex, w: LatticeVertex, params: &AztecParams) -> Result<f64> {
    if !is_edge(b, w, params.n) {
        return Err(domain(alloc::format!(
            "({},{})-({},{}) is not an edge",
            b.0,
            b.1,
            w.0,
            w.1
        )));
    }
    Ok(edge_weight_unchecked(b, w, params.a, params.b))
}

/// Weight lookup without membership checks (used on the infinite graph).
pub fn edge_weight_unchecked(b: LatticeVertex, w: LatticeVertex, a: f64, bw: f64) -> f64 {
    let f = odd_face_of_edge(b, w);
    if (f.0 + f.1).rem_euclid(4) == 2 {
        a
    } else {
        bw
    }
}

/// A dimer: an occupied edge together with its weight and type index.
///
/// `type_index = 4*(weight class) + 2*(white class) + (black class)`,
/// weight class 0 for `a`-edges and 1 for `b`-edges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimerEdge {
    pub black: LatticeVertex,
    pub white: LatticeVertex,
    pub weight: f64,
    pub type_index: u8,
}

impl DimerEdge {
    pub fn new(b: LatticeVertex, w: LatticeVertex, params: &AztecParams) -> Result<DimerEdge> {
        let weight = edge_weight(b, w, params)?;
        let wclass = b.class_index(); // black class
        let iclass = w.class_index();
        let weight_class = if weight == params.a { 0 } else { 1 };
        Ok(DimerEdge {
            black: b,
            white: w,
            weight,
            type_index: 4 * weight_class + 2 * iclass + wclass,
        })
    }
}

/// A perfect matching of the diamond, stored as the black partner of each
/// white vertex in lexicographic white order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tiling {
    pub n: u32,
    /// `partner[i]` is the matched black vertex of the i-th white vertex.
    pub partner: Vec<LatticeVertex>,
}

impl Tiling {
    /// The whites in lexicographic order (index space of `partner`).
    pub fn whites(&self) -> Vec<LatticeVertex> {
        enumerate_vertices(self.n).expect("n >= 1").0
    }

    /// All dimers of the tiling.
    pub fn edges(&self, params: &AztecParams) -> Result<Vec<DimerEdge>> {
        let whites = self.whites();
        whites
            .iter()
            .zip(&self.partner)
            .map(|(&w, &b)| DimerEdge::new(b, w, params))
            .collect()
    }

    /// Black partner of a white vertex, if `w` is in the graph.
    pub fn partner_of(&self, w: LatticeVertex) -> Option<LatticeVertex> {
        let n = self.n as i64;
        if !w.is_white_parity() || w.0 < 1 || w.0 > 2 * n - 1 || w.1 < 0 || w.1 > 2 * n {
            return None;
        }
        let cols = n + 1;
        let idx = ((w.0 - 1) / 2) * cols + w.1 / 2;
        Some(self.partner[idx as usize])
    }

    /// Whether the edge `(b, w)` is covered by a dimer.
    pub fn covers(&self, b: LatticeVertex, w: LatticeVertex) -> bool {
        self.partner_of(w) == Some(b)
    }

    /// Checks the perfect-matching invariants: every white matched to an
    /// adjacent black inside the graph, every black used exactly once.
    pub fn validate(&self) -> Result<()> {
        let whites = self.whites();
        if whites.len() != self.partner.len() {
            return Err(domain("partner table has the wrong length"));
        }
        let mut used = BTreeMap::new();
        for (w, &b) in whites.iter().zip(&self.partner) {
            if !is_edge(b, *w, self.n) {
                return Err(domain(alloc::format!(
                    "white ({},{}) matched to non-adjacent ({},{})",
                    w.0,
                    w.1,
                    b.0,
                    b.1
                )));
            }
            if used.insert(b, *w).is_some() {
                return Err(domain(alloc::format!(
                    "black ({},{}) covered twice",
                    b.0,
                    b.1
                )));
            }
        }
        Ok(())
    }
}

/// Face-indexed integer heights of a tiling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightField {
    pub n: u32,
    pub heights: BTreeMap<LatticeVertex, i64>,
}

/// Face centers carrying a height: all equal-parity integer points of the
/// `[0,2n]^2` box that touch the diamond (corner faces outside the staircase
/// boundary are dropped).
pub fn height_faces(n: u32) -> Vec<LatticeVertex> {
    let n = n as i64;
    let mut out = Vec::new();
    for f1 in 0..=2 * n {
        for f2 in 0..=2 * n {
            if (f1 + f2) % 2 != 0 {
                continue;
            }
            // Keep faces within one unit of the diamond |x1-n|+|x2-n| <= n+1.
            if (f1 - n).abs() + (f2 - n).abs() <= n + 1 {
                out.push(LatticeVertex(f1, f2));
            }
        }
    }
    out
}

/// Thurston height function of a tiling.
///
/// Crossing an edge with its white endpoint on the right of the direction
/// of travel changes the height by +3 when the edge is covered and -1
/// otherwise; the face at (0,0) is pinned to height 0. With this convention
/// the boundary faces (2i,0), (0,2i) come out at height 2i and the faces
/// (2n-2i,2n), (2n,2n-2i) at 2i.
pub fn height_function(t: &Tiling) -> Result<HeightField> {
    t.validate()?;
    let n = t.n as i64;
    let faces = height_faces(t.n);
    let inside: alloc::collections::BTreeSet<_> = faces.iter().copied().collect();
    let mut heights = BTreeMap::new();
    heights.insert(LatticeVertex(0, 0), 0i64);
    // BFS over faces.
    let mut queue = alloc::collections::VecDeque::new();
    queue.push_back(LatticeVertex(0, 0));
    while let Some(f) = queue.pop_front() {
        let h = heights[&f];
        for d in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
            let g = LatticeVertex(f.0 + d.0, f.1 + d.1);
            if !inside.contains(&g) {
                continue;
            }
            // The crossed edge joins the two common neighbors of f and g.
            let p = LatticeVertex(f.0 + d.0, f.1); // horizontal then vertical corner
            let q = LatticeVertex(f.0, f.1 + d.1);
            let (b, w) = if p.is_white_parity() { (q, p) } else { (p, q) };
            // Does the edge exist in the graph? Boundary faces may share
            // only out-of-graph corners.
            if !is_edge(b, w, t.n) {
                continue;
            }
            // White on the right of travel direction d?
            let mid = ((b.0 + w.0) as f64 / 2.0, (b.1 + w.1) as f64 / 2.0);
            let to_w = (w.0 as f64 - mid.0, w.1 as f64 - mid.1);
            let cross = d.0 as f64 * to_w.1 - d.1 as f64 * to_w.0;
            let covered = t.covers(b, w);
            let delta = match (cross < 0.0, covered) {
                (true, true) => 3,
                (true, false) => -1,
                (false, true) => -3,
                (false, false) => 1,
            };
            let hg = h + delta;
            if let Some(&old) = heights.get(&g) {
                if old != hg {
                    return Err(domain(alloc::format!(
                        "inconsistent height at face ({},{}): {} vs {}",
                        g.0,
                        g.1,
                        old,
                        hg
                    )));
                }
            } else {
                heights.insert(g, hg);
                queue.push_back(g);
            }
        }
    }
    let _ = n;
    Ok(HeightField { n: t.n, heights })
}

/// Reflections in the vertical and horizontal center lines:
/// `T1(x,y) = (2n-x, y)` and `T2(x,y) = (x, 2n-y)`.
pub fn reflect(v: LatticeVertex, which: u8, n: u32) -> LatticeVertex {
    let n = n as i64;
    match which {
        1 => LatticeVertex(2 * n - v.0, v.1),
        2 => LatticeVertex(v.0, 2 * n - v.1),
        _ => panic!("reflection index must be 1 or 2"),
    }
}

/// Black neighbors of a white vertex inside the size-`n` graph.
pub fn black_neighbors(w: LatticeVertex, n: u32) -> Vec<LatticeVertex> {
    let mut out = Vec::new();
    for d in [E1, E2, (-E1.0, -E1.1), (-E2.0, -E2.1)] {
        let b = w.shift(d);
        if classify_vertex(b, n).map(VertexClass::is_white) == Some(false) {
            out.push(b);
        }
    }
    out
}
