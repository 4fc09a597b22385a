//! Combinatorial core of Z^n: points, windows, edges and vertex sets.
//!
//! Every finite computation in the crate happens on a [`Window`] `U` (an
//! inclusive integer box) together with its closure `U ∪ τU`, the box plus
//! every lattice point at l1-distance one from it. Edges of `E_U` are the
//! undirected lattice edges with at least one endpoint in `U`; they are kept
//! in a canonical order (lexicographic on lower endpoint, then axis) so that
//! anything serialized from them is byte-reproducible.

mod grid2;
mod pattern;
mod set;

pub use grid2::Grid2;
pub use pattern::{Expr, Pattern, Sign};
pub use set::{edge_sets, exterior_boundary, vertex_boundary, OutsideRule, VertexSet};

use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A vertex of Z^n.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub Vec<i64>);

impl Point {
    pub fn new(coords: impl Into<Vec<i64>>) -> Self {
        Point(coords.into())
    }

    pub fn origin(dim: usize) -> Self {
        Point(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    /// The point moved by `delta` along `axis`.
    pub fn step(&self, axis: usize, delta: i64) -> Point {
        let mut c = self.0.clone();
        c[axis] += delta;
        Point(c)
    }

    pub fn add(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn l1_dist(&self, other: &Point) -> i64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .sum()
    }

    pub fn linf_dist(&self, other: &Point) -> i64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .max()
            .unwrap_or(0)
    }
}

impl Index<usize> for Point {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<i64>> for Point {
    fn from(v: Vec<i64>) -> Self {
        Point(v)
    }
}

impl<const N: usize> From<[i64; N]> for Point {
    fn from(v: [i64; N]) -> Self {
        Point(v.to_vec())
    }
}

/// The 2n lattice neighbors of `p`, in the order -e1, +e1, ..., -en, +en.
pub fn neighbors(p: &Point) -> Vec<Point> {
    let mut out = Vec::with_capacity(2 * p.dim());
    for axis in 0..p.dim() {
        out.push(p.step(axis, -1));
        out.push(p.step(axis, 1));
    }
    out
}

/// An undirected lattice edge `{lo, lo + e_axis}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Edge {
    pub lo: Point,
    pub axis: usize,
}

impl Edge {
    pub fn new(lo: Point, axis: usize) -> Self {
        Edge { lo, axis }
    }

    /// Normalizes an unordered adjacent pair. Panics if the points are not adjacent.
    pub fn between(a: &Point, b: &Point) -> Self {
        assert_eq!(a.l1_dist(b), 1, "{a:?} and {b:?} are not adjacent");
        let axis = (0..a.dim()).find(|&i| a[i] != b[i]).unwrap();
        let lo = if a[axis] < b[axis] {
            a.clone()
        } else {
            b.clone()
        };
        Edge { lo, axis }
    }

    pub fn hi(&self) -> Point {
        self.lo.step(self.axis, 1)
    }
}

/// An inclusive axis-aligned integer box.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Window {
    lo: Point,
    hi: Point,
}

impl Window {
    pub fn new(lo: impl Into<Point>, hi: impl Into<Point>) -> Result<Self> {
        let (lo, hi) = (lo.into(), hi.into());
        if lo.dim() != hi.dim() {
            return Err(Error::DimensionMismatch {
                expected: lo.dim(),
                got: hi.dim(),
            });
        }
        if lo.dim() == 0 || lo.0.iter().zip(&hi.0).any(|(a, b)| a > b) {
            return Err(Error::EmptyWindow { lo: lo.0, hi: hi.0 });
        }
        Ok(Window { lo, hi })
    }

    /// The infinity-norm ball of radius `r` around `center`.
    pub fn ball(center: &Point, r: i64) -> Self {
        assert!(r >= 0);
        Window {
            lo: Point(center.0.iter().map(|c| c - r).collect()),
            hi: Point(center.0.iter().map(|c| c + r).collect()),
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.dim()
    }

    pub fn lo(&self) -> &Point {
        &self.lo
    }

    pub fn hi(&self) -> &Point {
        &self.hi
    }

    pub fn side(&self, axis: usize) -> usize {
        (self.hi[axis] - self.lo[axis] + 1) as usize
    }

    pub fn len(&self) -> usize {
        (0..self.dim()).map(|i| self.side(i)).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.dim() == self.dim() && (0..self.dim()).all(|i| self.lo[i] <= p[i] && p[i] <= self.hi[i])
    }

    pub fn contains_window(&self, other: &Window) -> bool {
        self.contains(&other.lo) && self.contains(&other.hi)
    }

    /// Number of coordinates of `p` outside the box's range.
    fn outside_count(&self, p: &Point) -> usize {
        (0..self.dim())
            .filter(|&i| p[i] < self.lo[i] || p[i] > self.hi[i])
            .count()
    }

    /// Membership in `U ∪ τU`.
    pub fn in_closure(&self, p: &Point) -> bool {
        p.dim() == self.dim()
            && (0..self.dim()).all(|i| self.lo[i] - 1 <= p[i] && p[i] <= self.hi[i] + 1)
            && self.outside_count(p) <= 1
    }

    /// Membership in the exterior vertex boundary `τU`.
    pub fn in_tau(&self, p: &Point) -> bool {
        self.in_closure(p) && !self.contains(p)
    }

    /// The box dilated by one in every axis; it contains the closure.
    pub fn dilated(&self) -> Window {
        Window {
            lo: Point(self.lo.0.iter().map(|c| c - 1).collect()),
            hi: Point(self.hi.0.iter().map(|c| c + 1).collect()),
        }
    }

    pub fn shrink(&self, by: i64) -> Option<Window> {
        Window::new(
            Point(self.lo.0.iter().map(|c| c + by).collect()),
            Point(self.hi.0.iter().map(|c| c - by).collect()),
        )
        .ok()
    }

    /// All points of the box, lexicographically.
    pub fn points(&self) -> BoxPoints {
        BoxPoints {
            lo: self.lo.clone(),
            hi: self.hi.clone(),
            next: Some(self.lo.clone()),
        }
    }

    /// `U ∪ τU`, lexicographically.
    pub fn closure_points(&self) -> impl Iterator<Item = Point> + '_ {
        self.dilated().points().filter(move |p| self.in_closure(p))
    }

    pub fn tau_points(&self) -> impl Iterator<Item = Point> + '_ {
        self.dilated().points().filter(move |p| self.in_tau(p))
    }

    /// `E_U`: undirected edges with at least one endpoint in `U`, canonical order.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for p in self.dilated().points() {
            if !self.in_closure(&p) {
                continue;
            }
            for axis in 0..self.dim() {
                let q = p.step(axis, 1);
                if self.contains(&p) || self.contains(&q) {
                    out.push(Edge::new(p.clone(), axis));
                }
            }
        }
        out
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}..{:?}", self.lo, self.hi)
    }
}

/// Odometer over an inclusive box; the last axis varies fastest.
pub struct BoxPoints {
    lo: Point,
    hi: Point,
    next: Option<Point>,
}

impl Iterator for BoxPoints {
    type Item = Point;

    fn next(&mut self) -> Option<Point> {
        let cur = self.next.take()?;
        let mut n = cur.clone();
        let mut axis = n.dim();
        loop {
            if axis == 0 {
                self.next = None;
                break;
            }
            axis -= 1;
            if n.0[axis] < self.hi[axis] {
                n.0[axis] += 1;
                self.next = Some(n);
                break;
            }
            n.0[axis] = self.lo[axis];
        }
        Some(cur)
    }
}

/// Dense row-major indexing of a box (axis 0 most significant, matching the
/// lexicographic point order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxIndex {
    lo: Vec<i64>,
    dims: Vec<usize>,
    strides: Vec<usize>,
}

impl BoxIndex {
    pub fn new(w: &Window) -> Self {
        let dims: Vec<usize> = (0..w.dim()).map(|i| w.side(i)).collect();
        let mut strides = vec![1; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        BoxIndex {
            lo: w.lo().0.clone(),
            dims,
            strides,
        }
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, p: &Point) -> Option<usize> {
        if p.dim() != self.lo.len() {
            return None;
        }
        let mut idx = 0;
        for i in 0..self.lo.len() {
            let off = p[i] - self.lo[i];
            if off < 0 || off as usize >= self.dims[i] {
                return None;
            }
            idx += off as usize * self.strides[i];
        }
        Some(idx)
    }

    pub fn point(&self, mut idx: usize) -> Point {
        let mut c = vec![0; self.lo.len()];
        for i in 0..self.lo.len() {
            c[i] = self.lo[i] + (idx / self.strides[i]) as i64;
            idx %= self.strides[i];
        }
        Point(c)
    }

    /// Index of the neighbor `idx ± e_axis`, if inside the box.
    pub fn step(&self, idx: usize, axis: usize, delta: i64) -> Option<usize> {
        let coord = (idx / self.strides[axis]) % self.dims[axis];
        if delta < 0 {
            (coord > 0).then(|| idx - self.strides[axis])
        } else {
            (coord + 1 < self.dims[axis]).then(|| idx + self.strides[axis])
        }
    }
}

/// Precomputed adjacency of a window closure: node ids for `U ∪ τU`, and the
/// edges of `E_U` as node-id pairs in canonical order.
#[derive(Clone, Debug)]
pub struct WindowGraph {
    pub window: Window,
    pub points: Vec<Point>,
    pub interior: Vec<bool>,
    /// `(lower, upper, axis)` node ids of each `E_U` edge, canonical order.
    pub edges: Vec<(usize, usize, usize)>,
    /// Incident edge ids per node.
    pub incident: Vec<Vec<usize>>,
    index: BoxIndex,
    node_of: Vec<Option<usize>>,
}

impl WindowGraph {
    pub fn new(window: &Window) -> Self {
        let dil = window.dilated();
        let index = BoxIndex::new(&dil);
        let mut node_of = vec![None; index.len()];
        let mut points = Vec::new();
        let mut interior = Vec::new();
        for (i, p) in dil.points().enumerate() {
            if window.in_closure(&p) {
                node_of[i] = Some(points.len());
                interior.push(window.contains(&p));
                points.push(p);
            }
        }
        let mut edges = Vec::new();
        let mut incident = vec![Vec::new(); points.len()];
        for (a, p) in points.iter().enumerate() {
            let bi = index.index(p).unwrap();
            for axis in 0..window.dim() {
                let Some(bj) = index.step(bi, axis, 1) else {
                    continue;
                };
                let Some(b) = node_of[bj] else { continue };
                if interior[a] || interior[b] {
                    let e = edges.len();
                    edges.push((a, b, axis));
                    incident[a].push(e);
                    incident[b].push(e);
                }
            }
        }
        WindowGraph {
            window: window.clone(),
            points,
            interior,
            edges,
            incident,
            index,
            node_of,
        }
    }

    pub fn node(&self, p: &Point) -> Option<usize> {
        self.index.index(p).and_then(|i| self.node_of[i])
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn edge(&self, e: usize) -> Edge {
        let (a, _, axis) = self.edges[e];
        Edge::new(self.points[a].clone(), axis)
    }
}
