//! Boundary structure of planar patterns, read off the geometric realization
//! (vertices, edges, and a unit square for every 4-cycle of members).

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};
use crate::lattice::{Edge, Pattern, Point, Window};

/// A maximal straight run of boundary edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatRun {
    pub start: Point,
    pub axis: usize,
    /// Number of edges.
    pub len: usize,
    /// The run reaches the edge of the window on at least one end.
    pub open: bool,
}

#[derive(Clone, Debug)]
pub struct BoundaryAnalysis {
    pub window: Window,
    /// Boundary vertices (endpoints of boundary edges) with their boundary degree.
    pub degree: BTreeMap<Point, usize>,
    pub boundary_edges: Vec<Edge>,
    pub corners: Vec<Point>,
    pub flat_runs: Vec<FlatRun>,
    /// Independent cycles of the boundary graph, as closed vertex sequences.
    pub loops: Vec<Vec<Point>>,
    pub components: usize,
    /// Longest isolated path of members (interior vertices of member-degree 2), in edges.
    pub longest_isolated_path: usize,
    /// Longest isolated path that is also a geodesic of the lattice.
    pub longest_isolated_geodesic: usize,
    pub geodesic: bool,
    pub simple: bool,
    pub oriented: bool,
}

impl BoundaryAnalysis {
    pub fn loop_is_unit_square(l: &[Point]) -> bool {
        if l.len() != 4 {
            return false;
        }
        let xs: Vec<i64> = l.iter().map(|p| p[0]).collect();
        let ys: Vec<i64> = l.iter().map(|p| p[1]).collect();
        let span = |v: &[i64]| v.iter().max().unwrap() - v.iter().min().unwrap();
        span(&xs) == 1 && span(&ys) == 1
    }

    pub fn all_loops_unit_squares(&self) -> bool {
        self.loops.iter().all(|l| Self::loop_is_unit_square(l))
    }

    /// Vertices with fewer than two boundary neighbours.
    pub fn dangling(&self) -> Vec<Point> {
        self.degree
            .iter()
            .filter(|(_, &d)| d < 2)
            .map(|(p, _)| p.clone())
            .collect()
    }
}

/// Dense membership table over a box, queried through a closure.
pub(crate) struct Plane {
    x0: i64,
    y0: i64,
    w: i64,
    h: i64,
    bits: Vec<bool>,
}

impl Plane {
    pub(crate) fn new(b: &Window, f: impl Fn(i64, i64) -> bool) -> Plane {
        let (x0, y0) = (b.lo()[0], b.lo()[1]);
        let (w, h) = (b.side(0) as i64, b.side(1) as i64);
        let mut bits = Vec::with_capacity((w * h) as usize);
        for y in y0..y0 + h {
            for x in x0..x0 + w {
                bits.push(f(x, y));
            }
        }
        Plane { x0, y0, w, h, bits }
    }

    fn inside(&self, x: i64, y: i64) -> bool {
        x >= self.x0 && y >= self.y0 && x < self.x0 + self.w && y < self.y0 + self.h
    }

    pub(crate) fn get(&self, x: i64, y: i64) -> bool {
        self.inside(x, y) && self.bits[((y - self.y0) * self.w + (x - self.x0)) as usize]
    }
}

fn require_2d(p: &Pattern) -> Result<()> {
    if p.dim != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: p.dim,
        });
    }
    Ok(())
}

/// Number of member unit squares containing the edge `(x,y) -> (x,y)+e_axis`.
fn squares_on(m: &Plane, x: i64, y: i64, axis: usize) -> usize {
    let sides: [(i64, i64); 2] = if axis == 0 {
        [(0, 1), (0, -1)]
    } else {
        [(1, 0), (-1, 0)]
    };
    let (ex, ey) = if axis == 0 { (1, 0) } else { (0, 1) };
    sides
        .iter()
        .filter(|(dx, dy)| m.get(x + dx, y + dy) && m.get(x + ex + dx, y + ey + dy))
        .count()
}

fn bfs(n: usize, adj: &[Vec<usize>], s: usize) -> Vec<u32> {
    let mut d = vec![u32::MAX; n];
    d[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(v) = q.pop_front() {
        for &u in &adj[v] {
            if d[u] == u32::MAX {
                d[u] = d[v] + 1;
                q.push_back(u);
            }
        }
    }
    d
}

/// Classifies the boundary of a planar pattern inside `w`.
///
/// Membership is sampled one cell beyond `w` so that unit squares on the
/// window edge are seen; all graph distances are computed inside `w`.
pub fn classify_boundary(a: &Pattern, w: &Window) -> Result<BoundaryAnalysis> {
    require_2d(a)?;
    if w.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: w.dim(),
        });
    }
    let m = Plane::new(&w.dilated(), |x, y| a.contains(&Point::from([x, y])));
    Ok(classify_plane(&m, w))
}

/// [`classify_boundary`] for a membership predicate.
pub fn classify_membership(f: impl Fn(i64, i64) -> bool, w: &Window) -> BoundaryAnalysis {
    let m = Plane::new(&w.dilated(), f);
    classify_plane(&m, w)
}

pub(crate) fn classify_plane(m: &Plane, w: &Window) -> BoundaryAnalysis {
    let (x0, y0) = (w.lo()[0], w.lo()[1]);
    let (sw, sh) = (w.side(0), w.side(1));
    let id = |x: i64, y: i64| ((y - y0) as usize) * sw + (x - x0) as usize;
    let n = sw * sh;
    let pt = |i: usize| Point::from([x0 + (i % sw) as i64, y0 + (i / sw) as i64]);
    let inw = |x: i64, y: i64| w.contains(&Point::from([x, y]));

    let mut member_adj = vec![Vec::new(); n];
    let mut bdy_adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut boundary_edges = Vec::new();
    let mut oriented = true;
    for y in y0..y0 + sh as i64 {
        for x in x0..x0 + sw as i64 {
            if !m.get(x, y) {
                continue;
            }
            for (axis, (ex, ey)) in [(1i64, 0i64), (0, 1)].into_iter().enumerate() {
                let (nx, ny) = (x + ex, y + ey);
                if !inw(nx, ny) || !m.get(nx, ny) {
                    continue;
                }
                let (a, b) = (id(x, y), id(nx, ny));
                member_adj[a].push(b);
                member_adj[b].push(a);
                let sq = squares_on(m, x, y, axis);
                if sq <= 1 {
                    oriented &= sq == 1;
                    bdy_adj[a].push(b);
                    bdy_adj[b].push(a);
                    boundary_edges.push(Edge::new(Point::from([x, y]), axis));
                }
            }
        }
    }

    let mut degree = BTreeMap::new();
    let mut corners = Vec::new();
    for v in 0..n {
        if bdy_adj[v].is_empty() {
            continue;
        }
        degree.insert(pt(v), bdy_adj[v].len());
        if bdy_adj[v].len() == 2 {
            let (p, a, b) = (pt(v), pt(bdy_adj[v][0]), pt(bdy_adj[v][1]));
            if (a[0] == p[0]) != (b[0] == p[0]) {
                corners.push(p);
            }
        }
    }
    let simple = degree.values().all(|&d| d <= 2);

    // flat runs: start at an edge whose predecessor along the same line is absent
    let has_bdy = |x: i64, y: i64, axis: usize| -> bool {
        let (ex, ey) = if axis == 0 { (1, 0) } else { (0, 1) };
        inw(x, y) && inw(x + ex, y + ey) && bdy_adj[id(x, y)].contains(&id(x + ex, y + ey))
    };
    let mut flat_runs = Vec::new();
    for e in &boundary_edges {
        let (x, y, axis) = (e.lo[0], e.lo[1], e.axis);
        let (ex, ey) = if axis == 0 { (1, 0) } else { (0, 1) };
        if has_bdy(x - ex, y - ey, axis) {
            continue;
        }
        let mut len = 0;
        while has_bdy(x + ex * len as i64, y + ey * len as i64, axis) {
            len += 1;
        }
        let (lx, ly) = (x + ex * len as i64, y + ey * len as i64);
        let open = !inw(x - ex, y - ey) || !inw(lx + ex, ly + ey);
        flat_runs.push(FlatRun {
            start: e.lo.clone(),
            axis,
            len,
            open,
        });
    }

    // components and fundamental cycles of the boundary graph
    let mut comp = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    let mut components = 0;
    let mut loops = Vec::new();
    for s in 0..n {
        if bdy_adj[s].is_empty() || comp[s] != usize::MAX {
            continue;
        }
        comp[s] = components;
        let mut q = VecDeque::from([s]);
        let mut order = Vec::new();
        while let Some(v) = q.pop_front() {
            order.push(v);
            let mut nb = bdy_adj[v].clone();
            nb.sort_unstable();
            for u in nb {
                if comp[u] == usize::MAX {
                    comp[u] = components;
                    parent[u] = v;
                    depth[u] = depth[v] + 1;
                    q.push_back(u);
                }
            }
        }
        for &v in &order {
            for &u in &bdy_adj[v] {
                if v < u && parent[u] != v && parent[v] != u {
                    let (mut a, mut b) = (v, u);
                    let (mut left, mut right) = (vec![a], vec![b]);
                    while a != b {
                        if depth[a] >= depth[b] {
                            a = parent[a];
                            left.push(a);
                        } else {
                            b = parent[b];
                            right.push(b);
                        }
                    }
                    right.pop();
                    right.reverse();
                    left.extend(right);
                    loops.push(left.into_iter().map(pt).collect());
                }
            }
        }
        components += 1;
    }

    // geodesic within window: boundary distance equals member distance
    let mut geodesic = true;
    let bverts: Vec<usize> = (0..n).filter(|&v| !bdy_adj[v].is_empty()).collect();
    'outer: for &s in &bverts {
        let db = bfs(n, &bdy_adj, s);
        let dm = bfs(n, &member_adj, s);
        for &t in &bverts {
            if db[t] != u32::MAX && db[t] != dm[t] {
                geodesic = false;
                break 'outer;
            }
        }
    }

    // isolated paths: maximal chains of member-degree-2 vertices
    let mdeg = |v: usize| member_adj[v].len();
    let full_deg = |v: usize| {
        let p = pt(v);
        let (x, y) = (p[0], p[1]);
        [(1, 0), (-1, 0), (0, 1), (0, -1)]
            .iter()
            .filter(|(dx, dy)| m.get(x + dx, y + dy))
            .count()
    };
    let mut seen = vec![false; n];
    let (mut longest, mut longest_geo) = (0, 0);
    for s in 0..n {
        if seen[s] || !m.get(pt(s)[0], pt(s)[1]) || full_deg(s) != 2 || mdeg(s) != 2 {
            continue;
        }
        // walk both directions through degree-2 vertices
        let mut chain = vec![s];
        seen[s] = true;
        let mut ends = Vec::new();
        for &start in &member_adj[s] {
            let (mut prev, mut cur) = (s, start);
            loop {
                if full_deg(cur) == 2 && mdeg(cur) == 2 && !seen[cur] {
                    seen[cur] = true;
                    chain.push(cur);
                    let next = member_adj[cur]
                        .iter()
                        .copied()
                        .find(|&u| u != prev)
                        .unwrap();
                    prev = cur;
                    cur = next;
                } else {
                    ends.push(cur);
                    break;
                }
            }
        }
        let len = chain.len() + 1;
        longest = longest.max(len);
        if ends.len() == 2 && pt(ends[0]).l1_dist(&pt(ends[1])) == len as i64 {
            longest_geo = longest_geo.max(len);
        }
    }

    BoundaryAnalysis {
        window: w.clone(),
        degree,
        boundary_edges,
        corners,
        flat_runs,
        loops,
        components,
        longest_isolated_path: longest,
        longest_isolated_geodesic: longest_geo,
        geodesic,
        simple,
        oriented,
    }
}

/// The 8 symmetries of the square acting on `(x, y)`.
pub fn dihedral(k: usize, x: i64, y: i64) -> (i64, i64) {
    let (x, y) = if k & 4 != 0 { (y, x) } else { (x, y) };
    match k & 3 {
        0 => (x, y),
        1 => (-y, x),
        2 => (-x, -y),
        _ => (y, -x),
    }
}

/// Whether some symmetry of the square followed by a translation of size at
/// most the window diameter carries `a` onto `b`, as seen through `w` from
/// both sides.
pub fn are_isomorphic(a: &Pattern, b: &Pattern, w: &Window) -> Result<bool> {
    require_2d(a)?;
    require_2d(b)?;
    let diam = (0..2).map(|i| w.side(i) as i64).max().unwrap();
    let (cx, cy) = (w.lo()[0] + diam / 2, w.lo()[1] + diam / 2);
    let big = Window::new(
        [cx - 3 * diam, cy - 3 * diam],
        [cx + 3 * diam, cy + 3 * diam],
    )?;
    let pa = Plane::new(&big, |x, y| a.contains(&Point::from([x, y])));
    let pb = Plane::new(&big, |x, y| b.contains(&Point::from([x, y])));
    let pts: Vec<(i64, i64)> = w.points().map(|p| (p[0], p[1])).collect();
    // g(p) = c + D_k(p - c) + t
    let map = |k: usize, x: i64, y: i64, tx: i64, ty: i64| {
        let (u, v) = dihedral(k, x - cx, y - cy);
        (cx + u + tx, cy + v + ty)
    };
    for k in 0..8 {
        let inv = (0..8)
            .find(|&j| {
                let (u, v) = dihedral(k, 1, 2);
                dihedral(j, u, v) == (1, 2)
            })
            .unwrap();
        for tx in -diam..=diam {
            for ty in -diam..=diam {
                let fwd = pts.iter().all(|&(x, y)| {
                    let (u, v) = map(k, x, y, tx, ty);
                    pa.get(x, y) == pb.get(u, v)
                });
                if !fwd {
                    continue;
                }
                let back = pts.iter().all(|&(x, y)| {
                    let (u, v) = dihedral(inv, x - tx - cx, y - ty - cy);
                    pb.get(x, y) == pa.get(cx + u, cy + v)
                });
                if back {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}
