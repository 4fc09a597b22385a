//! The set-valued 1-Laplacian and minimal currents.
//!
//! A current on a window `Ω` is an antisymmetric labelling `a` of the edges
//! `E_Ω`; it is *associated* with `f` when `a_xy ∈ Sgn(f(x) - f(y))` on every
//! edge, and *minimal* when `Σ_y a_xy = 0` at every vertex of `Ω`. A minimal
//! current associated with `1_K` exists exactly when `K` has least perimeter
//! in `Ω`, so an integral minimal current is a checkable certificate and a
//! cheaper competitor is a checkable refutation.
//!
//! Currents are stored as one value per edge of `E_Ω` in canonical order,
//! oriented from the lower endpoint to the upper one; antisymmetry is built
//! into the representation.

use std::fmt::Write as _;

use num_rational::Rational64;
use num_traits::Signed;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::energy::{perimeter, VertexFunction};
use crate::error::{parse_err, Error, Result};
use crate::flow::FlowNetwork;
use crate::lattice::{Edge, Pattern, Point, VertexSet, Window, WindowGraph};
use crate::mincut::least_perimeter_solve;

/// The admissible values of one edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeRule {
    /// `f(x) != f(y)`: the current is pinned to `sgn(f(lo) - f(hi))`.
    Forced(i8),
    /// `f(x) == f(y)`: any value in `[-1, 1]`.
    Free,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForcedConstraints {
    pub forced: Vec<(Edge, i8)>,
    pub free: Vec<Edge>,
}

fn sgn(r: Rational64) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

fn edge_rules(f: &VertexFunction, g: &WindowGraph) -> Result<Vec<EdgeRule>> {
    let vals: Vec<Rational64> = g
        .points
        .iter()
        .map(|p| f.get(p).ok_or_else(|| Error::PartialFunction(p.0.clone())))
        .collect::<Result<_>>()?;
    Ok(g.edges
        .iter()
        .map(|&(a, b, _)| match sgn(vals[a] - vals[b]) {
            0 => EdgeRule::Free,
            s => EdgeRule::Forced(s),
        })
        .collect())
}

/// Splits `E_Ω` into forced edges (with their pinned value, oriented
/// lower -> upper endpoint) and free edges.
pub fn forced_constraints(f: &VertexFunction, omega: &Window) -> Result<ForcedConstraints> {
    let g = WindowGraph::new(omega);
    let rules = edge_rules(f, &g)?;
    let mut out = ForcedConstraints {
        forced: Vec::new(),
        free: Vec::new(),
    };
    for (e, rule) in rules.into_iter().enumerate() {
        match rule {
            EdgeRule::Forced(v) => out.forced.push((g.edge(e), v)),
            EdgeRule::Free => out.free.push(g.edge(e)),
        }
    }
    Ok(out)
}

/// `Δ₁f(x)` as the integer interval `[S - F, S + F]`, where `S` is the sum of
/// the forced outgoing values at `x` and `F` the number of free incident edges.
pub fn one_laplacian_interval(f: &VertexFunction, x: &Point, omega: &Window) -> Result<(i64, i64)> {
    if !omega.contains(x) {
        return Err(Error::Invalid(format!(
            "{x:?} is not a vertex of the window"
        )));
    }
    let fx = f
        .get(x)
        .ok_or_else(|| Error::PartialFunction(x.0.clone()))?;
    let (mut s, mut free) = (0i64, 0i64);
    for y in crate::lattice::neighbors(x) {
        let fy = f
            .get(&y)
            .ok_or_else(|| Error::PartialFunction(y.0.clone()))?;
        match sgn(fx - fy) {
            0 => free += 1,
            v => s += v as i64,
        }
    }
    Ok((s - free, s + free))
}

/// An integral current on `E_Ω` in canonical edge order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Current {
    pub window: Window,
    pub values: Vec<i8>,
}

impl Current {
    pub fn zero(window: &Window) -> Self {
        Current {
            window: window.clone(),
            values: vec![0; window.edges().len()],
        }
    }

    pub fn negated(&self) -> Current {
        Current {
            window: self.window.clone(),
            values: self.values.iter().map(|v| -v).collect(),
        }
    }

    /// `Σ_y a_xy` for every closure vertex (τ-vertices included, unconstrained).
    pub fn divergence(&self, g: &WindowGraph) -> Vec<i64> {
        let mut div = vec![0i64; g.len()];
        for (e, &(a, b, _)) in g.edges.iter().enumerate() {
            div[a] += self.values[e] as i64;
            div[b] -= self.values[e] as i64;
        }
        div
    }

    /// `a_xy` for an edge given by its endpoints.
    pub fn value(&self, x: &Point, y: &Point) -> Option<i8> {
        let g = WindowGraph::new(&self.window);
        let e = Edge::between(x, y);
        let (a, b) = (g.node(&e.lo)?, g.node(&e.hi())?);
        let idx = g.edges.iter().position(|&(p, q, _)| p == a && q == b)?;
        let v = self.values[idx];
        Some(if &e.lo == x { v } else { -v })
    }
}

/// Re-checks that `c` is a minimal current associated with `f` on its window:
/// values in {-1,0,1}, Sgn-membership on every edge, zero divergence on `Ω`.
pub fn is_minimal_current(c: &Current, f: &VertexFunction) -> bool {
    let g = WindowGraph::new(&c.window);
    if c.values.len() != g.edges.len() {
        return false;
    }
    for (e, &(a, b, _)) in g.edges.iter().enumerate() {
        let v = c.values[e];
        if !(-1..=1).contains(&v) {
            return false;
        }
        let (Some(fa), Some(fb)) = (f.get(&g.points[a]), f.get(&g.points[b])) else {
            return false;
        };
        let s = sgn(fa - fb);
        if s != 0 && v != s {
            return false;
        }
    }
    let div = c.divergence(&g);
    (0..g.len()).all(|v| !g.interior[v] || div[v] == 0)
}

/// Decides whether a minimal current associated with every function in `fs`
/// exists on `omega` (the edge rules are intersected), and returns an
/// integral one if so.
///
/// Reduction: free edges become unit-capacity arcs in both directions; all
/// τ-vertices are contracted into one hub whose divergence is unconstrained;
/// a vertex whose forced edges push out `s` units must take in `s` units
/// through free edges, which becomes a demand arc to the sink (or a supply
/// arc from the source when `s < 0`). A feasible current exists iff the
/// maximum flow saturates every supply arc.
pub fn find_joint_minimal_current(
    fs: &[&VertexFunction],
    omega: &Window,
) -> Result<Option<Current>> {
    let g = WindowGraph::new(omega);
    let mut rules = vec![EdgeRule::Free; g.edges.len()];
    for f in fs {
        for (e, r) in edge_rules(f, &g)?.into_iter().enumerate() {
            rules[e] = match (rules[e], r) {
                (EdgeRule::Free, r) => r,
                (r, EdgeRule::Free) => r,
                (EdgeRule::Forced(a), EdgeRule::Forced(b)) if a == b => EdgeRule::Forced(a),
                _ => return Ok(None),
            };
        }
    }

    let mut forced_out = vec![0i64; g.len()];
    for (e, &(a, b, _)) in g.edges.iter().enumerate() {
        if let EdgeRule::Forced(v) = rules[e] {
            forced_out[a] += v as i64;
            forced_out[b] -= v as i64;
        }
    }

    let interior: Vec<usize> = (0..g.len()).filter(|&v| g.interior[v]).collect();
    let mut node = vec![usize::MAX; g.len()];
    for (i, &v) in interior.iter().enumerate() {
        node[v] = i;
    }
    let hub = interior.len();
    for v in 0..g.len() {
        if !g.interior[v] {
            node[v] = hub;
        }
    }
    let (s, t) = (hub + 1, hub + 2);
    let mut net = FlowNetwork::new(hub + 3);

    let mut free_arcs = vec![None; g.edges.len()];
    for (e, &(a, b, _)) in g.edges.iter().enumerate() {
        if rules[e] == EdgeRule::Free && node[a] != node[b] {
            free_arcs[e] = Some(net.add_arc(node[a], node[b], 1, 1));
        }
    }

    // net free outflow required at each interior vertex is -forced_out
    let mut supply = 0i64;
    let mut hub_out = 0i64;
    for &v in &interior {
        let need = -forced_out[v];
        hub_out -= need;
        if need > 0 {
            net.add_edge(s, node[v], need);
            supply += need;
        } else if need < 0 {
            net.add_edge(node[v], t, -need);
        }
    }
    if hub_out > 0 {
        net.add_edge(s, hub, hub_out);
        supply += hub_out;
    } else if hub_out < 0 {
        net.add_edge(hub, t, -hub_out);
    }

    if net.max_flow(s, t) != supply {
        return Ok(None);
    }
    let values = (0..g.edges.len())
        .map(|e| match rules[e] {
            EdgeRule::Forced(v) => v,
            EdgeRule::Free => free_arcs[e].map_or(0, |id| (1 - net.residual(id)) as i8),
        })
        .collect();
    Ok(Some(Current {
        window: omega.clone(),
        values,
    }))
}

/// A minimal current associated with `f` on `omega`, or `None` when
/// `0 ∉ Δ₁f` there.
pub fn find_minimal_current(f: &VertexFunction, omega: &Window) -> Result<Option<Current>> {
    find_joint_minimal_current(&[f], omega)
}

thread_local! {
    static SCRATCH: std::cell::RefCell<FlowNetwork> = std::cell::RefCell::new(FlowNetwork::new(0));
}

/// Repeated feasibility tests for `{0,1}` functions on one window.
///
/// Same reduction as [`find_minimal_current`], with the window graph and the
/// τ contraction built once. Membership is given per node of
/// [`IndicatorOracle::graph`].
pub struct IndicatorOracle {
    g: WindowGraph,
    node: Vec<usize>,
    hub: usize,
}

impl IndicatorOracle {
    pub fn new(omega: &Window) -> Self {
        let g = WindowGraph::new(omega);
        let mut node = vec![0; g.len()];
        let mut next = 0;
        for v in 0..g.len() {
            if g.interior[v] {
                node[v] = next;
                next += 1;
            }
        }
        for v in 0..g.len() {
            if !g.interior[v] {
                node[v] = next;
            }
        }
        IndicatorOracle { g, node, hub: next }
    }

    pub fn graph(&self) -> &WindowGraph {
        &self.g
    }

    /// Whether `0 ∈ Δ₁ 1_K` on the window, where `member[v]` says whether
    /// node `v` of the graph lies in `K`.
    pub fn feasible(&self, member: &[bool]) -> bool {
        assert_eq!(member.len(), self.g.len(), "one flag per closure node");
        SCRATCH.with(|cell| {
            let mut net = cell.borrow_mut();
            net.reset(self.hub + 3);
            self.feasible_in(&mut net, member)
        })
    }

    fn feasible_in(&self, net: &mut FlowNetwork, member: &[bool]) -> bool {
        let mut forced_out = vec![0i64; self.hub + 1];
        let (s, t) = (self.hub + 1, self.hub + 2);
        for &(a, b, _) in &self.g.edges {
            let (na, nb) = (self.node[a], self.node[b]);
            match (member[a], member[b]) {
                (x, y) if x == y => {
                    if na != nb {
                        net.add_arc(na, nb, 1, 1);
                    }
                }
                (x, _) => {
                    let v = if x { 1 } else { -1 };
                    forced_out[na] += v;
                    forced_out[nb] -= v;
                }
            }
        }
        let mut supply = 0;
        let mut hub_out = 0;
        for (v, &out) in forced_out.iter().enumerate().take(self.hub) {
            hub_out += out;
            if out < 0 {
                net.add_edge(s, v, -out);
                supply -= out;
            } else if out > 0 {
                net.add_edge(v, t, out);
            }
        }
        if hub_out > 0 {
            net.add_edge(s, self.hub, hub_out);
            supply += hub_out;
        } else if hub_out < 0 {
            net.add_edge(self.hub, t, -hub_out);
        }
        net.max_flow(s, t) == supply
    }
}

/// A serialized minimality witness for a pattern on the ball `B̂_r(center)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub pattern_id: String,
    pub radius: i64,
    pub center: Point,
    pub current: Current,
}

impl Certificate {
    pub fn window(&self) -> Window {
        Window::ball(&self.center, self.radius)
    }

    /// The certificate of the complementary pattern.
    pub fn negated(&self) -> Certificate {
        Certificate {
            pattern_id: format!("{}c", self.pattern_id),
            radius: self.radius,
            center: self.center.clone(),
            current: self.current.negated(),
        }
    }

    fn body(&self) -> String {
        let mut s = String::new();
        let center: Vec<String> = self.center.0.iter().map(|c| c.to_string()).collect();
        writeln!(
            s,
            "CERT {} {} {}",
            self.center.dim(),
            self.radius,
            center.join(" ")
        )
        .unwrap();
        writeln!(s, "ID {}", self.pattern_id).unwrap();
        let g = WindowGraph::new(&self.window());
        for (e, &(a, b, _)) in g.edges.iter().enumerate() {
            for c in g.points[a].0.iter().chain(g.points[b].0.iter()) {
                write!(s, "{c} ").unwrap();
            }
            writeln!(s, "{}", self.current.values[e]).unwrap();
        }
        s
    }

    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.body().as_bytes()))
    }

    pub fn to_text(&self) -> String {
        let body = self.body();
        let h = hex::encode(Sha256::digest(body.as_bytes()));
        format!("{body}HASH {h}\n")
    }

    pub fn parse(text: &str) -> Result<Certificate> {
        let hash_at = text
            .rfind("HASH ")
            .ok_or_else(|| parse_err(text.lines().count(), "missing HASH line"))?;
        let (body, tail) = text.split_at(hash_at);
        let claimed = tail.trim_start_matches("HASH ").trim();
        if hex::encode(Sha256::digest(body.as_bytes())) != claimed {
            return Err(parse_err(body.lines().count() + 1, "content hash mismatch"));
        }
        let mut lines = body.lines();
        let header: Vec<&str> = lines
            .next()
            .ok_or_else(|| parse_err(1, "empty certificate"))?
            .split_whitespace()
            .collect();
        if header.len() < 3 || header[0] != "CERT" {
            return Err(parse_err(1, "expected `CERT dim r center...`"));
        }
        let int = |s: &str, ln: usize| s.parse::<i64>().map_err(|e| parse_err(ln, e.to_string()));
        let dim = int(header[1], 1)? as usize;
        let radius = int(header[2], 1)?;
        if header.len() != 3 + dim || radius < 0 {
            return Err(parse_err(1, "malformed header"));
        }
        let center = Point(
            header[3..]
                .iter()
                .map(|s| int(s, 1))
                .collect::<Result<_>>()?,
        );
        let id_line = lines
            .next()
            .ok_or_else(|| parse_err(2, "missing ID line"))?;
        let pattern_id = id_line
            .strip_prefix("ID ")
            .ok_or_else(|| parse_err(2, "expected `ID <pattern id>`"))?
            .to_string();
        let window = Window::ball(&center, radius);
        let g = WindowGraph::new(&window);
        let mut values = Vec::with_capacity(g.edges.len());
        for (e, line) in lines.enumerate() {
            let ln = e + 3;
            let f: Vec<i64> = line
                .split_whitespace()
                .map(|s| int(s, ln))
                .collect::<Result<_>>()?;
            if f.len() != 2 * dim + 1 || e >= g.edges.len() {
                return Err(parse_err(ln, "unexpected edge line"));
            }
            let (a, b, _) = g.edges[e];
            if f[..dim] != g.points[a].0[..] || f[dim..2 * dim] != g.points[b].0[..] {
                return Err(parse_err(ln, "edge out of canonical order"));
            }
            let v = f[2 * dim];
            if !(-1..=1).contains(&v) {
                return Err(parse_err(ln, "current value outside {-1,0,1}"));
            }
            values.push(v as i8);
        }
        if values.len() != g.edges.len() {
            return Err(parse_err(body.lines().count(), "missing edge lines"));
        }
        Ok(Certificate {
            pattern_id,
            radius,
            center,
            current: Current { window, values },
        })
    }
}

/// Independent re-verification of a certificate against a pattern; uses only
/// arithmetic on the stored current, never the solver.
pub fn validate_certificate(c: &Certificate, pattern: &Pattern) -> bool {
    if c.center.dim() != pattern.dim || c.current.window != c.window() {
        return false;
    }
    let f = VertexFunction::indicator(&VertexSet::from_pattern(&c.window(), pattern));
    is_minimal_current(&c.current, &f)
}

/// A strictly cheaper competitor with the pattern's τ-trace on `B̂_r`.
#[derive(Clone, Debug)]
pub struct Refutation {
    pub pattern_id: String,
    pub radius: i64,
    pub center: Point,
    pub witness: VertexSet,
    pub pattern_perimeter: u64,
    pub witness_perimeter: u64,
}

impl Refutation {
    /// Re-checks the witness: same trace, strictly smaller perimeter.
    pub fn verify(&self, pattern: &Pattern) -> bool {
        let w = Window::ball(&self.center, self.radius);
        let own = VertexSet::from_pattern(&w, pattern);
        self.witness.same_trace(&own)
            && perimeter(&self.witness, &w).ok() == Some(self.witness_perimeter)
            && perimeter(&own, &w).ok() == Some(self.pattern_perimeter)
            && self.witness_perimeter < self.pattern_perimeter
    }
}

#[derive(Clone, Debug)]
pub enum Outcome {
    Certified(Certificate),
    Refuted(Refutation),
}

impl Outcome {
    pub fn radius(&self) -> i64 {
        match self {
            Outcome::Certified(c) => c.radius,
            Outcome::Refuted(r) => r.radius,
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, Outcome::Certified(_))
    }
}

/// Certifies or refutes `pattern` on the single window `B̂_r(center)`.
pub fn certify_radius(pattern: &Pattern, center: &Point, r: i64) -> Result<Outcome> {
    let w = Window::ball(center, r);
    let set = VertexSet::from_pattern(&w, pattern);
    let f = VertexFunction::indicator(&set);
    let id = pattern.id_or_anon().to_string();
    if let Some(current) = find_minimal_current(&f, &w)? {
        return Ok(Outcome::Certified(Certificate {
            pattern_id: id,
            radius: r,
            center: center.clone(),
            current,
        }));
    }
    let own = perimeter(&set, &w)?;
    let best = least_perimeter_solve(&w, &set)?;
    if best.value >= own {
        return Err(Error::Invalid(format!(
            "current search infeasible but no cheaper competitor at radius {r}"
        )));
    }
    Ok(Outcome::Refuted(Refutation {
        pattern_id: id,
        radius: r,
        center: center.clone(),
        witness: best.set,
        pattern_perimeter: own,
        witness_perimeter: best.value,
    }))
}

/// Per-radius outcomes for `r = 1..=r_max`, in radius order.
#[derive(Clone, Debug)]
pub struct CertifyReport {
    pub outcomes: Vec<Outcome>,
}

impl CertifyReport {
    /// Smallest refuting radius, if any.
    pub fn first_refutation(&self) -> Option<&Refutation> {
        self.outcomes.iter().find_map(|o| match o {
            Outcome::Refuted(r) => Some(r),
            _ => None,
        })
    }

    /// `r_max` when every radius certified.
    pub fn certified_to(&self) -> Option<i64> {
        if self.outcomes.iter().all(Outcome::is_certified) {
            self.outcomes.last().map(Outcome::radius)
        } else {
            None
        }
    }

    pub fn certificate(&self, r: i64) -> Option<&Certificate> {
        self.outcomes.iter().find_map(|o| match o {
            Outcome::Certified(c) if c.radius == r => Some(c),
            _ => None,
        })
    }
}

/// Runs the window test on `B̂_r(center)` for every `1 <= r <= r_max`.
///
/// A refutation at any radius proves non-minimality. Certificates at every
/// radius are evidence only: minimality is their limit as `r -> ∞`.
pub fn certify_up_to_radius(
    pattern: &Pattern,
    center: &Point,
    r_max: i64,
) -> Result<CertifyReport> {
    if r_max < 1 {
        return Err(Error::Invalid("r_max must be >= 1".into()));
    }
    let outcomes = (1..=r_max)
        .into_par_iter()
        .map(|r| certify_radius(pattern, center, r))
        .collect::<Result<Vec<_>>>()?;
    Ok(CertifyReport { outcomes })
}

/// Current values on the half-plane `{x_axis >= c}`: +1 on every edge
/// parallel to `axis` (flowing from the larger coordinate down), 0 elsewhere.
pub fn halfspace_calibration(window: &Window, axis: usize) -> Current {
    let g = WindowGraph::new(window);
    Current {
        window: window.clone(),
        values: g
            .edges
            .iter()
            .map(|&(_, _, ax)| if ax == axis { -1 } else { 0 })
            .collect(),
    }
}

impl std::ops::Add for Current {
    type Output = Current;
    fn add(self, rhs: Current) -> Current {
        assert_eq!(self.window, rhs.window);
        Current {
            window: self.window,
            values: self
                .values
                .iter()
                .zip(&rhs.values)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Expr, Sign};
    use crate::mincut::is_least_perimeter;
    use rand::{Rng, SeedableRng};

    fn halfplane() -> Pattern {
        Pattern::new(2, Expr::halfspace(1, Sign::Plus, 0))
            .unwrap()
            .with_id("H")
    }

    fn indicator(w: &Window, p: &Pattern) -> VertexFunction {
        VertexFunction::indicator(&VertexSet::from_pattern(w, p))
    }

    #[test]
    fn halfplane_vertical_calibration() {
        for r in 1..=4 {
            let w = Window::ball(&Point::origin(2), r);
            let f = indicator(&w, &halfplane());
            let cal = halfspace_calibration(&w, 1);
            assert!(is_minimal_current(&cal, &f));
            let found = find_minimal_current(&f, &w).unwrap().expect("feasible");
            assert!(is_minimal_current(&found, &f));
        }
    }

    #[test]
    fn laplacian_interval_at_halfplane_edge() {
        let w = Window::ball(&Point::origin(2), 2);
        let f = indicator(&w, &halfplane());
        // on y = 0: one forced edge down (+1), two horizontal free, one free up
        assert_eq!(
            one_laplacian_interval(&f, &Point::from([0, 0]), &w).unwrap(),
            (-2, 4)
        );
        assert_eq!(
            one_laplacian_interval(&f, &Point::from([0, -1]), &w).unwrap(),
            (-4, 2)
        );
        assert_eq!(
            one_laplacian_interval(&f, &Point::from([0, 2]), &w).unwrap(),
            (-4, 4)
        );
    }

    #[test]
    fn isolated_point_has_no_current() {
        let w = Window::ball(&Point::origin(2), 1);
        let dot = Pattern::from_cells(2, [Point::origin(2)]).unwrap();
        let f = indicator(&w, &dot);
        assert_eq!(
            one_laplacian_interval(&f, &Point::origin(2), &w).unwrap(),
            (4, 4)
        );
        assert!(find_minimal_current(&f, &w).unwrap().is_none());
        match certify_radius(&dot.with_id("dot"), &Point::origin(2), 1).unwrap() {
            Outcome::Refuted(r) => {
                assert_eq!((r.pattern_perimeter, r.witness_perimeter), (4, 0));
            }
            Outcome::Certified(_) => panic!("isolated point certified"),
        }
    }

    #[test]
    fn certificate_roundtrip_and_mutation() {
        let report = certify_up_to_radius(&halfplane(), &Point::origin(2), 3).unwrap();
        assert_eq!(report.certified_to(), Some(3));
        let cert = report.certificate(3).unwrap();
        assert!(validate_certificate(cert, &halfplane()));
        let text = cert.to_text();
        let back = Certificate::parse(&text).unwrap();
        assert_eq!(&back, cert);
        assert_eq!(back.hash(), cert.hash());

        // flipping any single edge value breaks validity
        let w = cert.window();
        let g = WindowGraph::new(&w);
        for e in 0..g.edges.len() {
            let mut bad = cert.clone();
            bad.current.values[e] = if bad.current.values[e] == 1 { 0 } else { 1 };
            assert!(!validate_certificate(&bad, &halfplane()), "edge {e}");
        }
        // tampering with the text is caught by the hash
        let tampered = text.replacen("ID H", "ID G", 1);
        assert!(Certificate::parse(&tampered).is_err());
    }

    #[test]
    fn complement_negates() {
        let report = certify_up_to_radius(&halfplane(), &Point::origin(2), 2).unwrap();
        let neg = report.certificate(2).unwrap().negated();
        assert_eq!(neg.pattern_id, "Hc");
        assert!(validate_certificate(&neg, &halfplane().complement()));
    }

    #[test]
    fn strip_is_refuted() {
        let strip = Pattern::new(
            2,
            Expr::intersection([
                Expr::halfspace(1, Sign::Plus, 0),
                Expr::halfspace(1, Sign::Minus, -2),
            ]),
        )
        .unwrap()
        .with_id("S");
        let report = certify_up_to_radius(&strip, &Point::origin(2), 6).unwrap();
        let r = report.first_refutation().expect("refuted");
        assert!(r.verify(&strip));
        assert!(report.certified_to().is_none());
    }

    #[test]
    fn feasibility_matches_least_perimeter_exhaustively() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        let shapes = [
            ([0, 0], [2, 2]),
            ([0, 0], [3, 2]),
            ([0, 0], [1, 5]),
            ([0, 0], [3, 3]),
        ];
        for (lo, hi) in shapes {
            let w = Window::new(lo, hi).unwrap();
            for _ in 0..300 {
                let p = rng.gen_range(0.2..0.8);
                let k = VertexSet::from_fn(&w, |_| rng.gen_bool(p));
                let f = VertexFunction::indicator(&k);
                let cur = find_minimal_current(&f, &w).unwrap();
                assert_eq!(cur.is_some(), is_least_perimeter(&k, &w).unwrap());
                if let Some(c) = cur {
                    assert!(is_minimal_current(&c, &f));
                }
            }
        }
    }

    #[test]
    fn joint_current_respects_both() {
        let w = Window::ball(&Point::origin(2), 2);
        let a = indicator(&w, &halfplane());
        let b = indicator(
            &w,
            &Pattern::new(2, Expr::halfspace(1, Sign::Plus, 1)).unwrap(),
        );
        let c = find_joint_minimal_current(&[&a, &b], &w).unwrap().unwrap();
        assert!(is_minimal_current(&c, &a) && is_minimal_current(&c, &b));
        let flipped = indicator(&w, &halfplane().complement());
        assert!(find_joint_minimal_current(&[&a, &flipped], &w)
            .unwrap()
            .is_none());
    }

    #[test]
    fn edge_value_lookup() {
        let w = Window::ball(&Point::origin(2), 1);
        let cal = halfspace_calibration(&w, 1);
        assert_eq!(
            cal.value(&Point::from([0, 1]), &Point::from([0, 0])),
            Some(1)
        );
        assert_eq!(
            cal.value(&Point::from([0, 0]), &Point::from([0, 1])),
            Some(-1)
        );
        assert_eq!(
            cal.value(&Point::from([0, 0]), &Point::from([1, 0])),
            Some(0)
        );
    }

    #[test]
    fn indicator_oracle_matches_general_search() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for (lo, hi) in [
            (vec![0, 0], vec![2, 3]),
            (vec![0], vec![5]),
            (vec![0, 0, 0], vec![1, 1, 2]),
        ] {
            let w = Window::new(lo, hi).unwrap();
            let oracle = IndicatorOracle::new(&w);
            for _ in 0..200 {
                let member: Vec<bool> = (0..oracle.graph().len())
                    .map(|_| rng.gen_bool(0.5))
                    .collect();
                let set = VertexSet::from_fn(&w, |p| member[oracle.graph().node(p).unwrap()]);
                let general = find_minimal_current(&VertexFunction::indicator(&set), &w).unwrap();
                assert_eq!(oracle.feasible(&member), general.is_some());
            }
        }
    }
}
