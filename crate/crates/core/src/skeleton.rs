//! Cubical skeletons of patterns and the statistics comparing a pattern with
//! its top-dimensional skeleton.
//!
//! `x ∈ Mᵏ` iff `x` is a corner of a unit `k`-cube whose `2ᵏ` corners all lie
//! in `M`. Corners are always read from the pattern itself, so cubes that
//! stick out of a window are never clipped.

use std::collections::VecDeque;

use num_rational::Rational64;
use rayon::prelude::*;

use crate::currents::{
    certify_up_to_radius, one_laplacian_interval, validate_certificate, Outcome,
};
use crate::energy::VertexFunction;
use crate::error::{Error, Result};
use crate::lattice::{neighbors, BoxIndex, Expr, Pattern, Point, Sign, VertexSet, Window};

/// Offsets `Σ tᵢ sᵢ eᵢ` of the corners of every unit `k`-cube having the
/// origin as a corner, one list per cube.
fn cubes_at_origin(n: usize, k: usize) -> Vec<Vec<Vec<i64>>> {
    let mut out = Vec::new();
    for axes in 0u32..1 << n {
        if axes.count_ones() as usize != k {
            continue;
        }
        let chosen: Vec<usize> = (0..n).filter(|i| axes >> i & 1 == 1).collect();
        for signs in 0u32..1 << k {
            let mut corners = Vec::with_capacity(1 << k);
            for t in 0u32..1 << k {
                let mut off = vec![0i64; n];
                for (j, &axis) in chosen.iter().enumerate() {
                    if t >> j & 1 == 1 {
                        off[axis] = if signs >> j & 1 == 1 { -1 } else { 1 };
                    }
                }
                corners.push(off);
            }
            out.push(corners);
        }
    }
    out
}

fn check_k(a: &Pattern, k: usize) -> Result<()> {
    if k > a.dim {
        return Err(Error::Invalid(format!(
            "k = {k} exceeds the dimension {}",
            a.dim
        )));
    }
    Ok(())
}

pub fn in_skeleton(a: &Pattern, k: usize, x: &Point) -> bool {
    cubes_at_origin(a.dim, k).iter().any(|cube| {
        cube.iter()
            .all(|off| a.contains(&x.add(&Point::new(off.clone()))))
    })
}

/// `Mᵏ` on the closure of `w`.
pub fn k_skeleton(a: &Pattern, k: usize, w: &Window) -> Result<VertexSet> {
    check_k(a, k)?;
    let cubes = cubes_at_origin(a.dim, k);
    let pts: Vec<Point> = w.closure_points().collect();
    let member: Vec<bool> = pts
        .par_iter()
        .map(|x| {
            cubes.iter().any(|cube| {
                cube.iter()
                    .all(|off| a.contains(&x.add(&Point::new(off.clone()))))
            })
        })
        .collect();
    Ok(VertexSet::from_points(
        w,
        pts.iter().zip(member).filter(|(_, m)| *m).map(|(p, _)| p),
    ))
}

/// `Mᵏ` as a pattern in its own right (a union of translated copies of `M`).
pub fn skeleton_pattern(a: &Pattern, k: usize) -> Result<Pattern> {
    check_k(a, k)?;
    let cubes = cubes_at_origin(a.dim, k);
    let expr = Expr::union(
        cubes
            .iter()
            .map(|cube| {
                Expr::intersection(
                    cube.iter()
                        .map(|off| {
                            a.expr
                                .clone()
                                .translate(off.iter().map(|v| -v).collect::<Vec<_>>())
                        })
                        .collect::<Vec<_>>(),
                )
            })
            .collect::<Vec<_>>(),
    );
    let p = Pattern::new(a.dim, expr)?;
    Ok(match &a.id {
        Some(id) => p.with_id(format!("{id}^{k}")),
        None => p,
    })
}

/// `M³ ∪ M²` for a pattern in Z³.
pub fn reduced_pattern(a: &Pattern) -> Result<Pattern> {
    require_3d(a)?;
    let p = Pattern::new(
        3,
        Expr::union([skeleton_pattern(a, 3)?.expr, skeleton_pattern(a, 2)?.expr]),
    )?;
    Ok(match &a.id {
        Some(id) => p.with_id(format!("{id}^32")),
        None => p,
    })
}

fn require_3d(a: &Pattern) -> Result<()> {
    if a.dim != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: a.dim,
        });
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct ReductionReport {
    pub r_max: i64,
    /// Radius up to which `M³ ∪ M²` certifies (0 if it fails at radius 1).
    pub reduced_certified_to: i64,
    pub reduced_refuted_at: Option<i64>,
    /// Every certificate of `M` also validates for `M³ ∪ M²`.
    pub restriction_valid: bool,
    /// Whether `M³ ∪ M²` agrees with `M` on `B̂_{r_max}`.
    pub unchanged: bool,
}

impl ReductionReport {
    pub fn passed(&self) -> bool {
        self.reduced_refuted_at.is_none() && self.restriction_valid
    }
}

/// Certifies `M³ ∪ M²` to `r_max` and checks that the certificates of `M`
/// carry over. Refuses patterns that are not themselves certified.
pub fn check_skeleton_reduction_3d(
    a: &Pattern,
    center: &Point,
    r_max: i64,
) -> Result<ReductionReport> {
    require_3d(a)?;
    let base = certify_up_to_radius(a, center, r_max)?;
    if let Some(r) = base.first_refutation() {
        return Err(Error::NotCertified { radius: r.radius });
    }
    let reduced = reduced_pattern(a)?;
    let rep = certify_up_to_radius(&reduced, center, r_max)?;
    let refuted = rep.first_refutation().map(|r| r.radius);
    let restriction_valid = base.outcomes.iter().all(|o| match o {
        Outcome::Certified(c) => validate_certificate(c, &reduced),
        Outcome::Refuted(_) => false,
    });
    let w = Window::ball(center, r_max);
    let unchanged = w.points().all(|p| a.contains(&p) == reduced.contains(&p));
    Ok(ReductionReport {
        r_max,
        reduced_certified_to: refuted.map_or(r_max, |r| r - 1),
        reduced_refuted_at: refuted,
        restriction_valid,
        unchanged,
    })
}

/// Smallest integer `r >= 1` with `(1 + 1/2n)^r > (2r + 1)^n`.
pub fn c1(n: usize) -> i64 {
    let n = n as f64;
    let mut r = 1i64;
    while (r as f64) * (1.0 + 1.0 / (2.0 * n)).ln() <= n * ((2 * r + 1) as f64).ln() {
        r += 1;
    }
    r
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoughIsometry {
    pub radius: i64,
    pub dim: usize,
    /// `|Mⁿ ∩ B̂_r| / |M ∩ B̂_r|`.
    pub vol_ratio: Rational64,
    /// `|δMⁿ ∩ B̂_r| / |δM ∩ B̂_r|`.
    pub bdy_ratio: Rational64,
    /// Largest graph distance inside `M` from a member of `B̂_r` to `Mⁿ`;
    /// `None` when some member cannot reach `Mⁿ` within the search ball.
    pub max_skeleton_dist: Option<i64>,
    pub c1: i64,
    /// `|(M − Mⁿ) ∩ B̂_r|`.
    pub thin: usize,
    /// `2n · |Mⁿ ∩ N₁(M − Mⁿ) ∩ B̂_r|`.
    pub thin_bound: usize,
    /// `Mⁿ ∩ B̂_r` is empty.
    pub empty_top: bool,
}

impl RoughIsometry {
    pub fn bdy_ratio_holds(&self) -> bool {
        self.bdy_ratio >= Rational64::new(1, 1 + 2 * self.dim as i64)
    }

    pub fn distance_holds(&self) -> bool {
        self.max_skeleton_dist.is_some_and(|d| d <= self.c1)
    }

    pub fn thin_bound_holds(&self) -> bool {
        self.thin <= self.thin_bound
    }
}

fn ratio(a: usize, b: usize) -> Rational64 {
    if b == 0 {
        Rational64::from_integer(if a == 0 { 1 } else { i64::MAX })
    } else {
        Rational64::new(a as i64, b as i64)
    }
}

fn has_outside_neighbour(x: &Point, inside: impl Fn(&Point) -> bool) -> bool {
    neighbors(x).iter().any(|y| !inside(y))
}

pub fn rough_isometry_stats(a: &Pattern, center: &Point, r: i64) -> Result<RoughIsometry> {
    let n = a.dim;
    let c = c1(n);
    let ball = Window::ball(center, r);
    let near = Window::ball(center, r + 1);
    let top = k_skeleton(a, n, &near)?;
    let in_m = |p: &Point| a.contains(p);
    let in_top = |p: &Point| top.get(p);

    let (mut m_count, mut top_count, mut dm, mut dtop, mut thin) =
        (0usize, 0usize, 0usize, 0usize, 0usize);
    let mut thin_bound_set = 0usize;
    for p in ball.points() {
        let pm = in_m(&p);
        let pt = in_top(&p);
        m_count += pm as usize;
        top_count += pt as usize;
        if pm && has_outside_neighbour(&p, in_m) {
            dm += 1;
        }
        if pt && has_outside_neighbour(&p, in_top) {
            dtop += 1;
        }
        if pm && !pt {
            thin += 1;
        }
        if pt && neighbors(&p).iter().any(|q| in_m(q) && !in_top(q)) {
            thin_bound_set += 1;
        }
    }

    // Paths are confined to a ball around B̂_r, so the distances found are
    // upper bounds; the ball grows until every member is reached or the
    // margin passes c₁.
    let mut margin = 2;
    let max_dist = loop {
        let d = distances_to_top(a, &ball, r + margin)?;
        if d.is_some() || margin > c {
            break d;
        }
        margin = (2 * margin).min(c + 1);
    };
    Ok(RoughIsometry {
        radius: r,
        dim: n,
        vol_ratio: ratio(top_count, m_count),
        bdy_ratio: ratio(dtop, dm),
        max_skeleton_dist: max_dist,
        c1: c,
        thin,
        thin_bound: 2 * n * thin_bound_set,
        empty_top: top_count == 0,
    })
}

/// Largest distance, through members inside `B̂_reach`, from a member of
/// `ball` to the top skeleton; `None` if some member is cut off.
fn distances_to_top(a: &Pattern, ball: &Window, reach: i64) -> Result<Option<i64>> {
    let center = Point(
        (0..a.dim)
            .map(|i| (ball.lo()[i] + ball.hi()[i]) / 2)
            .collect::<Vec<_>>(),
    );
    let big = Window::ball(&center, reach);
    let top = k_skeleton(a, a.dim, &big)?;
    let idx = BoxIndex::new(&big);
    let mut dist = vec![i64::MAX; idx.len()];
    let mut q = VecDeque::new();
    for p in big.points() {
        if top.get(&p) {
            dist[idx.index(&p).unwrap()] = 0;
            q.push_back(p);
        }
    }
    while let Some(p) = q.pop_front() {
        let d = dist[idx.index(&p).unwrap()];
        for y in neighbors(&p) {
            if let Some(j) = idx.index(&y) {
                if dist[j] == i64::MAX && big.contains(&y) && a.contains(&y) {
                    dist[j] = d + 1;
                    q.push_back(y);
                }
            }
        }
    }
    let mut worst = 0;
    for p in ball.points().filter(|p| a.contains(p)) {
        match dist[idx.index(&p).unwrap()] {
            i64::MAX => return Ok(None),
            d => worst = worst.max(d),
        }
    }
    Ok(Some(worst))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecayPoint {
    pub radius: i64,
    /// `min |δA′| / |A′|` over the components `A′` of `Mⁿ ∩ B̂_r`.
    pub ratio: Option<Rational64>,
    /// Some component stays clear of the window edge.
    pub finite_component: bool,
}

/// Isoperimetric ratios of the top skeleton's components for each radius.
pub fn isoperimetric_decay(a: &Pattern, center: &Point, radii: &[i64]) -> Result<Vec<DecayPoint>> {
    let n = a.dim;
    radii
        .par_iter()
        .map(|&r| {
            let w = Window::ball(center, r);
            let top = k_skeleton(a, n, &w)?;
            let idx = BoxIndex::new(&w);
            let mut comp = vec![usize::MAX; idx.len()];
            let mut best: Option<Rational64> = None;
            let mut finite = false;
            for s in w.points() {
                let si = idx.index(&s).unwrap();
                if !top.get(&s) || comp[si] != usize::MAX {
                    continue;
                }
                comp[si] = si;
                let mut members = vec![s.clone()];
                let mut q = VecDeque::from([s]);
                while let Some(p) = q.pop_front() {
                    for y in neighbors(&p) {
                        if let Some(j) = idx.index(&y) {
                            if comp[j] == usize::MAX && top.get(&y) {
                                comp[j] = si;
                                members.push(y.clone());
                                q.push_back(y);
                            }
                        }
                    }
                }
                let in_comp = |p: &Point| idx.index(p).is_some_and(|j| comp[j] == si);
                let bdy = members
                    .iter()
                    .filter(|p| has_outside_neighbour(p, in_comp))
                    .count();
                let touches_edge = members
                    .iter()
                    .any(|p| neighbors(p).iter().any(|y| !w.contains(y)));
                finite |= !touches_edge;
                let r = Rational64::new(bdy as i64, members.len() as i64);
                best = Some(best.map_or(r, |b| b.min(r)));
            }
            Ok(DecayPoint {
                radius: r,
                ratio: best,
                finite_component: finite,
            })
        })
        .collect()
}

/// A pattern whose top skeleton violates the local minimality condition at
/// `witness`: `0 ∉ Δ₁(1_{M³})(witness)`.
#[derive(Clone, Debug)]
pub struct ObstructionFixture {
    pub pattern: Pattern,
    pub witness: Point,
}

impl ObstructionFixture {
    /// The interval `Δ₁(1_{M³})(witness)` on the unit ball around the witness.
    pub fn interval(&self) -> Result<(i64, i64)> {
        let w = Window::ball(&self.witness, 1);
        let top = k_skeleton(&self.pattern, 3, &w)?;
        one_laplacian_interval(&VertexFunction::indicator(&top), &self.witness, &w)
    }

    pub fn exhibits_obstruction(&self) -> Result<bool> {
        let (lo, hi) = self.interval()?;
        Ok(lo > 0 || hi < 0)
    }
}

/// Orthant `{sᵢ (xᵢ − cᵢ) >= 0}` with signs given as a bit mask (bit set = minus).
fn orthant(corner: [i64; 3], signs: u8) -> Expr {
    let s = |i: u8| {
        if signs >> i & 1 == 1 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    };
    Expr::orthant(corner, [s(0), s(1), s(2)])
}

/// Unions of two orthants with corners near the origin, and their
/// complements, searched for a vertex of `B̂_1` where `M³` fails the local
/// test while `M` itself certifies to `r_check`. `budget` caps the number of
/// patterns examined.
pub fn search_m3_obstruction(r_check: i64, budget: usize) -> Result<Option<ObstructionFixture>> {
    let corners: Vec<[i64; 3]> = (0..27)
        .map(|i| [i % 3 - 1, i / 3 % 3 - 1, i / 9 - 1])
        .collect();
    let mut pieces = Vec::new();
    for c in &corners {
        for s in 0..8u8 {
            pieces.push(orthant(*c, s));
        }
    }
    let mut tried = 0;
    for i in 0..pieces.len() {
        for j in i + 1..pieces.len() {
            let union = Pattern::new(3, Expr::union([pieces[i].clone(), pieces[j].clone()]))?;
            for p in [union.complement(), union] {
                if tried == budget {
                    return Ok(None);
                }
                tried += 1;
                let p = p.with_id("m3-obstruction");
                let w = Window::ball(&Point::origin(3), 1);
                let top = k_skeleton(&p, 3, &w)?;
                let f = VertexFunction::indicator(&top);
                for x in w.points() {
                    let (lo, hi) = one_laplacian_interval(&f, &x, &w)?;
                    if lo <= 0 && 0 <= hi {
                        continue;
                    }
                    if certify_up_to_radius(&p, &x, r_check)?
                        .certified_to()
                        .is_some()
                    {
                        return Ok(Some(ObstructionFixture {
                            pattern: p,
                            witness: x,
                        }));
                    }
                    break;
                }
            }
        }
    }
    Ok(None)
}

/// The configuration found by [`search_m3_obstruction`], kept as a fixture:
/// the complement of `{x ≤ -1, y ≥ -1, z ≥ -1} ∪ {x ≥ 1, y ≤ -1, z ≤ -1}`.
/// The witness `(0,-1,-1)` lies in no unit cube of `M` but has four
/// neighbours in `M³`.
pub fn m3_obstruction_fixture() -> ObstructionFixture {
    let expr = Expr::union([
        Expr::orthant([-1, -1, -1], [Sign::Minus, Sign::Plus, Sign::Plus]),
        Expr::orthant([1, -1, -1], [Sign::Plus, Sign::Minus, Sign::Minus]),
    ])
    .complement();
    ObstructionFixture {
        pattern: Pattern::new(3, expr).unwrap().with_id("m3-obstruction"),
        witness: Point::from([0, -1, -1]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Sign;

    fn halfspace3() -> Pattern {
        Pattern::new(3, Expr::halfspace(2, Sign::Plus, 0))
            .unwrap()
            .with_id("H3")
    }

    #[test]
    fn halfspace_top_skeleton_is_itself() {
        let a = halfspace3();
        let w = Window::ball(&Point::origin(3), 2);
        let top = k_skeleton(&a, 3, &w).unwrap();
        assert!(w.closure_points().all(|p| top.get(&p) == a.contains(&p)));
    }

    #[test]
    fn single_point_has_no_edges() {
        let a = Pattern::from_cells(3, [Point::origin(3)]).unwrap();
        let w = Window::ball(&Point::origin(3), 1);
        assert!(k_skeleton(&a, 1, &w).unwrap().is_empty());
        assert_eq!(k_skeleton(&a, 0, &w).unwrap().len(), 1);
    }

    #[test]
    fn pendant_edge_is_in_one_skeleton_only() {
        let a = Pattern::new(
            3,
            Expr::union([
                Expr::halfspace(2, Sign::Minus, 0),
                Expr::cells([Point::from([0, 0, 1])]),
            ]),
        )
        .unwrap();
        let tip = Point::from([0, 0, 1]);
        assert!(in_skeleton(&a, 1, &tip));
        assert!(!in_skeleton(&a, 2, &tip));
    }

    #[test]
    fn skeletons_nest() {
        let a = m3_obstruction_fixture().pattern;
        let w = Window::ball(&Point::origin(3), 2);
        let sk: Vec<VertexSet> = (0..=3).map(|k| k_skeleton(&a, k, &w).unwrap()).collect();
        for k in 1..=3 {
            assert!(w
                .closure_points()
                .all(|p| !sk[k].get(&p) || sk[k - 1].get(&p)));
        }
        let pat = skeleton_pattern(&a, 3).unwrap();
        assert!(w
            .closure_points()
            .all(|p| pat.contains(&p) == sk[3].get(&p)));
    }

    #[test]
    fn c1_values() {
        // (5/4)^39 <= 79^2 < (5/4)^40 vs 81^2
        assert_eq!(c1(2), 40);
        assert_eq!(c1(3), 104);
    }

    #[test]
    fn halfspace_stats() {
        let s = rough_isometry_stats(&halfspace3(), &Point::origin(3), 3).unwrap();
        assert_eq!(s.vol_ratio, Rational64::from_integer(1));
        assert_eq!(s.bdy_ratio, Rational64::from_integer(1));
        assert_eq!(s.max_skeleton_dist, Some(0));
        assert!(s.bdy_ratio_holds() && s.distance_holds() && s.thin_bound_holds());
    }

    #[test]
    fn halfspace_decay_is_decreasing() {
        let d = isoperimetric_decay(&halfspace3(), &Point::origin(3), &[2, 4, 8]).unwrap();
        let r: Vec<Rational64> = d.iter().map(|p| p.ratio.unwrap()).collect();
        assert!(r[0] > r[1] && r[1] > r[2]);
        assert!(d.iter().all(|p| !p.finite_component));
    }

    #[test]
    fn finite_component_is_flagged() {
        let a = Pattern::new(3, Expr::boxed([-1, -1, -1], [0, 0, 0])).unwrap();
        let d = isoperimetric_decay(&a, &Point::origin(3), &[4, 6, 8]).unwrap();
        for p in d {
            assert!(p.finite_component);
            assert_eq!(p.ratio, Some(Rational64::from_integer(1)));
        }
    }

    #[test]
    fn fixture_shows_the_obstruction() {
        let f = m3_obstruction_fixture();
        assert!(f.exhibits_obstruction().unwrap());
        assert!(!in_skeleton(&f.pattern, 3, &f.witness));
        assert!(f.pattern.contains(&f.witness));
    }

    #[test]
    fn reduction_on_halfspace() {
        let rep = check_skeleton_reduction_3d(&halfspace3(), &Point::origin(3), 3).unwrap();
        assert!(rep.passed() && rep.unchanged);
    }

    #[test]
    fn reduction_refuses_uncertified() {
        let slab = Pattern::new(
            3,
            Expr::intersection([
                Expr::halfspace(2, Sign::Plus, 0),
                Expr::halfspace(2, Sign::Minus, -1),
            ]),
        )
        .unwrap();
        assert!(matches!(
            check_skeleton_reduction_3d(&slab, &Point::origin(3), 4),
            Err(Error::NotCertified { .. })
        ));
    }

    #[test]
    fn rejects_wrong_dimension() {
        let a = Pattern::new(2, Expr::halfspace(1, Sign::Plus, 0)).unwrap();
        assert!(check_skeleton_reduction_3d(&a, &Point::origin(2), 2).is_err());
        assert!(k_skeleton(&a, 3, &Window::ball(&Point::origin(2), 1)).is_err());
    }
}
