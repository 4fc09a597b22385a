//! Executable structural checks for minimal patterns.
//!
//! Each checker looks at a pattern through a finite window and returns a
//! [`PropertyReport`]. Global hypotheses (rays, unboundedness) are replaced
//! by window surrogates; the report names the surrogate it used.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use rayon::prelude::*;

use crate::catalog2d::classify_boundary;
use crate::currents::certify_up_to_radius;
use crate::error::{Error, Result};
use crate::lattice::{neighbors, Pattern, Point, Window};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    /// A concrete counterexample: vertices, edges or a competitor, with a note.
    Violated {
        witness: Vec<Point>,
        note: String,
    },
    NotApplicable(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyReport {
    pub property: &'static str,
    pub pattern_id: String,
    pub window: Window,
    pub verdict: Verdict,
    /// The finite stand-in used for a global hypothesis, if any.
    pub surrogate: Option<&'static str>,
}

impl PropertyReport {
    fn new(property: &'static str, a: &Pattern, w: &Window, verdict: Verdict) -> Self {
        PropertyReport {
            property,
            pattern_id: a.id_or_anon().to_string(),
            window: w.clone(),
            verdict,
            surrogate: None,
        }
    }

    fn with_surrogate(mut self, s: &'static str) -> Self {
        self.surrogate = Some(s);
        self
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn violated(&self) -> bool {
        matches!(self.verdict, Verdict::Violated { .. })
    }
}

fn fmt_point(p: &Point) -> String {
    let c: Vec<String> = p.0.iter().map(|v| v.to_string()).collect();
    format!("({})", c.join(","))
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PROP {} {} ", self.property, self.pattern_id)?;
        match &self.verdict {
            Verdict::Holds => write!(f, "holds")?,
            Verdict::Violated { witness, note } => {
                write!(f, "violated")?;
                for p in witness {
                    write!(f, " {}", fmt_point(p))?;
                }
                write!(f, " {note}")?;
            }
            Verdict::NotApplicable(why) => write!(f, "not-applicable {why}")?,
        }
        if let Some(s) = self.surrogate {
            write!(f, " surrogate={s}")?;
        }
        Ok(())
    }
}

fn violated(witness: Vec<Point>, note: impl Into<String>) -> Verdict {
    Verdict::Violated {
        witness,
        note: note.into(),
    }
}

fn degree(a: &Pattern, x: &Point) -> usize {
    neighbors(x).iter().filter(|y| a.contains(y)).count()
}

/// Every member of `A ∩ W` has at least `n` member neighbours, and no two
/// adjacent members both have exactly `n`.
pub fn check_min_degree(a: &Pattern, w: &Window) -> PropertyReport {
    let n = a.dim;
    let mut verdict = Verdict::Holds;
    for x in w.points().filter(|x| a.contains(x)) {
        let d = degree(a, &x);
        if d < n {
            verdict = violated(vec![x], format!("degree={d}"));
            break;
        }
        if d == n {
            if let Some(y) = neighbors(&x)
                .into_iter()
                .find(|y| y > &x && w.contains(y) && a.contains(y) && degree(a, y) == n)
            {
                verdict = violated(vec![x, y], format!("adjacent-degree={n}"));
                break;
            }
        }
    }
    PropertyReport::new("min-degree", a, w, verdict)
}

fn require_planar(a: &Pattern, property: &'static str, w: &Window) -> Option<PropertyReport> {
    (a.dim != 2).then(|| {
        PropertyReport::new(
            property,
            a,
            w,
            Verdict::NotApplicable(format!("dim={}", a.dim)),
        )
    })
}

/// Components of `A ∩ W` under lattice adjacency inside `W`.
fn components(a: &Pattern, w: &Window) -> Vec<Vec<Point>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for s in w.points() {
        if !a.contains(&s) || seen.contains(&s) {
            continue;
        }
        seen.insert(s.clone());
        let mut comp = vec![s.clone()];
        let mut q = VecDeque::from([s]);
        while let Some(p) = q.pop_front() {
            for y in neighbors(&p) {
                if w.contains(&y) && a.contains(&y) && seen.insert(y.clone()) {
                    comp.push(y.clone());
                    q.push_back(y);
                }
            }
        }
        out.push(comp);
    }
    out
}

/// On every axis-parallel line, each component of `A ∩ W` meets the line
/// in a contiguous segment.
pub fn check_convexity(a: &Pattern, w: &Window) -> PropertyReport {
    if let Some(r) = require_planar(a, "convexity", w) {
        return r;
    }
    for comp in components(a, w) {
        let members: BTreeSet<&Point> = comp.iter().collect();
        for axis in 0..2 {
            let other = 1 - axis;
            let mut lines: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
            for p in &comp {
                lines.entry(p[other]).or_default().push(p[axis]);
            }
            for (line, xs) in lines {
                let (lo, hi) = (*xs.iter().min().unwrap(), *xs.iter().max().unwrap());
                if xs.len() as i64 == hi - lo + 1 {
                    continue;
                }
                let at = |t: i64| {
                    let mut c = [0i64; 2];
                    c[axis] = t;
                    c[other] = line;
                    Point::from(c)
                };
                let gap = (lo..=hi).map(at).find(|p| !members.contains(p)).unwrap();
                return PropertyReport::new(
                    "convexity",
                    a,
                    w,
                    violated(vec![at(lo), gap, at(hi)], format!("axis={axis}")),
                )
                .with_surrogate("components-within-window");
            }
        }
    }
    PropertyReport::new("convexity", a, w, Verdict::Holds)
        .with_surrogate("components-within-window")
}

/// No two parallel straight boundary runs that both (nearly) cross the window.
pub fn check_no_parallel_rays(a: &Pattern, w: &Window) -> PropertyReport {
    if let Some(r) = require_planar(a, "no-parallel-rays", w) {
        return r;
    }
    let b = match classify_boundary(a, w) {
        Ok(b) => b,
        Err(e) => {
            return PropertyReport::new(
                "no-parallel-rays",
                a,
                w,
                Verdict::NotApplicable(e.to_string()),
            )
        }
    };
    let mut verdict = Verdict::Holds;
    for axis in 0..2 {
        let long: Vec<_> = b
            .flat_runs
            .iter()
            .filter(|r| r.axis == axis && r.len + 2 >= w.side(axis))
            .collect();
        if let [r1, r2, ..] = long.as_slice() {
            verdict = violated(
                vec![r1.start.clone(), r2.start.clone()],
                format!("axis={axis}"),
            );
            break;
        }
    }
    PropertyReport::new("no-parallel-rays", a, w, verdict)
        .with_surrogate("flat-runs-spanning-window")
}

/// Column extrema `H_i`, `h_i` read inside a window. `None` in `top`/`bottom`
/// means the column reaches the window face (treated as infinite); a column
/// without members in the window is absent.
#[derive(Clone, Debug)]
pub struct ColumnExtrema {
    pub axis: usize,
    pub top: BTreeMap<Vec<i64>, Option<i64>>,
    pub bottom: BTreeMap<Vec<i64>, Option<i64>>,
}

fn project(p: &Point, axis: usize) -> Vec<i64> {
    p.0.iter()
        .enumerate()
        .filter(|(i, _)| *i != axis)
        .map(|(_, v)| *v)
        .collect()
}

impl ColumnExtrema {
    pub fn new(a: &Pattern, axis: usize, w: &Window) -> ColumnExtrema {
        let (lo, hi) = (w.lo()[axis], w.hi()[axis]);
        let mut top = BTreeMap::new();
        let mut bottom = BTreeMap::new();
        for p in w.points().filter(|p| a.contains(p)) {
            let c = project(&p, axis);
            let t = p[axis];
            let up = if t == hi { None } else { Some(t) };
            let down = if t == lo { None } else { Some(t) };
            top.entry(c.clone())
                .and_modify(|v: &mut Option<i64>| *v = v.and_then(|v| up.map(|u| v.max(u))))
                .or_insert(up);
            bottom
                .entry(c)
                .and_modify(|v: &mut Option<i64>| *v = v.and_then(|v| down.map(|u| v.min(u))))
                .or_insert(down);
        }
        ColumnExtrema { axis, top, bottom }
    }
}

/// Whether every point of `omega` lies in a unit cube of `omega` (of the
/// projected dimension).
pub fn is_admissible(omega: &BTreeSet<Vec<i64>>) -> bool {
    let Some(first) = omega.iter().next() else {
        return false;
    };
    let m = first.len();
    omega.iter().all(|x| {
        (0u32..1 << m).any(|signs| {
            (0u32..1 << m).all(|t| {
                let y: Vec<i64> = (0..m)
                    .map(|i| {
                        let step = if signs >> i & 1 == 1 { -1 } else { 1 };
                        x[i] + if t >> i & 1 == 1 { step } else { 0 }
                    })
                    .collect();
                omega.contains(&y)
            })
        })
    })
}

fn ring(omega: &BTreeSet<Vec<i64>>) -> BTreeSet<Vec<i64>> {
    let mut out = BTreeSet::new();
    for x in omega {
        for i in 0..x.len() {
            for d in [-1, 1] {
                let mut y = x.clone();
                y[i] += d;
                if !omega.contains(&y) {
                    out.insert(y);
                }
            }
        }
    }
    out
}

/// The maximum principle for one column set `omega` (points of the
/// projection along `axis`): the column heights over `omega` may not peak
/// strictly above those on the surrounding ring, nor dip strictly below.
pub fn check_max_principle(
    a: &Pattern,
    axis: usize,
    omega: &BTreeSet<Vec<i64>>,
    w: &Window,
) -> Result<PropertyReport> {
    if axis >= a.dim {
        return Err(Error::Invalid(format!("axis {axis} out of range")));
    }
    Ok(max_principle_with(
        a,
        &ColumnExtrema::new(a, axis, w),
        omega,
        w,
    ))
}

fn max_principle_with(
    a: &Pattern,
    ex: &ColumnExtrema,
    omega: &BTreeSet<Vec<i64>>,
    w: &Window,
) -> PropertyReport {
    let name = "max-principle";
    let na = |why: &str| {
        PropertyReport::new(name, a, w, Verdict::NotApplicable(why.to_string()))
            .with_surrogate("columns-within-window")
    };
    if !is_admissible(omega) {
        return na("omega-not-a-closed-domain");
    }
    let outer = ring(omega);
    if omega.iter().chain(&outer).any(|c| !ex.top.contains_key(c)) {
        return na("omega2-outside-projection");
    }
    let column = |c: &Vec<i64>, t: i64| {
        let mut v = c.clone();
        v.insert(ex.axis, t);
        Point(v)
    };
    // max side: H over omega finite and strictly above every ring column
    let h_in: Option<Vec<i64>> = omega.iter().map(|c| ex.top[c]).collect();
    if let Some(h_in) = h_in {
        let hmax = *h_in.iter().max().unwrap();
        let ring_max = outer
            .iter()
            .map(|c| ex.top[c].unwrap_or(i64::MAX))
            .max()
            .unwrap();
        if ring_max < hmax {
            let at = omega.iter().find(|c| ex.top[*c] == Some(hmax)).unwrap();
            return PropertyReport::new(
                name,
                a,
                w,
                violated(
                    vec![column(at, hmax)],
                    format!("strict-interior-max H={hmax} ring={ring_max}"),
                ),
            )
            .with_surrogate("columns-within-window");
        }
    }
    let l_in: Option<Vec<i64>> = omega.iter().map(|c| ex.bottom[c]).collect();
    if let Some(l_in) = l_in {
        let lmin = *l_in.iter().min().unwrap();
        let ring_min = outer
            .iter()
            .map(|c| ex.bottom[c].unwrap_or(i64::MIN))
            .min()
            .unwrap();
        if ring_min > lmin {
            let at = omega.iter().find(|c| ex.bottom[*c] == Some(lmin)).unwrap();
            return PropertyReport::new(
                name,
                a,
                w,
                violated(
                    vec![column(at, lmin)],
                    format!("strict-interior-min h={lmin} ring={ring_min}"),
                ),
            )
            .with_surrogate("columns-within-window");
        }
    }
    PropertyReport::new(name, a, w, Verdict::Holds).with_surrogate("columns-within-window")
}

/// All boxes of side at least 2 in the projection of `W` (shrunk by one so
/// that the surrounding ring stays inside), along every axis. Stops at the
/// first violation.
pub fn check_max_principle_boxes(a: &Pattern, w: &Window) -> PropertyReport {
    let mut last = None;
    for axis in 0..a.dim {
        let ex = ColumnExtrema::new(a, axis, w);
        let dims: Vec<usize> = (0..a.dim).filter(|&i| i != axis).collect();
        let ranges: Vec<(i64, i64)> = dims
            .iter()
            .map(|&i| (w.lo()[i] + 1, w.hi()[i] - 1))
            .collect();
        for omega in boxes(&ranges) {
            let rep = max_principle_with(a, &ex, &omega, w);
            if rep.violated() {
                return rep;
            }
            last = Some(rep);
        }
    }
    match last {
        Some(r) if r.holds() || matches!(r.verdict, Verdict::NotApplicable(_)) => {
            PropertyReport::new("max-principle", a, w, Verdict::Holds)
                .with_surrogate("all-boxes-in-window")
        }
        _ => PropertyReport::new(
            "max-principle",
            a,
            w,
            Verdict::NotApplicable("no-admissible-box".into()),
        ),
    }
}

fn boxes(ranges: &[(i64, i64)]) -> Vec<BTreeSet<Vec<i64>>> {
    // every [lo_i, hi_i] with hi_i > lo_i inside the ranges
    let mut per_axis: Vec<Vec<(i64, i64)>> = Vec::new();
    for &(lo, hi) in ranges {
        let mut v = Vec::new();
        for a in lo..=hi {
            for b in a + 1..=hi {
                v.push((a, b));
            }
        }
        per_axis.push(v);
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; per_axis.len()];
    if per_axis.iter().any(|v| v.is_empty()) {
        return out;
    }
    loop {
        let spans: Vec<(i64, i64)> = idx.iter().zip(&per_axis).map(|(&i, v)| v[i]).collect();
        let mut set = BTreeSet::new();
        let mut cur: Vec<i64> = spans.iter().map(|s| s.0).collect();
        'fill: loop {
            set.insert(cur.clone());
            for k in 0..cur.len() {
                if cur[k] < spans[k].1 {
                    cur[k] += 1;
                    continue 'fill;
                }
                cur[k] = spans[k].0;
            }
            break;
        }
        out.push(set);
        let mut k = 0;
        loop {
            if k == idx.len() {
                return out;
            }
            idx[k] += 1;
            if idx[k] < per_axis[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// The axis along which `A ∩ W` is confined strictly inside the window, if
/// any (the window stand-in for "bounded by two parallel hyperplanes").
pub fn slab_axis(a: &Pattern, w: &Window) -> Option<usize> {
    let members: Vec<Point> = w.points().filter(|p| a.contains(p)).collect();
    if members.is_empty() {
        return None;
    }
    (0..a.dim).find(|&i| members.iter().all(|p| p[i] > w.lo()[i] && p[i] < w.hi()[i]))
}

/// A pattern confined between two parallel hyperplanes must be refuted by
/// the certifier within `r_budget`.
pub fn check_slab_refutation(a: &Pattern, center: &Point, r_budget: i64) -> Result<PropertyReport> {
    let w = Window::ball(center, r_budget);
    if slab_axis(a, &w).is_none() {
        return Ok(PropertyReport::new(
            "slab-refutation",
            a,
            &w,
            Verdict::NotApplicable("not-slab-bounded".into()),
        ));
    }
    let rep = certify_up_to_radius(a, center, r_budget)?;
    let verdict = match rep.first_refutation() {
        Some(_) => Verdict::Holds,
        None => violated(vec![center.clone()], format!("certified-to={r_budget}")),
    };
    Ok(PropertyReport::new("slab-refutation", a, &w, verdict).with_surrogate("slab-within-window"))
}

/// Refuting radius of a slab-bounded pattern, if the certifier refutes it.
pub fn slab_refuting_radius(a: &Pattern, center: &Point, r_budget: i64) -> Result<Option<i64>> {
    Ok(certify_up_to_radius(a, center, r_budget)?
        .first_refutation()
        .map(|r| r.radius))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GrowthPoint {
    pub radius: i64,
    /// `|δA ∩ B̂_r|`.
    pub boundary: usize,
    /// `|A ∩ B̂_r|`.
    pub volume: usize,
    /// `4n²(2r+1)^(n-1)`.
    pub bound: u64,
}

pub fn growth_bound(n: usize, r: i64) -> u64 {
    4 * (n * n) as u64 * ((2 * r + 1) as u64).pow(n as u32 - 1)
}

pub fn growth_report(a: &Pattern, center: &Point, r_max: i64) -> Vec<GrowthPoint> {
    (1..=r_max)
        .into_par_iter()
        .map(|r| {
            let w = Window::ball(center, r);
            let (mut boundary, mut volume) = (0, 0);
            for p in w.points().filter(|p| a.contains(p)) {
                volume += 1;
                if neighbors(&p).iter().any(|y| !a.contains(y)) {
                    boundary += 1;
                }
            }
            GrowthPoint {
                radius: r,
                boundary,
                volume,
                bound: growth_bound(a.dim, r),
            }
        })
        .collect()
}

/// The growth bound holds and the boundary is met by every ball of radius ≥ 2.
pub fn check_growth(a: &Pattern, center: &Point, r_max: i64) -> PropertyReport {
    let w = Window::ball(center, r_max);
    let series = growth_report(a, center, r_max);
    let verdict = match series
        .iter()
        .find(|g| g.boundary as u64 > g.bound || (g.radius >= 2 && g.boundary == 0))
    {
        Some(g) => violated(
            vec![center.clone()],
            format!("r={} boundary={} bound={}", g.radius, g.boundary, g.bound),
        ),
        None => Verdict::Holds,
    };
    PropertyReport::new("growth", a, &w, verdict).with_surrogate("balls-up-to-r_max")
}

/// Every checker on one pattern, with the window `B̂_r(center)`.
pub fn run_all(a: &Pattern, center: &Point, r: i64) -> Result<Vec<PropertyReport>> {
    let w = Window::ball(center, r);
    let jobs: Vec<Box<dyn Fn() -> Result<PropertyReport> + Send + Sync>> = vec![
        Box::new(|| Ok(check_min_degree(a, &w))),
        Box::new(|| Ok(check_convexity(a, &w))),
        Box::new(|| Ok(check_no_parallel_rays(a, &w))),
        Box::new(|| Ok(check_max_principle_boxes(a, &w))),
        Box::new(|| check_slab_refutation(a, center, r)),
        Box::new(|| Ok(check_growth(a, center, r))),
    ];
    jobs.par_iter().map(|j| j()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Expr, Sign};

    fn pat(dim: usize, e: Expr) -> Pattern {
        Pattern::new(dim, e).unwrap().with_id("t")
    }

    fn halfplane() -> Pattern {
        pat(2, Expr::halfspace(1, Sign::Plus, 0))
    }

    fn strip(width: i64) -> Pattern {
        pat(
            2,
            Expr::intersection([
                Expr::halfspace(1, Sign::Plus, 0),
                Expr::halfspace(1, Sign::Minus, 1 - width),
            ]),
        )
    }

    fn o2() -> Point {
        Point::origin(2)
    }

    #[test]
    fn min_degree_halfspace_and_pendant() {
        let h3 = pat(3, Expr::halfspace(2, Sign::Plus, 0));
        assert!(check_min_degree(&h3, &Window::ball(&Point::origin(3), 3)).holds());
        let pendant = pat(
            2,
            Expr::union([
                Expr::halfspace(1, Sign::Minus, 0),
                Expr::cells([Point::from([0, 1])]),
            ]),
        );
        let rep = check_min_degree(&pendant, &Window::ball(&o2(), 3));
        assert_eq!(
            rep.verdict,
            Verdict::Violated {
                witness: vec![Point::from([0, 1])],
                note: "degree=1".into()
            }
        );
    }

    #[test]
    fn convexity_gap() {
        let gap = pat(
            2,
            Expr::intersection([
                Expr::halfspace(1, Sign::Plus, 0),
                Expr::cells([Point::from([0, 0])]).complement(),
                Expr::boxed([-2, 0], [2, 2]),
            ]),
        );
        let rep = check_convexity(&gap, &Window::ball(&o2(), 4));
        assert!(rep.violated());
        assert!(check_convexity(&halfplane(), &Window::ball(&o2(), 4)).holds());
    }

    #[test]
    fn parallel_rays() {
        let w = Window::ball(&o2(), 6);
        assert!(check_no_parallel_rays(&strip(3), &w).violated());
        assert!(check_no_parallel_rays(&halfplane(), &w).holds());
    }

    #[test]
    fn max_principle_bump() {
        let bump = pat(
            2,
            Expr::union([
                Expr::halfspace(1, Sign::Minus, 0),
                Expr::boxed([0, 1], [1, 1]),
            ]),
        );
        let w = Window::ball(&o2(), 5);
        let omega: BTreeSet<Vec<i64>> = [vec![0], vec![1]].into();
        assert!(check_max_principle(&bump, 1, &omega, &w)
            .unwrap()
            .violated());
        assert!(check_max_principle(&halfplane(), 1, &omega, &w)
            .unwrap()
            .holds());
        assert!(check_max_principle_boxes(&bump, &w).violated());
        assert!(slab_refuting_radius(&bump, &o2(), 3).unwrap().is_some());
        // a lone column is not a closed domain
        let single: BTreeSet<Vec<i64>> = [vec![0]].into();
        assert!(matches!(
            check_max_principle(&bump, 1, &single, &w).unwrap().verdict,
            Verdict::NotApplicable(_)
        ));
    }

    #[test]
    fn admissibility() {
        let sq: BTreeSet<Vec<i64>> = [vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]].into();
        assert!(is_admissible(&sq));
        let mut tail = sq.clone();
        tail.insert(vec![2, 0]);
        assert!(!is_admissible(&tail));
        assert_eq!(boxes(&[(0, 2)]).len(), 3);
        assert_eq!(boxes(&[(0, 2), (0, 1)]).len(), 3);
    }

    #[test]
    fn slab_refutation() {
        let rep = check_slab_refutation(&strip(3), &Point::from([0, 1]), 7).unwrap();
        assert!(rep.holds());
        let rep = check_slab_refutation(&halfplane(), &o2(), 4).unwrap();
        assert!(matches!(rep.verdict, Verdict::NotApplicable(_)));
    }

    #[test]
    fn growth_counts() {
        let g = growth_report(&halfplane(), &o2(), 4);
        assert!(g.iter().all(|p| p.boundary as i64 == 2 * p.radius + 1));
        let q = pat(2, Expr::orthant([0, 0], [Sign::Plus, Sign::Plus]));
        assert!(growth_report(&q, &o2(), 4)
            .iter()
            .all(|p| p.boundary as i64 == 2 * p.radius + 1));
        assert!(check_growth(&q, &o2(), 6).holds());
    }

    #[test]
    fn report_line() {
        let rep = check_min_degree(&halfplane(), &Window::ball(&o2(), 2));
        assert_eq!(rep.to_string(), "PROP min-degree t holds");
    }
}
