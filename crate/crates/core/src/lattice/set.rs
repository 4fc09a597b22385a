use super::{neighbors, BoxIndex, Edge, Pattern, Point, Window};
use crate::error::{Error, Result};

/// How membership beyond the stored closure is interpreted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutsideRule {
    /// Only `U ∪ τU` is known; queries outside it fail.
    Explicit,
    /// The set was sampled from a pattern; the τ-row carries the pattern's values.
    FromPattern,
}

/// A subset of the closure `U ∪ τU` of a window.
#[derive(Clone, Debug)]
pub struct VertexSet {
    window: Window,
    index: BoxIndex,
    bits: Vec<bool>,
    outside: OutsideRule,
}

impl PartialEq for VertexSet {
    fn eq(&self, other: &Self) -> bool {
        self.window == other.window && self.bits == other.bits
    }
}

impl Eq for VertexSet {}

impl VertexSet {
    pub fn from_fn(window: &Window, mut f: impl FnMut(&Point) -> bool) -> Self {
        let dil = window.dilated();
        let index = BoxIndex::new(&dil);
        let bits = dil
            .points()
            .map(|p| window.in_closure(&p) && f(&p))
            .collect();
        VertexSet {
            window: window.clone(),
            index,
            bits,
            outside: OutsideRule::Explicit,
        }
    }

    pub fn from_pattern(window: &Window, pattern: &Pattern) -> Self {
        let mut s = Self::from_fn(window, |p| pattern.contains(p));
        s.outside = OutsideRule::FromPattern;
        s
    }

    /// The explicit set `points ∩ closure(window)`.
    pub fn from_points<'a>(window: &Window, points: impl IntoIterator<Item = &'a Point>) -> Self {
        let mut s = Self::empty(window);
        for p in points {
            s.set(p, true);
        }
        s
    }

    pub fn empty(window: &Window) -> Self {
        Self::from_fn(window, |_| false)
    }

    /// Every closure point is a member.
    pub fn full(window: &Window) -> Self {
        Self::from_fn(window, |_| true)
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn outside_rule(&self) -> OutsideRule {
        self.outside
    }

    pub fn with_outside_rule(mut self, rule: OutsideRule) -> Self {
        self.outside = rule;
        self
    }

    pub fn contains(&self, p: &Point) -> Result<bool> {
        if !self.window.in_closure(p) {
            return Err(Error::NeedsPattern(p.0.clone()));
        }
        Ok(self.bits[self.index.index(p).unwrap()])
    }

    /// Membership, `false` outside the closure.
    pub fn get(&self, p: &Point) -> bool {
        self.index.index(p).is_some_and(|i| self.bits[i])
    }

    /// Sets membership of a closure point; points outside the closure are ignored.
    pub fn set(&mut self, p: &Point, value: bool) {
        if self.window.in_closure(p) {
            let i = self.index.index(p).unwrap();
            self.bits[i] = value;
        }
    }

    /// `closure \ self`.
    pub fn complement(&self) -> VertexSet {
        VertexSet::from_fn(&self.window, |p| !self.get(p)).with_outside_rule(self.outside)
    }

    /// Members in lexicographic order.
    pub fn members(&self) -> Vec<Point> {
        self.window
            .closure_points()
            .filter(|p| self.get(p))
            .collect()
    }

    pub fn members_in_window(&self) -> Vec<Point> {
        self.window.points().filter(|p| self.get(p)).collect()
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Copy with the τ-row replaced by `other`'s τ-row (same window).
    pub fn with_trace_of(&self, other: &VertexSet) -> VertexSet {
        assert_eq!(self.window, other.window);
        VertexSet::from_fn(&self.window, |p| {
            if self.window.contains(p) {
                self.get(p)
            } else {
                other.get(p)
            }
        })
    }

    /// Same τ-trace on the window.
    pub fn same_trace(&self, other: &VertexSet) -> bool {
        self.window == other.window
            && self
                .window
                .tau_points()
                .all(|p| self.get(&p) == other.get(&p))
    }

    /// Restriction to a sub-window (the closure of `sub` must lie in this closure).
    pub fn restrict(&self, sub: &Window) -> Result<VertexSet> {
        for p in sub.tau_points() {
            self.contains(&p)?;
        }
        Ok(VertexSet::from_fn(sub, |p| self.get(p)).with_outside_rule(self.outside))
    }
}

/// `δA ∩ W`: members with a non-member neighbor.
pub fn vertex_boundary(a: &VertexSet) -> Result<VertexSet> {
    let w = a.window().clone();
    let mut out = VertexSet::empty(&w);
    for p in w.points() {
        if a.contains(&p)? {
            for q in neighbors(&p) {
                if !a.contains(&q)? {
                    out.set(&p, true);
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// `τA ∩ W`: non-members with a member neighbor.
pub fn exterior_boundary(a: &VertexSet) -> Result<VertexSet> {
    let w = a.window().clone();
    let mut out = VertexSet::empty(&w);
    for p in w.points() {
        if !a.contains(&p)? {
            for q in neighbors(&p) {
                if a.contains(&q)? {
                    out.set(&p, true);
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// `(∂A ∩ E_U, E_U)` in canonical order.
pub fn edge_sets(a: &VertexSet, u: &Window) -> Result<(Vec<Edge>, Vec<Edge>)> {
    let all = u.edges();
    let mut cut = Vec::new();
    for e in &all {
        if a.contains(&e.lo)? != a.contains(&e.hi())? {
            cut.push(e.clone());
        }
    }
    Ok((cut, all))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Expr, Sign};

    fn w(lo: [i64; 2], hi: [i64; 2]) -> Window {
        Window::new(lo, hi).unwrap()
    }

    #[test]
    fn single_point_boundaries() {
        let win = w([-3, -3], [3, 3]);
        let p = Point::from([0, 0]);
        let a = VertexSet::from_points(&win, [&p]);
        assert_eq!(vertex_boundary(&a).unwrap().members(), vec![p.clone()]);
        let mut tau = exterior_boundary(&a).unwrap().members();
        tau.sort();
        let mut want = neighbors(&p);
        want.sort();
        assert_eq!(tau, want);
    }

    #[test]
    fn empty_set_has_empty_exterior_boundary() {
        let a = VertexSet::empty(&w([0, 0], [3, 3]));
        assert!(exterior_boundary(&a).unwrap().is_empty());
        assert!(vertex_boundary(&a).unwrap().is_empty());
    }

    #[test]
    fn full_window_boundary() {
        let win = w([0, 0], [2, 2]);
        // window members only: the τ-row is out
        let a = VertexSet::from_fn(&win, |p| win.contains(p));
        let d = vertex_boundary(&a).unwrap();
        // every cell except the centre touches τW
        assert_eq!(d.len(), 8);
        assert!(!d.get(&[1, 1].into()));
        // with the τ-row in as well there is no boundary inside the window
        let full = VertexSet::full(&win);
        assert!(vertex_boundary(&full).unwrap().is_empty());
    }

    #[test]
    fn halfplane_boundaries_by_definition() {
        let win = w([-3, -3], [3, 3]);
        let hp = Pattern::new(2, Expr::halfspace(1, Sign::Plus, 0)).unwrap();
        let a = VertexSet::from_pattern(&win, &hp);
        let d = vertex_boundary(&a).unwrap().members();
        let t = exterior_boundary(&a).unwrap().members();
        // direct enumeration of the definitions
        let row = |y: i64| {
            (-3..=3)
                .map(move |x| Point::from([x, y]))
                .collect::<Vec<_>>()
        };
        assert_eq!(d, row(0));
        assert_eq!(t, row(-1));
    }

    #[test]
    fn square_2x2_cut_edges() {
        let win = w([-3, -3], [3, 3]);
        let pts: Vec<Point> = vec![[0, 0].into(), [0, 1].into(), [1, 0].into(), [1, 1].into()];
        let a = VertexSet::from_points(&win, &pts);
        let (cut, all) = edge_sets(&a, &win).unwrap();
        assert_eq!(cut.len(), 8);
        assert_eq!(all.len(), win.edges().len());
        let one = VertexSet::from_points(&win, [&pts[0]]);
        assert_eq!(edge_sets(&one, &win).unwrap().0.len(), 4);
    }

    #[test]
    fn query_outside_closure_needs_pattern() {
        let a = VertexSet::empty(&w([0, 0], [1, 1]));
        assert!(matches!(
            a.contains(&[5, 5].into()),
            Err(Error::NeedsPattern(_))
        ));
        let big = w([-1, -1], [2, 2]);
        assert!(edge_sets(&a, &big).is_err());
    }

    #[test]
    fn complement_is_involution_and_cut_symmetric() {
        let win = w([0, 0], [4, 3]);
        let a = VertexSet::from_fn(&win, |p| (p[0] * 7 + p[1] * 3) % 5 < 2);
        assert_eq!(a.complement().complement(), a);
        let (c1, _) = edge_sets(&a, &win).unwrap();
        let (c2, _) = edge_sets(&a.complement(), &win).unwrap();
        assert_eq!(c1, c2);
    }
}
