//! The 1-Dirichlet energy, perimeter, superlevel sets and the discrete
//! co-area formula, all in exact rational arithmetic.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_rational::Rational64;
use num_traits::{Signed, Zero};

use crate::error::{parse_err, Error, Result};
use crate::lattice::{BoxIndex, Point, VertexSet, Window};

/// A rational-valued function on the closure `U ∪ τU` of a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexFunction {
    window: Window,
    index: BoxIndex,
    values: Vec<Rational64>,
}

impl VertexFunction {
    pub fn from_fn(window: &Window, mut f: impl FnMut(&Point) -> Rational64) -> Self {
        let dil = window.dilated();
        let index = BoxIndex::new(&dil);
        let values = dil
            .points()
            .map(|p| {
                if window.in_closure(&p) {
                    f(&p)
                } else {
                    Rational64::zero()
                }
            })
            .collect();
        VertexFunction {
            window: window.clone(),
            index,
            values,
        }
    }

    /// Fails unless `values` covers every closure point.
    pub fn from_map(window: &Window, values: &HashMap<Point, Rational64>) -> Result<Self> {
        if let Some(p) = window.closure_points().find(|p| !values.contains_key(p)) {
            return Err(Error::PartialFunction(p.0));
        }
        Ok(Self::from_fn(window, |p| values[p]))
    }

    pub fn indicator(set: &VertexSet) -> Self {
        Self::from_fn(set.window(), |p| {
            if set.get(p) {
                Rational64::from_integer(1)
            } else {
                Rational64::zero()
            }
        })
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn get(&self, p: &Point) -> Option<Rational64> {
        if !self.window.in_closure(p) {
            return None;
        }
        self.index.index(p).map(|i| self.values[i])
    }

    fn value(&self, p: &Point) -> Result<Rational64> {
        self.get(p)
            .ok_or_else(|| Error::PartialFunction(p.0.clone()))
    }

    /// Sorted distinct values on `closure(u)`.
    pub fn distinct_values(&self, u: &Window) -> Result<Vec<Rational64>> {
        let mut v = Vec::new();
        for p in u.closure_points() {
            v.push(self.value(&p)?);
        }
        v.sort();
        v.dedup();
        Ok(v)
    }

    pub fn map(&self, f: impl Fn(Rational64) -> Rational64) -> Self {
        VertexFunction {
            window: self.window.clone(),
            index: self.index.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// `FUNC2 x0 y0 w h` followed by the dilated box's values, row `y0+h-1` first.
    pub fn to_func2(&self) -> Result<String> {
        if self.window.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: self.window.dim(),
            });
        }
        let d = self.window.dilated();
        let (x0, y0, w, h) = (d.lo()[0], d.lo()[1], d.side(0), d.side(1));
        let mut s = format!("FUNC2 {x0} {y0} {w} {h}\n");
        for row in (0..h as i64).rev() {
            let line: Vec<String> = (0..w as i64)
                .map(|dx| {
                    let v = self
                        .get(&Point::from([x0 + dx, y0 + row]))
                        .unwrap_or_default();
                    format!("{}/{}", v.numer(), v.denom())
                })
                .collect();
            writeln!(s, "{}", line.join(" ")).unwrap();
        }
        Ok(s)
    }

    pub fn parse_func2(text: &str) -> Result<Self> {
        let mut tokens = Vec::new();
        let mut header = None;
        for (ln, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            if header.is_none() {
                let f: Vec<&str> = line.split_whitespace().collect();
                if f.len() != 5 || f[0] != "FUNC2" {
                    return Err(parse_err(ln + 1, "expected `FUNC2 x0 y0 w h`"));
                }
                let num = |s: &str| {
                    s.parse::<i64>()
                        .map_err(|e| parse_err(ln + 1, e.to_string()))
                };
                header = Some((num(f[1])?, num(f[2])?, num(f[3])?, num(f[4])?));
                continue;
            }
            for t in line.split_whitespace() {
                tokens.push((
                    ln + 1,
                    parse_rational(t)
                        .ok_or_else(|| parse_err(ln + 1, format!("bad rational `{t}`")))?,
                ));
            }
        }
        let (x0, y0, w, h) = header.ok_or_else(|| parse_err(1, "empty input"))?;
        if w < 3 || h < 3 {
            return Err(parse_err(1, "box must be at least 3x3"));
        }
        if tokens.len() != (w * h) as usize {
            return Err(parse_err(
                1,
                format!("expected {} values, found {}", w * h, tokens.len()),
            ));
        }
        let window = Window::new([x0 + 1, y0 + 1], [x0 + w - 2, y0 + h - 2])?;
        let mut map = HashMap::new();
        for (k, (_, v)) in tokens.into_iter().enumerate() {
            let (row, dx) = (k as i64 / w, k as i64 % w);
            map.insert(Point::from([x0 + dx, y0 + h - 1 - row]), v);
        }
        Self::from_map(&window, &map)
    }
}

fn parse_rational(t: &str) -> Option<Rational64> {
    match t.split_once('/') {
        Some((n, d)) => {
            let d: i64 = d.parse().ok()?;
            (d != 0).then_some(())?;
            Some(Rational64::new(n.parse().ok()?, d))
        }
        None => Some(Rational64::from_integer(t.parse().ok()?)),
    }
}

/// `J_U(f)`: the sum of `|f(y) - f(x)|` over the undirected edges of `E_U`.
///
/// The defining formula carries a factor 1/2 over a doubled (directed) sum,
/// so each undirected edge counts once.
pub fn dirichlet_energy(f: &VertexFunction, u: &Window) -> Result<Rational64> {
    let mut total = Rational64::zero();
    for e in u.edges() {
        total += (f.value(&e.hi())? - f.value(&e.lo)?).abs();
    }
    Ok(total)
}

/// `|∂K ∩ E_U|`.
pub fn perimeter(k: &VertexSet, u: &Window) -> Result<u64> {
    let mut n = 0;
    for e in u.edges() {
        if k.contains(&e.lo)? != k.contains(&e.hi())? {
            n += 1;
        }
    }
    Ok(n)
}

/// The strict superlevel set `{f > t}` on the closure of `f`'s window.
pub fn superlevel(f: &VertexFunction, t: Rational64) -> VertexSet {
    VertexSet::from_fn(f.window(), |p| f.get(p).is_some_and(|v| v > t))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoareaReport {
    pub lhs: Rational64,
    pub rhs: Rational64,
    pub equal: bool,
}

/// Compares `J_U(f)` with the integral of `|∂{f>t} ∩ E_U|` over `t`.
///
/// The integrand is a step function that only changes at values of `f`, so
/// the integral is the finite sum over consecutive distinct values.
pub fn coarea_check(f: &VertexFunction, u: &Window) -> Result<CoareaReport> {
    let lhs = dirichlet_energy(f, u)?;
    let vals = f.distinct_values(u)?;
    let mut rhs = Rational64::zero();
    for pair in vals.windows(2) {
        let level = superlevel(f, pair[0]);
        rhs += (pair[1] - pair[0]) * Rational64::from_integer(perimeter(&level, u)? as i64);
    }
    Ok(CoareaReport {
        lhs,
        rhs,
        equal: lhs == rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn r(n: i64) -> Rational64 {
        Rational64::from_integer(n)
    }

    fn win(lo: [i64; 2], hi: [i64; 2]) -> Window {
        Window::new(lo, hi).unwrap()
    }

    #[test]
    fn constant_has_zero_energy() {
        let u = win([0, 0], [3, 3]);
        let f = VertexFunction::from_fn(&u, |_| r(7));
        assert_eq!(dirichlet_energy(&f, &u).unwrap(), r(0));
        let c = coarea_check(&f, &u).unwrap();
        assert_eq!((c.lhs, c.rhs, c.equal), (r(0), r(0), true));
    }

    #[test]
    fn indicator_energy_is_perimeter() {
        let u = win([-3, -3], [3, 3]);
        let k = VertexSet::from_fn(&u, |p| (p[0] * p[1]).rem_euclid(3) == 1);
        let f = VertexFunction::indicator(&k);
        let per = perimeter(&k, &u).unwrap();
        assert_eq!(dirichlet_energy(&f, &u).unwrap(), r(per as i64));
        let c = coarea_check(&f, &u).unwrap();
        assert_eq!(c.lhs, r(per as i64));
        assert!(c.equal);
    }

    #[test]
    fn perimeter_examples() {
        let u = win([-4, -4], [4, 4]);
        assert_eq!(perimeter(&VertexSet::full(&u), &u).unwrap(), 0);
        let one = VertexSet::from_points(&u, [&Point::from([0, 0])]);
        assert_eq!(perimeter(&one, &u).unwrap(), 4);
        // 2x3 rectangle: 2*(2+3) = 10 cut edges, counted below by enumeration
        let rect = VertexSet::from_fn(&u, |p| (0..2).contains(&p[0]) && (0..3).contains(&p[1]));
        let mut count = 0;
        for p in u.points() {
            for q in crate::lattice::neighbors(&p) {
                if rect.get(&p) && !rect.get(&q) {
                    count += 1;
                }
            }
        }
        assert_eq!(count, 10);
        assert_eq!(perimeter(&rect, &u).unwrap(), 10);
    }

    #[test]
    fn superlevel_examples() {
        let u = win([0, 0], [2, 2]);
        let zero = VertexFunction::from_fn(&u, |_| r(0));
        assert!(superlevel(&zero, r(0)).is_empty());
        let k = VertexSet::from_fn(&u, |p| p[0] == 1);
        let ind = VertexFunction::indicator(&k);
        assert_eq!(superlevel(&ind, Rational64::new(1, 2)), k);
        let f = VertexFunction::from_fn(&u, |p| r([0, 2, 5][(p[0] + 1) as usize % 3]));
        let s = superlevel(&f, r(2));
        assert!(s.members().iter().all(|p| f.get(p) == Some(r(5))));
        assert_eq!(
            s.len(),
            u.closure_points()
                .filter(|p| f.get(p) == Some(r(5)))
                .count()
        );
    }

    #[test]
    fn partial_function_rejected() {
        let u = win([0, 0], [1, 1]);
        let mut m = HashMap::new();
        for p in u.points() {
            m.insert(p, r(1));
        }
        assert!(matches!(
            VertexFunction::from_map(&u, &m),
            Err(Error::PartialFunction(_))
        ));
        // a function on a smaller window cannot be evaluated on a larger one
        let f = VertexFunction::from_fn(&u, |_| r(0));
        assert!(dirichlet_energy(&f, &win([-1, -1], [2, 2])).is_err());
    }

    /// Brute-force co-area: sum over integer thresholds of an integer-valued f.
    #[test]
    fn coarea_matches_integer_threshold_sum() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        let u = win([0, 0], [2, 2]);
        for _ in 0..50 {
            let f = VertexFunction::from_fn(&u, |_| r(rng.gen_range(-3..=3)));
            let mut brute = 0u64;
            for t in -4..=3 {
                brute += perimeter(&superlevel(&f, r(t)), &u).unwrap();
            }
            assert_eq!(dirichlet_energy(&f, &u).unwrap(), r(brute as i64));
        }
    }

    #[test]
    fn energy_invariances_and_monotonicity() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(5);
        let u = win([0, 0], [4, 3]);
        let sub = win([1, 1], [3, 2]);
        for _ in 0..30 {
            let f = VertexFunction::from_fn(&u, |_| {
                Rational64::new(rng.gen_range(-9..9), rng.gen_range(1..5))
            });
            let j = dirichlet_energy(&f, &u).unwrap();
            assert_eq!(
                dirichlet_energy(&f.map(|v| v + Rational64::new(3, 7)), &u).unwrap(),
                j
            );
            assert_eq!(dirichlet_energy(&f.map(|v| -v), &u).unwrap(), j);
            assert!(dirichlet_energy(&f, &sub).unwrap() <= j);
        }
    }

    #[test]
    fn func2_roundtrip() {
        let u = win([0, 0], [2, 1]);
        let f = VertexFunction::from_fn(&u, |p| Rational64::new(p[0] - 2 * p[1], 3));
        let text = f.to_func2().unwrap();
        assert!(text.starts_with("FUNC2 -1 -1 5 4\n"));
        assert_eq!(VertexFunction::parse_func2(&text).unwrap(), f);
        assert!(VertexFunction::parse_func2("FUNC2 0 0 3 3\n1 2\n").is_err());
        assert!(VertexFunction::parse_func2("FUNC2 0 0 3 3\n1/0 1 1 1 1 1 1 1 1\n").is_err());
    }
}
