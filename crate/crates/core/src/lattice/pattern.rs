//! Infinite candidate subsets of Z^n described by a small CSG language.
//!
//! The JSON form is `{"dim": n, "expr": {...}}` with one object per node,
//! tagged by `op`, e.g. `{"op":"halfspace","axis":1,"sign":"+","c":0}` for
//! `{x_2 >= 0}`. Axes are zero-based.

use serde::{Deserialize, Serialize};

use super::{Point, Window};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn factor(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Expr {
    /// `{ sign * x_axis >= c }`
    Halfspace {
        axis: usize,
        sign: Sign,
        c: i64,
    },
    /// `{ coeffs . x >= c }`, for slanted regions such as staircases.
    Linear {
        coeffs: Vec<i64>,
        c: i64,
    },
    /// `{ sign_i * (x_i - corner_i) >= 0 for all i }`
    Orthant {
        corner: Vec<i64>,
        signs: Vec<Sign>,
    },
    /// Inclusive box.
    Box {
        lo: Vec<i64>,
        hi: Vec<i64>,
    },
    Cells {
        cells: Vec<Vec<i64>>,
    },
    Union {
        args: Vec<Expr>,
    },
    Intersection {
        args: Vec<Expr>,
    },
    Complement {
        arg: std::boxed::Box<Expr>,
    },
    Translate {
        offset: Vec<i64>,
        arg: std::boxed::Box<Expr>,
    },
    Full,
    Empty,
}

impl Expr {
    pub fn halfspace(axis: usize, sign: Sign, c: i64) -> Expr {
        Expr::Halfspace { axis, sign, c }
    }

    pub fn linear(coeffs: impl Into<Vec<i64>>, c: i64) -> Expr {
        Expr::Linear {
            coeffs: coeffs.into(),
            c,
        }
    }

    pub fn orthant(corner: impl Into<Vec<i64>>, signs: impl Into<Vec<Sign>>) -> Expr {
        Expr::Orthant {
            corner: corner.into(),
            signs: signs.into(),
        }
    }

    pub fn boxed(lo: impl Into<Vec<i64>>, hi: impl Into<Vec<i64>>) -> Expr {
        Expr::Box {
            lo: lo.into(),
            hi: hi.into(),
        }
    }

    pub fn cells(cells: impl IntoIterator<Item = Point>) -> Expr {
        Expr::Cells {
            cells: cells.into_iter().map(|p| p.0).collect(),
        }
    }

    pub fn union(args: impl Into<Vec<Expr>>) -> Expr {
        Expr::Union { args: args.into() }
    }

    pub fn intersection(args: impl Into<Vec<Expr>>) -> Expr {
        Expr::Intersection { args: args.into() }
    }

    pub fn complement(self) -> Expr {
        Expr::Complement {
            arg: std::boxed::Box::new(self),
        }
    }

    pub fn translate(self, offset: impl Into<Vec<i64>>) -> Expr {
        Expr::Translate {
            offset: offset.into(),
            arg: std::boxed::Box::new(self),
        }
    }

    pub fn eval(&self, p: &[i64]) -> bool {
        match self {
            Expr::Halfspace { axis, sign, c } => sign.factor() * p[*axis] >= *c,
            Expr::Linear { coeffs, c } => {
                coeffs.iter().zip(p).map(|(a, x)| a * x).sum::<i64>() >= *c
            }
            Expr::Orthant { corner, signs } => corner
                .iter()
                .zip(signs)
                .zip(p)
                .all(|((c, s), x)| s.factor() * (x - c) >= 0),
            Expr::Box { lo, hi } => p
                .iter()
                .zip(lo.iter().zip(hi))
                .all(|(x, (l, h))| l <= x && x <= h),
            Expr::Cells { cells } => cells.iter().any(|c| c.as_slice() == p),
            Expr::Union { args } => args.iter().any(|a| a.eval(p)),
            Expr::Intersection { args } => args.iter().all(|a| a.eval(p)),
            Expr::Complement { arg } => !arg.eval(p),
            Expr::Translate { offset, arg } => {
                let q: Vec<i64> = p.iter().zip(offset).map(|(x, o)| x - o).collect();
                arg.eval(&q)
            }
            Expr::Full => true,
            Expr::Empty => false,
        }
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        let bad = |got: usize| {
            if got == dim {
                Ok(())
            } else {
                Err(Error::DimensionMismatch { expected: dim, got })
            }
        };
        match self {
            Expr::Halfspace { axis, .. } => {
                if *axis < dim {
                    Ok(())
                } else {
                    Err(Error::Invalid(format!(
                        "axis {axis} out of range for dim {dim}"
                    )))
                }
            }
            Expr::Linear { coeffs, .. } => bad(coeffs.len()),
            Expr::Orthant { corner, signs } => {
                bad(corner.len())?;
                bad(signs.len())
            }
            Expr::Box { lo, hi } => {
                bad(lo.len())?;
                bad(hi.len())
            }
            Expr::Cells { cells } => cells.iter().try_for_each(|c| bad(c.len())),
            Expr::Union { args } | Expr::Intersection { args } => {
                args.iter().try_for_each(|a| a.check_dim(dim))
            }
            Expr::Complement { arg } => arg.check_dim(dim),
            Expr::Translate { offset, arg } => {
                bad(offset.len())?;
                arg.check_dim(dim)
            }
            Expr::Full | Expr::Empty => Ok(()),
        }
    }
}

/// A pure, total membership predicate over Z^n.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pattern {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub dim: usize,
    pub expr: Expr,
}

impl Pattern {
    pub fn new(dim: usize, expr: Expr) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Invalid("pattern dimension must be >= 1".into()));
        }
        expr.check_dim(dim)?;
        Ok(Pattern {
            id: None,
            dim,
            expr,
        })
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = Some(id.into());
        self
    }

    pub fn id_or_anon(&self) -> &str {
        self.id.as_deref().unwrap_or("anonymous")
    }

    pub fn contains(&self, p: &Point) -> bool {
        debug_assert_eq!(p.dim(), self.dim);
        self.expr.eval(p.coords())
    }

    pub fn complement(&self) -> Pattern {
        Pattern {
            id: self.id.as_ref().map(|s| format!("{s}c")),
            dim: self.dim,
            expr: self.expr.clone().complement(),
        }
    }

    pub fn translate(&self, offset: &Point) -> Pattern {
        Pattern {
            id: self.id.clone(),
            dim: self.dim,
            expr: self.expr.clone().translate(offset.0.clone()),
        }
    }

    /// `self × Z`: the pattern extruded along a new last axis.
    pub fn extrude(&self) -> Pattern {
        Pattern {
            id: self.id.as_ref().map(|s| format!("{s}xZ")),
            dim: self.dim + 1,
            expr: lift(&self.expr, self.dim),
        }
    }

    /// Explicit finite set of cells.
    pub fn from_cells(dim: usize, cells: impl IntoIterator<Item = Point>) -> Result<Self> {
        Pattern::new(dim, Expr::cells(cells))
    }

    /// Members of the pattern inside `w`, lexicographic.
    pub fn members_in(&self, w: &Window) -> Vec<Point> {
        w.points().filter(|p| self.contains(p)).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("pattern serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let p: Pattern = serde_json::from_str(s)?;
        p.expr.check_dim(p.dim)?;
        Ok(p)
    }
}

/// Rewrites a `dim`-dimensional expression to ignore an extra last coordinate.
fn lift(e: &Expr, dim: usize) -> Expr {
    let b = |x: &Expr| std::boxed::Box::new(lift(x, dim));
    match e {
        Expr::Halfspace { .. } | Expr::Full | Expr::Empty => e.clone(),
        Expr::Linear { coeffs, c } => {
            let mut coeffs = coeffs.clone();
            coeffs.push(0);
            Expr::Linear { coeffs, c: *c }
        }
        Expr::Orthant { corner, signs } => {
            // extra axis unconstrained: intersect the two opposite half-orthants
            let mut c = corner.clone();
            c.push(0);
            let mut up = signs.clone();
            up.push(Sign::Plus);
            let mut down = signs.clone();
            down.push(Sign::Minus);
            Expr::union([
                Expr::Orthant {
                    corner: c.clone(),
                    signs: up,
                },
                Expr::Orthant {
                    corner: c,
                    signs: down,
                },
            ])
        }
        Expr::Box { lo, hi } => {
            let mut conds: Vec<Expr> = Vec::new();
            for i in 0..dim {
                conds.push(Expr::halfspace(i, Sign::Plus, lo[i]));
                conds.push(Expr::halfspace(i, Sign::Minus, -hi[i]));
            }
            Expr::intersection(conds)
        }
        Expr::Cells { cells } => {
            // cells × Z as a union of infinite columns
            Expr::union(
                cells
                    .iter()
                    .map(|c| {
                        let mut conds: Vec<Expr> = Vec::new();
                        for (i, &x) in c.iter().enumerate() {
                            conds.push(Expr::halfspace(i, Sign::Plus, x));
                            conds.push(Expr::halfspace(i, Sign::Minus, -x));
                        }
                        Expr::intersection(conds)
                    })
                    .collect::<Vec<_>>(),
            )
        }
        Expr::Union { args } => Expr::union(args.iter().map(|a| lift(a, dim)).collect::<Vec<_>>()),
        Expr::Intersection { args } => {
            Expr::intersection(args.iter().map(|a| lift(a, dim)).collect::<Vec<_>>())
        }
        Expr::Complement { arg } => Expr::Complement { arg: b(arg) },
        Expr::Translate { offset, arg } => {
            let mut o = offset.clone();
            o.push(0);
            Expr::Translate {
                offset: o,
                arg: b(arg),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halfspace_json_shape() {
        let p = Pattern::new(2, Expr::halfspace(1, Sign::Plus, 0)).unwrap();
        let j = serde_json::to_string(&p.expr).unwrap();
        assert_eq!(j, r#"{"op":"halfspace","axis":1,"sign":"+","c":0}"#);
        assert!(p.contains(&[5, 0].into()));
        assert!(!p.contains(&[5, -1].into()));
    }

    #[test]
    fn minus_sign_flips() {
        let e = Expr::halfspace(0, Sign::Minus, -5);
        assert!(e.eval(&[5, 0]));
        assert!(!e.eval(&[6, 0]));
    }

    #[test]
    fn dimension_checked() {
        assert!(Pattern::new(2, Expr::halfspace(2, Sign::Plus, 0)).is_err());
        assert!(Pattern::new(2, Expr::boxed([0], [1])).is_err());
        assert!(Pattern::from_json(r#"{"dim":2,"expr":{"op":"box","lo":[0],"hi":[1]}}"#).is_err());
    }

    #[test]
    fn extrude_ignores_new_axis() {
        let quad = Pattern::new(
            2,
            Expr::union([
                Expr::orthant([0, 0], [Sign::Plus, Sign::Plus]),
                Expr::boxed([-3, -3], [-2, -2]),
                Expr::cells([Point::from([5, -5])]),
            ]),
        )
        .unwrap();
        let prod = quad.extrude();
        for x in -6..=6 {
            for y in -6..=6 {
                for z in [-7, 0, 4] {
                    assert_eq!(
                        prod.contains(&[x, y, z].into()),
                        quad.contains(&[x, y].into())
                    );
                }
            }
        }
    }
}
