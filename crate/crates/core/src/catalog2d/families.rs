//! Parametric generators for the planar families.
//!
//! Every family is a CSG expression over Z² built from axis-aligned
//! rectangles (possibly unbounded) and, for the staircases, slanted
//! half-planes. Parameters are the integers `h`, `d`, `a`, `b`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Expr, Pattern, Point, Sign};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub h: i64,
    pub d: i64,
    pub a: i64,
    pub b: i64,
}

impl Params {
    pub const fn new(h: i64, d: i64, a: i64, b: i64) -> Self {
        Params { h, d, a, b }
    }

    pub const fn hd(h: i64, d: i64) -> Self {
        Params { h, d, a: 0, b: 0 }
    }
}

impl std::fmt::Display for Params {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "h={} d={} a={} b={}", self.h, self.d, self.a, self.b)
    }
}

/// How firmly a family's geometry is pinned down.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Confidence {
    /// Geometry fixed by the defining description.
    Anchored,
    /// A certified geometry chosen among several consistent candidates.
    Reconstructed,
}

pub struct Family {
    pub id: &'static str,
    /// The parameter constraint in human-readable form.
    pub constraint: &'static str,
    pub defaults: Params,
    /// Which of `h, d, a, b` the family actually reads.
    pub uses: &'static str,
    pub confidence: Confidence,
    /// Whether the family's complement is a (disconnected) family of its own.
    pub has_complement: bool,
    allowed: fn(&Params) -> bool,
    build: fn(&Params) -> Expr,
    center: fn(&Params) -> [i64; 2],
}

impl Family {
    pub fn allows(&self, p: &Params) -> bool {
        (self.allowed)(p)
    }

    pub fn center(&self, p: &Params) -> Point {
        Point::from((self.center)(p))
    }

    /// The pattern without checking the constraint. Used to probe
    /// out-of-constraint members.
    pub fn build_unchecked(&self, p: &Params) -> Pattern {
        Pattern::new(2, (self.build)(p))
            .expect("family expressions are planar")
            .with_id(self.id)
    }

    pub fn build(&self, p: &Params) -> Result<Pattern> {
        if !self.allows(p) {
            return Err(Error::ConstraintViolated {
                family: self.id.to_string(),
                constraint: self.constraint.to_string(),
            });
        }
        Ok(self.build_unchecked(p))
    }
}

// ---- geometry helpers -------------------------------------------------------

/// `{xlo <= x <= xhi, ylo <= y <= yhi}`, any side may be open.
fn rect(xlo: Option<i64>, xhi: Option<i64>, ylo: Option<i64>, yhi: Option<i64>) -> Expr {
    let mut c = Vec::new();
    if let Some(v) = xlo {
        c.push(Expr::halfspace(0, Sign::Plus, v));
    }
    if let Some(v) = xhi {
        c.push(Expr::halfspace(0, Sign::Minus, -v));
    }
    if let Some(v) = ylo {
        c.push(Expr::halfspace(1, Sign::Plus, v));
    }
    if let Some(v) = yhi {
        c.push(Expr::halfspace(1, Sign::Minus, -v));
    }
    match c.len() {
        0 => Expr::Full,
        1 => c.pop().unwrap(),
        _ => Expr::intersection(c),
    }
}

/// A unit step on one of the four rays of a tab configuration: the ray's
/// line moves by `sign` from `dist` onwards.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Step {
    pub dist: i64,
    pub sign: i64,
}

impl Step {
    const NONE: Step = Step { dist: 0, sign: 0 };

    const fn at(dist: i64, sign: i64) -> Step {
        Step { dist, sign }
    }

    fn on(self) -> bool {
        self.sign != 0
    }
}

/// Two quadrant-like pieces glued near the origin: an upper-left region
/// whose bottom carries a tab of height `h` and width `d`, and a lower-right
/// region with corner at `apex`. Each of the four rays may carry a step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Tab {
    pub h: i64,
    pub d: i64,
    pub apex: [i64; 2],
    /// Right side of the upper piece (vertical ray).
    pub up: Step,
    /// Bottom of the upper piece beyond the tab (horizontal ray).
    pub left: Step,
    /// Top of the lower piece (horizontal ray).
    pub right: Step,
    /// Left side of the lower piece (vertical ray).
    pub down: Step,
}

impl Tab {
    pub fn plain(h: i64, d: i64) -> Tab {
        Tab {
            h,
            d,
            apex: [0, 0],
            up: Step::NONE,
            left: Step::NONE,
            right: Step::NONE,
            down: Step::NONE,
        }
    }

    pub fn expr(&self) -> Expr {
        let mut parts = Vec::new();
        // upper piece: y >= 0, x <= xmax(y), y >= ymin(x)
        let ys: Vec<(Option<i64>, Option<i64>, i64)> = if self.up.on() {
            vec![
                (Some(0), Some(self.up.dist - 1), 0),
                (Some(self.up.dist.max(0)), None, self.up.sign),
            ]
        } else {
            vec![(Some(0), None, 0)]
        };
        let edge = -self.d - self.left.dist + 1;
        let xs: Vec<(Option<i64>, Option<i64>, i64)> = if self.left.on() {
            vec![
                (Some(-self.d), None, 0),
                (Some(edge), Some(-self.d - 1), self.h),
                (None, Some(edge - 1), self.h + self.left.sign),
            ]
        } else {
            vec![(Some(-self.d), None, 0), (None, Some(-self.d - 1), self.h)]
        };
        for &(ylo, yhi, xmax) in &ys {
            for &(xlo, xhi, ymin) in &xs {
                let xhi = Some(xhi.map_or(xmax, |v| v.min(xmax)));
                let ylo = Some(ylo.map_or(ymin, |v| v.max(ymin)));
                parts.push(rect(xlo, xhi, ylo, yhi));
            }
        }
        // lower piece: x >= xlim(y), y <= ylim(x)
        let [ax, ay] = self.apex;
        let xs: Vec<(Option<i64>, Option<i64>, i64)> = if self.right.on() {
            vec![
                (None, Some(ax + self.right.dist - 1), ay),
                (Some(ax + self.right.dist), None, ay - self.right.sign),
            ]
        } else {
            vec![(None, None, ay)]
        };
        let ys: Vec<(Option<i64>, Option<i64>, i64)> = if self.down.on() {
            vec![
                (Some(ay - self.down.dist + 1), None, ax),
                (None, Some(ay - self.down.dist), ax + self.down.sign),
            ]
        } else {
            vec![(None, None, ax)]
        };
        for &(xlo, xhi, ylim) in &xs {
            for &(ylo, yhi, xlim) in &ys {
                let xlo = Some(xlo.map_or(xlim, |v| v.max(xlim)));
                let yhi = Some(yhi.map_or(ylim, |v| v.min(ylim)));
                parts.push(rect(xlo, xhi, ylo, yhi));
            }
        }
        Expr::union(parts)
    }
}

fn f1(p: &Params) -> Tab {
    Tab::plain(p.h, p.d)
}

fn f1_5(p: &Params) -> Tab {
    Tab {
        up: Step::at(1, 1),
        right: Step::at(p.a, 1),
        left: Step::at(p.b, 1),
        ..Tab::plain(p.h, p.d)
    }
}

fn hd_is_one(p: &Params) -> bool {
    p.h == 1 && p.d == 1
}

fn origin(_: &Params) -> [i64; 2] {
    [0, 0]
}

// ---- the registry -----------------------------------------------------------

macro_rules! tab_family {
    ($id:literal, $tab:expr) => {
        Family {
            id: $id,
            constraint: "h=d=1",
            defaults: Params::hd(1, 1),
            uses: "hd",
            confidence: Confidence::Reconstructed,
            has_complement: true,
            allowed: hd_is_one,
            build: |p| {
                let t: fn(&Params) -> Tab = $tab;
                t(p).expr()
            },
            center: origin,
        }
    };
}

pub static FAMILIES: &[Family] = &[
    Family {
        id: "F1-1",
        constraint: "h<=2",
        defaults: Params::hd(2, 1),
        uses: "hd",
        confidence: Confidence::Reconstructed,
        has_complement: true,
        allowed: |p| (1..=2).contains(&p.h) && p.d >= 1,
        build: |p| f1(p).expr(),
        center: origin,
    },
    tab_family!("F1-2", |p| Tab {
        apex: [1, 0],
        ..f1(p)
    }),
    tab_family!("F1-3", |p| Tab {
        apex: [0, -1],
        ..f1(p)
    }),
    tab_family!("F1-4", |p| Tab {
        up: Step::at(1, 1),
        down: Step::at(1, 1),
        ..f1(p)
    }),
    Family {
        id: "F1-5",
        constraint: "h=d=1, a>=2, b>=2",
        defaults: Params::new(1, 1, 2, 2),
        uses: "hdab",
        confidence: Confidence::Reconstructed,
        has_complement: true,
        allowed: |p| hd_is_one(p) && p.a >= 2 && p.b >= 2,
        build: |p| f1_5(p).expr(),
        center: origin,
    },
    tab_family!("F1-6", |p| Tab {
        apex: [1, 0],
        up: Step::at(1, 1),
        left: Step::at(1, 1),
        ..f1(p)
    }),
    tab_family!("F1-7", |p| Tab {
        apex: [1, 0],
        up: Step::at(1, 1),
        right: Step::at(1, 1),
        ..f1(p)
    }),
    Family {
        id: "F2-1",
        constraint: "h<=2",
        defaults: Params::hd(2, 0),
        uses: "h",
        confidence: Confidence::Anchored,
        has_complement: true,
        allowed: |p| (0..=2).contains(&p.h),
        build: |p| {
            Expr::union([
                rect(None, Some(0), Some(0), None),
                rect(Some(p.h), None, None, Some(0)),
                rect(Some(0), Some(p.h), Some(0), Some(0)),
            ])
        },
        center: |p| [p.h / 2, 0],
    },
    Family {
        id: "F2-2",
        constraint: "h=d=1",
        defaults: Params::hd(1, 1),
        uses: "hd",
        confidence: Confidence::Anchored,
        has_complement: true,
        allowed: hd_is_one,
        build: |p| {
            Expr::union([
                rect(None, Some(0), None, Some(0)),
                rect(Some(p.d), None, Some(p.h), None),
                rect(Some(0), Some(p.d), Some(0), Some(p.h)),
            ])
        },
        center: origin,
    },
    Family {
        id: "F2-3",
        constraint: "h=d=1",
        defaults: Params::hd(1, 1),
        uses: "hd",
        confidence: Confidence::Reconstructed,
        has_complement: true,
        allowed: hd_is_one,
        build: |p| {
            Expr::union([
                rect(None, Some(0), Some(0), None),
                rect(Some(p.h), Some(p.h), None, Some(0)),
                rect(Some(p.h + 1), None, None, Some(-p.d)),
            ])
        },
        center: origin,
    },
    Family {
        id: "F3-1-1",
        constraint: "none",
        defaults: Params::hd(0, 0),
        uses: "",
        confidence: Confidence::Anchored,
        has_complement: false,
        allowed: |_| true,
        build: |_| rect(None, None, Some(0), None),
        center: origin,
    },
    Family {
        id: "F3-1-2",
        constraint: "none",
        defaults: Params::hd(0, 0),
        uses: "",
        confidence: Confidence::Reconstructed,
        has_complement: false,
        allowed: |_| true,
        build: |_| {
            Expr::union([
                rect(None, Some(-1), Some(0), None),
                rect(Some(0), None, Some(1), None),
            ])
        },
        center: origin,
    },
    Family {
        id: "F3-1-3",
        constraint: "none",
        defaults: Params::hd(0, 0),
        uses: "",
        confidence: Confidence::Anchored,
        has_complement: false,
        allowed: |_| true,
        build: |_| rect(Some(0), None, Some(0), None),
        center: origin,
    },
    Family {
        id: "F3-1-4",
        constraint: "none",
        defaults: Params::hd(0, 0),
        uses: "",
        confidence: Confidence::Reconstructed,
        has_complement: false,
        allowed: |_| true,
        build: |_| Expr::intersection([rect(None, None, Some(0), None), Expr::linear([-1, 1], 0)]),
        center: origin,
    },
    Family {
        id: "F3-1-5",
        constraint: "none",
        defaults: Params::hd(0, 0),
        uses: "",
        confidence: Confidence::Reconstructed,
        has_complement: false,
        allowed: |_| true,
        build: |_| Expr::linear([-1, 1], 0),
        center: origin,
    },
    Family {
        id: "F3-2-1",
        constraint: "0<=d<=h+2",
        defaults: Params::hd(1, 3),
        uses: "hd",
        confidence: Confidence::Anchored,
        has_complement: true,
        allowed: |p| p.h >= 0 && 0 <= p.d && p.d <= p.h + 2,
        build: |p| {
            Expr::union([
                rect(None, Some(0), None, Some(p.h)),
                rect(Some(p.d), None, Some(0), None),
                rect(Some(0), Some(p.d), Some(0), Some(p.h)),
            ])
        },
        center: |p| [p.d / 2, p.h / 2],
    },
    Family {
        id: "F3-2-2",
        constraint: "d>=0,h>=0",
        defaults: Params::hd(1, 1),
        uses: "hd",
        confidence: Confidence::Anchored,
        has_complement: true,
        allowed: |p| p.h >= 0 && p.d >= 0,
        build: |p| {
            Expr::union([
                rect(None, Some(-1), Some(p.h + 1), None),
                rect(Some(p.d + 1), None, None, Some(-1)),
            ])
            .complement()
        },
        center: |p| [p.d / 2, p.h / 2],
    },
];

/// A registry family or the complement of one (`<id>c`).
pub struct FamilyRef {
    pub family: &'static Family,
    pub complement: bool,
}

impl FamilyRef {
    pub fn id(&self) -> String {
        if self.complement {
            format!("{}c", self.family.id)
        } else {
            self.family.id.to_string()
        }
    }

    pub fn build_unchecked(&self, p: &Params) -> Pattern {
        let base = self.family.build_unchecked(p);
        if self.complement {
            base.complement()
        } else {
            base
        }
    }

    pub fn build(&self, p: &Params) -> Result<Pattern> {
        let base = self.family.build(p)?;
        Ok(if self.complement {
            base.complement()
        } else {
            base
        })
    }
}

pub fn lookup(id: &str) -> Result<FamilyRef> {
    let unknown = || Error::UnknownFamily(id.to_string());
    if let Some(f) = FAMILIES.iter().find(|f| f.id == id) {
        return Ok(FamilyRef {
            family: f,
            complement: false,
        });
    }
    let base = id.strip_suffix('c').ok_or_else(unknown)?;
    FAMILIES
        .iter()
        .find(|f| f.id == base && f.has_complement)
        .map(|f| FamilyRef {
            family: f,
            complement: true,
        })
        .ok_or_else(unknown)
}

/// All registered ids: the families followed by their complement families.
pub fn registry_ids() -> Vec<String> {
    let mut ids: Vec<String> = FAMILIES.iter().map(|f| f.id.to_string()).collect();
    ids.extend(
        FAMILIES
            .iter()
            .filter(|f| f.has_complement)
            .map(|f| format!("{}c", f.id)),
    );
    ids
}

/// A registry member with default parameters.
#[derive(Clone, Debug)]
pub struct Member {
    pub id: String,
    pub params: Params,
    pub pattern: Pattern,
    pub center: Point,
}

pub fn generate(id: &str, params: &Params) -> Result<Member> {
    let r = lookup(id)?;
    Ok(Member {
        id: r.id(),
        params: *params,
        pattern: r.build(params)?,
        center: r.family.center(params),
    })
}

/// Like [`generate`] but without the constraint check.
pub fn generate_forced(id: &str, params: &Params) -> Result<Member> {
    let r = lookup(id)?;
    Ok(Member {
        id: r.id(),
        params: *params,
        pattern: r.build_unchecked(params),
        center: r.family.center(params),
    })
}

/// Every registry id instantiated at its default parameters.
pub fn registry_members() -> Vec<Member> {
    registry_ids()
        .iter()
        .map(|id| {
            let f = lookup(id).expect("registered");
            generate(id, &f.family.defaults).expect("defaults satisfy the constraint")
        })
        .collect()
}
