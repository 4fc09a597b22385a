use latmin::lattice::{edge_sets, Expr, Pattern, Point, Sign, VertexSet, Window};
use proptest::prelude::*;

const DIM: usize = 2;

fn sign() -> impl Strategy<Value = Sign> {
    prop_oneof![Just(Sign::Plus), Just(Sign::Minus)]
}

fn coords() -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-4i64..=4, DIM)
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (0..DIM, sign(), -4i64..=4).prop_map(|(axis, sign, c)| Expr::halfspace(axis, sign, c)),
        (proptest::collection::vec(-2i64..=2, DIM), -4i64..=4)
            .prop_map(|(k, c)| Expr::linear(k, c)),
        (coords(), proptest::collection::vec(sign(), DIM)).prop_map(|(c, s)| Expr::orthant(c, s)),
        (coords(), proptest::collection::vec(0i64..=3, DIM)).prop_map(|(lo, ext)| {
            let hi: Vec<i64> = lo.iter().zip(&ext).map(|(l, e)| l + e).collect();
            Expr::boxed(lo, hi)
        }),
        proptest::collection::vec(coords(), 0..4)
            .prop_map(|cs| Expr::cells(cs.into_iter().map(Point::new))),
        Just(Expr::Full),
        Just(Expr::Empty),
    ]
}

fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            proptest::collection::vec(inner.clone(), 1..3).prop_map(Expr::union),
            proptest::collection::vec(inner.clone(), 1..3).prop_map(Expr::intersection),
            inner.clone().prop_map(Expr::complement),
            (inner, coords()).prop_map(|(e, o)| e.translate(o)),
        ]
    })
}

/// Membership of every point of `pts` at once, by set algebra on tables.
fn table(e: &Expr, pts: &[Vec<i64>]) -> Vec<bool> {
    match e {
        Expr::Halfspace { axis, sign, c } => pts
            .iter()
            .map(|p| match sign {
                Sign::Plus => p[*axis] >= *c,
                Sign::Minus => p[*axis] <= -*c,
            })
            .collect(),
        Expr::Linear { coeffs, c } => pts
            .iter()
            .map(|p| {
                let mut s = 0;
                for i in 0..p.len() {
                    s += coeffs[i] * p[i];
                }
                s >= *c
            })
            .collect(),
        Expr::Orthant { corner, signs } => pts
            .iter()
            .map(|p| {
                (0..p.len()).all(|i| match signs[i] {
                    Sign::Plus => p[i] >= corner[i],
                    Sign::Minus => p[i] <= corner[i],
                })
            })
            .collect(),
        Expr::Box { lo, hi } => pts
            .iter()
            .map(|p| (0..p.len()).all(|i| lo[i] <= p[i] && p[i] <= hi[i]))
            .collect(),
        Expr::Cells { cells } => pts.iter().map(|p| cells.contains(p)).collect(),
        Expr::Union { args } => args.iter().fold(vec![false; pts.len()], |acc, a| {
            acc.iter()
                .zip(table(a, pts))
                .map(|(x, y)| *x || y)
                .collect()
        }),
        Expr::Intersection { args } => args.iter().fold(vec![true; pts.len()], |acc, a| {
            acc.iter()
                .zip(table(a, pts))
                .map(|(x, y)| *x && y)
                .collect()
        }),
        Expr::Complement { arg } => table(arg, pts).into_iter().map(|b| !b).collect(),
        Expr::Translate { offset, arg } => {
            let shifted: Vec<Vec<i64>> = pts
                .iter()
                .map(|p| p.iter().zip(offset).map(|(x, o)| x - o).collect())
                .collect();
            table(arg, &shifted)
        }
        Expr::Full => vec![true; pts.len()],
        Expr::Empty => vec![false; pts.len()],
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn json_roundtrip(e in expr()) {
        let p = Pattern::new(DIM, e).unwrap();
        let back = Pattern::from_json(&p.to_json()).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(back.to_json(), p.to_json());
    }

    #[test]
    fn csg_matches_table_evaluator(e in expr(), lo in coords(), ext in proptest::collection::vec(0i64..=8, DIM)) {
        let hi: Vec<i64> = lo.iter().zip(&ext).map(|(l, e)| l + e).collect();
        let w = Window::new(lo, hi).unwrap();
        let pts: Vec<Vec<i64>> = w.points().map(|p| p.0).collect();
        let p = Pattern::new(DIM, e.clone()).unwrap();
        let direct: Vec<bool> = w.points().map(|q| p.contains(&q)).collect();
        prop_assert_eq!(direct, table(&e, &pts));
    }

    #[test]
    fn boundaries_and_cut_symmetry(e in expr(), r in 1i64..=4) {
        let w = Window::ball(&Point::origin(DIM), r);
        let a = VertexSet::from_pattern(&w, &Pattern::new(DIM, e).unwrap());
        let (cut, all) = edge_sets(&a, &w).unwrap();
        let (cut_c, _) = edge_sets(&a.complement(), &w).unwrap();
        prop_assert_eq!(&cut, &cut_c);
        prop_assert!(all.len() <= 2 * DIM * w.len());
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        prop_assert_eq!(sorted.len(), all.len());
    }
}

#[test]
fn extrusion_in_three_dimensions() {
    let p = Pattern::new(
        3,
        Expr::orthant([0, 0, 0], [Sign::Plus, Sign::Minus, Sign::Plus]),
    )
    .unwrap();
    let q = p.extrude();
    assert_eq!(q.dim, 4);
    assert!(q.contains(&[1, -1, 2, -7].into()));
    assert!(!q.contains(&[-1, -1, 2, 7].into()));
}
