use latmin::currents::{certify_radius, certify_up_to_radius, validate_certificate, Outcome};
use latmin::energy::perimeter;
use latmin::lattice::{Expr, Pattern, Point, Sign, VertexSet, Window};
use latmin::mincut::{brute_force_least_perimeter, is_least_perimeter, least_perimeter_solve};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// A random box in dimension `n` with at most 16 cells.
fn random_window(rng: &mut StdRng, n: usize) -> Window {
    loop {
        let lo: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
        let hi: Vec<i64> = lo
            .iter()
            .map(|&l| l + rng.gen_range(0..if n == 1 { 16 } else { 4 }))
            .collect();
        let w = Window::new(lo, hi).unwrap();
        if w.len() <= 16 {
            return w;
        }
    }
}

fn random_set(rng: &mut StdRng, w: &Window) -> VertexSet {
    let p = rng.gen_range(0.1..0.9);
    VertexSet::from_fn(w, |_| rng.gen_bool(p))
}

#[test]
fn solver_agrees_with_brute_force() {
    let mut rng = StdRng::seed_from_u64(7);
    for n in 1..=3 {
        for _ in 0..500 {
            let w = random_window(&mut rng, n);
            let phi = random_set(&mut rng, &w);
            let fast = least_perimeter_solve(&w, &phi).unwrap();
            let brute = brute_force_least_perimeter(&w, &phi).unwrap();
            assert_eq!(fast.value, brute.value, "{w:?}");
            assert!(fast.set.same_trace(&phi));
            assert_eq!(perimeter(&fast.set, &w).unwrap(), fast.value);
            assert!(brute.optima.contains(&fast.set));
            for opt in &brute.optima {
                assert!(is_least_perimeter(opt, &w).unwrap());
            }
        }
    }
}

#[test]
fn complement_has_the_same_minimum() {
    let mut rng = StdRng::seed_from_u64(11);
    for n in 1..=3 {
        for _ in 0..200 {
            let w = random_window(&mut rng, n);
            let phi = random_set(&mut rng, &w);
            let a = least_perimeter_solve(&w, &phi).unwrap();
            let b = least_perimeter_solve(&w, &phi.complement()).unwrap();
            assert_eq!(a.value, b.value);
            assert!(is_least_perimeter(&a.set.complement(), &w).unwrap());
        }
    }
}

#[test]
fn optimizers_restrict_to_optimizers() {
    let mut rng = StdRng::seed_from_u64(13);
    for n in 1..=3 {
        for _ in 0..200 {
            let w = random_window(&mut rng, n);
            let phi = random_set(&mut rng, &w);
            let opt = least_perimeter_solve(&w, &phi).unwrap().set;
            let lo: Vec<i64> = (0..n)
                .map(|i| rng.gen_range(w.lo()[i]..=w.hi()[i]))
                .collect();
            let hi: Vec<i64> = (0..n).map(|i| rng.gen_range(lo[i]..=w.hi()[i])).collect();
            let sub = Window::new(lo, hi).unwrap();
            let r = opt.restrict(&sub).unwrap();
            assert!(is_least_perimeter(&r, &sub).unwrap(), "{sub:?} in {w:?}");
        }
    }
}

fn strip(width: i64) -> Pattern {
    Pattern::new(
        2,
        Expr::intersection([
            Expr::halfspace(1, Sign::Plus, 0),
            Expr::halfspace(1, Sign::Minus, -(width - 1)),
        ]),
    )
    .unwrap()
}

#[test]
fn refutation_persists_at_larger_radii() {
    for width in 1..=4 {
        let p = strip(width);
        let report = certify_up_to_radius(&p, &Point::origin(2), 6).unwrap();
        let first = report
            .first_refutation()
            .expect("a finite strip is not minimal")
            .radius;
        for o in &report.outcomes {
            assert_eq!(o.is_certified(), o.radius() < first, "width {width}");
            if let Outcome::Refuted(r) = o {
                assert!(r.verify(&p));
            }
        }
    }
}

#[test]
fn certificates_are_integral_and_validate() {
    let quadrant = Pattern::new(2, Expr::orthant([0, 0], [Sign::Plus, Sign::Plus])).unwrap();
    let half3 = Pattern::new(3, Expr::halfspace(2, Sign::Minus, 0)).unwrap();
    for (p, c) in [(quadrant, Point::from([0, 0])), (half3, Point::origin(3))] {
        for r in 1..=4 {
            match certify_radius(&p, &c, r).unwrap() {
                Outcome::Certified(cert) => {
                    assert!(cert.current.values.iter().all(|v| (-1..=1).contains(v)));
                    assert!(validate_certificate(&cert, &p));
                    assert!(validate_certificate(&cert.negated(), &p.complement()));
                }
                Outcome::Refuted(_) => panic!("{} refuted at {r}", p.id_or_anon()),
            }
        }
    }
}
