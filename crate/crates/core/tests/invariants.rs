//! Algebraic invariants as properties over generated points and parameters.

use proptest::prelude::*;
use rug::{Integer, Rational};

use northcott_lab::curve::{endo_eval, torsion_points, twist_map, Curve, EndoForm, Endomorphism, Point};
use northcott_lab::dynamics::{orbit, preimages_double, OrbitOutcome, DEFAULT_ORBIT_BITS};
use northcott_lab::galois::{trace_map, transfer_inverse, twist_transfer, ExtensionSpec};
use northcott_lab::heights::naive_height;
use northcott_lab::nf::{sqrt_in_field, AlgNumber, Field, FieldSpec, SqrtBranch};
use northcott_lab::northcott::{kab_min_k, kab_sides, mult_dep_test};

fn config() -> ProptestConfig {
    ProptestConfig { cases: 24, ..ProptestConfig::default() }
}

/// y² = x³ − 7x + 10 with independent points (1, 2) and (2, 2).
fn rank_two() -> (Curve, [Point; 2]) {
    let c = Curve::over_q(0, -7, 10).unwrap();
    let g = [c.point_q(1, 2).unwrap(), c.point_q(2, 2).unwrap()];
    (c, g)
}

fn combo(c: &Curve, g: &[Point], k: (i64, i64)) -> Point {
    c.add(&c.mul(k.0, &g[0]), &c.mul(k.1, &g[1]))
}

/// y² = x³ + x over Q(√10) with P = (2, √10) and the 2-torsion point T = (0, 0).
fn sqrt10() -> (ExtensionSpec, Curve, Point, Point) {
    let ext = ExtensionSpec::quadratic(10).unwrap();
    let f = ext.top().clone();
    let c = Curve::from_rationals(&f, 0, 1, 0).unwrap();
    let p = c.point(AlgNumber::from_int(&f, 2), AlgNumber::generator(&f)).unwrap();
    let t = c.point_q(0, 0).unwrap();
    (ext, c, p, t)
}

/// y² = x³ + x over Q(ζ₁₂) with P = (4/3, (10/9)√3).
fn cm() -> (Curve, Point) {
    let f = Field::new(FieldSpec::cyclotomic(12).unwrap());
    let c = Curve::from_rationals(&f, 0, 1, 0).unwrap();
    let s3 = sqrt_in_field(&AlgNumber::from_int(&f, 3), SqrtBranch::Principal).unwrap().unwrap();
    let p = c.point(AlgNumber::from_rational(&f, (4, 3)), s3.scale(&Rational::from((10, 9)))).unwrap();
    (c, p)
}

fn small() -> impl Strategy<Value = (i64, i64)> {
    (-3i64..=3, -3i64..=3)
}

fn pow_rational(x: &Rational, e: i64) -> Rational {
    let mut r = Rational::from(1);
    for _ in 0..e.unsigned_abs() {
        r *= x;
    }
    if e < 0 {
        r.recip()
    } else {
        r
    }
}

/// ±Π pᵢ^eᵢ over {2, 3, 5}.
fn smooth_rational() -> impl Strategy<Value = Rational> {
    (any::<bool>(), -3i64..=3, -3i64..=3, -3i64..=3).prop_map(|(neg, e2, e3, e5)| {
        let r = pow_rational(&Rational::from(2), e2) * pow_rational(&Rational::from(3), e3) * pow_rational(&Rational::from(5), e5);
        if neg {
            -r
        } else {
            r
        }
    })
}

fn kab_holds(a: i64, b: i64, k: i64) -> bool {
    k * k * k + k * a + b > 8 + 12 * k + 2 * (3 * k * k + a.abs())
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn group_axioms(a in small(), b in small(), c in small()) {
        let (e, g) = rank_two();
        let (p, q, r) = (combo(&e, &g, a), combo(&e, &g, b), combo(&e, &g, c));
        prop_assert_eq!(e.add(&e.add(&p, &q), &r), e.add(&p, &e.add(&q, &r)));
        prop_assert_eq!(e.add(&p, &q), e.add(&q, &p));
        prop_assert_eq!(e.add(&p, &p.neg()), Point::Infinity);
        prop_assert_eq!(e.add(&p, &Point::Infinity), p.clone());
        prop_assert!(e.on_curve(&e.add(&p, &q)).unwrap());
    }

    #[test]
    fn scalar_multiplication_composes(k in small(), m in -5i64..=5, n in -5i64..=5) {
        let (e, g) = rank_two();
        let p = combo(&e, &g, k);
        prop_assert_eq!(e.mul(m, &e.mul(n, &p)), e.mul(m * n, &p));
        prop_assert_eq!(e.mul(m + n, &p), e.add(&e.mul(m, &p), &e.mul(n, &p)));
    }

    #[test]
    fn twist_is_a_homomorphism(a in -3i64..=3, b in 0i64..=1, c in -3i64..=3) {
        let (_, e, p, t) = sqrt10();
        let f = e.field().clone();
        let d = AlgNumber::from_int(&f, 10);
        let p1 = e.add(&e.mul(a, &p), &e.mul(b, &t));
        let p2 = e.mul(c, &p);
        let (tw, i1) = twist_map(&e, &d, &p1, &f, SqrtBranch::Principal).unwrap();
        let (_, i2) = twist_map(&e, &d, &p2, &f, SqrtBranch::Principal).unwrap();
        let (_, i12) = twist_map(&e, &d, &e.add(&p1, &p2), &f, SqrtBranch::Principal).unwrap();
        prop_assert!(tw.on_curve(&i1).unwrap());
        prop_assert_eq!(tw.add(&i1, &i2), i12);
    }

    #[test]
    fn shift_round_trip(k in -12i64..=12, j in small()) {
        let e = Curve::over_q(0, 0, 17).unwrap();
        let g = [e.point_q(-2, 3).unwrap(), e.point_q(-1, 4).unwrap()];
        let (ek, shift) = e.shift_curve(k).unwrap();
        let p = combo(&e, &g, j);
        let q = combo(&e, &g, (j.1, -j.0));
        let mp = shift.map(&p);
        prop_assert!(ek.on_curve(&mp).unwrap());
        prop_assert_eq!(shift.unmap(&mp), p.clone());
        prop_assert_eq!(ek.add(&mp, &shift.map(&q)), shift.map(&e.add(&p, &q)));
    }

    #[test]
    fn endomorphisms_are_additive(re in -2i64..=2, im in -2i64..=2, a in small(), b in small()) {
        prop_assume!((re, im) != (0, 0));
        let (e, p) = cm();
        let iota = Endomorphism::new(&e, EndoForm::Cm { re: 0, im: 1 }).unwrap();
        let ip = endo_eval(&iota, &p).unwrap();
        let p1 = e.add(&e.mul(a.0, &p), &e.mul(a.1, &ip));
        let p2 = e.add(&e.mul(b.0, &p), &e.mul(b.1, &ip));
        let f = Endomorphism::new(&e, EndoForm::Cm { re, im }).unwrap();
        let lhs = endo_eval(&f, &e.add(&p1, &p2)).unwrap();
        let rhs = e.add(&endo_eval(&f, &p1).unwrap(), &endo_eval(&f, &p2).unwrap());
        prop_assert_eq!(lhs, rhs);
        // (re + im·ι)P from the group law
        let direct = e.add(&e.mul(re, &p1), &e.mul(im, &endo_eval(&iota, &p1).unwrap()));
        prop_assert_eq!(endo_eval(&f, &p1).unwrap(), direct);
    }

    #[test]
    fn trace_is_additive_and_rational(a in -3i64..=3, b in 0i64..=1, c in -3i64..=3, d in 0i64..=1) {
        let (ext, e, p, t) = sqrt10();
        let f = e.field().clone();
        // shift by a base point so traces are not always O
        let e2 = Curve::over_q(0, -7, 10).unwrap().lift(&f).unwrap();
        let base = e2.point_q(1, 2).unwrap();
        let p1 = e.add(&e.mul(a, &p), &e.mul(b, &t));
        let p2 = e.add(&e.mul(c, &p), &e.mul(d, &t));
        let t12 = trace_map(&ext, &e, &e.add(&p1, &p2)).unwrap();
        prop_assert_eq!(t12.clone(), e.add(&trace_map(&ext, &e, &p1).unwrap(), &trace_map(&ext, &e, &p2).unwrap()));
        prop_assert!(ext.contains_point(&t12).unwrap());
        let q = e2.mul(a + c, &base);
        let tq = trace_map(&ext, &e2, &q).unwrap();
        prop_assert_eq!(tq.clone(), e2.mul(2, &q));
        prop_assert!(ext.contains_point(&tq).unwrap());
    }

    #[test]
    fn transfer_round_trip(k in -5i64..=5, with_t in 0i64..=1) {
        let (ext, e, p, t) = sqrt10();
        let d = AlgNumber::from_int(ext.top(), 10);
        let q = e.add(&e.mul(k, &p), &e.mul(with_t, &t));
        let img = twist_transfer(&ext, &e, &d, &q).unwrap();
        prop_assert!(img.twist.on_curve(&img.point).unwrap());
        prop_assert_eq!(transfer_inverse(&ext, &e, &d, &img.point).unwrap(), q);
    }

    #[test]
    fn halves_double_back(k in small()) {
        let (e, g) = rank_two();
        let q = combo(&e, &g, k);
        let target = e.double(&q);
        let halves = preimages_double(&e, &target).unwrap();
        prop_assert!(halves.complete);
        prop_assert!(halves.points.contains(&q));
        for h in &halves.points {
            prop_assert_eq!(e.double(h), target.clone());
        }
    }

    #[test]
    fn mult_dep_matches_brute_force(x in smooth_rational(), y in smooth_rational()) {
        let r = mult_dep_test(&x, &y).unwrap();
        let brute = (-20i64..=20).flat_map(|m| (-20i64..=20).map(move |n| (m, n))).find(|&(m, n)| {
            (m, n) != (0, 0) && pow_rational(&x, m) * pow_rational(&y, n) == 1
        });
        prop_assert_eq!(r.dependent, brute.is_some());
        if let Some((m, n)) = r.witness {
            prop_assert_eq!(pow_rational(&x, m) * pow_rational(&y, n), Rational::from(1));
        }
    }

    #[test]
    fn kab_is_minimal(a in -30i64..=30, b in -30i64..=30) {
        prop_assume!(4 * a * a * a + 27 * b * b != 0);
        let k = kab_min_k(&Rational::from(a), &Rational::from(b)).unwrap();
        prop_assert!(kab_holds(a, b, k));
        prop_assert!((1..k).all(|j| !kab_holds(a, b, j)));
        let (lhs, rhs) = kab_sides(&Rational::from(a), &Rational::from(b), k);
        prop_assert!(lhs > rhs);
    }

    #[test]
    fn orbits_follow_the_map(k in small(), steps in 1usize..=4) {
        let (e, g) = rank_two();
        let p = combo(&e, &g, k);
        let two = Endomorphism::scalar(&e, 2);
        let o = orbit(&two, &p, steps, DEFAULT_ORBIT_BITS).unwrap();
        prop_assert_eq!(o.start(), &p);
        for w in o.iterates.windows(2) {
            prop_assert_eq!(e.double(&w[0]), w[1].clone());
        }
        for (q, h) in o.iterates.iter().zip(&o.heights) {
            prop_assert_eq!(naive_height(&e, q).unwrap(), *h);
        }
        // the group E(Q) here is torsion-free, so only O cycles
        prop_assert_eq!(o.is_preperiodic(), p.is_infinity());
    }
}

#[test]
fn torsion_orbits_cycle() {
    for (a, b, c) in [(0, 1, 0), (0, -1, 0), (0, 0, 1)] {
        let e = Curve::over_q(a, b, c).unwrap();
        let two = Endomorphism::scalar(&e, 2);
        for m in [2, 3] {
            for t in torsion_points(&e, m, &Field::rational()).unwrap().points {
                let o = orbit(&two, &t, 20, DEFAULT_ORBIT_BITS).unwrap();
                assert!(matches!(o.outcome, OrbitOutcome::Cycle { .. }), "{t}");
            }
        }
    }
    // sanity for the brute-force helper
    assert_eq!(pow_rational(&Rational::from((2, 3)), -2), Rational::from((9, 4)));
    assert_eq!(Integer::from(1), 1);
}
