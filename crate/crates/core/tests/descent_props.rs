use classforge::cubic::{descent_element, make_field, square_class, PureCubicField, SquareClass};
use classforge::descent::{point_search, selmer_to_classgroup, two_descent_rank};
use classforge::elliptic::{Curve, Point};
use classforge::error::DEFAULT_BUDGET;

fn delta(f: &PureCubicField, n: i64, p: &Point) -> Option<SquareClass> {
    let (alpha, _) = descent_element(f, n, p).ok()?;
    // norms past 128 bits are out of the factoring range; skip those samples
    square_class(f, &alpha).ok()
}

#[test]
fn delta_is_a_homomorphism() {
    let n = 17;
    let f = make_field(n).unwrap();
    let curve = Curve::mordell(n).unwrap();
    let pool = point_search(n, 10_000, DEFAULT_BUDGET).unwrap();
    assert!(pool.len() >= 30);
    let mut checked = 0;
    'outer: for (i, p) in pool.iter().enumerate() {
        for q in &pool[i..] {
            let s = curve.add(p, q).unwrap();
            if s.is_infinity() {
                continue;
            }
            let (Some(dp), Some(dq), Some(ds)) =
                (delta(&f, n, p), delta(&f, n, q), delta(&f, n, &s))
            else {
                continue;
            };
            assert!(ds.same_class(&f, &dp.combine(&f, &dq)), "{p} + {q}");
            checked += 1;
            if checked == 100 {
                break 'outer;
            }
        }
    }
    assert_eq!(checked, 100);
}

#[test]
fn doubles_are_in_the_kernel() {
    for n in [17, -7, -2] {
        let f = make_field(n).unwrap();
        let curve = Curve::mordell(n).unwrap();
        let mut checked = 0;
        for p in point_search(n, 1_000, DEFAULT_BUDGET).unwrap() {
            let d = curve.double(&p);
            if let Some(c) = delta(&f, n, &d) {
                assert!(c.is_trivial(&f), "n = {n}, 2{p}");
                checked += 1;
            }
        }
        assert!(checked >= 2, "n = {n}: {checked}");
    }
}

#[test]
fn rank_is_bounded_and_monotone() {
    let pool = point_search(17, 10_000, DEFAULT_BUDGET).unwrap();
    let mut last = 0;
    for k in 0..=pool.len().min(16) {
        let r = two_descent_rank(17, &pool[..k], DEFAULT_BUDGET).unwrap();
        assert!(r.f2_rank <= k);
        assert!(r.f2_rank >= last);
        assert_eq!(r.rows.len(), k);
        for row in &r.rows {
            assert_eq!(row.bits.len(), r.columns.len());
        }
        last = r.f2_rank;
    }
    // E(Q) has rank 2 and no 2-torsion, so the image is (Z/2)^2
    assert_eq!(last, 2);
}

#[test]
fn descent_examples() {
    let p = Point::from_ints;
    let r = two_descent_rank(17, &[p(-2, 3), p(2, 5)], DEFAULT_BUDGET).unwrap();
    assert_eq!(r.f2_rank, 2);
    let r = two_descent_rank(17, &[p(-2, 3), p(-2, -3)], DEFAULT_BUDGET).unwrap();
    assert_eq!(r.f2_rank, 1);
    let r = two_descent_rank(17, &[Point::Infinity], DEFAULT_BUDGET).unwrap();
    assert_eq!((r.f2_rank, r.excluded.len()), (0, 1));
    let r = selmer_to_classgroup(17, &[], DEFAULT_BUDGET).unwrap();
    assert!(r.class_rows.is_empty());
    assert_eq!(r.f2_rank, 0);
    let off = two_descent_rank(17, &[p(1, 1)], DEFAULT_BUDGET).unwrap_err();
    assert_eq!(off.code(), "off-curve");
}

#[test]
fn search_finds_listed_points() {
    let pts = point_search(17, 100, DEFAULT_BUDGET).unwrap();
    for (x, y) in [(-2, 3), (-1, 4), (2, 5), (4, 9), (8, 23)] {
        assert!(pts.contains(&Point::from_ints(x, y)));
        assert!(pts.contains(&Point::from_ints(x, -y)));
    }
    // exhaustive check of the integral part of the window
    let integral: Vec<_> = pts.iter().filter(|p| p.is_integral()).cloned().collect();
    let mut want = Vec::new();
    for x in -100i64..=100 {
        let t = x * x * x + 17;
        if t < 0 {
            continue;
        }
        let y = (t as f64).sqrt().round() as i64;
        if y * y == t {
            want.push(Point::from_ints(x, -y));
            if y != 0 {
                want.push(Point::from_ints(x, y));
            }
        }
    }
    want.sort();
    assert_eq!(integral, want);
    assert!(point_search(7, 10, DEFAULT_BUDGET)
        .unwrap()
        .iter()
        .all(|p| Curve::mordell(7).unwrap().contains(p)));
}

#[test]
fn class_rows_hold_the_relation() {
    for n in [17, -7, -13, 2] {
        let pts = point_search(n, 1_000, DEFAULT_BUDGET).unwrap();
        let r = selmer_to_classgroup(n, &pts, DEFAULT_BUDGET).unwrap();
        let h = r.class_number.unwrap();
        for row in &r.class_rows {
            assert!(row.relation_holds, "n = {n}, {}", row.point);
            assert_eq!(h % row.order, 0);
        }
        if h == 1 {
            assert!(r.class_rows.iter().all(|c| c.order == 1));
        }
    }
}
