use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use classforge::arith::{is_prime, is_squarefree};
use classforge::cubic::{
    class_from_point, class_group_cubic, class_structure_at_radius, factor_prime, find_generator,
    make_field, square_class, CubicIdeal, Elem,
};
use classforge::elliptic::Point;
use classforge::error::DEFAULT_BUDGET;

type Q = BigRational;

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// Product in `Q[t]/(t^3 - m)` on power-basis coordinates.
fn pmul(m: i64, a: &[Q; 3], b: &[Q; 3]) -> [Q; 3] {
    let mut c = vec![Q::zero(); 5];
    for i in 0..3 {
        for j in 0..3 {
            c[i + j] += &a[i] * &b[j];
        }
    }
    [&c[0] + &c[3] * q(m), &c[1] + &c[4] * q(m), c[2].clone()]
}

/// Trace on the power basis: Tr(1) = 3, Tr(t) = Tr(t^2) = 0.
fn ptrace(a: &[Q; 3]) -> Q {
    &a[0] * q(3)
}

fn det3(x: &[[Q; 3]; 3]) -> Q {
    &x[0][0] * (&x[1][1] * &x[2][2] - &x[1][2] * &x[2][1])
        - &x[0][1] * (&x[1][0] * &x[2][2] - &x[1][2] * &x[2][0])
        + &x[0][2] * (&x[1][0] * &x[2][1] - &x[1][1] * &x[2][0])
}

/// Characteristic polynomial coefficients of multiplication by `a`.
fn char_poly(m: i64, a: &[Q; 3]) -> [Q; 3] {
    let a2 = pmul(m, a, a);
    let a3 = pmul(m, &a2, a);
    let (t1, t2, t3) = (ptrace(a), ptrace(&a2), ptrace(&a3));
    // Newton: e1 = t1, e2 = (t1^2 - t2)/2, e3 = (t1^3 - 3 t1 t2 + 2 t3)/6
    let e1 = t1.clone();
    let e2 = (&t1 * &t1 - &t2) / q(2);
    let e3 = (&t1 * &t1 * &t1 - q(3) * &t1 * &t2 + q(2) * &t3) / q(6);
    [e1, e2, e3]
}

fn squarefree_ms(lo: i64, hi: i64) -> Vec<i64> {
    (lo..=hi)
        .filter(|&m| is_squarefree(m as i128).unwrap())
        .collect()
}

#[test]
fn integral_basis_and_discriminant() {
    for m in squarefree_ms(2, 50) {
        let f = make_field(m).unwrap();
        let basis = f.basis_power_coords();
        let mut gram: [[Q; 3]; 3] = Default::default();
        for i in 0..3 {
            for j in 0..3 {
                gram[i][j] = ptrace(&pmul(m, &basis[i], &basis[j]));
            }
        }
        let disc = det3(&gram);
        let want = if m.rem_euclid(9) == 1 || m.rem_euclid(9) == 8 {
            -3 * m * m
        } else {
            -27 * m * m
        };
        assert_eq!(disc, q(want), "m = {m}");
        assert_eq!(f.discriminant(), want);
        assert_eq!(f.index3(), want == -3 * m * m);
        for b in &basis {
            assert!(
                char_poly(m, b).iter().all(|c| c.is_integer()),
                "m = {m}: basis not integral"
            );
        }
        let bound = f.minkowski_bound();
        let expect = 4.0 / std::f64::consts::PI * 6.0 / 27.0 * (want.abs() as f64).sqrt();
        assert!((bound - expect).abs() < 1e-9);
    }
    assert!((make_field(2).unwrap().minkowski_bound() - 2.94).abs() < 0.01);
    assert!((make_field(17).unwrap().minkowski_bound() - 8.33).abs() < 0.01);
    assert_eq!(make_field(4).unwrap_err().code(), "not-squarefree");
}

const SAMPLE_FIELDS: [i64; 10] = [2, 3, 5, 6, 7, 10, 17, 19, 26, 30];

#[test]
fn prime_factorizations_are_complete() {
    for m in SAMPLE_FIELDS {
        let f = make_field(m).unwrap();
        for p in (2u64..=100).filter(|&p| is_prime(p as u128)) {
            let primes = factor_prime(&f, p).unwrap();
            let sum: u32 = primes.iter().map(|q| q.e * q.f).sum();
            assert_eq!(sum, 3, "m = {m}, p = {p}");
            let product = primes.iter().fold(CubicIdeal::unit(), |acc, q| {
                acc.mul(&f, &q.ideal.pow(&f, q.e))
            });
            let pp = CubicIdeal::principal(&f, &Elem::from_int(p.into())).unwrap();
            assert_eq!(product, pp, "m = {m}, p = {p}");
            for q in &primes {
                assert_eq!(q.ideal.norm(), &q.norm());
            }
            if (3 * m) % p as i64 != 0 {
                let roots = (0..p)
                    .filter(|&x| ((x * x % p) * x % p) as i64 == m.rem_euclid(p as i64))
                    .count();
                let degree_one = primes.iter().filter(|q| q.f == 1).count();
                assert_eq!(degree_one, roots, "m = {m}, p = {p}");
            }
        }
    }
}

#[test]
fn factor_prime_examples() {
    let f = make_field(2).unwrap();
    let fs: Vec<_> = factor_prime(&f, 5)
        .unwrap()
        .iter()
        .map(|q| (q.e, q.f))
        .collect();
    assert_eq!(fs, vec![(1, 1), (1, 2)]);
    let two = factor_prime(&f, 2).unwrap();
    assert_eq!((two.len(), two[0].e, two[0].f), (1, 3, 1));
    assert_eq!(two[0].ideal, CubicIdeal::principal(&f, &f.theta()).unwrap());
}

#[test]
fn norms_multiply() {
    for m in SAMPLE_FIELDS {
        let f = make_field(m).unwrap();
        let ideals: Vec<CubicIdeal> = [2u64, 3, 5, 7, 11]
            .iter()
            .flat_map(|&p| factor_prime(&f, p).unwrap())
            .map(|q| q.ideal)
            .collect();
        for i in &ideals {
            for j in &ideals {
                let ij = i.mul(&f, j);
                assert_eq!(ij.norm(), &(i.norm() * j.norm()));
                assert_eq!(ij, j.mul(&f, i));
            }
        }
    }
}

#[test]
fn saturation_holds() {
    for (m, h) in [(2, 1), (3, 1), (5, 1), (7, 3), (17, 1)] {
        let f = make_field(m).unwrap();
        let g = class_group_cubic(&f).unwrap();
        assert_eq!(g.class_number, h, "m = {m}");
        let doubled =
            class_structure_at_radius(&f, 2 * g.saturation_radius, DEFAULT_BUDGET).unwrap();
        assert_eq!(doubled, g.structure, "m = {m}");
        assert_eq!(g.structure.order(), Some(g.class_number));
    }
}

fn elem(c: [i64; 3]) -> Elem {
    Elem::from_ints(c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn square_classes_multiply(
        mi in 0usize..4,
        a in prop::array::uniform3(-6i64..=6),
        b in prop::array::uniform3(-6i64..=6),
        g in prop::array::uniform3(-4i64..=4),
    ) {
        let m = [2i64, 7, 17, 19][mi];
        let f = make_field(m).unwrap();
        let (a, b, g) = (elem(a), elem(b), elem(g));
        prop_assume!(!a.is_zero() && !b.is_zero() && !g.is_zero());
        let ca = square_class(&f, &a).unwrap();
        let cb = square_class(&f, &b).unwrap();
        let cab = square_class(&f, &f.mul(&a, &b)).unwrap();
        let (odd, neg) = ca.parity_sum(&cb);
        prop_assert_eq!(&cab.odd_primes, &odd);
        prop_assert_eq!(cab.negative, neg);
        prop_assert!(cab.same_class(&f, &ca.combine(&f, &cb)));
        let ag2 = f.mul(&a, &f.mul(&g, &g));
        prop_assert!(square_class(&f, &ag2).unwrap().same_class(&f, &ca));
    }
}

#[test]
fn square_class_examples() {
    let f = make_field(2).unwrap();
    let t = f.theta();
    assert!(square_class(&f, &f.mul(&t, &t)).unwrap().is_trivial(&f));
    let two = square_class(&f, &Elem::from_int(2.into())).unwrap();
    assert!(!two.is_trivial(&f));
    assert!(two.same_class(&f, &square_class(&f, &t).unwrap()));
    assert_eq!(
        square_class(&f, &elem([0, 0, 0])).unwrap_err().code(),
        "zero"
    );
}

/// Points on `y^2 = x^3 + n` with `T^3 + n` irreducible.
fn point_cases() -> Vec<(i64, Point)> {
    let p = Point::from_ints;
    vec![
        (17, p(-2, 3)),
        (17, p(-1, 4)),
        (17, p(2, 5)),
        (17, p(8, -23)),
        (17, p(43, 282)),
        (-2, p(3, 5)),
        (-7, p(2, 1)),
        (-7, p(32, 181)),
        (-13, p(17, 70)),
        (-11, p(3, 4)),
        (-11, p(15, 58)),
    ]
}

#[test]
fn point_classes_satisfy_relation() {
    for (n, pt) in point_cases() {
        let f = make_field(n).unwrap();
        let g = class_group_cubic(&f).unwrap();
        let pc = class_from_point(&f, n, &pt, &g, DEFAULT_BUDGET).unwrap();
        let x = pt.x().unwrap().to_integer();
        let norm = f.norm(&pc.alpha).to_integer();
        // N(x - theta) = x^3 + n for theta^3 = -n
        assert_eq!(norm, &x * &x * &x + BigInt::from(n), "n = {n}, {pt}");
        let rel = pc.a_squared_b(&f);
        assert!(pc.relation_holds(&f));
        let gen = find_generator(&f, &rel, 30).expect("principal generator");
        assert_eq!(
            CubicIdeal::principal(&f, &gen).unwrap(),
            rel,
            "n = {n}, {pt}"
        );
        assert_eq!(g.class_number % pc.order, 0);
        assert!(pc.b.parts.iter().all(|(_, e)| *e == 1));
    }
}

#[test]
fn point_class_orders_on_17() {
    let f = make_field(17).unwrap();
    let g = class_group_cubic(&f).unwrap();
    let pc = class_from_point(&f, 17, &Point::from_ints(2, 5), &g, DEFAULT_BUDGET).unwrap();
    assert_eq!(f.norm(&pc.alpha), q(25));
    assert!(pc.a.norm() == BigInt::from(5) || pc.a.norm().is_one());
}
