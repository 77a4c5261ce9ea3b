//! Pure cubic fields `Q(theta)`, `theta^3 = m` with `m` squarefree.
//!
//! Integral elements are stored by their coordinates over the integral basis
//! `omega = (1, theta, omega_3)`, where `omega_3 = theta^2` unless
//! `m = +-1 mod 9`, in which case `omega_3 = (1 + s theta + theta^2) / 3`
//! with `s = m mod 3` taken in `{1, -1}`.

mod classgroup;
mod ideal;
mod point;
mod square;

pub use classgroup::{
    class_group_cubic, class_group_cubic_with, class_structure_at_radius, factored_rational_prime,
    find_generator, CubicClassGroup, FactorBaseEntry, FactorBaseSummary,
};
pub use ideal::{factor_prime, CubicIdeal, FactoredIdeal, PrimeIdeal, PrimeSummary};
pub use point::{class_from_point, descent_element, PointClass};
pub use square::{is_square, square_class, square_class_with, square_root, SquareClass};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::is_squarefree;
use crate::error::{Error, Result};

type Mat3 = [[BigInt; 3]; 3];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PureCubicField {
    m: i64,
    /// -1 when the field was requested as `Q(cbrt(-m))`.
    orientation: i8,
    index3: bool,
    /// `s` in `omega_3 = (1 + s theta + theta^2) / 3`; zero when unused.
    twist: i64,
    /// `omega_i omega_j = sum_k mult[i][j][k] omega_k`.
    mult: [[[i64; 3]; 3]; 3],
    discriminant: i64,
}

impl PureCubicField {
    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn orientation(&self) -> i8 {
        self.orientation
    }

    /// Whether 3 divides `[O_K : Z[theta]]`.
    pub fn index3(&self) -> bool {
        self.index3
    }

    pub fn discriminant(&self) -> i64 {
        self.discriminant
    }

    /// `(4/pi) * (3!/3^3) * sqrt(|disc|)`.
    pub fn minkowski_bound(&self) -> f64 {
        4.0 / std::f64::consts::PI * (6.0 / 27.0) * (self.discriminant.unsigned_abs() as f64).sqrt()
    }

    /// Rational primes `p <= minkowski_bound`.
    pub fn minkowski_primes(&self) -> Vec<u64> {
        crate::arith::primes_up_to(self.minkowski_bound().floor() as u64)
    }

    pub fn mult_table(&self) -> &[[[i64; 3]; 3]; 3] {
        &self.mult
    }

    /// Integral basis in power-basis coordinates `(1, theta, theta^2)`.
    pub fn basis_power_coords(&self) -> [[BigRational; 3]; 3] {
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        if self.index3 {
            [
                [q(1, 1), q(0, 1), q(0, 1)],
                [q(0, 1), q(1, 1), q(0, 1)],
                [q(1, 3), q(self.twist, 3), q(1, 3)],
            ]
        } else {
            [
                [q(1, 1), q(0, 1), q(0, 1)],
                [q(0, 1), q(1, 1), q(0, 1)],
                [q(0, 1), q(0, 1), q(1, 1)],
            ]
        }
    }

    /// Integer coordinates of `c0 + c1 theta + c2 theta^2` over the integral basis.
    pub fn from_power_coords(&self, c: [BigInt; 3]) -> Elem {
        let [c0, c1, c2] = c;
        if self.index3 {
            // theta^2 = 3 omega_3 - 1 - s theta
            let s = BigInt::from(self.twist);
            Elem::integral([c0 - &c2, c1 - &s * &c2, BigInt::from(3) * c2])
        } else {
            Elem::integral([c0, c1, c2])
        }
    }

    /// Power-basis coordinates of an element.
    pub fn to_power_coords(&self, e: &Elem) -> [BigRational; 3] {
        let b = self.basis_power_coords();
        let den = BigRational::from_integer(e.den.clone());
        std::array::from_fn(|k| {
            (0..3)
                .map(|i| BigRational::from_integer(e.c[i].clone()) * &b[i][k])
                .sum::<BigRational>()
                / &den
        })
    }

    /// `theta` as an element.
    pub fn theta(&self) -> Elem {
        Elem::integral([BigInt::zero(), BigInt::one(), BigInt::zero()])
    }

    pub fn one(&self) -> Elem {
        Elem::from_int(BigInt::one())
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let mut out: [BigInt; 3] = Default::default();
        for i in 0..3 {
            if a.c[i].is_zero() {
                continue;
            }
            for j in 0..3 {
                if b.c[j].is_zero() {
                    continue;
                }
                let ab = &a.c[i] * &b.c[j];
                for (k, o) in out.iter_mut().enumerate() {
                    let t = self.mult[i][j][k];
                    if t != 0 {
                        *o += &ab * t;
                    }
                }
            }
        }
        Elem::new(out, &a.den * &b.den)
    }

    /// Matrix of `x -> x * a` acting on integral-basis row vectors
    /// (numerator part only).
    pub fn mul_matrix(&self, a: &Elem) -> Mat3 {
        std::array::from_fn(|i| {
            let mut e = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
            e[i] = BigInt::one();
            let prod = self.mul(&Elem::integral(e), &Elem::integral(a.c.clone()));
            prod.c
        })
    }

    pub fn norm(&self, a: &Elem) -> BigRational {
        let d = det3(&self.mul_matrix(a));
        BigRational::new(d, a.den.pow(3))
    }

    pub fn trace(&self, a: &Elem) -> BigRational {
        let m = self.mul_matrix(a);
        BigRational::new(&m[0][0] + &m[1][1] + &m[2][2], a.den.clone())
    }

    pub fn inverse(&self, a: &Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::invalid("zero", "zero has no inverse"));
        }
        // x * M = den * e_0  =>  x = den * e_0 * adj(M) / det(M)
        let m = self.mul_matrix(a);
        let adj = adjugate3(&m);
        let det = det3(&m);
        let c = std::array::from_fn(|k| &adj[0][k] * &a.den);
        Ok(Elem::new(c, det))
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        Ok(self.mul(a, &self.inverse(b)?))
    }

    /// Sign of the real embedding (the other two embeddings are complex
    /// conjugates, so it agrees with the sign of the norm).
    pub fn real_sign(&self, a: &Elem) -> i8 {
        let n = self.norm(a);
        if n.is_positive() {
            1
        } else if n.is_negative() {
            -1
        } else {
            0
        }
    }

    /// Field discriminant recomputed as `det(Tr(omega_i omega_j))`.
    pub fn trace_form_discriminant(&self) -> BigInt {
        let basis: Vec<Elem> = (0..3)
            .map(|i| {
                let mut e = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
                e[i] = BigInt::one();
                Elem::integral(e)
            })
            .collect();
        let m: Mat3 = std::array::from_fn(|i| {
            std::array::from_fn(|j| self.trace(&self.mul(&basis[i], &basis[j])).to_integer())
        });
        det3(&m)
    }
}

/// Dedekind's criterion at 3 for `T^3 - m`: whether `Z[theta]` is 3-maximal.
///
/// With `c = m mod 3`, `T^3 - m = (T - c)^3 + 3 F(T)` and the criterion
/// reduces to `F(c) != 0 mod 3`, i.e. `(m - c^3) / 3` not divisible by 3.
pub fn dedekind_three_maximal(m: i64) -> bool {
    let c = m.rem_euclid(3);
    let f_at_c = (m as i128 - (c as i128).pow(3)) / 3;
    f_at_c.rem_euclid(3) != 0
}

/// Builds `Q(cbrt(m))`; negative `m` gives the same field with
/// `orientation = -1`.
pub fn make_field(m: i64) -> Result<PureCubicField> {
    if m.unsigned_abs() < 2 {
        return Err(Error::invalid(
            "degenerate",
            format!("|m| = {} < 2", m.abs()),
        ));
    }
    if !is_squarefree(m as i128)? {
        return Err(Error::invalid(
            "not-squarefree",
            format!("m = {m} is not squarefree"),
        ));
    }
    let orientation = if m < 0 { -1 } else { 1 };
    let m = m.abs();
    let index3 = !dedekind_three_maximal(m);
    let twist = if index3 {
        if m.rem_euclid(3) == 1 {
            1
        } else {
            -1
        }
    } else {
        0
    };
    let discriminant = if index3 { -3 * m * m } else { -27 * m * m };
    let mut field = PureCubicField {
        m,
        orientation,
        index3,
        twist,
        mult: [[[0; 3]; 3]; 3],
        discriminant,
    };
    field.mult = build_mult_table(&field);
    debug_assert_eq!(
        field.trace_form_discriminant(),
        BigInt::from(field.discriminant)
    );
    Ok(field)
}

fn build_mult_table(field: &PureCubicField) -> [[[i64; 3]; 3]; 3] {
    let b = field.basis_power_coords();
    let m = BigRational::from_integer(field.m.into());
    let mut table = [[[0i64; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            // product in power basis, reduce theta^3 = m, theta^4 = m theta
            let mut prod = vec![BigRational::zero(); 5];
            for (s, x) in b[i].iter().enumerate() {
                for (t, y) in b[j].iter().enumerate() {
                    prod[s + t] += x * y;
                }
            }
            let p0 = &prod[0] + &m * &prod[3];
            let p1 = &prod[1] + &m * &prod[4];
            let p2 = prod[2].clone();
            // convert to integral coordinates (denominators must clear)
            let den = p0.denom().lcm(p1.denom()).lcm(p2.denom());
            let scale = BigRational::from_integer(den.clone());
            let e = field.from_power_coords([
                (&p0 * &scale).to_integer(),
                (&p1 * &scale).to_integer(),
                (&p2 * &scale).to_integer(),
            ]);
            for k in 0..3 {
                let (q, r) = e.c[k].div_rem(&den);
                assert!(
                    r.is_zero(),
                    "integral basis not closed under multiplication"
                );
                table[i][j][k] = i64::try_from(q).expect("small structure constant");
            }
        }
    }
    table
}

/// Field element `(c0 omega_1 + c1 omega_2 + c2 omega_3) / den`, `den > 0`,
/// stored in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem {
    pub c: [BigInt; 3],
    pub den: BigInt,
}

impl Elem {
    pub fn new(c: [BigInt; 3], den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let g = c.iter().fold(den.clone(), |g, x| g.gcd(x));
        let sign = if den.is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        let g = g * sign;
        Elem {
            c: std::array::from_fn(|k| &c[k] / &g),
            den: den / g,
        }
    }

    pub fn integral(c: [BigInt; 3]) -> Self {
        Elem {
            c,
            den: BigInt::one(),
        }
    }

    pub fn from_int(n: BigInt) -> Self {
        Elem::integral([n, BigInt::zero(), BigInt::zero()])
    }

    pub fn from_ints(c: [i64; 3]) -> Self {
        Elem::integral(c.map(BigInt::from))
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// Rational iff only the coordinate on `omega_1 = 1` is nonzero.
    pub fn as_rational(&self) -> Option<BigRational> {
        (self.c[1].is_zero() && self.c[2].is_zero())
            .then(|| BigRational::new(self.c[0].clone(), self.den.clone()))
    }

    pub fn add(&self, o: &Elem) -> Elem {
        Elem::new(
            std::array::from_fn(|k| &self.c[k] * &o.den + &o.c[k] * &self.den),
            &self.den * &o.den,
        )
    }

    pub fn sub(&self, o: &Elem) -> Elem {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Elem {
        Elem {
            c: std::array::from_fn(|k| -&self.c[k]),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Elem {
        Elem::new(std::array::from_fn(|i| &self.c[i] * k), self.den.clone())
    }

    /// `(numerator, denominator)` with the numerator integral.
    pub fn split(&self) -> (Elem, BigInt) {
        (Elem::integral(self.c.clone()), self.den.clone())
    }
}

pub(crate) fn det3(m: &Mat3) -> BigInt {
    &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
        - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
}

fn adjugate3(m: &Mat3) -> Mat3 {
    let cof = |r0: usize, r1: usize, c0: usize, c1: usize| {
        &m[r0][c0] * &m[r1][c1] - &m[r0][c1] * &m[r1][c0]
    };
    // adj[i][j] = cofactor(j, i)
    [
        [cof(1, 2, 1, 2), -cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
        [-cof(1, 2, 0, 2), cof(0, 2, 0, 2), -cof(0, 1, 0, 2)],
        [cof(1, 2, 0, 1), -cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_examples() {
        let f = make_field(2).unwrap();
        assert!(!f.index3());
        assert_eq!(f.discriminant(), -108);
        assert!((f.minkowski_bound() - 2.94).abs() < 0.01);

        let f = make_field(17).unwrap();
        assert!(f.index3());
        assert_eq!(f.discriminant(), -867);
        assert!((f.minkowski_bound() - 8.33).abs() < 0.01);

        assert_eq!(make_field(4).unwrap_err().code(), "not-squarefree");
        assert_eq!(make_field(1).unwrap_err().code(), "degenerate");
        let g = make_field(-17).unwrap();
        assert_eq!(g.orientation(), -1);
        assert_eq!(g.m(), 17);
    }

    #[test]
    fn norms_and_inverses() {
        let f = make_field(2).unwrap();
        let th = f.theta();
        assert_eq!(f.norm(&th), BigRational::from_integer(2.into()));
        let cube = f.mul(&f.mul(&th, &th), &th);
        assert_eq!(cube, Elem::from_ints([2, 0, 0]));
        // N(x - theta) = x^3 - 2 at x = 3
        let a = Elem::from_ints([3, -1, 0]);
        assert_eq!(f.norm(&a), BigRational::from_integer(25.into()));
        let inv = f.inverse(&a).unwrap();
        assert_eq!(f.mul(&a, &inv), f.one());
        assert_eq!(f.real_sign(&Elem::from_ints([1, -1, 0])), -1);
    }

    #[test]
    fn index_three_basis_is_integral() {
        for m in [10, 17, 19, 26] {
            let f = make_field(m).unwrap();
            assert!(f.index3());
            let w3 = Elem::from_ints([0, 0, 1]);
            assert!(f.norm(&w3).is_integer());
            assert!(f.trace(&w3).is_integer());
            assert_eq!(f.trace_form_discriminant(), BigInt::from(-3 * m * m));
        }
    }

    #[test]
    fn dedekind_matches_residue_rule() {
        for m in (2..200i64).filter(|&m| is_squarefree(m as i128).unwrap()) {
            let non_max = !dedekind_three_maximal(m);
            let rule = m.rem_euclid(9) == 1 || m.rem_euclid(9) == 8;
            assert_eq!(non_max, rule, "m = {m}");
        }
    }
}
