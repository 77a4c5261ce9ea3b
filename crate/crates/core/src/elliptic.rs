//! Short Weierstrass curves `y^2 = x^3 + a x + b` over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{factor_bigint, integer_roots, is_prime, AbelianStructure};
use crate::error::{Error, Result, DEFAULT_BUDGET};
use crate::group;

/// Largest torsion order permitted by Mazur's theorem.
pub const MAZUR_MAX_ORDER: u64 = 12;
/// Cap on the naive point count.
pub const MAX_COUNT_PRIME: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Curve {
    a: BigRational,
    b: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Infinity,
    Affine { x: BigRational, y: BigRational },
}

impl Point {
    pub fn affine(x: BigRational, y: BigRational) -> Self {
        Point::Affine { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::Affine {
            x: BigRational::from_integer(x.into()),
            y: BigRational::from_integer(y.into()),
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn x(&self) -> Option<&BigRational> {
        match self {
            Point::Infinity => None,
            Point::Affine { x, .. } => Some(x),
        }
    }

    pub fn y(&self) -> Option<&BigRational> {
        match self {
            Point::Infinity => None,
            Point::Affine { y, .. } => Some(y),
        }
    }

    pub fn is_integral(&self) -> bool {
        match self {
            Point::Infinity => true,
            Point::Affine { x, y } => x.is_integer() && y.is_integer(),
        }
    }
}

impl std::fmt::Display for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Point::Infinity => write!(f, "O"),
            Point::Affine { x, y } => write!(f, "({x},{y})"),
        }
    }
}

/// Torsion subgroup of `E(Q)`, listed with infinity first and then by `(x, y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionGroup {
    pub points: Vec<Point>,
    pub structure: AbelianStructure,
    pub generators: Vec<Point>,
}

impl TorsionGroup {
    pub fn order(&self) -> usize {
        self.points.len()
    }
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

impl Curve {
    pub fn new(a: BigRational, b: BigRational) -> Result<Self> {
        let c = Curve { a, b };
        if c.discriminant_quantity().is_zero() {
            return Err(Error::invalid("singular", "4a^3 + 27b^2 = 0"));
        }
        Ok(c)
    }

    pub fn integral(a: i64, b: i64) -> Result<Self> {
        Curve::new(q(a), q(b))
    }

    /// The curve `y^2 = x^3 + n`.
    pub fn mordell(n: i64) -> Result<Self> {
        Curve::integral(0, n)
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    /// `4a^3 + 27b^2`; the curve discriminant is `-16` times this.
    pub fn discriminant_quantity(&self) -> BigRational {
        q(4) * &self.a * &self.a * &self.a + q(27) * &self.b * &self.b
    }

    pub fn has_integral_coefficients(&self) -> bool {
        self.a.is_integer() && self.b.is_integer()
    }

    fn rhs(&self, x: &BigRational) -> BigRational {
        x * x * x + &self.a * x + &self.b
    }

    pub fn contains(&self, p: &Point) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine { x, y } => y * y == self.rhs(x),
        }
    }

    fn check(&self, p: &Point) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::invalid(
                "off-curve",
                format!("{p} is not on the curve"),
            ))
        }
    }

    pub fn neg(&self, p: &Point) -> Point {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::affine(x.clone(), -y),
        }
    }

    /// Chord-and-tangent addition without the on-curve check.
    pub fn add_unchecked(&self, p: &Point, r: &Point) -> Point {
        let (x1, y1, x2, y2) = match (p, r) {
            (Point::Infinity, _) => return r.clone(),
            (_, Point::Infinity) => return p.clone(),
            (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let slope = if x1 == x2 {
            if (y1 + y2).is_zero() {
                return Point::Infinity;
            }
            (q(3) * x1 * x1 + &self.a) / (q(2) * y1)
        } else {
            (y2 - y1) / (x2 - x1)
        };
        let x3 = &slope * &slope - x1 - x2;
        let y3 = slope * (x1 - &x3) - y1;
        Point::affine(x3, y3)
    }

    pub fn add(&self, p: &Point, r: &Point) -> Result<Point> {
        self.check(p)?;
        self.check(r)?;
        Ok(self.add_unchecked(p, r))
    }

    pub fn double(&self, p: &Point) -> Point {
        self.add_unchecked(p, p)
    }

    /// `k * P` by double-and-add; negative `k` multiplies `-P`.
    pub fn multiply(&self, k: i64, p: &Point) -> Result<Point> {
        self.check(p)?;
        let base = if k < 0 { self.neg(p) } else { p.clone() };
        Ok(group::power(
            &base,
            k.unsigned_abs(),
            &Point::Infinity,
            &|a: &Point, b: &Point| self.add_unchecked(a, b),
        ))
    }

    /// Order of `P` if it is at most `limit`.
    pub fn order_up_to(&self, p: &Point, limit: u64) -> Option<u64> {
        group::order_of(
            p,
            &Point::Infinity,
            &|a: &Point, b: &Point| self.add_unchecked(a, b),
            limit,
        )
    }

    fn integer_coefficients(&self) -> Result<(BigInt, BigInt)> {
        if !self.has_integral_coefficients() {
            return Err(Error::invalid(
                "non-integral-curve",
                "Nagell-Lutz enumeration needs integer a and b",
            ));
        }
        Ok((self.a.to_integer(), self.b.to_integer()))
    }

    /// Integral points with `y = 0` or `y^2 | 4a^3 + 27b^2`, sorted by `(x, y)`.
    pub fn nagell_lutz_candidates(&self) -> Result<Vec<Point>> {
        let (a, b) = self.integer_coefficients()?;
        let d = BigInt::from(4) * &a * &a * &a + BigInt::from(27) * &b * &b;
        let fac = factor_bigint(&d, DEFAULT_BUDGET)?;

        // every y >= 0 with y = 0 or y^2 | d
        let mut ys = vec![BigInt::zero(), BigInt::one()];
        let mut divisors = vec![BigInt::one()];
        for &(p, e) in &fac.factors {
            let p = BigInt::from(p);
            let mut next = Vec::new();
            for y in &divisors {
                let mut pk = BigInt::one();
                for _ in 0..=e / 2 {
                    next.push(y * &pk);
                    pk *= &p;
                }
            }
            divisors = next;
        }
        ys.extend(divisors.into_iter().filter(|y| !y.is_one()));

        let mut pts = Vec::new();
        for y in ys {
            let coeffs = [&b - &y * &y, a.clone(), BigInt::zero(), BigInt::one()];
            for x in integer_roots(&coeffs) {
                let xq = BigRational::from_integer(x);
                let yq = BigRational::from_integer(y.clone());
                if !y.is_zero() {
                    pts.push(Point::affine(xq.clone(), -yq.clone()));
                }
                pts.push(Point::affine(xq, yq));
            }
        }
        pts.sort();
        pts.dedup();
        Ok(pts)
    }

    /// Rational torsion: the Nagell-Lutz candidates of order at most 12.
    pub fn torsion_subgroup(&self) -> Result<TorsionGroup> {
        let mut points = vec![Point::Infinity];
        for p in self.nagell_lutz_candidates()? {
            if self.order_up_to(&p, MAZUR_MAX_ORDER).is_some() {
                points.push(p);
            }
        }
        points.sort();
        let op = |a: &Point, b: &Point| self.add_unchecked(a, b);
        debug_assert!(points.iter().all(|p| points
            .iter()
            .all(|r| points.binary_search(&op(p, r)).is_ok())));
        let d = group::decompose(&points, &Point::Infinity, op);
        debug_assert!(in_mazur_list(&d.structure));
        Ok(TorsionGroup {
            points,
            structure: d.structure,
            generators: d.generators,
        })
    }

    /// Whether `p` is an odd prime of good reduction for this model.
    pub fn is_good_prime(&self, p: u64) -> bool {
        if p < 3 || !is_prime(p as u128) {
            return false;
        }
        let pb = BigInt::from(p);
        let d = self.discriminant_quantity();
        for den in [self.a.denom(), self.b.denom()] {
            if den.is_multiple_of(&pb) {
                return false;
            }
        }
        !d.numer().is_multiple_of(&pb)
    }

    /// Naive `#E(F_p)` including the point at infinity.
    pub fn count_points_mod_p(&self, p: u64) -> Result<u64> {
        if p > MAX_COUNT_PRIME {
            return Err(Error::invalid(
                "prime-too-large",
                format!("naive point count capped at p <= {MAX_COUNT_PRIME}"),
            ));
        }
        if !self.is_good_prime(p) {
            return Err(Error::invalid(
                "bad-reduction",
                format!("{p} is not an odd prime of good reduction"),
            ));
        }
        let reduce = |r: &BigRational| -> u64 {
            let pb = BigInt::from(p);
            let num = r.numer().mod_floor(&pb);
            let den = r.denom().mod_floor(&pb);
            let inv = den.modpow(&BigInt::from(p - 2), &pb);
            (num * inv).mod_floor(&pb).to_u64().expect("residue fits")
        };
        let (a, b) = (reduce(&self.a), reduce(&self.b));
        let mut is_square = vec![false; p as usize];
        for t in 0..p {
            is_square[(t * t % p) as usize] = true;
        }
        let mut count = 1u64;
        for x in 0..p {
            let rhs = (x * x % p * x + a * x + b) % p;
            count += if rhs == 0 {
                1
            } else if is_square[rhs as usize] {
                2
            } else {
                0
            };
        }
        Ok(count)
    }

    /// The first `k` odd primes of good reduction.
    pub fn first_good_primes(&self, k: usize) -> Vec<u64> {
        (3u64..)
            .filter(|&p| self.is_good_prime(p))
            .take(k)
            .collect()
    }
}

/// Whether `s` is one of the fifteen rational torsion structures.
pub fn in_mazur_list(s: &AbelianStructure) -> bool {
    if s.free_rank != 0 {
        return false;
    }
    match s.elementary_divisors.as_slice() {
        [] => true,
        [n] => (2..=10).contains(n) || *n == 12,
        [2, m] => [2, 4, 6, 8].contains(m),
        _ => false,
    }
}

/// Trace of Frobenius bound check: `|p + 1 - count| <= 2 sqrt(p)`.
pub fn satisfies_hasse(p: u64, count: u64) -> bool {
    let a = (p as i128 + 1 - count as i128).abs();
    a * a <= 4 * p as i128
}

/// Helper for callers holding rationals as `(num, den)` pairs.
pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}
