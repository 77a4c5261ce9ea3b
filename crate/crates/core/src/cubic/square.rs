//! Square classes `K* / (K*)^2` in a pure cubic field.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::ideal::factor_element;
use super::{Elem, PureCubicField};
use crate::arith::integer_roots;
use crate::error::{Error, Result, DEFAULT_BUDGET};

fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// A square root of `a` in `K`, if one exists.
///
/// If `b^2 = a` and `b` has characteristic polynomial
/// `T^3 - e1 T^2 + e2 T - e3`, then the characteristic polynomial of `a` has
/// coefficients `s1 = e1^2 - 2 e2`, `s2 = e2^2 - 2 e1 e3`, `s3 = e3^2`.
/// Eliminating `e2` leaves a quartic in `e1` whose integer roots are found
/// exactly; each candidate gives `b = (e1 a + e3) / (a + e2)`, which is then
/// squared and compared.
pub fn square_root(field: &PureCubicField, a: &Elem) -> Option<Elem> {
    if a.is_zero() {
        return Some(a.clone());
    }
    // a = num / den  =>  a * den^2 = num * den is integral with the same class
    let (num, den) = a.split();
    let scaled = num.scale(&den);

    if let Some(r) = scaled.as_rational() {
        let n = r.to_integer();
        return exact_sqrt(&n).map(|s| Elem::new([s, BigInt::zero(), BigInt::zero()], den));
    }
    let s1 = field.trace(&scaled).to_integer();
    let tr_sq = field.trace(&field.mul(&scaled, &scaled)).to_integer();
    let s2 = (&s1 * &s1 - tr_sq) / 2;
    let s3 = field.norm(&scaled).to_integer();
    let e3 = exact_sqrt(&s3)?;

    // (e^2 - s1)^2 - 8 e3 e - 4 s2 = 0
    let quartic = [
        &s1 * &s1 - BigInt::from(4) * &s2,
        BigInt::from(-8) * &e3,
        BigInt::from(-2) * &s1,
        BigInt::zero(),
        BigInt::one(),
    ];
    for e1 in integer_roots(&quartic) {
        let t = &e1 * &e1 - &s1;
        if t.is_odd() {
            continue;
        }
        let e2 = t / 2;
        let numer = scaled.scale(&e1).add(&Elem::from_int(e3.clone()));
        let denom = scaled.add(&Elem::from_int(e2));
        let Ok(b) = field.div(&numer, &denom) else {
            continue;
        };
        if field.mul(&b, &b) == scaled {
            return Some(Elem::new(b.c.clone(), &b.den * &den));
        }
    }
    None
}

pub fn is_square(field: &PureCubicField, a: &Elem) -> bool {
    square_root(field, a).is_some()
}

/// Image of a nonzero element in `K* / (K*)^2`.
///
/// Carries the primes where the element has odd valuation and the sign of
/// its real embedding; two classes are equal exactly when the quotient of
/// the representatives is a square, which [`SquareClass::same_class`] decides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SquareClass {
    #[serde(skip)]
    pub representative: Elem,
    /// Labels (`p#i`) of primes with odd valuation.
    pub odd_primes: BTreeSet<String>,
    /// Real embedding is negative.
    pub negative: bool,
}

impl SquareClass {
    /// Parity data of the product class (symmetric difference, xor of signs).
    pub fn parity_sum(&self, other: &SquareClass) -> (BTreeSet<String>, bool) {
        let odd = self
            .odd_primes
            .symmetric_difference(&other.odd_primes)
            .cloned()
            .collect();
        (odd, self.negative ^ other.negative)
    }

    pub fn combine(&self, field: &PureCubicField, other: &SquareClass) -> SquareClass {
        let (odd_primes, negative) = self.parity_sum(other);
        SquareClass {
            representative: field.mul(&self.representative, &other.representative),
            odd_primes,
            negative,
        }
    }

    /// Parity vector equal and quotient a square.
    pub fn same_class(&self, field: &PureCubicField, other: &SquareClass) -> bool {
        if self.odd_primes != other.odd_primes || self.negative != other.negative {
            return false;
        }
        let q = field
            .div(&self.representative, &other.representative)
            .expect("representatives are nonzero");
        is_square(field, &q)
    }

    pub fn is_trivial(&self, field: &PureCubicField) -> bool {
        self.odd_primes.is_empty() && !self.negative && is_square(field, &self.representative)
    }
}

pub fn square_class(field: &PureCubicField, a: &Elem) -> Result<SquareClass> {
    square_class_with(field, a, DEFAULT_BUDGET)
}

pub fn square_class_with(field: &PureCubicField, a: &Elem, budget: u64) -> Result<SquareClass> {
    if a.is_zero() {
        return Err(Error::invalid("zero", "square class of zero"));
    }
    let (num, den) = a.split();
    let mut odd = BTreeSet::new();
    // den is rational: each prime above it gets e * v_p(den), and the class
    // of num * den equals the class of a
    let shifted = num.scale(&den);
    for (prime, v) in factor_element(field, &shifted, budget)?.parts {
        if v % 2 == 1 {
            odd.insert(prime.label());
        }
    }
    Ok(SquareClass {
        representative: a.clone(),
        odd_primes: odd,
        negative: field.real_sign(a) < 0,
    })
}

#[cfg(test)]
mod tests {
    use super::super::make_field;
    use super::*;

    #[test]
    fn squares_detected() {
        let f = make_field(2).unwrap();
        let th = f.theta();
        let th2 = f.mul(&th, &th);
        assert!(is_square(&f, &th2));
        assert!(!is_square(&f, &th));
        assert!(!is_square(&f, &Elem::from_ints([2, 0, 0])));
        assert!(is_square(&f, &Elem::from_ints([9, 0, 0])));
        let g = Elem::from_ints([3, -7, 5]);
        let g2 = f.mul(&g, &g);
        let r = square_root(&f, &g2).unwrap();
        assert!(r == g || r == g.neg());
        // non-integral square
        let h = Elem::new(
            [BigInt::from(1), BigInt::from(2), BigInt::from(-1)],
            BigInt::from(6),
        );
        assert!(is_square(&f, &f.mul(&h, &h)));
    }

    #[test]
    fn squares_in_index_three_field() {
        let f = make_field(17).unwrap();
        let g = Elem::from_ints([1, -1, 1]);
        assert!(is_square(&f, &f.mul(&g, &g)));
        let x = Elem::from_ints([-2, 1, 0]);
        assert!(!is_square(&f, &x));
    }

    #[test]
    fn class_examples() {
        let f = make_field(2).unwrap();
        let th = f.theta();
        let c_th2 = square_class(&f, &f.mul(&th, &th)).unwrap();
        assert!(c_th2.is_trivial(&f));
        let c2 = square_class(&f, &Elem::from_ints([2, 0, 0])).unwrap();
        let c_th = square_class(&f, &th).unwrap();
        assert!(!c2.is_trivial(&f));
        assert!(c2.same_class(&f, &c_th));
        assert_eq!(
            square_class(&f, &Elem::from_ints([0, 0, 0]))
                .unwrap_err()
                .code(),
            "zero"
        );
    }
}
