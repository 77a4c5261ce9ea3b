//! From a rational point on `y^2 = x^3 + n` to an ideal class of `Q(cbrt(n))`.
//!
//! With `theta^3 = -n`, the norm of `x - theta` is `x^3 + n = y^2`, so the
//! ideal `(x - theta)` is a square up to a squarefree part: it factors as
//! `a^2 b` with `b` supported on primes of odd valuation.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::classgroup::CubicClassGroup;
use super::ideal::{factor_element, FactoredIdeal};
use super::{CubicIdeal, Elem, PureCubicField};
use crate::elliptic::Point;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct PointClass {
    /// Integral `u - e^2 theta` for `P = (u/e^2, v/e^3)`.
    pub alpha: Elem,
    pub scale: BigInt,
    pub factorization: FactoredIdeal,
    pub a: FactoredIdeal,
    /// Squarefree obstruction `b`.
    pub b: FactoredIdeal,
    pub b_ideal: CubicIdeal,
    pub class_coords: Vec<BigInt>,
    pub order: u64,
}

/// `x - theta` for `theta^3 = -n`, scaled by `e^2` to be integral, together
/// with `e`.
pub fn descent_element(field: &PureCubicField, n: i64, p: &Point) -> Result<(Elem, BigInt)> {
    if field.m() != n.abs() {
        return Err(Error::invalid(
            "field-mismatch",
            format!("field Q(cbrt({})) does not belong to n = {n}", field.m()),
        ));
    }
    let (x, y) = match p {
        Point::Infinity => {
            return Err(Error::invalid(
                "infinity",
                "the point at infinity has no x - theta",
            ))
        }
        Point::Affine { x, y } => (x, y),
    };
    if y.is_zero() {
        return Err(Error::invalid(
            "two-torsion",
            "x - theta vanishes at a 2-torsion point",
        ));
    }
    let lhs = y * y;
    let rhs = x * x * x + num_rational::BigRational::from_integer(n.into());
    if lhs != rhs {
        return Err(Error::invalid(
            "off-curve",
            format!("{p} is not on y^2 = x^3 + {n}"),
        ));
    }
    let den = x.denom().clone();
    let e = den.sqrt();
    if &e * &e != den {
        return Err(Error::invalid("off-curve", "x denominator is not a square"));
    }
    // theta = -sign(n) * cbrt(m), so x - theta = x + sign(n) cbrt(m)
    let s = if n > 0 { BigInt::one() } else { -BigInt::one() };
    let alpha = field.from_power_coords([x.numer().clone(), s * &den, BigInt::zero()]);
    Ok((alpha, e))
}

pub fn class_from_point(
    field: &PureCubicField,
    n: i64,
    p: &Point,
    group: &CubicClassGroup,
    budget: u64,
) -> Result<PointClass> {
    let (alpha, scale) = descent_element(field, n, p)?;
    let factorization = factor_element(field, &alpha, budget)?;
    let mut a = FactoredIdeal::unit();
    let mut b = FactoredIdeal::unit();
    for (prime, v) in &factorization.parts {
        if v / 2 > 0 {
            a.parts.push((prime.clone(), v / 2));
        }
        if v % 2 == 1 {
            b.parts.push((prime.clone(), 1));
        }
    }
    let class_coords = group.class_of(field, &a, budget)?;
    let order = group.order_of_class(&class_coords);
    let b_ideal = b.to_ideal(field);
    Ok(PointClass {
        alpha,
        scale,
        factorization,
        a,
        b,
        b_ideal,
        class_coords,
        order,
    })
}

impl PointClass {
    /// `a^2 b` reassembled as an HNF ideal.
    pub fn a_squared_b(&self, field: &PureCubicField) -> CubicIdeal {
        self.a
            .to_ideal(field)
            .pow(field, 2)
            .mul(field, &self.b_ideal)
    }

    /// `a^2 b == (alpha)` exactly.
    pub fn relation_holds(&self, field: &PureCubicField) -> bool {
        CubicIdeal::principal(field, &self.alpha).is_ok_and(|i| i == self.a_squared_b(field))
    }
}
