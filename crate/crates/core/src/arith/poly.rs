//! Integer roots of integer polynomials, found exactly.
//!
//! Real roots are isolated with a Sturm sequence over the rationals and the
//! isolating intervals are narrowed by bisection on integer endpoints, so no
//! floating point enters the decision.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

type QPoly = Vec<BigRational>;

fn trim(p: &mut QPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn derivative(p: &QPoly) -> QPoly {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
        .collect()
}

fn rem(a: &QPoly, b: &QPoly) -> QPoly {
    let mut r = a.clone();
    let db = b.len() - 1;
    let lead = b[db].clone();
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let q = &r[r.len() - 1] / &lead;
        for (i, c) in b.iter().enumerate() {
            r[k + i] -= &q * c;
        }
        r.pop();
        trim(&mut r);
    }
    r
}

fn div_exact(a: &QPoly, b: &QPoly) -> QPoly {
    let mut r = a.clone();
    let db = b.len() - 1;
    let mut q = vec![BigRational::zero(); a.len().saturating_sub(db)];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = &r[r.len() - 1] / &b[db];
        for (i, bc) in b.iter().enumerate() {
            r[k + i] -= &c * bc;
        }
        q[k] = c;
        r.pop();
    }
    q
}

fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_empty() {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    x
}

fn eval(p: &QPoly, x: &BigRational) -> BigRational {
    p.iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * x + c)
}

fn eval_int(p: &[BigInt], x: &BigInt) -> BigInt {
    p.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

struct Sturm {
    chain: Vec<QPoly>,
}

impl Sturm {
    fn new(p: &QPoly) -> Self {
        let mut chain = vec![p.clone(), derivative(p)];
        loop {
            let n = chain.len();
            if chain[n - 1].is_empty() {
                chain.pop();
                break;
            }
            let r = rem(&chain[n - 2], &chain[n - 1]);
            if r.is_empty() {
                break;
            }
            chain.push(r.into_iter().map(|c| -c).collect());
        }
        Sturm { chain }
    }

    fn variations(&self, x: &BigRational) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for q in &self.chain {
            let v = eval(q, x);
            let s = if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            };
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Distinct real roots in `(lo, hi]`.
    fn count(&self, lo: &BigInt, hi: &BigInt) -> usize {
        let a = BigRational::from_integer(lo.clone());
        let b = BigRational::from_integer(hi.clone());
        self.variations(&a).saturating_sub(self.variations(&b))
    }
}

/// All integer roots of `sum coeffs[i] x^i`, sorted ascending, without
/// multiplicity. The zero polynomial is rejected by returning an empty list.
pub fn integer_roots(coeffs: &[BigInt]) -> Vec<BigInt> {
    let mut p: QPoly = coeffs
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect();
    trim(&mut p);
    if p.len() <= 1 {
        return Vec::new();
    }
    // squarefree part keeps the Sturm count exact
    let g = gcd(&p, &derivative(&p));
    if g.len() > 1 {
        p = div_exact(&p, &g);
    }
    let n = p.len() - 1;
    let lead = p[n].abs();
    // Cauchy bound: every root has |x| < 1 + max |c_i / c_n|
    let bound = p[..n]
        .iter()
        .map(|c| c.abs() / &lead)
        .fold(BigRational::zero(), |a, b| if b > a { b } else { a });
    let bound = bound.ceil().to_integer() + BigInt::one();

    let sturm = Sturm::new(&p);
    let mut roots = Vec::new();
    let mut stack = vec![(-&bound - BigInt::one(), bound.clone())];
    while let Some((lo, hi)) = stack.pop() {
        if sturm.count(&lo, &hi) == 0 {
            continue;
        }
        if &hi - &lo == BigInt::one() {
            roots.push(hi);
            continue;
        }
        let mid = (&lo + &hi).div_floor(&BigInt::from(2));
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    // each candidate is the right end of a unit interval holding a root
    let mut out: Vec<BigInt> = roots
        .into_iter()
        .filter(|r| eval_int(coeffs, r).is_zero())
        .collect();
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn cubic_roots() {
        // (x+1)(x-2)(x-3) = x^3 - 4x^2 + x + 6
        assert_eq!(integer_roots(&ints(&[6, 1, -4, 1])), ints(&[-1, 2, 3]));
        // x^3 - 2 has no integer roots
        assert!(integer_roots(&ints(&[-2, 0, 0, 1])).is_empty());
        // x^3 + 8
        assert_eq!(integer_roots(&ints(&[8, 0, 0, 1])), ints(&[-2]));
    }

    #[test]
    fn repeated_and_close_roots() {
        // (x-5)^2 (x-6) = x^3 - 16x^2 + 85x - 150
        assert_eq!(integer_roots(&ints(&[-150, 85, -16, 1])), ints(&[5, 6]));
        // (2x-1)(x-1) has only 1 as an integer root
        assert_eq!(integer_roots(&ints(&[1, -3, 2])), ints(&[1]));
        // x^2 - x - 1/... two irrational roots within one unit interval
        // 100x^2 - 150x + 56 = (10x-7)(10x-8)
        assert!(integer_roots(&ints(&[56, -150, 100])).is_empty());
    }

    #[test]
    fn huge_coefficients() {
        let r = BigInt::from(10).pow(30) + BigInt::from(7);
        // (x - r)(x^2 + 1)
        let coeffs = vec![-r.clone(), BigInt::one(), -r.clone(), BigInt::one()];
        assert_eq!(integer_roots(&coeffs), vec![r]);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(integer_roots(&ints(&[0])).is_empty());
        assert!(integer_roots(&ints(&[5])).is_empty());
        assert_eq!(integer_roots(&ints(&[0, 1])), ints(&[0]));
        assert_eq!(integer_roots(&ints(&[0, 0, 1])), ints(&[0]));
    }
}
