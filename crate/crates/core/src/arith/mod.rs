//! Exact integer utilities: factorization, squarefree and perfect-power
//! decomposition, Hermite and Smith normal forms, and integer roots of
//! integer polynomials.

mod factor;
pub mod hnf;
pub mod poly;
pub mod snf;

pub use factor::{
    factor, factor_bigint, factor_u128, factor_u128_with, factor_with, is_prime, Factorization,
};
pub(crate) use factor::{mul_mod, pow_mod};
pub use poly::integer_roots;
pub use snf::{smith_normal_form, AbelianStructure, Smith};

use crate::error::{Error, Result};

/// Splits `n = d * s^2` with `d` squarefree, `s > 0` and `sign(d) = sign(n)`.
pub fn squarefree_kernel(n: i128) -> Result<(i128, i128)> {
    if n == 0 {
        return Err(Error::invalid("zero", "squarefree kernel of 0"));
    }
    let f = factor(n)?;
    let mut d: i128 = f.sign as i128;
    let mut s: i128 = 1;
    for &(p, e) in &f.factors {
        let p = p as i128;
        if e % 2 == 1 {
            d *= p;
        }
        for _ in 0..e / 2 {
            s *= p;
        }
    }
    Ok((d, s))
}

pub fn is_squarefree(n: i128) -> Result<bool> {
    if n == 0 {
        return Ok(false);
    }
    Ok(factor(n)?.factors.iter().all(|&(_, e)| e == 1))
}

fn checked_pow(base: u128, exp: u32) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// Floor of the `k`-th root of `n`.
pub fn nth_root_floor(n: u128, k: u32) -> u128 {
    assert!(k >= 1);
    if k == 1 || n < 2 {
        return n;
    }
    if k >= 128 {
        return 1;
    }
    // float estimate, then fix up exactly
    let mut r = (n as f64).powf(1.0 / k as f64) as u128;
    while r > 0 && checked_pow(r, k).is_none_or(|v| v > n) {
        r -= 1;
    }
    while checked_pow(r + 1, k).is_some_and(|v| v <= n) {
        r += 1;
    }
    r
}

/// `Some(r)` when `n = r^k` exactly.
pub fn exact_root(n: u128, k: u32) -> Option<u128> {
    let r = nth_root_floor(n, k);
    (checked_pow(r, k) == Some(n)).then_some(r)
}

pub(crate) fn perfect_power_u128(n: u128) -> Option<(u128, u32)> {
    if n < 4 {
        return None;
    }
    let max_exp = 127 - n.leading_zeros();
    for e in (2..=max_exp).rev() {
        if let Some(r) = exact_root(n, e) {
            if r > 1 {
                return Some((r, e));
            }
        }
    }
    None
}

/// Largest-exponent representation `n = base^exp` with `exp >= 2`, if any.
pub fn perfect_power(n: i128) -> Result<Option<(i128, u32)>> {
    if n <= 1 {
        return Err(Error::invalid(
            "not-greater-than-one",
            format!("perfect_power needs n > 1, got {n}"),
        ));
    }
    Ok(perfect_power_u128(n as u128).map(|(b, e)| (b as i128, e)))
}

/// Extended Euclid on `i128`: returns `(g, x, y)` with `a x + b y = g >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

pub fn gcd(a: i128, b: i128) -> i128 {
    ext_gcd(a, b).0
}

/// Primes up to `limit` inclusive.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &p)| p.then_some(i as u64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_examples() {
        assert_eq!(squarefree_kernel(-124).unwrap(), (-31, 2));
        assert_eq!(squarefree_kernel(-8).unwrap(), (-2, 2));
        assert_eq!(squarefree_kernel(-7).unwrap(), (-7, 1));
        assert_eq!(squarefree_kernel(-63).unwrap(), (-7, 3));
        assert!(squarefree_kernel(0).is_err());
    }

    #[test]
    fn perfect_power_examples() {
        assert_eq!(perfect_power(125).unwrap(), Some((5, 3)));
        assert_eq!(perfect_power(27).unwrap(), Some((3, 3)));
        assert_eq!(perfect_power(12).unwrap(), None);
        assert_eq!(perfect_power(64).unwrap(), Some((2, 6)));
        assert_eq!(perfect_power(36).unwrap(), Some((6, 2)));
        assert!(perfect_power(1).is_err());
    }

    #[test]
    fn roots_near_overflow() {
        let big = u128::MAX;
        let r = nth_root_floor(big, 2);
        assert_eq!(r, u64::MAX as u128);
        assert_eq!(exact_root(1u128 << 126, 2), Some(1u128 << 63));
        assert_eq!(exact_root((1u128 << 126) + 1, 2), None);
    }

    #[test]
    fn ext_gcd_identity() {
        for (a, b) in [(240, 46), (-7, 3), (0, 5), (12, 0), (-12, -18)] {
            let (g, x, y) = ext_gcd(a, b);
            assert_eq!(a * x + b * y, g);
            assert!(g >= 0);
        }
    }
}
