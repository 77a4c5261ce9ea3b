//! Integer factorization for desk-scale inputs (|n| < 2^128).
//!
//! Trial division strips primes below 10^6; whatever remains is split with
//! Brent's variant of Pollard rho using a fixed sequence of polynomial
//! constants, so every run on the same input follows the same path.

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Meter, Result, DEFAULT_BUDGET};

const TRIAL_LIMIT: u128 = 1_000_000;
const EARLY_PRIME_CHECK: u128 = 4_096;
const MR_BASES: [u128; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// `sign * prod(p^e)` with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub sign: i8,
    pub factors: Vec<(u128, u32)>,
}

impl Factorization {
    /// Multiplies the factorization back out. Returns `None` on overflow.
    pub fn value(&self) -> Option<i128> {
        let mut acc: i128 = self.sign as i128;
        for &(p, e) in &self.factors {
            let p = i128::try_from(p).ok()?;
            for _ in 0..e {
                acc = acc.checked_mul(p)?;
            }
        }
        Some(acc)
    }

    pub fn primes(&self) -> impl Iterator<Item = u128> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn exponent_of(&self, p: u128) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }
}

#[inline]
fn add_mod(a: u128, b: u128, m: u128) -> u128 {
    if a >= m - b {
        a - (m - b)
    } else {
        a + b
    }
}

#[inline]
pub(crate) fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        return (a % m) * (b % m) % m;
    }
    let (mut a, mut b) = (a % m, b % m);
    let mut acc = 0u128;
    while b > 0 {
        if b & 1 == 1 {
            acc = add_mod(acc, a, m);
        }
        a = add_mod(a, a, m);
        b >>= 1;
    }
    acc
}

pub(crate) fn pow_mod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Miller-Rabin with the first twelve primes as bases.
///
/// Deterministic below 2^64 (the base set is known to suffice there); above
/// that the answer is "probable prime".
pub fn is_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'bases: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Brent's cycle-finding variant of Pollard rho. Returns a nontrivial factor
/// of the odd composite `n`.
fn pollard_brent(n: u128, meter: &mut Meter) -> Result<u128> {
    for c in 1u128.. {
        let f = |x: u128| add_mod(mul_mod(x, x, n), c % n, n);
        let (mut y, mut r, mut q) = (2u128, 1u64, 1u128);
        let mut g = 1u128;
        let mut x = y;
        let mut ys = y;
        const BATCH: u64 = 64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                let steps = BATCH.min(r - k);
                for _ in 0..steps {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                meter.tick(steps)?;
                g = gcd_u128(q, n);
                k += steps;
            }
            r *= 2;
        }
        if g == n {
            // Batch overshot; step back one iteration at a time.
            loop {
                ys = f(ys);
                meter.tick(1)?;
                g = gcd_u128(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return Ok(g);
        }
    }
    unreachable!("constant sequence is unbounded")
}

fn split_into(n: u128, out: &mut Vec<u128>, meter: &mut Meter) -> Result<()> {
    if n == 1 {
        return Ok(());
    }
    if is_prime(n) {
        out.push(n);
        return Ok(());
    }
    if let Some((b, e)) = super::perfect_power_u128(n) {
        for _ in 0..e {
            split_into(b, out, meter)?;
        }
        return Ok(());
    }
    let d = pollard_brent(n, meter)?;
    split_into(d, out, meter)?;
    split_into(n / d, out, meter)
}

/// Factors a positive magnitude.
pub fn factor_u128_with(n: u128, budget: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::invalid("zero", "cannot factor 0"));
    }
    let mut meter = Meter::new("factor", budget);
    let mut primes = Vec::new();
    let mut m = n;
    for p in [2u128, 3, 5] {
        while m % p == 0 {
            primes.push(p);
            m /= p;
        }
    }
    // 6k +- 1 wheel
    let mut p = 7u128;
    let mut step = 4u128;
    // a prime cofactor ends trial division early; tested once past a small
    // bound and again whenever a factor is removed
    let mut cofactor_checked = false;
    while p <= TRIAL_LIMIT && p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                primes.push(p);
                m /= p;
            }
            cofactor_checked = false;
        }
        if p > EARLY_PRIME_CHECK && !cofactor_checked {
            if is_prime(m) {
                break;
            }
            cofactor_checked = true;
        }
        p += step;
        step = 6 - step;
        meter.tick(1)?;
    }
    if m > 1 {
        if m < p * p {
            primes.push(m);
        } else {
            split_into(m, &mut primes, &mut meter)?;
        }
    }
    primes.sort_unstable();
    let mut factors: Vec<(u128, u32)> = Vec::new();
    for q in primes {
        match factors.last_mut() {
            Some((last, e)) if *last == q => *e += 1,
            _ => factors.push((q, 1)),
        }
    }
    Ok(Factorization { sign: 1, factors })
}

pub fn factor_u128(n: u128) -> Result<Factorization> {
    factor_u128_with(n, DEFAULT_BUDGET)
}

/// Factors a nonzero signed integer.
pub fn factor_with(n: i128, budget: u64) -> Result<Factorization> {
    let mut f = factor_u128_with(n.unsigned_abs(), budget)?;
    f.sign = if n < 0 { -1 } else { 1 };
    Ok(f)
}

pub fn factor(n: i128) -> Result<Factorization> {
    factor_with(n, DEFAULT_BUDGET)
}

/// Factors a big integer whose magnitude fits in 128 bits.
pub fn factor_bigint(n: &BigInt, budget: u64) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::invalid("zero", "cannot factor 0"));
    }
    let mag = n.abs().to_u128().ok_or_else(|| {
        Error::invalid(
            "out-of-range",
            format!("{n} exceeds the 128-bit factorization range"),
        )
    })?;
    let mut f = factor_u128_with(mag, budget)?;
    if n.sign() == Sign::Minus {
        f.sign = -1;
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        let f = factor(7803).unwrap();
        assert_eq!(f.sign, 1);
        assert_eq!(f.factors, vec![(3, 3), (17, 2)]);
        let f = factor(-124).unwrap();
        assert_eq!(f.sign, -1);
        assert_eq!(f.factors, vec![(2, 2), (31, 1)]);
        let f = factor(1).unwrap();
        assert_eq!(f.sign, 1);
        assert!(f.factors.is_empty());
    }

    #[test]
    fn zero_rejected() {
        assert_eq!(factor(0).unwrap_err().code(), "zero");
    }

    #[test]
    fn rho_splits_semiprimes_beyond_trial_range() {
        let p: u128 = 1_000_000_007;
        let q: u128 = 998_244_353;
        let f = factor_u128(p * q).unwrap();
        assert_eq!(f.factors, vec![(q, 1), (p, 1)]);
        // 2^61 - 1 and 2^89 - 1 are Mersenne primes
        let m61 = (1u128 << 61) - 1;
        let m89 = (1u128 << 89) - 1;
        assert!(is_prime(m61));
        assert!(is_prime(m89));
        let f = factor_u128(m61 * 1_000_003).unwrap();
        assert_eq!(f.factors, vec![(1_000_003, 1), (m61, 1)]);
    }

    #[test]
    fn prime_powers_of_large_primes() {
        let p: u128 = 1_000_000_007;
        let f = factor_u128(p * p * p).unwrap();
        assert_eq!(f.factors, vec![(p, 3)]);
    }

    #[test]
    fn carmichael_numbers_are_composite() {
        for n in [561u128, 1105, 1729, 2465, 2821, 6601, 8911, 3_215_031_751] {
            assert!(!is_prime(n), "{n}");
        }
    }

    #[test]
    fn tiny_budget_is_reported() {
        let p: u128 = 1_000_000_007;
        let q: u128 = 998_244_353;
        let err = factor_u128_with(p * q, 10).unwrap_err();
        assert!(err.is_limit());
    }
}
