//! Ideals of pure cubic fields as Hermite normal forms over the integral
//! basis, and the splitting of rational primes.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{Elem, PureCubicField};
use crate::arith::hnf::Lattice;
use crate::arith::{is_prime, mul_mod, pow_mod};
use crate::error::{Error, Result};

/// Nonzero integral ideal: HNF rows over the integral basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CubicIdeal {
    rows: Vec<Vec<BigInt>>,
    norm: BigInt,
}

impl CubicIdeal {
    /// Ideal generated (as an `O_K`-module) by the given integral elements.
    pub fn from_generators(field: &PureCubicField, gens: &[Elem]) -> Result<Self> {
        let mut lat = Lattice::new(3);
        for g in gens {
            if !g.is_integral() {
                return Err(Error::invalid(
                    "non-integral",
                    "ideal generators must be integral",
                ));
            }
            for row in field.mul_matrix(g) {
                lat.insert(row.to_vec());
            }
        }
        Self::from_lattice(lat)
    }

    fn from_lattice(lat: Lattice) -> Result<Self> {
        let norm = lat
            .determinant()
            .ok_or_else(|| Error::invalid("zero-ideal", "generators span a degenerate lattice"))?;
        Ok(CubicIdeal {
            rows: lat.rows(),
            norm,
        })
    }

    pub fn unit() -> Self {
        CubicIdeal {
            rows: crate::arith::hnf::identity(3),
            norm: BigInt::one(),
        }
    }

    pub fn principal(field: &PureCubicField, a: &Elem) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::invalid("zero", "principal ideal of zero"));
        }
        Self::from_generators(field, &[Elem::integral(a.c.clone())])
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn norm(&self) -> &BigInt {
        &self.norm
    }

    pub fn is_unit(&self) -> bool {
        self.norm.is_one()
    }

    pub fn basis(&self) -> Vec<Elem> {
        self.rows
            .iter()
            .map(|r| Elem::integral([r[0].clone(), r[1].clone(), r[2].clone()]))
            .collect()
    }

    pub fn contains(&self, e: &Elem) -> bool {
        e.is_integral() && Lattice::from_rows(3, &self.rows).contains(&e.c)
    }

    pub fn mul(&self, field: &PureCubicField, other: &CubicIdeal) -> CubicIdeal {
        let mut lat = Lattice::new(3);
        for a in self.basis() {
            for b in other.basis() {
                lat.insert(field.mul(&a, &b).c.to_vec());
            }
        }
        Self::from_lattice(lat).expect("product of nonzero ideals is nonzero")
    }

    pub fn pow(&self, field: &PureCubicField, e: u32) -> CubicIdeal {
        (0..e).fold(CubicIdeal::unit(), |acc, _| acc.mul(field, self))
    }

    /// HNF rows as decimal strings, for reports.
    pub fn hnf_strings(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect()
    }
}

/// A prime of `O_K` above the rational prime `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeIdeal {
    pub p: BigInt,
    /// Position among the primes above `p` (ordering is deterministic).
    pub index: usize,
    pub e: u32,
    pub f: u32,
    /// Second generator: the ideal is `(p, generator)`.
    pub generator: Elem,
    pub ideal: CubicIdeal,
    /// Integral `beta` with `beta * P` inside `p O_K` but `beta` not in `p O_K`;
    /// multiplying by `beta / p` lowers the `P`-adic valuation by one.
    uniformizer_inverse: Elem,
    /// True when this is the only prime above `p`.
    sole: bool,
}

impl PrimeIdeal {
    pub fn label(&self) -> String {
        format!("{}#{}", self.p, self.index)
    }

    pub fn norm(&self) -> BigInt {
        self.p.pow(self.f)
    }

    /// `v_P` of a nonzero integral element.
    pub fn valuation_integral(&self, field: &PureCubicField, a: &Elem) -> u32 {
        debug_assert!(a.is_integral() && !a.is_zero());
        if self.sole {
            let n = field.norm(a).to_integer().abs();
            return valuation_of(&n, &self.p) / self.f;
        }
        let mut cur = a.clone();
        let mut k = 0;
        loop {
            let next = field.mul(&cur, &self.uniformizer_inverse);
            if next.c.iter().all(|x| x.is_multiple_of(&self.p)) {
                cur = Elem::integral(std::array::from_fn(|i| &next.c[i] / &self.p));
                k += 1;
            } else {
                return k;
            }
        }
    }

    /// `v_P` of any nonzero field element.
    pub fn valuation(&self, field: &PureCubicField, a: &Elem) -> i64 {
        let (num, den) = a.split();
        self.valuation_integral(field, &num) as i64 - (self.e * valuation_of(&den, &self.p)) as i64
    }
}

pub(crate) fn valuation_of(n: &BigInt, p: &BigInt) -> u32 {
    if n.is_zero() {
        return u32::MAX;
    }
    let mut n = n.abs();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return k;
        }
        n = q;
        k += 1;
    }
}

/// Ideal given by its prime factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredIdeal {
    pub parts: Vec<(PrimeIdeal, u32)>,
}

impl FactoredIdeal {
    pub fn unit() -> Self {
        FactoredIdeal { parts: Vec::new() }
    }

    pub fn to_ideal(&self, field: &PureCubicField) -> CubicIdeal {
        self.parts.iter().fold(CubicIdeal::unit(), |acc, (p, e)| {
            acc.mul(field, &p.ideal.pow(field, *e))
        })
    }

    pub fn norm(&self) -> BigInt {
        self.parts.iter().map(|(p, e)| p.norm().pow(*e)).product()
    }

    pub fn is_unit(&self) -> bool {
        self.parts.is_empty()
    }

    /// `prime-label -> exponent`.
    pub fn exponents(&self) -> BTreeMap<String, u32> {
        self.parts.iter().map(|(p, e)| (p.label(), *e)).collect()
    }
}

// ----------------------------------------------------------------------------
// polynomials over F_p, coefficients low to high

type Fp = Vec<u128>;

fn fp_trim(a: &mut Fp) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn fp_sub(a: &Fp, b: &Fp, p: u128) -> Fp {
    let n = a.len().max(b.len());
    let mut r: Fp = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    fp_trim(&mut r);
    r
}

fn fp_mul(a: &Fp, b: &Fp, p: u128) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    fp_trim(&mut r);
    r
}

fn fp_inv(x: u128, p: u128) -> u128 {
    pow_mod(x, p - 2, p)
}

fn fp_divrem(a: &Fp, b: &Fp, p: u128) -> (Fp, Fp) {
    let mut r = a.clone();
    fp_trim(&mut r);
    let db = b.len() - 1;
    let inv = fp_inv(b[db], p);
    let mut q = vec![0u128; r.len().saturating_sub(db)];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = mul_mod(r[r.len() - 1], inv, p);
        q[k] = c;
        for (i, &bc) in b.iter().enumerate() {
            r[k + i] = (r[k + i] + p - mul_mod(c, bc, p)) % p;
        }
        fp_trim(&mut r);
    }
    fp_trim(&mut q);
    (q, r)
}

fn fp_monic(a: &Fp, p: u128) -> Fp {
    let inv = fp_inv(*a.last().expect("nonzero"), p);
    a.iter().map(|&x| mul_mod(x, inv, p)).collect()
}

fn fp_gcd(a: &Fp, b: &Fp, p: u128) -> Fp {
    let (mut x, mut y) = (a.clone(), b.clone());
    fp_trim(&mut x);
    fp_trim(&mut y);
    while !y.is_empty() {
        let (_, r) = fp_divrem(&x, &y, p);
        x = y;
        y = r;
    }
    if x.is_empty() {
        x
    } else {
        fp_monic(&x, p)
    }
}

fn fp_powmod(base: &Fp, mut e: u128, modulus: &Fp, p: u128) -> Fp {
    let mut acc: Fp = vec![1];
    let mut b = fp_divrem(base, modulus, p).1;
    while e > 0 {
        if e & 1 == 1 {
            acc = fp_divrem(&fp_mul(&acc, &b, p), modulus, p).1;
        }
        b = fp_divrem(&fp_mul(&b, &b, p), modulus, p).1;
        e >>= 1;
    }
    acc
}

/// Distinct roots in F_p of a squarefree polynomial that splits into
/// linear factors. Cantor-Zassenhaus with the shifts `a = 0, 1, 2, ...`.
fn split_roots(g: &Fp, p: u128, out: &mut Vec<u128>) {
    let deg = g.len() - 1;
    if deg == 0 {
        return;
    }
    if deg == 1 {
        let g = fp_monic(g, p);
        out.push((p - g[0]) % p);
        return;
    }
    for a in 0u128.. {
        let h = fp_powmod(&vec![a % p, 1], (p - 1) / 2, g, p);
        let h = fp_sub(&h, &vec![1], p);
        let d = fp_gcd(g, &h, p);
        let dd = d.len().saturating_sub(1);
        if dd > 0 && dd < deg {
            split_roots(&d, p, out);
            split_roots(&fp_divrem(g, &d, p).0, p, out);
            return;
        }
    }
}

/// Distinct roots of `f` in F_p.
fn roots_mod_p(f: &Fp, p: u128) -> Vec<u128> {
    let mut roots = Vec::new();
    if p < 64 {
        for x in 0..p {
            let v = f.iter().rev().fold(0u128, |acc, &c| (acc * x + c) % p);
            if v == 0 {
                roots.push(x);
            }
        }
        return roots;
    }
    let xp = fp_powmod(&vec![0, 1], p, f, p);
    let g = fp_gcd(f, &fp_sub(&xp, &vec![0, 1], p), p);
    split_roots(&g, p, &mut roots);
    roots.sort_unstable();
    roots
}

/// Factorization of `T^3 - m` over F_p as `(monic factor, multiplicity)`.
fn kummer_factors(m: i64, p: u128) -> Vec<(Fp, u32)> {
    let mm = (m as i128).rem_euclid(p as i128) as u128;
    let f: Fp = vec![(p - mm) % p, 0, 0, 1];
    if mm == 0 {
        return vec![(vec![0, 1], 3)];
    }
    if p == 3 {
        // T^3 - m = (T - m)^3 in characteristic 3
        return vec![(vec![(3 - mm) % 3, 1], 3)];
    }
    let roots = roots_mod_p(&f, p);
    match roots.len() {
        0 => vec![(f, 1)],
        1 => {
            let lin = vec![(p - roots[0]) % p, 1];
            let (quad, rem) = fp_divrem(&f, &lin, p);
            debug_assert!(rem.is_empty());
            vec![(lin, 1), (quad, 1)]
        }
        _ => roots.iter().map(|&r| (vec![(p - r) % p, 1], 1)).collect(),
    }
}

/// Solves `x * A = 0 (mod p)` for a nonzero `x in F_p^3`, `A` being 3 x n.
fn left_kernel_vector(a: &[Vec<u128>], p: u128) -> Option<[u128; 3]> {
    // transpose, then find a right-kernel vector by elimination
    let n = a[0].len();
    let mut rows: Vec<Vec<u128>> = (0..n)
        .map(|j| (0..3).map(|i| a[i][j] % p).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..3 {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = fp_inv(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let k = rows[i][c];
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x = (*x + p - mul_mod(k, *y, p)) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free = (0..3).find(|c| !pivots.contains(c))?;
    let mut x = [0u128; 3];
    x[free] = 1;
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = (p - rows[i][free]) % p;
    }
    Some(x)
}

fn uniformizer_inverse(field: &PureCubicField, ideal: &CubicIdeal, p: &BigInt) -> Elem {
    let pu = p.to_u128().expect("prime fits in 128 bits");
    let mut cols: Vec<Vec<u128>> = vec![Vec::new(); 3];
    for g in ideal.basis() {
        let m = field.mul_matrix(&g);
        for i in 0..3 {
            for j in 0..3 {
                cols[i].push(m[i][j].mod_floor(p).to_u128().expect("reduced"));
            }
        }
    }
    let x = left_kernel_vector(&cols, pu).expect("P^-1 strictly contains O_K");
    Elem::integral(x.map(BigInt::from))
}

fn power_poly_elem(field: &PureCubicField, g: &Fp) -> Elem {
    let mut c: [BigInt; 3] = Default::default();
    // reduce T^k for k >= 3 by T^3 = m
    for (k, &coef) in g.iter().enumerate() {
        let mut v = BigInt::from(coef);
        let mut k = k;
        while k >= 3 {
            v *= field.m();
            k -= 3;
        }
        c[k] += v;
    }
    field.from_power_coords(c)
}

/// Primes of `O_K` above `p` with ramification and residue degrees,
/// checked by multiplying the factorization back to `(p)`.
pub fn factor_prime(field: &PureCubicField, p: u64) -> Result<Vec<PrimeIdeal>> {
    factor_prime_big(field, &BigInt::from(p))
}

pub(crate) fn factor_prime_big(field: &PureCubicField, p: &BigInt) -> Result<Vec<PrimeIdeal>> {
    let pu = p
        .to_u128()
        .filter(|&x| is_prime(x))
        .ok_or_else(|| Error::invalid("not-prime", format!("{p} is not a prime")))?;
    let pe = Elem::from_int(p.clone());

    let mut raw: Vec<(CubicIdeal, Elem, u32, u32)> = Vec::new();
    if pu == 3 && field.index3() {
        // 3 = P^2 Q with both residue degrees 1: primes are kernels of the
        // ring maps O_K -> F_3.
        let t = field.mult_table();
        let mut homs = Vec::new();
        for v1 in 0..3i64 {
            for v2 in 0..3i64 {
                let v = [1i64, v1, v2];
                let ok = (0..3).all(|i| {
                    (0..3).all(|j| {
                        let lhs = v[i] * v[j];
                        let rhs: i64 = (0..3).map(|k| t[i][j][k] * v[k]).sum();
                        (lhs - rhs).rem_euclid(3) == 0
                    })
                });
                if ok {
                    homs.push(v);
                }
            }
        }
        let ideals: Vec<(CubicIdeal, Elem)> = homs
            .iter()
            .map(|v| {
                let gens = [
                    pe.clone(),
                    Elem::from_ints([-v[1], 1, 0]),
                    Elem::from_ints([-v[2], 0, 1]),
                ];
                let id = CubicIdeal::from_generators(field, &gens).expect("nonzero");
                // a single second generator: pick the basis element not in pO_K
                let g = id
                    .basis()
                    .into_iter()
                    .find(|b| !b.c.iter().all(|x| x.is_multiple_of(p)))
                    .expect("proper ideal");
                (id, g)
            })
            .collect();
        let target = CubicIdeal::principal(field, &pe)?;
        if ideals.len() == 2 {
            for (sq, other) in [(0usize, 1usize), (1, 0)] {
                let prod = ideals[sq].0.pow(field, 2).mul(field, &ideals[other].0);
                if prod == target {
                    raw.push((ideals[sq].0.clone(), ideals[sq].1.clone(), 2, 1));
                    raw.push((ideals[other].0.clone(), ideals[other].1.clone(), 1, 1));
                    break;
                }
            }
        }
        if raw.is_empty() {
            panic!(
                "splitting of 3 in Q(cbrt({})) failed verification",
                field.m()
            );
        }
    } else {
        for (g, e) in kummer_factors(field.m(), pu) {
            let f = (g.len() - 1) as u32;
            let gen = power_poly_elem(field, &g);
            let id = CubicIdeal::from_generators(field, &[pe.clone(), gen.clone()])?;
            raw.push((id, gen, e, f));
        }
    }
    raw.sort_by(|a, b| (a.3, &a.0).cmp(&(b.3, &b.0)));
    let sole = raw.len() == 1;
    let primes: Vec<PrimeIdeal> = raw
        .into_iter()
        .enumerate()
        .map(|(index, (ideal, generator, e, f))| PrimeIdeal {
            p: p.clone(),
            index,
            e,
            f,
            uniformizer_inverse: uniformizer_inverse(field, &ideal, p),
            generator,
            ideal,
            sole,
        })
        .collect();

    let check = primes.iter().fold(CubicIdeal::unit(), |acc, q| {
        acc.mul(field, &q.ideal.pow(field, q.e))
    });
    assert_eq!(
        check,
        CubicIdeal::principal(field, &pe)?,
        "prime factorization of {p} does not multiply back"
    );
    debug_assert_eq!(primes.iter().map(|q| q.e * q.f).sum::<u32>(), 3);
    Ok(primes)
}

/// Prime-ideal factorization of a nonzero integral element.
pub(crate) fn factor_element(
    field: &PureCubicField,
    a: &Elem,
    budget: u64,
) -> Result<FactoredIdeal> {
    let n = field.norm(a).to_integer();
    let fac = crate::arith::factor_bigint(&n, budget)?;
    let mut parts = Vec::new();
    for (p, _) in fac.factors {
        for prime in factor_prime_big(field, &BigInt::from(p))? {
            let v = prime.valuation_integral(field, a);
            if v > 0 {
                parts.push((prime, v));
            }
        }
    }
    Ok(FactoredIdeal { parts })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeSummary {
    pub label: String,
    pub e: u32,
    pub f: u32,
}

impl From<&PrimeIdeal> for PrimeSummary {
    fn from(p: &PrimeIdeal) -> Self {
        PrimeSummary {
            label: p.label(),
            e: p.e,
            f: p.f,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::make_field;
    use super::*;

    fn ef(ps: &[PrimeIdeal]) -> Vec<(u32, u32)> {
        ps.iter().map(|p| (p.e, p.f)).collect()
    }

    #[test]
    fn splitting_examples() {
        let f = make_field(2).unwrap();
        assert_eq!(ef(&factor_prime(&f, 5).unwrap()), vec![(1, 1), (1, 2)]);
        let two = factor_prime(&f, 2).unwrap();
        assert_eq!(ef(&two), vec![(3, 1)]);
        assert_eq!(two[0].ideal, CubicIdeal::principal(&f, &f.theta()).unwrap());
        let f17 = make_field(17).unwrap();
        assert_eq!(ef(&factor_prime(&f17, 5).unwrap()), vec![(1, 1), (1, 2)]);
        assert_eq!(ef(&factor_prime(&f17, 3).unwrap()), vec![(1, 1), (2, 1)]);
        assert_eq!(ef(&factor_prime(&f17, 17).unwrap()), vec![(3, 1)]);
        // 7 = 1 mod 3 and 17 = 3 = 7^... cube test decides
        let seven = factor_prime(&f17, 7).unwrap();
        assert_eq!(seven.iter().map(|p| p.e * p.f).sum::<u32>(), 3);
    }

    #[test]
    fn valuations_of_rational_primes() {
        let f = make_field(17).unwrap();
        for p in [2u64, 3, 5, 7, 11, 13, 17] {
            let pe = Elem::from_int(BigInt::from(p));
            for q in factor_prime(&f, p).unwrap() {
                assert_eq!(q.valuation_integral(&f, &pe), q.e, "p = {p}");
                assert_eq!(q.valuation_integral(&f, &q.generator).min(1), 1);
            }
        }
    }

    #[test]
    fn root_finding_large_prime() {
        // 1_000_000_009 = 1 mod 3, so 8 has three cube roots
        let p: u128 = 1_000_000_009;
        let roots = roots_mod_p(&vec![p - 8, 0, 0, 1], p);
        assert_eq!(roots.len(), 3);
        assert!(roots.contains(&2));
        for r in roots {
            assert_eq!(pow_mod(r, 3, p), 8);
        }
        // 1_000_000_007 = 2 mod 3: cubing is a bijection
        let p: u128 = 1_000_000_007;
        assert_eq!(roots_mod_p(&vec![p - 8, 0, 0, 1], p), vec![2]);
    }

    #[test]
    fn non_prime_rejected() {
        let f = make_field(2).unwrap();
        assert_eq!(factor_prime(&f, 9).unwrap_err().code(), "not-prime");
    }
}
