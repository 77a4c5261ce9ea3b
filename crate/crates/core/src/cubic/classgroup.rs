//! Class groups of pure cubic fields from smooth principal ideals.
//!
//! The factor base holds every prime above a rational prime below the
//! Minkowski bound. Elements `x w1 + y w2 + z w3` are swept shell by shell in
//! the max-norm of `(x, y, z)`; each one with factor-base-smooth norm adds
//! its valuation vector to a relation lattice kept in Hermite normal form.
//! Once the lattice has full rank, the sweep radius is doubled and the group
//! is accepted only if its Smith form did not change.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::ideal::{factor_prime, factor_prime_big, FactoredIdeal, PrimeIdeal, PrimeSummary};
use super::{CubicIdeal, Elem, PureCubicField};
use crate::arith::hnf::Lattice;
use crate::arith::snf::element_order;
use crate::arith::{AbelianStructure, Smith};
use crate::error::{Error, Meter, Result, DEFAULT_BUDGET};

/// Largest `|disc|` accepted by [`class_group_cubic`].
pub const MAX_ABS_DISCRIMINANT: i64 = 1_000_000;
const MIN_RADIUS: i64 = 3;
const CLASS_SEARCH_RADIUS: i64 = 12;

#[derive(Debug, Clone)]
pub struct FactorBaseEntry {
    pub p: u64,
    pub primes: Vec<PrimeIdeal>,
}

#[derive(Debug, Clone)]
pub struct CubicClassGroup {
    pub class_number: u64,
    pub structure: AbelianStructure,
    pub factor_base: Vec<FactorBaseEntry>,
    /// Hermite normal form of the relation lattice (rows), full column rank.
    pub relation_matrix: Vec<Vec<BigInt>>,
    /// Smooth elements found up to `saturation_radius`.
    pub relations_found: usize,
    /// Radius at which the structure was first read off.
    pub radius: i64,
    /// Doubled radius whose sweep confirmed the structure.
    pub saturation_radius: i64,
    smith: Smith,
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorBaseSummary {
    pub p: u64,
    pub primes: Vec<PrimeSummary>,
}

impl CubicClassGroup {
    pub fn columns(&self) -> Vec<&PrimeIdeal> {
        self.factor_base
            .iter()
            .flat_map(|e| e.primes.iter())
            .collect()
    }

    pub fn factor_base_summary(&self) -> Vec<FactorBaseSummary> {
        self.factor_base
            .iter()
            .map(|e| FactorBaseSummary {
                p: e.p,
                primes: e.primes.iter().map(PrimeSummary::from).collect(),
            })
            .collect()
    }

    pub fn l_rank(&self, l: u64) -> usize {
        self.structure.l_rank(l)
    }

    fn column_of(&self, prime: &PrimeIdeal) -> Option<usize> {
        self.columns()
            .iter()
            .position(|q| q.p == prime.p && q.index == prime.index)
    }

    fn max_fb_prime(&self) -> u64 {
        self.factor_base.last().map_or(1, |e| e.p)
    }

    /// Class of an ideal, in the coordinates of the cyclic factors.
    pub fn class_of(
        &self,
        field: &PureCubicField,
        ideal: &FactoredIdeal,
        budget: u64,
    ) -> Result<Vec<BigInt>> {
        let mut v = vec![BigInt::zero(); self.columns().len()];
        for (prime, e) in &ideal.parts {
            let pv = self.prime_vector(field, prime, budget)?;
            for (x, y) in v.iter_mut().zip(pv) {
                *x += y * BigInt::from(*e);
            }
        }
        Ok(self.smith.coordinates(&v))
    }

    pub fn order_of_class(&self, coords: &[BigInt]) -> u64 {
        element_order(coords, &self.smith.nontrivial_divisors())
            .and_then(|o| o.to_u64())
            .expect("finite class group")
    }

    pub fn is_principal(&self, coords: &[BigInt]) -> bool {
        coords.iter().all(Zero::is_zero)
    }

    /// Factor-base vector in the class of `prime`.
    fn prime_vector(
        &self,
        field: &PureCubicField,
        prime: &PrimeIdeal,
        budget: u64,
    ) -> Result<Vec<BigInt>> {
        let n = self.columns().len();
        if let Some(c) = self.column_of(prime) {
            let mut v = vec![BigInt::zero(); n];
            v[c] = BigInt::one();
            return Ok(v);
        }
        // find b in P whose cofactor (b) P^-1 is smooth; then [P] = -[cofactor]
        let mut meter = Meter::new("cubic ideal class", budget);
        let basis = lll_reduce(&prime.ideal.basis());
        let pn = prime.norm();
        let fb_max = self.max_fb_prime();
        for r in 1..=CLASS_SEARCH_RADIUS {
            for t in shell(r) {
                meter.tick(1)?;
                let b = basis
                    .iter()
                    .zip(t)
                    .fold(Elem::from_ints([0, 0, 0]), |acc, (e, k)| {
                        acc.add(&e.scale(&BigInt::from(k)))
                    });
                let norm = field.norm(&b).to_integer().abs();
                let (q, rem) = norm.div_rem(&pn);
                if !rem.is_zero() || !is_smooth(&q, fb_max) {
                    continue;
                }
                let mut v = vec![BigInt::zero(); n];
                for (c, col) in self.columns().iter().enumerate() {
                    let k = col.valuation_integral(field, &b);
                    v[c] = -BigInt::from(k);
                }
                return Ok(v);
            }
        }
        Err(Error::LimitExceeded {
            what: "cubic ideal class",
            limit: CLASS_SEARCH_RADIUS as u64,
        })
    }
}

fn is_smooth(n: &BigInt, bound: u64) -> bool {
    let mut n = n.abs();
    if n.is_zero() {
        return false;
    }
    for p in crate::arith::primes_up_to(bound) {
        let pb = BigInt::from(p);
        while n.is_multiple_of(&pb) {
            n /= &pb;
        }
    }
    n.is_one()
}

/// Coefficient triples of max-norm exactly `r`, first nonzero entry positive,
/// coprime, in lexicographic order.
fn shell(r: i64) -> impl Iterator<Item = [i64; 3]> {
    let range = move || -r..=r;
    range()
        .flat_map(move |x| range().flat_map(move |y| range().map(move |z| [x, y, z])))
        .filter(move |t| t.iter().map(|v| v.abs()).max() == Some(r))
        .filter(|t| t.iter().find(|v| **v != 0).is_some_and(|v| *v > 0))
        .filter(|t| t[0].gcd(&t[1]).gcd(&t[2]) == 1)
}

/// LLL reduction (delta = 3/4) of a 3-element lattice basis, Euclidean
/// norm on integral-basis coordinates.
fn lll_reduce(basis: &[Elem]) -> Vec<Elem> {
    let to_q = |e: &Elem| -> Vec<BigRational> {
        e.c.iter()
            .map(|x| BigRational::from_integer(x.clone()))
            .collect()
    };
    let dot = |a: &[BigRational], b: &[BigRational]| -> BigRational {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    };
    let mut b: Vec<Elem> = basis.to_vec();
    let n = b.len();
    let delta = BigRational::new(3.into(), 4.into());
    let gram_schmidt = |b: &[Elem]| {
        let mut bs: Vec<Vec<BigRational>> = Vec::new();
        let mut mu = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            let mut v = to_q(&b[i]);
            for j in 0..i {
                mu[i][j] = dot(&to_q(&b[i]), &bs[j]) / dot(&bs[j], &bs[j]);
                let m = mu[i][j].clone();
                for (x, y) in v.iter_mut().zip(&bs[j]) {
                    *x -= &m * y;
                }
            }
            bs.push(v);
        }
        (bs, mu)
    };
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let (_, mu) = gram_schmidt(&b);
            let q = mu[k][j].round().to_integer();
            if !q.is_zero() {
                b[k] = b[k].sub(&b[j].scale(&q));
            }
        }
        let (bs, mu) = gram_schmidt(&b);
        let lhs = dot(&bs[k], &bs[k]);
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * dot(&bs[k - 1], &bs[k - 1]);
        if lhs >= rhs {
            k += 1;
        } else {
            b.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    b
}

struct Sweeper<'a> {
    field: &'a PureCubicField,
    columns: Vec<PrimeIdeal>,
    fb_primes: Vec<u64>,
    lattice: Lattice,
    relations: usize,
}

impl Sweeper<'_> {
    fn norm_i128(&self, t: &[i64; 3]) -> Option<i128> {
        let table = self.field.mult_table();
        let mut m = [[0i128; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (k, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).map(|j| t[j] as i128 * table[i][j][k] as i128).sum();
            }
        }
        let minor =
            |a: i128, b: i128, c: i128, d: i128| a.checked_mul(d)?.checked_sub(b.checked_mul(c)?);
        let d0 = minor(m[1][1], m[1][2], m[2][1], m[2][2])?;
        let d1 = minor(m[1][0], m[1][2], m[2][0], m[2][2])?;
        let d2 = minor(m[1][0], m[1][1], m[2][0], m[2][1])?;
        m[0][0]
            .checked_mul(d0)?
            .checked_sub(m[0][1].checked_mul(d1)?)?
            .checked_add(m[0][2].checked_mul(d2)?)
    }

    fn sweep_shell(&mut self, r: i64, meter: &mut Meter) -> Result<()> {
        for t in shell(r) {
            meter.tick(1)?;
            let Some(norm) = self.norm_i128(&t) else {
                return Err(Error::LimitExceeded {
                    what: "cubic class group",
                    limit: meter.used(),
                });
            };
            let mut rest = norm.unsigned_abs();
            let mut divides = Vec::new();
            for &p in &self.fb_primes {
                let mut k = 0u32;
                while rest % p as u128 == 0 {
                    rest /= p as u128;
                    k += 1;
                }
                if k > 0 {
                    divides.push((p, k));
                }
            }
            if rest != 1 {
                continue;
            }
            let elem = Elem::from_ints(t);
            let mut row = vec![BigInt::zero(); self.columns.len()];
            for (c, prime) in self.columns.iter().enumerate() {
                let Some(&(_, k)) = divides.iter().find(|(p, _)| BigInt::from(*p) == prime.p)
                else {
                    continue;
                };
                let v = if prime.f == 3 || prime.e == 3 {
                    k / prime.f
                } else {
                    prime.valuation_integral(self.field, &elem)
                };
                row[c] = BigInt::from(v);
            }
            self.relations += 1;
            self.lattice.insert(row);
        }
        Ok(())
    }

    fn structure(&self) -> Option<(Smith, AbelianStructure)> {
        if !self.lattice.is_full_rank() {
            return None;
        }
        let m = self.lattice.square_matrix();
        let s = Smith::compute(&m, self.columns.len());
        let st = s.structure();
        Some((s, st))
    }
}

impl<'a> Sweeper<'a> {
    /// Empty sweep whose lattice already holds the relations of `(p)`.
    fn seeded(
        field: &'a PureCubicField,
        factor_base: &[FactorBaseEntry],
        columns: Vec<PrimeIdeal>,
        fb_primes: Vec<u64>,
    ) -> Self {
        let mut sw = Sweeper {
            field,
            lattice: Lattice::new(columns.len()),
            columns,
            fb_primes,
            relations: 0,
        };
        // (p) itself: the sweep skips non-primitive triples, and for an inert p
        // this is the only relation involving its prime
        for (c0, entry) in factor_base.iter().scan(0usize, |acc, e| {
            let start = *acc;
            *acc += e.primes.len();
            Some((start, e))
        }) {
            let mut row = vec![BigInt::zero(); sw.columns.len()];
            for (i, q) in entry.primes.iter().enumerate() {
                row[c0 + i] = BigInt::from(q.e);
            }
            sw.lattice.insert(row);
        }
        sw
    }
}

type FactorBase = (Vec<FactorBaseEntry>, Vec<PrimeIdeal>, Vec<u64>);

fn factor_base(field: &PureCubicField) -> Result<FactorBase> {
    let fb_primes = field.minkowski_primes();
    let mut factor_base = Vec::new();
    for &p in &fb_primes {
        factor_base.push(FactorBaseEntry {
            p,
            primes: factor_prime(field, p)?,
        });
    }
    let columns: Vec<PrimeIdeal> = factor_base
        .iter()
        .flat_map(|e| e.primes.iter().cloned())
        .collect();
    Ok((factor_base, columns, fb_primes))
}

/// Structure from the relations of shells `1..=radius` only, without the
/// adaptive loop. Fails when those relations do not reach full rank.
pub fn class_structure_at_radius(
    field: &PureCubicField,
    radius: i64,
    budget: u64,
) -> Result<AbelianStructure> {
    let (factor_base, columns, fb_primes) = factor_base(field)?;
    if columns.is_empty() {
        return Ok(AbelianStructure::trivial());
    }
    let mut meter = Meter::new("cubic class group", budget);
    let mut sw = Sweeper::seeded(field, &factor_base, columns, fb_primes);
    for r in 1..=radius {
        sw.sweep_shell(r, &mut meter)?;
    }
    sw.structure()
        .map(|(_, st)| st)
        .ok_or(Error::LimitExceeded {
            what: "cubic relations",
            limit: radius as u64,
        })
}

pub fn class_group_cubic(field: &PureCubicField) -> Result<CubicClassGroup> {
    class_group_cubic_with(field, DEFAULT_BUDGET)
}

pub fn class_group_cubic_with(field: &PureCubicField, budget: u64) -> Result<CubicClassGroup> {
    if field.discriminant().abs() > MAX_ABS_DISCRIMINANT {
        return Err(Error::LimitExceeded {
            what: "cubic class group",
            limit: MAX_ABS_DISCRIMINANT as u64,
        });
    }
    let (factor_base, columns, fb_primes) = factor_base(field)?;
    if columns.is_empty() {
        return Ok(CubicClassGroup {
            class_number: 1,
            structure: AbelianStructure::trivial(),
            factor_base,
            relation_matrix: Vec::new(),
            relations_found: 0,
            radius: 0,
            saturation_radius: 0,
            smith: Smith::compute(&[], 0),
        });
    }
    let mut meter = Meter::new("cubic class group", budget);
    let mut sw = Sweeper::seeded(field, &factor_base, columns, fb_primes);
    let mut r = 0;
    loop {
        r += 1;
        sw.sweep_shell(r, &mut meter)?;
        if r >= MIN_RADIUS && sw.lattice.is_full_rank() {
            break;
        }
    }
    let (_, mut st) = sw.structure().expect("full rank");
    let smith = loop {
        for s in r + 1..=2 * r {
            sw.sweep_shell(s, &mut meter)?;
        }
        let (smith2, st2) = sw.structure().expect("full rank");
        if st2 == st {
            break smith2;
        }
        st = st2;
        r *= 2;
    };
    Ok(CubicClassGroup {
        class_number: st.order().expect("finite"),
        structure: st,
        factor_base,
        relation_matrix: sw.lattice.rows(),
        relations_found: sw.relations,
        radius: r,
        saturation_radius: 2 * r,
        smith,
    })
}

/// Ideal `(p)` as a [`FactoredIdeal`]; handy for checks.
pub fn factored_rational_prime(field: &PureCubicField, p: u64) -> Result<FactoredIdeal> {
    Ok(FactoredIdeal {
        parts: factor_prime_big(field, &BigInt::from(p))?
            .into_iter()
            .map(|q| {
                let e = q.e;
                (q, e)
            })
            .collect(),
    })
}

/// Searches for a generator of `ideal`: an element of the ideal whose norm
/// equals the ideal norm. Used as an independent principality check.
pub fn find_generator(field: &PureCubicField, ideal: &CubicIdeal, radius: i64) -> Option<Elem> {
    let basis = lll_reduce(&ideal.basis());
    for r in 1..=radius {
        for t in shell(r) {
            let b = basis
                .iter()
                .zip(t)
                .fold(Elem::from_ints([0, 0, 0]), |acc, (e, k)| {
                    acc.add(&e.scale(&BigInt::from(k)))
                });
            if field.norm(&b).to_integer().abs() == *ideal.norm() {
                return Some(b);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::super::make_field;
    use super::*;

    #[test]
    fn shells_are_disjoint_and_complete() {
        let mut all: Vec<[i64; 3]> = (1..=2).flat_map(shell).collect();
        let n = all.len();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), n);
        assert!(all.contains(&[1, 0, 0]));
        assert!(!all.contains(&[-1, 0, 0]));
        assert!(!all.contains(&[2, 0, 2]));
    }

    #[test]
    fn class_number_of_cbrt2() {
        let f = make_field(2).unwrap();
        let g = class_group_cubic(&f).unwrap();
        assert_eq!(g.class_number, 1);
        assert_eq!(g.factor_base.len(), 1);
    }

    #[test]
    fn class_number_of_cbrt7() {
        let f = make_field(7).unwrap();
        let g = class_group_cubic(&f).unwrap();
        assert_eq!(g.class_number, 3);
        assert_eq!(g.l_rank(3), 1);
    }

    #[test]
    fn generator_search_finds_theta() {
        let f = make_field(2).unwrap();
        let i = CubicIdeal::principal(&f, &f.theta()).unwrap();
        let g = find_generator(&f, &i, 3).unwrap();
        assert_eq!(CubicIdeal::principal(&f, &g).unwrap(), i);
    }
}
