//! Point search and the `x - theta` descent map on `y^2 = x^3 + n`.
//!
//! Only the image of known points is computed. It spans a subgroup of
//! `E(Q)/2E(Q)`, hence of the 2-Selmer group, so the rank reported here is a
//! lower bound and reports say so.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{is_prime, nth_root_floor, perfect_power, pow_mod};
use crate::cubic::{
    class_from_point, class_group_cubic_with, descent_element, is_square, make_field,
    square_class_with, CubicClassGroup, Elem, PureCubicField, SquareClass,
};
use crate::elliptic::{rational, Curve, Point};
use crate::error::{Error, Result};

pub const MAX_SEARCH_BOUND: i64 = 1_000_000;
pub const SUBGROUP_NOTE: &str = "lower-bound subgroup";

const CHUNK: i64 = 1 << 14;

/// All points `(u/e^2, v/e^3)` on `y^2 = x^3 + n` with `|u| <= h` and
/// `1 <= e <= h^(1/4)`, sorted.
pub fn point_search(n: i64, h: i64, budget: u64) -> Result<Vec<Point>> {
    Curve::mordell(n)?;
    if !(0..=MAX_SEARCH_BOUND).contains(&h) {
        return Err(Error::invalid(
            "search-bound",
            format!("search bound {h} outside 0..={MAX_SEARCH_BOUND}"),
        ));
    }
    let e_max = nth_root_floor(h as u128, 4).max(1) as i64;
    let work = (e_max as u64) * (2 * h as u64 + 1);
    if work > budget {
        return Err(Error::LimitExceeded {
            what: "point search",
            limit: budget,
        });
    }
    let mut tasks = Vec::new();
    for e in 1..=e_max {
        let mut start = -h;
        while start <= h {
            tasks.push((e, start, (start + CHUNK - 1).min(h)));
            start += CHUNK;
        }
    }
    let mut points: Vec<Point> = tasks
        .into_par_iter()
        .flat_map_iter(|(e, lo, hi)| search_chunk(n, e, lo, hi))
        .collect();
    points.sort();
    Ok(points)
}

fn search_chunk(n: i64, e: i64, lo: i64, hi: i64) -> Vec<Point> {
    let e2 = (e * e) as i128;
    let e6 = e2 * e2 * e2;
    let mut out = Vec::new();
    for u in lo..=hi {
        if e > 1 && u.gcd(&e) != 1 {
            continue;
        }
        let u = u as i128;
        let t = u * u * u + n as i128 * e6;
        if t < 0 {
            continue;
        }
        let v = t.sqrt();
        if v * v != t {
            continue;
        }
        let x = rational(u as i64, e2 as i64);
        let e3 = (e2 as i64) * e;
        out.push(Point::affine(x.clone(), rational(v as i64, e3)));
        if v != 0 {
            out.push(Point::affine(x, rational(-(v as i64), e3)));
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct DescentRow {
    pub point: String,
    pub square_class: SquareClass,
    /// Row of the F2 matrix, one bit per column of the report.
    pub bits: Vec<u8>,
    /// Raised the rank when added in order.
    pub independent: bool,
}

#[derive(Debug, Clone)]
pub struct ClassRow {
    pub point: String,
    pub alpha_norm: BigInt,
    pub a_norm: BigInt,
    pub a_hnf: Vec<Vec<String>>,
    pub obstruction_norm: BigInt,
    pub obstruction_hnf: Vec<Vec<String>>,
    pub class_coords: Vec<BigInt>,
    pub order: u64,
    /// `a^2 b = (alpha)` checked on HNF matrices.
    pub relation_holds: bool,
}

#[derive(Debug, Clone)]
pub struct DescentReport {
    pub n: i64,
    pub note: &'static str,
    /// Points at infinity and with `y = 0` are left out of the map.
    pub excluded: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<DescentRow>,
    pub f2_rank: usize,
    pub class_number: Option<u64>,
    pub class_structure: Option<String>,
    pub class_rows: Vec<ClassRow>,
    pub field: Option<PureCubicField>,
}

/// Field `Q(cbrt(n))` for the descent, refusing reducible `T^3 + n`.
pub fn descent_field(n: i64) -> Result<PureCubicField> {
    if n.abs() == 1 || perfect_power(n.abs() as i128)?.is_some_and(|(_, k)| k % 3 == 0) {
        return Err(Error::invalid(
            "reducible-cubic",
            format!("T^3 + {n} has a rational root"),
        ));
    }
    make_field(n)
}

fn column_key(label: &str) -> (BigInt, usize) {
    let (p, i) = label.split_once('#').expect("prime label");
    (p.parse().expect("prime"), i.parse().expect("index"))
}

/// Square classes of `x - theta` for the given points and the F2 rank of
/// their parity matrix.
///
/// Columns are valuation parities at primes, the sign of the real embedding,
/// and quadratic characters at auxiliary degree-one primes `(q, theta - r)`;
/// the characters see units and ideal squares that valuations miss. Every
/// dependency found is certified by an exact square test, adding characters
/// until that succeeds.
pub fn two_descent_rank(n: i64, points: &[Point], budget: u64) -> Result<DescentReport> {
    let field = descent_field(n)?;
    let curve = Curve::mordell(n)?;
    let mut excluded = Vec::new();
    let mut classes = Vec::new();
    for p in points {
        if !curve.contains(p) {
            return Err(Error::invalid(
                "off-curve",
                format!("{p} is not on y^2 = x^3 + {n}"),
            ));
        }
        match p.y() {
            None => excluded.push(p.to_string()),
            Some(y) if y.is_zero() => excluded.push(p.to_string()),
            Some(_) => {
                let (alpha, _) = descent_element(&field, n, p)?;
                let class = square_class_with(&field, &alpha, budget)?;
                classes.push((p, alpha, class));
            }
        }
    }
    let mut labels: Vec<String> = classes
        .iter()
        .flat_map(|(_, _, c)| c.odd_primes.iter().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    labels.sort_by_key(|l| column_key(l));
    let avoid: BigInt = classes
        .iter()
        .map(|(_, a, _)| field.norm(a).to_integer())
        .product::<BigInt>()
        * BigInt::from(3 * field.m());

    let mut n_chars = CHARACTERS;
    loop {
        let chars = auxiliary_primes(&field, &avoid, n_chars);
        let mut basis = F2Basis::default();
        let mut rows = Vec::new();
        let mut certified = true;
        for (i, (p, alpha, class)) in classes.iter().enumerate() {
            let mut bits: Vec<u8> = labels
                .iter()
                .map(|l| class.odd_primes.contains(l) as u8)
                .collect();
            bits.push(class.negative as u8);
            bits.extend(chars.iter().map(|&(q, r)| character(&field, alpha, q, r)));
            let dependency = basis.insert_tracked(&bits, i);
            if let Some(subset) = &dependency {
                let product = subset
                    .iter()
                    .fold(field.one(), |acc, &j| field.mul(&acc, &classes[j].1));
                certified &= is_square(&field, &product);
            }
            rows.push(DescentRow {
                point: p.to_string(),
                square_class: class.clone(),
                bits,
                independent: dependency.is_none(),
            });
        }
        if certified {
            let mut columns = labels.clone();
            columns.push("sign".into());
            columns.extend(chars.iter().map(|(q, r)| format!("chi({q},{r})")));
            return Ok(DescentReport {
                n,
                note: SUBGROUP_NOTE,
                excluded,
                columns,
                f2_rank: basis.rank(),
                rows,
                class_number: None,
                class_structure: None,
                class_rows: Vec::new(),
                field: Some(field),
            });
        }
        if n_chars >= MAX_CHARACTERS {
            return Err(Error::LimitExceeded {
                what: "descent characters",
                limit: MAX_CHARACTERS as u64,
            });
        }
        n_chars *= 2;
    }
}

const CHARACTERS: usize = 8;
const MAX_CHARACTERS: usize = 512;

/// First `k` pairs `(q, r)` with `q` prime not dividing `avoid` and
/// `r^3 = m mod q`, ordered by `q` then `r`.
fn auxiliary_primes(field: &PureCubicField, avoid: &BigInt, k: usize) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut q = 4u64;
    while out.len() < k {
        q += 1;
        if !is_prime(q as u128) || (avoid % BigInt::from(q)).is_zero() {
            continue;
        }
        let m = field.m().rem_euclid(q as i64) as u64;
        for r in 0..q {
            if r * r % q * r % q == m && out.len() < k {
                out.push((q, r));
            }
        }
    }
    out
}

/// Legendre symbol of `alpha` modulo the prime `(q, theta - r)`, as a bit.
fn character(field: &PureCubicField, alpha: &Elem, q: u64, r: u64) -> u8 {
    let qb = BigInt::from(q);
    let rb = BigInt::from(r);
    let c = field.to_power_coords(alpha);
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    let mut rk = BigInt::one();
    for x in &c {
        // num/den + x * r^k
        num = num * x.denom() + &den * x.numer() * &rk;
        den *= x.denom();
        rk = rk * &rb % &qb;
    }
    let v = (num.mod_floor(&qb) * mod_inverse(&den.mod_floor(&qb), &qb)).mod_floor(&qb);
    let v = v.to_u128().expect("residue");
    debug_assert!(v != 0);
    (pow_mod(v, (q as u128 - 1) / 2, q as u128) != 1) as u8
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    e.x.mod_floor(m)
}

/// Full report: descent matrix plus the ideal class of `a` for every point
/// that raised the rank.
pub fn selmer_to_classgroup(n: i64, points: &[Point], budget: u64) -> Result<DescentReport> {
    let mut report = two_descent_rank(n, points, budget)?;
    let field = report.field.clone().expect("descent field");
    let group: CubicClassGroup = class_group_cubic_with(&field, budget)?;
    let mut class_rows = Vec::new();
    for row in report.rows.iter().filter(|r| r.independent) {
        let p = points
            .iter()
            .find(|p| p.to_string() == row.point)
            .expect("row point");
        let pc = class_from_point(&field, n, p, &group, budget)?;
        class_rows.push(ClassRow {
            point: row.point.clone(),
            alpha_norm: field.norm(&pc.alpha).to_integer(),
            a_norm: pc.a.norm(),
            a_hnf: pc.a.to_ideal(&field).hnf_strings(),
            obstruction_norm: pc.b.norm(),
            obstruction_hnf: pc.b_ideal.hnf_strings(),
            class_coords: pc.class_coords.clone(),
            order: pc.order,
            relation_holds: pc.relation_holds(&field),
        });
    }
    report.class_number = Some(group.class_number);
    report.class_structure = Some(group.structure.to_string());
    report.class_rows = class_rows;
    Ok(report)
}

/// Incremental row echelon form over F2.
#[derive(Debug, Default, Clone)]
pub struct F2Basis {
    rows: Vec<(usize, Vec<u8>)>,
    combos: Vec<BTreeSet<usize>>,
}

impl F2Basis {
    /// Adds a row; true when it was independent of the rows so far.
    pub fn insert(&mut self, row: &[u8]) -> bool {
        let mut r: Vec<u8> = row.iter().map(|b| b & 1).collect();
        for (pivot, b) in &self.rows {
            if r.get(*pivot) == Some(&1) {
                for (x, y) in r.iter_mut().zip(b) {
                    *x ^= y;
                }
            }
        }
        match r.iter().position(|&b| b == 1) {
            Some(pivot) => {
                self.rows.push((pivot, r));
                self.combos.push(BTreeSet::new());
                true
            }
            None => false,
        }
    }

    /// Like [`F2Basis::insert`], tagging the row with `id`; on dependency
    /// returns the ids whose rows sum to it (including `id`).
    pub fn insert_tracked(&mut self, row: &[u8], id: usize) -> Option<BTreeSet<usize>> {
        let mut r: Vec<u8> = row.iter().map(|b| b & 1).collect();
        let mut combo = BTreeSet::from([id]);
        for (k, (pivot, b)) in self.rows.iter().enumerate() {
            if r.get(*pivot) == Some(&1) {
                for (x, y) in r.iter_mut().zip(b) {
                    *x ^= y;
                }
                combo = combo
                    .symmetric_difference(&self.combos[k])
                    .copied()
                    .collect();
            }
        }
        match r.iter().position(|&b| b == 1) {
            Some(pivot) => {
                self.rows.push((pivot, r));
                self.combos.push(combo);
                None
            }
            None => Some(combo),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

pub fn f2_rank(rows: &[Vec<u8>]) -> usize {
    let mut b = F2Basis::default();
    for r in rows {
        b.insert(r);
    }
    b.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::DEFAULT_BUDGET;

    fn has(points: &[Point], x: i64, y: i64) -> bool {
        points.contains(&Point::from_ints(x, y))
    }

    #[test]
    fn search_17() {
        let pts = point_search(17, 100, DEFAULT_BUDGET).unwrap();
        for (x, y) in [(-2, 3), (-1, 4), (2, 5), (4, 9), (8, 23)] {
            assert!(has(&pts, x, y) && has(&pts, x, -y), "({x},{y})");
        }
        let mut sorted = pts.clone();
        sorted.sort();
        assert_eq!(sorted, pts);
        let curve = Curve::mordell(17).unwrap();
        assert!(pts.iter().all(|p| curve.contains(p)));
    }

    #[test]
    fn search_1() {
        let pts = point_search(1, 10, DEFAULT_BUDGET).unwrap();
        assert!(has(&pts, -1, 0) && has(&pts, 0, 1) && has(&pts, 0, -1));
        assert!(has(&pts, 2, 3) && has(&pts, 2, -3));
    }

    #[test]
    fn search_limits() {
        assert!(point_search(17, 1_000, 10).unwrap_err().is_limit());
        assert_eq!(
            point_search(17, MAX_SEARCH_BOUND + 1, DEFAULT_BUDGET)
                .unwrap_err()
                .code(),
            "search-bound"
        );
    }

    #[test]
    fn rank_17() {
        let p = |x, y| Point::from_ints(x, y);
        let r = two_descent_rank(17, &[p(-2, 3), p(2, 5)], DEFAULT_BUDGET).unwrap();
        assert_eq!(r.f2_rank, 2);
        let r = two_descent_rank(17, &[p(-2, 3), p(-2, -3)], DEFAULT_BUDGET).unwrap();
        assert_eq!(r.f2_rank, 1);
        let r = two_descent_rank(17, &[], DEFAULT_BUDGET).unwrap();
        assert_eq!(r.f2_rank, 0);
    }

    #[test]
    fn reducible() {
        assert_eq!(
            two_descent_rank(1, &[], DEFAULT_BUDGET).unwrap_err().code(),
            "reducible-cubic"
        );
        assert_eq!(
            two_descent_rank(-8, &[], DEFAULT_BUDGET)
                .unwrap_err()
                .code(),
            "reducible-cubic"
        );
    }

    #[test]
    fn classes_17() {
        let pts = point_search(17, 100, DEFAULT_BUDGET).unwrap();
        let r = selmer_to_classgroup(17, &pts, DEFAULT_BUDGET).unwrap();
        assert!(!r.class_rows.is_empty());
        for row in &r.class_rows {
            assert!(row.relation_holds);
            assert!(row.order == 1 || row.order == 3);
        }
    }

    #[test]
    fn f2() {
        assert_eq!(f2_rank(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]), 2);
        assert_eq!(f2_rank(&[vec![0, 0]]), 0);
    }
}
