//! Structure of an explicitly enumerated finite abelian group.
//!
//! Elements are adjoined one at a time in the caller's order; each new
//! generator contributes one relation (its smallest power landing in the
//! subgroup built so far). The Smith form of that relation matrix gives the
//! invariant factors, and its column transform gives matching generators.

use std::collections::HashMap;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::arith::{AbelianStructure, Smith};

#[derive(Debug, Clone)]
pub struct Decomposition<T> {
    pub structure: AbelianStructure,
    /// One generator per invariant factor, in the same order.
    pub generators: Vec<T>,
}

pub fn power<T: Clone>(x: &T, mut e: u64, identity: &T, op: &impl Fn(&T, &T) -> T) -> T {
    let mut acc = identity.clone();
    let mut base = x.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = op(&acc, &base);
        }
        base = op(&base, &base);
        e >>= 1;
    }
    acc
}

/// Order of `x`, searching up to `limit`; `None` when larger.
pub fn order_of<T: Clone + Eq>(
    x: &T,
    identity: &T,
    op: &impl Fn(&T, &T) -> T,
    limit: u64,
) -> Option<u64> {
    let mut cur = x.clone();
    for k in 1..=limit {
        if &cur == identity {
            return Some(k);
        }
        cur = op(&cur, x);
    }
    None
}

/// Decomposes the group whose full element list is `elements`.
///
/// `elements` must contain the identity and be closed under `op`; candidate
/// generators are tried in list order.
pub fn decompose<T: Clone + Eq + Hash>(
    elements: &[T],
    identity: &T,
    op: impl Fn(&T, &T) -> T,
) -> Decomposition<T> {
    let total = elements.len();
    let mut sub: HashMap<T, Vec<i64>> = HashMap::new();
    sub.insert(identity.clone(), Vec::new());
    let mut gens: Vec<T> = Vec::new();
    let mut relations: Vec<Vec<i64>> = Vec::new();

    for g in elements {
        if sub.len() == total {
            break;
        }
        if sub.contains_key(g) {
            continue;
        }
        let mut cur = g.clone();
        let mut k: i64 = 1;
        while !sub.contains_key(&cur) {
            cur = op(&cur, g);
            k += 1;
        }
        let mut row: Vec<i64> = sub[&cur].iter().map(|e| -e).collect();
        row.resize(gens.len(), 0);
        row.push(k);
        relations.push(row);

        let old: Vec<(T, Vec<i64>)> = sub.iter().map(|(h, e)| (h.clone(), e.clone())).collect();
        for (h, ev) in old {
            let mut x = h;
            for j in 1..k {
                x = op(&x, g);
                let mut e = ev.clone();
                e.resize(gens.len(), 0);
                e.push(j);
                sub.insert(x.clone(), e);
            }
        }
        gens.push(g.clone());
    }

    if gens.is_empty() {
        return Decomposition {
            structure: AbelianStructure::trivial(),
            generators: Vec::new(),
        };
    }
    let n = gens.len();
    let matrix: Vec<Vec<BigInt>> = relations
        .iter()
        .map(|r| {
            let mut r = r.clone();
            r.resize(n, 0);
            r.into_iter().map(BigInt::from).collect()
        })
        .collect();
    let smith = Smith::compute(&matrix, n);
    let order = BigInt::from(total as u64);
    let generators = smith
        .generator_vectors()
        .iter()
        .map(|exps| {
            exps.iter()
                .zip(&gens)
                .fold(identity.clone(), |acc, (e, g)| {
                    let e = e.mod_floor(&order).to_u64().expect("exponent fits");
                    op(&acc, &power(g, e, identity, &op))
                })
        })
        .collect();
    Decomposition {
        structure: smith.structure(),
        generators,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Z/a x Z/b as pairs under componentwise addition.
    fn product_group(a: i64, b: i64) -> Vec<(i64, i64)> {
        let mut v = Vec::new();
        for i in 0..a {
            for j in 0..b {
                v.push((i, j));
            }
        }
        v
    }

    #[test]
    fn recovers_invariant_factors() {
        for (a, b, expect) in [
            (2, 4, vec![2, 4]),
            (2, 3, vec![6]),
            (4, 6, vec![2, 12]),
            (1, 1, vec![]),
            (3, 3, vec![3, 3]),
        ] {
            let els = product_group(a, b);
            let op = |x: &(i64, i64), y: &(i64, i64)| ((x.0 + y.0) % a, (x.1 + y.1) % b);
            let d = decompose(&els, &(0, 0), op);
            assert_eq!(d.structure.elementary_divisors, expect);
            for (g, div) in d.generators.iter().zip(&d.structure.elementary_divisors) {
                assert_eq!(order_of(g, &(0, 0), &op, 100), Some(*div));
            }
        }
    }
}
