//! Row-style Hermite normal form over the integers, maintained incrementally.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Integer lattice in `Z^dim`, stored as its Hermite normal form.
///
/// Row `c` (when present) has its leading entry in column `c`; leading
/// entries are positive and every entry above a pivot lies in `[0, pivot)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    dim: usize,
    by_col: Vec<Option<Vec<BigInt>>>,
}

pub(crate) fn ext_gcd_big(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

fn axpy(dst: &mut [BigInt], k: &BigInt, src: &[BigInt]) {
    if k.is_zero() {
        return;
    }
    for (d, s) in dst.iter_mut().zip(src) {
        *d -= k * s;
    }
}

impl Lattice {
    pub fn new(dim: usize) -> Self {
        Lattice {
            dim,
            by_col: vec![None; dim],
        }
    }

    pub fn from_rows(dim: usize, rows: &[Vec<BigInt>]) -> Self {
        let mut l = Lattice::new(dim);
        for r in rows {
            l.insert(r.clone());
        }
        l
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.by_col.iter().filter(|r| r.is_some()).count()
    }

    pub fn is_full_rank(&self) -> bool {
        self.by_col.iter().all(Option::is_some)
    }

    /// Index of the lattice in `Z^dim` (product of pivots); `None` unless full rank.
    pub fn determinant(&self) -> Option<BigInt> {
        self.by_col
            .iter()
            .enumerate()
            .map(|(c, r)| r.as_ref().map(|r| r[c].clone()))
            .product()
    }

    /// The HNF rows, ordered by pivot column.
    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        self.by_col.iter().flatten().cloned().collect()
    }

    /// Square matrix with zero rows where a pivot is missing.
    pub fn square_matrix(&self) -> Vec<Vec<BigInt>> {
        self.by_col
            .iter()
            .map(|r| r.clone().unwrap_or_else(|| vec![BigInt::zero(); self.dim]))
            .collect()
    }

    /// Adds a vector to the lattice. Returns true when the lattice grew.
    pub fn insert(&mut self, mut v: Vec<BigInt>) -> bool {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        let mut changed = false;
        for c in 0..self.dim {
            if v[c].is_zero() {
                continue;
            }
            match self.by_col[c].take() {
                None => {
                    if v[c].is_negative() {
                        v.iter_mut().for_each(|x| *x = -&*x);
                    }
                    self.by_col[c] = Some(v);
                    self.reduce_from(c);
                    return true;
                }
                Some(mut p) => {
                    let (q, r) = v[c].div_mod_floor(&p[c]);
                    if r.is_zero() {
                        axpy(&mut v, &q, &p);
                    } else {
                        let (g, x, y) = ext_gcd_big(&p[c], &v[c]);
                        let a = &p[c] / &g;
                        let b = &v[c] / &g;
                        let new_p: Vec<BigInt> =
                            p.iter().zip(&v).map(|(pi, vi)| &x * pi + &y * vi).collect();
                        let new_v: Vec<BigInt> =
                            p.iter().zip(&v).map(|(pi, vi)| &a * vi - &b * pi).collect();
                        p = new_p;
                        v = new_v;
                        changed = true;
                    }
                    self.by_col[c] = Some(p);
                    if changed {
                        self.reduce_from(c);
                    }
                }
            }
        }
        changed
    }

    /// Re-establishes the reduced-above-pivot condition for column `c` onward.
    fn reduce_from(&mut self, c0: usize) {
        for c in c0..self.dim {
            let Some(pivot_row) = self.by_col[c].clone() else {
                continue;
            };
            let piv = pivot_row[c].clone();
            for i in 0..c {
                if let Some(row) = self.by_col[i].as_mut() {
                    let q = row[c].div_floor(&piv);
                    axpy(row, &q, &pivot_row);
                }
            }
        }
    }

    /// Whether `v` lies in the lattice.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        let mut v = v.to_vec();
        for c in 0..self.dim {
            if v[c].is_zero() {
                continue;
            }
            match &self.by_col[c] {
                None => return false,
                Some(p) => {
                    let (q, r) = v[c].div_mod_floor(&p[c]);
                    if !r.is_zero() {
                        return false;
                    }
                    axpy(&mut v, &q, p);
                }
            }
        }
        true
    }
}

/// Hermite normal form of the row span of `rows`.
pub fn hnf(dim: usize, rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    Lattice::from_rows(dim, rows).rows()
}

pub fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn small_hnf() {
        let h = hnf(2, &bi(&[&[4, 6], &[6, 4]]));
        // det = 16 - 36 = -20
        // (6,4) - (4,6) = (2,-2); (4,6) - 2(2,-2) = (0,10)
        assert_eq!(h, bi(&[&[2, 8], &[0, 10]]));
        let l = Lattice::from_rows(2, &bi(&[&[4, 6], &[6, 4]]));
        assert_eq!(l.determinant(), Some(BigInt::from(20)));
        assert!(l.contains(&bi(&[&[10, 10]])[0]));
        assert!(!l.contains(&bi(&[&[1, 0]])[0]));
    }

    #[test]
    fn rank_deficient() {
        let l = Lattice::from_rows(3, &bi(&[&[1, 2, 3], &[2, 4, 6]]));
        assert_eq!(l.rank(), 1);
        assert_eq!(l.determinant(), None);
    }

    #[test]
    fn insertion_order_irrelevant() {
        let rows = bi(&[&[3, 1, 4], &[1, 5, 9], &[2, 6, 5], &[3, 5, 8]]);
        let a = hnf(3, &rows);
        let mut rev = rows.clone();
        rev.reverse();
        assert_eq!(a, hnf(3, &rev));
    }
}
