//! Smith normal form and the finite abelian group structure it exposes.
//!
//! Convention: the rows of an `r x c` matrix are relations among `c`
//! generators, and the group described is `Z^c / rowspace(M)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::hnf::identity;
use crate::error::{Error, Result};

/// Invariant factors `d1 | d2 | ... | dk` (all `>= 2`) plus a free rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AbelianStructure {
    pub elementary_divisors: Vec<u64>,
    pub free_rank: usize,
}

impl AbelianStructure {
    pub fn trivial() -> Self {
        AbelianStructure {
            elementary_divisors: Vec::new(),
            free_rank: 0,
        }
    }

    pub fn cyclic(n: u64) -> Self {
        Self::from_divisors(vec![n])
    }

    /// Builds a structure from a valid divisor chain, dropping 1's.
    pub fn from_divisors(mut divs: Vec<u64>) -> Self {
        divs.retain(|&d| d != 1);
        debug_assert!(divs.windows(2).all(|w| w[1] % w[0] == 0));
        AbelianStructure {
            elementary_divisors: divs,
            free_rank: 0,
        }
    }

    /// Group order; `None` if the group is infinite.
    pub fn order(&self) -> Option<u64> {
        (self.free_rank == 0).then(|| self.elementary_divisors.iter().product())
    }

    /// Number of invariant factors divisible by `l`.
    pub fn l_rank(&self, l: u64) -> usize {
        self.elementary_divisors
            .iter()
            .filter(|&&d| d % l == 0)
            .count()
    }

    pub fn is_trivial(&self) -> bool {
        self.elementary_divisors.is_empty() && self.free_rank == 0
    }
}

impl std::fmt::Display for AbelianStructure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = self
            .elementary_divisors
            .iter()
            .map(|d| format!("Z/{d}"))
            .collect();
        parts.extend((0..self.free_rank).map(|_| "Z".to_string()));
        if parts.is_empty() {
            write!(f, "trivial")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

/// Result of a Smith decomposition `U M V = D`.
///
/// `v` maps old generator coordinates to new ones (`y = x V`); row `j` of
/// `v_inv` expresses the `j`-th new generator in the old generators.
#[derive(Debug, Clone)]
pub struct Smith {
    /// Diagonal entries, one per column (zeros for the free part).
    pub diagonal: Vec<BigInt>,
    pub v: Vec<Vec<BigInt>>,
    pub v_inv: Vec<Vec<BigInt>>,
}

impl Smith {
    pub fn compute(m: &[Vec<BigInt>], cols: usize) -> Smith {
        let mut a: Vec<Vec<BigInt>> = m.to_vec();
        let rows = a.len();
        let mut v = identity(cols);
        let mut v_inv = identity(cols);

        // column operations, mirrored into V and V^{-1}
        let col_axpy = |a: &mut Vec<Vec<BigInt>>,
                        v: &mut Vec<Vec<BigInt>>,
                        v_inv: &mut Vec<Vec<BigInt>>,
                        dst: usize,
                        k: &BigInt,
                        src: usize| {
            // col_dst -= k * col_src
            for row in a.iter_mut() {
                let s = row[src].clone();
                row[dst] -= k * s;
            }
            for row in v.iter_mut() {
                let s = row[src].clone();
                row[dst] -= k * s;
            }
            // inverse: row_src += k * row_dst
            let d = v_inv[dst].clone();
            for (x, y) in v_inv[src].iter_mut().zip(&d) {
                *x += k * y;
            }
        };
        let col_swap = |a: &mut Vec<Vec<BigInt>>,
                        v: &mut Vec<Vec<BigInt>>,
                        v_inv: &mut Vec<Vec<BigInt>>,
                        i: usize,
                        j: usize| {
            if i == j {
                return;
            }
            for row in a.iter_mut() {
                row.swap(i, j);
            }
            for row in v.iter_mut() {
                row.swap(i, j);
            }
            v_inv.swap(i, j);
        };

        let n = rows.min(cols);
        for t in 0..n {
            loop {
                // smallest nonzero pivot in the remaining block
                let mut best: Option<(usize, usize)> = None;
                for i in t..rows {
                    for j in t..cols {
                        if a[i][j].is_zero() {
                            continue;
                        }
                        if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                            best = Some((i, j));
                        }
                    }
                }
                let Some((pi, pj)) = best else {
                    break;
                };
                a.swap(t, pi);
                col_swap(&mut a, &mut v, &mut v_inv, t, pj);

                let mut clean = true;
                for i in t + 1..rows {
                    if a[i][t].is_zero() {
                        continue;
                    }
                    let q = a[i][t].div_floor(&a[t][t]);
                    let pivot_row = a[t].clone();
                    for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                        *x -= &q * y;
                    }
                    if !a[i][t].is_zero() {
                        clean = false;
                    }
                }
                for j in t + 1..cols {
                    if a[t][j].is_zero() {
                        continue;
                    }
                    let q = a[t][j].div_floor(&a[t][t]);
                    col_axpy(&mut a, &mut v, &mut v_inv, j, &q, t);
                    if !a[t][j].is_zero() {
                        clean = false;
                    }
                }
                if !clean {
                    continue;
                }
                // divisibility: pivot must divide the whole remaining block
                let mut offender = None;
                'scan: for i in t + 1..rows {
                    for j in t + 1..cols {
                        if !(&a[i][j] % &a[t][t]).is_zero() {
                            offender = Some(i);
                            break 'scan;
                        }
                    }
                }
                match offender {
                    Some(i) => {
                        let r = a[i].clone();
                        for (x, y) in a[t].iter_mut().zip(&r) {
                            *x += y;
                        }
                    }
                    None => break,
                }
            }
        }
        // normalize signs through column negation
        for t in 0..n {
            if a[t][t].is_negative() {
                for row in a.iter_mut() {
                    row[t] = -&row[t];
                }
                for row in v.iter_mut() {
                    row[t] = -&row[t];
                }
                for x in v_inv[t].iter_mut() {
                    *x = -&*x;
                }
            }
        }
        let diagonal = (0..cols)
            .map(|t| {
                if t < rows {
                    a[t][t].clone()
                } else {
                    BigInt::zero()
                }
            })
            .collect();
        Smith { diagonal, v, v_inv }
    }

    pub fn structure(&self) -> AbelianStructure {
        let mut divs = Vec::new();
        let mut free = 0;
        for d in &self.diagonal {
            if d.is_zero() {
                free += 1;
            } else if !d.is_one() {
                divs.push(d.to_u64().expect("invariant factor exceeds u64"));
            }
        }
        AbelianStructure {
            elementary_divisors: divs,
            free_rank: free,
        }
    }

    /// Coordinates of the class of `x` (old generators) in the cyclic factors,
    /// one entry per nontrivial diagonal element, each reduced mod its divisor.
    pub fn coordinates(&self, x: &[BigInt]) -> Vec<BigInt> {
        let cols = self.diagonal.len();
        let mut out = Vec::new();
        for j in 0..cols {
            let d = &self.diagonal[j];
            if d.is_one() {
                continue;
            }
            let y: BigInt = (0..cols).map(|i| &x[i] * &self.v[i][j]).sum();
            if d.is_zero() {
                out.push(y);
            } else {
                out.push(y.mod_floor(d));
            }
        }
        out
    }

    /// Nontrivial diagonal entries, aligned with [`Smith::coordinates`].
    pub fn nontrivial_divisors(&self) -> Vec<BigInt> {
        self.diagonal
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }

    /// Old-generator exponent vectors of the new generators of each nontrivial
    /// cyclic factor, aligned with [`Smith::coordinates`].
    pub fn generator_vectors(&self) -> Vec<Vec<BigInt>> {
        self.diagonal
            .iter()
            .zip(&self.v_inv)
            .filter(|(d, _)| !d.is_one())
            .map(|(_, row)| row.clone())
            .collect()
    }
}

/// Structure of `Z^cols / rowspace(m)`.
pub fn smith_normal_form(m: &[Vec<i64>]) -> Result<AbelianStructure> {
    let cols = m.first().map_or(0, Vec::len);
    if m.is_empty() || cols == 0 {
        return Err(Error::invalid("empty-matrix", "matrix has no columns"));
    }
    if m.iter().any(|r| r.len() != cols) {
        return Err(Error::invalid("ragged-matrix", "rows differ in length"));
    }
    let big: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    Ok(Smith::compute(&big, cols).structure())
}

/// Order of an element given by its cyclic-factor coordinates.
pub fn element_order(coords: &[BigInt], divisors: &[BigInt]) -> Option<BigInt> {
    let mut acc = BigInt::one();
    for (c, d) in coords.iter().zip(divisors) {
        if d.is_zero() {
            if !c.is_zero() {
                return None;
            }
            continue;
        }
        let g = c.gcd(d);
        let ord = d / g;
        acc = acc.lcm(&ord);
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(
            smith_normal_form(&[vec![2, 0], vec![0, 4]]).unwrap(),
            AbelianStructure::from_divisors(vec![2, 4])
        );
        assert_eq!(
            smith_normal_form(&[vec![2, 1], vec![0, 2]]).unwrap(),
            AbelianStructure::cyclic(4)
        );
        assert_eq!(
            smith_normal_form(&[vec![1, 0], vec![0, 6]]).unwrap(),
            AbelianStructure::cyclic(6)
        );
        assert!(smith_normal_form(&[]).is_err());
    }

    #[test]
    fn coprime_diagonal_merges() {
        // Z/2 x Z/3 = Z/6, Z/4 x Z/6 = Z/2 x Z/12
        assert_eq!(
            smith_normal_form(&[vec![2, 0], vec![0, 3]]).unwrap(),
            AbelianStructure::cyclic(6)
        );
        assert_eq!(
            smith_normal_form(&[vec![4, 0], vec![0, 6]]).unwrap(),
            AbelianStructure::from_divisors(vec![2, 12])
        );
    }

    #[test]
    fn free_part_counted() {
        let s = smith_normal_form(&[vec![2, 0, 0]]).unwrap();
        assert_eq!(s.elementary_divisors, vec![2]);
        assert_eq!(s.free_rank, 2);
        assert_eq!(s.order(), None);
    }

    #[test]
    fn transforms_are_consistent() {
        let m: Vec<Vec<BigInt>> = [[4, 6, 2], [6, 4, 8], [2, 2, 2]]
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let s = Smith::compute(&m, 3);
        // V * V^{-1} = I
        for i in 0..3 {
            for j in 0..3 {
                let e: BigInt = (0..3).map(|k| &s.v[i][k] * &s.v_inv[k][j]).sum();
                assert_eq!(
                    e,
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                );
            }
        }
        // every relation maps to zero coordinates
        let divs = s.nontrivial_divisors();
        for r in &m {
            let c = s.coordinates(r);
            assert!(c.iter().all(Zero::is_zero), "{c:?}");
            assert_eq!(c.len(), divs.len());
        }
    }
}
