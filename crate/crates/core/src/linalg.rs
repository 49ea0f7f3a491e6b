//! Exact integer linear algebra on small dense symmetric matrices.
//!
//! Two routines back the conserved quantities of a linking matrix:
//! fraction-free symmetric elimination (rank, signature, determinant) and a
//! Smith normal form (elementary divisors). Both run over `i128` with checked
//! arithmetic first and fall back to `BigInt` if an intermediate overflows.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Matrix = Vec<Vec<i64>>;

trait Exact:
    Clone + PartialOrd + Integer + Signed + CheckedAdd + CheckedSub + CheckedMul + From<i64>
{
}

impl Exact for i128 {}
impl Exact for BigInt {}

/// Everything the invariant layer needs from one symmetric matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormData {
    pub rank: usize,
    pub signature: i64,
    pub abs_det: u128,
    /// Smith diagonal, units first, zeros last.
    pub divisors: Vec<u128>,
}

pub fn analyze(m: &[Vec<i64>]) -> Result<FormData> {
    let (rank, pos, neg, det) = match symmetric_reduce::<i128>(m) {
        Some((r, p, n, d)) => (r, p, n, BigInt::from(d)),
        None => symmetric_reduce::<BigInt>(m).ok_or(Error::Overflow("symmetric elimination"))?,
    };
    let divisors: Vec<BigInt> = match smith_diagonal::<i128>(m) {
        Some(d) => d.into_iter().map(BigInt::from).collect(),
        None => smith_diagonal::<BigInt>(m).ok_or(Error::Overflow("smith normal form"))?,
    };
    let to_u128 = |v: &BigInt| v.abs().to_u128().ok_or(Error::Overflow("invariant summary"));
    let nonzero = divisors.iter().filter(|d| !d.is_zero()).count();
    if nonzero != rank {
        return Err(Error::assertion(format!(
            "rank from elimination ({rank}) disagrees with smith rank ({nonzero})"
        )));
    }
    Ok(FormData {
        rank,
        signature: pos as i64 - neg as i64,
        abs_det: to_u128(&det)?,
        divisors: divisors.iter().map(to_u128).collect::<Result<_>>()?,
    })
}

/// Fraction-free LDL^T with symmetric pivoting. Returns (rank, #positive,
/// #negative, det) or `None` on overflow.
///
/// After step k every trailing entry is a bordered (k+1)-minor, so the
/// division by the previous pivot is exact. When the trailing diagonal is
/// all zero, row/column j is added to row/column i first; that is a
/// congruence and keeps the minors interpretation intact.
fn symmetric_reduce<T: Exact>(m: &[Vec<i64>]) -> Option<(usize, usize, usize, T)> {
    let n = m.len();
    let mut a: Vec<Vec<T>> = m
        .iter()
        .map(|row| row.iter().map(|&x| T::from(x)).collect())
        .collect();
    let mut prev = T::one();
    let (mut rank, mut pos, mut neg) = (0usize, 0usize, 0usize);

    for k in 0..n {
        let mut pick = (k..n).find(|&i| !a[i][i].is_zero());
        if pick.is_none() {
            let off = (k..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !a[i][j].is_zero());
            let Some((i, j)) = off else { break };
            for c in k..n {
                a[i][c] = a[i][c].checked_add(&a[j][c])?;
            }
            for r in k..n {
                a[r][i] = a[r][i].checked_add(&a[r][j])?;
            }
            pick = Some(i);
        }
        let pick = pick?;
        if pick != k {
            a.swap(pick, k);
            for row in a.iter_mut() {
                row.swap(pick, k);
            }
        }
        let p = a[k][k].clone();
        for i in k + 1..n {
            for j in i..n {
                let v = p
                    .checked_mul(&a[i][j])?
                    .checked_sub(&a[i][k].checked_mul(&a[k][j])?)?;
                let v = v.div_floor(&prev);
                a[i][j] = v.clone();
                a[j][i] = v;
            }
        }
        if p.is_positive() == prev.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        prev = p;
        rank += 1;
    }
    let det = if rank == n { prev } else { T::zero() };
    Some((rank, pos, neg, det))
}

/// Diagonal of the Smith normal form of a square matrix, non-negative,
/// ordered by divisibility with zeros at the end.
fn smith_diagonal<T: Exact>(m: &[Vec<i64>]) -> Option<Vec<T>> {
    let n = m.len();
    let mut a: Vec<Vec<T>> = m
        .iter()
        .map(|row| row.iter().map(|&x| T::from(x)).collect())
        .collect();
    let mut diag = Vec::with_capacity(n);

    for t in 0..n {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    match best {
                        Some((bi, bj)) if a[bi][bj].abs() <= a[i][j].abs() => {}
                        _ => best = Some((i, j)),
                    }
                }
            }
            let Some((pi, pj)) = best else {
                diag.resize(n, T::zero());
                return Some(diag);
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }

            let mut clean = true;
            for i in t + 1..n {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for c in t..n {
                    let sub = q.checked_mul(&a[t][c])?;
                    a[i][c] = a[i][c].checked_sub(&sub)?;
                }
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for r in t..n {
                    let sub = q.checked_mul(&a[r][t])?;
                    a[r][j] = a[r][j].checked_sub(&sub)?;
                }
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }

            let pivot = a[t][t].clone();
            let bad = (t + 1..n).find(|&i| (t + 1..n).any(|j| !a[i][j].is_multiple_of(&pivot)));
            match bad {
                Some(i) => {
                    for c in t..n {
                        a[t][c] = a[t][c].checked_add(&a[i][c])?;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
    }
    Some(diag)
}

pub fn transpose(m: &[Vec<i64>]) -> Matrix {
    let n = m.len();
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| (0..n).map(|i| m[i][j]).collect()).collect()
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Result<Matrix> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            if row.len() != inner {
                return Err(Error::invalid("matrix dimension mismatch"));
            }
            (0..cols)
                .map(|j| {
                    (0..inner).try_fold(0i64, |acc, k| {
                        acc.checked_add(row[k].checked_mul(b[k][j]).ok_or(Error::Overflow("matmul"))?)
                            .ok_or(Error::Overflow("matmul"))
                    })
                })
                .collect()
        })
        .collect()
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(m: usize) -> Matrix {
        let mut a = vec![vec![0; m]; m];
        for i in 0..m {
            a[i][i] = -2;
            if i + 1 < m {
                a[i][i + 1] = 1;
                a[i + 1][i] = 1;
            }
        }
        a
    }

    #[test]
    fn empty_matrix() {
        let f = analyze(&[]).unwrap();
        assert_eq!((f.rank, f.signature, f.abs_det), (0, 0, 1));
        assert!(f.divisors.is_empty());
    }

    #[test]
    fn two_chain() {
        let f = analyze(&chain(2)).unwrap();
        assert_eq!(f.abs_det, 3);
        assert_eq!(f.signature, -2);
        assert_eq!(f.divisors, vec![1, 3]);
    }

    #[test]
    fn all_minus_ones_has_rank_one() {
        for k in 1..8 {
            let m = vec![vec![-1; k]; k];
            let f = analyze(&m).unwrap();
            assert_eq!(f.rank, 1);
            assert_eq!(f.signature, -1);
            assert_eq!(f.abs_det, u128::from(k == 1));
        }
    }

    #[test]
    fn hyperbolic_plane_needs_the_off_diagonal_fixup() {
        let f = analyze(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!((f.rank, f.signature, f.abs_det), (2, 0, 1));
    }

    #[test]
    fn zero_block_counts_as_nullity() {
        let f = analyze(&[vec![0, 0], vec![0, 0]]).unwrap();
        assert_eq!((f.rank, f.signature, f.abs_det), (0, 0, 0));
        assert_eq!(f.divisors, vec![0, 0]);
    }

    #[test]
    fn smith_chain_of_divisibility() {
        let f = analyze(&[vec![2, 0], vec![0, 3]]).unwrap();
        assert_eq!(f.divisors, vec![1, 6]);
        let f = analyze(&[vec![4, 0, 0], vec![0, 6, 0], vec![0, 0, 0]]).unwrap();
        assert_eq!(f.divisors, vec![2, 12, 0]);
    }

    #[test]
    fn big_entries_fall_back_to_bigint() {
        let big = 1i64 << 50;
        let m = vec![
            vec![big, 9, 3, 7],
            vec![9, big, 5, 1],
            vec![3, 5, -big, 2],
            vec![7, 1, 2, big + 3],
        ];
        assert!(symmetric_reduce::<i128>(&m).is_none());
        let (rank, _, _, det) = symmetric_reduce::<BigInt>(&m).unwrap();
        assert_eq!(rank, 4);
        assert!(det.bits() > 128);
        assert_eq!(analyze(&m), Err(Error::Overflow("invariant summary")));

        // small result, large intermediates: the i128 path must agree with BigInt
        let m = vec![vec![3, 1 << 30], vec![1 << 30, 5]];
        let a = symmetric_reduce::<i128>(&m).unwrap();
        let b = symmetric_reduce::<BigInt>(&m).unwrap();
        assert_eq!((a.0, a.1, a.2, BigInt::from(a.3)), b);
    }

    #[test]
    fn congruence_helpers() {
        let e = vec![vec![1, 0], vec![-1, 1]];
        let m = vec![vec![-1, -1], vec![-1, -1]];
        let r = mat_mul(&mat_mul(&transpose(&e), &m).unwrap(), &e).unwrap();
        assert_eq!(r, vec![vec![0, 0], vec![0, -1]]);
        assert_eq!(identity(2), vec![vec![1, 0], vec![0, 1]]);
    }
}
