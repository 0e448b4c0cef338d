//! Gaussian elimination over exact fields.
//!
//! Pivoting takes the first nonzero entry of each column (exact zero test) and
//! swaps rows as needed, so results are deterministic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::expr::Expr;

pub trait Field: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn inv(&self) -> Option<Self>;
}

impl Field for Expr {
    fn zero() -> Self {
        Expr::zero()
    }
    fn one() -> Self {
        Expr::one()
    }
    fn is_zero(&self) -> bool {
        Expr::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn inv(&self) -> Option<Self> {
        self.recip().ok()
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

pub type Matrix<F> = Vec<Vec<F>>;

pub fn identity<F: Field>(n: usize) -> Matrix<F> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { F::one() } else { F::zero() }).collect())
        .collect()
}

pub fn mat_mul<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(F::zero(), |acc, k| acc.add(&row[k].mul(&b[k][j])))
                })
                .collect()
        })
        .collect()
}

pub fn transpose<F: Clone>(a: &Matrix<F>) -> Matrix<F> {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Reduced row-echelon form in place; returns pivot columns.
pub fn rref<F: Field>(m: &mut Matrix<F>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot is invertible");
        for v in m[r].iter_mut() {
            *v = v.mul(&inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let delta = f.mul(&m[r][j]);
                    m[i][j] = m[i][j].sub(&delta);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Inverse of a square matrix, or the first column without a nonzero pivot.
pub fn inverse<F: Field>(a: &Matrix<F>) -> Result<Matrix<F>, usize> {
    let n = a.len();
    let mut aug: Matrix<F> = a
        .iter()
        .zip(identity::<F>(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    let pivots = rref(&mut aug);
    if let Some(c) = (0..n).find(|c| pivots.get(*c) != Some(c)) {
        return Err(c);
    }
    Ok(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Solution structure of `A x = b` as found by elimination.
#[derive(Debug, Clone, PartialEq)]
pub enum LinearSolution<F> {
    Unique(Vec<F>),
    /// Particular solution (free variables set to zero), per-variable flag
    /// telling whether it is pinned, and a basis of the null space.
    Underdetermined {
        particular: Vec<F>,
        determined: Vec<bool>,
        null_space: Vec<Vec<F>>,
    },
    Inconsistent,
}

pub fn solve<F: Field>(a: &Matrix<F>, b: &[F]) -> LinearSolution<F> {
    let n = a.first().map_or(0, Vec::len);
    let mut aug: Matrix<F> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| row.iter().cloned().chain(std::iter::once(rhs.clone())).collect())
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&n) {
        return LinearSolution::Inconsistent;
    }
    let mut particular = vec![F::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = aug[r][n].clone();
    }
    if pivots.len() == n {
        return LinearSolution::Unique(particular);
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let determined = (0..n)
        .map(|c| match pivots.iter().position(|&p| p == c) {
            Some(r) => free.iter().all(|&f| aug[r][f].is_zero()),
            None => false,
        })
        .collect();
    let null_space = free
        .iter()
        .map(|&f| {
            let mut v = vec![F::zero(); n];
            v[f] = F::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = F::zero().sub(&aug[r][f]);
            }
            v
        })
        .collect();
    LinearSolution::Underdetermined {
        particular,
        determined,
        null_space,
    }
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        rational(n, 1)
    }

    #[test]
    fn inverse_with_row_swap() {
        let a = vec![vec![q(0), q(1)], vec![q(2), q(3)]];
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(2));
        assert_eq!(inverse(&vec![vec![q(1), q(2)], vec![q(2), q(4)]]), Err(1));
    }

    #[test]
    fn solution_kinds() {
        let a = vec![vec![q(-4), q(-2)], vec![q(0), q(2)]];
        assert_eq!(
            solve(&a, &[q(-8), q(4)]),
            LinearSolution::Unique(vec![q(1), q(2)])
        );
        let a = vec![vec![q(0), q(-2)], vec![q(0), q(2)]];
        match solve(&a, &[q(-4), q(4)]) {
            LinearSolution::Underdetermined {
                particular,
                determined,
                null_space,
            } => {
                assert_eq!(particular, vec![q(0), q(2)]);
                assert_eq!(determined, vec![false, true]);
                assert_eq!(null_space, vec![vec![q(1), q(0)]]);
            }
            other => panic!("{other:?}"),
        }
        let a = vec![vec![q(1), q(1)], vec![q(1), q(1)]];
        assert_eq!(solve(&a, &[q(1), q(2)]), LinearSolution::Inconsistent);
    }
}
