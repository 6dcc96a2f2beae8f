//! Dense exact matrices over the rationals.
//!
//! Elimination is fraction-free (Bareiss) on integer-scaled rows, with the
//! first non-zero entry of each column taken as pivot.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(RatMatrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut t = RatMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = RatMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn determinant(&self) -> Result<Rational> {
        self.require_square()?;
        let (mut rows, scale) = integer_rows(self, None);
        let outcome = bareiss(&mut rows, self.cols);
        if outcome.rank < self.rows {
            return Ok(Rational::zero());
        }
        let mut det = Rational::from_integer(rows[self.rows - 1][self.cols - 1].clone()) / scale;
        if outcome.swaps % 2 == 1 {
            det = -det;
        }
        Ok(det)
    }

    pub fn rank(&self) -> usize {
        let (mut rows, _) = integer_rows(self, None);
        bareiss(&mut rows, self.cols).rank
    }

    /// Solves `self · X = rhs` for square, regular `self`.
    pub fn solve(&self, rhs: &RatMatrix) -> Result<RatMatrix> {
        self.require_square()?;
        if rhs.rows != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: rhs.rows,
            });
        }
        let n = self.rows;
        let (mut rows, _) = integer_rows(self, Some(rhs));
        let outcome = bareiss(&mut rows, n);
        if outcome.rank < n {
            return Err(Error::Singular);
        }
        let mut x = RatMatrix::zeros(n, rhs.cols);
        for c in 0..rhs.cols {
            for k in (0..n).rev() {
                let mut acc = Rational::from_integer(rows[k][n + c].clone());
                for j in k + 1..n {
                    let a = &rows[k][j];
                    if !a.is_zero() {
                        acc -= Rational::from_integer(a.clone()) * x.get(j, c);
                    }
                }
                x.set(k, c, acc / Rational::from_integer(rows[k][k].clone()));
            }
        }
        Ok(x)
    }

    pub fn solve_vec(&self, b: &[Rational]) -> Result<Vec<Rational>> {
        let rhs = RatMatrix {
            rows: b.len(),
            cols: 1,
            data: b.to_vec(),
        };
        Ok(self.solve(&rhs)?.data)
    }

    pub fn inverse(&self) -> Result<RatMatrix> {
        self.solve(&RatMatrix::identity(self.rows))
    }

    fn require_square(&self) -> Result<()> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        Ok(())
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(format_rational).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Rows (optionally augmented with `rhs`) scaled to integers, and the product
/// of the row scale factors.
fn integer_rows(m: &RatMatrix, rhs: Option<&RatMatrix>) -> (Vec<Vec<BigInt>>, Rational) {
    let mut scale = BigInt::one();
    let rows = (0..m.rows)
        .map(|i| {
            let mut entries: Vec<&Rational> = m.row(i).iter().collect();
            if let Some(r) = rhs {
                entries.extend(r.row(i));
            }
            let l = entries
                .iter()
                .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            scale *= &l;
            entries
                .iter()
                .map(|v| v.numer() * (&l / v.denom()))
                .collect()
        })
        .collect();
    (rows, Rational::from_integer(scale))
}

struct Elimination {
    rank: usize,
    swaps: usize,
}

/// In-place fraction-free row echelon form over the first `cols` columns.
/// Extra columns are carried along.
fn bareiss(rows: &mut [Vec<BigInt>], cols: usize) -> Elimination {
    let n = rows.len();
    let width = rows.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut swaps = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            rows.swap(p, r);
            swaps += 1;
        }
        let (top, rest) = rows.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = &pivot_row[c];
        for row in rest.iter_mut() {
            let factor = row[c].clone();
            for j in c + 1..width {
                let v = pivot * &row[j] - &factor * &pivot_row[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
            row[c] = BigInt::zero();
        }
        prev = pivot.clone();
        r += 1;
    }
    Elimination { rank: r, swaps }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn m(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
            .unwrap()
    }

    /// Cofactor expansion, as an independent reference.
    fn cofactor_det(a: &RatMatrix) -> Rational {
        let n = a.rows();
        if n == 0 {
            return Rational::one();
        }
        let mut sum = Rational::zero();
        for j in 0..n {
            let minor = RatMatrix::from_rows(
                (1..n)
                    .map(|i| (0..n).filter(|&k| k != j).map(|k| a.get(i, k).clone()).collect())
                    .collect(),
            )
            .unwrap_or_else(|_| RatMatrix::zeros(0, 0));
            let term = a.get(0, j) * cofactor_det(&minor);
            if j % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
        }
        sum
    }

    #[test]
    fn determinants_match_cofactor_expansion() {
        let a = RatMatrix::from_rows(vec![
            vec![rat(1, 2), rat(1, 3), int(0), int(2)],
            vec![int(0), int(0), rat(5, 7), int(1)],
            vec![int(3), rat(-1, 4), int(1), int(0)],
            vec![rat(2, 9), int(1), int(1), rat(1, 5)],
        ])
        .unwrap();
        assert_eq!(a.determinant().unwrap(), cofactor_det(&a));
        assert_eq!(m(&[&[0, 1], &[1, 0]]).determinant().unwrap(), int(-1));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).determinant().unwrap(), int(0));
    }

    #[test]
    fn solve_and_inverse() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), RatMatrix::identity(3));
        let x = a.solve_vec(&[int(1), int(2), int(3)]).unwrap();
        assert_eq!(a.mul_vec(&x).unwrap(), vec![int(1), int(2), int(3)]);
        assert_eq!(m(&[&[1, 1], &[1, 1]]).inverse(), Err(Error::Singular));
    }

    #[test]
    fn rank_of_rectangular_and_singular() {
        assert_eq!(m(&[&[1, 2, 3], &[2, 4, 6], &[0, 0, 1]]).rank(), 2);
        assert_eq!(m(&[&[0, 0], &[0, 0]]).rank(), 0);
        assert_eq!(m(&[&[0, 1, 2], &[0, 2, 5]]).rank(), 2);
    }
}
