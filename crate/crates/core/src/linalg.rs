//! Exact linear algebra over the rationals.
//!
//! Every homology computation in the crate bottoms out here. Entries are
//! arbitrary-precision rationals, so twist words of any length can be
//! processed without overflow and every sign decision is exact.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// A dense rectangular matrix of rationals, stored row-major.
#[derive(Clone, PartialEq, Eq)]
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
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    /// Builds a matrix from rational rows. All rows must have `cols` entries.
    pub fn from_rows(cols: usize, rows: &[Vec<Rational>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row.iter().cloned());
        }
        Ok(RatMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds a matrix from integer rows. All rows must have `cols` entries.
    pub fn from_int_rows(cols: usize, rows: &[Vec<BigInt>]) -> Result<Self> {
        let rows: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| r.iter().cloned().map(Rational::from_integer).collect())
            .collect();
        Self::from_rows(cols, &rows)
    }

    /// Builds a matrix whose columns are the given integer vectors.
    pub fn from_int_columns(rows: usize, columns: &[Vec<BigInt>]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    found: col.len(),
                });
            }
            for (i, x) in col.iter().enumerate() {
                m.data[i * columns.len() + j] = Rational::from_integer(x.clone());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.data[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[Rational] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    /// Matrix-vector product `self * v`.
    pub fn apply(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    /// Exact rank over the rationals.
    pub fn rank(&self) -> usize {
        self.clone().into_rref().1.len()
    }

    /// Basis of the right null space `{x : self * x = 0}`.
    ///
    /// Each vector is scaled to coprime integers whose first nonzero entry is
    /// positive, and the vectors are ordered by the free column they are
    /// attached to. The output is therefore canonical for a given matrix.
    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        let (rref, pivots) = self.clone().into_rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -rref.get(r, free).clone();
            }
            basis.push(canonical_integer_vector(&v));
        }
        basis
    }

    /// Determinant of a square matrix.
    pub fn determinant(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let mut m = self.data.clone();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[i * n + c].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != c {
                for k in 0..n {
                    m.swap(p * n + k, c * n + k);
                }
                det = -det;
            }
            let pivot = m[c * n + c].clone();
            det *= &pivot;
            for i in c + 1..n {
                if m[i * n + c].is_zero() {
                    continue;
                }
                let factor = &m[i * n + c] / &pivot;
                for k in c..n {
                    let delta = &factor * &m[c * n + k];
                    m[i * n + k] -= delta;
                }
            }
        }
        Ok(det)
    }

    /// Reduced row echelon form together with the pivot columns.
    fn into_rref(mut self) -> (RatMatrix, Vec<usize>) {
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pivot_row) = (r..rows).find(|&i| !self.data[i * cols + c].is_zero()) else {
                continue;
            };
            if pivot_row != r {
                for k in 0..cols {
                    self.data.swap(pivot_row * cols + k, r * cols + k);
                }
            }
            let inv = self.data[r * cols + c].recip();
            for k in c..cols {
                let x = &self.data[r * cols + k] * &inv;
                self.data[r * cols + k] = x;
            }
            for i in 0..rows {
                if i == r || self.data[i * cols + c].is_zero() {
                    continue;
                }
                let factor = self.data[i * cols + c].clone();
                for k in c..cols {
                    let delta = &factor * &self.data[r * cols + k];
                    self.data[i * cols + k] -= delta;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (self, pivots)
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Whether `v` lies in the span of the rows of `basis`.
pub fn in_span(v: &[Rational], basis: &RatMatrix) -> Result<bool> {
    if v.len() != basis.cols() {
        return Err(Error::DimensionMismatch {
            expected: basis.cols(),
            found: v.len(),
        });
    }
    if v.iter().all(Zero::is_zero) {
        return Ok(true);
    }
    let mut rows: Vec<Vec<Rational>> = (0..basis.rows()).map(|i| basis.row(i).to_vec()).collect();
    let before = basis.rank();
    rows.push(v.to_vec());
    let after = RatMatrix::from_rows(basis.cols(), &rows)?.rank();
    Ok(after == before)
}

/// Scales a rational vector to coprime integers with the first nonzero entry
/// positive. The zero vector maps to the zero vector.
pub fn canonical_integer_vector(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    primitive_part(&ints)
}

/// Divides an integer vector by the gcd of its entries and fixes the sign so
/// that the first nonzero entry is positive.
pub fn primitive_part(v: &[BigInt]) -> Vec<BigInt> {
    let g = content(v);
    if g.is_zero() {
        return v.to_vec();
    }
    let first_negative = v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    let g = if first_negative { -g } else { g };
    v.iter().map(|x| x / &g).collect()
}

/// Non-negative gcd of all entries; zero for the zero vector.
pub fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

/// Coefficients `c` with `sum(c[i] * v[i]) == gcd(v)`, the gcd taken
/// non-negative. Ties are broken left to right, so the result is deterministic.
pub fn extended_gcd(v: &[BigInt]) -> (BigInt, Vec<BigInt>) {
    let mut g = BigInt::zero();
    let mut coeffs: Vec<BigInt> = Vec::with_capacity(v.len());
    for x in v {
        if x.is_zero() {
            coeffs.push(BigInt::zero());
            continue;
        }
        let e = g.extended_gcd(x);
        // e.gcd = e.x * g + e.y * x
        for c in coeffs.iter_mut() {
            *c *= &e.x;
        }
        coeffs.push(e.y);
        g = e.gcd;
    }
    if g.is_negative() {
        g = -g;
        for c in coeffs.iter_mut() {
            *c = -c.clone();
        }
    }
    (g, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_rows(rows: &[&[i64]]) -> RatMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        RatMatrix::from_int_rows(cols, &rows).unwrap()
    }

    fn rats(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from_integer(x.into())).collect()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(RatMatrix::identity(2).rank(), 2);
        assert_eq!(RatMatrix::zeros(3, 4).rank(), 0);
        assert_eq!(int_rows(&[&[1, 0, 0], &[0, 1, -1], &[1, 1, -1]]).rank(), 2);
    }

    #[test]
    fn kernel_examples() {
        assert!(RatMatrix::identity(2).kernel_basis().is_empty());
        assert_eq!(int_rows(&[&[1, -1]]).kernel_basis(), vec![ints(&[1, 1])]);
    }

    #[test]
    fn kernel_is_canonical() {
        // 2x + 4y - 6z = 0
        let k = int_rows(&[&[2, 4, -6]]).kernel_basis();
        assert_eq!(k, vec![ints(&[2, -1, 0]), ints(&[3, 0, 1])]);
        for v in &k {
            assert_eq!(content(v), BigInt::one());
        }
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(RatMatrix::identity(3).determinant().unwrap(), Rational::one());
        let m = int_rows(&[&[0, 2], &[3, 1]]);
        assert_eq!(m.determinant().unwrap(), Rational::from_integer((-6).into()));
        assert!(int_rows(&[&[1, 2]]).determinant().is_err());
    }

    #[test]
    fn span_membership() {
        let basis = int_rows(&[&[0, 1, 0], &[-1, 0, 1]]);
        assert!(in_span(&rats(&[0, 0, 0]), &basis).unwrap());
        assert!(in_span(&rats(&[0, 1, 0]), &basis).unwrap());
        assert!(!in_span(&rats(&[1, 0, 0]), &basis).unwrap());
        assert!(in_span(&rats(&[2, 5, -2]), &basis).unwrap());
        assert!(matches!(
            in_span(&rats(&[1, 0]), &basis),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn empty_basis_span() {
        let basis = RatMatrix::zeros(0, 3);
        assert!(in_span(&rats(&[0, 0, 0]), &basis).unwrap());
        assert!(!in_span(&rats(&[0, 0, 1]), &basis).unwrap());
    }

    #[test]
    fn ragged_rows_rejected() {
        let rows = vec![ints(&[1, 2]), ints(&[3])];
        assert!(RatMatrix::from_int_rows(2, &rows).is_err());
    }

    #[test]
    fn extended_gcd_combination() {
        let v = ints(&[6, 10, 15]);
        let (g, c) = extended_gcd(&v);
        assert_eq!(g, BigInt::one());
        let s: BigInt = v.iter().zip(&c).map(|(a, b)| a * b).sum();
        assert_eq!(s, BigInt::one());

        let (g, c) = extended_gcd(&ints(&[0, -4, 0]));
        assert_eq!(g, BigInt::from(4));
        assert_eq!(c, ints(&[0, -1, 0]));
    }

    #[test]
    fn primitive_part_sign() {
        assert_eq!(primitive_part(&ints(&[0, -4, 6])), ints(&[0, 2, -3]));
        assert_eq!(primitive_part(&ints(&[0, 0])), ints(&[0, 0]));
    }
}
