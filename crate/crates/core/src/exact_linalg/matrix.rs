use std::ops::{Index, IndexMut};

use num_traits::Zero;

use super::{Field, LinalgError, Rational};

/// Dense row-major matrix over an exact field.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

pub type RationalMatrix = Matrix<Rational>;
pub type RationalVector = Vec<Rational>;

impl<F: Field> Matrix<F> {
    pub fn new(rows: usize, cols: usize, data: Vec<F>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self, LinalgError> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != n_cols) {
            return Err(LinalgError::DimensionMismatch(format!(
                "row {bad} has {} entries, expected {n_cols}",
                rows[bad].len()
            )));
        }
        Ok(Self {
            rows: n_rows,
            cols: n_cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| F::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { F::one() } else { F::zero() })
    }

    pub fn diagonal(diag: &[F]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i].clone() } else { F::zero() })
    }

    /// `u vᵀ`
    pub fn outer(u: &[F], v: &[F]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i].clone() * v[j].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let columns: Vec<Vec<F>> = (0..rhs.cols).map(|j| rhs.column(j)).collect();
        Ok(Self::from_fn(self.rows, rhs.cols, |i, j| dot(self.row(i), &columns[j])))
    }

    /// `self · v`
    pub fn mul_vec(&self, v: &[F]) -> Result<Vec<F>, LinalgError> {
        if self.cols != v.len() {
            return Err(LinalgError::DimensionMismatch(format!(
                "cannot apply {}x{} to a vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    /// `vᵀ · self`
    pub fn vec_mul(&self, v: &[F]) -> Result<Vec<F>, LinalgError> {
        if self.rows != v.len() {
            return Err(LinalgError::DimensionMismatch(format!(
                "cannot apply a vector of length {} to {}x{}",
                v.len(),
                self.rows,
                self.cols
            )));
        }
        Ok((0..self.cols).map(|j| dot(v, &self.column(j))).collect())
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(&F, &F) -> F) -> Result<Self, LinalgError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, LinalgError> {
        self.zip_with(rhs, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, LinalgError> {
        self.zip_with(rhs, |a, b| a.clone() - b.clone())
    }

    pub fn scale(&self, s: &F) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn trace(&self) -> F {
        (0..self.rows.min(self.cols)).fold(F::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self[(i, j)].is_one()
                    } else {
                        self[(i, j)].is_zero()
                    }
                })
            })
    }
}

impl RationalMatrix {
    /// Floating-point image, row-major.
    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        use num_traits::ToPrimitive;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|x| x.to_f64().unwrap_or(f64::NAN))
                    .collect()
            })
            .collect()
    }
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;

    fn index(&self, (i, j): (usize, usize)) -> &F {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

/// Bilinear pairing `(u, v) = Σ u_k v_k` (no conjugation).
pub fn dot<F: Field>(u: &[F], v: &[F]) -> F {
    debug_assert_eq!(u.len(), v.len());
    F::dot(u, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_support::{q, qm};

    #[test]
    fn product_and_transpose() {
        let a = qm(&[&["1", "2"], &["3", "4"]]);
        let b = qm(&[&["0", "1"], &["1", "0"]]);
        assert_eq!(a.mul(&b).unwrap(), qm(&[&["2", "1"], &["4", "3"]]));
        assert_eq!(a.transpose(), qm(&[&["1", "3"], &["2", "4"]]));
        assert_eq!(a.vec_mul(&[q("1"), q("1")]).unwrap(), vec![q("4"), q("6")]);
        assert_eq!(a.trace(), q("5"));
    }

    #[test]
    fn shape_errors() {
        assert!(Matrix::<Rational>::new(2, 2, vec![q("1")]).is_err());
        assert!(Matrix::from_rows(vec![vec![q("1")], vec![q("1"), q("2")]]).is_err());
        let a = qm(&[&["1", "2", "3"]]);
        assert!(a.mul(&a).is_err());
    }
}
