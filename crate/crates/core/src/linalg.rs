//! Dense row-major matrices and a symmetric eigensolver.
//!
//! The eigensolver is the classic Householder tridiagonalization followed by
//! the implicit QL iteration with Wilkinson-type shifts (Martin, Reinsch and
//! Wilkinson's `tred2`/`tql2`), written against the generic [`Scalar`].

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Iteration cap per eigenvalue in the QL sweep.
const QL_MAX_ITER: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T> {
    order: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn zeros(order: usize) -> Result<Self> {
        let len = order
            .checked_mul(order)
            .ok_or_else(|| Error::Resource(format!("matrix order {order} overflows")))?;
        let mut data = Vec::new();
        data.try_reserve_exact(len)
            .map_err(|e| Error::Resource(format!("cannot allocate {order}x{order} matrix: {e}")))?;
        data.resize(len, T::zero());
        Ok(Self { order, data })
    }

    pub fn identity(order: usize) -> Result<Self> {
        let mut m = Self::zeros(order)?;
        for i in 0..order {
            m[(i, i)] = T::one();
        }
        Ok(m)
    }

    pub fn from_diagonal(diag: &[T]) -> Result<Self> {
        let mut m = Self::zeros(diag.len())?;
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        Ok(m)
    }

    /// Builds from row slices; every row must have the same length as the
    /// number of rows.
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let order = rows.len();
        let mut m = Self::zeros(order)?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(Error::InvalidArgument(format!(
                    "row {i} has length {}, expected {order}",
                    row.len()
                )));
            }
            m.data[i * order..(i + 1) * order].copy_from_slice(row);
        }
        Ok(m)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.order..(i + 1) * self.order]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.order).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.order, "vector length mismatch");
        (0..self.order)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(T::zero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    /// `xᵀ A x` over the leading `x.len()` rows and columns.
    pub fn quadratic_form(&self, x: &[T]) -> T {
        let k = x.len().min(self.order);
        let mut total = T::zero();
        for i in 0..k {
            let row = &self.row(i)[..k];
            let inner = row
                .iter()
                .zip(&x[..k])
                .fold(T::zero(), |acc, (&a, &b)| acc + a * b);
            total = total + x[i] * inner;
        }
        total
    }

    pub fn frobenius_norm(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |acc, &v| acc + v * v)
            .sqrt()
    }

    pub fn trace(&self) -> T {
        (0..self.order).fold(T::zero(), |acc, i| acc + self[(i, i)])
    }

    /// Leading principal submatrix of the given order.
    pub fn leading(&self, order: usize) -> Result<Self> {
        let order = order.min(self.order);
        let mut m = Self::zeros(order)?;
        for i in 0..order {
            m.data[i * order..(i + 1) * order].copy_from_slice(&self.row(i)[..order]);
        }
        Ok(m)
    }

    /// Column `j` as an owned vector.
    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.order).map(|i| self[(i, j)]).collect()
    }
}

impl<T> std::ops::Index<(usize, usize)> for DenseMatrix<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.order + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for DenseMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.order + j]
    }
}

/// Eigenvalues in ascending order and, if requested, the matching
/// orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct SymmetricEigen<T> {
    pub values: Vec<T>,
    pub vectors: Option<DenseMatrix<T>>,
}

impl<T: Scalar> SymmetricEigen<T> {
    /// `‖A v - λ v‖₂` for pair `index`; `None` without eigenvectors.
    pub fn residual(&self, a: &DenseMatrix<T>, index: usize) -> Option<T> {
        let vectors = self.vectors.as_ref()?;
        let v = vectors.column(index);
        let av = a.mul_vec(&v);
        let lambda = self.values[index];
        Some(
            av.iter()
                .zip(&v)
                .fold(T::zero(), |acc, (&x, &y)| {
                    let d = x - lambda * y;
                    acc + d * d
                })
                .sqrt(),
        )
    }
}

/// Full eigen-decomposition of a real symmetric matrix. Only the lower
/// triangle is read.
pub fn symmetric_eigen<T: Scalar>(
    a: &DenseMatrix<T>,
    want_vectors: bool,
) -> Result<SymmetricEigen<T>> {
    let n = a.order();
    if n == 0 {
        return Ok(SymmetricEigen {
            values: Vec::new(),
            vectors: want_vectors.then(|| DenseMatrix {
                order: 0,
                data: Vec::new(),
            }),
        });
    }
    if a.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(
            "matrix has non-finite entries".into(),
        ));
    }
    let mut v = a.clone();
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    tridiagonalize(&mut v, &mut d, &mut e, want_vectors);
    tql(&mut d, &mut e, want_vectors.then_some(&mut v))?;

    // sort ascending, carrying columns along
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).expect("finite eigenvalues"));
    let values = order.iter().map(|&i| d[i]).collect();
    let vectors = if want_vectors {
        let mut sorted = DenseMatrix::zeros(n)?;
        for (new_col, &old_col) in order.iter().enumerate() {
            for r in 0..n {
                sorted[(r, new_col)] = v[(r, old_col)];
            }
        }
        Some(sorted)
    } else {
        None
    };
    Ok(SymmetricEigen { values, vectors })
}

/// The `k` smallest eigenvalues, ascending.
pub fn lowest_eigenvalues<T: Scalar>(a: &DenseMatrix<T>, k: usize) -> Result<Vec<T>> {
    if k == 0 || k > a.order() {
        return Err(Error::InvalidArgument(format!(
            "k = {k} must be in 1..={}",
            a.order()
        )));
    }
    let mut eig = symmetric_eigen(a, false)?;
    eig.values.truncate(k);
    Ok(eig.values)
}

/// Householder reduction to tridiagonal form. On return `d` holds the
/// diagonal and `e[1..]` the subdiagonal; with `accumulate` the matrix holds
/// the orthogonal transformation.
fn tridiagonalize<T: Scalar>(v: &mut DenseMatrix<T>, d: &mut [T], e: &mut [T], accumulate: bool) {
    let n = v.order();
    let zero = T::zero();
    for j in 0..n {
        d[j] = v[(n - 1, j)];
    }

    for i in (1..n).rev() {
        let mut scale = zero;
        let mut h = zero;
        for &dk in d.iter().take(i) {
            scale = scale + dk.abs();
        }
        if scale == zero {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[(i - 1, j)];
                v[(i, j)] = zero;
                v[(j, i)] = zero;
            }
        } else {
            for dk in d.iter_mut().take(i) {
                *dk = *dk / scale;
                h = h + *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > zero {
                g = -g;
            }
            e[i] = scale * g;
            h = h - f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = zero;
            }

            for j in 0..i {
                f = d[j];
                v[(j, i)] = f;
                g = e[j] + v[(j, j)] * f;
                for k in (j + 1)..i {
                    g = g + v[(k, j)] * d[k];
                    e[k] = e[k] + v[(k, j)] * f;
                }
                e[j] = g;
            }
            f = zero;
            for j in 0..i {
                e[j] = e[j] / h;
                f = f + e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] = e[j] - hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[(k, j)] = v[(k, j)] - (f * e[k] + g * d[k]);
                }
                d[j] = v[(i - 1, j)];
                v[(i, j)] = zero;
            }
        }
        d[i] = h;
    }

    if !accumulate {
        for (i, di) in d.iter_mut().enumerate() {
            *di = v[(i, i)];
        }
        e[0] = zero;
        return;
    }

    for i in 0..n - 1 {
        v[(n - 1, i)] = v[(i, i)];
        v[(i, i)] = T::one();
        let h = d[i + 1];
        if h != zero {
            for k in 0..=i {
                d[k] = v[(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = zero;
                for k in 0..=i {
                    g = g + v[(k, i + 1)] * v[(k, j)];
                }
                for k in 0..=i {
                    v[(k, j)] = v[(k, j)] - g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[(k, i + 1)] = zero;
        }
    }
    for j in 0..n {
        d[j] = v[(n - 1, j)];
        v[(n - 1, j)] = zero;
    }
    v[(n - 1, n - 1)] = T::one();
    e[0] = zero;
}

/// Implicit QL on the tridiagonal `(d, e)`; rotations are applied to `v`
/// when given.
fn tql<T: Scalar>(d: &mut [T], e: &mut [T], mut v: Option<&mut DenseMatrix<T>>) -> Result<()> {
    let n = d.len();
    let zero = T::zero();
    let one = T::one();
    let two = T::lit(2.0);
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = zero;

    let mut f = zero;
    let mut tst1 = zero;
    let eps = T::epsilon();
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }

        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > QL_MAX_ITER {
                    return Err(Error::NoConvergence {
                        index: l,
                        iterations: QL_MAX_ITER,
                        order: n,
                    });
                }

                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (two * e[l]);
                let mut r = p.hypot(one);
                if p < zero {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di = *di - h;
                }
                f = f + h;

                p = d[m];
                let mut c = one;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = zero;
                let mut s2 = zero;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(v) = v.as_deref_mut() {
                        for k in 0..n {
                            let h = v[(k, i + 1)];
                            v[(k, i + 1)] = s * v[(k, i)] + c * h;
                            v[(k, i)] = c * v[(k, i)] - s * h;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] = d[l] + f;
        e[l] = zero;
    }
    Ok(())
}
