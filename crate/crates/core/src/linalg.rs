//! Dense exact linear algebra.
//!
//! Reduction over the rationals is fraction-free (Bareiss) on row-scaled
//! integer data and only divides once the echelon shape is known; over a prime
//! field it is plain Gauss-Jordan. Every reduction ends in reduced row echelon
//! form, which makes kernel and row-space bases canonical.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

pub type Vector = Vec<Scalar>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    field: Field,
    entries: Vec<Scalar>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: ExactMatrix,
    pub pivots: Vec<usize>,
}

impl ExactMatrix {
    pub fn new(field: Field, rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|e| e.field() != field) {
            return Err(Error::MixedField(
                field.to_string(),
                bad.field().to_string(),
            ));
        }
        Ok(Self {
            rows,
            cols,
            field,
            entries,
        })
    }

    /// Builds a matrix from rows; `cols` is needed for the zero-row case.
    pub fn from_rows(field: Field, cols: usize, rows: Vec<Vector>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has length {} (expected {cols})",
                    r.len()
                )));
            }
            entries.extend(r);
        }
        Self::new(field, n, cols, entries)
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            field,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = field.one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert_eq!(v.field(), self.field, "entry field");
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: Field, rows: usize, columns: &[Vector]) -> Result<Self> {
        let t = Self::from_rows(field, rows, columns.to_vec())?;
        Ok(t.transpose())
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            field: self.field,
            entries,
        }
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.field != other.field {
            return Err(Error::MixedField(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * other.cols + j;
                        out.entries[idx] = &out.entries[idx] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        if let Some(bad) = v.iter().find(|e| e.field() != self.field) {
            return Err(Error::MixedField(
                self.field.to_string(),
                bad.field().to_string(),
            ));
        }
        Ok((0..self.rows)
            .map(|i| dot(self.row(i), v, self.field))
            .collect())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    /// `self - lambda * Id`.
    pub fn shifted(&self, lambda: &Scalar) -> Result<ExactMatrix> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if lambda.field() != self.field {
            return Err(Error::MixedField(
                self.field.to_string(),
                lambda.field().to_string(),
            ));
        }
        let mut m = self.clone();
        for i in 0..self.rows {
            let idx = i * self.cols + i;
            m.entries[idx] = &m.entries[idx] - lambda;
        }
        Ok(m)
    }

    pub fn rref(&self) -> Rref {
        let rref = match self.field {
            Field::Rational => rref_bareiss(self),
            Field::Prime(_) => rref_gauss(self),
        };
        debug_assert!(rref.pivots.len() <= self.rows.min(self.cols));
        rref
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Determinant of a square matrix.
    pub fn determinant(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut m = self.entries.clone();
        let mut det = self.field.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[r * n + c].is_zero()) else {
                return Ok(self.field.zero());
            };
            if p != c {
                for j in 0..n {
                    m.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let pivot = m[c * n + c].clone();
            det = &det * &pivot;
            let inv = pivot.inv()?;
            for r in c + 1..n {
                let f = &m[r * n + c] * &inv;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = &m[r * n + j] - &(&f * &m[c * n + j]);
                    m[r * n + j] = v;
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<ExactMatrix> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = Self::zeros(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, self.field.one());
        }
        let r = aug.rref();
        if r.pivots.len() < n || r.pivots[n - 1] >= n {
            return Err(Error::Singular);
        }
        let mut inv = Self::zeros(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.matrix.get(i, n + j).clone());
            }
        }
        Ok(inv)
    }
}

pub(crate) fn dot(a: &[Scalar], b: &[Scalar], field: Field) -> Scalar {
    let mut acc = field.zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = &acc + &(x * y);
        }
    }
    acc
}

fn rref_gauss(m: &ExactMatrix) -> Rref {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.entries.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i * cols + c].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                a.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = a[r * cols + c].inv().expect("nonzero pivot");
        for j in c..cols {
            a[r * cols + j] = &a[r * cols + j] * &inv;
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = a[i * cols + c].clone();
            if f.is_zero() {
                continue;
            }
            for j in c..cols {
                let pv = &a[r * cols + j];
                if !pv.is_zero() {
                    a[i * cols + j] = &a[i * cols + j] - &(&f * pv);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref {
        matrix: ExactMatrix {
            rows,
            cols,
            field: m.field,
            entries: a,
        },
        pivots,
    }
}

fn rref_bareiss(m: &ExactMatrix) -> Rref {
    let (rows, cols) = (m.rows, m.cols);
    // Scale every row to integers.
    let mut a: Vec<BigInt> = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        let row = m.row(i);
        let lcm = row
            .iter()
            .map(|s| s.as_rational().expect("rational entry").denom().clone())
            .fold(BigInt::one(), |acc, d| acc.lcm(&d));
        for s in row {
            let q = s.as_rational().expect("rational entry");
            a.push(q.numer() * (&lcm / q.denom()));
        }
    }
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut k = 0;
    for c in 0..cols {
        if k == rows {
            break;
        }
        let Some(p) = (k..rows).find(|&i| !a[i * cols + c].is_zero()) else {
            continue;
        };
        if p != k {
            for j in 0..cols {
                a.swap(p * cols + j, k * cols + j);
            }
        }
        let pivot = a[k * cols + c].clone();
        for i in k + 1..rows {
            let lead = a[i * cols + c].clone();
            for j in c + 1..cols {
                let num = &pivot * &a[i * cols + j] - &lead * &a[k * cols + j];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                a[i * cols + j] = q;
            }
            a[i * cols + c] = BigInt::zero();
        }
        prev = pivot;
        pivots.push(c);
        k += 1;
    }
    // Back substitution to reduced form, now with rationals.
    let mut out: Vec<Scalar> = Vec::with_capacity(rows * cols);
    let mut q: Vec<BigRational> = a.into_iter().map(BigRational::from_integer).collect();
    for (r, &c) in pivots.iter().enumerate().rev() {
        let pinv = q[r * cols + c].recip();
        for j in c..cols {
            q[r * cols + j] = &q[r * cols + j] * &pinv;
        }
        for i in 0..r {
            let f = q[i * cols + c].clone();
            if f.is_zero() {
                continue;
            }
            for j in c..cols {
                let v = &q[i * cols + j] - &f * &q[r * cols + j];
                q[i * cols + j] = v;
            }
        }
    }
    for i in pivots.len()..rows {
        for j in 0..cols {
            q[i * cols + j] = BigRational::zero();
        }
    }
    out.extend(q.into_iter().map(Scalar::Rational));
    Rref {
        matrix: ExactMatrix {
            rows,
            cols,
            field: Field::Rational,
            entries: out,
        },
        pivots,
    }
}

/// Basis of `{v : M v = 0}`, one vector per free column in increasing order.
/// Each vector has a 1 at its free column and 0 at the other free columns.
pub fn kernel_basis(m: &ExactMatrix) -> Result<Vec<Vector>> {
    let Rref { matrix: r, pivots } = m.rref();
    let field = m.field;
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::with_capacity(m.cols - pivots.len());
    for free in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![field.zero(); m.cols];
        v[free] = field.one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -r.get(row, free);
        }
        basis.push(v);
    }
    if pivots.len() + basis.len() != m.cols {
        return Err(Error::Internal("rank + nullity != cols".into()));
    }
    for v in &basis {
        if m.mul_vec(v)?.iter().any(|x| !x.is_zero()) {
            return Err(Error::Internal("kernel vector does not annihilate".into()));
        }
    }
    Ok(basis)
}

pub fn rank(m: &ExactMatrix) -> usize {
    m.rank()
}

/// Basis of `ker(M - lambda Id)`.
pub fn eigenspace(m: &ExactMatrix, lambda: &Scalar) -> Result<Vec<Vector>> {
    kernel_basis(&m.shifted(lambda)?)
}

fn check_vectors(field: Field, len: usize, vs: &[Vector]) -> Result<()> {
    for v in vs {
        if v.len() != len {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} (expected {len})",
                v.len()
            )));
        }
        if let Some(bad) = v.iter().find(|e| e.field() != field) {
            return Err(Error::MixedField(
                field.to_string(),
                bad.field().to_string(),
            ));
        }
    }
    Ok(())
}

/// Canonical basis (nonzero rows of the RREF) of the span of `vectors`.
pub fn row_space(field: Field, len: usize, vectors: &[Vector]) -> Result<Vec<Vector>> {
    check_vectors(field, len, vectors)?;
    let m = ExactMatrix::from_rows(field, len, vectors.to_vec())?;
    let r = m.rref();
    Ok((0..r.pivots.len())
        .map(|i| r.matrix.row(i).to_vec())
        .collect())
}

pub fn span_dimension(field: Field, len: usize, vectors: &[Vector]) -> Result<usize> {
    Ok(row_space(field, len, vectors)?.len())
}

/// True iff `v` lies in the span of `basis`.
pub fn subspace_membership(v: &[Scalar], basis: &[Vector]) -> Result<bool> {
    let field = v
        .first()
        .map(Scalar::field)
        .or_else(|| basis.first().and_then(|b| b.first()).map(Scalar::field));
    let Some(field) = field else {
        // Zero-length ambient: everything is zero.
        return Ok(true);
    };
    let len = v.len();
    check_vectors(field, len, basis)?;
    check_vectors(field, len, &[v.to_vec()])?;
    let base = span_dimension(field, len, basis)?;
    let mut all = basis.to_vec();
    all.push(v.to_vec());
    Ok(span_dimension(field, len, &all)? == base)
}

/// Coordinates of `v` with respect to the (independent) vectors of `basis`,
/// or `None` if `v` is outside their span.
pub fn coordinates_in(v: &[Scalar], basis: &[Vector]) -> Result<Option<Vector>> {
    let Some(field) = v.first().map(Scalar::field) else {
        return Ok(Some(Vec::new()));
    };
    let len = v.len();
    check_vectors(field, len, basis)?;
    let k = basis.len();
    // Columns: basis vectors, then v.
    let mut cols = basis.to_vec();
    cols.push(v.to_vec());
    let m = ExactMatrix::from_columns(field, len, &cols)?;
    let r = m.rref();
    if r.pivots.contains(&k) {
        return Ok(None);
    }
    if r.pivots.len() != k {
        return Err(Error::DimensionMismatch(
            "basis vectors are linearly dependent".into(),
        ));
    }
    Ok(Some((0..k).map(|i| r.matrix.get(i, k).clone()).collect()))
}

/// Canonical basis of the intersection of two spans.
pub fn intersection(field: Field, len: usize, a: &[Vector], b: &[Vector]) -> Result<Vec<Vector>> {
    let a = row_space(field, len, a)?;
    let b = row_space(field, len, b)?;
    if a.is_empty() || b.is_empty() {
        return Ok(Vec::new());
    }
    // Solve sum x_i a_i - sum y_j b_j = 0.
    let mut cols = a.clone();
    cols.extend(b.iter().map(|v| v.iter().map(|x| -x).collect()));
    let m = ExactMatrix::from_columns(field, len, &cols)?;
    let ker = kernel_basis(&m)?;
    let vectors: Vec<Vector> = ker
        .iter()
        .map(|k| {
            let mut w = vec![field.zero(); len];
            for (coef, ai) in k.iter().zip(&a) {
                if coef.is_zero() {
                    continue;
                }
                for (wi, x) in w.iter_mut().zip(ai) {
                    *wi = &*wi + &(coef * x);
                }
            }
            w
        })
        .collect();
    row_space(field, len, &vectors)
}

/// Vectors of `whole` (in order) extending a basis of `sub` to a basis of
/// `span(sub) + span(whole)`.
pub fn complement(
    field: Field,
    len: usize,
    sub: &[Vector],
    whole: &[Vector],
) -> Result<Vec<Vector>> {
    let mut current = row_space(field, len, sub)?;
    let mut picked = Vec::new();
    for w in whole {
        let mut trial = current.clone();
        trial.push(w.clone());
        let next = row_space(field, len, &trial)?;
        if next.len() > current.len() {
            picked.push(w.clone());
            current = next;
        }
    }
    Ok(picked)
}

pub fn same_span(field: Field, len: usize, a: &[Vector], b: &[Vector]) -> Result<bool> {
    Ok(row_space(field, len, a)? == row_space(field, len, b)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(field: Field, rows: &[&[i64]]) -> ExactMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        ExactMatrix::from_rows(
            field,
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn zero_matrix_kernel_is_standard_basis() {
        let m = ExactMatrix::zeros(Field::Rational, 2, 3);
        let k = kernel_basis(&m).unwrap();
        assert_eq!(k.len(), 3);
        for (i, v) in k.iter().enumerate() {
            for (j, x) in v.iter().enumerate() {
                assert_eq!(x.is_one(), i == j);
            }
        }
    }

    #[test]
    fn identity_has_trivial_kernel_and_full_rank() {
        for field in [Field::Rational, Field::Prime(10007)] {
            assert!(kernel_basis(&ExactMatrix::identity(field, 4))
                .unwrap()
                .is_empty());
            assert_eq!(ExactMatrix::identity(field, 5).rank(), 5);
        }
    }

    #[test]
    fn repeated_row_drops_rank() {
        let m = mat(Field::Rational, &[&[1, 2, 3], &[4, 5, 6], &[1, 2, 3]]);
        assert_eq!(m.rank(), 2);
        let k = kernel_basis(&m).unwrap();
        assert_eq!(k.len(), 1);
    }

    #[test]
    fn bareiss_matches_gauss_on_small_example() {
        let rows: &[&[i64]] = &[&[2, -1, 0, 3], &[4, -2, 1, 1], &[6, -3, 1, 4]];
        let q = mat(Field::Rational, rows);
        let p = mat(Field::Prime(10007), rows);
        assert_eq!(q.rank(), 2);
        assert_eq!(p.rank(), 2);
        assert_eq!(q.rref().pivots, p.rref().pivots);
    }

    #[test]
    fn eigenspace_of_swap() {
        // Swap of the middle two coordinates.
        let f = Field::Rational;
        let m = mat(
            f,
            &[&[1, 0, 0, 0], &[0, 0, 1, 0], &[0, 1, 0, 0], &[0, 0, 0, 1]],
        );
        let minus = eigenspace(&m, &f.from_i64(-1)).unwrap();
        assert_eq!(minus.len(), 1);
        assert_eq!(minus[0], vec![f.zero(), f.from_i64(-1), f.one(), f.zero()]);
        assert_eq!(eigenspace(&m, &f.one()).unwrap().len(), 3);
        assert!(matches!(
            eigenspace(&ExactMatrix::zeros(f, 2, 3), &f.one()),
            Err(Error::NonSquare { .. })
        ));
    }

    #[test]
    fn membership_edge_cases() {
        let f = Field::Prime(101);
        let e: Vec<Vector> = (0..3)
            .map(|i| (0..3).map(|j| f.from_i64((i == j) as i64)).collect())
            .collect();
        let v = vec![f.from_i64(5), f.from_i64(7), f.from_i64(9)];
        assert!(subspace_membership(&v, &e).unwrap());
        assert!(subspace_membership(&vec![f.zero(); 3], &[]).unwrap());
        assert!(!subspace_membership(&v, &e[..2]).unwrap());
        assert!(matches!(
            subspace_membership(&v, &[vec![f.one()]]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn mixed_entries_are_rejected() {
        let entries = vec![Field::Rational.one(), Field::Prime(7).one()];
        assert!(matches!(
            ExactMatrix::new(Field::Rational, 1, 2, entries),
            Err(Error::MixedField(_, _))
        ));
    }

    #[test]
    fn intersection_and_complement() {
        let f = Field::Rational;
        let v = |xs: &[i64]| xs.iter().map(|&x| f.from_i64(x)).collect::<Vector>();
        let a = vec![v(&[1, 0, 0]), v(&[0, 1, 0])];
        let b = vec![v(&[0, 1, 0]), v(&[0, 0, 1])];
        let i = intersection(f, 3, &a, &b).unwrap();
        assert_eq!(i, vec![v(&[0, 1, 0])]);
        let c = complement(f, 3, &a, &b).unwrap();
        assert_eq!(c, vec![v(&[0, 0, 1])]);
    }

    #[test]
    fn inverse_and_determinant() {
        let f = Field::Rational;
        let m = mat(f, &[&[1, 0], &[1, -1]]);
        assert_eq!(m.determinant().unwrap(), f.from_i64(-1));
        assert_eq!(m.inverse().unwrap(), m);
        assert!(matches!(
            mat(f, &[&[1, 2], &[2, 4]]).inverse(),
            Err(Error::Singular)
        ));
    }
}
