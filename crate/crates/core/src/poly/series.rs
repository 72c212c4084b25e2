use crate::field::{Field, Scalar};

/// Power series in one variable truncated after `s^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl Series {
    pub fn zero(field: Field, n: usize) -> Self {
        Self {
            field,
            coeffs: vec![field.zero(); n + 1],
        }
    }

    pub fn constant(c: Scalar, n: usize) -> Self {
        let field = c.field();
        let mut s = Self::zero(field, n);
        s.coeffs[0] = c;
        s
    }

    pub fn from_coeffs(field: Field, n: usize, coeffs: &[Scalar]) -> Self {
        let mut s = Self::zero(field, n);
        for (i, c) in coeffs.iter().take(n + 1).enumerate() {
            s.coeffs[i] = c.clone();
        }
        s
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Scalar {
        &self.coeffs[i]
    }

    pub fn set(&mut self, i: usize, v: Scalar) {
        self.coeffs[i] = v;
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, other: &Series) -> Series {
        Series {
            field: self.field,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Series {
        Series {
            field: self.field,
            coeffs: self.coeffs.iter().map(|a| a * s).collect(),
        }
    }

    pub fn mul(&self, other: &Series) -> Series {
        let n = self.truncation().min(other.truncation());
        let mut out = Series::zero(self.field, n);
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                out.coeffs[i + j] = &out.coeffs[i + j] + &(a * b);
            }
        }
        out
    }

    /// Powers `self^0 ..= self^k`.
    pub fn powers(&self, k: usize) -> Vec<Series> {
        let mut out = Vec::with_capacity(k + 1);
        out.push(Series::constant(self.field.one(), self.truncation()));
        for i in 1..=k {
            let next = out[i - 1].mul(self);
            out.push(next);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_series_inverse() {
        let q = Field::Rational;
        let n = 6;
        let one_minus_s = Series::from_coeffs(q, n, &[q.one(), -q.one()]);
        let geo = Series::from_coeffs(q, n, &vec![q.one(); n + 1]);
        let prod = one_minus_s.mul(&geo);
        assert_eq!(prod, Series::constant(q.one(), n));
        assert_eq!(prod.valuation(), Some(0));
        let sq = Series::from_coeffs(q, n, &[q.zero(), q.one()]).powers(3);
        assert_eq!(sq[3].valuation(), Some(3));
    }
}
