//! Dense univariate polynomials and root finding in the base field.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

/// Prime fields up to this size are searched exhaustively.
const SCAN_LIMIT: u64 = 1 << 17;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    field: Field,
    /// `coeffs[i]` multiplies `x^i`; no trailing zeros.
    coeffs: Vec<Scalar>,
}

impl UniPoly {
    pub fn new(field: Field, mut coeffs: Vec<Scalar>) -> Self {
        debug_assert!(coeffs.iter().all(|c| c.field() == field));
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Self { field, coeffs }
    }

    pub fn from_i64(field: Field, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: Field) -> Self {
        Self::new(field, Vec::new())
    }

    pub fn x(field: Field) -> Self {
        Self::new(field, vec![field.zero(), field.one()])
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = self.field.zero();
        UniPoly::new(
            self.field,
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.scale(&-self.field.one()))
    }

    pub fn scale(&self, s: &Scalar) -> UniPoly {
        UniPoly::new(self.field, self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        UniPoly::new(self.field, out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = d
            .leading()
            .unwrap()
            .inv()
            .expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        let mut quo = vec![self.field.zero(); rem.len().saturating_sub(dd).max(1)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let f = rem.last().unwrap() * &lead_inv;
            for (i, c) in d.coeffs.iter().enumerate() {
                rem[k + i] = &rem[k + i] - &(&f * c);
            }
            quo[k] = f;
            while rem.last().is_some_and(Scalar::is_zero) {
                rem.pop();
            }
        }
        (UniPoly::new(self.field, quo), UniPoly::new(self.field, rem))
    }

    pub fn monic(&self) -> UniPoly {
        match self.leading() {
            None => self.clone(),
            Some(l) => self.scale(&l.inv().expect("nonzero")),
        }
    }

    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    fn pow_mod(&self, mut e: u64, m: &UniPoly) -> UniPoly {
        let mut base = self.div_rem(m).1;
        let mut acc = UniPoly::new(self.field, vec![self.field.one()]);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).div_rem(m).1;
            }
            base = base.mul(&base).div_rem(m).1;
            e >>= 1;
        }
        acc
    }

    /// Distinct roots lying in the base field, sorted by representative (prime
    /// fields) or by value (rationals).
    pub fn roots(&self) -> Result<Vec<Scalar>> {
        if self.is_zero() {
            return Err(Error::Internal("roots of the zero polynomial".into()));
        }
        match self.field {
            Field::Prime(p) if p <= SCAN_LIMIT => Ok(self
                .field
                .elements()
                .expect("prime field")
                .filter(|x| self.eval(x).is_zero())
                .collect()),
            Field::Prime(p) => {
                let x = UniPoly::x(self.field);
                let xp = x.pow_mod(p, self);
                let g = self.gcd(&xp.sub(&x));
                let mut roots = Vec::new();
                split_linear(&g, p, 1, &mut roots);
                roots.sort_by_key(|r| r.residue());
                Ok(roots)
            }
            Field::Rational => rational_roots(self),
        }
    }
}

/// Splits a product of distinct linear factors over GF(p).
fn split_linear(g: &UniPoly, p: u64, mut shift: i64, out: &mut Vec<Scalar>) {
    match g.degree() {
        None | Some(0) => {}
        Some(1) => {
            let c = g.monic();
            out.push(-&c.coeffs[0]);
        }
        Some(_) => loop {
            let field = g.field;
            let h = UniPoly::new(field, vec![field.from_i64(shift), field.one()]);
            shift += 1;
            let t = h
                .pow_mod((p - 1) / 2, g)
                .sub(&UniPoly::from_i64(field, &[1]));
            let d = g.gcd(&t);
            let dd = d.degree().unwrap_or(0);
            if dd > 0 && Some(dd) < g.degree() {
                let other = g.div_rem(&d).0;
                split_linear(&d, p, shift, out);
                split_linear(&other, p, shift, out);
                return;
            }
        },
    }
}

fn divisors(n: u128) -> Vec<u128> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u128;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn rational_roots(f: &UniPoly) -> Result<Vec<Scalar>> {
    let q = Field::Rational;
    let lcm = f
        .coeffs
        .iter()
        .map(|c| c.as_rational().unwrap().denom().clone())
        .fold(BigInt::one(), |a, d| a.lcm(&d));
    let ints: Vec<BigInt> = f
        .coeffs
        .iter()
        .map(|c| {
            let r = c.as_rational().unwrap();
            r.numer() * (&lcm / r.denom())
        })
        .collect();
    let mut roots = Vec::new();
    let low = ints.iter().position(|c| !c.is_zero()).unwrap();
    if low > 0 {
        roots.push(q.zero());
    }
    let ints = &ints[low..];
    if ints.len() > 1 {
        let to_u128 = |n: &BigInt| {
            n.abs()
                .to_u128()
                .filter(|&v| v < 1u128 << 60)
                .ok_or_else(|| {
                    Error::Internal("coefficient too large for rational root test".into())
                })
        };
        let c0 = to_u128(&ints[0])?;
        let cn = to_u128(ints.last().unwrap())?;
        let mut seen = std::collections::BTreeSet::new();
        for a in divisors(c0) {
            for b in divisors(cn) {
                for sign in [1i64, -1] {
                    let cand =
                        q.from_bigint(&(BigInt::from(a) * sign)) / q.from_bigint(&BigInt::from(b));
                    if f.eval(&cand).is_zero() {
                        seen.insert(cand.as_rational().unwrap().clone());
                    }
                }
            }
        }
        roots.extend(seen.into_iter().map(Scalar::Rational));
    }
    roots.sort_by(|a, b| a.as_rational().cmp(&b.as_rational()));
    Ok(roots)
}
