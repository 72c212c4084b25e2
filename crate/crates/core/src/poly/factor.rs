use std::collections::BTreeMap;

use super::{Ambient, MultiDegree, MultiPoly, MAX_VARS};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::univariate::UniPoly;

/// Result of peeling linear forms in `x` alone or `y` alone off a form on
/// `P1xP1`. `product(factors) * remainder` equals the input exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearFactorization {
    /// Monic (lex-leading coefficient one) factors, `x`-factors first.
    pub factors: Vec<MultiPoly>,
    pub remainder: MultiPoly,
}

impl LinearFactorization {
    /// The scalar left over when the remainder is constant.
    pub fn unit(&self) -> Option<Scalar> {
        (self.remainder.degree() == MultiDegree::Bi(0, 0))
            .then(|| self.remainder.coeff(&[0; MAX_VARS]))
    }

    pub fn x_factors(&self) -> impl Iterator<Item = &MultiPoly> {
        self.factors
            .iter()
            .filter(|f| f.degree() == MultiDegree::Bi(1, 0))
    }

    pub fn y_factors(&self) -> impl Iterator<Item = &MultiPoly> {
        self.factors
            .iter()
            .filter(|f| f.degree() == MultiDegree::Bi(0, 1))
    }
}

/// The linear form on one factor vanishing at the point `(r0 : r1)`.
fn line_through(block: usize, r0: &Scalar, r1: &Scalar, f: &MultiPoly) -> MultiPoly {
    let v = MultiPoly::vars(Ambient::P1xP1, f.field());
    let l = &v[2 * block].scale(r1) - &v[2 * block + 1].scale(r0);
    l.normalized()
}

/// Candidate roots on one `P1` factor: roots of the first nonzero
/// coefficient form when `f` is expanded in the other factor's monomials.
fn candidates(f: &MultiPoly, block: usize) -> Result<Vec<(Scalar, Scalar)>> {
    let field = f.field();
    let i0 = 2 * block;
    let other = 2 - 2 * block;
    let mut groups: BTreeMap<(u16, u16), Vec<(u16, Scalar)>> = BTreeMap::new();
    for (e, c) in f.terms() {
        groups
            .entry((e[other], e[other + 1]))
            .or_default()
            .push((e[i0], c.clone()));
    }
    let Some(first) = groups.values().next() else {
        return Ok(Vec::new());
    };
    let deg = first.iter().map(|(k, _)| *k).max().unwrap_or(0) as usize;
    let total = match f.degree() {
        MultiDegree::Bi(a, b) => [a, b][block] as usize,
        _ => unreachable!(),
    };
    let mut coeffs = vec![field.zero(); deg + 1];
    for (k, c) in first {
        coeffs[*k as usize] = c.clone();
    }
    let uni = UniPoly::new(field, coeffs);
    let mut out: Vec<(Scalar, Scalar)> =
        uni.roots()?.into_iter().map(|t| (t, field.one())).collect();
    if deg < total {
        out.push((field.one(), field.zero()));
    }
    Ok(out)
}

/// Extracts every factor that is a linear form in `x` alone or in `y` alone.
pub fn linear_factors(f: &MultiPoly) -> Result<LinearFactorization> {
    if f.ambient() != Ambient::P1xP1 {
        return Err(Error::AmbientMismatch(format!(
            "linear factors are defined on P1xP1, not {}",
            f.ambient()
        )));
    }
    if f.is_zero() {
        return Err(Error::IdenticallyZero);
    }
    let mut rest = f.clone();
    let mut factors = Vec::new();
    for block in 0..2 {
        for (r0, r1) in candidates(&rest, block)? {
            let line = line_through(block, &r0, &r1, f);
            while let Some(q) = rest.div_exact(&line)? {
                factors.push(line.clone());
                rest = q;
            }
        }
    }
    Ok(LinearFactorization {
        factors,
        remainder: rest,
    })
}
