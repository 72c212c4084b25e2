//! Sparse forms on the three ambient spaces (and their affine charts).
//!
//! Variables: `P1xP1` has `x0, x1, y0, y1` with bigrading; `P2` and `P3` have
//! `x0..xn` with total degree; `Affine(n)` is an ungraded ring used for chart
//! computations.

mod action;
mod factor;
mod jet;
mod series;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::Vector;

pub use action::Action;
pub use factor::{linear_factors, LinearFactorization};
pub use jet::{center_point, vanishing_order, CurveJet, Order, DEFAULT_TRUNCATION};
pub use series::Series;

pub const MAX_VARS: usize = 4;

/// Exponent tuple; entries past the ambient's variable count are zero.
pub type Exponent = [u16; MAX_VARS];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ambient {
    P1xP1,
    P2,
    P3,
    Affine(usize),
}

impl Ambient {
    pub fn nvars(&self) -> usize {
        match self {
            Ambient::P1xP1 | Ambient::P3 => 4,
            Ambient::P2 => 3,
            Ambient::Affine(n) => *n,
        }
    }

    pub fn var_name(&self, i: usize) -> String {
        match self {
            Ambient::P1xP1 => ["x0", "x1", "y0", "y1"][i].to_string(),
            Ambient::P2 | Ambient::P3 => format!("x{i}"),
            Ambient::Affine(_) => format!("z{i}"),
        }
    }

    pub fn is_projective(&self) -> bool {
        !matches!(self, Ambient::Affine(_))
    }

    /// The grading of a single exponent tuple.
    pub fn degree_of(&self, e: &Exponent) -> MultiDegree {
        match self {
            Ambient::P1xP1 => MultiDegree::Bi((e[0] + e[1]) as u32, (e[2] + e[3]) as u32),
            Ambient::P2 | Ambient::P3 => {
                MultiDegree::Total(e[..self.nvars()].iter().map(|&x| x as u32).sum())
            }
            Ambient::Affine(_) => MultiDegree::Ungraded,
        }
    }

    /// Degree of a single variable.
    pub fn var_degree(&self, i: usize) -> MultiDegree {
        let mut e = [0; MAX_VARS];
        e[i] = 1;
        self.degree_of(&e)
    }

    pub fn zero_degree(&self) -> MultiDegree {
        self.degree_of(&[0; MAX_VARS])
    }
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ambient::P1xP1 => write!(f, "P1xP1"),
            Ambient::P2 => write!(f, "P2"),
            Ambient::P3 => write!(f, "P3"),
            Ambient::Affine(n) => write!(f, "A{n}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MultiDegree {
    Bi(u32, u32),
    Total(u32),
    Ungraded,
}

impl MultiDegree {
    /// Bidegree from signed input.
    pub fn try_bi(a: i64, b: i64) -> Result<Self> {
        for d in [a, b] {
            if d < 0 {
                return Err(Error::NegativeDegree(d));
            }
        }
        Ok(MultiDegree::Bi(a as u32, b as u32))
    }

    pub fn try_total(d: i64) -> Result<Self> {
        if d < 0 {
            return Err(Error::NegativeDegree(d));
        }
        Ok(MultiDegree::Total(d as u32))
    }

    pub fn plus(&self, other: &MultiDegree) -> Result<MultiDegree> {
        match (self, other) {
            (MultiDegree::Bi(a, b), MultiDegree::Bi(c, d)) => Ok(MultiDegree::Bi(a + c, b + d)),
            (MultiDegree::Total(a), MultiDegree::Total(b)) => Ok(MultiDegree::Total(a + b)),
            (MultiDegree::Ungraded, MultiDegree::Ungraded) => Ok(MultiDegree::Ungraded),
            _ => Err(Error::DegreeMismatch(format!("{self:?} + {other:?}"))),
        }
    }

    /// `self - other`, if nonnegative.
    pub fn minus(&self, other: &MultiDegree) -> Option<MultiDegree> {
        match (self, other) {
            (MultiDegree::Bi(a, b), MultiDegree::Bi(c, d)) => {
                Some(MultiDegree::Bi(a.checked_sub(*c)?, b.checked_sub(*d)?))
            }
            (MultiDegree::Total(a), MultiDegree::Total(b)) => {
                Some(MultiDegree::Total(a.checked_sub(*b)?))
            }
            (MultiDegree::Ungraded, MultiDegree::Ungraded) => Some(MultiDegree::Ungraded),
            _ => None,
        }
    }

    pub fn swapped(&self) -> MultiDegree {
        match self {
            MultiDegree::Bi(a, b) => MultiDegree::Bi(*b, *a),
            d => *d,
        }
    }
}

impl Serialize for MultiDegree {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            MultiDegree::Bi(a, b) => [*a, *b].serialize(s),
            MultiDegree::Total(d) => d.serialize(s),
            MultiDegree::Ungraded => s.serialize_none(),
        }
    }
}

impl<'de> Deserialize<'de> for MultiDegree {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Bi([u32; 2]),
            Total(u32),
            Ungraded(()),
        }
        Ok(match Repr::deserialize(d)? {
            Repr::Bi([a, b]) => MultiDegree::Bi(a, b),
            Repr::Total(t) => MultiDegree::Total(t),
            Repr::Ungraded(()) => MultiDegree::Ungraded,
        })
    }
}

/// Monomials of the given multidegree in decreasing lexicographic order of the
/// exponent tuple.
pub fn monomial_basis(ambient: Ambient, degree: MultiDegree) -> Result<Vec<Exponent>> {
    match (ambient, degree) {
        (Ambient::P1xP1, MultiDegree::Bi(a, b)) => {
            let mut out = Vec::with_capacity(((a + 1) * (b + 1)) as usize);
            for i in (0..=a).rev() {
                for j in (0..=b).rev() {
                    out.push([i as u16, (a - i) as u16, j as u16, (b - j) as u16]);
                }
            }
            Ok(out)
        }
        (Ambient::P2 | Ambient::P3, MultiDegree::Total(d)) => {
            let n = ambient.nvars();
            let mut out = Vec::new();
            let mut cur = [0u16; MAX_VARS];
            fill_total(&mut out, &mut cur, 0, n, d);
            Ok(out)
        }
        _ => Err(Error::DegreeMismatch(format!(
            "{degree:?} is not a grading of {ambient}"
        ))),
    }
}

fn fill_total(out: &mut Vec<Exponent>, cur: &mut Exponent, i: usize, n: usize, left: u32) {
    if i == n - 1 {
        cur[i] = left as u16;
        out.push(*cur);
        return;
    }
    for k in (0..=left).rev() {
        cur[i] = k as u16;
        fill_total(out, cur, i + 1, n, left - k);
    }
    cur[i] = 0;
}

/// Sparse polynomial with a declared multidegree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    ambient: Ambient,
    degree: MultiDegree,
    field: Field,
    terms: BTreeMap<Exponent, Scalar>,
}

impl MultiPoly {
    pub fn zero(ambient: Ambient, degree: MultiDegree, field: Field) -> Self {
        Self {
            ambient,
            degree,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ambient: Ambient, field: Field, c: Scalar) -> Self {
        let mut p = Self::zero(ambient, ambient.zero_degree(), field);
        if !c.is_zero() {
            p.terms.insert([0; MAX_VARS], c);
        }
        p
    }

    pub fn one(ambient: Ambient, field: Field) -> Self {
        Self::constant(ambient, field, field.one())
    }

    pub fn var(ambient: Ambient, field: Field, i: usize) -> Self {
        assert!(i < ambient.nvars(), "variable index");
        let mut e = [0; MAX_VARS];
        e[i] = 1;
        Self::monomial(ambient, field, e, field.one())
    }

    /// All variables of the ambient, in order.
    pub fn vars(ambient: Ambient, field: Field) -> Vec<MultiPoly> {
        (0..ambient.nvars())
            .map(|i| Self::var(ambient, field, i))
            .collect()
    }

    pub fn monomial(ambient: Ambient, field: Field, e: Exponent, c: Scalar) -> Self {
        let mut p = Self::zero(ambient, ambient.degree_of(&e), field);
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    /// Builds a polynomial with an explicit multidegree, merging repeated
    /// exponents and dropping zero coefficients.
    pub fn from_terms(
        ambient: Ambient,
        degree: MultiDegree,
        field: Field,
        terms: impl IntoIterator<Item = (Exponent, Scalar)>,
    ) -> Result<Self> {
        let mut p = Self::zero(ambient, degree, field);
        for (e, c) in terms {
            if c.field() != field {
                return Err(Error::MixedField(field.to_string(), c.field().to_string()));
            }
            if e[ambient.nvars()..].iter().any(|&x| x != 0) {
                return Err(Error::AmbientMismatch(format!(
                    "exponent {e:?} uses variables outside {ambient}"
                )));
            }
            if ambient.degree_of(&e) != degree {
                return Err(Error::DegreeMismatch(format!(
                    "term {e:?} does not have degree {degree:?}"
                )));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Exponent, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v = &*v + &c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn degree(&self) -> MultiDegree {
        self.degree
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &Exponent) -> Scalar {
        self.terms
            .get(e)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Largest exponent of each variable.
    pub fn max_exponents(&self) -> Exponent {
        let mut m = [0; MAX_VARS];
        for e in self.terms.keys() {
            for i in 0..MAX_VARS {
                m[i] = m[i].max(e[i]);
            }
        }
        m
    }

    fn compatible(&self, other: &MultiPoly) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(format!(
                "{} vs {}",
                self.ambient, other.ambient
            )));
        }
        if self.field != other.field {
            return Err(Error::MixedField(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.compatible(other)?;
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(format!(
                "{:?} + {:?}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.compatible(other)?;
        let degree = self.degree.plus(&other.degree)?;
        let mut out = MultiPoly::zero(self.ambient, degree, self.field);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let mut e = [0; MAX_VARS];
                for i in 0..MAX_VARS {
                    e[i] = e1[i] + e2[i];
                }
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    fn neg_ref(&self) -> MultiPoly {
        self.scale(&-self.field.one())
    }

    pub fn scale(&self, s: &Scalar) -> MultiPoly {
        let mut out = MultiPoly::zero(self.ambient, self.degree, self.field);
        if s.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(e, c)| (*e, c * s)).collect();
        out
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(self.ambient, self.field);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluation at a point given by all coordinates.
    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.ambient.nvars(), "point dimension");
        let mut acc = self.field.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, x) in point.iter().enumerate() {
                if e[i] > 0 {
                    t = &t * &x.pow(e[i] as u64);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> MultiPoly {
        let degree = self
            .degree
            .minus(&self.ambient.var_degree(i))
            .unwrap_or(self.degree);
        let mut out = MultiPoly::zero(self.ambient, degree, self.field);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = *e;
            e2[i] -= 1;
            out.add_term(e2, c * &self.field.from_i64(e[i] as i64));
        }
        out
    }

    pub fn gradient(&self) -> Vec<MultiPoly> {
        (0..self.ambient.nvars()).map(|i| self.partial(i)).collect()
    }

    /// Coefficients against an ordered monomial list.
    pub fn coefficient_vector(&self, monomials: &[Exponent]) -> Result<Vector> {
        if let Some(e) = self.terms.keys().find(|e| !monomials.contains(e)) {
            return Err(Error::DegreeMismatch(format!(
                "term {e:?} is outside the monomial list"
            )));
        }
        Ok(monomials.iter().map(|e| self.coeff(e)).collect())
    }

    pub fn from_coefficients(
        ambient: Ambient,
        degree: MultiDegree,
        field: Field,
        monomials: &[Exponent],
        coeffs: &[Scalar],
    ) -> Result<MultiPoly> {
        if monomials.len() != coeffs.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} monomials, {} coefficients",
                monomials.len(),
                coeffs.len()
            )));
        }
        MultiPoly::from_terms(
            ambient,
            degree,
            field,
            monomials.iter().copied().zip(coeffs.iter().cloned()),
        )
    }

    /// Leading term in decreasing lexicographic order.
    pub fn lex_leading(&self) -> Option<(&Exponent, &Scalar)> {
        self.terms.iter().next_back()
    }

    /// The scalar multiple whose lex-leading coefficient is 1.
    pub fn normalized(&self) -> MultiPoly {
        match self.lex_leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero")),
        }
    }

    /// True iff `other = lambda * self` for some nonzero scalar.
    pub fn is_proportional(&self, other: &MultiPoly) -> bool {
        !self.is_zero() && !other.is_zero() && self.normalized() == other.normalized()
    }

    /// Scalar `lambda` with `other = lambda * self`, if any.
    pub fn ratio_to(&self, other: &MultiPoly) -> Option<Scalar> {
        if !self.is_proportional(other) {
            return None;
        }
        let (e, c) = self.lex_leading()?;
        Some(&other.coeff(e) / c)
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder.
    pub fn div_exact(&self, divisor: &MultiPoly) -> Result<Option<MultiPoly>> {
        self.compatible(divisor)?;
        let Some((lead_e, lead_c)) = divisor.lex_leading() else {
            return Err(Error::DivisionByZero);
        };
        let lead_inv = lead_c.inv()?;
        let Some(qdeg) = self.degree.minus(&divisor.degree) else {
            return Ok(if self.is_zero() {
                Some(MultiPoly::zero(
                    self.ambient,
                    self.ambient.zero_degree(),
                    self.field,
                ))
            } else {
                None
            });
        };
        let mut rem = self.clone();
        let mut quo = MultiPoly::zero(self.ambient, qdeg, self.field);
        while let Some((e, c)) = rem.lex_leading().map(|(e, c)| (*e, c.clone())) {
            let mut q = [0u16; MAX_VARS];
            for i in 0..MAX_VARS {
                if e[i] < lead_e[i] {
                    return Ok(None);
                }
                q[i] = e[i] - lead_e[i];
            }
            let coef = &c * &lead_inv;
            let step = MultiPoly::monomial(self.ambient, self.field, q, coef.clone());
            quo.add_term(q, coef);
            let sub = &step * divisor;
            for (se, sc) in sub.terms {
                rem.add_term(se, -sc);
            }
        }
        Ok(Some(quo))
    }

    /// Restriction to an affine chart.
    ///
    /// For `P2`/`P3` the chart is `x_i = 1` and the remaining variables keep
    /// their order. For `P1xP1` the chart `(a, b)` sets `x_a = y_b = 1` and the
    /// affine variables are `(x_{1-a}, y_{1-b})`.
    pub fn dehomogenize(&self, chart: &Chart) -> Result<MultiPoly> {
        let keep = chart.affine_vars(self.ambient)?;
        let n = keep.len();
        let mut out = MultiPoly::zero(Ambient::Affine(n), MultiDegree::Ungraded, self.field);
        for (e, c) in &self.terms {
            let mut a = [0u16; MAX_VARS];
            for (j, &i) in keep.iter().enumerate() {
                a[j] = e[i];
            }
            out.add_term(a, c.clone());
        }
        Ok(out)
    }

    /// The same polynomial viewed in an ungraded ring with the same variables.
    pub fn ungraded(&self) -> MultiPoly {
        MultiPoly {
            ambient: Ambient::Affine(self.ambient.nvars()),
            degree: MultiDegree::Ungraded,
            field: self.field,
            terms: self.terms.clone(),
        }
    }

    /// Total degree of the highest-degree term.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as u32).sum())
            .max()
    }

    /// Sum of polynomials in the same space (by ambient, degree, field).
    pub fn sum<'a>(
        ambient: Ambient,
        degree: MultiDegree,
        field: Field,
        items: impl IntoIterator<Item = &'a MultiPoly>,
    ) -> Result<MultiPoly> {
        let mut acc = MultiPoly::zero(ambient, degree, field);
        for p in items {
            acc = acc.try_add(p)?;
        }
        Ok(acc)
    }

    /// Linear combination `sum c_i p_i` of same-degree polynomials.
    pub fn combination(coeffs: &[Scalar], polys: &[MultiPoly]) -> Result<MultiPoly> {
        let first = polys
            .first()
            .ok_or_else(|| Error::DimensionMismatch("empty combination".into()))?;
        let mut acc = MultiPoly::zero(first.ambient, first.degree, first.field);
        for (c, p) in coeffs.iter().zip(polys) {
            acc = acc.try_add(&p.scale(c))?;
        }
        Ok(acc)
    }
}

/// An affine chart of a projective ambient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Chart {
    /// `x_i = 1` on `P2` or `P3`.
    Single(usize),
    /// `x_a = 1, y_b = 1` on `P1xP1`.
    Pair(usize, usize),
}

impl Chart {
    /// Indices of the homogeneous variables that stay free in the chart.
    pub fn affine_vars(&self, ambient: Ambient) -> Result<Vec<usize>> {
        match (self, ambient) {
            (Chart::Single(i), Ambient::P2 | Ambient::P3) if *i < ambient.nvars() => {
                Ok((0..ambient.nvars()).filter(|j| j != i).collect())
            }
            (Chart::Pair(a, b), Ambient::P1xP1) if *a < 2 && *b < 2 => Ok(vec![1 - a, 3 - b]),
            _ => Err(Error::AmbientMismatch(format!(
                "chart {self:?} on {ambient}"
            ))),
        }
    }

    /// Homogeneous variables set to one in the chart.
    pub fn unit_vars(&self) -> Vec<usize> {
        match self {
            Chart::Single(i) => vec![*i],
            Chart::Pair(a, b) => vec![*a, 2 + b],
        }
    }

    /// Every chart of the ambient.
    pub fn all(ambient: Ambient) -> Vec<Chart> {
        match ambient {
            Ambient::P1xP1 => vec![
                Chart::Pair(0, 0),
                Chart::Pair(0, 1),
                Chart::Pair(1, 0),
                Chart::Pair(1, 1),
            ],
            Ambient::P2 | Ambient::P3 => (0..ambient.nvars()).map(Chart::Single).collect(),
            Ambient::Affine(_) => Vec::new(),
        }
    }

    /// First chart in which the point has nonzero unit coordinates.
    pub fn for_point(ambient: Ambient, point: &[Scalar]) -> Result<Chart> {
        match ambient {
            Ambient::P1xP1 => {
                let a = (0..2).find(|&i| !point[i].is_zero());
                let b = (0..2).find(|&i| !point[2 + i].is_zero());
                match (a, b) {
                    (Some(a), Some(b)) => Ok(Chart::Pair(a, b)),
                    _ => Err(Error::DimensionMismatch("zero coordinate block".into())),
                }
            }
            Ambient::P2 | Ambient::P3 => point
                .iter()
                .position(|x| !x.is_zero())
                .map(Chart::Single)
                .ok_or_else(|| Error::DimensionMismatch("zero vector is not a point".into())),
            Ambient::Affine(_) => Err(Error::AmbientMismatch("affine space has no charts".into())),
        }
    }

    /// Scales the point so that its unit coordinates equal one.
    pub fn normalize(&self, point: &[Scalar]) -> Result<Vec<Scalar>> {
        let mut p = point.to_vec();
        match self {
            Chart::Single(i) => {
                let inv = p[*i].inv()?;
                for x in &mut p {
                    *x = &*x * &inv;
                }
            }
            Chart::Pair(a, b) => {
                let ia = p[*a].inv()?;
                let ib = p[2 + b].inv()?;
                for x in &mut p[..2] {
                    *x = &*x * &ia;
                }
                for x in &mut p[2..] {
                    *x = &*x * &ib;
                }
            }
        }
        Ok(p)
    }
}

/// Canonical representative of a projective point (first nonzero coordinate of
/// each block equal to one).
pub fn normalize_point(ambient: Ambient, point: &[Scalar]) -> Result<Vec<Scalar>> {
    if point.len() != ambient.nvars() {
        return Err(Error::DimensionMismatch(format!(
            "{} coordinates on {ambient}",
            point.len()
        )));
    }
    if !ambient.is_projective() {
        return Ok(point.to_vec());
    }
    Chart::for_point(ambient, point)?.normalize(point)
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = (0..self.ambient.nvars())
                .filter(|&i| e[i] > 0)
                .map(|i| {
                    let v = self.ambient.var_name(i);
                    if e[i] == 1 {
                        v
                    } else {
                        format!("{v}^{}", e[i])
                    }
                })
                .collect();
            let mut coef = c.to_string();
            let negative = coef.starts_with('-');
            if negative {
                coef.remove(0);
            }
            match (k > 0, negative) {
                (true, true) => write!(f, " - ")?,
                (true, false) => write!(f, " + ")?,
                (false, true) => write!(f, "-")?,
                (false, false) => {}
            }
            match (mono.is_empty(), coef == "1") {
                (true, _) => write!(f, "{coef}")?,
                (false, true) => write!(f, "{}", mono.join("*"))?,
                (false, false) => write!(f, "{coef}*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: Vec<u16>,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    ambient: Ambient,
    field: Field,
    degree: MultiDegree,
    terms: Vec<TermRepr>,
}

impl Serialize for MultiPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.ambient.nvars();
        PolyRepr {
            ambient: self.ambient,
            field: self.field,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .rev()
                .map(|(e, c)| TermRepr {
                    exp: e[..n].to_vec(),
                    coeff: c.to_string(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(d)?;
        let n = repr.ambient.nvars();
        let mut terms = Vec::with_capacity(repr.terms.len());
        for t in repr.terms {
            if t.exp.len() != n {
                return Err(D::Error::custom("exponent length does not match ambient"));
            }
            let mut e = [0u16; MAX_VARS];
            e[..n].copy_from_slice(&t.exp);
            let c = repr.field.parse(&t.coeff).map_err(D::Error::custom)?;
            terms.push((e, c));
        }
        MultiPoly::from_terms(repr.ambient, repr.degree, repr.field, terms)
            .map_err(D::Error::custom)
    }
}

macro_rules! poly_binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl $tr<&MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                self.$try(rhs)
                    .expect(concat!("MultiPoly::", stringify!($method)))
            }
        }
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                (&self).$method(rhs)
            }
        }
        impl $tr<MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                self.$method(&rhs)
            }
        }
    };
}

poly_binop!(Add, add, try_add);
poly_binop!(Sub, sub, try_sub);
poly_binop!(Mul, mul, try_mul);

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.neg_ref()
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.neg_ref()
    }
}

/// The named forms on `P1xP1`: the diagonal `l`, the triple `h1, h2, h3`
/// displayed alongside it, and the six-line sextic `c`.
pub mod named {
    use super::*;

    pub struct Forms {
        pub l: MultiPoly,
        pub h1: MultiPoly,
        pub h2: MultiPoly,
        pub h3: MultiPoly,
    }

    pub fn vars(field: Field) -> [MultiPoly; 4] {
        let v = MultiPoly::vars(Ambient::P1xP1, field);
        [v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()]
    }

    pub fn forms(field: Field) -> Forms {
        let [x0, x1, y0, y1] = vars(field);
        let l = &(&x0 * &y1) - &(&x1 * &y0);
        let h1 = &(&x0 * &(&y1 - &y0)) + &(&y0 * &(&x1 - &x0));
        let h2 = &(&x1 * &(&y0 - &y1)) + &(&y1 * &(&x0 - &x1));
        let h3 = &(&x0 * &y1) + &(&x1 * &y0);
        Forms { l, h1, h2, h3 }
    }

    /// `x0 x1 (x0 - x1)`, the cubic in `x` vanishing at the three points.
    pub fn x_cubic(field: Field) -> MultiPoly {
        let [x0, x1, _, _] = vars(field);
        &(&x0 * &x1) * &(&x0 - &x1)
    }

    pub fn y_cubic(field: Field) -> MultiPoly {
        let [_, _, y0, y1] = vars(field);
        &(&y0 * &y1) * &(&y0 - &y1)
    }

    /// The product `x0 x1 (x0 - x1) y0 y1 (y0 - y1)` of bidegree `(3, 3)`.
    pub fn six_line_product(field: Field) -> MultiPoly {
        &x_cubic(field) * &y_cubic(field)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(field: Field) -> [MultiPoly; 4] {
        named::vars(field)
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(
            monomial_basis(Ambient::P1xP1, MultiDegree::Bi(1, 1))
                .unwrap()
                .len(),
            4
        );
        assert_eq!(
            monomial_basis(Ambient::P1xP1, MultiDegree::Bi(3, 3))
                .unwrap()
                .len(),
            16
        );
        assert_eq!(
            monomial_basis(Ambient::P3, MultiDegree::Total(3))
                .unwrap()
                .len(),
            20
        );
        assert_eq!(
            monomial_basis(Ambient::P2, MultiDegree::Total(4))
                .unwrap()
                .len(),
            15
        );
        assert!(matches!(
            MultiDegree::try_bi(-1, 2),
            Err(Error::NegativeDegree(-1))
        ));
        assert!(monomial_basis(Ambient::P2, MultiDegree::Bi(1, 1)).is_err());
    }

    #[test]
    fn bidegree_one_one_order() {
        let m = monomial_basis(Ambient::P1xP1, MultiDegree::Bi(1, 1)).unwrap();
        assert_eq!(
            m,
            vec![[1, 0, 1, 0], [1, 0, 0, 1], [0, 1, 1, 0], [0, 1, 0, 1]]
        );
    }

    #[test]
    fn expansions_of_named_forms() {
        let q = Field::Rational;
        let [x0, x1, y0, y1] = p(q);
        let f = named::forms(q);
        let two = q.from_i64(2);
        let four = q.from_i64(4);
        let l2 = &(&x0 * &x0) * &(&y1 * &y1) - (&x0 * &x1 * &y0 * &y1).scale(&two)
            + &(&x1 * &x1) * &(&y0 * &y0);
        assert_eq!(&f.l * &f.l, l2);
        assert_eq!(
            &f.h3 * &f.h3 - &f.l * &f.l,
            (&x0 * &x1 * &y0 * &y1).scale(&four)
        );
        assert_eq!(&f.h1 - &f.h3, (&x0 * &y0).scale(&-two.clone()));
        assert_eq!(&f.h2 - &f.h3, (&x1 * &y1).scale(&-two));
        let kernel = &f.h3 * &f.h3 - &f.l * &f.l - (&f.h1 - &f.h3) * (&f.h2 - &f.h3);
        assert!(kernel.is_zero());
    }

    #[test]
    fn ambient_and_degree_errors() {
        let q = Field::Rational;
        let a = MultiPoly::var(Ambient::P2, q, 0);
        let b = MultiPoly::var(Ambient::P3, q, 0);
        assert!(matches!(a.try_mul(&b), Err(Error::AmbientMismatch(_))));
        let c = &a * &a;
        assert!(matches!(a.try_add(&c), Err(Error::DegreeMismatch(_))));
    }

    #[test]
    fn exact_division() {
        let f = Field::Prime(101);
        let [x0, x1, y0, y1] = p(f);
        let a = &(&x0 - &x1) * &(&y0 + &y1);
        assert_eq!(a.div_exact(&(&x0 - &x1)).unwrap(), Some(&y0 + &y1));
        assert_eq!(a.div_exact(&x0).unwrap(), None);
    }

    #[test]
    fn dehomogenize_chart() {
        let q = Field::Rational;
        let f = named::forms(q).l;
        // Chart x0 = y0 = 1: l = v - u.
        let g = f.dehomogenize(&Chart::Pair(0, 0)).unwrap();
        let u = MultiPoly::var(Ambient::Affine(2), q, 0);
        let v = MultiPoly::var(Ambient::Affine(2), q, 1);
        assert_eq!(g, &v - &u);
    }

    #[test]
    fn display_is_readable() {
        let q = Field::Rational;
        let s = named::forms(q).l.to_string();
        assert_eq!(s, "x0*y1 - x1*y0");
    }

    #[test]
    fn json_round_trip_of_named_form() {
        let q = Field::Rational;
        let c = named::six_line_product(q).scale(&q.from_ratio(-3, 7).unwrap());
        let s = serde_json::to_string(&c).unwrap();
        let back: MultiPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
}
