use std::collections::HashMap;
use std::fmt;

use serde::{Serialize, Serializer};

use super::{Ambient, Chart, MultiPoly, Series};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::{kernel_basis, ExactMatrix};

pub const DEFAULT_TRUNCATION: usize = 8;

/// A vanishing order along a jet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Order {
    Finite(usize),
    /// Every computed coefficient vanished.
    AtLeast(usize),
}

impl Order {
    pub fn finite(&self) -> Option<usize> {
        match self {
            Order::Finite(k) => Some(*k),
            Order::AtLeast(_) => None,
        }
    }

    /// True iff the order is known to be at least `k`.
    pub fn at_least(&self, k: usize) -> bool {
        match self {
            Order::Finite(v) => *v >= k,
            Order::AtLeast(v) => *v >= k,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::AtLeast(k) => write!(f, ">={k}"),
        }
    }
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Order::Finite(k) => s.serialize_u64(*k as u64),
            Order::AtLeast(_) => s.serialize_str(&self.to_string()),
        }
    }
}

/// A truncated arc through a smooth point of a curve, in homogeneous
/// coordinates whose chart coordinates are identically one.
#[derive(Debug, Clone)]
pub struct CurveJet {
    ambient: Ambient,
    field: Field,
    center: Vec<Scalar>,
    chart: Chart,
    coords: Vec<Series>,
    equations: Vec<MultiPoly>,
}

/// Evaluates `f` on coordinate series.
pub(crate) fn eval_on_series(f: &MultiPoly, coords: &[Series]) -> Series {
    let n = coords[0].truncation();
    let mut powers: HashMap<(usize, u16), Series> = HashMap::new();
    let maxe = f.max_exponents();
    for (i, c) in coords.iter().enumerate() {
        if maxe[i] > 1 {
            for (k, p) in c.powers(maxe[i] as usize).into_iter().enumerate() {
                powers.insert((i, k as u16), p);
            }
        }
    }
    let mut acc = Series::zero(f.field(), n);
    for (e, c) in f.terms() {
        let mut t = Series::constant(c.clone(), n);
        for (i, s) in coords.iter().enumerate() {
            match e[i] {
                0 => {}
                1 => t = t.mul(s),
                k => t = t.mul(&powers[&(i, k)]),
            }
        }
        acc = acc.add(&t);
    }
    acc
}

impl CurveJet {
    /// Builds the arc at `point` on the curve cut out by `equations`, solved
    /// order by order from the Jacobian.
    pub fn new(equations: &[MultiPoly], point: &[Scalar], truncation: usize) -> Result<CurveJet> {
        let first = equations
            .first()
            .ok_or_else(|| Error::DimensionMismatch("a curve needs equations".into()))?;
        let ambient = first.ambient();
        let field = first.field();
        if equations
            .iter()
            .any(|g| g.ambient() != ambient || g.field() != field)
        {
            return Err(Error::AmbientMismatch(
                "equations on different ambients".into(),
            ));
        }
        if truncation == 0 {
            return Err(Error::TruncationTooSmall {
                required: 1,
                truncation,
            });
        }
        let chart = Chart::for_point(ambient, point)?;
        let center = chart.normalize(point)?;
        if equations.iter().any(|g| !g.eval(&center).is_zero()) {
            return Err(Error::NotOnCurve);
        }
        let free = chart.affine_vars(ambient)?;
        let m = free.len();

        // Jacobian in the chart; rows are equations, columns affine variables.
        let jac_rows: Vec<Vec<Scalar>> = equations
            .iter()
            .map(|g| free.iter().map(|&i| g.partial(i).eval(&center)).collect())
            .collect();
        let jac = ExactMatrix::from_rows(field, m, jac_rows.clone())?;
        let rank = jac.rank();
        if rank + 1 != m {
            return Err(Error::SingularPoint { corank: m - rank });
        }
        let tangent = kernel_basis(&jac)?;
        let k = tangent[0]
            .iter()
            .position(|c| !c.is_zero())
            .expect("kernel vector is nonzero");

        let mut pivots = Vec::new();
        let mut chosen: Vec<Vec<Scalar>> = Vec::new();
        for (r, row) in jac_rows.iter().enumerate() {
            let mut trial = chosen.clone();
            trial.push(row.clone());
            if ExactMatrix::from_rows(field, m, trial.clone())?.rank() == trial.len() {
                chosen = trial;
                pivots.push(r);
            }
        }
        let others: Vec<usize> = (0..m).filter(|&j| j != k).collect();
        let square = ExactMatrix::from_rows(
            field,
            others.len(),
            chosen
                .iter()
                .map(|row| others.iter().map(|&j| row[j].clone()).collect())
                .collect(),
        )?;
        let solve = square.inverse()?;

        let mut coords: Vec<Series> = center
            .iter()
            .map(|c| Series::constant(c.clone(), truncation))
            .collect();
        for order in 1..=truncation {
            if order == 1 {
                coords[free[k]].set(1, field.one());
            }
            let residual: Vec<Scalar> = pivots
                .iter()
                .map(|&r| -eval_on_series(&equations[r], &coords).coeff(order).clone())
                .collect();
            let delta = solve.mul_vec(&residual)?;
            for (d, &j) in delta.into_iter().zip(&others) {
                coords[free[j]].set(order, d);
            }
        }

        let jet = CurveJet {
            ambient,
            field,
            center,
            chart,
            coords,
            equations: equations.to_vec(),
        };
        jet.self_check()?;
        Ok(jet)
    }

    /// Re-substitutes every stored equation; all must vanish to the
    /// truncation order.
    pub fn self_check(&self) -> Result<()> {
        for g in &self.equations {
            if eval_on_series(g, &self.coords).valuation().is_some() {
                return Err(Error::NotOnCurve);
            }
        }
        if self.coords.iter().all(|c| c.coeff(1).is_zero()) {
            return Err(Error::SingularPoint { corank: 0 });
        }
        Ok(())
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn center(&self) -> &[Scalar] {
        &self.center
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn truncation(&self) -> usize {
        self.coords[0].truncation()
    }

    pub fn coords(&self) -> &[Series] {
        &self.coords
    }

    pub fn equations(&self) -> &[MultiPoly] {
        &self.equations
    }

    /// First-order coefficients (the tangent direction).
    pub fn tangent(&self) -> Vec<Scalar> {
        self.coords.iter().map(|c| c.coeff(1).clone()).collect()
    }

    /// The series `f(arc(s))`.
    pub fn evaluate(&self, f: &MultiPoly) -> Result<Series> {
        if f.ambient() != self.ambient {
            return Err(Error::AmbientMismatch(format!(
                "form on {} against a jet on {}",
                f.ambient(),
                self.ambient
            )));
        }
        if f.field() != self.field {
            return Err(Error::MixedField(
                f.field().to_string(),
                self.field.to_string(),
            ));
        }
        Ok(eval_on_series(f, &self.coords))
    }

    /// The first `count` coefficients of `f(arc(s))`.
    pub fn taylor(&self, f: &MultiPoly, count: usize) -> Result<Vec<Scalar>> {
        if count > self.truncation() + 1 {
            return Err(Error::TruncationTooSmall {
                required: count,
                truncation: self.truncation(),
            });
        }
        Ok(self.evaluate(f)?.coeffs()[..count].to_vec())
    }
}

/// Order of vanishing of `f` along the arc.
pub fn vanishing_order(f: &MultiPoly, jet: &CurveJet) -> Result<Order> {
    let s = jet.evaluate(f)?;
    Ok(match s.valuation() {
        Some(k) => Order::Finite(k),
        None => Order::AtLeast(jet.truncation() + 1),
    })
}

/// Normalized center of a jet, for reporting.
pub fn center_point(jet: &CurveJet) -> Vec<String> {
    jet.center.iter().map(|c| c.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::named;

    #[test]
    fn conic_parametrization() {
        let q = Field::Rational;
        let x = MultiPoly::vars(Ambient::P2, q);
        let conic = &(&x[0] * &x[2]) - &(&x[1] * &x[1]);
        let p = [q.one(), q.zero(), q.zero()];
        let jet = CurveJet::new(&[conic], &p, 2).unwrap();
        assert_eq!(jet.chart(), Chart::Single(0));
        assert_eq!(jet.coords()[1].coeffs(), &[q.zero(), q.one(), q.zero()]);
        assert_eq!(jet.coords()[2].coeffs(), &[q.zero(), q.zero(), q.one()]);
    }

    #[test]
    fn diagonal_branches_agree() {
        let q = Field::Rational;
        let l = named::forms(q).l;
        let o3 = [q.one(), q.one(), q.one(), q.one()];
        let jet = CurveJet::new(std::slice::from_ref(&l), &o3, 3).unwrap();
        assert_eq!(jet.coords()[1], jet.coords()[3]);
        assert_eq!(vanishing_order(&l, &jet).unwrap(), Order::AtLeast(4));
        // h1 passes through o3 transversally to the diagonal.
        let h1 = named::forms(q).h1;
        assert_eq!(vanishing_order(&h1, &jet).unwrap(), Order::Finite(1));
        let [x0, _, y0, _] = named::vars(q);
        assert_eq!(
            vanishing_order(&(&x0 * &y0), &jet).unwrap(),
            Order::Finite(0)
        );
    }

    #[test]
    fn singular_center_is_rejected() {
        let q = Field::Rational;
        let x = MultiPoly::vars(Ambient::P2, q);
        // Nodal cubic x1^2 x0 = x2^2 (x2 + x0) at (1:0:0).
        let node = &(&(&x[1] * &x[1]) * &x[0]) - &(&(&x[2] * &x[2]) * &(&x[2] + &x[0]));
        let p = [q.one(), q.zero(), q.zero()];
        assert!(matches!(
            CurveJet::new(&[node], &p, 4),
            Err(Error::SingularPoint { corank: 2 })
        ));
        let off = [q.one(), q.one(), q.zero()];
        let conic = &(&x[0] * &x[2]) - &(&x[1] * &x[1]);
        assert!(matches!(
            CurveJet::new(&[conic], &off, 4),
            Err(Error::NotOnCurve)
        ));
    }
}
