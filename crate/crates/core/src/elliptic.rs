//! Short Weierstrass curves `y^2 = x^3 + a x + b` with the point at infinity
//! as origin: group law, small torsion, and the plane cubic and space quartic
//! models.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::{kernel_basis, row_space, ExactMatrix, Vector};
use crate::poly::{monomial_basis, Ambient, MultiDegree, MultiPoly};
use crate::univariate::UniPoly;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EllPoint {
    Infinity,
    Affine(Scalar, Scalar),
}

impl EllPoint {
    pub fn is_infinity(&self) -> bool {
        matches!(self, EllPoint::Infinity)
    }

    pub fn x(&self) -> Option<&Scalar> {
        match self {
            EllPoint::Affine(x, _) => Some(x),
            EllPoint::Infinity => None,
        }
    }
}

impl std::fmt::Display for EllPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EllPoint::Infinity => write!(f, "o"),
            EllPoint::Affine(x, y) => write!(f, "({x}, {y})"),
        }
    }
}

impl Serialize for EllPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            EllPoint::Infinity => s.serialize_str("o"),
            EllPoint::Affine(x, y) => [x.to_string(), y.to_string()].serialize(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeierstrassCurve {
    field: Field,
    a: Scalar,
    b: Scalar,
}

impl Serialize for WeierstrassCurve {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("WeierstrassCurve", 3)?;
        st.serialize_field("p", &self.field)?;
        st.serialize_field("a", &self.a.to_string())?;
        st.serialize_field("b", &self.b.to_string())?;
        st.end()
    }
}

fn check_characteristic(field: Field) -> Result<()> {
    match field.characteristic() {
        2 | 3 => Err(Error::BadCharacteristic(field.characteristic())),
        _ => Ok(()),
    }
}

impl WeierstrassCurve {
    pub fn new(a: Scalar, b: Scalar) -> Result<Self> {
        let field = a.field();
        if b.field() != field {
            return Err(Error::MixedField(field.to_string(), b.field().to_string()));
        }
        check_characteristic(field)?;
        let c = WeierstrassCurve { field, a, b };
        if c.discriminant().is_zero() {
            return Err(Error::SingularPoint { corank: 0 });
        }
        Ok(c)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn a(&self) -> &Scalar {
        &self.a
    }

    pub fn b(&self) -> &Scalar {
        &self.b
    }

    /// `4a^3 + 27b^2`.
    pub fn discriminant(&self) -> Scalar {
        let f = self.field;
        &(&f.from_i64(4) * &self.a.pow(3)) + &(&f.from_i64(27) * &self.b.pow(2))
    }

    /// `x^3 + a x + b`.
    pub fn rhs(&self, x: &Scalar) -> Scalar {
        &(&x.pow(3) + &(&self.a * x)) + &self.b
    }

    pub fn contains(&self, p: &EllPoint) -> bool {
        match p {
            EllPoint::Infinity => true,
            EllPoint::Affine(x, y) => {
                x.field() == self.field && y.field() == self.field && y.pow(2) == self.rhs(x)
            }
        }
    }

    fn check(&self, p: &EllPoint) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::NotOnCurve)
        }
    }

    pub fn neg(&self, p: &EllPoint) -> EllPoint {
        match p {
            EllPoint::Infinity => EllPoint::Infinity,
            EllPoint::Affine(x, y) => EllPoint::Affine(x.clone(), -y),
        }
    }

    pub fn add(&self, p: &EllPoint, r: &EllPoint) -> Result<EllPoint> {
        self.check(p)?;
        self.check(r)?;
        Ok(self.add_unchecked(p, r))
    }

    fn add_unchecked(&self, p: &EllPoint, r: &EllPoint) -> EllPoint {
        let (x1, y1, x2, y2) = match (p, r) {
            (EllPoint::Infinity, _) => return r.clone(),
            (_, EllPoint::Infinity) => return p.clone(),
            (EllPoint::Affine(x1, y1), EllPoint::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let f = self.field;
        let lambda = if x1 == x2 {
            if (y1 + y2).is_zero() {
                return EllPoint::Infinity;
            }
            let num = &(&f.from_i64(3) * &x1.pow(2)) + &self.a;
            &num / &(&f.from_i64(2) * y1)
        } else {
            &(y2 - y1) / &(x2 - x1)
        };
        let x3 = &(&lambda.pow(2) - x1) - x2;
        let y3 = &(&lambda * &(x1 - &x3)) - y1;
        EllPoint::Affine(x3, y3)
    }

    pub fn sub(&self, p: &EllPoint, r: &EllPoint) -> Result<EllPoint> {
        self.add(p, &self.neg(r))
    }

    /// `n * p` for any integer `n`.
    pub fn mul(&self, p: &EllPoint, n: i64) -> Result<EllPoint> {
        self.check(p)?;
        let mut base = if n < 0 { self.neg(p) } else { p.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = EllPoint::Infinity;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add_unchecked(&acc, &base);
            }
            base = self.add_unchecked(&base, &base);
            k >>= 1;
        }
        Ok(acc)
    }

    /// True iff `p` has order exactly `n`.
    pub fn has_exact_order(&self, p: &EllPoint, n: u64) -> Result<bool> {
        if !self.mul(p, n as i64)?.is_infinity() {
            return Ok(false);
        }
        for d in 1..n {
            if n.is_multiple_of(d) && self.mul(p, d as i64)?.is_infinity() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// A point with the given `x`, choosing the sign-canonical `y`.
    pub fn lift_x(&self, x: &Scalar) -> Option<EllPoint> {
        let y = self.rhs(x).sqrt()?;
        let y = if y.is_sign_canonical() { y } else { -y };
        Some(EllPoint::Affine(x.clone(), y))
    }

    /// Uniformly chosen `x` with a random sign of `y`.
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<EllPoint> {
        if self.field == Field::Rational {
            return Err(Error::Internal(
                "random curve points need a prime field".into(),
            ));
        }
        loop {
            let x = self.field.random(rng);
            if let Some(EllPoint::Affine(x, y)) = self.lift_x(&x) {
                let y = if rng.gen_bool(0.5) { -y } else { y };
                return Ok(EllPoint::Affine(x, y));
            }
        }
    }

    fn uni(&self, coeffs: &[Scalar]) -> UniPoly {
        UniPoly::new(self.field, coeffs.to_vec())
    }

    /// `psi_3 = 3x^4 + 6ax^2 + 12bx - a^2`.
    pub fn psi3(&self) -> UniPoly {
        let f = self.field;
        let (a, b) = (&self.a, &self.b);
        self.uni(&[
            -a.pow(2),
            &f.from_i64(12) * b,
            &f.from_i64(6) * a,
            f.zero(),
            f.from_i64(3),
        ])
    }

    /// `psi_4 / psi_2 = 2(x^6 + 5ax^4 + 20bx^3 - 5a^2x^2 - 4abx - 8b^2 - a^3)`.
    pub fn psi4_over_psi2(&self) -> UniPoly {
        let f = self.field;
        let (a, b) = (&self.a, &self.b);
        let inner = self.uni(&[
            &(-&(&f.from_i64(8) * &b.pow(2))) - &a.pow(3),
            -&(&f.from_i64(4) * &(a * b)),
            -&(&f.from_i64(5) * &a.pow(2)),
            &f.from_i64(20) * b,
            &f.from_i64(5) * a,
            f.zero(),
            f.one(),
        ]);
        inner.scale(&f.from_i64(2))
    }

    /// A rational point of exact order `n` (2, 3 or 4), if any; the first by
    /// increasing `x`, with sign-canonical `y`.
    pub fn torsion_point(&self, n: u64) -> Result<Option<EllPoint>> {
        let f = self.field;
        let poly = match n {
            2 => self.uni(&[self.b.clone(), self.a.clone(), f.zero(), f.one()]),
            3 => self.psi3(),
            4 => self.psi4_over_psi2(),
            _ => {
                return Err(Error::Internal(format!(
                    "torsion of order {n} is not supported"
                )))
            }
        };
        for x in poly.roots()? {
            if let Some(p) = self.lift_x(&x) {
                if self.has_exact_order(&p, n)? {
                    return Ok(Some(p));
                }
            }
        }
        Ok(None)
    }

    /// `sum n_i P_i` in the group.
    pub fn divisor_class_sum(&self, points: &[(EllPoint, i64)]) -> Result<EllPoint> {
        let mut acc = EllPoint::Infinity;
        for (p, n) in points {
            acc = self.add(&acc, &self.mul(p, *n)?)?;
        }
        Ok(acc)
    }

    /// Plane cubic model `x2^2 x0 = x1^3 + a x1 x0^2 + b x0^3` via
    /// `P -> (1 : x : y)`, `o -> (0 : 0 : 1)`.
    pub fn plane_cubic(&self) -> MultiPoly {
        let f = self.field;
        let v = MultiPoly::vars(Ambient::P2, f);
        let lhs = &(&v[2] * &v[2]) * &v[0];
        let rhs = &(&(&v[1] * &v[1]) * &v[1])
            + &(&(&(&v[1] * &v[0]) * &v[0]).scale(&self.a) + &v[0].pow(3).scale(&self.b));
        &lhs - &rhs
    }

    pub fn plane_point(&self, p: &EllPoint) -> Vec<Scalar> {
        let f = self.field;
        match p {
            EllPoint::Infinity => vec![f.zero(), f.zero(), f.one()],
            EllPoint::Affine(x, y) => vec![f.one(), x.clone(), y.clone()],
        }
    }

    /// Inverse of [`plane_point`](Self::plane_point) on points of the cubic.
    pub fn from_plane_point(&self, p: &[Scalar]) -> Result<EllPoint> {
        let pt = if p[0].is_zero() {
            if p[1].is_zero() && !p[2].is_zero() {
                EllPoint::Infinity
            } else {
                return Err(Error::NotOnCurve);
            }
        } else {
            let inv = p[0].inv()?;
            EllPoint::Affine(&p[1] * &inv, &p[2] * &inv)
        };
        self.check(&pt)?;
        Ok(pt)
    }

    /// The `|4o|` model in `P3`.
    pub fn embed_quartic(&self) -> Result<QuarticModel> {
        QuarticModel::new(self.clone())
    }
}

/// Seeded search for a smooth curve with a rational point of exact order `n`.
pub fn sample_curve_with_torsion(
    field: Field,
    n: u64,
    seed: u64,
    attempts: usize,
) -> Result<(WeierstrassCurve, EllPoint)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_curve_with_torsion_rng(field, n, &mut rng, attempts)
}

pub fn sample_curve_with_torsion_rng<R: Rng + ?Sized>(
    field: Field,
    n: u64,
    rng: &mut R,
    attempts: usize,
) -> Result<(WeierstrassCurve, EllPoint)> {
    if !matches!(n, 3 | 4) {
        return Err(Error::Internal(format!(
            "sampling {n}-torsion is not supported"
        )));
    }
    if field == Field::Rational {
        return Err(Error::Internal("curve sampling needs a prime field".into()));
    }
    check_characteristic(field)?;
    for _ in 0..attempts {
        let a = field.random(rng);
        let b = field.random(rng);
        let Ok(curve) = WeierstrassCurve::new(a, b) else {
            continue;
        };
        if let Some(p) = curve.torsion_point(n)? {
            return Ok((curve, p));
        }
    }
    Err(Error::SearchExhausted {
        stage: format!("curve with {n}-torsion"),
        attempts,
    })
}

/// Functions `A(x) + B(x) y` on the curve, reduced by the Weierstrass
/// equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveFunction {
    pub a: UniPoly,
    pub b: UniPoly,
}

impl CurveFunction {
    pub fn new(a: UniPoly, b: UniPoly) -> Self {
        Self { a, b }
    }

    pub fn mul(&self, other: &CurveFunction, curve: &WeierstrassCurve) -> CurveFunction {
        let f = curve.field();
        let cubic = UniPoly::new(
            f,
            vec![curve.b().clone(), curve.a().clone(), f.zero(), f.one()],
        );
        let a = self.a.mul(&other.a).add(&self.b.mul(&other.b).mul(&cubic));
        let b = self.a.mul(&other.b).add(&self.b.mul(&other.a));
        CurveFunction { a, b }
    }

    /// Coefficients against `1, x, .., x^na, y, x y, .., x^nb y`.
    pub fn coordinates(&self, na: usize, nb: usize) -> Result<Vector> {
        let field = self.a.field();
        let pad = |p: &UniPoly, n: usize| -> Result<Vector> {
            if p.degree().is_some_and(|d| d > n) {
                return Err(Error::DegreeMismatch(
                    "function has a pole beyond the target".into(),
                ));
            }
            let mut v = p.coeffs().to_vec();
            v.resize(n + 1, field.zero());
            Ok(v)
        };
        let mut v = pad(&self.a, na)?;
        v.extend(pad(&self.b, nb)?);
        Ok(v)
    }

    /// Pole order at the origin.
    pub fn pole_order(&self) -> Option<usize> {
        let pa = self.a.degree().map(|d| 2 * d);
        let pb = self.b.degree().map(|d| 2 * d + 3);
        pa.max(pb)
    }
}

/// The embedding `P -> (1 : x : y : x^2)` and the two quadrics through its
/// image.
#[derive(Debug, Clone)]
pub struct QuarticModel {
    curve: WeierstrassCurve,
    q: MultiPoly,
    s: MultiPoly,
}

impl QuarticModel {
    fn new(curve: WeierstrassCurve) -> Result<Self> {
        let field = curve.field();
        let monomials = monomial_basis(Ambient::P3, MultiDegree::Total(2))?;
        let quadrics = match field {
            Field::Prime(_) => {
                let mut pts = vec![EllPoint::Infinity];
                for x in field.elements().expect("prime field") {
                    if pts.len() >= 16 {
                        break;
                    }
                    if let Some(EllPoint::Affine(x, y)) = curve.lift_x(&x) {
                        let neg = -&y;
                        pts.push(EllPoint::Affine(x.clone(), y.clone()));
                        if !neg.is_zero() {
                            pts.push(EllPoint::Affine(x, neg));
                        }
                    }
                }
                if pts.len() < 13 {
                    return Err(Error::SearchExhausted {
                        stage: "sample points for the quartic model".into(),
                        attempts: pts.len(),
                    });
                }
                let rows: Vec<Vector> = pts
                    .iter()
                    .map(|p| {
                        let img = Self::image(&curve, p);
                        monomials
                            .iter()
                            .map(|e| {
                                MultiPoly::monomial(Ambient::P3, field, *e, field.one()).eval(&img)
                            })
                            .collect()
                    })
                    .collect();
                kernel_basis(&ExactMatrix::from_rows(field, monomials.len(), rows)?)?
            }
            Field::Rational => {
                // Vanishing of the composed function in k[x, y]/(y^2 - x^3 - ax - b).
                let coords = Self::coordinate_functions(&curve);
                let cols: Vec<Vector> = monomials
                    .iter()
                    .map(|e| {
                        let mut acc = CurveFunction::new(
                            UniPoly::new(field, vec![field.one()]),
                            UniPoly::zero(field),
                        );
                        for (i, c) in coords.iter().enumerate() {
                            for _ in 0..e[i] {
                                acc = acc.mul(c, &curve);
                            }
                        }
                        acc.coordinates(4, 2)
                    })
                    .collect::<Result<_>>()?;
                kernel_basis(&ExactMatrix::from_columns(field, 8, &cols)?)?
            }
        };
        let normalized = row_space(field, monomials.len(), &quadrics)?;
        if normalized.len() != 2 {
            return Err(Error::Internal(format!(
                "{} quadrics through the quartic model",
                normalized.len()
            )));
        }
        let forms = normalized
            .iter()
            .map(|v| {
                MultiPoly::from_coefficients(
                    Ambient::P3,
                    MultiDegree::Total(2),
                    field,
                    &monomials,
                    v,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(QuarticModel {
            curve,
            q: forms[0].clone(),
            s: forms[1].clone(),
        })
    }

    fn image(curve: &WeierstrassCurve, p: &EllPoint) -> Vec<Scalar> {
        let f = curve.field();
        match p {
            // (s^4 : s^2 : s : 1) * s^-4 in the local parameter s = x / y.
            EllPoint::Infinity => vec![f.zero(), f.zero(), f.zero(), f.one()],
            EllPoint::Affine(x, y) => vec![f.one(), x.clone(), y.clone(), x.pow(2)],
        }
    }

    /// `1, x, y, x^2` as curve functions.
    pub fn coordinate_functions(curve: &WeierstrassCurve) -> Vec<CurveFunction> {
        let f = curve.field();
        let u = |c: &[i64]| UniPoly::from_i64(f, c);
        vec![
            CurveFunction::new(u(&[1]), u(&[])),
            CurveFunction::new(u(&[0, 1]), u(&[])),
            CurveFunction::new(u(&[]), u(&[1])),
            CurveFunction::new(u(&[0, 0, 1]), u(&[])),
        ]
    }

    pub fn curve(&self) -> &WeierstrassCurve {
        &self.curve
    }

    pub fn q(&self) -> &MultiPoly {
        &self.q
    }

    pub fn s(&self) -> &MultiPoly {
        &self.s
    }

    pub fn quadrics(&self) -> [MultiPoly; 2] {
        [self.q.clone(), self.s.clone()]
    }

    pub fn map_point(&self, p: &EllPoint) -> Result<Vec<Scalar>> {
        self.curve.check(p)?;
        Ok(Self::image(&self.curve, p))
    }
}

/// True iff the four points of `P3` lie on a common plane.
pub fn coplanarity_test(points: &[Vec<Scalar>]) -> Result<bool> {
    if points.len() != 4 || points.iter().any(|p| p.len() != 4) {
        return Err(Error::DimensionMismatch(
            "coplanarity needs four points of P3".into(),
        ));
    }
    let field = points[0][0].field();
    let m = ExactMatrix::from_rows(field, 4, points.to_vec())?;
    Ok(m.determinant()?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(p: u64, a: i64, b: i64) -> WeierstrassCurve {
        let f = Field::Prime(p);
        WeierstrassCurve::new(f.from_i64(a), f.from_i64(b)).unwrap()
    }

    #[test]
    fn identity_and_inverse() {
        let e = curve(10007, 2, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = e.random_point(&mut rng).unwrap();
        assert_eq!(e.add(&p, &EllPoint::Infinity).unwrap(), p);
        assert!(e.add(&p, &e.neg(&p)).unwrap().is_infinity());
        let off = EllPoint::Affine(Field::Prime(10007).one(), Field::Prime(10007).one());
        assert_eq!(e.add(&p, &off), Err(Error::NotOnCurve));
    }

    #[test]
    fn singular_curve_rejected() {
        let f = Field::Prime(10007);
        assert!(WeierstrassCurve::new(f.from_i64(-3), f.from_i64(2)).is_err());
        let f5 = Field::Rational;
        assert!(WeierstrassCurve::new(f5.zero(), f5.zero()).is_err());
    }

    #[test]
    fn torsion_over_the_rationals() {
        // y^2 = x^3 + 1 has (-1, 0) of order 2 and (0, 1) of order 3.
        let q = Field::Rational;
        let e = WeierstrassCurve::new(q.zero(), q.one()).unwrap();
        assert_eq!(
            e.torsion_point(2).unwrap(),
            Some(EllPoint::Affine(-q.one(), q.zero()))
        );
        assert_eq!(
            e.torsion_point(3).unwrap(),
            Some(EllPoint::Affine(q.zero(), q.one()))
        );
    }

    #[test]
    fn sampled_torsion_is_exact() {
        let f = Field::Prime(10007);
        for n in [3, 4] {
            let (e, p) = sample_curve_with_torsion(f, n, 1, 200).unwrap();
            assert!(e.has_exact_order(&p, n).unwrap());
            let again = sample_curve_with_torsion(f, n, 1, 200).unwrap();
            assert_eq!((e.clone(), p.clone()), again);
            if n == 4 {
                assert!(!e.mul(&p, 2).unwrap().is_infinity());
            }
        }
    }

    #[test]
    fn quartic_model_closed_form() {
        for e in [
            curve(10007, 2, 3),
            WeierstrassCurve::new(Field::Rational.from_i64(-2), Field::Rational.from_i64(5))
                .unwrap(),
        ] {
            let f = e.field();
            let m = e.embed_quartic().unwrap();
            let x = MultiPoly::vars(Ambient::P3, f);
            let q0 = &(&x[0] * &x[3]) - &(&x[1] * &x[1]);
            let s0 = &(&(&x[2] * &x[2]) - &(&x[1] * &x[3]))
                - &(&(&x[0] * &x[1]).scale(e.a()) + &(&x[0] * &x[0]).scale(e.b()));
            let span = |v: &[MultiPoly]| {
                let mons = monomial_basis(Ambient::P3, MultiDegree::Total(2)).unwrap();
                let vecs: Vec<Vector> = v
                    .iter()
                    .map(|p| p.coefficient_vector(&mons).unwrap())
                    .collect();
                row_space(f, mons.len(), &vecs).unwrap()
            };
            assert_eq!(span(&m.quadrics()), span(&[q0, s0]));
            assert_eq!(m.map_point(&EllPoint::Infinity).unwrap()[3], f.one());
        }
    }

    #[test]
    fn function_products_have_expected_poles() {
        let e = curve(10007, 2, 3);
        let c = QuarticModel::coordinate_functions(&e);
        let y2 = c[2].mul(&c[2], &e);
        assert_eq!(y2.pole_order(), Some(6));
        assert_eq!(c[3].mul(&c[2], &e).pole_order(), Some(7));
    }

    #[test]
    fn coplanarity() {
        let f = Field::Prime(10007);
        let e = |i: usize| -> Vec<Scalar> {
            (0..4)
                .map(|j| if i == j { f.one() } else { f.zero() })
                .collect()
        };
        assert!(!coplanarity_test(&[e(0), e(1), e(2), e(3)]).unwrap());
        assert!(coplanarity_test(&[e(0), e(1), e(2), e(1)]).unwrap());
    }

    #[test]
    fn collinear_iff_sum_is_origin_on_the_plane_cubic() {
        let e = curve(10007, 5, 7);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let p = e.random_point(&mut rng).unwrap();
        let r = e.random_point(&mut rng).unwrap();
        let t = e.neg(&e.add(&p, &r).unwrap());
        let rows: Vec<Vector> = [&p, &r, &t].iter().map(|x| e.plane_point(x)).collect();
        let m = ExactMatrix::from_rows(e.field(), 3, rows).unwrap();
        assert!(m.determinant().unwrap().is_zero());
        let cubic = e.plane_cubic();
        assert!(cubic.eval(&e.plane_point(&p)).is_zero());
        assert!(cubic.eval(&e.plane_point(&EllPoint::Infinity)).is_zero());
    }
}
