//! Linear systems of forms cut out by vanishing conditions, and
//! multiplication-map kernels.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::groebner::IdealPresentation;
use crate::linalg::{self, kernel_basis, row_space, ExactMatrix, Vector};
use crate::poly::{
    monomial_basis, vanishing_order, Ambient, Chart, CurveJet, Exponent, MultiDegree, MultiPoly,
    Order,
};

/// A form composed with the jet must vanish to order at least `order`.
#[derive(Debug, Clone)]
pub struct VanishingCondition {
    pub jet: CurveJet,
    pub order: usize,
}

impl VanishingCondition {
    pub fn new(jet: CurveJet, order: usize) -> Result<Self> {
        if order > jet.truncation() {
            return Err(Error::TruncationTooSmall {
                required: order,
                truncation: jet.truncation(),
            });
        }
        Ok(Self { jet, order })
    }
}

#[derive(Debug, Clone)]
pub enum Condition {
    Vanishing(VanishingCondition),
    /// All partial derivatives of order `< multiplicity` vanish at the point,
    /// computed in its affine chart.
    PointMultiplicity {
        point: Vec<Scalar>,
        multiplicity: usize,
    },
    /// The restriction to the jets is proportional to that of `section`:
    /// the first `order` coefficients along every jet form a multiple of
    /// those of `section`, with one scalar shared by all jets.
    RestrictionProportional {
        section: MultiPoly,
        jets: Vec<CurveJet>,
        order: usize,
    },
}

impl Condition {
    pub fn vanishing(jet: CurveJet, order: usize) -> Result<Self> {
        Ok(Condition::Vanishing(VanishingCondition::new(jet, order)?))
    }

    fn label(&self) -> String {
        match self {
            Condition::Vanishing(v) => format!(
                "order>={} along jet at ({})",
                v.order,
                point_label(v.jet.center())
            ),
            Condition::PointMultiplicity {
                point,
                multiplicity,
            } => {
                format!("multiplicity>={multiplicity} at ({})", point_label(point))
            }
            Condition::RestrictionProportional { jets, order, .. } => {
                format!(
                    "restriction proportional to section on {} jets to order {order}",
                    jets.len()
                )
            }
        }
    }

    /// Condition rows over the given monomials.
    fn rows(&self, ambient: Ambient, field: Field, monomials: &[Exponent]) -> Result<Vec<Vector>> {
        let monos: Vec<MultiPoly> = monomials
            .iter()
            .map(|e| MultiPoly::monomial(ambient, field, *e, field.one()))
            .collect();
        match self {
            Condition::Vanishing(v) => {
                check_jet(&v.jet, ambient)?;
                jet_rows(&v.jet, &monos, v.order)
            }
            Condition::PointMultiplicity {
                point,
                multiplicity,
            } => {
                let chart = Chart::for_point(ambient, point)?;
                let p = chart.normalize(point)?;
                let free = chart.affine_vars(ambient)?;
                let center: Vec<Scalar> = free.iter().map(|&i| p[i].clone()).collect();
                let orders = taylor_exponents(free.len(), *multiplicity);
                let mut rows = vec![Vec::with_capacity(monos.len()); orders.len()];
                for m in &monos {
                    let shifted = shift(&m.dehomogenize(&chart)?, &center)?;
                    for (r, e) in orders.iter().enumerate() {
                        rows[r].push(shifted.coeff(e));
                    }
                }
                Ok(rows)
            }
            Condition::RestrictionProportional {
                section,
                jets,
                order,
            } => {
                let mut sec_rows: Vec<Scalar> = Vec::new();
                let mut form_rows: Vec<Vector> = Vec::new();
                for jet in jets {
                    check_jet(jet, ambient)?;
                    sec_rows.extend(jet.taylor(section, *order)?);
                    form_rows.extend(jet_rows(jet, &monos, *order)?);
                }
                let Some(pivot) = sec_rows.iter().position(|c| !c.is_zero()) else {
                    return Err(Error::IdenticallyZero);
                };
                // s_pivot * f_k - s_k * f_pivot = 0 for every coefficient k.
                let sp = sec_rows[pivot].clone();
                Ok((0..sec_rows.len())
                    .filter(|&k| k != pivot)
                    .map(|k| {
                        form_rows[k]
                            .iter()
                            .zip(&form_rows[pivot])
                            .map(|(fk, fp)| &(&sp * fk) - &(&sec_rows[k] * fp))
                            .collect()
                    })
                    .collect())
            }
        }
    }

    /// Direct check of the condition on a form.
    pub fn holds(&self, f: &MultiPoly) -> Result<bool> {
        match self {
            Condition::Vanishing(v) => Ok(vanishing_order(f, &v.jet)?.at_least(v.order)),
            Condition::PointMultiplicity { .. } | Condition::RestrictionProportional { .. } => {
                let monomials = monomial_basis(f.ambient(), f.degree())?;
                let v = f.coefficient_vector(&monomials)?;
                Ok(self
                    .rows(f.ambient(), f.field(), &monomials)?
                    .iter()
                    .all(|r| linalg::dot(r, &v, f.field()).is_zero()))
            }
        }
    }
}

fn check_jet(jet: &CurveJet, ambient: Ambient) -> Result<()> {
    if jet.ambient() != ambient {
        return Err(Error::AmbientMismatch(format!(
            "jet on {} in a system on {ambient}",
            jet.ambient()
        )));
    }
    Ok(())
}

fn jet_rows(jet: &CurveJet, monos: &[MultiPoly], order: usize) -> Result<Vec<Vector>> {
    if order > jet.truncation() {
        return Err(Error::TruncationTooSmall {
            required: order,
            truncation: jet.truncation(),
        });
    }
    let mut rows = vec![Vec::with_capacity(monos.len()); order];
    for m in monos {
        let t = jet.taylor(m, order)?;
        for (r, c) in t.into_iter().enumerate() {
            rows[r].push(c);
        }
    }
    Ok(rows)
}

/// Exponents in `n` variables of total degree below `m`, by degree then
/// decreasing lex.
fn taylor_exponents(n: usize, m: usize) -> Vec<Exponent> {
    let mut out = Vec::new();
    for d in 0..m {
        let mut cur = [0u16; 4];
        collect_exps(&mut out, &mut cur, 0, n, d as u16);
    }
    out
}

fn collect_exps(out: &mut Vec<Exponent>, cur: &mut Exponent, i: usize, n: usize, left: u16) {
    if n == 0 {
        if left == 0 {
            out.push(*cur);
        }
        return;
    }
    if i == n - 1 {
        cur[i] = left;
        out.push(*cur);
        cur[i] = 0;
        return;
    }
    for k in (0..=left).rev() {
        cur[i] = k;
        collect_exps(out, cur, i + 1, n, left - k);
    }
    cur[i] = 0;
}

/// `g(center + w)` as a polynomial in `w`.
fn shift(g: &MultiPoly, center: &[Scalar]) -> Result<MultiPoly> {
    let ambient = g.ambient();
    let field = g.field();
    let images: Vec<MultiPoly> = center
        .iter()
        .enumerate()
        .map(|(i, c)| {
            &MultiPoly::var(ambient, field, i) + &MultiPoly::constant(ambient, field, c.clone())
        })
        .collect();
    g.substitute_vars(&images)
}

fn point_label(p: &[Scalar]) -> String {
    p.iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(":")
}

/// Condition matrix kept for audit: one labelled block of rows per
/// condition, columns indexed by monomials.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionMatrix {
    pub labels: Vec<String>,
    /// Number of rows contributed by each condition.
    pub block_sizes: Vec<usize>,
    pub rank: usize,
    #[serde(serialize_with = "serialize_matrix")]
    pub matrix: ExactMatrix,
}

fn serialize_matrix<S: serde::Serializer>(
    m: &ExactMatrix,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<Vec<String>> = (0..m.rows())
        .map(|i| m.row(i).iter().map(|c| c.to_string()).collect())
        .collect();
    rows.serialize(s)
}

/// An echelon-normalized basis of a space of forms of one multidegree.
#[derive(Debug, Clone, Serialize)]
pub struct LinearSystemBasis {
    ambient: Ambient,
    degree: MultiDegree,
    field: Field,
    #[serde(serialize_with = "serialize_monomials")]
    monomials: Vec<Exponent>,
    basis: Vec<MultiPoly>,
    #[serde(skip)]
    vectors: Vec<Vector>,
    #[serde(skip_serializing_if = "Option::is_none")]
    conditions: Option<ConditionMatrix>,
}

fn serialize_monomials<S: serde::Serializer>(
    m: &[Exponent],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    m.iter()
        .map(|e| e.to_vec())
        .collect::<Vec<_>>()
        .serialize(s)
}

impl LinearSystemBasis {
    /// The span of `forms`, echelon-normalized.
    pub fn from_basis(
        ambient: Ambient,
        degree: MultiDegree,
        field: Field,
        forms: Vec<MultiPoly>,
    ) -> Result<Self> {
        let monomials = monomial_basis(ambient, degree)?;
        let mut vectors = Vec::with_capacity(forms.len());
        for f in &forms {
            if f.ambient() != ambient || f.field() != field {
                return Err(Error::AmbientMismatch(
                    "form outside the system's ring".into(),
                ));
            }
            if f.degree() != degree && !f.is_zero() {
                return Err(Error::DegreeMismatch(format!(
                    "{:?} in a system of degree {degree:?}",
                    f.degree()
                )));
            }
            vectors.push(f.coefficient_vector(&monomials)?);
        }
        Self::from_vectors(ambient, degree, field, monomials, &vectors, None)
    }

    fn from_vectors(
        ambient: Ambient,
        degree: MultiDegree,
        field: Field,
        monomials: Vec<Exponent>,
        vectors: &[Vector],
        conditions: Option<ConditionMatrix>,
    ) -> Result<Self> {
        let vectors = row_space(field, monomials.len(), vectors)?;
        let basis = vectors
            .iter()
            .map(|v| MultiPoly::from_coefficients(ambient, degree, field, &monomials, v))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            ambient,
            degree,
            field,
            monomials,
            basis,
            vectors,
            conditions,
        })
    }

    /// All forms of the multidegree.
    pub fn full(ambient: Ambient, degree: MultiDegree, field: Field) -> Result<Self> {
        let monomials = monomial_basis(ambient, degree)?;
        let vectors: Vec<Vector> = (0..monomials.len())
            .map(|i| {
                (0..monomials.len())
                    .map(|j| if i == j { field.one() } else { field.zero() })
                    .collect()
            })
            .collect();
        Self::from_vectors(ambient, degree, field, monomials, &vectors, None)
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

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[MultiPoly] {
        &self.basis
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    pub fn monomials(&self) -> &[Exponent] {
        &self.monomials
    }

    pub fn conditions(&self) -> Option<&ConditionMatrix> {
        self.conditions.as_ref()
    }

    fn vector_of(&self, f: &MultiPoly) -> Result<Vector> {
        if f.ambient() != self.ambient || f.field() != self.field {
            return Err(Error::AmbientMismatch(
                "form outside the system's ring".into(),
            ));
        }
        if !f.is_zero() && f.degree() != self.degree {
            return Err(Error::DegreeMismatch(format!(
                "{:?} against a system of degree {:?}",
                f.degree(),
                self.degree
            )));
        }
        f.coefficient_vector(&self.monomials)
    }

    pub fn contains(&self, f: &MultiPoly) -> Result<bool> {
        let v = self.vector_of(f)?;
        if self.vectors.is_empty() {
            return Ok(v.iter().all(Scalar::is_zero));
        }
        linalg::subspace_membership(&v, &self.vectors)
    }

    /// Coordinates of `f` in the echelon basis.
    pub fn coordinates(&self, f: &MultiPoly) -> Result<Option<Vector>> {
        let v = self.vector_of(f)?;
        if self.vectors.is_empty() {
            return Ok(v.iter().all(Scalar::is_zero).then(Vec::new));
        }
        linalg::coordinates_in(&v, &self.vectors)
    }

    fn compatible(&self, other: &LinearSystemBasis) -> Result<()> {
        if self.ambient != other.ambient || self.degree != other.degree || self.field != other.field
        {
            return Err(Error::DegreeMismatch(format!(
                "systems of degree {:?} and {:?}",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    pub fn intersection(&self, other: &LinearSystemBasis) -> Result<LinearSystemBasis> {
        self.compatible(other)?;
        let n = self.monomials.len();
        let v = linalg::intersection(self.field, n, &self.vectors, &other.vectors)?;
        Self::from_vectors(
            self.ambient,
            self.degree,
            self.field,
            self.monomials.clone(),
            &v,
            None,
        )
    }

    pub fn sum(&self, other: &LinearSystemBasis) -> Result<LinearSystemBasis> {
        self.compatible(other)?;
        let mut v = self.vectors.clone();
        v.extend(other.vectors.iter().cloned());
        Self::from_vectors(
            self.ambient,
            self.degree,
            self.field,
            self.monomials.clone(),
            &v,
            None,
        )
    }

    pub fn same_span(&self, other: &LinearSystemBasis) -> Result<bool> {
        self.compatible(other)?;
        Ok(self.vectors == other.vectors)
    }

    pub fn is_subspace_of(&self, other: &LinearSystemBasis) -> Result<bool> {
        Ok(self.intersection(other)?.dim() == self.dim())
    }

    /// Members of `self` (in basis order) completing `sub` to a basis of
    /// `self`.
    pub fn complement_of(&self, sub: &LinearSystemBasis) -> Result<Vec<MultiPoly>> {
        self.compatible(sub)?;
        let picked = linalg::complement(
            self.field,
            self.monomials.len(),
            &sub.vectors,
            &self.vectors,
        )?;
        picked
            .iter()
            .map(|v| {
                MultiPoly::from_coefficients(
                    self.ambient,
                    self.degree,
                    self.field,
                    &self.monomials,
                    v,
                )
            })
            .collect()
    }

    /// `g * self`, a system of degree `deg g + deg self`.
    pub fn multiply_by(&self, g: &MultiPoly) -> Result<LinearSystemBasis> {
        let degree = self.degree.plus(&g.degree())?;
        let forms = self
            .basis
            .iter()
            .map(|f| f.try_mul(g))
            .collect::<Result<Vec<_>>>()?;
        LinearSystemBasis::from_basis(self.ambient, degree, self.field, forms)
    }

    /// Linear combination of the basis.
    pub fn combine(&self, coeffs: &[Scalar]) -> Result<MultiPoly> {
        if coeffs.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for a system of dimension {}",
                coeffs.len(),
                self.dim()
            )));
        }
        if self.basis.is_empty() {
            return Ok(MultiPoly::zero(self.ambient, self.degree, self.field));
        }
        MultiPoly::combination(coeffs, &self.basis)
    }

    /// A random member with coefficients drawn from the field.
    pub fn random_member<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Result<MultiPoly> {
        let coeffs: Vec<Scalar> = (0..self.dim()).map(|_| self.field.random(rng)).collect();
        self.combine(&coeffs)
    }
}

/// The space of forms of the multidegree satisfying every condition.
pub fn build_system(
    ambient: Ambient,
    degree: MultiDegree,
    field: Field,
    conditions: &[Condition],
) -> Result<LinearSystemBasis> {
    let monomials = monomial_basis(ambient, degree)?;
    let mut rows: Vec<Vector> = Vec::new();
    let mut labels = Vec::new();
    let mut block_sizes = Vec::new();
    for c in conditions {
        let r = c.rows(ambient, field, &monomials)?;
        labels.push(c.label());
        block_sizes.push(r.len());
        rows.extend(r);
    }
    let n = monomials.len();
    let matrix = ExactMatrix::from_rows(field, n, rows)?;
    let kernel = kernel_basis(&matrix)?;
    let rank = matrix.rank();
    if rank + kernel.len() != n {
        return Err(Error::Internal("rank and nullity do not add up".into()));
    }
    let system = LinearSystemBasis::from_vectors(
        ambient,
        degree,
        field,
        monomials,
        &kernel,
        Some(ConditionMatrix {
            labels,
            block_sizes,
            rank,
            matrix,
        }),
    )?;
    for f in &system.basis {
        for c in conditions {
            if !c.holds(f)? {
                return Err(Error::Internal(format!(
                    "basis element violates `{}`",
                    c.label()
                )));
            }
        }
    }
    Ok(system)
}

/// Kernel of the symmetric multiplication map `Sym^2 A -> target`, in the
/// basis of products `a_i a_j` with `i <= j`.
#[derive(Debug, Clone, Serialize)]
pub struct SymmetricKernel {
    pub pairs: Vec<(usize, usize)>,
    pub image_rank: usize,
    #[serde(serialize_with = "serialize_vectors")]
    pub kernel: Vec<Vector>,
}

fn serialize_vectors<S: serde::Serializer>(
    v: &[Vector],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    v.iter()
        .map(|r| r.iter().map(|c| c.to_string()).collect::<Vec<_>>())
        .collect::<Vec<_>>()
        .serialize(s)
}

impl SymmetricKernel {
    pub fn dim(&self) -> usize {
        self.kernel.len()
    }

    /// Renders a kernel vector as a quadratic expression in named generators.
    pub fn describe(&self, v: &[Scalar], names: &[&str]) -> String {
        let mut parts = Vec::new();
        for (c, (i, j)) in v.iter().zip(&self.pairs) {
            if c.is_zero() {
                continue;
            }
            let mono = if i == j {
                format!("{}^2", names[*i])
            } else {
                format!("{}*{}", names[*i], names[*j])
            };
            parts.push(if c.is_one() {
                mono
            } else {
                format!("{c}*{mono}")
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Kernel of `Sym^2 span(elems) -> V` for a bilinear product landing in a
/// coordinate space.
pub fn sym_square_kernel<T>(
    elems: &[T],
    field: Field,
    product: impl Fn(&T, &T) -> Result<Vector>,
) -> Result<SymmetricKernel> {
    let mut pairs = Vec::new();
    let mut cols = Vec::new();
    for i in 0..elems.len() {
        for j in i..elems.len() {
            pairs.push((i, j));
            cols.push(product(&elems[i], &elems[j])?);
        }
    }
    let len = cols.first().map_or(0, Vec::len);
    let m = ExactMatrix::from_columns(field, len, &cols)?;
    let kernel = row_space(field, pairs.len(), &kernel_basis(&m)?)?;
    Ok(SymmetricKernel {
        pairs,
        image_rank: m.rank(),
        kernel,
    })
}

/// Kernel of multiplication `Sym^2 span(forms) -> forms of degree target`.
pub fn mult_map_kernel(forms: &[MultiPoly], target: MultiDegree) -> Result<SymmetricKernel> {
    let first = forms
        .first()
        .ok_or_else(|| Error::DimensionMismatch("empty system".into()))?;
    if first.degree().plus(&first.degree())? != target {
        return Err(Error::DegreeMismatch(format!(
            "twice {:?} is not {target:?}",
            first.degree()
        )));
    }
    let monomials = monomial_basis(first.ambient(), target)?;
    sym_square_kernel(forms, first.field(), |a, b| {
        a.try_mul(b)?.coefficient_vector(&monomials)
    })
}

/// Local intersection data of a form with a curve at candidate points.
#[derive(Debug, Clone, Serialize)]
pub struct RestrictionDivisor {
    pub points: Vec<Vec<String>>,
    pub orders: Vec<Order>,
    /// Sum of the finite orders.
    pub total: usize,
    /// Degree of the full intersection, when the curve is a complete
    /// intersection with known degree.
    pub expected: Option<usize>,
}

impl RestrictionDivisor {
    pub fn finite_orders(&self) -> Option<Vec<usize>> {
        self.orders.iter().map(Order::finite).collect()
    }
}

/// Intersection degree of a form with the complete intersection of
/// `equations`.
pub fn intersection_degree(f: &MultiPoly, equations: &[MultiPoly]) -> Option<usize> {
    match (f.degree(), equations) {
        (MultiDegree::Bi(a, b), [g]) => match g.degree() {
            MultiDegree::Bi(c, d) => Some((a * d + b * c) as usize),
            _ => None,
        },
        (MultiDegree::Total(d), eqs) if eqs.len() + 1 == f.ambient().nvars() - 1 => {
            let mut deg = d as usize;
            for g in eqs {
                match g.degree() {
                    MultiDegree::Total(e) => deg *= e as usize,
                    _ => return None,
                }
            }
            Some(deg)
        }
        _ => None,
    }
}

/// Orders of `f` along the curve `V(equations)` at each candidate point.
pub fn restriction_divisor(
    f: &MultiPoly,
    equations: &[MultiPoly],
    points: &[Vec<Scalar>],
    truncation: usize,
) -> Result<RestrictionDivisor> {
    let ideal = IdealPresentation::from_generators(equations.to_vec())?;
    if ideal.basis()?.contains(f)? {
        return Err(Error::IdenticallyZero);
    }
    let mut orders = Vec::new();
    let mut labels = Vec::new();
    for p in points {
        let jet = CurveJet::new(equations, p, truncation)?;
        orders.push(vanishing_order(f, &jet)?);
        labels.push(jet.center().iter().map(|c| c.to_string()).collect());
    }
    let total = orders.iter().filter_map(Order::finite).sum();
    Ok(RestrictionDivisor {
        points: labels,
        orders,
        total,
        expected: intersection_degree(f, equations),
    })
}
