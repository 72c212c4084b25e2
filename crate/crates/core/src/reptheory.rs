//! The stabilizer of three diagonal points of `P1xP1`: the diagonal `S3`
//! times the factor exchange, its induced matrices on spaces of forms, and
//! isotypic decompositions.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::{intersection, kernel_basis, row_space, ExactMatrix, Vector};
use crate::linsys::LinearSystemBasis;
use crate::poly::{normalize_point, Action, Ambient, MultiPoly};

pub const GROUP_ORDER: usize = 12;

/// The three diagonal points `(1:0)x(1:0)`, `(0:1)x(0:1)`, `(1:1)x(1:1)`.
pub fn marked_points(field: Field) -> [Vec<Scalar>; 3] {
    let (z, o) = (field.zero(), field.one());
    [
        vec![o.clone(), z.clone(), o.clone(), z.clone()],
        vec![z.clone(), o.clone(), z.clone(), o.clone()],
        vec![o.clone(), o.clone(), o.clone(), o],
    ]
}

/// Conjugacy class in `S3` of the swap-free part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleType {
    Identity,
    Transposition,
    ThreeCycle,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupElement {
    sigma: ExactMatrix,
    swap: bool,
    action: Action,
    inverse: Action,
    permutation: [usize; 3],
}

impl GroupElement {
    fn new(sigma: ExactMatrix, swap: bool) -> Result<Self> {
        let sigma = normalize_sign(sigma);
        let action = Action::bi(sigma.clone(), sigma.clone(), swap)?;
        let inverse = action.inverse()?;
        let field = sigma.field();
        let marks = marked_points(field);
        let mut permutation = [0; 3];
        for (i, p) in marks.iter().enumerate() {
            let img = normalize_point(Ambient::P1xP1, &action.apply_point(p)?)?;
            permutation[i] = marks
                .iter()
                .position(|q| normalize_point(Ambient::P1xP1, q).ok().as_ref() == Some(&img))
                .ok_or_else(|| {
                    Error::Internal("group element moves a marked point off the set".into())
                })?;
        }
        Ok(GroupElement {
            sigma,
            swap,
            action,
            inverse,
            permutation,
        })
    }

    pub fn sigma(&self) -> &ExactMatrix {
        &self.sigma
    }

    pub fn swaps(&self) -> bool {
        self.swap
    }

    pub fn action(&self) -> &Action {
        &self.action
    }

    /// `i -> permutation[i]` on the marked points.
    pub fn permutation(&self) -> [usize; 3] {
        self.permutation
    }

    pub fn cycle_type(&self) -> CycleType {
        let fixed = (0..3).filter(|&i| self.permutation[i] == i).count();
        match fixed {
            3 => CycleType::Identity,
            1 => CycleType::Transposition,
            _ => CycleType::ThreeCycle,
        }
    }

    /// Sign of the permutation of the marked points.
    pub fn sgn(&self) -> i64 {
        match self.cycle_type() {
            CycleType::Transposition => -1,
            _ => 1,
        }
    }

    pub fn is_identity(&self) -> bool {
        !self.swap && self.cycle_type() == CycleType::Identity
    }

    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        let swap = self.swap ^ other.swap;
        GroupElement::new(self.sigma.mul(&other.sigma)?, swap)
    }

    /// `f o g^-1`, the left action on forms.
    pub fn push_forward(&self, f: &MultiPoly) -> Result<MultiPoly> {
        f.substitute(&self.inverse)
    }

    /// `f o g`.
    pub fn pull_back(&self, f: &MultiPoly) -> Result<MultiPoly> {
        f.substitute(&self.action)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.permutation;
        write!(f, "({} {} {})", p[0] + 1, p[1] + 1, p[2] + 1)?;
        if self.swap {
            write!(f, "*iota")?;
        }
        Ok(())
    }
}

/// Picks the representative of `{M, -M}` whose first nonzero entry is
/// sign-canonical; `-I` acts trivially on forms of even bidegree.
fn normalize_sign(m: ExactMatrix) -> ExactMatrix {
    let first = (0..m.rows())
        .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
        .map(|(i, j)| m.get(i, j).clone())
        .find(|c| !c.is_zero());
    match first {
        Some(c) if !c.is_sign_canonical() => {
            let mut out = m.clone();
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    out.set(i, j, -m.get(i, j));
                }
            }
            out
        }
        _ => m,
    }
}

/// The three generators: the exchange of `o1, o2`, the exchange of `o1, o3`,
/// and the factor swap.
pub fn generators(field: Field) -> Result<[GroupElement; 3]> {
    let m = |rows: [[i64; 2]; 2]| {
        ExactMatrix::from_rows(
            field,
            2,
            rows.iter()
                .map(|r| r.iter().map(|&c| field.from_i64(c)).collect())
                .collect(),
        )
    };
    Ok([
        GroupElement::new(m([[0, 1], [1, 0]])?, false)?,
        GroupElement::new(m([[1, 0], [1, -1]])?, false)?,
        GroupElement::new(ExactMatrix::identity(field, 2), true)?,
    ])
}

/// Closure of the generators: identity first, then in breadth-first order.
pub fn build_group(field: Field) -> Result<Vec<GroupElement>> {
    let gens = generators(field)?;
    let id = GroupElement::new(ExactMatrix::identity(field, 2), false)?;
    let mut elems = vec![id];
    let mut frontier = 0;
    while frontier < elems.len() {
        let g = elems[frontier].clone();
        for s in &gens {
            let h = g.compose(s)?;
            if !elems.contains(&h) {
                elems.push(h);
            }
            if elems.len() > GROUP_ORDER {
                return Err(Error::Internal(
                    "generators close to more than 12 elements".into(),
                ));
            }
        }
        frontier += 1;
    }
    if elems.len() != GROUP_ORDER || elems.iter().filter(|g| !g.swaps()).count() != 6 {
        return Err(Error::Internal(format!(
            "group closure has {} elements",
            elems.len()
        )));
    }
    for g in &elems {
        for h in &elems {
            if !elems.contains(&g.compose(h)?) {
                return Err(Error::Internal("group is not closed".into()));
            }
        }
    }
    Ok(elems)
}

/// Matrix of `f -> f o g^-1` on the echelon basis of the system.
pub fn induced_matrix(g: &GroupElement, system: &LinearSystemBasis) -> Result<ExactMatrix> {
    let field = system.field();
    let n = system.dim();
    let mut cols = Vec::with_capacity(n);
    for b in system.basis() {
        let img = g.push_forward(b)?;
        if img.degree() != system.degree() && !img.is_zero() {
            return Err(Error::NotInvariant);
        }
        cols.push(system.coordinates(&img)?.ok_or(Error::NotInvariant)?);
    }
    if n == 0 {
        return Ok(ExactMatrix::zeros(field, 0, 0));
    }
    ExactMatrix::from_columns(field, n, &cols)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Isotype {
    Trivial,
    Sign,
    Standard,
}

impl Isotype {
    pub const ALL: [Isotype; 3] = [Isotype::Trivial, Isotype::Sign, Isotype::Standard];

    pub fn dim(&self) -> usize {
        match self {
            Isotype::Standard => 2,
            _ => 1,
        }
    }

    pub fn character(&self, c: CycleType) -> i64 {
        match (self, c) {
            (Isotype::Trivial, _) => 1,
            (Isotype::Sign, CycleType::Transposition) => -1,
            (Isotype::Sign, _) => 1,
            (Isotype::Standard, CycleType::Identity) => 2,
            (Isotype::Standard, CycleType::Transposition) => 0,
            (Isotype::Standard, CycleType::ThreeCycle) => -1,
        }
    }
}

impl fmt::Display for Isotype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Isotype::Trivial => "trivial",
            Isotype::Sign => "sign",
            Isotype::Standard => "standard",
        })
    }
}

/// An irreducible summand: its swap eigenvalue, isotype and a basis.
#[derive(Debug, Clone, Serialize)]
pub struct Summand {
    pub eigenvalue: i64,
    pub isotype: Isotype,
    pub dim: usize,
    pub basis: Vec<MultiPoly>,
    #[serde(skip)]
    pub coords: Vec<Vector>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RepresentationDecomposition {
    #[serde(skip)]
    pub system: LinearSystemBasis,
    pub summands: Vec<Summand>,
}

impl RepresentationDecomposition {
    pub fn dims(&self, eigenvalue: i64) -> Vec<usize> {
        self.summands
            .iter()
            .filter(|s| s.eigenvalue == eigenvalue)
            .map(|s| s.dim)
            .collect()
    }

    pub fn eigenspace_dim(&self, eigenvalue: i64) -> usize {
        self.dims(eigenvalue).iter().sum()
    }

    /// Total dimension of the `(eigenvalue, isotype)` isotypic piece.
    pub fn isotypic_dim(&self, eigenvalue: i64, isotype: Isotype) -> usize {
        self.summands
            .iter()
            .filter(|s| s.eigenvalue == eigenvalue && s.isotype == isotype)
            .map(|s| s.dim)
            .sum()
    }
}

fn image_of(m: &ExactMatrix) -> Result<Vec<Vector>> {
    row_space(m.field(), m.rows(), &m.transpose().row_vectors())
}

fn combination_matrix(
    field: Field,
    n: usize,
    terms: &[(Scalar, &ExactMatrix)],
) -> Result<ExactMatrix> {
    let mut out = ExactMatrix::zeros(field, n, n);
    for (c, m) in terms {
        for i in 0..n {
            for j in 0..n {
                let v = out.get(i, j) + &(c * m.get(i, j));
                out.set(i, j, v);
            }
        }
    }
    Ok(out)
}

/// True iff every matrix maps the span of `vecs` into itself.
pub fn is_stable(vecs: &[Vector], matrices: &[ExactMatrix]) -> Result<bool> {
    let Some(first) = vecs.first() else {
        return Ok(true);
    };
    let field = first[0].field();
    let n = first.len();
    let base = row_space(field, n, vecs)?;
    for m in matrices {
        let mut all = base.clone();
        for v in &base {
            all.push(m.mul_vec(v)?);
        }
        if row_space(field, n, &all)?.len() != base.len() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Restriction of `m` to the span of the independent `vecs`.
pub fn restricted_matrix(m: &ExactMatrix, vecs: &[Vector]) -> Result<ExactMatrix> {
    let field = m.field();
    let k = vecs.len();
    let mut cols = Vec::with_capacity(k);
    for v in vecs {
        let img = m.mul_vec(v)?;
        cols.push(crate::linalg::coordinates_in(&img, vecs)?.ok_or(Error::NotInvariant)?);
    }
    ExactMatrix::from_columns(field, k, &cols)
}

/// Splits the system into irreducible summands: swap eigenspaces, then
/// `S3` isotypic pieces by character projectors, then irreducibles.
pub fn decompose(
    system: &LinearSystemBasis,
    group: &[GroupElement],
) -> Result<RepresentationDecomposition> {
    let field = system.field();
    if matches!(field.characteristic(), 2 | 3) {
        return Err(Error::BadCharacteristic(field.characteristic()));
    }
    if group.len() != GROUP_ORDER {
        return Err(Error::Internal(format!("group of order {}", group.len())));
    }
    let n = system.dim();
    let matrices = group
        .iter()
        .map(|g| induced_matrix(g, system))
        .collect::<Result<Vec<_>>>()?;
    let iota = group
        .iter()
        .position(|g| g.swaps() && g.cycle_type() == CycleType::Identity)
        .ok_or_else(|| Error::Internal("no factor swap in the group".into()))?;
    let s3: Vec<usize> = (0..GROUP_ORDER).filter(|&i| !group[i].swaps()).collect();
    let transposition = *s3
        .iter()
        .find(|&&i| group[i].cycle_type() == CycleType::Transposition)
        .expect("S3 has transpositions");
    let three_cycle = *s3
        .iter()
        .find(|&&i| group[i].cycle_type() == CycleType::ThreeCycle)
        .expect("S3 has 3-cycles");
    let half = field.from_i64(2).inv()?;
    let sixth = field.from_i64(6).inv()?;
    let id = ExactMatrix::identity(field, n);

    let mut summands = Vec::new();
    let mut collected: Vec<Vector> = Vec::new();
    for eigenvalue in [1i64, -1] {
        let p_eig = combination_matrix(
            field,
            n,
            &[
                (half.clone(), &id),
                (&half * &field.from_i64(eigenvalue), &matrices[iota]),
            ],
        )?;
        for isotype in Isotype::ALL {
            let terms: Vec<(Scalar, &ExactMatrix)> = s3
                .iter()
                .map(|&i| {
                    let c = field
                        .from_i64(isotype.dim() as i64 * isotype.character(group[i].cycle_type()));
                    (&c * &sixth, &matrices[i])
                })
                .collect();
            let p_iso = combination_matrix(field, n, &terms)?;
            let piece = image_of(&p_iso.mul(&p_eig)?)?;
            if piece.is_empty() {
                continue;
            }
            let mut parts: Vec<Vec<Vector>> = match isotype {
                Isotype::Standard => {
                    let fixed = kernel_basis(&matrices[transposition].shifted(&field.one())?)?;
                    let w = intersection(field, n, &piece, &fixed)?;
                    let mut parts = Vec::new();
                    for v in w {
                        let cv = matrices[three_cycle].mul_vec(&v)?;
                        parts.push(row_space(field, n, &[v, cv])?);
                    }
                    parts
                }
                _ => piece.iter().map(|v| vec![v.clone()]).collect(),
            };
            parts.sort_by_key(|p| p[0].iter().position(|c| !c.is_zero()));
            for coords in parts {
                if coords.len() != isotype.dim() || !is_stable(&coords, &matrices)? {
                    return Err(Error::Internal(format!(
                        "{isotype} piece of swap eigenvalue {eigenvalue} did not split"
                    )));
                }
                collected.extend(coords.iter().cloned());
                let basis = coords
                    .iter()
                    .map(|c| system.combine(c))
                    .collect::<Result<Vec<_>>>()?;
                summands.push(Summand {
                    eigenvalue,
                    isotype,
                    dim: coords.len(),
                    basis,
                    coords,
                });
            }
        }
    }
    if collected.len() != n || (n > 0 && row_space(field, n, &collected)?.len() != n) {
        return Err(Error::Internal("summands do not span the system".into()));
    }
    Ok(RepresentationDecomposition {
        system: system.clone(),
        summands,
    })
}

/// True iff no non-identity swap-free element acts trivially on the summand.
pub fn is_faithful_on(
    summand: &Summand,
    system: &LinearSystemBasis,
    group: &[GroupElement],
) -> Result<bool> {
    let k = summand.coords.len();
    for g in group.iter().filter(|g| !g.swaps() && !g.is_identity()) {
        let m = restricted_matrix(&induced_matrix(g, system)?, &summand.coords)?;
        if m == ExactMatrix::identity(system.field(), k) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The scalar `lambda` with `g^* f = lambda f`, if `f` is an eigenform.
pub fn pullback_scalar(g: &GroupElement, f: &MultiPoly) -> Result<Option<Scalar>> {
    Ok(g.pull_back(f)?.ratio_to(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{named, MultiDegree};

    fn r11(field: Field) -> LinearSystemBasis {
        LinearSystemBasis::full(Ambient::P1xP1, MultiDegree::Bi(1, 1), field).unwrap()
    }

    #[test]
    fn group_has_twelve_elements() {
        for field in [Field::Rational, Field::Prime(10007)] {
            let g = build_group(field).unwrap();
            assert_eq!(g.len(), 12);
            assert!(g[0].is_identity());
            let iota = generators(field).unwrap()[2].clone();
            assert!(iota.compose(&iota).unwrap().is_identity());
            let types: Vec<CycleType> = g
                .iter()
                .filter(|e| !e.swaps())
                .map(|e| e.cycle_type())
                .collect();
            assert_eq!(
                types
                    .iter()
                    .filter(|t| **t == CycleType::Transposition)
                    .count(),
                3
            );
            assert_eq!(
                types
                    .iter()
                    .filter(|t| **t == CycleType::ThreeCycle)
                    .count(),
                2
            );
        }
    }

    #[test]
    fn diagonal_is_preserved_up_to_sign() {
        let q = Field::Rational;
        let forms = named::forms(q);
        for g in build_group(q).unwrap() {
            let lambda = pullback_scalar(&g, &forms.l).unwrap().unwrap();
            assert_eq!(lambda.pow(2), q.one());
        }
    }

    #[test]
    fn homomorphism_on_r11() {
        let f = Field::Prime(10007);
        let g = build_group(f).unwrap();
        let sys = r11(f);
        let mats: Vec<ExactMatrix> = g.iter().map(|e| induced_matrix(e, &sys).unwrap()).collect();
        for (i, a) in g.iter().enumerate() {
            for (j, b) in g.iter().enumerate() {
                let ab = a.compose(b).unwrap();
                let k = g.iter().position(|e| *e == ab).unwrap();
                assert_eq!(mats[k], mats[i].mul(&mats[j]).unwrap());
            }
        }
    }

    #[test]
    fn iota_on_the_named_basis() {
        let q = Field::Rational;
        let fm = named::forms(q);
        let iota = &generators(q).unwrap()[2];
        assert_eq!(iota.push_forward(&fm.l).unwrap(), -&fm.l);
        for h in [&fm.h1, &fm.h2, &fm.h3] {
            assert_eq!(&iota.push_forward(h).unwrap(), h);
        }
    }

    #[test]
    fn transposition_exchanges_h1_h2() {
        let q = Field::Rational;
        let fm = named::forms(q);
        let t = &generators(q).unwrap()[0];
        assert!(t.push_forward(&fm.h1).unwrap().is_proportional(&fm.h2));
        assert!(t.push_forward(&fm.h2).unwrap().is_proportional(&fm.h1));
    }

    #[test]
    fn r11_decomposition() {
        for field in [Field::Rational, Field::Prime(10007)] {
            let g = build_group(field).unwrap();
            let sys = r11(field);
            let d = decompose(&sys, &g).unwrap();
            assert_eq!(d.dims(1), vec![1, 2]);
            assert_eq!(d.dims(-1), vec![1]);
            let fm = named::forms(field);
            assert!(d.summands[2].basis[0].is_proportional(&fm.l));
            let hsum = &(&fm.h1 + &fm.h2) - &fm.h3;
            assert!(d.summands[0].basis[0].is_proportional(&hsum));
            assert!(is_faithful_on(&d.summands[1], &sys, &g).unwrap());
        }
    }

    #[test]
    fn small_characteristic_is_rejected() {
        let f = Field::Prime(3);
        let sys = r11(f);
        let g = build_group(Field::Prime(10007)).unwrap();
        assert_eq!(
            decompose(&sys, &g).unwrap_err(),
            Error::BadCharacteristic(3)
        );
    }

    #[test]
    fn unstable_system_is_rejected() {
        let q = Field::Rational;
        let [x0, _, y0, _] = named::vars(q);
        let sys = LinearSystemBasis::from_basis(
            Ambient::P1xP1,
            MultiDegree::Bi(1, 1),
            q,
            vec![&x0 * &y0],
        )
        .unwrap();
        let t = &generators(q).unwrap()[0];
        assert_eq!(induced_matrix(t, &sys).unwrap_err(), Error::NotInvariant);
    }
}
