use std::collections::HashMap;

use super::{Ambient, Exponent, MultiDegree, MultiPoly, MAX_VARS};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::ExactMatrix;

/// A linear automorphism of an ambient, acting on points.
///
/// On `P1xP1` the point map is `(x, y) -> (X x', Y y')` where `(x', y')` is
/// `(x, y)` or, when `swap` is set, `(y, x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Action {
    Bi {
        x: ExactMatrix,
        y: ExactMatrix,
        swap: bool,
    },
    Linear(ExactMatrix),
}

impl Action {
    pub fn bi(x: ExactMatrix, y: ExactMatrix, swap: bool) -> Result<Self> {
        for m in [&x, &y] {
            if m.rows() != 2 || m.cols() != 2 {
                return Err(Error::DimensionMismatch(
                    "P1xP1 actions use 2x2 blocks".into(),
                ));
            }
        }
        if x.field() != y.field() {
            return Err(Error::MixedField(
                x.field().to_string(),
                y.field().to_string(),
            ));
        }
        Ok(Action::Bi { x, y, swap })
    }

    pub fn identity(ambient: Ambient, field: Field) -> Self {
        match ambient {
            Ambient::P1xP1 => Action::Bi {
                x: ExactMatrix::identity(field, 2),
                y: ExactMatrix::identity(field, 2),
                swap: false,
            },
            _ => Action::Linear(ExactMatrix::identity(field, ambient.nvars())),
        }
    }

    /// The involution exchanging the two factors.
    pub fn factor_swap(field: Field) -> Self {
        Action::Bi {
            x: ExactMatrix::identity(field, 2),
            y: ExactMatrix::identity(field, 2),
            swap: true,
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Action::Bi { x, .. } => x.field(),
            Action::Linear(m) => m.field(),
        }
    }

    pub fn ambient(&self) -> Ambient {
        match self {
            Action::Bi { .. } => Ambient::P1xP1,
            Action::Linear(m) if m.rows() == 3 => Ambient::P2,
            Action::Linear(_) => Ambient::P3,
        }
    }

    pub fn swaps(&self) -> bool {
        matches!(self, Action::Bi { swap: true, .. })
    }

    /// `self ∘ other` as point maps.
    pub fn compose(&self, other: &Action) -> Result<Action> {
        match (self, other) {
            (
                Action::Bi {
                    x: a1,
                    y: b1,
                    swap: s1,
                },
                Action::Bi {
                    x: a2,
                    y: b2,
                    swap: s2,
                },
            ) => {
                let (x, y) = if *s1 {
                    (a1.mul(b2)?, b1.mul(a2)?)
                } else {
                    (a1.mul(a2)?, b1.mul(b2)?)
                };
                Ok(Action::Bi {
                    x,
                    y,
                    swap: s1 ^ s2,
                })
            }
            (Action::Linear(m1), Action::Linear(m2)) => Ok(Action::Linear(m1.mul(m2)?)),
            _ => Err(Error::AmbientMismatch(
                "composing actions on different ambients".into(),
            )),
        }
    }

    pub fn inverse(&self) -> Result<Action> {
        match self {
            Action::Bi { x, y, swap: false } => Ok(Action::Bi {
                x: x.inverse()?,
                y: y.inverse()?,
                swap: false,
            }),
            Action::Bi { x, y, swap: true } => Ok(Action::Bi {
                x: y.inverse()?,
                y: x.inverse()?,
                swap: true,
            }),
            Action::Linear(m) => Ok(Action::Linear(m.inverse()?)),
        }
    }

    /// Image of a point given by its homogeneous coordinates.
    pub fn apply_point(&self, p: &[Scalar]) -> Result<Vec<Scalar>> {
        match self {
            Action::Bi { x, y, swap } => {
                if p.len() != 4 {
                    return Err(Error::DimensionMismatch(
                        "P1xP1 points have 4 coordinates".into(),
                    ));
                }
                let (u, v) = if *swap {
                    (&p[2..], &p[..2])
                } else {
                    (&p[..2], &p[2..])
                };
                let mut out = x.mul_vec(u)?;
                out.extend(y.mul_vec(v)?);
                Ok(out)
            }
            Action::Linear(m) => m.mul_vec(p),
        }
    }

    /// Pullbacks of the coordinate functions: variable `i` maps to
    /// `(g z)_i`.
    pub fn variable_images(&self) -> Vec<MultiPoly> {
        let field = self.field();
        let ambient = self.ambient();
        let vars = MultiPoly::vars(ambient, field);
        let linear = |m: &ExactMatrix, i: usize, src: &[MultiPoly]| {
            let coeffs: Vec<Scalar> = m.row(i).to_vec();
            MultiPoly::combination(&coeffs, src).expect("linear forms of equal degree")
        };
        match self {
            Action::Bi { x, y, swap } => {
                let (u, v) = if *swap {
                    (&vars[2..], &vars[..2])
                } else {
                    (&vars[..2], &vars[2..])
                };
                vec![
                    linear(x, 0, u),
                    linear(x, 1, u),
                    linear(y, 0, v),
                    linear(y, 1, v),
                ]
            }
            Action::Linear(m) => (0..m.rows()).map(|i| linear(m, i, &vars)).collect(),
        }
    }
}

impl MultiPoly {
    /// Pullback `f ∘ g`.
    pub fn substitute(&self, g: &Action) -> Result<MultiPoly> {
        if g.ambient() != self.ambient {
            return Err(Error::AmbientMismatch(format!(
                "{} action on a form over {}",
                g.ambient(),
                self.ambient
            )));
        }
        if g.field() != self.field {
            return Err(Error::MixedField(
                g.field().to_string(),
                self.field.to_string(),
            ));
        }
        let degree = if g.swaps() {
            self.degree.swapped()
        } else {
            self.degree
        };
        self.substitute_vars_with_degree(&g.variable_images(), degree)
    }

    /// Replaces variable `i` by `images[i]`.
    pub fn substitute_vars(&self, images: &[MultiPoly]) -> Result<MultiPoly> {
        let target = images
            .first()
            .ok_or_else(|| Error::DimensionMismatch("no images".into()))?;
        let degree = match self.terms.keys().next() {
            Some(e) => image_degree(e, images)?,
            None => match super::monomial_basis(self.ambient, self.degree) {
                Ok(basis) => image_degree(&basis[0], images)?,
                Err(_) => target.ambient.zero_degree(),
            },
        };
        self.substitute_vars_with_degree(images, degree)
    }

    fn substitute_vars_with_degree(
        &self,
        images: &[MultiPoly],
        degree: MultiDegree,
    ) -> Result<MultiPoly> {
        if images.len() != self.ambient.nvars() {
            return Err(Error::DimensionMismatch(format!(
                "{} images for {} variables",
                images.len(),
                self.ambient.nvars()
            )));
        }
        let target = &images[0];
        let mut powers: HashMap<(usize, u16), MultiPoly> = HashMap::new();
        let mut out = MultiPoly::zero(target.ambient, degree, target.field);
        for (e, c) in &self.terms {
            let mut t = MultiPoly::constant(target.ambient, target.field, c.clone());
            for (i, img) in images.iter().enumerate() {
                if e[i] == 0 {
                    continue;
                }
                let p = powers
                    .entry((i, e[i]))
                    .or_insert_with(|| img.pow(e[i] as u32));
                t = t.try_mul(p)?;
            }
            out = out.try_add(&t)?;
        }
        Ok(out)
    }
}

fn image_degree(e: &Exponent, images: &[MultiPoly]) -> Result<MultiDegree> {
    let mut d = images[0].ambient.zero_degree();
    for i in 0..MAX_VARS.min(images.len()) {
        for _ in 0..e[i] {
            d = d.plus(&images[i].degree)?;
        }
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::named;

    fn mat(f: Field, a: [[i64; 2]; 2]) -> ExactMatrix {
        ExactMatrix::from_rows(
            f,
            2,
            a.iter()
                .map(|r| r.iter().map(|&v| f.from_i64(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn pullback_composes_contravariantly() {
        let f = Field::Prime(10007);
        let g = Action::bi(mat(f, [[0, 1], [1, 0]]), mat(f, [[1, 0], [1, -1]]), true).unwrap();
        let h = Action::bi(mat(f, [[1, 0], [1, -1]]), mat(f, [[2, 1], [1, 1]]), false).unwrap();
        let c = named::six_line_product(f) + named::forms(f).l.pow(3);
        // (f ∘ g) ∘ h = f ∘ (g ∘ h)
        let lhs = c.substitute(&g).unwrap().substitute(&h).unwrap();
        let rhs = c.substitute(&g.compose(&h).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        let back = c
            .substitute(&g)
            .unwrap()
            .substitute(&g.inverse().unwrap())
            .unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn point_map_matches_pullback() {
        let f = Field::Prime(101);
        let g = Action::bi(mat(f, [[3, 1], [1, 5]]), mat(f, [[1, 2], [0, 1]]), true).unwrap();
        let form = named::forms(f).h1.pow(2);
        let p: Vec<Scalar> = [2, 7, 9, 4].iter().map(|&v| f.from_i64(v)).collect();
        let image = g.apply_point(&p).unwrap();
        assert_eq!(form.substitute(&g).unwrap().eval(&p), form.eval(&image));
    }

    #[test]
    fn swap_changes_bidegree() {
        let q = Field::Rational;
        let xc = named::x_cubic(q);
        let swapped = xc.substitute(&Action::factor_swap(q)).unwrap();
        assert_eq!(swapped, named::y_cubic(q));
        assert_eq!(swapped.degree(), MultiDegree::Bi(0, 3));
    }
}
