use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spincheck::elliptic::{EllPoint, WeierstrassCurve};
use spincheck::groebner::{ideal_membership, IdealPresentation};
use spincheck::linalg::kernel_basis;
use spincheck::poly::{
    monomial_basis, vanishing_order, Action, CurveJet, Order, DEFAULT_TRUNCATION,
};
use spincheck::{Ambient, ExactMatrix, Field, MultiDegree, MultiPoly, Scalar};

const P: u64 = 10007;

fn fp() -> Field {
    Field::Prime(P)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Sparse-ish matrix so that rank deficiency actually occurs.
fn random_matrix(field: Field, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> ExactMatrix {
    let entries = (0..rows * cols)
        .map(|_| match field {
            Field::Rational if rng.gen_bool(0.4) => field.zero(),
            Field::Rational => field.from_i64(rng.gen_range(-3..=3)),
            _ if rng.gen_bool(0.4) => field.zero(),
            _ => field.random(rng),
        })
        .collect();
    ExactMatrix::new(field, rows, cols, entries).unwrap()
}

fn random_form(
    ambient: Ambient,
    degree: MultiDegree,
    field: Field,
    rng: &mut ChaCha8Rng,
) -> MultiPoly {
    let monomials = monomial_basis(ambient, degree).unwrap();
    let coeffs: Vec<Scalar> = monomials.iter().map(|_| field.random(rng)).collect();
    MultiPoly::from_coefficients(ambient, degree, field, &monomials, &coeffs).unwrap()
}

/// Subtracts a multiple of a monomial equal to 1 at `p` so that `f(p) = 0`.
fn through(f: &MultiPoly, p: &[Scalar]) -> MultiPoly {
    let anchor = monomial_basis(f.ambient(), f.degree())
        .unwrap()
        .into_iter()
        .find(|e| {
            let m = MultiPoly::monomial(f.ambient(), f.field(), *e, f.field().one());
            m.eval(p).is_one()
        })
        .unwrap();
    let correction =
        MultiPoly::from_coefficients(f.ambient(), f.degree(), f.field(), &[anchor], &[f.eval(p)])
            .unwrap();
    f.try_sub(&correction).unwrap()
}

fn random_gl2(field: Field, rng: &mut ChaCha8Rng) -> ExactMatrix {
    loop {
        let m = ExactMatrix::new(field, 2, 2, (0..4).map(|_| field.random(rng)).collect()).unwrap();
        if !m.determinant().unwrap().is_zero() {
            return m;
        }
    }
}

fn random_action(field: Field, rng: &mut ChaCha8Rng) -> Action {
    Action::bi(
        random_gl2(field, rng),
        random_gl2(field, rng),
        rng.gen_bool(0.5),
    )
    .unwrap()
}

fn random_curve(rng: &mut ChaCha8Rng) -> WeierstrassCurve {
    loop {
        if let Ok(c) = WeierstrassCurve::new(fp().random(rng), fp().random(rng)) {
            return c;
        }
    }
}

fn p1p1_point(field: Field, rng: &mut ChaCha8Rng) -> Vec<Scalar> {
    vec![
        field.one(),
        field.random(rng),
        field.one(),
        field.random(rng),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_plus_nullity(seed: u64, rows in 1usize..7, cols in 1usize..8, rational: bool) {
        let field = if rational { Field::Rational } else { fp() };
        let m = random_matrix(field, rows, cols, &mut rng(seed));
        let kernel = kernel_basis(&m).unwrap();
        prop_assert_eq!(m.rank() + kernel.len(), cols);
        prop_assert_eq!(m.rank(), m.transpose().rank());
        for v in &kernel {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(Scalar::is_zero));
        }
        let k = ExactMatrix::from_rows(field, cols, kernel.clone()).unwrap();
        prop_assert_eq!(k.rank(), kernel.len());
    }

    #[test]
    fn determinant_is_multiplicative(seed: u64, n in 1usize..5, rational: bool) {
        let field = if rational { Field::Rational } else { fp() };
        let mut r = rng(seed);
        let a = random_matrix(field, n, n, &mut r);
        let b = random_matrix(field, n, n, &mut r);
        let lhs = a.mul(&b).unwrap().determinant().unwrap();
        let rhs = &a.determinant().unwrap() * &b.determinant().unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(a.determinant().unwrap().is_zero(), a.rank() < n);
    }

    #[test]
    fn group_law_is_abelian_and_associative(seed: u64) {
        let mut r = rng(seed);
        let e = random_curve(&mut r);
        let [p, q, s] = [0; 3].map(|_| e.random_point(&mut r).unwrap());
        let pq = e.add(&p, &q).unwrap();
        prop_assert!(e.contains(&pq));
        prop_assert_eq!(&pq, &e.add(&q, &p).unwrap());
        prop_assert_eq!(
            e.add(&pq, &s).unwrap(),
            e.add(&p, &e.add(&q, &s).unwrap()).unwrap()
        );
        prop_assert_eq!(e.add(&p, &e.neg(&p)).unwrap(), EllPoint::Infinity);
        prop_assert_eq!(e.add(&p, &EllPoint::Infinity).unwrap(), p.clone());
    }

    #[test]
    fn scalar_multiplication_is_linear(seed: u64, m in -20i64..20, n in -20i64..20) {
        let mut r = rng(seed);
        let e = random_curve(&mut r);
        let p = e.random_point(&mut r).unwrap();
        let lhs = e.mul(&p, m + n).unwrap();
        let rhs = e.add(&e.mul(&p, m).unwrap(), &e.mul(&p, n).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitution_respects_composition(seed: u64, a in 0u32..4, b in 0u32..4) {
        let mut r = rng(seed);
        let f = random_form(Ambient::P1xP1, MultiDegree::Bi(a, b), fp(), &mut r);
        let g = random_action(fp(), &mut r);
        let h = random_action(fp(), &mut r);
        let lhs = f.substitute(&g).unwrap().substitute(&h).unwrap();
        let rhs = f.substitute(&g.compose(&h).unwrap()).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        let back = lhs.substitute(&h.inverse().unwrap()).unwrap().substitute(&g.inverse().unwrap()).unwrap();
        prop_assert_eq!(&back, &f);
    }

    #[test]
    fn pullback_evaluates_at_image(seed: u64) {
        let mut r = rng(seed);
        let f = random_form(Ambient::P1xP1, MultiDegree::Bi(2, 3), fp(), &mut r);
        let g = random_action(fp(), &mut r);
        let p = p1p1_point(fp(), &mut r);
        prop_assert_eq!(f.substitute(&g).unwrap().eval(&p), f.eval(&g.apply_point(&p).unwrap()));
    }

    #[test]
    fn vanishing_order_is_additive(seed: u64, a in 1u32..3, b in 1u32..3) {
        let mut r = rng(seed);
        let p = p1p1_point(fp(), &mut r);
        let curve = through(&random_form(Ambient::P1xP1, MultiDegree::Bi(1, 1), fp(), &mut r), &p);
        let jet = CurveJet::new(std::slice::from_ref(&curve), &p, DEFAULT_TRUNCATION);
        prop_assume!(jet.is_ok());
        let jet = jet.unwrap();
        let f = through(&random_form(Ambient::P1xP1, MultiDegree::Bi(a, b), fp(), &mut r), &p);
        let g = random_form(Ambient::P1xP1, MultiDegree::Bi(b, a), fp(), &mut r);
        let g = if r.gen_bool(0.5) { through(&g, &p) } else { g };
        let fg = f.try_mul(&g).unwrap();
        match (vanishing_order(&f, &jet).unwrap(), vanishing_order(&g, &jet).unwrap()) {
            (Order::Finite(i), Order::Finite(j)) if i + j <= DEFAULT_TRUNCATION => {
                prop_assert_eq!(vanishing_order(&fg, &jet).unwrap(), Order::Finite(i + j));
            }
            (oi, oj) => {
                let bound = oi.finite().unwrap_or(DEFAULT_TRUNCATION) + oj.finite().unwrap_or(0);
                prop_assert!(vanishing_order(&fg, &jet).unwrap().at_least(bound.min(DEFAULT_TRUNCATION + 1)));
            }
        }
        prop_assert_eq!(vanishing_order(&curve, &jet).unwrap(), Order::AtLeast(DEFAULT_TRUNCATION + 1));
    }

    #[test]
    fn jets_solve_their_equations(seed: u64, d in 1u32..4, space in 0usize..3) {
        let mut r = rng(seed);
        let (ambient, degrees, p) = match space {
            0 => (Ambient::P1xP1, vec![MultiDegree::Bi(d, 4 - d)], p1p1_point(fp(), &mut r)),
            1 => (Ambient::P2, vec![MultiDegree::Total(d + 1)], vec![fp().one(), fp().random(&mut r), fp().random(&mut r)]),
            _ => (
                Ambient::P3,
                vec![MultiDegree::Total(2), MultiDegree::Total(d)],
                vec![fp().one(), fp().random(&mut r), fp().random(&mut r), fp().random(&mut r)],
            ),
        };
        let equations: Vec<MultiPoly> = degrees
            .iter()
            .map(|deg| through(&random_form(ambient, *deg, fp(), &mut r), &p))
            .collect();
        let jet = CurveJet::new(&equations, &p, DEFAULT_TRUNCATION);
        prop_assume!(jet.is_ok());
        let jet = jet.unwrap();
        prop_assert!(jet.self_check().is_ok());
        for q in &equations {
            let s = jet.evaluate(q).unwrap();
            prop_assert!(s.coeffs().iter().all(Scalar::is_zero));
        }
        prop_assert_eq!(jet.center(), &p[..]);
    }

    #[test]
    fn ideal_contains_combinations(seed: u64) {
        let mut r = rng(seed);
        let f = random_form(Ambient::P2, MultiDegree::Total(2), fp(), &mut r);
        let g = random_form(Ambient::P2, MultiDegree::Total(2), fp(), &mut r);
        let a = random_form(Ambient::P2, MultiDegree::Total(1), fp(), &mut r);
        let b = random_form(Ambient::P2, MultiDegree::Total(1), fp(), &mut r);
        let combo = a.try_mul(&f).unwrap().try_add(&b.try_mul(&g).unwrap()).unwrap();
        let ideal = IdealPresentation::new(Ambient::P2, fp(), vec![f, g]).unwrap();
        prop_assert!(ideal_membership(&combo, &ideal).unwrap());
        // Two general conics meet in four points, so no linear form lies in the ideal.
        prop_assert!(!ideal_membership(&a, &ideal).unwrap() || a.is_zero());
    }
}
