//! Genus-4 curves with a 3-spin structure from an elliptic quartic `E` in
//! `P3`, a 3-torsion point `tau` and a divisor `t` with sum `tau`.

use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{require_prime, stage, strings, CheckReport, PipelineConfig};
use crate::elliptic::{
    coplanarity_test, sample_curve_with_torsion_rng, EllPoint, QuarticModel, WeierstrassCurve,
};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::groebner::{graded_piece, ideal_membership, is_smooth, IdealPresentation};
use crate::linalg::row_space;
use crate::linsys::{
    build_system, restriction_divisor, sym_square_kernel, Condition, LinearSystemBasis,
};
use crate::poly::{monomial_basis, Ambient, CurveJet, MultiDegree, MultiPoly, DEFAULT_TRUNCATION};

pub const NAME: &str = "genus4-spin3";

#[derive(Debug, Clone)]
pub struct Genus4Spin3Instance {
    pub config: PipelineConfig,
    pub curve: WeierstrassCurve,
    pub tau: EllPoint,
    pub t: Vec<EllPoint>,
    pub model: QuarticModel,
    /// Images of `t` in `P3`.
    pub t_points: Vec<Vec<Scalar>>,
    /// Cubics cutting at least `3t` on `E`.
    pub cubics: LinearSystemBasis,
    /// A cubic with `F . E = 3t`, outside the ideal of `E`.
    pub f: MultiPoly,
    /// The cubic of the sampled canonical curve `C = V(Q, F_C)`.
    pub f_c: MultiPoly,
}

impl Genus4Spin3Instance {
    pub fn q(&self) -> &MultiPoly {
        self.model.q()
    }

    pub fn s(&self) -> &MultiPoly {
        self.model.s()
    }

    pub fn field(&self) -> Field {
        self.config.field
    }

    pub fn to_json(&self) -> Value {
        json!({
            "curve": self.curve,
            "tau": self.tau,
            "t": self.t,
            "t_points": self.t_points.iter().map(|p| strings(p)).collect::<Vec<_>>(),
            "Q": self.q(),
            "S": self.s(),
            "F": self.f,
            "F_C": self.f_c,
        })
    }
}

fn quadric_pencil(inst: &Genus4Spin3Instance) -> Result<LinearSystemBasis> {
    LinearSystemBasis::from_basis(
        Ambient::P3,
        MultiDegree::Total(2),
        inst.field(),
        vec![inst.q().clone(), inst.s().clone()],
    )
}

/// `g * (forms of degree 1)`.
fn linear_multiples(g: &MultiPoly) -> Result<Vec<MultiPoly>> {
    MultiPoly::vars(Ambient::P3, g.field())
        .iter()
        .map(|x| g.try_mul(x))
        .collect()
}

fn jets_on(equations: &[MultiPoly], points: &[Vec<Scalar>]) -> Result<Vec<CurveJet>> {
    points
        .iter()
        .map(|p| CurveJet::new(equations, p, DEFAULT_TRUNCATION))
        .collect()
}

fn vanishing_at(jets: &[CurveJet], order: usize) -> Result<Vec<Condition>> {
    jets.iter()
        .map(|j| Condition::vanishing(j.clone(), order))
        .collect()
}

fn sample_t(
    curve: &WeierstrassCurve,
    tau: &EllPoint,
    rng: &mut ChaCha8Rng,
) -> Result<Option<Vec<EllPoint>>> {
    let mut t = Vec::with_capacity(4);
    for _ in 0..3 {
        t.push(curve.random_point(rng)?);
    }
    let partial = curve.divisor_class_sum(&t.iter().map(|p| (p.clone(), 1)).collect::<Vec<_>>())?;
    t.push(curve.sub(tau, &partial)?);
    let distinct = (0..4).all(|i| (0..i).all(|j| t[i] != t[j]));
    Ok((distinct && t.iter().all(|p| !p.is_infinity())).then_some(t))
}

/// Samples `(E, tau, t)`, builds the cubic system through `3t` and a smooth
/// canonical curve `C = V(Q, F_C)`.
pub fn genus4_spin3_forward(config: &PipelineConfig) -> (Option<Genus4Spin3Instance>, CheckReport) {
    let mut report = CheckReport::new(NAME, config.field, Some(config.seed));
    let outcome = forward(config, &mut report);
    if let Ok(inst) = &outcome {
        report.instance = Some(inst.to_json());
    }
    report.finish(outcome)
}

fn forward(config: &PipelineConfig, report: &mut CheckReport) -> Result<Genus4Spin3Instance> {
    let field = config.field;
    require_prime(field)?;
    let mut rng = config.rng();
    let cap = config.resample_cap;

    let (curve, tau) = stage(report, &mut rng, cap, "curve with 3-torsion", |rng| {
        sample_curve_with_torsion_rng(field, 3, rng, 1).map(Some)
    })?;
    report.observe("curve", &curve);
    report.observe("tau", &tau);
    report.check_true(
        "tau_order_3",
        "tau has exact order 3",
        curve.has_exact_order(&tau, 3)?,
    );
    report.check_false(
        "discriminant_nonzero",
        "E is smooth",
        curve.discriminant().is_zero(),
    );

    let model = curve.embed_quartic()?;
    let q = model.q().clone();
    let s = model.s().clone();
    let eq = [q.clone(), s.clone()];
    report.check_true(
        "quartic_smooth",
        "E is a smooth quartic in P3",
        is_smooth(&eq)?,
    );
    let quadrics = graded_piece(
        &IdealPresentation::from_generators(eq.to_vec())?,
        MultiDegree::Total(2),
    )?;
    report.check_eq(
        "quadrics_through_E",
        "two quadrics contain E",
        2,
        quadrics.dim(),
    );

    let t = stage(report, &mut rng, cap, "divisor t", |rng| {
        sample_t(&curve, &tau, rng)
    })?;
    let t_points = t
        .iter()
        .map(|p| model.map_point(p))
        .collect::<Result<Vec<_>>>()?;
    report.observe("t", &t);
    let weights: Vec<(EllPoint, i64)> = t.iter().map(|p| (p.clone(), 1)).collect();
    report.check_eq(
        "t_sum_is_tau",
        "t lies in |eps(1)|",
        tau.clone(),
        curve.divisor_class_sum(&weights)?,
    );
    report.check_true(
        "t_distinct",
        "t is reduced",
        (0..4).all(|i| (0..i).all(|j| t[i] != t[j])),
    );
    report.check_false(
        "t_coplanar",
        "t is not contained in a plane",
        coplanarity_test(&t_points)?,
    );

    let e_jets = jets_on(&eq, &t_points)?;
    let cubics = build_system(
        Ambient::P3,
        MultiDegree::Total(3),
        field,
        &vanishing_at(&e_jets, 3)?,
    )?;
    report.check_eq("cubic_system_dim", "h0(I_3t(3)) on P3", 9, cubics.dim());
    if let Some(m) = cubics.conditions() {
        report.observe("cubic_condition_rank", m.rank);
    }
    let mut e_cubics = linear_multiples(&q)?;
    e_cubics.extend(linear_multiples(&s)?);
    let e_cubics =
        LinearSystemBasis::from_basis(Ambient::P3, MultiDegree::Total(3), field, e_cubics)?;
    report.check_true(
        "cubics_through_E_included",
        "cubics containing E cut 3t",
        e_cubics.is_subspace_of(&cubics)?,
    );
    let q_multiples = LinearSystemBasis::from_basis(
        Ambient::P3,
        MultiDegree::Total(3),
        field,
        linear_multiples(&q)?,
    )?;
    let on_q = cubics.dim() - cubics.intersection(&q_multiples)?.dim();
    report.check_eq("cubic_system_on_Q_dim", "h0(I_3t/Q(3)) = 5", 5, on_q);

    let Some(f) = cubics.complement_of(&e_cubics)?.into_iter().next() else {
        return Err(Error::Internal("no cubic outside the ideal of E".into()));
    };
    let div = restriction_divisor(&f, &eq, &t_points, DEFAULT_TRUNCATION)?;
    report.observe("F_restriction", &div);
    report.check_eq(
        "F_orders",
        "F . E = 3t",
        "[3, 3, 3, 3]".to_string(),
        format!("{:?}", div.finite_orders().unwrap_or_default()),
    );
    report.check_eq("F_total", "3t has length 12", 12, div.total);

    let f_c = stage(report, &mut rng, cap, "smooth canonical curve", |rng| {
        let g = cubics.random_member(rng)?;
        if ideal_membership(&g, &IdealPresentation::from_generators(vec![q.clone()])?)? {
            return Ok(None);
        }
        Ok(is_smooth(&[q.clone(), g.clone()])?.then_some(g))
    })?;
    report.check_true(
        "C_smooth",
        "C = Q . F is smooth",
        is_smooth(&[q.clone(), f_c.clone()])?,
    );

    Ok(Genus4Spin3Instance {
        config: *config,
        curve,
        tau,
        t,
        model,
        t_points,
        cubics,
        f,
        f_c,
    })
}

/// Fiberwise ranks on the instance: the quadric pencil as the kernel of the
/// multiplication map, `h0(H + eps) = 4`, and `h0(I_3t/Q(3)) = 5`.
pub fn bundle_fiber_dims(inst: &Genus4Spin3Instance) -> CheckReport {
    let mut report = CheckReport::new("bundle-fiber-dims", inst.field(), Some(inst.config.seed));
    let outcome = fibers(inst, &mut report);
    report.finish(outcome).1
}

fn fibers(inst: &Genus4Spin3Instance, report: &mut CheckReport) -> Result<()> {
    let field = inst.field();
    let curve = &inst.curve;

    // Multiplication of the coordinate functions 1, x, y, x^2 into L(8o).
    let coords = QuarticModel::coordinate_functions(curve);
    let ker = sym_square_kernel(&coords, field, |a, b| a.mul(b, curve).coordinates(4, 2))?;
    report.check_eq(
        "mult_map_kernel_dim",
        "Sym2 H0(H) -> H0(H2) has a 2-dim kernel",
        2,
        ker.dim(),
    );
    report.check_eq("mult_map_rank", "H0(H2) has dimension 8", 8, ker.image_rank);
    let monomials = monomial_basis(Ambient::P3, MultiDegree::Total(2))?;
    let x = MultiPoly::vars(Ambient::P3, field);
    let from_kernel = ker
        .kernel
        .iter()
        .map(|v| {
            let terms: Vec<MultiPoly> = ker
                .pairs
                .iter()
                .zip(v)
                .map(|((i, j), c)| (&x[*i] * &x[*j]).scale(c))
                .collect();
            MultiPoly::sum(Ambient::P3, MultiDegree::Total(2), field, &terms)?
                .coefficient_vector(&monomials)
        })
        .collect::<Result<Vec<_>>>()?;
    let pencil = quadric_pencil(inst)?;
    report.check_eq(
        "mult_map_kernel_is_pencil",
        "the kernel is the pencil of quadrics through E",
        true,
        row_space(field, monomials.len(), &from_kernel)? == pencil.vectors(),
    );

    // H + eps is the class of t; its sections are quadrics through a
    // residual divisor -t modulo the pencil.
    let neg: Vec<Vec<Scalar>> = inst
        .t
        .iter()
        .map(|p| inst.model.map_point(&curve.neg(p)))
        .collect::<Result<_>>()?;
    let eq = [inst.q().clone(), inst.s().clone()];
    let quad = build_system(
        Ambient::P3,
        MultiDegree::Total(2),
        field,
        &vanishing_at(&jets_on(&eq, &neg)?, 1)?,
    )?;
    report.check_eq(
        "h0_H_eps_quadrics",
        "h0(H + eps) = 4",
        4,
        quad.dim() - pencil.dim(),
    );
    // Second route: cubics through 2t cut 3H - 2t, of class H + eps.
    let cub = build_system(
        Ambient::P3,
        MultiDegree::Total(3),
        field,
        &vanishing_at(&jets_on(&eq, &inst.t_points)?, 2)?,
    )?;
    report.check_eq("h0_H_eps_cubics", "h0(H + eps) = 4", 4, cub.dim() - 8);

    let q_multiples = LinearSystemBasis::from_basis(
        Ambient::P3,
        MultiDegree::Total(3),
        field,
        linear_multiples(inst.q())?,
    )?;
    let on_q = inst.cubics.dim() - inst.cubics.intersection(&q_multiples)?.dim();
    report.check_eq("I_3t_on_Q_dim", "h0(I_3t/Q(3)) = 5", 5, on_q);
    report.check_true("h1_vanishes", "h1(I_3t/Q(3)) = 0", on_q == 5);
    Ok(())
}

/// Recovers `E` from `C` and `t` alone: the quadrics cutting `2t` on `C`.
pub fn genus4_spin3_inverse(inst: &Genus4Spin3Instance) -> CheckReport {
    let mut report = CheckReport::new("genus4-spin3-inverse", inst.field(), Some(inst.config.seed));
    let outcome = inverse(inst, &mut report);
    report.finish(outcome).1
}

fn inverse(inst: &Genus4Spin3Instance, report: &mut CheckReport) -> Result<()> {
    let field = inst.field();
    let c_eq = [inst.q().clone(), inst.f_c.clone()];
    let c_jets = jets_on(&c_eq, &inst.t_points)?;
    let recovered = build_system(
        Ambient::P3,
        MultiDegree::Total(2),
        field,
        &vanishing_at(&c_jets, 2)?,
    )?;
    report.check_eq("pencil_dim", "|I_2t(2)| is a pencil", 2, recovered.dim());
    let pencil = quadric_pencil(inst)?;
    report.check_true(
        "pencil_equals_QS",
        "the pencil has base locus E",
        recovered.same_span(&pencil)?,
    );
    let recovered_ideal = IdealPresentation::from_generators(recovered.basis().to_vec())?;
    let stored_ideal =
        IdealPresentation::from_generators(vec![inst.q().clone(), inst.s().clone()])?;
    report.check_true(
        "quadric_piece_equal",
        "the recovered ideal agrees with (Q, S) in degree 2",
        graded_piece(&recovered_ideal, MultiDegree::Total(2))?
            .same_span(&graded_piece(&stored_ideal, MultiDegree::Total(2))?)?,
    );
    report.check_true(
        "Q_in_pencil",
        "Q belongs to the pencil",
        recovered.contains(inst.q())?,
    );
    let c_ideal = IdealPresentation::from_generators(c_eq.to_vec())?;
    let through_c = graded_piece(&c_ideal, MultiDegree::Total(2))?;
    report.check_eq(
        "unique_quadric_through_C",
        "Q is the unique quadric of the pencil containing C",
        1,
        recovered.intersection(&through_c)?.dim(),
    );
    report.check_false(
        "S_not_through_C",
        "S does not contain C",
        ideal_membership(inst.s(), &c_ideal)?,
    );
    report.check_false(
        "t_coplanar",
        "t is not contained in a plane",
        coplanarity_test(&inst.t_points)?,
    );
    let div = restriction_divisor(
        &inst.f_c,
        recovered.basis(),
        &inst.t_points,
        DEFAULT_TRUNCATION,
    )?;
    report.check_eq(
        "F_C_orders_on_recovered_E",
        "F_C . E = 3t",
        "[3, 3, 3, 3]".to_string(),
        format!("{:?}", div.finite_orders().unwrap_or_default()),
    );
    report.check_eq("F_C_total", "3t has length 12", 12, div.total);
    Ok(())
}

/// Forward then inverse, with the stored data as oracle.
pub fn genus4_spin3_roundtrip(config: &PipelineConfig) -> CheckReport {
    let (inst, mut report) = genus4_spin3_forward(config);
    report.name = "genus4-spin3-roundtrip".into();
    let Some(inst) = inst else {
        return report;
    };
    let inv = genus4_spin3_inverse(&inst);
    let equal = inv.check_named("pencil_equals_QS").is_some_and(|c| c.pass);
    report.absorb("inverse", inv);
    report.check_true(
        "roundtrip_subspace_equal",
        "the inverse recovers the stored E",
        equal,
    );
    report.finish::<()>(Ok(())).1
}
