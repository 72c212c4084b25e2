//! Odd 4-spin curves of genus 3 as nodal members of `PI` whose node `n`
//! has its branches tangent to the two rulings through `n`, plus the plane
//! quartic system `Sigma`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{
    genus4_odd::invariant_system, require_prime, stage, strings, CheckReport, PipelineConfig,
};
use crate::error::Result;
use crate::field::{Field, Scalar};
use crate::groebner::{
    hessian_rank, is_smooth, singular_points, singular_scheme_length, IdealPresentation,
};
use crate::linalg::ExactMatrix;
use crate::linsys::{build_system, Condition, LinearSystemBasis};
use crate::poly::{
    named, normalize_point, vanishing_order, Ambient, CurveJet, MultiDegree, MultiPoly, Order,
    DEFAULT_TRUNCATION,
};
use crate::reptheory::{build_group, marked_points};

#[derive(Debug, Clone)]
pub struct Genus3Spin4OddInstance {
    pub config: PipelineConfig,
    pub node: Vec<Scalar>,
    pub rulings: [MultiPoly; 2],
    pub system: LinearSystemBasis,
    pub curve: MultiPoly,
    pub sigma_points: Vec<Vec<Scalar>>,
    pub sigma_conic: MultiPoly,
    pub sigma_quartic: MultiPoly,
}

/// The `(1, 0)` and `(0, 1)` forms vanishing at `n`.
pub fn rulings_through(n: &[Scalar]) -> [MultiPoly; 2] {
    let [x0, x1, y0, y1] = named::vars(n[0].field());
    [
        &x0.scale(&n[1]) - &x1.scale(&n[0]),
        &y0.scale(&n[3]) - &y1.scale(&n[2]),
    ]
}

/// `D_n`: members of `I` with a double point at `n` whose restriction to
/// each ruling through `n` vanishes to order 3.
pub fn node_system(n: &[Scalar]) -> Result<LinearSystemBasis> {
    let field = n[0].field();
    let l = named::forms(field).l;
    let mut conditions = marked_points(field)
        .iter()
        .map(|o| {
            Condition::vanishing(
                CurveJet::new(std::slice::from_ref(&l), o, DEFAULT_TRUNCATION)?,
                2,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    conditions.push(Condition::PointMultiplicity {
        point: n.to_vec(),
        multiplicity: 2,
    });
    for r in rulings_through(n) {
        conditions.push(Condition::vanishing(
            CurveJet::new(&[r], n, DEFAULT_TRUNCATION)?,
            3,
        )?);
    }
    build_system(Ambient::P1xP1, MultiDegree::Bi(3, 3), field, &conditions)
}

fn random_p2<R: Rng + ?Sized>(field: Field, rng: &mut R) -> Vec<Scalar> {
    vec![field.one(), field.random(rng), field.random(rng)]
}

fn det3(field: Field, rows: [&Vec<Scalar>; 3]) -> Result<Scalar> {
    ExactMatrix::from_rows(field, 3, rows.iter().map(|r| r.to_vec()).collect())?.determinant()
}

/// Plane quartics tangent to the conic through the five points at the first
/// three and to the line through the last two at those two.
pub fn sigma_system(points: &[Vec<Scalar>]) -> Result<(MultiPoly, LinearSystemBasis)> {
    let field = points[0][0].field();
    let through = |deg: u32, pts: &[Vec<Scalar>]| {
        build_system(
            Ambient::P2,
            MultiDegree::Total(deg),
            field,
            &pts.iter()
                .map(|p| Condition::PointMultiplicity {
                    point: p.clone(),
                    multiplicity: 1,
                })
                .collect::<Vec<_>>(),
        )
    };
    let conic = through(2, points)?;
    let line = through(1, &points[3..5])?;
    let (Some(conic), Some(line)) = (
        conic.basis().first().cloned(),
        line.basis().first().cloned(),
    ) else {
        return Err(crate::error::Error::IdenticallyZero);
    };
    let mut conditions = Vec::new();
    for p in &points[..3] {
        conditions.push(Condition::vanishing(
            CurveJet::new(std::slice::from_ref(&conic), p, DEFAULT_TRUNCATION)?,
            2,
        )?);
    }
    for p in &points[3..5] {
        conditions.push(Condition::vanishing(
            CurveJet::new(std::slice::from_ref(&line), p, DEFAULT_TRUNCATION)?,
            2,
        )?);
    }
    Ok((
        conic,
        build_system(Ambient::P2, MultiDegree::Total(4), field, &conditions)?,
    ))
}

pub fn genus3_spin4_odd(config: &PipelineConfig) -> (Option<Genus3Spin4OddInstance>, CheckReport) {
    let mut report = CheckReport::new("genus3-spin4-odd", config.field, Some(config.seed));
    let outcome = run(config, &mut report);
    if let Ok(inst) = &outcome {
        report.instance = Some(json!({
            "node": strings(&inst.node),
            "D": inst.curve,
            "sigma_points": inst.sigma_points.iter().map(|p| strings(p)).collect::<Vec<_>>(),
            "sigma_conic": inst.sigma_conic,
            "sigma_quartic": inst.sigma_quartic,
        }));
    }
    report.finish(outcome)
}

fn ruling_order(d: &MultiPoly, r: &MultiPoly, n: &[Scalar]) -> Result<Order> {
    vanishing_order(
        d,
        &CurveJet::new(std::slice::from_ref(r), n, DEFAULT_TRUNCATION)?,
    )
}

fn run(config: &PipelineConfig, report: &mut CheckReport) -> Result<Genus3Spin4OddInstance> {
    let field = config.field;
    require_prime(field)?;
    let mut rng: ChaCha8Rng = config.rng();
    let cap = config.resample_cap;
    let l = named::forms(field).l;
    let pi = invariant_system(field)?;

    // n off L and off the rulings through o1, o2, o3.
    let (node, system) = stage(report, &mut rng, cap, "node n", |rng| {
        let (a, b) = (field.random(rng), field.random(rng));
        let bad = |c: &Scalar| c.is_zero() || c.is_one();
        if bad(&a) || bad(&b) || a == b {
            return Ok(None);
        }
        let n = vec![field.one(), a, field.one(), b];
        let sys = node_system(&n)?;
        Ok(Some((n, sys)))
    })?;
    report.observe("node", strings(&node));
    report.check_false("node_off_L", "n lies in Q - L", l.eval(&node).is_zero());
    report.check_eq("D_n_dim", "D_n is 4-dimensional", 5, system.dim());
    report.check_true(
        "D_n_inside_I",
        "condition (i) puts D_n inside PI",
        system.is_subspace_of(&pi)?,
    );
    let rulings = rulings_through(&node);

    let group = build_group(field)?;
    let mut equivariant = true;
    for g in &group {
        let image = normalize_point(Ambient::P1xP1, &g.action().apply_point(&node)?)?;
        let moved = system
            .basis()
            .iter()
            .map(|f| g.push_forward(f))
            .collect::<Result<Vec<_>>>()?;
        let moved =
            LinearSystemBasis::from_basis(Ambient::P1xP1, MultiDegree::Bi(3, 3), field, moved)?;
        equivariant &= moved.same_span(&node_system(&image)?)?;
    }
    report.check_true("D_n_equivariant", "g maps D_n to D_g(n)", equivariant);

    let curve = stage(report, &mut rng, cap, "nodal member of D_n", |rng| {
        let d = system.random_member(rng)?;
        if d.is_zero() {
            return Ok(None);
        }
        Ok((singular_scheme_length(&d)? == Some(1)).then_some(d))
    })?;
    report.check_eq(
        "singular_scheme_length",
        "D has exactly one node",
        "1".to_string(),
        format!(
            "{:?}",
            singular_scheme_length(&curve)?.map_or(-1, |k| k as i64)
        ),
    );
    let rational = singular_points(&IdealPresentation::from_generators(vec![curve.clone()])?)?;
    let n_norm = normalize_point(Ambient::P1xP1, &node)?;
    report.check_true(
        "singular_locus_is_n",
        "the node of D is n",
        rational == vec![n_norm],
    );
    report.check_eq(
        "hessian_rank",
        "n is an ordinary double point",
        2,
        hessian_rank(&curve, &node)?,
    );
    for (i, r) in rulings.iter().enumerate() {
        report.check_eq(
            &format!("ruling_{}_order", i + 1),
            "R_i . D = 3n",
            Order::Finite(3),
            ruling_order(&curve, r, &node)?,
        );
    }

    // Sigma: five points with no three collinear, on a smooth conic.
    let (sigma_points, sigma_conic, sigma) =
        stage(report, &mut rng, cap, "five points in P2", |rng| {
            let pts: Vec<Vec<Scalar>> = (0..5).map(|_| random_p2(field, rng)).collect();
            for i in 0..5 {
                for j in (i + 1)..5 {
                    for k in (j + 1)..5 {
                        if det3(field, [&pts[i], &pts[j], &pts[k]])?.is_zero() {
                            return Ok(None);
                        }
                    }
                }
            }
            let (conic, sys) = sigma_system(&pts)?;
            Ok(is_smooth(std::slice::from_ref(&conic))?.then_some((pts, conic, sys)))
        })?;
    report.check_eq(
        "sigma_dim",
        "Sigma has vector dimension 15 - 6 - 4",
        5,
        sigma.dim(),
    );
    let sigma_quartic = stage(report, &mut rng, cap, "smooth member of Sigma", |rng| {
        let c = sigma.random_member(rng)?;
        Ok((!c.is_zero() && is_smooth(std::slice::from_ref(&c))?).then_some(c))
    })?;
    report.check_true(
        "sigma_smooth_member",
        "the general C in Sigma is smooth",
        is_smooth(std::slice::from_ref(&sigma_quartic))?,
    );

    Ok(Genus3Spin4OddInstance {
        config: *config,
        node,
        rulings,
        system,
        curve,
        sigma_points,
        sigma_conic,
        sigma_quartic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_one() {
        let (_, r) = genus3_spin4_odd(&PipelineConfig::new(Field::Prime(10007), 1));
        assert!(r.passed(), "{r:#?}");
    }
}
