//! Even 4-spin curves of genus 3: plane quartics `C` with `C . E = 4d` for a
//! plane cubic `E` and `d = o1 + o2 + o3` of sum a 4-torsion point `tau`.

use serde_json::json;

use super::{require_prime, stage, strings, CheckReport, PipelineConfig};
use crate::elliptic::{sample_curve_with_torsion_rng, EllPoint, WeierstrassCurve};
use crate::error::Result;
use crate::field::Scalar;
use crate::groebner::is_smooth;
use crate::linalg::ExactMatrix;
use crate::linsys::{build_system, restriction_divisor, Condition, LinearSystemBasis};
use crate::poly::{Ambient, CurveJet, MultiDegree, MultiPoly, DEFAULT_TRUNCATION};

#[derive(Debug, Clone)]
pub struct Genus3Spin4EvenInstance {
    pub config: PipelineConfig,
    pub curve: WeierstrassCurve,
    pub tau: EllPoint,
    pub d: Vec<EllPoint>,
    pub cubic: MultiPoly,
    pub system: LinearSystemBasis,
    pub quartic: MultiPoly,
    pub flex_line: MultiPoly,
    pub conic: MultiPoly,
    pub pencil_member: MultiPoly,
}

fn system_along(
    curve: &MultiPoly,
    points: &[(Vec<Scalar>, usize)],
    degree: u32,
) -> Result<LinearSystemBasis> {
    let conditions = points
        .iter()
        .map(|(p, k)| {
            Condition::vanishing(
                CurveJet::new(std::slice::from_ref(curve), p, DEFAULT_TRUNCATION)?,
                *k,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    build_system(
        Ambient::P2,
        MultiDegree::Total(degree),
        curve.field(),
        &conditions,
    )
}

fn with_order(points: &[Vec<Scalar>], k: usize) -> Vec<(Vec<Scalar>, usize)> {
    points.iter().map(|p| (p.clone(), k)).collect()
}

fn condition_rank(s: &LinearSystemBasis) -> usize {
    s.conditions().map_or(0, |c| c.rank)
}

fn orders(div: &crate::linsys::RestrictionDivisor) -> String {
    format!("{:?}", div.finite_orders().unwrap_or_default())
}

pub fn genus3_spin4_even(
    config: &PipelineConfig,
) -> (Option<Genus3Spin4EvenInstance>, CheckReport) {
    let mut report = CheckReport::new("genus3-spin4-even", config.field, Some(config.seed));
    let outcome = run(config, &mut report);
    if let Ok(inst) = &outcome {
        report.instance = Some(json!({
            "curve": inst.curve,
            "tau": inst.tau,
            "d": inst.d,
            "E": inst.cubic,
            "C": inst.quartic,
            "A": inst.flex_line,
            "B": inst.conic,
            "F": inst.pencil_member,
        }));
    }
    report.finish(outcome)
}

fn run(config: &PipelineConfig, report: &mut CheckReport) -> Result<Genus3Spin4EvenInstance> {
    let field = config.field;
    require_prime(field)?;
    let mut rng = config.rng();
    let cap = config.resample_cap;

    let (curve, tau) = stage(report, &mut rng, cap, "curve with 4-torsion", |rng| {
        sample_curve_with_torsion_rng(field, 4, rng, 1).map(Some)
    })?;
    report.observe("curve", &curve);
    report.observe("tau", &tau);
    report.check_true(
        "tau_order_4",
        "tau has exact order 4",
        curve.has_exact_order(&tau, 4)?,
    );
    report.check_false(
        "tau_square_trivial",
        "the square of tau is not trivial",
        curve.mul(&tau, 2)?.is_infinity(),
    );
    let cubic = curve.plane_cubic();
    report.check_true(
        "E_smooth",
        "E is a smooth plane cubic",
        is_smooth(std::slice::from_ref(&cubic))?,
    );

    let d = stage(report, &mut rng, cap, "divisor d", |rng| {
        let o1 = curve.random_point(rng)?;
        let o2 = curve.random_point(rng)?;
        let o3 = curve.sub(&curve.sub(&tau, &o1)?, &o2)?;
        let d = vec![o1, o2, o3];
        let distinct = (0..3).all(|i| (0..i).all(|j| d[i] != d[j]));
        if !distinct || d.iter().any(EllPoint::is_infinity) {
            return Ok(None);
        }
        let rows: Vec<Vec<Scalar>> = d.iter().map(|p| curve.plane_point(p)).collect();
        let collinear = ExactMatrix::from_rows(field, 3, rows)?
            .determinant()?
            .is_zero();
        Ok((!collinear).then_some(d))
    })?;
    report.observe("d", &d);
    let d_points: Vec<Vec<Scalar>> = d.iter().map(|p| curve.plane_point(p)).collect();
    let weights: Vec<(EllPoint, i64)> = d.iter().map(|p| (p.clone(), 1)).collect();
    report.check_eq(
        "d_sum_is_tau",
        "d lies in |H - eps|",
        tau.clone(),
        curve.divisor_class_sum(&weights)?,
    );
    let collinear = ExactMatrix::from_rows(field, 3, d_points.clone())?
        .determinant()?
        .is_zero();
    report.check_false("d_collinear", "o1, o2, o3 are not collinear", collinear);

    let quartics = system_along(&cubic, &with_order(&d_points, 4), 4)?;
    report.check_eq("h0_I4d_4", "h0(I_4d(4)) = 4", 4, quartics.dim());
    let cubics = system_along(&cubic, &with_order(&d_points, 4), 3)?;
    report.check_eq(
        "h0_I4d_3",
        "exactly one cubic E with C . E = 4d",
        1,
        cubics.dim(),
    );
    report.check_true(
        "unique_cubic_is_E",
        "exactly one cubic E with C . E = 4d",
        cubics
            .basis()
            .first()
            .is_some_and(|g| g.is_proportional(&cubic)),
    );
    let conics = system_along(&cubic, &with_order(&d_points, 2), 2)?;
    report.check_eq("h0_I2d_2", "no conic B with B . E = 2d", 0, conics.dim());

    let quartic = stage(report, &mut rng, cap, "smooth quartic C", |rng| {
        let c = quartics.random_member(rng)?;
        Ok((!c.is_zero() && is_smooth(std::slice::from_ref(&c))?).then_some(c))
    })?;
    report.check_true(
        "C_smooth",
        "the general C in |I_4d(4)| is smooth",
        is_smooth(std::slice::from_ref(&quartic))?,
    );
    let div = restriction_divisor(
        &quartic,
        std::slice::from_ref(&cubic),
        &d_points,
        DEFAULT_TRUNCATION,
    )?;
    report.check_eq(
        "C_dot_E",
        "C . E = 4d",
        "[4, 4, 4]".to_string(),
        orders(&div),
    );

    let eta3 = system_along(&quartic, &with_order(&d_points, 3), 3)?;
    report.check_eq("eta3_rank", "h0(eta^3) = 1", 9, condition_rank(&eta3));
    report.check_eq("eta3_kernel", "h0(eta^3) = 1", 1, eta3.dim());
    let eta2 = system_along(&quartic, &with_order(&d_points, 2), 2)?;
    report.check_eq("eta2_rank", "h0(eta^2) = 0", 6, condition_rank(&eta2));
    report.check_eq("eta2_kernel", "h0(eta^2) = 0", 0, eta2.dim());

    // Pencil spanned by E and A + B, where A is the flex tangent at o.
    let o = curve.plane_point(&EllPoint::Infinity);
    let t = curve.plane_point(&tau);
    let flex_line = MultiPoly::var(Ambient::P2, field, 0);
    let a_div = restriction_divisor(
        &flex_line,
        std::slice::from_ref(&cubic),
        std::slice::from_ref(&o),
        DEFAULT_TRUNCATION,
    )?;
    report.check_eq("A_flex", "A . E = 3o", "[3]".to_string(), orders(&a_div));
    let b_system = system_along(&cubic, &[(t.clone(), 4), (o.clone(), 2)], 2)?;
    report.check_eq(
        "B_system_dim",
        "a unique conic B with B . E = 4t + 2o",
        1,
        b_system.dim(),
    );
    let Some(conic) = b_system.basis().first().cloned() else {
        return Err(crate::error::Error::IdenticallyZero);
    };
    report.check_true(
        "B_smooth",
        "B is smooth",
        is_smooth(std::slice::from_ref(&conic))?,
    );
    let ab = flex_line.try_mul(&conic)?;
    let base = restriction_divisor(
        &ab,
        std::slice::from_ref(&cubic),
        &[t.clone(), o.clone()],
        DEFAULT_TRUNCATION,
    )?;
    report.check_eq(
        "base_locus_orders",
        "base locus Z = 4t + 5o",
        "[4, 5]".to_string(),
        orders(&base),
    );
    report.check_eq("base_locus_length", "base locus Z = 4t + 5o", 9, base.total);

    let pencil_member = stage(
        report,
        &mut rng,
        cap,
        "smooth member of the pencil",
        |rng| {
            let lambda = field.random_nonzero(rng);
            let f = cubic.try_add(&ab.scale(&lambda))?;
            Ok(is_smooth(std::slice::from_ref(&f))?.then_some(f))
        },
    )?;
    report.check_true(
        "F_smooth",
        "F in P is smooth",
        is_smooth(std::slice::from_ref(&pencil_member))?,
    );
    let b_prime = system_along(&pencil_member, &[(t.clone(), 4), (o.clone(), 2)], 2)?;
    report.check_true(
        "four_torsion_certificate",
        "4(t - o) ~ 0 on F",
        b_prime.dim() >= 1,
    );
    report.check_true(
        "B_prime_is_B",
        "B cuts 4t + 2o on every member of P",
        b_prime.dim() == 1 && b_prime.contains(&conic)?,
    );
    let tangent: Vec<Scalar> = pencil_member
        .gradient()
        .iter()
        .map(|g| g.eval(&t))
        .collect();
    let through_o = tangent
        .iter()
        .zip(&o)
        .fold(field.zero(), |acc, (a, b)| &acc + &(a * b));
    report.check_false(
        "two_torsion_certificate",
        "2(t - o) is not trivial on F",
        through_o.is_zero(),
    );
    report.observe("t", strings(&t));

    Ok(Genus3Spin4EvenInstance {
        config: *config,
        curve,
        tau,
        d,
        cubic,
        system: quartics,
        quartic,
        flex_line,
        conic,
        pencil_member,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    #[test]
    fn seed_one() {
        let (_, r) = genus3_spin4_even(&PipelineConfig::new(Field::Prime(10007), 1));
        assert!(r.passed(), "{r:#?}");
    }
}
