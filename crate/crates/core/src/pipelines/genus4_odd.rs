//! Odd spin curves of genus 4: bidegree `(3, 3)` curves on `P1xP1` cut by
//! the diagonal `L` in `2(o1 + o2 + o3)`.

use serde_json::json;

use super::{require_prime, stage, strings, CheckReport, PipelineConfig};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::groebner::{is_smooth, singular_points, IdealPresentation};
use crate::linsys::{
    build_system, mult_map_kernel, restriction_divisor, Condition, LinearSystemBasis,
};
use crate::poly::{
    linear_factors, named, Ambient, CurveJet, MultiDegree, MultiPoly, Order, DEFAULT_TRUNCATION,
};
use crate::reptheory::{
    build_group, decompose, induced_matrix, is_faithful_on, marked_points, pullback_scalar, Isotype,
};

/// The space `I` of `(3, 3)` forms cutting at least `2(o1 + o2 + o3)` on
/// the diagonal.
pub fn invariant_system(field: Field) -> Result<LinearSystemBasis> {
    let l = named::forms(field).l;
    let conditions = marked_points(field)
        .iter()
        .map(|o| {
            Condition::vanishing(
                CurveJet::new(std::slice::from_ref(&l), o, DEFAULT_TRUNCATION)?,
                2,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    build_system(Ambient::P1xP1, MultiDegree::Bi(3, 3), field, &conditions)
}

/// The two readings of the six-line form: the sum
/// `x0 x1 (x0 - x1) + y0 y1 (y0 - y1)`, given by its two parts of bidegrees
/// `(3, 0)` and `(0, 3)`, and the product.
pub fn six_line_candidates(field: Field) -> ([MultiPoly; 2], MultiPoly) {
    (
        [named::x_cubic(field), named::y_cubic(field)],
        named::six_line_product(field),
    )
}

/// Vanishing orders along `L` at `o1, o2, o3` of a sum of forms.
fn orders_along_l(parts: &[MultiPoly], field: Field) -> Result<Vec<Order>> {
    let l = named::forms(field).l;
    marked_points(field)
        .iter()
        .map(|o| {
            let jet = CurveJet::new(std::slice::from_ref(&l), o, DEFAULT_TRUNCATION)?;
            let mut acc = jet.evaluate(&parts[0])?;
            for p in &parts[1..] {
                acc = acc.add(&jet.evaluate(p)?);
            }
            Ok(match acc.valuation() {
                Some(k) => Order::Finite(k),
                None => Order::AtLeast(jet.truncation() + 1),
            })
        })
        .collect()
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

/// Seed-independent checks on `I`: the multiplication kernel, the
/// decomposition into irreducibles, and the six-line form.
pub fn genus4_odd_invariants(field: Field) -> CheckReport {
    let mut report = CheckReport::new("genus4-odd-invariants", field, None);
    let outcome = invariants(field, &mut report);
    report.finish(outcome).1
}

fn invariants(field: Field, report: &mut CheckReport) -> Result<()> {
    if matches!(field.characteristic(), 2 | 3) {
        return Err(Error::BadCharacteristic(field.characteristic()));
    }
    let fm = named::forms(field);
    let [x0, x1, y0, y1] = named::vars(field);
    let two = field.from_i64(2);
    report.check_true(
        "h13_identity",
        "h1 - h3 = -2 x0 y0",
        &fm.h1 - &fm.h3 == -(&x0 * &y0).scale(&two),
    );
    report.check_true(
        "h23_identity",
        "h2 - h3 = -2 x1 y1",
        &fm.h2 - &fm.h3 == -(&x1 * &y1).scale(&two),
    );

    // Ker mu on R11 with basis (l, h1, h2, h3).
    let r11 = [fm.l.clone(), fm.h1.clone(), fm.h2.clone(), fm.h3.clone()];
    let ker = mult_map_kernel(&r11, MultiDegree::Bi(2, 2))?;
    report.check_eq("ker_mu_dim", "Ker mu is one-dimensional", 1, ker.dim());
    let relation =
        &(&(&fm.h3 * &fm.h3) - &(&fm.l * &fm.l)) - &(&(&fm.h1 - &fm.h3) * &(&fm.h2 - &fm.h3));
    report.check_true(
        "ker_mu_relation_expands_to_zero",
        "h3^2 - l^2 - (h1 - h3)(h2 - h3) = 0",
        relation.is_zero(),
    );
    // Coordinates of the relation over the pairs (i <= j).
    let expected: Vec<i64> = ker
        .pairs
        .iter()
        .map(|p| match p {
            (0, 0) | (1, 2) => -1,
            (1, 3) | (2, 3) => 1,
            _ => 0,
        })
        .collect();
    let expected: Vec<_> = expected.iter().map(|&c| field.from_i64(c)).collect();
    let spans = ker.kernel.len() == 1 && {
        let k = &ker.kernel[0];
        let pivot = k.iter().position(|c| !c.is_zero()).unwrap_or(0);
        let ratio = &expected[pivot] / &k[pivot];
        k.iter().zip(&expected).all(|(a, b)| &(a * &ratio) == b)
    };
    report.check_true(
        "ker_mu_spanned_by_relation",
        "Ker mu = <h3^2 - l^2 - (h1 - h3)(h2 - h3)>",
        spans,
    );
    if let Some(k) = ker.kernel.first() {
        report.observe("ker_mu", ker.describe(k, &["l", "h1", "h2", "h3"]));
    }

    let system = invariant_system(field)?;
    report.check_eq("dim_I", "the system PI is 9-dimensional", 10, system.dim());

    let group = build_group(field)?;
    report.check_eq(
        "group_order",
        "the stabilizer of o1, o2, o3 has order 12",
        12,
        group.len(),
    );
    let scalars: Vec<String> = group
        .iter()
        .filter(|g| !g.swaps())
        .map(|g| pullback_scalar(g, &fm.l).map(|s| s.map_or("none".into(), |s| s.to_string())))
        .collect::<Result<_>>()?;
    report.check_true(
        "diagonal_preserved",
        "each sigma preserves the diagonal",
        scalars.iter().all(|s| s != "none"),
    );
    report.observe("sigma_pullback_scalar_on_l", &scalars);

    let matrices = group
        .iter()
        .map(|g| induced_matrix(g, &system))
        .collect::<Result<Vec<_>>>()?;
    let mut hom = true;
    for (i, a) in group.iter().enumerate() {
        for (j, b) in group.iter().enumerate() {
            let ab = a.compose(b)?;
            let k = group
                .iter()
                .position(|g| *g == ab)
                .ok_or_else(|| Error::Internal("product outside the group".into()))?;
            hom &= matrices[k] == matrices[i].mul(&matrices[j])?;
        }
    }
    report.check_true(
        "homomorphism_on_I",
        "the action on I is a representation",
        hom,
    );

    let dec = decompose(&system, &group)?;
    report.check_eq("iota_plus_dim", "dim I+ = 4", 4, dec.eigenspace_dim(1));
    report.check_eq("iota_minus_dim", "dim I- = 6", 6, dec.eigenspace_dim(-1));
    report.check_eq(
        "I_plus_summands",
        "I+ splits as 1 + 1 + 2",
        format!("{:?}", vec![1, 1, 2]),
        format!("{:?}", sorted(dec.dims(1))),
    );
    report.check_eq(
        "I_minus_summands",
        "I- splits as 1 + 2 + 2 + 1",
        format!("{:?}", vec![1, 1, 2, 2]),
        format!("{:?}", sorted(dec.dims(-1))),
    );
    let isotypic: Vec<String> = [1, -1]
        .iter()
        .flat_map(|&e| {
            Isotype::ALL
                .iter()
                .map(move |&t| (e, t))
                .collect::<Vec<_>>()
        })
        .map(|(e, t)| {
            format!(
                "{}{t}:{}",
                if e > 0 { "+" } else { "-" },
                dec.isotypic_dim(e, t)
            )
        })
        .collect();
    report.observe("isotypic_dims", &isotypic);
    report.observe("decomposition", &dec);
    let standard: Vec<_> = dec
        .summands
        .iter()
        .filter(|s| s.isotype == Isotype::Standard)
        .collect();
    let mut faithful = !standard.is_empty();
    for s in &standard {
        faithful &= is_faithful_on(s, &system, &group)?;
    }
    report.check_true(
        "s3_faithful_on_standard",
        "the 2-dimensional summands are standard",
        faithful,
    );

    // The six-line form: adopt whichever candidate lies in I.
    let (sum_parts, product) = six_line_candidates(field);
    let sum_orders = orders_along_l(&sum_parts, field)?;
    let product_orders = orders_along_l(std::slice::from_ref(&product), field)?;
    // The sum is not bihomogeneous, so it is not a section of O(3, 3).
    let sum_in = sum_parts
        .iter()
        .all(|p| p.degree() == MultiDegree::Bi(3, 3))
        && sum_orders.iter().all(|o| o.at_least(2));
    let product_in = system.contains(&product)?;
    report.observe(
        "c_candidates",
        json!({
            "sum": { "bidegrees": sum_parts.iter().map(|p| p.degree()).collect::<Vec<_>>(),
                     "orders_along_L": sum_orders, "in_I": sum_in },
            "product": { "orders_along_L": product_orders, "in_I": product_in },
        }),
    );
    let c = match (sum_in, product_in) {
        (false, true) => product,
        _ => {
            report.check_true(
                "c_candidate_resolved",
                "exactly one reading of c lies in I",
                false,
            );
            return Ok(());
        }
    };
    report.check_true(
        "c_candidate_resolved",
        "exactly one reading of c lies in I",
        true,
    );
    report.check_eq(
        "c_orders_along_L",
        "c cuts 2(o1 + o2 + o3) on L",
        "[2, 2, 2]".to_string(),
        format!(
            "{:?}",
            product_orders
                .iter()
                .map(|o| o.finite())
                .collect::<Option<Vec<_>>>()
                .unwrap_or_default()
        ),
    );
    report.observe("c", &c);
    let lf = linear_factors(&c)?;
    let marks = marked_points(field);
    let lines_ok = lf.factors.len() == 6
        && lf.unit().is_some()
        && lf.x_factors().count() == 3
        && lf
            .factors
            .iter()
            .all(|line| marks.iter().filter(|o| line.eval(o).is_zero()).count() == 1)
        && marks.iter().all(|o| {
            lf.factors
                .iter()
                .filter(|line| line.eval(o).is_zero())
                .count()
                == 2
        });
    report.check_true(
        "div_c_six_lines",
        "div(c) is the six lines through o1, o2, o3",
        lines_ok,
    );
    let iota = group
        .iter()
        .find(|g| g.swaps() && g.permutation() == [0, 1, 2])
        .ok_or_else(|| Error::Internal("no factor swap".into()))?;
    report.check_true(
        "c_iota_fixed",
        "c spans an iota-fixed line",
        iota.push_forward(&c)? == c,
    );
    let mut stable = true;
    for g in &group {
        stable &= g.push_forward(&c)?.is_proportional(&c);
    }
    report.check_true("c_group_invariant", "<c> is invariant", stable);
    let l_r22 = LinearSystemBasis::full(Ambient::P1xP1, MultiDegree::Bi(2, 2), field)?
        .multiply_by(&fm.l)?;
    report.check_false("c_not_in_lR22", "c is not in l R22", l_r22.contains(&c)?);
    let with_c =
        LinearSystemBasis::from_basis(Ambient::P1xP1, MultiDegree::Bi(3, 3), field, vec![c])?
            .sum(&l_r22)?;
    report.check_eq("c_plus_lR22_dim", "dim(<c> + l R22) = 10", 10, with_c.dim());
    report.check_true(
        "I_equals_c_plus_lR22",
        "I = <c> + l R22",
        with_c.same_span(&system)?,
    );
    Ok(())
}

#[derive(Debug, Clone)]
pub struct Genus4OddInstance {
    pub config: PipelineConfig,
    pub system: LinearSystemBasis,
    pub curve: MultiPoly,
}

/// Samples a smooth member of `PI` and checks its tritangency to `L`.
pub fn genus4_odd_sample(config: &PipelineConfig) -> (Option<Genus4OddInstance>, CheckReport) {
    let mut report = CheckReport::new("genus4-odd-sample", config.field, Some(config.seed));
    let outcome = sample(config, &mut report);
    if let Ok(inst) = &outcome {
        report.instance = Some(json!({ "C": inst.curve }));
    }
    report.finish(outcome)
}

fn sample(config: &PipelineConfig, report: &mut CheckReport) -> Result<Genus4OddInstance> {
    let field = config.field;
    require_prime(field)?;
    let mut rng = config.rng();
    let system = invariant_system(field)?;
    report.check_eq("dim_I", "the system PI is 9-dimensional", 10, system.dim());
    let marks = marked_points(field);
    report.observe(
        "marked_points",
        marks.iter().map(|p| strings(p)).collect::<Vec<_>>(),
    );

    let curve = stage(
        report,
        &mut rng,
        config.resample_cap,
        "smooth member of PI",
        |rng| {
            let c = system.random_member(rng)?;
            if c.is_zero() {
                return Ok(None);
            }
            Ok(is_smooth(std::slice::from_ref(&c))?.then_some(c))
        },
    )?;
    report.check_true(
        "C_smooth",
        "the general C in PI is smooth",
        is_smooth(std::slice::from_ref(&curve))?,
    );
    let rational = singular_points(&IdealPresentation::from_generators(vec![curve.clone()])?)?;
    report.check_eq(
        "C_no_rational_singular_points",
        "the general C in PI is smooth",
        0,
        rational.len(),
    );

    let l = named::forms(field).l;
    let div = restriction_divisor(&curve, std::slice::from_ref(&l), &marks, DEFAULT_TRUNCATION)?;
    report.observe("restriction_to_L", &div);
    report.check_eq(
        "tritangency_orders",
        "2d = L . C",
        "[2, 2, 2]".to_string(),
        format!("{:?}", div.finite_orders().unwrap_or_default()),
    );
    report.check_eq("tritangency_total", "L . C has degree 6", 6, div.total);
    report.check_true(
        "L_smooth",
        "L is smooth",
        is_smooth(std::slice::from_ref(&l))?,
    );
    report.check_true(
        "L_irreducible",
        "L is a smooth conic",
        linear_factors(&l)?.factors.is_empty(),
    );
    let distinct = (0..3).all(|i| (0..i).all(|j| marks[i] != marks[j]));
    report.check_true("marks_distinct", "o1, o2, o3 are distinct", distinct);
    // A ruling through all three points would be a (1,0) or (0,1) form
    // vanishing at each of them.
    let mut no_ruling = true;
    for deg in [MultiDegree::Bi(1, 0), MultiDegree::Bi(0, 1)] {
        let through = build_system(
            Ambient::P1xP1,
            deg,
            field,
            &marks
                .iter()
                .map(|o| Condition::PointMultiplicity {
                    point: o.clone(),
                    multiplicity: 1,
                })
                .collect::<Vec<_>>(),
        )?;
        no_ruling &= through.dim() == 0;
    }
    report.check_true("marks_not_on_a_ruling", "h0(eta) = 1", no_ruling);
    Ok(Genus4OddInstance {
        config: *config,
        system,
        curve,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants_over_both_fields() {
        for field in [Field::Rational, Field::Prime(10007)] {
            let r = genus4_odd_invariants(field);
            assert!(r.passed(), "{r:#?}");
        }
    }

    #[test]
    fn sample_seed_one() {
        let (_, r) = genus4_odd_sample(&PipelineConfig::new(Field::Prime(10007), 1));
        assert!(r.passed(), "{r:#?}");
    }
}
