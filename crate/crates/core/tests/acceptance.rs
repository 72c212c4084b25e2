//! Acceptance suite: one line per criterion, exact comparisons throughout.

use std::cell::OnceCell;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spincheck::linalg::kernel_basis;
use spincheck::linsys::LinearSystemBasis;
use spincheck::pipelines::{
    genus4_odd_invariants, invariant_system, run_trials, CheckReport, PipelineConfig, PipelineKind,
    Status,
};
use spincheck::poly::{monomial_basis, named, CurveJet, DEFAULT_TRUNCATION};
use spincheck::reptheory::{
    build_group, decompose, induced_matrix, marked_points, GroupElement, Isotype,
};
use spincheck::{Ambient, ExactMatrix, Field, MultiDegree, MultiPoly, Scalar};

const P: u64 = 10007;

type Verdict = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Verdict + 'a>);

fn fp() -> Field {
    Field::Prime(P)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Every named check is present and passes.
fn require(r: &CheckReport, names: &[&str]) -> Result<(), String> {
    for name in names {
        match r.check_named(name) {
            None => {
                return Err(format!(
                    "{} seed {:?}: missing check `{name}`",
                    r.name, r.seed
                ))
            }
            Some(c) if !c.pass => {
                return Err(format!(
                    "{} seed {:?}: `{name}` expected {}, got {}",
                    r.name, r.seed, c.expected, c.actual
                ))
            }
            Some(_) => {}
        }
    }
    Ok(())
}

struct Batch {
    reports: Vec<CheckReport>,
}

impl Batch {
    fn run(kind: PipelineKind, first: u64, trials: u64) -> Self {
        Batch {
            reports: run_trials(kind, PipelineConfig::new(fp(), first), trials),
        }
    }

    fn successes(&self) -> impl Iterator<Item = &CheckReport> {
        self.reports
            .iter()
            .filter(|r| r.status != Status::Exhausted)
    }

    /// Success rate, zero logic failures and the named checks on every success.
    fn judge(&self, min_rate: f64, names: &[&str]) -> Verdict {
        let total = self.reports.len();
        let failed: Vec<String> = self
            .reports
            .iter()
            .filter(|r| r.status == Status::Failed)
            .map(|r| {
                let bad: Vec<&str> = r
                    .checks
                    .iter()
                    .filter(|c| !c.pass)
                    .map(|c| c.name.as_str())
                    .collect();
                format!("seed {:?} {:?} {:?}", r.seed, bad, r.error)
            })
            .collect();
        ensure(failed.is_empty(), || format!("logic failures: {failed:?}"))?;
        for r in self.successes() {
            require(r, names)?;
        }
        let ok = self.reports.iter().filter(|r| r.passed()).count();
        ensure(ok as f64 >= min_rate * total as f64, || {
            format!(
                "{ok}/{total} seeds succeeded, need {:.0}%",
                min_rate * 100.0
            )
        })?;
        Ok(format!("{ok}/{total} seeds succeeded, 0 logic failures"))
    }
}

// -- independent oracles -----------------------------------------------------

/// `dim I` by restricting `(3, 3)` forms to the diagonal `t -> (t, t)`: the
/// binary sextic must be a multiple of `t0^2 t1^2 (t0 - t1)^2`.
fn dim_i_via_diagonal(field: Field) -> usize {
    let monomials = monomial_basis(Ambient::P1xP1, MultiDegree::Bi(3, 3)).unwrap();
    let mut columns: Vec<Vec<Scalar>> = monomials
        .iter()
        .map(|e| {
            let k = (e[1] + e[3]) as usize;
            (0..7)
                .map(|i| if i == k { field.one() } else { field.zero() })
                .collect()
        })
        .collect();
    let mut sextic = vec![field.zero(); 7];
    sextic[2] = field.one();
    sextic[3] = field.from_i64(-2);
    sextic[4] = field.one();
    columns.push(sextic);
    let m = ExactMatrix::from_columns(field, 7, &columns).unwrap();
    kernel_basis(&m).unwrap().len()
}

fn trace(m: &ExactMatrix) -> Scalar {
    (0..m.rows()).fold(m.field().zero(), |acc, i| &acc + m.get(i, i))
}

/// Multiplicity of `isotype (x) eps^k` by the character inner product, where
/// `eps` is the sign of the factor swap.
fn multiplicity(
    field: Field,
    group: &[GroupElement],
    traces: &[Scalar],
    isotype: Isotype,
    eigenvalue: i64,
) -> usize {
    let twelve_m = group.iter().zip(traces).fold(field.zero(), |acc, (g, t)| {
        let eps = if g.swaps() { eigenvalue } else { 1 };
        &acc + &(t * &field.from_i64(isotype.character(g.cycle_type()) * eps))
    });
    (0..=16)
        .find(|m| field.from_i64(12 * m) == twelve_m)
        .map(|m| m as usize)
        .expect("character inner product is an integer")
}

fn summand_dims_via_characters(
    field: Field,
    system: &LinearSystemBasis,
    eigenvalue: i64,
) -> Vec<usize> {
    let group = build_group(field).unwrap();
    let traces: Vec<Scalar> = group
        .iter()
        .map(|g| trace(&induced_matrix(g, system).unwrap()))
        .collect();
    let mut dims = Vec::new();
    for iso in Isotype::ALL {
        let m = multiplicity(field, &group, &traces, iso, eigenvalue);
        dims.extend(std::iter::repeat_n(iso.dim(), m));
    }
    dims.sort();
    dims
}

// -- criteria ------------------------------------------------------------------

fn c1_symbolic() -> Verdict {
    let start = Instant::now();
    let mut notes = Vec::new();
    for field in [Field::Rational, fp()] {
        let r = genus4_odd_invariants(field);
        ensure(r.passed(), || {
            format!("{field}: report {:?}, error {:?}", r.status, r.error)
        })?;
        require(
            &r,
            &[
                "dim_I",
                "ker_mu_dim",
                "ker_mu_relation_expands_to_zero",
                "ker_mu_spanned_by_relation",
                "iota_plus_dim",
                "iota_minus_dim",
                "I_plus_summands",
                "I_minus_summands",
                "c_candidate_resolved",
                "div_c_six_lines",
                "c_not_in_lR22",
                "c_plus_lR22_dim",
                "I_equals_c_plus_lR22",
                "s3_faithful_on_standard",
            ],
        )?;
        ensure(r.observations.contains_key("c_candidates"), || {
            "c resolution not recorded".into()
        })?;

        let system = invariant_system(field).unwrap();
        ensure(system.dim() == 10, || {
            format!("{field}: dim I = {}", system.dim())
        })?;
        let oracle = dim_i_via_diagonal(field);
        ensure(oracle == 10, || {
            format!("{field}: diagonal restriction gives dim {oracle}")
        })?;

        let f = named::forms(field);
        let relation =
            &(&(&f.h3 * &f.h3) - &(&f.l * &f.l)) - &(&(&f.h1 - &f.h3) * &(&f.h2 - &f.h3));
        ensure(relation.is_zero(), || {
            format!("{field}: relation expands to {relation:?}")
        })?;

        let group = build_group(field).unwrap();
        let dec = decompose(&system, &group).unwrap();
        for (e, expected) in [(1, vec![1, 1, 2]), (-1, vec![1, 1, 2, 2])] {
            let mut from_projectors = dec.dims(e);
            from_projectors.sort();
            let from_characters = summand_dims_via_characters(field, &system, e);
            ensure(
                from_projectors == expected && from_characters == expected,
                || {
                    format!("{field}: eigenvalue {e}: projectors {from_projectors:?}, characters {from_characters:?}")
                },
            )?;
        }
        ensure(
            dec.eigenspace_dim(1) == 4 && dec.eigenspace_dim(-1) == 6,
            || {
                format!(
                    "{field}: iota eigenspaces {} / {}",
                    dec.eigenspace_dim(1),
                    dec.eigenspace_dim(-1)
                )
            },
        )?;
        notes.push(format!("{field} ok"));
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(5), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "{} in {:.2?}; dim I = 10 by two routes; summands [1,1,2 | 1,1,2,2] by two routes",
        notes.join(", "),
        elapsed
    ))
}

fn c2_forward(b: &Batch) -> Verdict {
    b.judge(
        0.9,
        &[
            "cubic_system_dim",
            "cubic_system_on_Q_dim",
            "F_orders",
            "F_total",
            "t_coplanar",
            "quartic_smooth",
            "C_smooth",
            "discriminant_nonzero",
        ],
    )
}

fn c3_fibers(b: &Batch) -> Verdict {
    let names = [
        "fibers.mult_map_kernel_dim",
        "fibers.mult_map_kernel_is_pencil",
        "fibers.h0_H_eps_quadrics",
        "fibers.h0_H_eps_cubics",
        "fibers.I_3t_on_Q_dim",
        "fibers.h1_vanishes",
    ];
    let mut n = 0;
    for r in b.successes() {
        require(r, &names)?;
        n += 1;
    }
    ensure(n > 0, || "no successful forward instance".into())?;
    Ok(format!("fiber ranks hold on all {n} instances"))
}

fn c4_inverse(forward: &Batch, roundtrip: &Batch) -> Verdict {
    let inverse = [
        "inverse.pencil_dim",
        "inverse.pencil_equals_QS",
        "inverse.Q_in_pencil",
        "inverse.unique_quadric_through_C",
    ];
    let mut n = 0;
    for r in forward.successes() {
        require(r, &inverse)?;
        n += 1;
    }
    let mut m = 0;
    for r in roundtrip.successes() {
        require(r, &inverse)?;
        require(r, &["roundtrip_subspace_equal"])?;
        m += 1;
    }
    ensure(
        roundtrip.reports.iter().all(|r| r.status != Status::Failed),
        || "roundtrip logic failure".into(),
    )?;
    Ok(format!("inverse on {n} instances, roundtrip on {m}"))
}

fn c5_odd_sample() -> Verdict {
    Batch::run(PipelineKind::Genus4OddSample, 1, 10).judge(
        0.9,
        &[
            "C_smooth",
            "tritangency_orders",
            "tritangency_total",
            "L_smooth",
            "L_irreducible",
            "marks_distinct",
            "marks_not_on_a_ruling",
        ],
    )
}

fn c6_genus3_odd() -> Verdict {
    Batch::run(PipelineKind::Genus3Spin4Odd, 1, 10).judge(
        0.8,
        &[
            "D_n_dim",
            "D_n_inside_I",
            "singular_scheme_length",
            "singular_locus_is_n",
            "hessian_rank",
            "ruling_1_order",
            "ruling_2_order",
            "sigma_dim",
            "sigma_smooth_member",
        ],
    )
}

fn c7_genus3_even() -> Verdict {
    Batch::run(PipelineKind::Genus3Spin4Even, 1, 10).judge(
        0.8,
        &[
            "h0_I4d_4",
            "h0_I4d_3",
            "unique_cubic_is_E",
            "h0_I2d_2",
            "C_smooth",
            "eta3_kernel",
            "eta2_kernel",
            "B_system_dim",
            "B_smooth",
            "F_smooth",
            "four_torsion_certificate",
            "two_torsion_certificate",
        ],
    )
}

fn c8_properties() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);

    // Rank plus nullity.
    let mut matrices = 0;
    for field in [Field::Rational, fp()] {
        for _ in 0..100 {
            let (r, c) = (rng.gen_range(1..7), rng.gen_range(1..8));
            let entries = (0..r * c)
                .map(|_| {
                    if rng.gen_bool(0.4) {
                        field.zero()
                    } else {
                        field.from_i64(rng.gen_range(-4..5))
                    }
                })
                .collect();
            let m = ExactMatrix::new(field, r, c, entries).unwrap();
            let k = kernel_basis(&m).unwrap();
            ensure(m.rank() + k.len() == c, || {
                format!("rank {} + nullity {} != {c}", m.rank(), k.len())
            })?;
            ensure(
                k.iter()
                    .all(|v| m.mul_vec(v).unwrap().iter().all(Scalar::is_zero)),
                || "kernel vector not in kernel".into(),
            )?;
            matrices += 1;
        }
    }

    // Homomorphism on all ordered pairs, on I.
    let mut pairs = 0;
    for field in [Field::Rational, fp()] {
        let system = invariant_system(field).unwrap();
        let group = build_group(field).unwrap();
        let mats: Vec<ExactMatrix> = group
            .iter()
            .map(|g| induced_matrix(g, &system).unwrap())
            .collect();
        for (i, g) in group.iter().enumerate() {
            for (j, h) in group.iter().enumerate() {
                let gh = induced_matrix(&g.compose(h).unwrap(), &system).unwrap();
                ensure(gh == mats[i].mul(&mats[j]).unwrap(), || {
                    format!("{field}: rho(g{i} g{j}) != rho(g{i}) rho(g{j})")
                })?;
                pairs += 1;
            }
        }
    }

    // Jet self-check on the jets along L and on random plane curves.
    let mut jets = 0;
    for field in [Field::Rational, fp()] {
        let l = named::forms(field).l;
        for o in marked_points(field) {
            CurveJet::new(std::slice::from_ref(&l), &o, DEFAULT_TRUNCATION)
                .unwrap()
                .self_check()
                .map_err(|e| e.to_string())?;
            jets += 1;
        }
    }
    let monomials = monomial_basis(Ambient::P2, MultiDegree::Total(3)).unwrap();
    for _ in 0..50 {
        let p = vec![fp().one(), fp().random(&mut rng), fp().random(&mut rng)];
        let coeffs: Vec<Scalar> = monomials.iter().map(|_| fp().random(&mut rng)).collect();
        let f = MultiPoly::from_coefficients(
            Ambient::P2,
            MultiDegree::Total(3),
            fp(),
            &monomials,
            &coeffs,
        )
        .unwrap();
        let x0_cubed = MultiPoly::var(Ambient::P2, fp(), 0)
            .pow(3)
            .scale(&f.eval(&p));
        let f = f.try_sub(&x0_cubed).unwrap();
        if let Ok(jet) = CurveJet::new(std::slice::from_ref(&f), &p, DEFAULT_TRUNCATION) {
            jet.self_check().map_err(|e| e.to_string())?;
            ensure(
                jet.evaluate(&f)
                    .unwrap()
                    .coeffs()
                    .iter()
                    .all(Scalar::is_zero),
                || "jet leaves a residue".into(),
            )?;
            jets += 1;
        }
    }

    // Determinism: identical serialized reports, and concurrent order equals serial order.
    let run = || -> String {
        PipelineKind::SUITE
            .iter()
            .map(|k| {
                serde_json::to_string(&run_trials(*k, PipelineConfig::new(fp(), 7), 2)).unwrap()
            })
            .collect()
    };
    ensure(run() == run(), || "reruns differ".into())?;
    let concurrent = run_trials(
        PipelineKind::Genus3Spin4Even,
        PipelineConfig::new(fp(), 11),
        4,
    );
    let serial: Vec<CheckReport> = (11..15)
        .map(|s| PipelineKind::Genus3Spin4Even.run(&PipelineConfig::new(fp(), s)))
        .collect();
    ensure(
        serde_json::to_string(&concurrent).unwrap() == serde_json::to_string(&serial).unwrap(),
        || "concurrent trials differ from serial".into(),
    )?;

    Ok(format!(
        "{matrices} matrices, {pairs} homomorphism pairs, {jets} jets, byte-identical reruns"
    ))
}

fn main() -> ExitCode {
    let suite_start = Instant::now();
    let forward = OnceCell::new();
    let roundtrip = OnceCell::new();
    let fw = || forward.get_or_init(|| Batch::run(PipelineKind::Genus4Spin3, 1, 20));
    let rt = || roundtrip.get_or_init(|| Batch::run(PipelineKind::Genus4Spin3Roundtrip, 1, 20));

    let criteria: Vec<Criterion> = vec![
        (
            "C1 symbolic invariant suite over Q and F_10007",
            Box::new(c1_symbolic),
        ),
        (
            "C2 genus-4 3-spin forward, seeds 1-20",
            Box::new(|| c2_forward(fw())),
        ),
        (
            "C3 fiber ranks on every forward instance",
            Box::new(|| c3_fibers(fw())),
        ),
        (
            "C4 inverse and roundtrip, seeds 1-20",
            Box::new(|| c4_inverse(fw(), rt())),
        ),
        ("C5 genus-4 odd sample, seeds 1-10", Box::new(c5_odd_sample)),
        ("C6 genus-3 odd 4-spin, seeds 1-10", Box::new(c6_genus3_odd)),
        (
            "C7 genus-3 even 4-spin, seeds 1-10",
            Box::new(c7_genus3_even),
        ),
        (
            "C8 property suites and determinism",
            Box::new(c8_properties),
        ),
    ];

    let mut failures = 0;
    for (title, run) in &criteria {
        let start = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        match verdict {
            Ok(detail) => println!("PASS  {title} [{elapsed:.2?}]: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("FAIL  {title} [{elapsed:.2?}]: {detail}");
            }
        }
    }
    println!(
        "acceptance: {}/{} criteria passed in {:.2?}",
        criteria.len() - failures,
        criteria.len(),
        suite_start.elapsed()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
