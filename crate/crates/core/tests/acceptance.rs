//! Acceptance run: one line per criterion, nonzero exit on any failure.

use std::process::ExitCode;
use std::time::Instant;

use num_traits::Zero;
use rand::Rng;

use polyvc::bounds::{
    bounds_report, fixed_point_inequality, main_bound, proof_chain_check, BoundsReport,
    InequalityVerdict, DEFAULT_PRECISION,
};
use polyvc::construction::{
    certify_construction, circle_point, default_circle_params, replay, Certificate,
    ConstructionSpec, ReplayFailure, SearchConfig,
};
use polyvc::document::PointSetDocument;
use polyvc::geometry::{
    hull_contains, hull_contains_exhaustive, lp_membership, orientation, simplex_contains,
};
use polyvc::range::{shatter_check, verify_result, DEFAULT_CAP};
use polyvc::rational::{self, Rational};
use polyvc::sampling::{seeded, Sampler, SeededRng};
use polyvc::signs::{signpattern_experiment, CorrespondenceReport};
use polyvc::{PointSet, RationalPoint, Sign};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn conclusion_grid() -> Outcome {
    let mut pairs = 0;
    for d in 3..=64u64 {
        for k in 3..=64u64 {
            let (t, _) = main_bound(d, k, DEFAULT_PRECISION).map_err(err)?;
            let check = fixed_point_inequality(d, k, &t, DEFAULT_PRECISION).map_err(err)?;
            ensure(check.verdict == InequalityVerdict::Violated, || {
                format!("d={d} k={k}: {:?}", check.verdict)
            })?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs certified violated"))
}

fn proof_chain() -> Outcome {
    let mut checked = 0;
    for d in 3..12u64 {
        for k in d + 1..=12 {
            let (main, _) = main_bound(d, k, DEFAULT_PRECISION).map_err(err)?;
            let ceil: u64 = main.ceil().try_into().map_err(err)?;
            for t in [1, 10, 100, ceil] {
                let chain = proof_chain_check(d, k, t, DEFAULT_PRECISION).map_err(err)?;
                ensure(chain.holds() && chain.first.is_some(), || {
                    format!("d={d} k={k} t={t}: {chain:?}")
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (d, k, t) triples hold"))
}

fn small_int_point(rng: &mut SeededRng, d: usize, range: i64) -> RationalPoint {
    RationalPoint::from_ints(&(0..d).map(|_| rng.gen_range(-range..=range)).collect::<Vec<_>>())
}

/// Random generators and a query that is often inside or on the boundary.
fn membership_instance(rng: &mut SeededRng) -> (PointSet, RationalPoint) {
    let d = rng.gen_range(1..=4);
    let n = rng.gen_range(1..=10);
    let sampler = Sampler::default();
    let coarse = rng.gen_bool(0.5);
    let generators: Vec<RationalPoint> = (0..n)
        .map(|_| {
            if coarse {
                small_int_point(rng, d, 3)
            } else {
                sampler.point(rng, d)
            }
        })
        .collect();
    let query = match rng.gen_range(0..4) {
        0 => sampler.point(rng, d),
        1 => small_int_point(rng, d, 3),
        2 => {
            // Convex combination with small rational weights.
            let weights: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
            let total: i64 = weights.iter().sum::<i64>().max(1);
            let mut coords = vec![Rational::zero(); d];
            for (g, w) in generators.iter().zip(&weights) {
                for (c, v) in coords.iter_mut().zip(g.coords()) {
                    *c += v * rational::ratio(*w, total);
                }
            }
            if weights.iter().all(|&w| w == 0) {
                generators[0].clone()
            } else {
                RationalPoint::new(coords).unwrap()
            }
        }
        _ => {
            // Slightly outside a generator or on a segment.
            let a = &generators[rng.gen_range(0..n)];
            let b = &generators[rng.gen_range(0..n)];
            let t = rational::ratio(rng.gen_range(-1..=5), 4);
            let coords = a
                .coords()
                .iter()
                .zip(b.coords())
                .map(|(x, y)| x + (y - x) * &t)
                .collect();
            RationalPoint::new(coords).unwrap()
        }
    };
    (PointSet::new(d, generators).unwrap(), query)
}

fn triple_equivalence() -> Outcome {
    let mut rng = seeded(3);
    let total = 5000;
    let (mut inside, mut direct_simplex) = (0, 0);
    for i in 0..total {
        let (g, a) = membership_instance(&mut rng);
        let hull = hull_contains(&g, &a).map_err(err)?;
        let lp = lp_membership(&g, &a).map_err(err)?;
        let cara = hull_contains_exhaustive(&g, &a).map_err(err)?;
        ensure(hull == lp && lp == cara, || {
            format!("instance {i}: hull {hull}, lp {lp}, simplex union {cara}; {g:?} {a}")
        })?;
        if g.len() == g.dimension() + 1 {
            let s = simplex_contains(g.points(), &a).map_err(err)?;
            ensure(s == lp, || format!("instance {i}: simplex {s}, lp {lp}"))?;
            direct_simplex += 1;
        }
        inside += lp as usize;
    }
    Ok(format!(
        "{total} instances agree ({inside} inside, {direct_simplex} single simplices)"
    ))
}

fn correspondence() -> Outcome {
    let mut lines = Vec::new();
    for (d, k, t) in [(2, 3, 3), (3, 4, 2)] {
        let r: CorrespondenceReport =
            signpattern_experiment(d, k, t, 1000, 1, &Sampler::default()).map_err(err)?;
        ensure(
            r.general_position == 1000 && r.correspondence_holds() && r.counting_holds,
            || format!("({d},{k},{t}): {r:?}"),
        )?;
        lines.push(format!(
            "({d},{k},{t}) {} subsets <= {} patterns <= 2^{}",
            r.distinct_subsets, r.distinct_patterns, r.mt_bound_log2.decimal
        ));
    }
    Ok(lines.join("; "))
}

fn convex_position() -> Outcome {
    let mut verified = 0;
    for k in 3..=5 {
        let points: Vec<RationalPoint> = default_circle_params(k)
            .iter()
            .map(|u| {
                let (x, y) = circle_point(u);
                RationalPoint::new(vec![x, y]).unwrap()
            })
            .collect();
        let set = PointSet::new(2, points).map_err(err)?;
        let report = shatter_check(&set, k, DEFAULT_CAP).map_err(err)?;
        ensure(report.shattered && report.yes == 1 << k, || {
            format!("k={k}: {} yes of {}", report.yes, 1 << k)
        })?;
        for (mask, outcome) in report.outcomes.iter().enumerate() {
            let inst = polyvc::range::LabeledInstance::from_mask(set.clone(), mask as u64, k)
                .map_err(err)?;
            ensure(verify_result(&inst, outcome).map_err(err)?, || {
                format!("k={k} mask {mask}: witness does not re-verify")
            })?;
            verified += 1;
        }
    }
    Ok(format!("k = 3, 4, 5 shattered; {verified} witnesses re-verified"))
}

fn certify(d: usize, k: usize) -> Result<Certificate, String> {
    let spec = ConstructionSpec::new(d, k).map_err(err)?;
    let report = certify_construction(&spec, &SearchConfig::default(), DEFAULT_CAP).map_err(err)?;
    report
        .certificate
        .ok_or_else(|| format!("({d},{k}) not certified: {:?}", report.failure))
}

fn construction() -> Outcome {
    let mut lines = Vec::new();
    for (d, k, points, budget) in [(3, 3, 6, 5), (3, 6, 12, 8)] {
        let cert = certify(d, k)?;
        ensure(
            cert.ground_set.len() == points
                && cert.budget == budget
                && cert.labelings.len() == 1 << points,
            || format!("({d},{k}): unexpected certificate shape"),
        )?;
        let text = cert.to_json();
        let back = Certificate::from_json(&text).map_err(err)?;
        let r = replay(&back).map_err(err)?;
        ensure(r.passed, || format!("({d},{k}) replay failed: {:?}", r.failure))?;

        let mut tampered = back;
        tampered.ground_set[points - 1][0] += rational::int(10);
        let r = replay(&tampered).map_err(err)?;
        ensure(
            matches!(r.failure, Some(ReplayFailure::Containment { point, .. }) if point == points - 1),
            || format!("({d},{k}) tamper not caught: {:?}", r.failure),
        )?;
        let eps: Vec<String> = cert
            .spec
            .epsilon_schedule
            .iter()
            .map(|(m, v)| format!("eps({m})={}", rational::format(v)))
            .collect();
        lines.push(format!(
            "({d},{k}) {} labelings at budget {budget}, {}",
            cert.labelings.len(),
            eps.join(" ")
        ));
    }
    Ok(lines.join("; ") + "; tampers rejected")
}

fn orientation_properties() -> Outcome {
    let mut rng = seeded(7);
    let sampler = Sampler::default();
    let mut zeros = 0;
    for d in 2..=4 {
        for i in 0..1000 {
            let coarse = i % 4 == 0;
            let config: Vec<RationalPoint> = (0..=d)
                .map(|_| {
                    if coarse {
                        small_int_point(&mut rng, d, 2)
                    } else {
                        sampler.point(&mut rng, d)
                    }
                })
                .collect();
            let sign = orientation(&config).map_err(err)?;
            zeros += sign.is_zero() as usize;
            let a = rng.gen_range(0..=d);
            let b = (a + rng.gen_range(1..=d)) % (d + 1);
            let mut swapped = config.clone();
            swapped.swap(a, b);
            ensure(orientation(&swapped).map_err(err)? == -sign, || {
                format!("d={d} config {i}: swap {a},{b} did not flip")
            })?;
            let shift: Vec<Rational> = (0..d).map(|_| sampler.coordinate(&mut rng)).collect();
            let moved: Vec<RationalPoint> = config.iter().map(|p| p.translate(&shift)).collect();
            ensure(orientation(&moved).map_err(err)? == sign, || {
                format!("d={d} config {i}: translation changed the sign")
            })?;
        }
    }
    Ok(format!("3000 configurations, {zeros} degenerate, zero failures"))
}

fn determinism() -> Outcome {
    let a = signpattern_experiment(2, 3, 3, 200, 11, &Sampler::default()).map_err(err)?;
    let b = signpattern_experiment(2, 3, 3, 200, 11, &Sampler::default()).map_err(err)?;
    let (ja, jb) = (
        serde_json::to_string(&a).map_err(err)?,
        serde_json::to_string(&b).map_err(err)?,
    );
    ensure(ja == jb, || "sign-pattern reports differ".into())?;
    let back: CorrespondenceReport = serde_json::from_str(&ja).map_err(err)?;
    ensure(back == a, || "sign-pattern report round trip".into())?;

    let r1 = bounds_report(3, 3, Some(100), DEFAULT_PRECISION).map_err(err)?;
    let r2 = bounds_report(3, 3, Some(100), DEFAULT_PRECISION).map_err(err)?;
    let j1 = serde_json::to_string(&r1).map_err(err)?;
    ensure(j1 == serde_json::to_string(&r2).map_err(err)?, || {
        "bounds reports differ".into()
    })?;
    let back: BoundsReport = serde_json::from_str(&j1).map_err(err)?;
    ensure(back == r1, || "bounds report round trip".into())?;

    let mut rng = seeded(5);
    let set = Sampler::default().point_set(&mut rng, 3, 7);
    let doc = PointSetDocument::from_point_set(&set).with_labels(&[true, false, true, true, false, false, true]);
    let parsed = PointSetDocument::from_json(&doc.to_json()).map_err(err)?;
    ensure(parsed == doc && parsed.point_set().map_err(err)? == set, || {
        "point-set document round trip".into()
    })?;

    let c1 = certify(3, 2)?;
    let c2 = certify(3, 2)?;
    ensure(c1.to_json() == c2.to_json(), || "certificates differ".into())?;
    ensure(Certificate::from_json(&c1.to_json()).map_err(err)? == c1, || {
        "certificate round trip".into()
    })?;
    ensure(Sign::from_i8(-1) == Some(Sign::Negative), || "sign codec".into())?;
    Ok("reports, documents and certificates are reproducible and round-trip".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("AC1 conclusion grid", conclusion_grid),
        ("AC2 proof chain", proof_chain),
        ("AC3 membership triple equivalence", triple_equivalence),
        ("AC4 sign-pattern correspondence", correspondence),
        ("AC5 convex-position shattering", convex_position),
        ("AC6 construction certificates", construction),
        ("AC7 orientation properties", orientation_properties),
        ("AC8 determinism and round trips", determinism),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {name}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {name}: {detail} ({secs:.1}s)");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
