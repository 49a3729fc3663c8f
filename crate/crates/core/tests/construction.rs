use std::collections::BTreeSet;

use polyvc::combinatorics::mask_to_labels;
use polyvc::construction::{
    build_witness, certify_construction, generate, replay, search_epsilon_schedule,
    verify_labeling, ConstructionSpec, ScheduleSet, SearchConfig, SearchMode, SearchOutcome,
};
use polyvc::rational::{self, int, ratio, Rational};
use polyvc::RationalPoint;

fn uniform_schedule(spec: &ConstructionSpec) -> polyvc::construction::EpsilonSchedule {
    let inst = generate(spec).unwrap();
    match search_epsilon_schedule(&inst, &SearchConfig::default()).unwrap() {
        SearchOutcome::Found {
            schedules: ScheduleSet::Uniform(s),
            ..
        } => s,
        other => panic!("{other:?}"),
    }
}

#[test]
fn three_three_coordinates() {
    let inst = generate(&ConstructionSpec::new(3, 3).unwrap()).unwrap();
    let p = |x: &str, y: &str, z: &str| RationalPoint::parse(&[x, y, z]).unwrap();
    let expected = [
        p("-33/65", "-56/65", "1/200"),
        p("-33/65", "-56/65", "-1/200"),
        p("1", "0", "1/200"),
        p("1", "0", "-1/200"),
        p("-33/65", "56/65", "1/200"),
        p("-33/65", "56/65", "-1/200"),
    ];
    assert_eq!(inst.ground_set().points(), &expected);
    assert_eq!(
        inst.common_vertices(),
        &[p("0", "0", "-50"), p("0", "0", "50")]
    );
}

#[test]
fn found_schedule_sits_in_the_analytic_window() {
    // d = 3, unit circle, clusters of half-height r/2, S of half-height R/2:
    // a full face needs e/(1+e) >= r/R, a singleton needs e/(1+e) < 2r/R.
    let spec = ConstructionSpec::new(3, 3).unwrap();
    let s = uniform_schedule(&spec);
    let (r, big) = (ratio(1, 100), int(100));
    let rel = |e: &Rational| e / (int(1) + e);
    assert!(rel(s.get(2).unwrap()) >= &r / &big);
    assert!(rel(s.get(1).unwrap()) < int(2) * &r / &big);
}

/// Reflection `y -> -y` maps the circle point of `u` to that of `-u`, so with
/// parameters `{-u, 0, u}` it swaps clusters `0` and `2`.
#[test]
fn reflection_maps_witnesses_to_witnesses() {
    let spec = ConstructionSpec::new(3, 3).unwrap();
    assert_eq!(spec.circle_params[0], -spec.circle_params[2].clone());
    let schedule = uniform_schedule(&spec);
    let inst = generate(&spec).unwrap();
    let reflect = |p: &RationalPoint| {
        let mut c = p.coords().to_vec();
        c[1] = -c[1].clone();
        RationalPoint::new(c).unwrap()
    };
    for (p, q) in [(0, 4), (1, 5), (2, 2), (3, 3)] {
        assert_eq!(reflect(&inst.ground_set().points()[p]), inst.ground_set().points()[q]);
    }
    let image = |p: usize| match p / 2 {
        0 => p + 4,
        2 => p - 4,
        _ => p,
    };
    for mask in 0u64..64 {
        let labels = mask_to_labels(mask, 6);
        let mut mirrored = vec![false; 6];
        for p in 0..6 {
            mirrored[image(p)] = labels[p];
        }
        let w = build_witness(&inst, &labels, &schedule).unwrap();
        let w2 = build_witness(&inst, &mirrored, &schedule).unwrap();
        let a: BTreeSet<Vec<Rational>> = w
            .polytope
            .vertices()
            .iter()
            .map(|v| reflect(v).into_coords())
            .collect();
        let b: BTreeSet<Vec<Rational>> =
            w2.polytope.vertices().iter().map(|v| v.coords().to_vec()).collect();
        assert_eq!(a, b, "mask {mask}");
        assert_eq!(verify_labeling(&inst, &w2, &mirrored).unwrap(), None);
    }
}

#[test]
fn planar_certificates() {
    for k in [3, 4, 7] {
        let spec = ConstructionSpec::new(2, k).unwrap();
        let report = certify_construction(&spec, &SearchConfig::default(), 20).unwrap();
        assert_eq!(report.rounds, Some(0));
        let cert = report.certificate.unwrap();
        assert!(replay(&cert).unwrap().passed);
    }
}

#[test]
fn per_labeling_certificate_replays() {
    let spec = ConstructionSpec::new(3, 2).unwrap();
    let config = SearchConfig {
        mode: SearchMode::PerLabeling,
        ..SearchConfig::default()
    };
    let cert = certify_construction(&spec, &config, 20)
        .unwrap()
        .certificate
        .unwrap();
    assert!(cert.labelings.iter().all(|r| r.epsilon.is_some()));
    assert!(replay(&cert).unwrap().passed);
}

#[test]
fn four_dimensional_clusters() {
    let spec = ConstructionSpec::new(4, 2).unwrap();
    let report = certify_construction(&spec, &SearchConfig::default(), 20).unwrap();
    assert_eq!(report.ground_size, 6);
    assert_eq!(report.budget, 5);
    let cert = report.certificate.expect("certified");
    assert_eq!(cert.spec.epsilon_schedule.iter().count(), 3);
    assert!(replay(&cert).unwrap().passed);
}

#[test]
fn custom_radii() {
    let spec = ConstructionSpec::new(3, 4)
        .unwrap()
        .with_radii(rational::ratio(1, 50), int(20))
        .unwrap();
    let report = certify_construction(&spec, &SearchConfig::default(), 20).unwrap();
    let cert = report.certificate.expect("certified");
    assert!(replay(&cert).unwrap().passed);
}
