use relnav_core::geometry::Point2;
use relnav_core::gridsim::{Observation, Pose, VisibleObject, MAX_DEPTH, RAY_COUNT};
use relnav_core::perception::{simulate_detector, AccumulatorParams, Association, Detection, DetectorNoise, TrackSet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn observation(objects: &[(&str, f64, f64)]) -> Observation {
    Observation {
        pose: Pose { position: Point2::new(0.0, 0.0), heading: 0.0 },
        visible_objects: objects
            .iter()
            .enumerate()
            .map(|(index, &(l, x, y))| VisibleObject { index, label: l.into(), position: Point2::new(x, y) })
            .collect(),
        depth_rays: vec![MAX_DEPTH; RAY_COUNT],
        region_label: "bathroom".into(),
        focus: None,
    }
}

fn vocab() -> Vec<String> {
    ["toilet", "sink", "towel"].map(String::from).to_vec()
}

#[test]
fn noise_free_detector_mirrors_ground_truth() {
    let obs = observation(&[("toilet", 2.0, 0.0), ("sink", 3.0, 0.5)]);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let dets = simulate_detector(&obs, &vocab(), &DetectorNoise::noiseless(), 4, &mut rng);
    assert_eq!(dets.len(), 2);
    for (d, v) in dets.iter().zip(&obs.visible_objects) {
        assert_eq!(d.label, v.label);
        assert_eq!(d.position, v.position);
        assert_eq!(d.frame, 4);
    }
}

#[test]
fn total_miss_rate_empties_the_output() {
    let obs = observation(&[("toilet", 2.0, 0.0), ("sink", 3.0, 0.5)]);
    let noise = DetectorNoise { fn_rate: 1.0, fp_rate: 0.0, ..DetectorNoise::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for f in 0..50 {
        assert!(simulate_detector(&obs, &vocab(), &noise, f, &mut rng).is_empty());
    }
}

#[test]
fn spurious_rate_matches_the_knob() {
    let obs = observation(&[]);
    let noise = DetectorNoise { fp_rate: 0.2, fn_rate: 0.0, ..DetectorNoise::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let frames = 10_000;
    let spurious = (0..frames)
        .filter(|&f| !simulate_detector(&obs, &vocab(), &noise, f, &mut rng).is_empty())
        .count();
    let rate = spurious as f64 / frames as f64;
    assert!((rate - 0.2).abs() <= 0.01, "rate {rate}");
}

fn det(x: f64, y: f64) -> Detection {
    Detection { label: "toilet".into(), confidence: 0.9, quality: 1.0, position: Point2::new(x, y), frame: 0 }
}

#[test]
fn association_follows_the_gate() {
    let params = AccumulatorParams::default();
    let mut ts = TrackSet::new();
    let first = ts.update(&[det(1.0, 1.0)], &params, |_| 1.0);
    assert!(matches!(first[0], Association::Spawned(_)));
    let t = ts.iter().next().unwrap();
    assert_eq!(t.history.iter().copied().collect::<Vec<_>>(), vec![false, false, false, false, true]);

    let near = ts.update(&[det(1.3, 1.0)], &params, |_| 1.0);
    assert!(matches!(near[0], Association::Existing(_)));

    // brute-force nearest same-label track distance decides spawning
    let probe = det(2.1, 1.0);
    let nearest = ts
        .iter()
        .map(|t| t.position().distance(probe.position).min(t.last_position.distance(probe.position)))
        .fold(f64::INFINITY, f64::min);
    assert!(nearest > 0.5);
    let far = ts.update(&[probe], &params, |_| 1.0);
    assert!(matches!(far[0], Association::Spawned(_)));
    assert_eq!(ts.len(), 2);
}

#[test]
fn verification_threshold() {
    let params = AccumulatorParams::default();
    let mut ts = TrackSet::new();
    assert!(ts.verified(params.eta_add).is_empty());
    ts.update(&[det(1.0, 1.0)], &params, |_| 1.0);
    ts.update(&[det(1.0, 1.0)], &params, |_| 1.0);
    let v = ts.verified(params.eta_add);
    assert_eq!(v.len(), 1);
    assert!((v[0].existence - 0.8763).abs() < 1e-4);
    let mut fresh = TrackSet::new();
    fresh.update(&[], &params, |_| 1.0);
    assert!(fresh.verified(0.5).is_empty());
}
