mod common;

use common::mismatched_pairs;
use planar_emulator::generate::{generate, two_ring, InstanceSpec, Kind};
use planar_emulator::pipeline::{build, Artifact, BuildConfig};

#[test]
fn two_ring_is_exact() {
    let inst = two_ring();
    let b = build(&inst, &BuildConfig::default()).unwrap();
    assert_eq!(mismatched_pairs(&inst, &b.emulator), 0);
    b.emulator.graph.check_euler().unwrap();
    assert_eq!(b.stats.property4_violations, 0);
}

#[test]
fn every_face_count_builds_exactly() {
    for kind in [Kind::GridRing, Kind::RandomPlanar] {
        for f in 1..=3 {
            for seed in 0..2 {
                let inst = generate(&InstanceSpec::new(kind, f, 3 * f + 1, seed)).unwrap();
                let b = build(&inst, &BuildConfig { seed, ..Default::default() }).unwrap();
                assert_eq!(mismatched_pairs(&inst, &b.emulator), 0, "{kind:?} f={f} seed={seed}");
                b.emulator.graph.check_euler().unwrap();
            }
        }
    }
}

#[test]
fn staged_artifact_matches_one_shot_build() {
    for f in 1..=2 {
        let inst = generate(&InstanceSpec::new(Kind::RandomPlanar, f, 6, 3)).unwrap();
        let mut a = Artifact::new(&inst, 3);
        a.preprocess().unwrap();
        // Each stage survives a JSON round trip.
        let mut a: Artifact = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
        a.critical().unwrap();
        a.skeleton(1).unwrap();
        let mut a: Artifact = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
        a.weights(None).unwrap();
        a.oneface().unwrap();
        a.glue().unwrap();
        let staged = a.emulator.unwrap();
        let built = build(&inst, &BuildConfig { seed: 3, ..Default::default() }).unwrap().emulator.to_json();
        assert_eq!(serde_json::to_string(&staged).unwrap(), serde_json::to_string(&built).unwrap());
    }
}

#[test]
fn seed_does_not_change_exactness() {
    let inst = generate(&InstanceSpec::new(Kind::GridRing, 2, 6, 4)).unwrap();
    for seed in 0..3 {
        let b = build(&inst, &BuildConfig { seed, ..Default::default() }).unwrap();
        assert_eq!(mismatched_pairs(&inst, &b.emulator), 0);
    }
}
