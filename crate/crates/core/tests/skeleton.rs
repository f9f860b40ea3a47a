use planar_emulator::generate::{generate, suite, InstanceSpec, Kind};
use planar_emulator::pipeline::{critical, preprocess};
use planar_emulator::skeleton::{audit_region_parity, eliminate_all, property4_violations, ElimConfig};

fn multi_face() -> Vec<InstanceSpec> {
    suite(30).into_iter().filter(|s| s.f >= 2).collect()
}

#[test]
fn elimination_invariants_hold() {
    for spec in multi_face() {
        let inst = generate(&spec).unwrap();
        let pre = preprocess(&inst, spec.seed).unwrap();
        let cps = critical(&pre.arrangement).unwrap();
        let sk = eliminate_all(&pre.arrangement, &cps, ElimConfig { audit_every: 1 }).unwrap();
        let h = &sk.stats.bad_history;
        assert!(h.windows(2).all(|w| w[1] < w[0]), "{spec:?}: {h:?}");
        assert_eq!(sk.stats.audits, sk.stats.iterations);
        assert!(property4_violations(&sk.arr, &sk.canonical, &pre.arrangement).unwrap().is_empty(), "{spec:?}");
        audit_region_parity(&sk.arr, &sk.canonical, &pre.arrangement).unwrap();
    }
}

#[test]
fn crossing_set_is_conserved() {
    for spec in multi_face() {
        let inst = generate(&spec).unwrap();
        let pre = preprocess(&inst, spec.seed).unwrap();
        let cps = critical(&pre.arrangement).unwrap();
        let before = planar_emulator::skeleton::build_initial(&pre.arrangement, &cps).unwrap().crossing_pairs();
        let sk = eliminate_all(&pre.arrangement, &cps, ElimConfig::default()).unwrap();
        assert_eq!(sk.arr.crossing_pairs(), before, "{spec:?}");
    }
}

#[test]
fn audit_cadence_does_not_change_the_result() {
    let spec = InstanceSpec::new(Kind::GridRing, 3, 9, 2);
    let inst = generate(&spec).unwrap();
    let pre = preprocess(&inst, 2).unwrap();
    let cps = critical(&pre.arrangement).unwrap();
    let a = eliminate_all(&pre.arrangement, &cps, ElimConfig { audit_every: 1 }).unwrap();
    let b = eliminate_all(&pre.arrangement, &cps, ElimConfig { audit_every: 0 }).unwrap();
    assert_eq!(a.stats.bad_history, b.stats.bad_history);
    assert_eq!(b.stats.audits, 0);
    assert_eq!(serde_json::to_string(&a.arr).unwrap(), serde_json::to_string(&b.arr).unwrap());
}

#[test]
fn rerouted_instances_build_exactly() {
    use planar_emulator::pipeline::{build, BuildConfig};
    let mut rerouted = 0;
    for (kind, seed) in [(Kind::GridRing, 18), (Kind::GridRing, 26), (Kind::RandomPlanar, 2), (Kind::RandomPlanar, 6)] {
        let inst = generate(&InstanceSpec::new(kind, 3, 12, seed)).unwrap();
        let b = build(&inst, &BuildConfig { seed, ..Default::default() }).unwrap();
        rerouted += b.stats.elim_iterations;
        let h = &b.stats.bad_history;
        assert!(h.windows(2).all(|w| w[1] < w[0]), "{h:?}");
        let rep = planar_emulator::verify::verify_emulator(&inst, &b.emulator).unwrap();
        assert!(rep.ok(), "{kind:?} seed {seed}: {:?}", rep.mismatches());
    }
    assert!(rerouted > 0);
}
