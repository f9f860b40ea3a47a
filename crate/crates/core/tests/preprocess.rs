use planar_emulator::generate::{generate, two_ring, InstanceSpec, Kind};
use planar_emulator::preprocess::{check_distances, simplify};

#[test]
fn two_ring_simplifies_with_same_distances() {
    let inst = two_ring();
    let si = simplify(&inst, 7).unwrap();
    check_distances(&inst, &si).unwrap();
    si.arrangement.to_graph(true, None).unwrap();
}

#[test]
fn generated_instances_simplify() {
    for kind in [Kind::GridRing, Kind::RandomPlanar] {
        for f in 1..=3 {
            for seed in 0..4 {
                let inst = generate(&InstanceSpec::new(kind, f, 3 * f + 2, seed)).unwrap();
                let si = simplify(&inst, seed).unwrap();
                check_distances(&inst, &si).unwrap();
                si.arrangement.to_graph(true, None).unwrap();
            }
        }
    }
}
