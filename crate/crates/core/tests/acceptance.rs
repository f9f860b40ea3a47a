//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use common::mismatched_pairs;
use planar_emulator::generate::{generate, suite, InstanceSpec, Kind};
use planar_emulator::knz::{build_knz_minor, special_bound};
use planar_emulator::oneface::oneface_emulator;
use planar_emulator::paths::distances;
use planar_emulator::pipeline::{build, critical, preprocess, target_distances, BuildConfig, Built};
use planar_emulator::skeleton::{build_initial, eliminate_all, property4_violations, ElimConfig};
use planar_emulator::verify::{quadrangle_violation, verify_emulator};
use planar_emulator::weights::{default_cap, solve, verify_certificate};
use planar_emulator::wyedelta::{random_capacities, wye_delta_equiv_test};
use planar_emulator::{Error, TerminalInstance};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

const SUITE_SIZE: usize = 50;
const MAX_K: usize = 12;
const MAX_VERTICES: usize = 400;
const TIME_LIMIT: Duration = Duration::from_secs(60);
const TWO_FACE_INSTANCES: u64 = 20;
const WYE_TRIPLES: u64 = 100;
const WYE_DEMANDS: usize = 100;
const ONEFACE_MAX_M: usize = 8;
const ONEFACE_SEEDS: u64 = 4;
/// Extra instances for the elimination criterion; bad pairs are rare below
/// three faces and twelve terminals.
const STRESS_SEEDS: u64 = 40;

struct Run {
    spec: InstanceSpec,
    inst: TerminalInstance,
    built: Result<Built, Error>,
    elapsed: Duration,
}

fn binom2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

fn report(n: usize, name: &str, failures: &[String], detail: String) -> bool {
    let ok = failures.is_empty();
    println!("criterion {n} {}: {name} ({detail})", if ok { "PASS" } else { "FAIL" });
    for f in failures.iter().take(10) {
        println!("    {f}");
    }
    ok
}

fn exactness(runs: &[Run]) -> bool {
    let mut fails = Vec::new();
    let mut slowest = Duration::ZERO;
    for r in runs {
        let s = &r.spec;
        if r.inst.k() > MAX_K || r.inst.graph.n() > MAX_VERTICES || !(1..=3).contains(&r.inst.f()) {
            fails.push(format!("{s:?}: instance outside the suite limits"));
        }
        slowest = slowest.max(r.elapsed);
        if r.elapsed > TIME_LIMIT {
            fails.push(format!("{s:?}: {} ms", r.elapsed.as_millis()));
        }
        match &r.built {
            Ok(b) => {
                let bad = mismatched_pairs(&r.inst, &b.emulator);
                if bad > 0 || b.emulator.graph.check_euler().is_err() {
                    fails.push(format!("{s:?}: {bad} pairs differ"));
                }
            }
            Err(e) => fails.push(format!("{s:?}: {e}")),
        }
    }
    report(1, "suite instances exact on all pairs", &fails, format!("{} instances, slowest {} ms", runs.len(), slowest.as_millis()))
}

fn sizes(runs: &[Run]) -> bool {
    let mut fails = Vec::new();
    for r in runs {
        let Ok(b) = &r.built else { continue };
        let st = &b.stats;
        let (f, k) = (st.f, st.k);
        let faces_sq: usize = st.per_face.iter().map(|m| m * m).sum();
        let bound_h = 64 * f * f * k * k + k + faces_sq;
        if st.n_h > bound_h {
            fails.push(format!("{:?}: |V(H)| = {} > {bound_h}", r.spec, st.n_h));
        }
        if f >= 2 {
            let inner = st.n_hstar - k;
            if inner > binom2(8 * f * k) {
                fails.push(format!("{:?}: {inner} non-terminals in H*", r.spec));
            }
        }
        if let Some(&c) = st.critical_per_terminal.iter().max() {
            if c > 8 * f - 4 {
                fails.push(format!("{:?}: {c} critical paths at one terminal", r.spec));
            }
        }
    }
    report(2, "size bounds", &fails, format!("{} instances", runs.len()))
}

fn elimination(runs: &[Run]) -> bool {
    let mut fails = Vec::new();
    let (mut checked, mut rounds) = (0, 0);
    for r in runs {
        let Ok(b) = &r.built else { continue };
        let Some(sk) = &b.skeleton else { continue };
        checked += 1;
        rounds += sk.stats.iterations;
        let h = &sk.stats.bad_history;
        if !h.windows(2).all(|w| w[1] < w[0]) {
            fails.push(format!("{:?}: bad-pair counts {h:?}", r.spec));
        }
        let full = &b.preprocessed.arrangement;
        let cps = b.critical.as_ref().unwrap();
        let initial = build_initial(full, cps).unwrap();
        if initial.crossing_pairs() != sk.arr.crossing_pairs() {
            fails.push(format!("{:?}: crossing set changed", r.spec));
        }
        match property4_violations(&sk.arr, &sk.canonical, full) {
            Ok(v) if v.is_empty() => {}
            Ok(v) => fails.push(format!("{:?}: {} property 4 violations", r.spec, v.len())),
            Err(e) => fails.push(format!("{:?}: {e}", r.spec)),
        }
    }
    for kind in [Kind::GridRing, Kind::RandomPlanar] {
        for seed in 0..STRESS_SEEDS {
            let spec = InstanceSpec::new(kind, 3, MAX_K, seed);
            let inst = generate(&spec).unwrap();
            let pre = preprocess(&inst, seed).unwrap();
            let cps = critical(&pre.arrangement).unwrap();
            let initial = build_initial(&pre.arrangement, &cps).unwrap();
            checked += 1;
            match eliminate_all(&pre.arrangement, &cps, ElimConfig { audit_every: 1 }) {
                Ok(sk) => {
                    rounds += sk.stats.iterations;
                    let h = &sk.stats.bad_history;
                    if !h.windows(2).all(|w| w[1] < w[0]) {
                        fails.push(format!("{spec:?}: bad-pair counts {h:?}"));
                    }
                    if initial.crossing_pairs() != sk.arr.crossing_pairs() {
                        fails.push(format!("{spec:?}: crossing set changed"));
                    }
                    if !property4_violations(&sk.arr, &sk.canonical, &pre.arrangement).is_ok_and(|v| v.is_empty()) {
                        fails.push(format!("{spec:?}: property 4 fails"));
                    }
                }
                Err(e) => fails.push(format!("{spec:?}: {e}")),
            }
        }
    }
    report(3, "bad-pair elimination", &fails, format!("{checked} skeletons, {rounds} reroutes"))
}

fn lp(runs: &[Run]) -> bool {
    let mut fails = Vec::new();
    let mut solved = 0;
    for r in runs.iter().filter(|r| r.inst.f() >= 2) {
        match &r.built {
            Err(Error::Infeasible(_)) => fails.push(format!("{:?}: skeleton LP infeasible", r.spec)),
            Err(_) => {}
            Ok(_) => solved += 1,
        }
    }
    let p = quadrangle_violation();
    match solve(&p, default_cap(&p)) {
        Err(Error::Infeasible(cert)) if verify_certificate(&cert, &p) => {}
        Err(Error::Infeasible(_)) => fails.push("quadrangle certificate rejected".into()),
        other => fails.push(format!("quadrangle skeleton not reported infeasible: {:?}", other.err())),
    }
    report(4, "weight LP feasibility and certificates", &fails, format!("{solved} skeleton LPs solved"))
}

fn knz(runs: &[Run]) -> bool {
    let mut fails = Vec::new();
    let mut worst = 0.0f64;
    for r in runs {
        match build_knz_minor(&r.inst) {
            Ok(m) => {
                if !verify_emulator(&r.inst, &m.emulator).map(|rep| rep.ok()).unwrap_or(false) {
                    fails.push(format!("{:?}: KNZ minor not exact", r.spec));
                }
                let bound = special_bound(r.inst.k());
                if m.special.len() > bound {
                    fails.push(format!("{:?}: {} special vertices > {bound}", r.spec, m.special.len()));
                }
                if bound > 0 {
                    worst = worst.max(m.special.len() as f64 / bound as f64);
                }
            }
            Err(e) => fails.push(format!("{:?}: {e}", r.spec)),
        }
    }
    report(5, "KNZ baseline", &fails, format!("{} instances, max special/bound {worst:.3}", runs.len()))
}

fn splits() -> bool {
    let mut fails = Vec::new();
    for seed in 0..TWO_FACE_INSTANCES {
        let kind = if seed % 2 == 0 { Kind::GridRing } else { Kind::RandomPlanar };
        let spec = InstanceSpec::new(kind, 2, 4 + (seed as usize % 5) * 2, seed);
        let inst = generate(&spec).unwrap();
        let pre = preprocess(&inst, seed).unwrap();
        let cps = critical(&pre.arrangement).unwrap();
        let m = pre.arrangement.faces[1].len();
        // Outer terminals walked against the face order.
        let mut js: Vec<usize> = Vec::new();
        for &t in pre.arrangement.faces[0].iter().rev() {
            let fs = &cps.per_terminal[t][0];
            let at: Vec<usize> = (0..fs.equivalent.len()).filter(|&j| !fs.equivalent[j]).collect();
            if at.len() != 1 {
                fails.push(format!("{spec:?}: terminal {t} splits at {at:?}"));
            }
            js.extend(at.first().copied());
        }
        let wind: usize = (0..js.len()).map(|i| (js[(i + 1) % js.len()] + m - js[i]) % m).sum();
        if wind != 0 && wind != m {
            fails.push(format!("{spec:?}: splits {js:?} wind {wind} times around {m}"));
        }
    }
    report(6, "two-face splits unique and cyclically monotone", &fails, format!("{TWO_FACE_INSTANCES} instances"))
}

fn wye_delta() -> bool {
    let mut fails = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut routable = 0;
    for s in 0..WYE_TRIPLES {
        let c = random_capacities(&mut rng);
        match wye_delta_equiv_test(&c, s, WYE_DEMANDS) {
            Ok((true, n)) => routable += n,
            Ok((false, _)) => fails.push(format!("capacities {c:?} disagree")),
            Err(e) => fails.push(format!("capacities {c:?}: {e}")),
        }
    }
    let total = WYE_TRIPLES as usize * WYE_DEMANDS;
    report(7, "Wye-Delta routability", &fails, format!("{total} demands, {routable} routable"))
}

fn oneface() -> bool {
    let mut fails = Vec::new();
    let mut cases = 0;
    for m in 2..=ONEFACE_MAX_M {
        for seed in 0..ONEFACE_SEEDS {
            let kind = if seed % 2 == 0 { Kind::RandomPlanar } else { Kind::GridRing };
            let inst = generate(&InstanceSpec::new(kind, 1, m, 1000 + seed)).unwrap();
            let targets = target_distances(&inst, &inst.faces[0].terminals).unwrap();
            cases += 1;
            match oneface_emulator(&targets, m) {
                Ok((g, _)) => {
                    if g.graph.n() != m + binom2(m) {
                        fails.push(format!("m={m} seed={seed}: {} vertices", g.graph.n()));
                    }
                    for (&(a, b), d) in &targets {
                        if distances(&g.graph, g.terminals[a])[g.terminals[b]].as_ref() != Some(d) {
                            fails.push(format!("m={m} seed={seed}: pair {a}-{b} off"));
                        }
                    }
                }
                Err(e) => fails.push(format!("m={m} seed={seed}: {e}")),
            }
        }
    }
    report(8, "one-face emulators", &fails, format!("{cases} metrics, m up to {ONEFACE_MAX_M}"))
}

fn main() {
    let runs: Vec<Run> = suite(SUITE_SIZE)
        .into_iter()
        .map(|spec| {
            let inst = generate(&spec).unwrap();
            let start = Instant::now();
            let built = build(&inst, &BuildConfig { seed: spec.seed, ..Default::default() });
            Run { spec, inst, built, elapsed: start.elapsed() }
        })
        .collect();
    let results = [
        exactness(&runs),
        sizes(&runs),
        elimination(&runs),
        lp(&runs),
        knz(&runs),
        splits(),
        wye_delta(),
        oneface(),
    ];
    let passed = results.iter().filter(|&&r| r).count();
    println!("acceptance: {passed}/{} criteria pass", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
