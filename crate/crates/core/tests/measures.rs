use kprod_core::measures::{GpeConcurrence, PeConcurrence};
use kprod_core::partitions::family;
use kprod_core::{random, states, Measure, MeasureParam, PureState, RegisterLayout, Tolerances};
use rand::Rng;

const SAMPLES: u64 = 120;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn sample(seed: u64) -> PureState {
    let n = 2 + (seed % 4) as usize;
    let layout = RegisterLayout::qubits(n).unwrap();
    random::pure_state(&layout, &mut random::rng(seed, 0)).unwrap()
}

fn measures() -> [&'static dyn Measure; 2] {
    [&PeConcurrence, &GpeConcurrence]
}

fn value(m: &dyn Measure, s: &PureState, p: f64, k: usize) -> f64 {
    m.value(s, &MeasureParam::new(p, k).unwrap(), &tol()).unwrap()
}

/// Tensor the blocks' states in block order, then move every subsystem back
/// to its label.
fn assemble(n: usize, blocks: &[Vec<usize>], parts: Vec<PureState>) -> PureState {
    let mut it = parts.into_iter();
    let mut acc = it.next().unwrap();
    for p in it {
        acc = acc.tensor(&p).unwrap();
    }
    let order: Vec<usize> = blocks.concat();
    let perm: Vec<usize> = (0..n).map(|t| order.iter().position(|&x| x == t).unwrap()).collect();
    acc.permute_subsystems(&perm).unwrap()
}

#[test]
fn regime_monotonicity() {
    for seed in 0..SAMPLES {
        let s = sample(seed);
        for k in 1..s.n() {
            for m in measures() {
                let q: Vec<f64> = [1.5, 2.0, 3.0, 5.0].iter().map(|&p| value(m, &s, p, k)).collect();
                assert!(q.windows(2).all(|w| w[0] <= w[1] + 1e-10), "{} q seed {seed}: {q:?}", m.name());
                let a: Vec<f64> = [0.0, 0.25, 0.5, 0.9].iter().map(|&p| value(m, &s, p, k)).collect();
                assert!(a.windows(2).all(|w| w[0] + 1e-10 >= w[1]), "{} alpha seed {seed}: {a:?}", m.name());
            }
        }
    }
}

#[test]
fn k_nesting_and_geometric_dominance() {
    for seed in 0..SAMPLES {
        let s = sample(seed);
        for p in [2.0, 1.0 / 3.0] {
            for k in 1..s.n() {
                let pe = value(&PeConcurrence, &s, p, k);
                if k > 1 {
                    assert!(pe <= value(&PeConcurrence, &s, p, k - 1));
                }
                assert!(value(&GpeConcurrence, &s, p, k) >= pe - 1e-10);
            }
        }
    }
}

#[test]
fn permutation_and_local_unitary_invariance() {
    let t = tol();
    for seed in 0..SAMPLES {
        let s = sample(seed);
        let mut rng = random::rng(seed, 1);
        let perm = random::permutation(s.n(), &mut rng);
        let permuted = s.permute_subsystems(&perm).unwrap();
        let rotated = s.apply_local_unitary(&random::local_unitaries(s.layout(), &mut rng), &t).unwrap();
        for k in 1..s.n() {
            for m in measures() {
                for p in [2.0, 0.5] {
                    let base = value(m, &s, p, k);
                    assert!((value(m, &permuted, p, k) - base).abs() < 1e-9);
                    assert!((value(m, &rotated, p, k) - base).abs() < 1e-9);
                }
            }
        }
    }
}

#[test]
fn vanishing_exactly_on_producible_states() {
    for seed in 0..SAMPLES {
        let n = 2 + (seed % 4) as usize;
        let mut rng = random::rng(seed, 2);
        let k = rng.random_range(1..n);

        let fam = family(n, k, false).unwrap();
        let chosen = &fam[rng.random_range(0..fam.len())];
        let parts = chosen
            .blocks()
            .iter()
            .map(|b| random::pure_state(&RegisterLayout::qubits(b.len()).unwrap(), &mut rng).unwrap())
            .collect();
        let producible = assemble(n, chosen.blocks(), parts);

        // k+1 random sites carry GHZ up to local unitaries; the rest are random singles
        let mut sites = random::permutation(n, &mut rng);
        let rest = sites.split_off(k + 1);
        let mut blocks = vec![sites.clone()];
        blocks.extend(rest.iter().map(|&x| vec![x]));
        let ghz = states::ghz(k + 1).unwrap();
        let ghz = ghz.apply_local_unitary(&random::local_unitaries(ghz.layout(), &mut rng), &tol()).unwrap();
        let mut parts = vec![ghz];
        parts.extend(rest.iter().map(|_| random::pure_state(&RegisterLayout::qubits(1).unwrap(), &mut rng).unwrap()));
        let entangled = assemble(n, &blocks, parts);

        for m in measures() {
            for p in [2.0, 0.0, 1.0 / 3.0, 3.0] {
                let zero = value(m, &producible, p, k);
                assert!(zero <= 1e-9, "{} seed {seed} k {k} p {p}: {zero} on {chosen}", m.name());
                let positive = value(m, &entangled, p, k);
                assert!(positive >= 1e-6, "{} seed {seed} k {k} p {p}: {positive}", m.name());
            }
        }
    }
}

#[test]
fn subadditive_on_products() {
    let shapes = [(2, 2, 1), (2, 3, 1), (3, 2, 1), (3, 3, 1), (3, 3, 2)];
    for seed in 0..SAMPLES {
        let (n1, n2, k) = shapes[(seed % 5) as usize];
        let mut rng = random::rng(seed, 3);
        let a = random::pure_state(&RegisterLayout::qubits(n1).unwrap(), &mut rng).unwrap();
        let b = random::pure_state(&RegisterLayout::qubits(n2).unwrap(), &mut rng).unwrap();
        let ab = a.tensor(&b).unwrap();
        for p in [2.0, 3.0, 0.5] {
            let joint = value(&PeConcurrence, &ab, p, k);
            let sum = value(&PeConcurrence, &a, p, k) + value(&PeConcurrence, &b, p, k);
            assert!(joint <= sum + 1e-10, "seed {seed} p {p}: {joint} > {sum}");
        }
    }
}

#[test]
fn special_case_bridges() {
    let t = tol();
    for seed in 0..40 {
        let mut rng = random::rng(seed, 4);
        let dims = vec![rng.random_range(2..=4), rng.random_range(2..=4)];
        let s = random::pure_state(&RegisterLayout::new(dims).unwrap(), &mut rng).unwrap();
        for q in [1.5, 2.0, 3.0] {
            let pe = value(&PeConcurrence, &s, q, 1);
            let deficit = 1.0 - s.reduced_spectrum(&[0], &t).unwrap().trace_power(q).unwrap();
            assert!((pe * pe - deficit).abs() < 1e-10);
        }
    }
    for seed in 0..SAMPLES {
        let s = sample(seed);
        for p in [2.0, 0.5] {
            assert!((value(&PeConcurrence, &s, p, 1) - value(&GpeConcurrence, &s, p, 1)).abs() < 1e-12);
        }
    }
}
