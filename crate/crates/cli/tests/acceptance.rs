//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use kprod_cli::sweep::{self, Series, SweepSpec};
use kprod_core::measures::{GenuineGpe, GenuinePe, GpeConcurrence, PeConcurrence};
use kprod_core::partitions::{count_bounded, count_genuine, family};
use kprod_core::pi::{permutations, pi_lower_bound, pi_project, PiOptions};
use kprod_core::roof::{roof_upper, RoofOptions};
use kprod_core::state::io;
use kprod_core::{
    random, states, DensityOperator, Measure, MeasureParam, MeasureRegistry, PureState, RegisterLayout, StateData,
    Tolerances,
};
use nalgebra::DMatrix;
use num_complex::Complex64;

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);
type Case = (&'static str, fn() -> f64, f64);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(name: &str, got: f64, want: f64, tol: f64) -> Check {
    ensure((got - want).abs() <= tol, || format!("{name}: got {got}, expected {want} (tol {tol})"))
}

fn in_time(start: Instant, limit: Duration) -> Check {
    let spent = start.elapsed();
    ensure(spent < limit, || format!("took {spent:?}, limit {limit:?}"))
}

fn tol() -> Tolerances {
    Tolerances::default()
}

fn value(m: &dyn Measure, s: &PureState, p: f64, k: usize) -> f64 {
    m.value(s, &MeasureParam::new(p, k).unwrap(), &tol()).unwrap()
}

const BOUNDED: [&[u64]; 6] = [
    &[1, 4],
    &[1, 10, 14],
    &[1, 26, 46, 51],
    &[1, 76, 166, 196, 202],
    &[1, 232, 652, 827, 869, 876],
    &[1, 764, 2780, 3795, 4075, 4131, 4139],
];
const GENUINE: [&[u64]; 6] = [
    &[1, 3],
    &[1, 9, 4],
    &[1, 25, 20, 5],
    &[1, 75, 90, 30, 6],
    &[1, 231, 420, 175, 42, 7],
    &[1, 763, 2016, 1015, 280, 56, 8],
];

fn partition_counts() -> Check {
    let start = Instant::now();
    for (row, n) in (3..=8).enumerate() {
        for k in 1..n {
            let b = count_bounded(n, k).map_err(|e| e.to_string())?;
            let g = count_genuine(n, k).map_err(|e| e.to_string())?;
            ensure(b == BOUNDED[row][k - 1], || format!("bounded n={n} k={k}: {b}"))?;
            ensure(g == GENUINE[row][k - 1], || format!("genuine n={n} k={k}: {g}"))?;
        }
    }
    in_time(start, Duration::from_secs(1))
}

fn four_qubit_examples() -> Check {
    let limit = Duration::from_secs(1);
    let cases: [Case; 4] = [
        ("E(phi1)", || value(&PeConcurrence, &states::phi1(), 2.0, 2), 6f64.sqrt() / 4.0),
        ("E(phi2)", || value(&PeConcurrence, &states::phi2(), 2.0, 2), 6f64.sqrt() / 4.0),
        (
            "GPE(phi1)",
            || value(&GpeConcurrence, &states::phi1(), 2.0, 2),
            160000f64.powf(1.0 / 20.0) / 8f64.sqrt(),
        ),
        (
            "GPE(phi2)",
            || value(&GpeConcurrence, &states::phi2(), 2.0, 2),
            756940800f64.powf(1.0 / 20.0) / 4.0,
        ),
    ];
    for (name, f, want) in cases {
        let start = Instant::now();
        let got = f();
        let spent = start.elapsed();
        within(name, got, want, 1e-9)?;
        ensure(spent < limit, || format!("{name} took {spent:?}"))?;
    }
    Ok(())
}

fn w4_examples() -> Check {
    let w = states::w(4).unwrap();
    let target = 0.375f64.sqrt();
    within("E_2-3(W4)", value(&PeConcurrence, &w, 2.0, 3), target, 1e-9)?;
    within("genuine E_2-3(W4)", value(&GenuinePe::default(), &w, 2.0, 3), target, 1e-9)?;
    within("genuine GPE_2-3(W4)", value(&GenuineGpe::default(), &w, 2.0, 3), target, 1e-9)?;
    let gpe = (0.375f64.powi(5) * (5.0f64 / 12.0).powi(6) * 0.5f64.powi(3)).powf(1.0 / 28.0);
    within("GPE_2-3(W4)", value(&GpeConcurrence, &w, 2.0, 3), gpe, 1e-9)
}

fn phitheta_sweep() -> Check {
    let start = Instant::now();
    let series = ["pe:2:2", "gpe:2:2", "pe:1/3:2", "gpe:1/3:2"]
        .iter()
        .map(|s| Series::parse(s).unwrap())
        .collect();
    let spec = SweepSpec {
        start: 0.0,
        stop: 90.0,
        steps: 91,
        series,
    };
    let registry = MeasureRegistry::with_builtins(1.0, 1.0).unwrap();
    let table = sweep::run(&spec, &registry, &tol()).map_err(|e| e.to_string())?;
    ensure(table.theta.len() == 91, || "grid size".into())?;
    for s in 0..4 {
        within("value at 0 deg", table.rows[0][s].value, 0.0, 1e-9)?;
    }
    for (pe, gpe) in [(0, 1), (2, 3)] {
        let (a, b) = (table.column(pe), table.column(gpe));
        for i in 0..91 {
            ensure(b[i] >= a[i] - 1e-10, || format!("gpe < pe at {} deg", table.theta[i]))?;
        }
        let interior = table
            .kinks()
            .into_iter()
            .filter(|k| k.series == pe && table.theta[k.between.0] > 0.0 && table.theta[k.between.1] < 90.0)
            .count();
        ensure(interior >= 1, || format!("no interior argmin change for series {pe}"))?;
        let order_flip = (0..90).any(|i| (a[i + 1] - a[i]) * (b[i + 1] - b[i]) < 0.0);
        ensure(order_flip, || format!("pe and gpe orderings never disagree for series {pe}"))?;
    }
    table.to_csv().map_err(|e| e.to_string())?;
    in_time(start, Duration::from_secs(5))
}

/// Tensor block states in block order, then return each subsystem to its label.
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

fn property_suite() -> Check {
    let start = Instant::now();
    let t = tol();
    let measures: [&dyn Measure; 2] = [&PeConcurrence, &GpeConcurrence];
    let qubit = RegisterLayout::qubits(1).unwrap();
    for seed in 0..100u64 {
        let n = 2 + (seed % 4) as usize;
        let layout = RegisterLayout::qubits(n).unwrap();
        let mut rng = random::rng(seed, 100);
        let s = random::pure_state(&layout, &mut rng).unwrap();
        let perm = random::permutation(n, &mut rng);
        let permuted = s.permute_subsystems(&perm).unwrap();
        let rotated = s.apply_local_unitary(&random::local_unitaries(&layout, &mut rng), &t).unwrap();
        for k in 1..n {
            for m in measures {
                let q: Vec<f64> = [1.5, 2.0, 3.0, 5.0].iter().map(|&p| value(m, &s, p, k)).collect();
                ensure(q.windows(2).all(|w| w[0] <= w[1] + 1e-10), || format!("q-monotone seed {seed}"))?;
                let a: Vec<f64> = [0.0, 0.25, 0.5, 0.9].iter().map(|&p| value(m, &s, p, k)).collect();
                ensure(a.windows(2).all(|w| w[0] + 1e-10 >= w[1]), || format!("alpha-antitone seed {seed}"))?;
                for p in [2.0, 1.0 / 3.0] {
                    let base = value(m, &s, p, k);
                    ensure((value(m, &permuted, p, k) - base).abs() <= 1e-9, || format!("permutation seed {seed}"))?;
                    ensure((value(m, &rotated, p, k) - base).abs() <= 1e-9, || format!("local unitary seed {seed}"))?;
                }
            }
            if k > 1 {
                for p in [2.0, 1.0 / 3.0] {
                    ensure(value(&PeConcurrence, &s, p, k) <= value(&PeConcurrence, &s, p, k - 1), || {
                        format!("k-nesting seed {seed}")
                    })?;
                }
            }
        }

        let k = 1 + (seed as usize / 4) % (n - 1);
        let fam = family(n, k, false).unwrap();
        let chosen = &fam[(seed as usize * 7919) % fam.len()];
        let parts = chosen
            .blocks()
            .iter()
            .map(|b| random::pure_state(&RegisterLayout::qubits(b.len()).unwrap(), &mut rng).unwrap())
            .collect();
        let producible = assemble(n, chosen.blocks(), parts);
        let mut sites = random::permutation(n, &mut rng);
        let rest = sites.split_off(k + 1);
        let mut blocks = vec![sites];
        blocks.extend(rest.iter().map(|&x| vec![x]));
        let ghz = states::ghz(k + 1).unwrap();
        let ghz = ghz.apply_local_unitary(&random::local_unitaries(ghz.layout(), &mut rng), &t).unwrap();
        let mut parts = vec![ghz];
        parts.extend(rest.iter().map(|_| random::pure_state(&qubit, &mut rng).unwrap()));
        let entangled = assemble(n, &blocks, parts);
        for m in measures {
            for p in [2.0, 1.0 / 3.0] {
                let zero = value(m, &producible, p, k);
                ensure(zero <= 1e-9, || format!("{} = {zero} on {k}-producible seed {seed}", m.name()))?;
                let pos = value(m, &entangled, p, k);
                ensure(pos >= 1e-6, || format!("{} = {pos} on entangled seed {seed}", m.name()))?;
            }
        }

        let (n1, n2, k) = [(2, 2, 1), (2, 3, 1), (3, 2, 1), (3, 3, 2)][(seed % 4) as usize];
        let a = random::pure_state(&RegisterLayout::qubits(n1).unwrap(), &mut rng).unwrap();
        let b = random::pure_state(&RegisterLayout::qubits(n2).unwrap(), &mut rng).unwrap();
        let ab = a.tensor(&b).unwrap();
        for p in [2.0, 1.0 / 3.0] {
            let joint = value(&PeConcurrence, &ab, p, k);
            let sum = value(&PeConcurrence, &a, p, k) + value(&PeConcurrence, &b, p, k);
            ensure(joint <= sum + 1e-10, || format!("subadditivity seed {seed}: {joint} > {sum}"))?;
        }
    }
    in_time(start, Duration::from_secs(60))
}

fn random_symmetric(n: usize, seed: u64) -> PureState {
    let layout = RegisterLayout::qubits(n).unwrap();
    let raw = random::pure_state(&layout, &mut random::rng(seed, 200)).unwrap();
    let mut acc = vec![Complex64::new(0.0, 0.0); layout.total_dim()];
    for perm in permutations(n) {
        let p = raw.permute_subsystems(&perm).unwrap();
        acc.iter_mut().zip(p.amplitudes()).for_each(|(a, b)| *a += b);
    }
    PureState::normalized(layout, acc).unwrap()
}

fn pi_suite() -> Check {
    let t = tol();
    for seed in 0..5 {
        let layout = RegisterLayout::qubits(4).unwrap();
        let mut rng = random::rng(seed, 300);
        let a = random::pure_state(&layout, &mut rng).unwrap().to_density();
        let b = random::pure_state(&layout, &mut rng).unwrap().to_density();
        let rho = DensityOperator::mixture(&[(0.4, &a), (0.6, &b)], &t).unwrap();
        let once = pi_project(&rho).unwrap();
        let diff = once.max_abs_diff(&pi_project(&once).unwrap());
        ensure(diff <= 1e-12, || format!("projection not idempotent: {diff}"))?;
    }

    let w = states::w(4).unwrap();
    let param = MeasureParam::new(2.0, 3).unwrap();
    let bound = pi_lower_bound(&w, &PeConcurrence, &param, &PiOptions::default(), &t).map_err(|e| e.to_string())?;
    ensure(bound.certified, || "W4 bound not certified".into())?;
    within("W4 bound", bound.value, value(&PeConcurrence, &w, 2.0, 3), 1e-9)?;

    let mut count = 0;
    for seed in 0..50u64 {
        let n = 2 + (seed % 4) as usize;
        let s = random_symmetric(n, seed);
        let projected = pi_project(&s.to_density()).unwrap();
        let pure = projected.as_pure(&t).unwrap().ok_or("symmetric state has a mixed projection")?;
        for k in 1..n {
            let before = value(&PeConcurrence, &s, 2.0, k);
            let after = value(&PeConcurrence, &pure, 2.0, k);
            ensure(after <= before + 1e-9, || format!("seed {seed}: {after} > {before}"))?;
        }
        count += 1;
    }
    ensure(count >= 50, || "too few PI-pure samples".into())
}

fn roof_suite() -> Check {
    let start = Instant::now();
    let t = tol();
    let opts = RoofOptions::default();
    for (name, s, k) in [("W4", states::w(4).unwrap(), 3), ("phi1", states::phi1(), 2), ("GHZ3", states::ghz(3).unwrap(), 1)] {
        let param = MeasureParam::new(2.0, k).unwrap();
        let est = roof_upper(&s.to_density(), &PeConcurrence, &param, &opts, &t).map_err(|e| e.to_string())?;
        within(name, est.value, value(&PeConcurrence, &s, 2.0, k), 1e-9)?;
    }

    let layout = RegisterLayout::qubits(2).unwrap();
    let identity = DMatrix::from_fn(4, 4, |i, j| Complex64::new(if i == j { 0.25 } else { 0.0 }, 0.0));
    let mixed = DensityOperator::new(layout, identity, &t).unwrap();
    let param = MeasureParam::new(2.0, 1).unwrap();
    let est = roof_upper(&mixed, &PeConcurrence, &param, &opts, &t).map_err(|e| e.to_string())?;
    ensure(est.value <= 1e-6, || format!("maximally mixed: {}", est.value))?;

    let product = states::basis(&[2; 4], &[0; 4]).unwrap();
    let op = DensityOperator::mixture(&[(0.5, &states::phi1().to_density()), (0.5, &product.to_density())], &t).unwrap();
    let param = MeasureParam::new(2.0, 2).unwrap();
    let est = roof_upper(&op, &PeConcurrence, &param, &opts, &t).map_err(|e| e.to_string())?;
    let bound = 0.5 * 6f64.sqrt() / 4.0 + 1e-6;
    ensure(est.value <= bound, || format!("phi1 mixture: {} > {bound}", est.value))?;
    let rebuilt = est.ensemble.reconstruct().frobenius_distance(&op);
    ensure(rebuilt <= 1e-8, || format!("ensemble reconstruction off by {rebuilt}"))?;
    in_time(start, Duration::from_secs(120))
}

fn run_binary(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_kprod"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        format!("`kprod {}` failed: {}", args.join(" "), String::from_utf8_lossy(&out.stderr))
    })?;
    Ok(out.stdout)
}

fn determinism() -> Check {
    let t = tol();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let file = dir.path().join("mixed.json");
    let layout = RegisterLayout::qubits(2).unwrap();
    let mut rng = random::rng(7, 400);
    let a = random::pure_state(&layout, &mut rng).unwrap().to_density();
    let b = random::pure_state(&layout, &mut rng).unwrap().to_density();
    let mixed = DensityOperator::mixture(&[(0.3, &a), (0.7, &b)], &t).unwrap();
    std::fs::write(&file, io::to_json(&StateData::Mixed(mixed))).map_err(|e| e.to_string())?;
    let file = file.to_str().unwrap();

    let commands: [&[&str]; 4] = [
        &["sweep", "--series", "pe:2:2", "--series", "gpe:2:2", "--series", "pe:1/3:2"],
        &["measure", "--builtin", "phi2", "--measure", "gpe", "--k", "2"],
        &["roof", "--state", file, "--k", "1", "--restarts", "6"],
        &["pi", "--builtin", "phitheta:40", "--bound", "--k", "2", "--samples", "3"],
    ];
    for cmd in commands {
        let mut outputs = Vec::new();
        for threads in ["1", "2", "4", "3"] {
            let mut args = vec!["--seed", "11", "--threads", threads];
            args.extend_from_slice(cmd);
            outputs.push(run_binary(&args)?);
        }
        ensure(outputs.windows(2).all(|w| w[0] == w[1]), || format!("`{}` output depends on threads", cmd[0]))?;
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 bounded and genuine partition counts for n = 3..8", partition_counts),
        ("2 four-qubit pe/gpe values", four_qubit_examples),
        ("3 W4 values of all four measures", w4_examples),
        ("4 phitheta sweep: zero start, gpe >= pe, argmin change, order flip", phitheta_sweep),
        ("5 property suite on random pure states", property_suite),
        ("6 permutation-invariant projection and bound", pi_suite),
        ("7 roof upper bounds", roof_suite),
        ("8 output independent of thread count", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(()) => println!("PASS [{name}] ({:.2?})", start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL [{name}] ({:.2?}): {why}", start.elapsed());
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
